#pragma once

#include <cmath>

namespace mpdvrp {

struct Location {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

inline double euclidean_distance(const Location& a, const Location& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace mpdvrp
