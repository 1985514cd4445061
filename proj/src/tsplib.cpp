#include "mpdvrp/tsplib.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/text_io.hpp"

namespace mpdvrp {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits "KEY : value" / "KEY: value" / bare "KEY" into key and value.
void split_keyword(const std::string& line, std::string& key, std::string& value) {
  auto colon = line.find(':');
  if (colon == std::string::npos) {
    key = trim(line);
    value.clear();
  } else {
    key = trim(line.substr(0, colon));
    value = trim(line.substr(colon + 1));
  }
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
}

[[noreturn]] void parse_fail(int line_no, const std::string& line, const std::string& why) {
  throw ParseError("line " + std::to_string(line_no) + ": " + why + " ('" + trim(line) + "')");
}

}  // namespace

std::vector<Location> parse_tsplib(std::istream& in, std::vector<std::string>* warnings) {
  auto warn = [warnings](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  std::vector<Location> coords;
  int dimension = -1;
  bool weight_type_seen = false;
  bool in_coords = false;
  int line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;

    if (in_coords && static_cast<int>(coords.size()) < dimension) {
      std::istringstream ls(body);
      std::string id_tok, x_tok, y_tok, extra;
      if (!(ls >> id_tok >> x_tok >> y_tok))
        parse_fail(line_no, line, "expected 'id x y' coordinate record");
      if (ls >> extra) parse_fail(line_no, line, "trailing tokens after coordinate record");
      int id;
      double x, y;
      try {
        id = static_cast<int>(parse_int(id_tok, "node id"));
        x = parse_double(x_tok, "x coordinate");
        y = parse_double(y_tok, "y coordinate");
      } catch (const ParseError& e) {
        parse_fail(line_no, line, e.what());
      }
      coords.push_back({id - 1, x, y});
      continue;
    }

    std::string key, value;
    split_keyword(body, key, value);
    if (key == "DIMENSION") {
      dimension = static_cast<int>(parse_int(value, "DIMENSION"));
      if (dimension < 1) parse_fail(line_no, line, "DIMENSION must be positive");
    } else if (key == "EDGE_WEIGHT_TYPE") {
      weight_type_seen = true;
      if (value != "EUC_2D")
        parse_fail(line_no, line, "unsupported EDGE_WEIGHT_TYPE '" + value + "', only EUC_2D");
    } else if (key == "NODE_COORD_SECTION") {
      if (dimension < 0) parse_fail(line_no, line, "NODE_COORD_SECTION before DIMENSION");
      if (in_coords) parse_fail(line_no, line, "duplicate NODE_COORD_SECTION");
      in_coords = true;
    } else if (key == "EOF") {
      break;
    } else if (key == "NAME" || key == "TYPE" || key == "COMMENT") {
      // informational only
    } else {
      warn("line " + std::to_string(line_no) + ": ignored keyword '" + key + "'");
    }
  }

  if (dimension < 0) throw ParseError("missing DIMENSION header");
  if (!in_coords) throw ParseError("missing NODE_COORD_SECTION");
  if (!weight_type_seen) warn("EDGE_WEIGHT_TYPE not declared, assuming EUC_2D");
  if (static_cast<int>(coords.size()) != dimension)
    throw ParseError("DIMENSION says " + std::to_string(dimension) + " nodes but " +
                     std::to_string(coords.size()) + " coordinates were read");
  return coords;
}

std::vector<Location> parse_tsplib_file(const std::string& path,
                                        std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open TSPLIB file '" + path + "'");
  return parse_tsplib(in, warnings);
}

}  // namespace mpdvrp
