#pragma once

#include <stdexcept>

namespace mpdvrp {

// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: TSPLIB files, instance files, snapshots, perturbation specs.
class ParseError : public Error {
public:
  using Error::Error;
};

// Structurally impossible or invariant-breaking problem data.
class ValidationError : public Error {
public:
  using Error::Error;
};

// No feasible tour or assignment exists for the requested inputs.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// Tree and instance disagree on task or fleet counts.
class TopologyError : public Error {
public:
  using Error::Error;
};

// Problem exceeds the exact solver's size limits.
class CapError : public Error {
public:
  using Error::Error;
};

// Filesystem-level failure (unreadable or unwritable path).
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace mpdvrp
