#pragma once

#include <stdexcept>
#include <string>

namespace synthlab {

// Invalid argument or precondition violation at the API boundary.
class ArgumentError : public std::invalid_argument {
  public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// A grid or quadrature rule too coarse for the requested band.
class ResolutionError : public std::runtime_error {
  public:
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

// A certificate hypothesis does not hold for the given data.
class HypothesisError : public std::runtime_error {
  public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace synthlab
