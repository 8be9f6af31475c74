#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace tbgeom {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chart point, energy t or family parameter outside the admissible set.
class DomainError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class SingularMetricError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class DegeneratePlaneError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Split vectors attached to different points of T(M) were combined.
class MismatchedPointError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_point(std::span<const double> x);

}  // namespace tbgeom
