#pragma once

#include <stdexcept>
#include <string>

namespace tetduffy {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- polynomial algebra ----

class DegreeOverflow : public Error {
 public:
  explicit DegreeOverflow(const std::string& what) : Error(what) {}
};

class BoundContainsVariable : public Error {
 public:
  explicit BoundContainsVariable(const std::string& what) : Error(what) {}
};

class UnexpectedVariable : public Error {
 public:
  explicit UnexpectedVariable(const std::string& what) : Error(what) {}
};

class UnassignedVariable : public Error {
 public:
  explicit UnassignedVariable(const std::string& what) : Error(what) {}
};

// ---- geometry ----

class DegenerateTetrahedron : public Error {
 public:
  explicit DegenerateTetrahedron(const std::string& what) : Error(what) {}
};

class NotEnoughCommonVertices : public Error {
 public:
  explicit NotEnoughCommonVertices(const std::string& what) : Error(what) {}
};

// ---- tables ----

class UnsupportedNCV : public Error {
 public:
  explicit UnsupportedNCV(const std::string& what) : Error(what) {}
};

// ---- kernels ----

class NonpositiveRadius : public Error {
 public:
  explicit NonpositiveRadius(const std::string& what) : Error(what) {}
};

class NonpositiveX : public Error {
 public:
  explicit NonpositiveX(const std::string& what) : Error(what) {}
};

class OrderTooLow : public Error {
 public:
  explicit OrderTooLow(const std::string& what) : Error(what) {}
};

class ZeroWavenumber : public Error {
 public:
  explicit ZeroWavenumber(const std::string& what) : Error(what) {}
};

// ---- reduction ----

class SingularityTooStrong : public Error {
 public:
  explicit SingularityTooStrong(const std::string& what) : Error(what) {}
};

class DegenerateGeometry : public Error {
 public:
  explicit DegenerateGeometry(const std::string& what) : Error(what) {}
};

class NegativeXSquared : public Error {
 public:
  explicit NegativeXSquared(const std::string& what) : Error(what) {}
};

// ---- oracles ----

class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& what) : Error(what) {}
};

}  // namespace tetduffy
