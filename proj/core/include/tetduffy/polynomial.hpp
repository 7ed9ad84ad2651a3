#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "tetduffy/errors.hpp"

namespace tetduffy {

using Complex = std::complex<double>;

// The fixed variable alphabet.  Xi/U/W/Y are the pipeline variables; the
// cartesian source symbols X*/Xp* appear only in user-facing P polynomials
// and are eliminated before any Duffy substitution.
enum class Var : std::uint8_t {
  Xi1, Xi2, Xi3,
  U1, U2, U3,
  W,
  Y1, Y2, Y3, Y4,
  X1, X2, X3,     // components of x
  Xp1, Xp2, Xp3,  // components of x'
};

inline constexpr std::size_t kNumVars = 17;

// Total degree of any polynomial handled by this module.  Legitimate inputs
// stay far below this; hitting the cap signals a pipeline bug.
inline constexpr int kMaxTotalDegree = 32;

// Coefficients smaller than this in magnitude are treated as exact zeros.
inline constexpr double kCoeffPruneThreshold = 1e-300;

const char* var_name(Var v);

using Exponents = std::array<std::uint8_t, kNumVars>;

inline int total_degree(const Exponents& e) {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

// Graded lexicographic monomial order: lower total degree first, ties broken
// lexicographically on the exponent vector.  Fixes summation order.
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

// Point assignment for evaluation.
class Assignment {
 public:
  Assignment& set(Var v, Complex value) {
    values_[static_cast<std::size_t>(v)] = value;
    assigned_[static_cast<std::size_t>(v)] = true;
    return *this;
  }
  bool has(Var v) const { return assigned_[static_cast<std::size_t>(v)]; }
  Complex get(Var v) const { return values_[static_cast<std::size_t>(v)]; }

 private:
  std::array<Complex, kNumVars> values_{};
  std::array<bool, kNumVars> assigned_{};
};

// Sparse multivariate polynomial with complex coefficients over the fixed
// alphabet.  Immutable in practice: all operations return new values.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Complex, GradedLex>;

  Polynomial() = default;  // the zero polynomial

  static Polynomial constant(Complex c);
  static Polynomial variable(Var v);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // total degree; -1 for the zero polynomial
  int degree_in(Var v) const;
  bool contains(Var v) const;
  double max_coeff_magnitude() const;

  Complex coefficient(const Exponents& e) const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(Complex scalar) const;
  friend Polynomial operator*(Complex scalar, const Polynomial& p) {
    return p * scalar;
  }

  Polynomial pow(int n) const;

  // Exact composition: each variable present in `map` is replaced by its
  // image; variables absent from the map pass through unchanged.
  Polynomial substitute(const std::map<Var, Polynomial>& map) const;

  // Definite integral in v from `lower` to `upper`, both free of v.
  Polynomial integrate(Var v, const Polynomial& lower,
                       const Polynomial& upper) const;

  // Splits p = sum_n c_n(y) w^n.  Requires that only W and Y1..Y4 appear.
  std::map<int, Polynomial> collect_w() const;

  // Divides by w^k; every term must carry w-exponent >= k.
  Polynomial shift_down_w(int k) const;

  Complex eval(const Assignment& point) const;

  std::string to_string() const;

  // Adds c * x^e, pruning the term if the result is negligible.
  void add_term(const Exponents& e, Complex c);

 private:
  TermMap terms_;
};

}  // namespace tetduffy
