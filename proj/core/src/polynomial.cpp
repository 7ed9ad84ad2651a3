#include "tetduffy/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace tetduffy {

const char* var_name(Var v) {
  static const char* names[kNumVars] = {
      "xi1", "xi2", "xi3", "u1", "u2", "u3", "w",
      "y1",  "y2",  "y3",  "y4", "x1", "x2", "x3",
      "xp1", "xp2", "xp3"};
  return names[static_cast<std::size_t>(v)];
}

void Polynomial::add_term(const Exponents& e, Complex c) {
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (std::abs(c) > kCoeffPruneThreshold) terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) <= kCoeffPruneThreshold) terms_.erase(it);
}

Polynomial Polynomial::constant(Complex c) {
  Polynomial p;
  p.add_term(Exponents{}, c);
  return p;
}

Polynomial Polynomial::variable(Var v) {
  Polynomial p;
  Exponents e{};
  e[static_cast<std::size_t>(v)] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  // Graded order: the last term has maximal total degree.
  return total_degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(Var v) const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, static_cast<int>(e[static_cast<std::size_t>(v)]));
  return d;
}

bool Polynomial::contains(Var v) const {
  for (const auto& [e, c] : terms_)
    if (e[static_cast<std::size_t>(v)] != 0) return true;
  return false;
}

double Polynomial::max_coeff_magnitude() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Complex Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex{0.0} : it->second;
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  Polynomial r = *this;
  for (const auto& [e, c] : rhs.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  Polynomial r = *this;
  for (const auto& [e, c] : rhs.terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (terms_.empty() || rhs.terms_.empty()) return {};
  int dl = degree(), dr = rhs.degree();
  if (dl + dr > kMaxTotalDegree)
    throw DegreeOverflow("product degree " + std::to_string(dl + dr) +
                         " exceeds cap " + std::to_string(kMaxTotalDegree));
  Polynomial r;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      Exponents e;
      for (std::size_t i = 0; i < kNumVars; ++i)
        e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(Complex scalar) const {
  if (std::abs(scalar) <= kCoeffPruneThreshold) return {};
  Polynomial r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * scalar);
  return r;
}

Polynomial Polynomial::pow(int n) const {
  Polynomial r = constant(1.0);
  for (int i = 0; i < n; ++i) r = r * (*this);
  return r;
}

Polynomial Polynomial::substitute(const std::map<Var, Polynomial>& map) const {
  Polynomial result;
  // Per-variable power caches; exponents are small so plain repeated
  // multiplication is fine.
  std::map<Var, std::vector<Polynomial>> powers;
  for (const auto& [v, img] : map) powers[v] = {Polynomial::constant(1.0), img};

  for (const auto& [e, c] : terms_) {
    Polynomial term = Polynomial::constant(c);
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      Var v = static_cast<Var>(i);
      auto it = map.find(v);
      if (it == map.end()) {
        Exponents single{};
        single[i] = e[i];
        Polynomial passthrough;
        passthrough.add_term(single, 1.0);
        term = term * passthrough;
      } else {
        auto& cache = powers[v];
        while (cache.size() <= e[i]) cache.push_back(cache.back() * it->second);
        term = term * cache[e[i]];
      }
    }
    result = result + term;
  }
  return result;
}

Polynomial Polynomial::integrate(Var v, const Polynomial& lower,
                                 const Polynomial& upper) const {
  if (lower.contains(v) || upper.contains(v))
    throw BoundContainsVariable(std::string("integration bound contains ") +
                                var_name(v));
  const std::size_t vi = static_cast<std::size_t>(v);
  Polynomial anti;
  for (const auto& [e, c] : terms_) {
    Exponents e2 = e;
    if (e2[vi] + 1 > kMaxTotalDegree)
      throw DegreeOverflow("antiderivative degree exceeds cap");
    e2[vi] = static_cast<std::uint8_t>(e2[vi] + 1);
    anti.add_term(e2, c / static_cast<double>(e2[vi]));
  }
  Polynomial at_upper = anti.substitute({{v, upper}});
  Polynomial at_lower = anti.substitute({{v, lower}});
  return at_upper - at_lower;
}

std::map<int, Polynomial> Polynomial::collect_w() const {
  const std::size_t wi = static_cast<std::size_t>(Var::W);
  std::map<int, Polynomial> out;
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(Var::Y1); ++i) {
      if (i != wi && e[i] != 0)
        throw UnexpectedVariable(std::string("collect_w: variable ") +
                                 var_name(static_cast<Var>(i)) +
                                 " has not been eliminated");
    }
    for (std::size_t i = static_cast<std::size_t>(Var::X1); i < kNumVars; ++i) {
      if (e[i] != 0)
        throw UnexpectedVariable(std::string("collect_w: variable ") +
                                 var_name(static_cast<Var>(i)) +
                                 " has not been eliminated");
    }
    Exponents e2 = e;
    int n = e2[wi];
    e2[wi] = 0;
    out[n].add_term(e2, c);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Polynomial Polynomial::shift_down_w(int k) const {
  const std::size_t wi = static_cast<std::size_t>(Var::W);
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e[wi] < k)
      throw UnexpectedVariable("shift_down_w: term with w-exponent " +
                               std::to_string(e[wi]) + " < " +
                               std::to_string(k));
    Exponents e2 = e;
    e2[wi] = static_cast<std::uint8_t>(e2[wi] - k);
    r.add_term(e2, c);
  }
  return r;
}

Complex Polynomial::eval(const Assignment& point) const {
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      Var v = static_cast<Var>(i);
      if (!point.has(v))
        throw UnassignedVariable(std::string("eval: no value for ") +
                                 var_name(v));
      Complex base = point.get(v);
      for (int j = 0; j < e[i]; ++j) term *= base;
    }
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
    os << ")";
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      os << "*" << var_name(static_cast<Var>(i));
      if (e[i] > 1) os << "^" << static_cast<int>(e[i]);
    }
  }
  return os.str();
}

}  // namespace tetduffy
