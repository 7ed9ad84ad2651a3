#include "tetduffy/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "tetduffy/tables.hpp"

namespace tetduffy {

namespace {

const Var kYVars[4] = {Var::Y1, Var::Y2, Var::Y3, Var::Y4};

// Relative threshold below which a whole w-coefficient polynomial is treated
// as an exact cancellation artifact.
constexpr double kWCoeffDropTol = 1e-13;

}  // namespace

Polynomial build_pbar(const Polynomial& p_xiu, const TetPair& pair, int d) {
  if (d < 1 || d > kNumSubdomains)
    throw Error("build_pbar: subdomain index " + std::to_string(d));
  const auto& row = subdomain_limits().xi.rows[d - 1];
  const Polynomial& L3 = row[0];
  const Polynomial& U3 = row[1];
  const Polynomial& L2 = row[2];
  const Polynomial& U2 = row[3];
  const Polynomial& L1 = row[4];
  const Polynomial& U1 = row[5];
  const Polynomial one = Polynomial::constant(1.0);

  Polynomial r = p_xiu.integrate(Var::Xi1, Polynomial::variable(Var::Xi2) + L1,
                                 one + U1);
  if (pair.n_cv >= 3)
    r = r.integrate(Var::Xi2, Polynomial::variable(Var::Xi3) + L2, one + U2);
  if (pair.n_cv == 4) r = r.integrate(Var::Xi3, L3, one + U3);
  return r;
}

ReducedIntegrand build_reduced(const TetPair& pair, const Polynomial& P,
                               const Kernel& kern) {
  for (const auto& [e, c] : P.terms())
    for (std::size_t i = 0; i < static_cast<std::size_t>(Var::X1); ++i)
      if (e[i] != 0)
        throw Error(std::string("build_reduced: P contains reserved variable ") +
                    var_name(static_cast<Var>(i)));

  // Cartesian components -> affine (xi, u) parameterization of the pair.
  std::map<Var, Polynomial> cart;
  cart[Var::X1] = x_component(pair, 0);
  cart[Var::X2] = x_component(pair, 1);
  cart[Var::X3] = x_component(pair, 2);
  cart[Var::Xp1] = xprime_component(pair, 0);
  cart[Var::Xp2] = xprime_component(pair, 1);
  cart[Var::Xp3] = xprime_component(pair, 2);
  const Polynomial p_xiu = P.substitute(cart);

  const Polynomial qform = quadratic_form(pair);
  const DuffyMap& duffy = duffy_map(pair.n_cv);
  const int y_dim = duffy.y_dim;

  std::vector<SubdomainIntegrand> subs(kNumSubdomains);
  for (int d = 1; d <= kNumSubdomains; ++d) {
    const DuffySubdomain& ds = duffy.subdomains[d - 1];
    std::map<Var, Polynomial> subst;
    subst[Var::U1] = ds.u_map[0];
    subst[Var::U2] = ds.u_map[1];
    subst[Var::U3] = ds.u_map[2];
    if (pair.n_cv <= 3) subst[Var::Xi3] = ds.xi_map[0];
    if (pair.n_cv == 2) subst[Var::Xi2] = ds.xi_map[1];

    SubdomainIntegrand& sub = subs[d - 1];
    sub.jac = ds.jac;
    sub.w_coeffs = build_pbar(p_xiu, pair, d).substitute(subst).collect_w();

    // The form is homogeneous of degree 2 and every substituted component is
    // proportional to w, so exactly w^2 divides out.
    auto xsq_w = qform.substitute(subst).collect_w();
    if (xsq_w.size() != 1 || xsq_w.begin()->first != 2)
      throw Error("build_reduced: X^2 extraction failed for subdomain " +
                  std::to_string(d));
    sub.xsq = xsq_w.begin()->second;
  }

  // Drop w-coefficients that are cancellation residue.  The threshold is
  // relative to the largest coefficient anywhere in the reduction.
  double global_max = 0.0;
  for (const auto& sub : subs)
    for (const auto& [n, poly] : sub.w_coeffs)
      global_max = std::max(global_max, poly.max_coeff_magnitude());
  for (auto& sub : subs)
    for (auto it = sub.w_coeffs.begin(); it != sub.w_coeffs.end();)
      it = (it->second.max_coeff_magnitude() < kWCoeffDropTol * global_max)
               ? sub.w_coeffs.erase(it)
               : std::next(it);

  ReducedIntegrand ri(y_dim, pair.jacobian, kern, std::move(subs));

  if (!ri.is_identically_zero() &&
      ri.n_min() + y_dim < kern.singularity_order())
    throw SingularityTooStrong(
        "kernel " + kern.name() + " has singularity order " +
        std::to_string(kern.singularity_order()) + " but n_cv=" +
        std::to_string(pair.n_cv) + " provides only n_min+Y = " +
        std::to_string(ri.n_min() + y_dim));

  // Interior probes of X^2: any nonpositive value means degenerate geometry
  // (or a table transcription bug, which the selftest would also catch).
  std::mt19937_64 rng(20240901u);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int d = 0; d < kNumSubdomains; ++d) {
    for (int probe = 0; probe < 16; ++probe) {
      Assignment a;
      for (int i = 0; i < y_dim; ++i) a.set(kYVars[i], unif(rng));
      double v = ri.subdomains()[d].xsq.eval(a).real();
      if (!(v > 0.0))
        throw DegenerateGeometry("X^2 is " + std::to_string(v) +
                                 " at an interior point of subdomain " +
                                 std::to_string(d + 1));
    }
  }
  return ri;
}

ReducedIntegrand::ReducedIntegrand(int y_dim, double global_jacobian,
                                   Kernel kernel,
                                   std::vector<SubdomainIntegrand> subdomains)
    : y_dim_(y_dim),
      global_jacobian_(global_jacobian),
      kernel_(std::move(kernel)),
      subdomains_(std::move(subdomains)) {
  n_min_ = 0;
  identically_zero_ = true;
  bool first = true;
  for (const auto& sub : subdomains_) {
    if (sub.w_coeffs.empty()) continue;
    identically_zero_ = false;
    int n = sub.w_coeffs.begin()->first;
    n_min_ = first ? n : std::min(n_min_, n);
    first = false;
  }
  compile();
}

void ReducedIntegrand::compile() {
  compiled_.clear();
  max_y_exp_ = 1;
  for (const auto& sub : subdomains_) {
    CompiledSubdomain cs;
    cs.weight = sub.weight;

    auto flatten = [&](const Polynomial& p) {
      std::vector<Term> out;
      out.reserve(p.terms().size());
      for (const auto& [e, c] : p.terms()) {
        Term t;
        for (int i = 0; i < 4; ++i) {
          t.e[i] = e[static_cast<std::size_t>(kYVars[i])];
          max_y_exp_ = std::max(max_y_exp_, static_cast<int>(t.e[i]));
        }
        t.c = c;
        out.push_back(t);
      }
      return out;
    };

    for (const Term& t : flatten(sub.xsq)) {
      cs.xsq.push_back(RealTerm{t.e, t.c.real()});
      cs.xsq_scale = std::max(cs.xsq_scale, std::fabs(t.c.real()));
    }

    if (!sub.w_coeffs.empty()) {
      cs.n_lo = sub.w_coeffs.begin()->first;
      cs.n_hi = sub.w_coeffs.rbegin()->first;
      cs.pn.resize(cs.n_hi - cs.n_lo + 1);
      for (const auto& [n, poly] : sub.w_coeffs)
        cs.pn[n - cs.n_lo] = flatten(sub.jac * poly);
    }
    compiled_.push_back(std::move(cs));
  }
}

Complex ReducedIntegrand::eval(const double* y) const {
  // Per-variable power tables.
  double pw[4][kMaxTotalDegree + 1];
  for (int i = 0; i < 4; ++i) pw[i][0] = 1.0;
  for (int i = 0; i < y_dim_; ++i)
    for (int e = 1; e <= max_y_exp_; ++e) pw[i][e] = pw[i][e - 1] * y[i];
  auto mono = [&](const std::array<std::uint8_t, 4>& e) {
    double v = 1.0;
    for (int i = 0; i < 4; ++i) v *= pw[i][e[i]];
    return v;
  };

  Complex total = 0.0;
  Complex kvals[kMaxTotalDegree + 8];
  for (const auto& cs : compiled_) {
    if (cs.n_hi < cs.n_lo) continue;

    double xsq = 0.0;
    for (const auto& t : cs.xsq) xsq += t.c * mono(t.e);
    if (xsq <= 1e-14 * cs.xsq_scale) {
      if (xsq < -1e-14 * cs.xsq_scale)
        throw NegativeXSquared("X^2 = " + std::to_string(xsq) +
                               " at an evaluation point");
      continue;  // Duffy map collapsed here; the contribution's limit is 0
    }
    double X = std::sqrt(xsq);

    kernel_.first_integrals(cs.n_lo + y_dim_, cs.n_hi + y_dim_, X, kvals);

    Complex sub_sum = 0.0;
    for (int n = cs.n_lo; n <= cs.n_hi; ++n) {
      const auto& terms = cs.pn[n - cs.n_lo];
      if (terms.empty()) continue;
      Complex pv = 0.0;
      for (const auto& t : terms) pv += t.c * mono(t.e);
      sub_sum += pv * kvals[n - cs.n_lo];
    }
    total += cs.weight * sub_sum;
  }
  return global_jacobian_ * total;
}

namespace {

bool polys_match(const Polynomial& a, const Polynomial& b, double tol_abs) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  auto ia = ta.begin();
  auto ib = tb.begin();
  while (ia != ta.end() || ib != tb.end()) {
    if (ia != ta.end() && ib != tb.end() && ia->first == ib->first) {
      if (std::abs(ia->second - ib->second) > tol_abs) return false;
      ++ia, ++ib;
    } else if (ib == tb.end() ||
               (ia != ta.end() && GradedLex{}(ia->first, ib->first))) {
      if (std::abs(ia->second) > tol_abs) return false;
      ++ia;
    } else {
      if (std::abs(ib->second) > tol_abs) return false;
      ++ib;
    }
  }
  return true;
}

bool subdomains_match(const SubdomainIntegrand& a, const SubdomainIntegrand& b,
                      double rel_tol) {
  double scale = std::max({a.jac.max_coeff_magnitude(),
                           a.xsq.max_coeff_magnitude(), 1e-300});
  for (const auto& [n, p] : a.w_coeffs)
    scale = std::max(scale, p.max_coeff_magnitude());
  const double tol = rel_tol * scale;

  if (!polys_match(a.jac, b.jac, tol)) return false;
  if (!polys_match(a.xsq, b.xsq, tol)) return false;
  auto ia = a.w_coeffs.begin();
  auto ib = b.w_coeffs.begin();
  if (a.w_coeffs.size() != b.w_coeffs.size()) return false;
  for (; ia != a.w_coeffs.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (!polys_match(ia->second, ib->second, tol)) return false;
  }
  return true;
}

}  // namespace

ReducedIntegrand merge_identical_subdomains(const ReducedIntegrand& ri,
                                            double rel_tol) {
  const auto& subs = ri.subdomains();
  std::vector<bool> absorbed(subs.size(), false);
  std::vector<SubdomainIntegrand> merged;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (absorbed[i]) continue;
    SubdomainIntegrand keep = subs[i];
    for (std::size_t j = i + 1; j < subs.size(); ++j) {
      if (absorbed[j] || subs[j].weight != subs[i].weight) continue;
      if (subdomains_match(subs[i], subs[j], rel_tol)) {
        keep.weight += subs[j].weight;
        absorbed[j] = true;
        break;  // pairs only
      }
    }
    merged.push_back(std::move(keep));
  }
  return ReducedIntegrand(ri.y_dim(), ri.global_jacobian(), ri.kernel(),
                          std::move(merged));
}

}  // namespace tetduffy
