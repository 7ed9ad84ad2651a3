#include "tetduffy/tables.hpp"

#include <cmath>
#include <random>
#include <string>

namespace tetduffy {

namespace {

using P = Polynomial;

P pc(double v) { return P::constant(v); }

const P kZero;
const P kOne = pc(1.0);

struct Syms {
  P u1 = P::variable(Var::U1);
  P u2 = P::variable(Var::U2);
  P u3 = P::variable(Var::U3);
  P w = P::variable(Var::W);
  P y1 = P::variable(Var::Y1);
  P y2 = P::variable(Var::Y2);
  P y3 = P::variable(Var::Y3);
  P y4 = P::variable(Var::Y4);
};

ULimits build_u_limits() {
  Syms s;
  const P& u1 = s.u1;
  const P& u2 = s.u2;
  ULimits t;
  auto row = [&](int d, P a, P b, P c, P e, P f, P g) {
    t.rows[d - 1] = {std::move(a), std::move(b), std::move(c),
                     std::move(e), std::move(f), std::move(g)};
  };
  // (u1min, u1max, u2min, u2max, u3min, u3max)
  row(1, kZero, kOne, u1, kOne, u2, kOne);
  row(2, kZero, kOne, u1, kOne, kZero, u2);
  row(3, kZero, kOne, u1, kOne, u2 - kOne, kZero);
  row(4, kZero, kOne, kZero, u1, u2, kOne - u1 + u2);
  row(5, kZero, kOne, kZero, u1, kZero, u2);
  row(6, kZero, kOne, kZero, u1, u1 - kOne, kZero);
  row(7, kZero, kOne, u1 - kOne, kZero, kZero, kOne - u1 + u2);
  row(8, kZero, kOne, u1 - kOne, kZero, u2, kZero);
  row(9, kZero, kOne, u1 - kOne, kZero, u1 - kOne, u2);
  row(10, -kOne, kZero, kZero, u1 + kOne, u2, kOne + u1);
  row(11, -kOne, kZero, kZero, u1 + kOne, kZero, u2);
  row(12, -kOne, kZero, kZero, u1 + kOne, u2 - u1 - kOne, kZero);
  row(13, -kOne, kZero, u1, kZero, kZero, u1 + kOne);
  row(14, -kOne, kZero, u1, kZero, u2, kZero);
  row(15, -kOne, kZero, u1, kZero, u2 - u1 - kOne, u2);
  row(16, -kOne, kZero, -kOne, u1, kZero, kOne + u2);
  row(17, -kOne, kZero, -kOne, u1, u2, kZero);
  row(18, -kOne, kZero, -kOne, u1, -kOne, u2);
  return t;
}

XiLimits build_xi_limits() {
  Syms s;
  const P& u1 = s.u1;
  const P& u2 = s.u2;
  const P& u3 = s.u3;
  XiLimits t;
  auto row = [&](int d, P L3, P U3, P L2, P U2, P L1, P U1) {
    t.rows[d - 1] = {std::move(L3), std::move(U3), std::move(L2),
                     std::move(U2), std::move(L1), std::move(U1)};
  };
  row(1, kZero, -u3, u3 - u2, -u2, u2 - u1, -u1);
  row(2, kZero, -u2, kZero, -u2, u2 - u1, -u1);
  row(3, -u3, -u2, kZero, -u2, u2 - u1, -u1);
  row(4, kZero, u2 - u1 - u3, u3 - u2, -u1, kZero, -u1);
  row(5, kZero, -u1, kZero, -u1, kZero, -u1);
  row(6, -u3, -u1, kZero, -u1, kZero, -u1);
  row(7, kZero, u2 - u1 - u3, u3 - u2, -u1, kZero, -u1);
  row(8, -u3, u2 - u1 - u3, u3 - u2, -u1, kZero, -u1);
  row(9, -u3, -u1, kZero, -u1, kZero, -u1);
  row(10, kZero, u1 - u3, u3 - u2, u1 - u2, u2 - u1, kZero);
  row(11, kZero, u1 - u2, kZero, u1 - u2, u2 - u1, kZero);
  row(12, -u3, u1 - u2, kZero, u1 - u2, u2 - u1, kZero);
  row(13, kZero, u1 - u3, u3 - u2, u1 - u2, u2 - u1, kZero);
  row(14, -u3, u1 - u3, u3 - u2, u1 - u2, u2 - u1, kZero);
  row(15, -u3, u1 - u2, kZero, u1 - u2, u2 - u1, kZero);
  row(16, kZero, u2 - u3, u3 - u2, kZero, kZero, kZero);
  row(17, -u3, u2 - u3, u3 - u2, kZero, kZero, kZero);
  row(18, -u3, kZero, kZero, kZero, kZero, kZero);
  return t;
}

DuffyMap build_duffy_4cv() {
  Syms s;
  const P& w = s.w;
  const P& y1 = s.y1;
  const P& y2 = s.y2;
  const P yb1 = kOne - y1;
  DuffyMap m;
  m.n_cv = 4;
  m.y_dim = 2;
  auto row = [&](int d, P jac, P a, P b, P c) {
    m.subdomains[d - 1] = {std::move(jac), {std::move(a), std::move(b), std::move(c)}, {}};
  };
  row(1, y1, w * y1 * y2, w * y1, w);
  row(2, kOne, w * y1, w, w * y2);
  row(3, y1, w * y1 * y2, w * y1, -(w * yb1));
  row(4, y1, w * y1, w * y1 * y2, w * (kOne - y1 + y1 * y2));
  row(5, y1, w, w * y1, w * y1 * y2);
  row(6, y1, w * y1, w * y1 * y2, -(w * yb1));
  row(7, y1, w * y1 * y2, -(w * y1 * (kOne - y2)), w * yb1);
  row(8, y1, w * yb1, -(w * y1), -(w * y1 * y2));
  row(9, y1, w * y1 * (kOne - y2), -(w * y1 * y2), -(w * (kOne - y1 + y1 * y2)));
  row(10, y1, -(w * y1 * y2), w * y1 * (kOne - y2), w * (kOne - y1 * y2));
  row(11, y1, -(w * y1 * y2), w * (kOne - y1 * y2), w * y1 * (kOne - y2));
  row(12, y1, -(w * y1 * y2), w * y1 * (kOne - y2), -(w * yb1));
  row(13, y1, -(w * y1), -(w * y1 * y2), w * yb1);
  row(14, y1, -w, -(w * y1), -(w * y1 * y2));
  row(15, y1, -(w * y1), -(w * y1 * y2), -(w * (kOne - y1 + y1 * y2)));
  row(16, y1, -(w * y1 * y2), -(w * y1), w * yb1);
  row(17, kOne, -(w * y1), -w, -(w * (kOne - y2)));
  row(18, y1, -(w * y1 * y2), -(w * y1), -w);
  return m;
}

DuffyMap build_duffy_3cv() {
  Syms s;
  const P& w = s.w;
  const P& y1 = s.y1;
  const P& y2 = s.y2;
  const P& y3 = s.y3;
  const P yb1 = kOne - y1;
  const P yb2 = kOne - y2;
  const P yb3 = kOne - y3;
  const P zA = kOne - y1 * y2;
  const P zB = kOne - y1 * y3;
  const P zC = kOne - y2 * y3;
  const P zD = kOne - y2 + y2 * y3;
  const P zE = kOne - y1 + y1 * y2 * y3;
  const P zF = kOne - y1 * y2 + y1 * y2 * y3;
  DuffyMap m;
  m.n_cv = 3;
  m.y_dim = 3;
  auto row = [&](int d, P jac, P a, P b, P c, P x3) {
    m.subdomains[d - 1] = {std::move(jac),
                           {std::move(a), std::move(b), std::move(c)},
                           {std::move(x3)}};
  };
  const P j12 = y1 * y1 * y2;
  row(1, j12, w * y1 * y2 * y3, w * y1 * y2, w * y1, w * yb1);
  row(2, y1 * y1, w * y1 * y2, w * y1, w * y1 * y3, w * yb1);
  row(3, j12, w * y1 * y2 * y3, w * y1 * y2, -(w * y1 * yb2), w * zA);
  row(4, j12, w * y1 * y2, w * y1 * y2 * y3, w * y1 * zD, w * yb1);
  row(5, j12, w * y1, w * y1 * y2, w * y1 * y2 * y3, w * yb1);
  row(6, j12, w * y1 * y2, w * y1 * y2 * y3, -(w * y1 * yb2), w * zA);
  row(7, j12, w * y1 * y2 * y3, -(w * y1 * y2 * yb3), w * y1 * yb2, w * yb1);
  row(8, j12, w * y1 * yb2, -(w * y1 * y2), -(w * y1 * y2 * y3), w * zE);
  row(9, j12, w * y1 * y2 * yb3, -(w * y1 * y2 * y3), -(w * y1 * zD), w * zF);
  row(10, j12, -(w * y1 * y2 * y3), w * y1 * y2 * yb3, w * y1 * zC, w * yb1);
  row(11, j12, -(w * y1 * y2 * y3), w * y1 * zC, w * y1 * y2 * yb3, w * yb1);
  row(12, j12, -(w * y1 * y2 * y3), w * y1 * y2 * yb3, -(w * y1 * yb2), w * zA);
  row(13, j12, -(w * y1 * y2), -(w * y1 * y2 * y3), w * y1 * yb2, w * yb1);
  // Subdomain 14's radial coordinate is xi3 + u3 - u1; its t=1 face is the
  // ordered simplex y1 >= y1y2 >= y1y2y3, which forces the zeta_E entry.
  row(14, j12, -(w * y1), -(w * y1 * y2), -(w * y1 * y2 * y3), w * zE);
  row(15, j12, -(w * y1 * y2), -(w * y1 * y2 * y3), -(w * y1 * zD), w * zF);
  row(16, j12, -(w * y1 * y2 * y3), -(w * y1 * y2), w * y1 * yb2, w * yb1);
  row(17, y1 * y1, -(w * y1 * y2), -(w * y1), -(w * y1 * yb3), w * zB);
  row(18, j12, -(w * y1 * y2 * y3), -(w * y1 * y2), -(w * y1), w);
  return m;
}

DuffyMap build_duffy_2cv() {
  Syms s;
  const P& w = s.w;
  const P& y1 = s.y1;
  const P& y2 = s.y2;
  const P& y3 = s.y3;
  const P& y4 = s.y4;
  const P yb2 = kOne - y2;
  const P yb3 = kOne - y3;
  const P yb4 = kOne - y4;
  const P UA = kOne - y1 * y2;
  const P UB = kOne - y2 * y3;
  const P UC = kOne - y2 * y4;
  const P UD = kOne - y3 * y4;
  const P UE = kOne - y1 * y2 * y3;
  const P UF = kOne - y1 * y2 * y3 * y4;
  const P UG = kOne - y3 + y3 * y4;
  const P UH = kOne - y2 + y2 * y3 * y4;
  const P UI = kOne - y1 * y2 + y1 * y2 * y3;
  const P UJ = kOne - y2 * y3 + y2 * y3 * y4;
  const P UK = kOne - y1 * y2 * y3 + y1 * y2 * y3 * y4;
  DuffyMap m;
  m.n_cv = 2;
  m.y_dim = 4;
  // The tabulated entries carry an extracted factor of w; multiply it back.
  auto row = [&](int d, P jac, P a, P b, P c, P x3, P x2) {
    m.subdomains[d - 1] = {std::move(jac),
                           {w * a, w * b, w * c},
                           {w * x3, w * x2}};
  };
  const P j = y1 * y1 * y1 * y2 * y2 * y3;
  const P j_no_y3 = y1 * y1 * y1 * y2 * y2;
  row(1, j, y1 * y2 * y3 * y4, y1 * y2 * y3, y1 * y2, y1 * yb2, UE);
  row(2, j_no_y3, y1 * y2 * y4, y1 * y2, y1 * y2 * y3, y1 * yb2, UA);
  row(3, j, y1 * y2 * y3 * y4, y1 * y2 * y3, -(y1 * y2 * yb3), y1 * UB, UE);
  row(4, j, y1 * y2 * y3, y1 * y2 * y3 * y4, y1 * y2 * UG, y1 * yb2, UE);
  row(5, j, y1 * y2, y1 * y2 * y3, y1 * y2 * y3 * y4, y1 * yb2, UA);
  row(6, j, y1 * y2 * y3, y1 * y2 * y3 * y4, -(y1 * y2 * yb3), y1 * UB, UE);
  row(7, j, y1 * y2 * y3 * y4, -(y1 * y2 * y3 * yb4), y1 * y2 * yb3, y1 * yb2, UF);
  row(8, j, y1 * y2 * yb3, -(y1 * y2 * y3), -(y1 * y2 * y3 * y4), y1 * UH, UI);
  row(9, j, y1 * y2 * y3 * yb4, -(y1 * y2 * y3 * y4), -(y1 * y2 * UG), y1 * UJ, UK);
  row(10, j, -(y1 * y2 * y3 * y4), y1 * y2 * y3 * yb4, y1 * y2 * UD, y1 * yb2, UE);
  row(11, j, -(y1 * y2 * y3 * y4), y1 * y2 * UD, y1 * y2 * y3 * yb4, y1 * yb2, UA);
  row(12, j, -(y1 * y2 * y3 * y4), y1 * y2 * y3 * yb4, -(y1 * y2 * yb3), y1 * UB, UE);
  row(13, j, -(y1 * y2 * y3), -(y1 * y2 * y3 * y4), y1 * y2 * yb3, y1 * yb2, UK);
  row(14, j, -(y1 * y2), -(y1 * y2 * y3), -(y1 * y2 * y3 * y4), y1 * UH, UI);
  row(15, j, -(y1 * y2 * y3), -(y1 * y2 * y3 * y4), -(y1 * y2 * UG), y1 * UJ, UK);
  row(16, j, -(y1 * y2 * y3 * y4), -(y1 * y2 * y3), y1 * y2 * yb3, y1 * yb2, kOne);
  // Rows 2 and 17 lack the y3 factor: their 5x5 map determinant works out to
  // w^4 y1^3 y2^2, which verify_duffy certifies against finite differences.
  row(17, j_no_y3, -(y1 * y2 * y3), -(y1 * y2), -(y1 * y2 * yb4), y1 * UC, kOne);
  row(18, j, -(y1 * y2 * y3 * y4), -(y1 * y2 * y3), -(y1 * y2), y1, kOne);
  return m;
}

struct TableStore {
  SubdomainLimits limits;
  DuffyMap duffy4, duffy3, duffy2;
};

TableStore build_store() {
  TableStore s;
  s.limits.u = build_u_limits();
  s.limits.xi = build_xi_limits();
  s.duffy4 = build_duffy_4cv();
  s.duffy3 = build_duffy_3cv();
  s.duffy2 = build_duffy_2cv();
  return s;
}

TableStore& store() {
  static TableStore s = build_store();
  return s;
}

}  // namespace

const SubdomainLimits& subdomain_limits() { return store().limits; }

const DuffyMap& duffy_map(int n_cv) {
  switch (n_cv) {
    case 4: return store().duffy4;
    case 3: return store().duffy3;
    case 2: return store().duffy2;
    default:
      throw UnsupportedNCV("duffy_map: n_cv=" + std::to_string(n_cv) +
                           " (supported: 2, 3, 4)");
  }
}

namespace tables_testing {
void tamper_one_coefficient() {
  // Bump the Jacobian polynomial of one mid-table subdomain.
  Syms s;
  store().duffy3.subdomains[4].jac =
      store().duffy3.subdomains[4].jac + pc(1e-3) * s.y1;
}
void reset() { store() = build_store(); }
}  // namespace tables_testing

namespace {

// Affine form c0 + c1 u1 + c2 u2 + c3 u3 extracted once so the Monte-Carlo
// loops do not pay polynomial-evaluation cost.
struct Affine {
  double c[4] = {0, 0, 0, 0};
  double at(const double* u) const {
    return c[0] + c[1] * u[0] + c[2] * u[1] + c[3] * u[2];
  }
};

Affine to_affine(const Polynomial& p) {
  Affine a;
  for (const auto& [e, coeff] : p.terms()) {
    int deg = total_degree(e);
    if (deg == 0) {
      a.c[0] = coeff.real();
      continue;
    }
    bool placed = false;
    for (int k = 0; k < 3 && !placed; ++k) {
      std::size_t idx = static_cast<std::size_t>(Var::U1) + k;
      if (e[idx] == 1 && deg == 1) {
        a.c[1 + k] = coeff.real();
        placed = true;
      }
    }
    if (!placed)
      throw Error("limit table entry is not affine in u: " + p.to_string());
  }
  return a;
}

struct CompiledLimits {
  // [d][entry]
  std::array<std::array<Affine, 6>, kNumSubdomains> u;
  std::array<std::array<Affine, 6>, kNumSubdomains> xi;
};

const CompiledLimits& compiled_limits() {
  static CompiledLimits c = [] {
    CompiledLimits cl;
    const auto& lim = subdomain_limits();
    for (int d = 0; d < kNumSubdomains; ++d)
      for (int j = 0; j < 6; ++j) {
        cl.u[d][j] = to_affine(lim.u.rows[d][j]);
        cl.xi[d][j] = to_affine(lim.xi.rows[d][j]);
      }
    return cl;
  }();
  return c;
}

// Classifies (u, xi) against subdomain d with a signed margin: positive
// margin shrinks the subdomain, negative fattens it.
bool contained(const CompiledLimits& cl, int d, const double* u,
               const double* xi, double margin) {
  const auto& ur = cl.u[d];
  for (int k = 0; k < 3; ++k) {
    double lo = ur[2 * k].at(u), hi = ur[2 * k + 1].at(u);
    if (u[k] < lo + margin || u[k] > hi - margin) return false;
  }
  const auto& xr = cl.xi[d];
  double lo3 = xr[0].at(u), hi3 = 1.0 + xr[1].at(u);
  if (xi[2] < lo3 + margin || xi[2] > hi3 - margin) return false;
  double lo2 = xi[2] + xr[2].at(u), hi2 = 1.0 + xr[3].at(u);
  if (xi[1] < lo2 + margin || xi[1] > hi2 - margin) return false;
  double lo1 = xi[1] + xr[4].at(u), hi1 = 1.0 + xr[5].at(u);
  if (xi[0] < lo1 + margin || xi[0] > hi1 - margin) return false;
  return true;
}

}  // namespace

PartitionReport verify_partition(long long samples, unsigned seed,
                                 double margin) {
  const auto& cl = compiled_limits();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto draw_t0 = [&](double* xi) {
    double a = unif(rng), b = unif(rng), c = unif(rng);
    // descending sort: 1 >= xi1 >= xi2 >= xi3 >= 0
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);
    xi[0] = a;
    xi[1] = b;
    xi[2] = c;
  };

  PartitionReport rep;
  rep.samples = samples;
  long long included = 0, mult_sum = 0;
  for (long long i = 0; i < samples; ++i) {
    double xi[3], eta[3], u[3];
    draw_t0(xi);
    draw_t0(eta);
    for (int k = 0; k < 3; ++k) u[k] = eta[k] - xi[k];

    int strict = 0, loose = 0;
    for (int d = 0; d < kNumSubdomains; ++d) {
      if (contained(cl, d, u, xi, margin)) ++strict;
      if (contained(cl, d, u, xi, -margin)) ++loose;
    }
    if (loose != strict) {
      ++rep.boundary_excluded;
      continue;
    }
    ++included;
    mult_sum += strict;
    if (strict == 1) ++rep.exactly_one;
  }
  if (included > 0) {
    rep.fraction_exactly_one =
        static_cast<double>(rep.exactly_one) / static_cast<double>(included);
    rep.mean_multiplicity =
        static_cast<double>(mult_sum) / static_cast<double>(included);
    // Subdomains partition the (u, xi) image of T0 x T0, whose measure is
    // vol(T0)^2 = 1/36; the mean multiplicity rescales it.
    rep.measure_estimate = rep.mean_multiplicity / 36.0;
  }
  return rep;
}

namespace {

double det_small(double m[5][5], int n) {
  // Gaussian elimination with partial pivoting; n <= 5.
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(m[piv][c], m[col][c]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < n; ++r) {
      double f = m[r][col] / m[col][col];
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace

DuffyReport verify_duffy(int n_cv, int d, int probes, unsigned seed) {
  const DuffyMap& map = duffy_map(n_cv);
  if (d < 1 || d > kNumSubdomains)
    throw Error("verify_duffy: subdomain index " + std::to_string(d));
  const DuffySubdomain& sub = map.subdomains[d - 1];
  const int y_dim = map.y_dim;
  const int n_out = 3 + static_cast<int>(sub.xi_map.size());
  const int n_in = 1 + y_dim;  // (w, y)

  const Var in_vars[5] = {Var::W, Var::Y1, Var::Y2, Var::Y3, Var::Y4};

  auto eval_map = [&](const double* pt, double* out) {
    Assignment a;
    for (int i = 0; i < n_in; ++i) a.set(in_vars[i], pt[i]);
    for (int k = 0; k < 3; ++k) out[k] = sub.u_map[k].eval(a).real();
    for (std::size_t k = 0; k < sub.xi_map.size(); ++k)
      out[3 + k] = sub.xi_map[k].eval(a).real();
  };

  std::mt19937_64 rng(seed + 1000u * static_cast<unsigned>(n_cv) +
                      static_cast<unsigned>(d));
  std::uniform_real_distribution<double> unif(0.05, 0.95);

  const auto& cl = compiled_limits();
  DuffyReport rep;
  rep.probes = probes;
  const double h = 1e-5;

  for (int p = 0; p < probes; ++p) {
    double pt[5];
    for (int i = 0; i < n_in; ++i) pt[i] = unif(rng);

    // central-difference Jacobian matrix: rows = outputs, cols = inputs
    double jac[5][5];
    for (int j = 0; j < n_in; ++j) {
      double lo[5], hi[5], out_lo[5], out_hi[5];
      for (int i = 0; i < n_in; ++i) lo[i] = hi[i] = pt[i];
      lo[j] -= h;
      hi[j] += h;
      eval_map(lo, out_lo);
      eval_map(hi, out_hi);
      for (int i = 0; i < n_out; ++i) jac[i][j] = (out_hi[i] - out_lo[i]) / (2 * h);
    }
    double fd = std::fabs(det_small(jac, n_out));

    Assignment a;
    for (int i = 0; i < n_in; ++i) a.set(in_vars[i], pt[i]);
    double analytic = std::pow(pt[0], y_dim) * std::fabs(sub.jac.eval(a).real());

    double rel = std::fabs(fd - analytic) / std::max(std::fabs(analytic), 1e-300);
    rep.max_jacobian_rel_err = std::max(rep.max_jacobian_rel_err, rel);
    if (rel > 1e-6) ++rep.jacobian_failures;

    // containment of the image point, with roundoff slack
    double img[5];
    eval_map(pt, img);
    double u[3] = {img[0], img[1], img[2]};
    double xi[3] = {1.0, 1.0, 1.0};  // xi1, xi2 dummies satisfy the top rows
    if (n_out >= 4) xi[2] = img[3];
    if (n_out >= 5) xi[1] = img[4];

    bool ok = true;
    const auto& ur = cl.u[d - 1];
    for (int k = 0; k < 3 && ok; ++k) {
      double lo = ur[2 * k].at(u), hi2 = ur[2 * k + 1].at(u);
      ok = (u[k] >= lo - 1e-9) && (u[k] <= hi2 + 1e-9);
    }
    if (ok && n_out >= 4) {
      const auto& xr = cl.xi[d - 1];
      ok = (xi[2] >= xr[0].at(u) - 1e-9) && (xi[2] <= 1.0 + xr[1].at(u) + 1e-9);
      if (ok && n_out >= 5)
        ok = (xi[1] >= xi[2] + xr[2].at(u) - 1e-9) &&
             (xi[1] <= 1.0 + xr[3].at(u) + 1e-9);
    }
    if (!ok) ++rep.containment_failures;
  }
  return rep;
}

}  // namespace tetduffy
