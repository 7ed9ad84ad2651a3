#pragma once

#include <array>
#include <vector>

#include "tetduffy/polynomial.hpp"

namespace tetduffy {

inline constexpr int kNumSubdomains = 18;

// Integration limits for the 18 u-space tetrahedra: per subdomain the
// entries (u1min, u1max, u2min, u2max, u3min, u3max), each affine in
// earlier u variables.
struct ULimits {
  std::array<std::array<Polynomial, 6>, kNumSubdomains> rows;
};

// Integration limits for the 18 xi-space tetrahedra: per subdomain the
// entries (L3, U3, L2, U2, L1, U1), each affine in u.  The nested bounds are
//   xi3 in [L3, 1+U3], xi2 in [xi3+L2, 1+U2], xi1 in [xi2+L1, 1+U1].
struct XiLimits {
  std::array<std::array<Polynomial, 6>, kNumSubdomains> rows;
};

struct SubdomainLimits {
  ULimits u;
  XiLimits xi;
};

// One subdomain's Duffy transformation: every map component is exactly
// proportional to w, and the Jacobian factors as w^y_dim * jac(y).
struct DuffySubdomain {
  Polynomial jac;                   // script-J_d(y)
  std::array<Polynomial, 3> u_map;  // u1(w,y), u2(w,y), u3(w,y)
  std::vector<Polynomial> xi_map;   // {} / {xi3} / {xi3, xi2} for n_cv 4/3/2
};

struct DuffyMap {
  int n_cv = 0;
  int y_dim = 0;  // 6 - n_cv
  std::array<DuffySubdomain, kNumSubdomains> subdomains;
};

const SubdomainLimits& subdomain_limits();

// Throws UnsupportedNCV unless n_cv is 2, 3 or 4.
const DuffyMap& duffy_map(int n_cv);

struct PartitionReport {
  long long samples = 0;
  long long boundary_excluded = 0;  // within margin of some subdomain face
  long long exactly_one = 0;
  double fraction_exactly_one = 0.0;  // over non-excluded samples
  double mean_multiplicity = 0.0;
  double measure_estimate = 0.0;  // MC estimate of sum_d vol(subdomain d)
};

// Draws `samples` uniform points of T0 x T0, maps to (u, xi) and counts how
// many subdomains contain each point per the limit tables.
PartitionReport verify_partition(long long samples, unsigned seed,
                                 double margin = 1e-12);

struct DuffyReport {
  int probes = 0;
  double max_jacobian_rel_err = 0.0;
  int jacobian_failures = 0;  // relative error > 1e-6
  int containment_failures = 0;
  bool ok() const { return jacobian_failures == 0 && containment_failures == 0; }
};

// Probes one Duffy map at random (w, y): checks the finite-difference
// Jacobian determinant against w^Y * jac(y) and containment of the image in
// the subdomain's limit inequalities.
DuffyReport verify_duffy(int n_cv, int d, int probes, unsigned seed = 7);

namespace tables_testing {
// Perturbs one stored table coefficient so self-checks must fail; used to
// prove the selftest actually exercises the data.
void tamper_one_coefficient();
void reset();
}  // namespace tables_testing

}  // namespace tetduffy
