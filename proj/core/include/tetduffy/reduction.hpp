#pragma once

#include <map>
#include <vector>

#include "tetduffy/geometry.hpp"
#include "tetduffy/kernels.hpp"
#include "tetduffy/polynomial.hpp"

namespace tetduffy {

// One subdomain's contribution to the reduced integrand.
struct SubdomainIntegrand {
  Polynomial jac;                      // script-J_d(y)
  Polynomial xsq;                      // X_d^2(y), real coefficients
  std::map<int, Polynomial> w_coeffs;  // n -> script-P_dn(y)
  double weight = 1.0;                 // multiplicity; 2 after merging
};

// The fully reduced integrand over the unit hypercube (0,1)^y_dim:
//   value(y) = global_jacobian * sum_d weight_d jac_d(y) *
//              sum_n P_dn(y) K_{n+Y}( sqrt(xsq_d(y)) ).
// Immutable after construction; eval() is pure and safe to call from many
// threads concurrently.
//
// X_d can only vanish where the whole Duffy map (and with it jac_d)
// collapses to the origin, which valid pair geometry keeps off the closed
// cube.  Should an evaluation point still land on such a collapse, the
// subdomain's contribution is taken at its limit, zero; a negative X^2
// beyond roundoff throws.
class ReducedIntegrand {
 public:
  ReducedIntegrand(int y_dim, double global_jacobian, Kernel kernel,
                   std::vector<SubdomainIntegrand> subdomains);

  int y_dim() const { return y_dim_; }
  double global_jacobian() const { return global_jacobian_; }
  const Kernel& kernel() const { return kernel_; }
  const std::vector<SubdomainIntegrand>& subdomains() const {
    return subdomains_;
  }
  // Smallest surviving w-power over all subdomains; 0 for the empty (zero)
  // integrand.
  int n_min() const { return n_min_; }
  bool is_identically_zero() const { return identically_zero_; }

  Complex eval(const double* y) const;
  Complex eval(const std::vector<double>& y) const { return eval(y.data()); }

  // --- compiled form, used by the tensor cubature driver ---
  struct Term {
    std::array<std::uint8_t, 4> e;  // y1..y4 exponents
    Complex c;
  };
  struct RealTerm {
    std::array<std::uint8_t, 4> e;
    double c;
  };
  struct CompiledSubdomain {
    double weight = 1.0;
    int n_lo = 0, n_hi = -1;              // inclusive w-power range
    std::vector<RealTerm> xsq;
    std::vector<std::vector<Term>> pn;    // jac * P_dn, indexed n - n_lo
    double xsq_scale = 0.0;               // max |coefficient| of xsq
  };
  const std::vector<CompiledSubdomain>& compiled() const { return compiled_; }
  int max_y_exponent() const { return max_y_exp_; }

 private:
  void compile();

  int y_dim_;
  double global_jacobian_;
  Kernel kernel_;
  std::vector<SubdomainIntegrand> subdomains_;
  int n_min_ = 0;
  bool identically_zero_ = true;
  std::vector<CompiledSubdomain> compiled_;
  int max_y_exp_ = 0;
};

// Analytic integration of P over the xi variables the kernel does not see,
// using subdomain d's limits (d in 1..18).  P must already be expressed in
// (xi, u) variables.
Polynomial build_pbar(const Polynomial& p_xiu, const TetPair& pair, int d);

// Full reduction pipeline: cartesian substitution, analytic xi integration,
// Duffy substitution, w-collection and X^2 extraction for every subdomain.
// P is given over the cartesian source symbols x1..x3, xp1..xp3.
ReducedIntegrand build_reduced(const TetPair& pair, const Polynomial& P,
                               const Kernel& kern);

// Optional speedup: detects subdomains with numerically identical
// (jac, xsq, w_coeffs) triples and represents each pair once with doubled
// weight.  Results must match the unmerged sum to roundoff.
ReducedIntegrand merge_identical_subdomains(const ReducedIntegrand& ri,
                                            double rel_tol = 1e-13);

}  // namespace tetduffy
