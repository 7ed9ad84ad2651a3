#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tetduffy/errors.hpp"

namespace tetduffy {

enum class KernelFamily { Helmholtz, GradHelmholtzMfie, PowerLaw, One, Custom };

// Scalar kernel K(r) together with its first integrals
//   K_p(X) = int_0^1 w^p K(w X) dw,
// which exist and are nonsingular for p >= singularity_order().
class Kernel {
 public:
  using Complex = std::complex<double>;

  // e^{ikr} / (4 pi r)
  static Kernel helmholtz(Complex k);
  // (ikr - 1) e^{ikr} / (4 pi r^3)
  static Kernel grad_helmholtz_mfie(Complex k);
  // r^exponent, exponent >= -4
  static Kernel power_law(int exponent);
  // K(r) = 1
  static Kernel one();
  // User kernel with a stated singularity order; first integrals fall back
  // to adaptive quadrature.
  static Kernel custom(int singularity_order, std::function<Complex(double)> f,
                       std::string name = "custom");

  KernelFamily family() const { return family_; }
  Complex wavenumber() const { return k_; }
  int power_exponent() const { return power_; }
  int singularity_order() const { return q_; }
  const std::string& name() const { return name_; }

  Complex eval(double r) const;

  Complex first_integral(int p, double X) const;

  // Fills out[0..p_hi-p_lo] with K_p(X) for p in [p_lo, p_hi], sharing the
  // exponential-moment recurrences across orders.
  void first_integrals(int p_lo, int p_hi, double X, Complex* out) const;

  // Direct adaptive quadrature of the defining integral; the fallback path
  // for custom kernels.
  Complex first_integral_numeric(int p, double X, double rel_tol = 1e-13) const;

 private:
  Kernel() = default;

  KernelFamily family_ = KernelFamily::One;
  Complex k_{0.0, 0.0};
  int power_ = 0;
  int q_ = 0;
  std::string name_ = "one";
  std::function<Complex(double)> custom_fn_;
};

// Exponential moments I_m(a) = int_0^1 t^m e^{a t} dt.  The upward recurrence
// I_m = (e^a - m I_{m-1}) / a is stable for |a| >= m; below that a
// monotone-term series (integration by parts: e^a sum_j (-a)^j / prod(m+i))
// takes over.  Both routes are exposed so the switchover can be tested for
// continuity.
std::complex<double> exp_moment(int m, std::complex<double> a);
std::complex<double> exp_moment_series(int m, std::complex<double> a);
std::complex<double> exp_moment_recurrence(int m, std::complex<double> a);

}  // namespace tetduffy
