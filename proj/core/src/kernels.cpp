#include "tetduffy/kernels.hpp"

#include <cmath>

#include "tetduffy/quad1d.hpp"

namespace tetduffy {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;
using Complex = std::complex<double>;
}  // namespace

Complex exp_moment_series(int m, Complex a) {
  // Repeated integration by parts gives
  //   I_m(a) = e^a sum_j (-a)^j / ((m+1)(m+2)...(m+j+1)),
  // whose terms decay monotonically for |a| <= m+2.  The raw Maclaurin form
  // sum_j a^j/(j!(m+j+1)) passes through terms of size e^|a| before decaying
  // and loses ~|a| digits to cancellation near the switchover.
  Complex sum = 1.0 / static_cast<double>(m + 1);
  Complex term = sum;
  for (int j = 1; j < 512; ++j) {
    term *= -a / static_cast<double>(m + j + 1);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum) && j > 2) break;
  }
  return std::exp(a) * sum;
}

Complex exp_moment_recurrence(int m, Complex a) {
  Complex ea = std::exp(a);
  Complex im = (ea - 1.0) / a;
  for (int j = 1; j <= m; ++j) im = (ea - static_cast<double>(j) * im) / a;
  return im;
}

Complex exp_moment(int m, Complex a) {
  double aa = std::abs(a);
  if (aa < static_cast<double>(m) || aa < 0.5) return exp_moment_series(m, a);
  return exp_moment_recurrence(m, a);
}

namespace {

// Fills im[0..m_max] with I_m(a).  Orders with |a| >= m share the upward
// recurrence; the rest use the series individually.
void exp_moment_batch(int m_max, Complex a, std::vector<Complex>& im) {
  im.resize(m_max + 1);
  double aa = std::abs(a);
  Complex ea{};
  bool have_ea = false;
  for (int m = 0; m <= m_max; ++m) {
    if (aa < static_cast<double>(m) || aa < 0.5) {
      im[m] = exp_moment_series(m, a);
    } else {
      if (!have_ea) {
        ea = std::exp(a);
        have_ea = true;
      }
      im[m] = (m == 0) ? (ea - 1.0) / a
                       : (ea - static_cast<double>(m) * im[m - 1]) / a;
    }
  }
}

}  // namespace

Kernel Kernel::helmholtz(Complex k) {
  if (k == Complex{0.0, 0.0})
    throw ZeroWavenumber("Helmholtz kernel requires a nonzero wavenumber");
  Kernel kern;
  kern.family_ = KernelFamily::Helmholtz;
  kern.k_ = k;
  kern.q_ = 1;
  kern.name_ = "helmholtz";
  return kern;
}

Kernel Kernel::grad_helmholtz_mfie(Complex k) {
  if (k == Complex{0.0, 0.0})
    throw ZeroWavenumber("MFIE kernel requires a nonzero wavenumber");
  Kernel kern;
  kern.family_ = KernelFamily::GradHelmholtzMfie;
  kern.k_ = k;
  kern.q_ = 3;
  kern.name_ = "grad-helmholtz-mfie";
  return kern;
}

Kernel Kernel::power_law(int exponent) {
  if (exponent < -4)
    throw Error("power-law exponent " + std::to_string(exponent) +
                " below -4 is not supported");
  Kernel kern;
  kern.family_ = KernelFamily::PowerLaw;
  kern.power_ = exponent;
  kern.q_ = std::max(0, -exponent);
  kern.name_ = "r^" + std::to_string(exponent);
  return kern;
}

Kernel Kernel::one() {
  Kernel kern;
  kern.family_ = KernelFamily::One;
  kern.q_ = 0;
  kern.name_ = "one";
  return kern;
}

Kernel Kernel::custom(int singularity_order, std::function<Complex(double)> f,
                      std::string name) {
  Kernel kern;
  kern.family_ = KernelFamily::Custom;
  kern.q_ = singularity_order;
  kern.custom_fn_ = std::move(f);
  kern.name_ = std::move(name);
  return kern;
}

Complex Kernel::eval(double r) const {
  if (r <= 0.0)
    throw NonpositiveRadius("kernel " + name_ + " evaluated at r = " +
                            std::to_string(r));
  switch (family_) {
    case KernelFamily::Helmholtz:
      return std::exp(Complex{0.0, 1.0} * k_ * r) / (kFourPi * r);
    case KernelFamily::GradHelmholtzMfie: {
      Complex ikr = Complex{0.0, 1.0} * k_ * r;
      return (ikr - 1.0) * std::exp(ikr) / (kFourPi * r * r * r);
    }
    case KernelFamily::PowerLaw: {
      double v = 1.0;
      int e = power_ >= 0 ? power_ : -power_;
      for (int i = 0; i < e; ++i) v *= r;
      return power_ >= 0 ? v : 1.0 / v;
    }
    case KernelFamily::One:
      return 1.0;
    case KernelFamily::Custom:
      return custom_fn_(r);
  }
  return 0.0;
}

void Kernel::first_integrals(int p_lo, int p_hi, double X, Complex* out) const {
  if (X <= 0.0)
    throw NonpositiveX("first integral of " + name_ + " at X = " +
                       std::to_string(X));
  if (p_lo < q_)
    throw OrderTooLow("first integral K_p of " + name_ + " needs p >= " +
                      std::to_string(q_) + ", got p = " + std::to_string(p_lo));

  switch (family_) {
    case KernelFamily::Helmholtz: {
      std::vector<Complex> im;
      exp_moment_batch(p_hi - 1, Complex{0.0, 1.0} * k_ * X, im);
      for (int p = p_lo; p <= p_hi; ++p)
        out[p - p_lo] = im[p - 1] / (kFourPi * X);
      return;
    }
    case KernelFamily::GradHelmholtzMfie: {
      Complex ikx = Complex{0.0, 1.0} * k_ * X;
      std::vector<Complex> im;
      exp_moment_batch(p_hi - 2, ikx, im);
      double x3 = X * X * X;
      for (int p = p_lo; p <= p_hi; ++p)
        out[p - p_lo] = (ikx * im[p - 2] - im[p - 3]) / (kFourPi * x3);
      return;
    }
    case KernelFamily::PowerLaw: {
      double xs = std::pow(X, power_);
      for (int p = p_lo; p <= p_hi; ++p)
        out[p - p_lo] = xs / static_cast<double>(p + power_ + 1);
      return;
    }
    case KernelFamily::One: {
      for (int p = p_lo; p <= p_hi; ++p)
        out[p - p_lo] = 1.0 / static_cast<double>(p + 1);
      return;
    }
    case KernelFamily::Custom: {
      for (int p = p_lo; p <= p_hi; ++p)
        out[p - p_lo] = first_integral_numeric(p, X);
      return;
    }
  }
}

Complex Kernel::first_integral(int p, double X) const {
  Complex v;
  first_integrals(p, p, X, &v);
  return v;
}

Complex Kernel::first_integral_numeric(int p, double X, double rel_tol) const {
  if (X <= 0.0)
    throw NonpositiveX("first integral of " + name_ + " at X = " +
                       std::to_string(X));
  if (p < q_)
    throw OrderTooLow("first integral K_p of " + name_ + " needs p >= " +
                      std::to_string(q_) + ", got p = " + std::to_string(p));
  return adaptive_integrate(
      [&](double w) {
        double t = std::max(w, 1e-300);
        return std::pow(t, p) * eval(t * X);
      },
      0.0, 1.0, rel_tol);
}

}  // namespace tetduffy
