#include "tetduffy/formulations.hpp"

namespace tetduffy {

std::array<Polynomial, 3> x_symbols() {
  return {Polynomial::variable(Var::X1), Polynomial::variable(Var::X2),
          Polynomial::variable(Var::X3)};
}

std::array<Polynomial, 3> xprime_symbols() {
  return {Polynomial::variable(Var::Xp1), Polynomial::variable(Var::Xp2),
          Polynomial::variable(Var::Xp3)};
}

std::pair<Polynomial, Kernel> build_p_aim(Complex k) {
  return {Polynomial::constant(1.0), Kernel::helmholtz(k)};
}

std::pair<Polynomial, Kernel> build_p_efie(const FormulationSpec& spec) {
  if (spec.k == Complex{0.0, 0.0})
    throw ZeroWavenumber("EFIE requires a nonzero wavenumber for the 9/k^2 term");
  auto x = x_symbols();
  auto xp = xprime_symbols();
  Polynomial p;
  for (int i = 0; i < 3; ++i)
    p = p + (x[i] - Polynomial::constant(spec.q_a[i])) *
                (xp[i] - Polynomial::constant(spec.q_b[i]));
  p = p - Polynomial::constant(9.0 / (spec.k * spec.k));
  return {std::move(p), Kernel::helmholtz(spec.k)};
}

std::pair<Polynomial, Kernel> build_p_mfie(const FormulationSpec& spec) {
  auto x = x_symbols();
  auto xp = xprime_symbols();
  std::array<Polynomial, 3> a, b, c;
  for (int i = 0; i < 3; ++i) {
    a[i] = x[i] - Polynomial::constant(spec.q_a[i]);
    b[i] = x[i] - xp[i];
    c[i] = xp[i] - Polynomial::constant(spec.q_b[i]);
  }
  Polynomial p;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, l = (i + 2) % 3;
    p = p + a[i] * (b[j] * c[l] - b[l] * c[j]);
  }
  return {std::move(p), Kernel::grad_helmholtz_mfie(spec.k)};
}

}  // namespace tetduffy
