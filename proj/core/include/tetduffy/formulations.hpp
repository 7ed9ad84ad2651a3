#pragma once

#include <utility>

#include "tetduffy/geometry.hpp"
#include "tetduffy/kernels.hpp"
#include "tetduffy/polynomial.hpp"

namespace tetduffy {

// Parameters selecting one of the built-in P/K pairings.  q_a/q_b are the
// SWG source/sink vertices; AIM ignores them.
struct FormulationSpec {
  enum class Kind { Aim, VefieSwg, VmfieSwg, Custom };
  Kind kind = Kind::Aim;
  Vec3 q_a{};
  Vec3 q_b{};
  Complex k{0.0, 0.0};
};

// P = 1 with the Helmholtz kernel (pulse basis functions).
std::pair<Polynomial, Kernel> build_p_aim(Complex k);

// P = (x - Q).(x' - Q') - 9/k^2 with the Helmholtz kernel.
// Throws ZeroWavenumber when k = 0.
std::pair<Polynomial, Kernel> build_p_efie(const FormulationSpec& spec);

// P = (x - Q).[(x - x') x (x' - Q')] with the gradient-Helmholtz kernel.
// P vanishes identically at x = x', which lowers the leading w-power and
// desingularizes the 1/r^3 kernel in every n_cv case.
std::pair<Polynomial, Kernel> build_p_mfie(const FormulationSpec& spec);

// Cartesian component polynomials, for assembling custom P's.
std::array<Polynomial, 3> x_symbols();
std::array<Polynomial, 3> xprime_symbols();

}  // namespace tetduffy
