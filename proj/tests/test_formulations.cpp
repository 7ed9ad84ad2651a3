#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sample_tets.hpp"
#include "tetduffy/cubature.hpp"
#include "tetduffy/formulations.hpp"
#include "tetduffy/oracle.hpp"

using namespace tetduffy;

namespace {

Assignment cart_point(const Vec3& x, const Vec3& xp) {
  Assignment a;
  a.set(Var::X1, x.x).set(Var::X2, x.y).set(Var::X3, x.z);
  a.set(Var::Xp1, xp.x).set(Var::Xp2, xp.y).set(Var::Xp3, xp.z);
  return a;
}

Vec3 rand_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  return {unif(rng), unif(rng), unif(rng)};
}

}  // namespace

TEST_CASE("scalar-product polynomial") {
  FormulationSpec spec;
  spec.k = 10.0;
  spec.q_a = {0, 0, 0};
  spec.q_b = {0, 0, 0};
  auto [P, K] = build_p_efie(spec);
  CHECK(K.family() == KernelFamily::Helmholtz);

  // x = x' = (1,0,0): 1 - 9/100
  Complex v = P.eval(cart_point({1, 0, 0}, {1, 0, 0}));
  CHECK(std::abs(v - Complex(0.91)) < 1e-15);

  // coefficient bookkeeping
  Exponents x1xp1{};
  x1xp1[static_cast<std::size_t>(Var::X1)] = 1;
  x1xp1[static_cast<std::size_t>(Var::Xp1)] = 1;
  CHECK(P.coefficient(x1xp1) == Complex(1.0));

  FormulationSpec shifted = spec;
  shifted.q_a = {1, 2, 3};
  shifted.q_b = {-1, 0, 2};
  auto [P2, K2] = build_p_efie(shifted);
  Complex want_const = Complex(dot(shifted.q_a, shifted.q_b)) -
                       9.0 / (shifted.k * shifted.k);
  CHECK(std::abs(P2.coefficient(Exponents{}) - want_const) < 1e-14);

  // random-point agreement with a direct evaluation
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    Vec3 x = rand_vec(rng), xp = rand_vec(rng);
    Complex direct = Complex(dot(x - shifted.q_a, xp - shifted.q_b)) -
                     9.0 / (shifted.k * shifted.k);
    Complex via = P2.eval(cart_point(x, xp));
    CHECK(std::abs(via - direct) <= 1e-14 * std::max(1.0, std::abs(direct)));
  }

  FormulationSpec bad;
  bad.k = 0.0;
  CHECK_THROWS_AS(build_p_efie(bad), ZeroWavenumber);
}

TEST_CASE("triple-product polynomial identities") {
  FormulationSpec spec;
  spec.k = 10.0;
  spec.q_a = {0.3, -0.2, 0.9};
  spec.q_b = {-1.1, 0.4, 0.0};
  auto [P, K] = build_p_mfie(spec);
  CHECK(K.family() == KernelFamily::GradHelmholtzMfie);
  // the cubic part of det[x-Q, x-x', x'-Q'] cancels identically, leaving a
  // joint degree-2 polynomial
  CHECK(P.degree() == 2);

  std::mt19937_64 rng(32);
  for (int t = 0; t < 100; ++t) {
    Vec3 x = rand_vec(rng), xp = rand_vec(rng);
    Complex pxy = P.eval(cart_point(x, xp));

    // direct triple product
    Vec3 a = x - spec.q_a, b = x - xp, c = xp - spec.q_b;
    double direct = dot(a, cross(b, c));
    CHECK(std::abs(pxy - Complex(direct)) <= 1e-13 * std::max(1.0, std::fabs(direct)));

    // vanishes on the diagonal
    CHECK(std::abs(P.eval(cart_point(x, x))) <= 1e-13);

    // antisymmetric under swapping the integration points alone
    Complex pyx = P.eval(cart_point(xp, x));
    CHECK(std::abs(pxy + pyx) <= 1e-13 * std::max(1.0, std::abs(pxy)));
  }

  // symmetric under the full (x,Q) <-> (x',Q') exchange
  FormulationSpec swapped;
  swapped.k = spec.k;
  swapped.q_a = spec.q_b;
  swapped.q_b = spec.q_a;
  auto [Ps, Ks] = build_p_mfie(swapped);
  for (int t = 0; t < 20; ++t) {
    Vec3 x = rand_vec(rng), xp = rand_vec(rng);
    Complex fwd = P.eval(cart_point(x, xp));
    Complex rev = Ps.eval(cart_point(xp, x));
    CHECK(std::abs(fwd - rev) <= 1e-13 * std::max(1.0, std::abs(fwd)));
  }

  // diagonal vanishing as a polynomial identity
  std::map<Var, Polynomial> diag;
  diag[Var::Xp1] = Polynomial::variable(Var::X1);
  diag[Var::Xp2] = Polynomial::variable(Var::X2);
  diag[Var::Xp3] = Polynomial::variable(Var::X3);
  Polynomial on_diag = P.substitute(diag);
  CHECK(on_diag.max_coeff_magnitude() <= 1e-14 * P.max_coeff_magnitude());
}

TEST_CASE("triple-product reduction keeps its leeway in every contact case") {
  FormulationSpec spec;
  spec.k = 10.0;
  spec.q_a = sample::apex();
  for (auto [tb, qb] : {std::pair{sample::unit_tet(), Vec3{1, 0, 0}},
                        {sample::face_neighbor_tet(), Vec3{0.3, 0.4, -1.03}},
                        {sample::edge_neighbor_tet(), Vec3{0.3, -0.4, -1.09}}}) {
    spec.q_b = qb;
    auto [P, K] = build_p_mfie(spec);
    TetPair pair = canonicalize_pair(sample::unit_tet(), tb);
    auto ri = build_reduced(pair, P, K);
    CHECK(ri.n_min() >= 1);
    // the n=0 coefficients cancelled within the pruning threshold; verify the
    // structural claim by rebuilding the ledger of dropped magnitudes
    for (const auto& sub : ri.subdomains())
      if (!sub.w_coeffs.empty()) CHECK(sub.w_coeffs.begin()->first >= 1);
  }
}

TEST_CASE("pulse formulation") {
  auto [P, K] = build_p_aim(10.0);
  CHECK(P.terms().size() == 1);
  CHECK(P.coefficient(Exponents{}) == Complex(1.0));
  CHECK(K.family() == KernelFamily::Helmholtz);

  TetPair self = canonicalize_pair(sample::unit_tet(), sample::unit_tet());
  auto ri = build_reduced(self, P, K);
  CHECK(ri.n_min() == 0);
  CHECK(ri.y_dim() == 2);

  // near-static limit: agrees with the 1/(4 pi r) power-law route up to the
  // O(k) phase term i k V V' / (4 pi), and with the brute-force oracle
  // (which only reaches a couple of digits on a singular self pair)
  auto [Ps, Ks] = build_p_aim(1e-8);
  Complex nearly_static = tensor_integrate(build_reduced(self, Ps, Ks), 25, 2);
  Complex coulomb =
      tensor_integrate(build_reduced(self, P, Kernel::power_law(-1)), 25, 2) /
      (4.0 * 3.14159265358979323846);
  CHECK(std::abs(nearly_static.real() - coulomb.real()) <=
        1e-9 * std::abs(coulomb));
  CHECK(std::abs(nearly_static.imag()) <= 1e-10);

  Complex brute = oracle::brute_6d(self, P, Ks, 20, 2);
  CHECK(std::abs(brute - nearly_static) <= 2e-2 * std::abs(nearly_static));
}

TEST_CASE("custom polynomials flow through the same pipeline") {
  auto x = x_symbols();
  auto xp = xprime_symbols();
  // P = (x1 - xp1)^2, a custom kernel r^-1 scaled by hand
  Polynomial P = (x[0] - xp[0]).pow(2);
  Kernel K = Kernel::custom(1, [](double r) { return Complex(1.0 / r); });
  TetPair pair = canonicalize_pair(sample::unit_tet(), sample::face_neighbor_tet());
  auto ri = build_reduced(pair, P, K);
  Complex via_custom = tensor_integrate(ri, 9, 2);
  Complex via_power = tensor_integrate(
      build_reduced(pair, P, Kernel::power_law(-1)), 9, 2);
  CHECK(std::abs(via_custom - via_power) <= 1e-9 * std::abs(via_power));
}
