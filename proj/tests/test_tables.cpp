#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tetduffy/tables.hpp"

using namespace tetduffy;

namespace {
Polynomial var(Var v) { return Polynomial::variable(v); }
Polynomial con(double c) { return Polynomial::constant(c); }
}  // namespace

TEST_CASE("u limits rows") {
  const auto& lim = subdomain_limits();
  // d=1: u1 in [0,1], u2 in [u1,1], u3 in [u2,1]
  const auto& r1 = lim.u.rows[0];
  CHECK(r1[0].is_zero());
  CHECK((r1[1] - con(1.0)).is_zero());
  CHECK((r1[2] - var(Var::U1)).is_zero());
  CHECK((r1[3] - con(1.0)).is_zero());
  CHECK((r1[4] - var(Var::U2)).is_zero());
  CHECK((r1[5] - con(1.0)).is_zero());
  // d=10: u1 in [-1,0], u2 in [0, u1+1], u3 in [u2, 1+u1]
  const auto& r10 = lim.u.rows[9];
  CHECK((r10[0] + con(1.0)).is_zero());
  CHECK(r10[1].is_zero());
  CHECK((r10[3] - var(Var::U1) - con(1.0)).is_zero());
  CHECK((r10[5] - con(1.0) - var(Var::U1)).is_zero());
}

TEST_CASE("xi limits rows") {
  const auto& lim = subdomain_limits();
  // d=18: xi3 in [-u3, 1], xi2 in [xi3, 1], xi1 in [xi2, 1]
  const auto& r18 = lim.xi.rows[17];
  CHECK((r18[0] + var(Var::U3)).is_zero());  // L3 = -u3
  CHECK(r18[1].is_zero());                   // U3 = 0
  CHECK(r18[2].is_zero());                   // L2 = 0
  CHECK(r18[3].is_zero());
  CHECK(r18[4].is_zero());
  CHECK(r18[5].is_zero());
}

TEST_CASE("duffy map rows") {
  // n_cv=4, d=2: jac=1, u=(w y1, w, w y2)
  const auto& m4 = duffy_map(4);
  CHECK(m4.y_dim == 2);
  const auto& s42 = m4.subdomains[1];
  CHECK((s42.jac - con(1.0)).is_zero());
  CHECK((s42.u_map[0] - var(Var::W) * var(Var::Y1)).is_zero());
  CHECK((s42.u_map[1] - var(Var::W)).is_zero());
  CHECK((s42.u_map[2] - var(Var::W) * var(Var::Y2)).is_zero());
  CHECK(s42.xi_map.empty());

  // n_cv=3, d=18: jac=y1^2 y2, u=(-w y1y2y3, -w y1y2, -w y1), xi3=w
  const auto& m3 = duffy_map(3);
  CHECK(m3.y_dim == 3);
  const auto& s318 = m3.subdomains[17];
  CHECK((s318.jac - var(Var::Y1).pow(2) * var(Var::Y2)).is_zero());
  Polynomial wy12 = var(Var::W) * var(Var::Y1) * var(Var::Y2);
  CHECK((s318.u_map[0] + wy12 * var(Var::Y3)).is_zero());
  CHECK((s318.u_map[1] + wy12).is_zero());
  CHECK((s318.u_map[2] + var(Var::W) * var(Var::Y1)).is_zero());
  REQUIRE(s318.xi_map.size() == 1);
  CHECK((s318.xi_map[0] - var(Var::W)).is_zero());

  // n_cv=2, d=16: jac=y1^3 y2^2 y3, xi2 = w
  const auto& m2 = duffy_map(2);
  CHECK(m2.y_dim == 4);
  const auto& s216 = m2.subdomains[15];
  CHECK((s216.jac -
         var(Var::Y1).pow(3) * var(Var::Y2).pow(2) * var(Var::Y3)).is_zero());
  REQUIRE(s216.xi_map.size() == 2);
  CHECK((s216.xi_map[1] - var(Var::W)).is_zero());

  CHECK_THROWS_AS(duffy_map(1), UnsupportedNCV);
  CHECK_THROWS_AS(duffy_map(5), UnsupportedNCV);
}

TEST_CASE("every map component is proportional to w") {
  for (int n_cv : {2, 3, 4}) {
    const auto& m = duffy_map(n_cv);
    for (const auto& sub : m.subdomains) {
      for (const auto& comp : sub.u_map) {
        Polynomial reduced = comp.shift_down_w(1);  // throws if w-degree < 1
        CHECK(!reduced.contains(Var::W));
      }
      for (const auto& comp : sub.xi_map) {
        Polynomial reduced = comp.shift_down_w(1);
        CHECK(!reduced.contains(Var::W));
      }
    }
  }
}

TEST_CASE("w=0 collapses every subdomain image to the origin") {
  for (int n_cv : {2, 3, 4}) {
    const auto& m = duffy_map(n_cv);
    Assignment a;
    a.set(Var::W, 0.0).set(Var::Y1, 0.37).set(Var::Y2, 0.81)
        .set(Var::Y3, 0.55).set(Var::Y4, 0.23);
    for (const auto& sub : m.subdomains) {
      for (const auto& comp : sub.u_map) CHECK(std::abs(comp.eval(a)) == 0.0);
      for (const auto& comp : sub.xi_map) CHECK(std::abs(comp.eval(a)) == 0.0);
    }
  }
}

TEST_CASE("partition of the relative-coordinate domain") {
  PartitionReport rep = verify_partition(200000, 987654);
  CHECK(rep.fraction_exactly_one >= 0.999);
  CHECK(rep.mean_multiplicity == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.measure_estimate == doctest::Approx(1.0 / 36.0).epsilon(1e-3));
}

TEST_CASE("duffy jacobian and containment certification") {
  for (int n_cv : {2, 3, 4}) {
    for (int d = 1; d <= kNumSubdomains; ++d) {
      DuffyReport rep = verify_duffy(n_cv, d, 100);
      INFO("n_cv=", n_cv, " d=", d, " maxerr=", rep.max_jacobian_rel_err);
      CHECK(rep.ok());
      CHECK(rep.max_jacobian_rel_err <= 1e-6);
    }
  }
}

TEST_CASE("tampering with a table coefficient breaks the certification") {
  tables_testing::tamper_one_coefficient();
  DuffyReport rep = verify_duffy(3, 5, 50);
  CHECK(!rep.ok());
  tables_testing::reset();
  DuffyReport rep2 = verify_duffy(3, 5, 50);
  CHECK(rep2.ok());
}
