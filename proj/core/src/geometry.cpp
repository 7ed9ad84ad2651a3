#include "tetduffy/geometry.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace tetduffy {

static std::array<Vec3, 3> edge_vectors(const Tetrahedron& t) {
  return {t.vertices[1] - t.vertices[0], t.vertices[2] - t.vertices[1],
          t.vertices[3] - t.vertices[2]};
}

double volume(const Tetrahedron& t) {
  auto e = edge_vectors(t);
  return std::fabs(dot(e[0], cross(e[1], e[2]))) / 6.0;
}

double max_edge_length(const Tetrahedron& t) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      m = std::max(m, norm(t.vertices[i] - t.vertices[j]));
  return m;
}

TetPair canonicalize_pair(const Tetrahedron& ta, const Tetrahedron& tb,
                          double tol) {
  if (tol < 0.0)
    tol = 1e-12 * std::max(max_edge_length(ta), max_edge_length(tb));

  const double vol_floor = tol * tol * tol;
  if (volume(ta) <= vol_floor)
    throw DegenerateTetrahedron("first tetrahedron has volume " +
                                std::to_string(volume(ta)));
  if (volume(tb) <= vol_floor)
    throw DegenerateTetrahedron("second tetrahedron has volume " +
                                std::to_string(volume(tb)));

  // Match vertices of ta against tb in max-norm.  Shared vertices are sorted
  // by their index in ta; that fixes the ordering deterministically.
  std::vector<std::pair<int, int>> matches;
  std::array<bool, 4> b_used{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (b_used[j]) continue;
      if (max_norm(ta.vertices[i] - tb.vertices[j]) <= tol) {
        matches.emplace_back(i, j);
        b_used[j] = true;
        break;
      }
    }
  }

  const int n_cv = static_cast<int>(matches.size());
  if (n_cv < 2)
    throw NotEnoughCommonVertices("pair shares " + std::to_string(n_cv) +
                                  " vertices; the reduction needs at least 2");

  std::array<int, 4> order_a{}, order_b{};
  std::array<bool, 4> a_taken{}, b_taken{};
  int pos = 0;
  for (auto [i, j] : matches) {
    order_a[pos] = i;
    order_b[pos] = j;
    a_taken[i] = b_taken[j] = true;
    ++pos;
  }
  for (int i = 0; i < 4; ++i)
    if (!a_taken[i]) order_a[pos++] = i;
  pos = n_cv;
  for (int j = 0; j < 4; ++j)
    if (!b_taken[j]) order_b[pos++] = j;

  TetPair pair;
  pair.n_cv = n_cv;
  for (int i = 0; i < 4; ++i) {
    pair.tet_a.vertices[i] = ta.vertices[order_a[i]];
    pair.tet_b.vertices[i] = tb.vertices[order_b[i]];
  }
  // Snap shared vertices bit-exactly so the leading edge vectors agree.
  for (int i = 0; i < n_cv; ++i) pair.tet_b.vertices[i] = pair.tet_a.vertices[i];

  pair.edges_a = edge_vectors(pair.tet_a);
  pair.edges_b = edge_vectors(pair.tet_b);
  pair.jacobian = 36.0 * volume(pair.tet_a) * volume(pair.tet_b);
  return pair;
}

Polynomial x_component(const TetPair& pair, int i) {
  Polynomial p = Polynomial::constant(pair.tet_a.vertices[0][i]);
  const Var xi[3] = {Var::Xi1, Var::Xi2, Var::Xi3};
  for (int e = 0; e < 3; ++e)
    p = p + Polynomial::variable(xi[e]) * Complex(pair.edges_a[e][i]);
  return p;
}

Polynomial xprime_component(const TetPair& pair, int i) {
  Polynomial p = Polynomial::constant(pair.tet_b.vertices[0][i]);
  const Var xi[3] = {Var::Xi1, Var::Xi2, Var::Xi3};
  const Var u[3] = {Var::U1, Var::U2, Var::U3};
  for (int e = 0; e < 3; ++e) {
    Polynomial eta = Polynomial::variable(xi[e]) + Polynomial::variable(u[e]);
    p = p + eta * Complex(pair.edges_b[e][i]);
  }
  return p;
}

Polynomial quadratic_form(const TetPair& pair) {
  // x - x' = sum_i xi_i (L_i - L'_i) - sum_i u_i L'_i; the leading n_cv-1
  // differences vanish because the shared edge vectors are snapped equal.
  Polynomial form;
  const Var xi[3] = {Var::Xi1, Var::Xi2, Var::Xi3};
  const Var u[3] = {Var::U1, Var::U2, Var::U3};
  for (int comp = 0; comp < 3; ++comp) {
    Polynomial diff;
    for (int e = 0; e < 3; ++e) {
      double da = pair.edges_a[e][comp] - pair.edges_b[e][comp];
      if (da != 0.0)
        diff = diff + Polynomial::variable(xi[e]) * Complex(da);
      diff = diff - Polynomial::variable(u[e]) * Complex(pair.edges_b[e][comp]);
    }
    form = form + diff * diff;
  }
  return form;
}

}  // namespace tetduffy
