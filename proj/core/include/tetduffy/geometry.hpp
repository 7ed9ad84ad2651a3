#pragma once

#include <array>
#include <cmath>

#include "tetduffy/polynomial.hpp"

namespace tetduffy {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend Vec3 operator*(double s, const Vec3& v) { return v * s; }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double max_norm(const Vec3& a) {
  return std::max({std::fabs(a.x), std::fabs(a.y), std::fabs(a.z)});
}

struct Tetrahedron {
  std::array<Vec3, 4> vertices;
};

// |det[L1 L2 L3]| / 6 with L_i the consecutive edge vectors.
double volume(const Tetrahedron& t);

double max_edge_length(const Tetrahedron& t);

// A pair of tetrahedra reordered so their shared vertices come first, in the
// same positions in both vertex lists.
struct TetPair {
  Tetrahedron tet_a;
  Tetrahedron tet_b;
  int n_cv = 0;                  // number of common vertices, 2..4
  std::array<Vec3, 3> edges_a;   // L1..L3 of tet_a
  std::array<Vec3, 3> edges_b;   // L1'..L3' of tet_b
  double jacobian = 0.0;         // 36 V V'

  int y_dim() const { return 6 - n_cv; }
};

// Detects shared vertices (max-norm within tol; tol < 0 selects the default
// 1e-12 * max edge length), reorders both tetrahedra so shared vertices come
// first sorted by their index in `ta`, and snaps tet_b's shared vertices onto
// tet_a's so the leading edge vectors agree exactly.
//
// Throws NotEnoughCommonVertices (< 2 shared) or DegenerateTetrahedron.
TetPair canonicalize_pair(const Tetrahedron& ta, const Tetrahedron& tb,
                          double tol = -1.0);

// |x(xi) - x'(xi+u)|^2 as an exact homogeneous degree-2 polynomial in the
// surviving variables: u1..u3 always, plus xi3 (n_cv=3) or xi2,xi3 (n_cv=2).
Polynomial quadratic_form(const TetPair& pair);

// Affine parameterizations x(xi), x'(xi + u) of the two tetrahedra; component
// i in {0,1,2}.  These carry the full xi dependence (including variables the
// distance function does not see).
Polynomial x_component(const TetPair& pair, int i);
Polynomial xprime_component(const TetPair& pair, int i);

}  // namespace tetduffy
