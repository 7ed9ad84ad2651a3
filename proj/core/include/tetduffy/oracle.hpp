#pragma once

#include "tetduffy/geometry.hpp"
#include "tetduffy/kernels.hpp"
#include "tetduffy/polynomial.hpp"

namespace tetduffy {
// Independent brute-force validators.  Nothing here touches the reduction
// pipeline; these routines certify it from the outside.
namespace oracle {

// Adaptive quadrature of int_0^1 w^p K(w X) dw.
Complex brute_first_integral(const Kernel& kern, int p, double X,
                             double tol = 1e-13);

// Direct 6-D tensor Gauss-Legendre quadrature of the original integral using
// collapsed simplex coordinates per tetrahedron (order <= 24 per dimension).
// Exact for smooth integrands of modest degree; for singular contact expect
// only 2-3 correct digits.
Complex brute_6d(const Tetrahedron& ta, const Tetrahedron& tb,
                 const Polynomial& P, const Kernel& kern, int order,
                 int n_threads = 0);
Complex brute_6d(const TetPair& pair, const Polynomial& P, const Kernel& kern,
                 int order, int n_threads = 0);

// Exact integral over one tetrahedron of a polynomial in the x symbols
// (degree <= 6), via the standard-simplex monomial moment formula.
Complex exact_tet_moment(const Tetrahedron& t, const Polynomial& f);

// Gauss-Legendre rule on [0,1]; exposed for reuse by the CLI fallback path.
struct GLRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GLRule& gauss_legendre(int order);

}  // namespace oracle
}  // namespace tetduffy
