#ifndef MVCF_GAUSS1D_HPP
#define MVCF_GAUSS1D_HPP

#include <vector>

#include "mvcf/types.hpp"

namespace mvcf {

/// Coefficients of the monic three-term recurrence
///   p_{k+1}(t) = (t - b_k) p_k(t) - c_k p_{k-1}(t),
/// together with the total mass of the weight. c[0] is unused.
struct MonicRecurrence1D {
  Real mu0 = 1.0L;
  std::vector<Real> b, c;
  int count() const { return static_cast<int>(b.size()); }
};

/// Recurrence for the Jacobi weight (1-t)^a (1+t)^b on (-1,1), a,b > -1.
MonicRecurrence1D jacobi_recurrence(Real a, Real b, int count);

/// Same weight rescaled to unit mass.
MonicRecurrence1D jacobi_recurrence_normalized(Real a, Real b, int count);

struct Rule1D {
  VecX nodes;
  VecX weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// m-point Gauss rule by the eigenvalue method on the symmetrized tridiagonal
/// recurrence matrix; exact for polynomials of degree <= 2m-1. Requires all
/// c_k > 0 (positive weight), which holds for the Jacobi family.
Rule1D gauss_rule(const MonicRecurrence1D& rec, int m);

}  // namespace mvcf

#endif
