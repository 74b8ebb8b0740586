#ifndef MVCF_FAMILIES_HPP
#define MVCF_FAMILIES_HPP

#include <span>
#include <string>
#include <vector>

#include "mvcf/gauss1d.hpp"
#include "mvcf/moments.hpp"

namespace mvcf {

/// Classical Jacobi polynomial parameters, both > -1.
struct JacobiParams {
  Real a = 0;
  Real b = 0;
};

/// P_n^{(a,b)}(t) with the standard normalization P_n^{(a,b)}(1) = C(n+a, n).
Real jacobi_poly(const JacobiParams& p, int n, Real t);

/// Coefficients (ascending powers) of P_n^{(a,b)}.
VecX jacobi_poly_coefficients(const JacobiParams& p, int n);

/// Even generalized Gegenbauer polynomial of degree 2n for the weight
/// |t|^{2 mu} (1-t^2)^{lambda-1/2}, up to normalization: P_n^{(lambda-1/2,
/// mu-1/2)}(2t^2-1).
Real gen_gegenbauer_even(Real lambda, Real mu, int n, Real t);

/// The sign-changing weight t^{2 mu + 1} (1-t) (1-t^2)^{lambda-1/2} on (-1,1),
/// lambda > -1/2, mu > 0.
struct SignedGegenbauerWeight {
  Real lambda = 0.5L;
  Real mu = 1.0L;
};

/// Monic coefficient vector (ascending powers) of the degree-n orthogonal
/// polynomial of the signed weight. Closed form through the quadratic
/// substitution: even degrees reduce to Jacobi (lambda-1/2, mu+1/2) in 2t^2-1,
/// odd degrees carry the extra factor (1+t) with first parameter lambda+1/2.
VecX signed_gegenbauer_poly(const SignedGegenbauerWeight& w, int n);

/// All n zeros, real and ascending: square-rooted Jacobi zeros, plus -1 for
/// odd degrees.
VecX signed_gegenbauer_zeros(const SignedGegenbauerWeight& w, int n);

/// Values p_0..p_m of the orthonormal family of a positive 1D weight.
VecX orthonormal_values_1d(const MonicRecurrence1D& rec, int m, Real t);

/// Symmetric orthogonal polynomials over a product weight, indexed by a
/// partition (weakly decreasing multi-index). sign_half = -1: permutation sum
/// of products; sign_half = +1: determinant ratio, rejecting coincident
/// coordinates.
Real symmetric_polynomial(const MonicRecurrence1D& base, int sign_half, const MultiIndex& partition,
                          std::span<const Real> x);

/// Partitions of length d with largest part exactly n (the degree-n block of
/// the symmetric families).
std::vector<MultiIndex> partitions_with_top(int d, int n);

/// Residual of the claim that the pushforward pipeline's degree-n orthogonal
/// space coincides with the span of the symmetric polynomials mapped through
/// the elementary symmetric map: largest relative cross-projection defect of
/// sampled value matrices.
Real pushforward_basis_check(const MonicRecurrence1D& base, int d, int sign_half, int n);

// --- weight descriptor grammar (shared by the moments module and the CLI) ---
//   legendre | chebyshev | gegenbauer:lambda=<f>,mu=<f>
//   | symmap:base=<legendre|chebyshev>,d=<int>,sign=<-0.5|+0.5>
//   | table:<path.json>

struct WeightDescriptor {
  enum class Family { Legendre, Chebyshev, Gegenbauer, SymMap, Table };
  Family family = Family::Legendre;
  Real lambda = 0.5L, mu = 1.0L;  // gegenbauer
  std::string base = "chebyshev"; // symmap
  int d = 1;                      // symmap
  int sign_half = -1;             // symmap: -1 => W_{-1/2}, +1 => W_{+1/2}
  std::string path;               // table
  std::string text;               // original descriptor

  bool fixes_dimension() const { return family == Family::SymMap || family == Family::Table; }
};

WeightDescriptor parse_weight_descriptor(const std::string& text);

/// Normalized-mass monic recurrences of the named positive 1D bases.
MonicRecurrence1D base_recurrence_1d(const std::string& name, int count);

/// Provider for a descriptor. `dimension` 0 takes the descriptor's own (or 1);
/// `needed_degree` is the highest moment degree the caller will request and
/// sizes the quadrature where one is used.
ProviderPtr make_provider(const WeightDescriptor& desc, int dimension, int needed_degree);

/// Closed-form 1D providers (unit mass).
ProviderPtr legendre_provider_1d();
ProviderPtr chebyshev_provider_1d();
ProviderPtr gegenbauer_provider_1d(Real lambda, Real mu, int needed_degree);

}  // namespace mvcf

#endif
