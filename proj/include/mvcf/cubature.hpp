#ifndef MVCF_CUBATURE_HPP
#define MVCF_CUBATURE_HPP

#include <span>
#include <string>
#include <vector>

#include "mvcf/gauss1d.hpp"
#include "mvcf/jacobi_mat.hpp"
#include "mvcf/orthopoly.hpp"

namespace mvcf {

/// Reproducing kernel K_n(x,y) = sum_{k<=n} P_k(x)^T S_k conj(P_k(y)).
/// The diagonal K_n(x,x) is real for every complex x.
class KernelEvaluator {
 public:
  KernelEvaluator(const SignOrthoBasis& basis, int n);

  Complex operator()(std::span<const Complex> x, std::span<const Complex> y) const;
  Real diag(std::span<const Complex> x) const;

  int degree() const { return n_; }
  const SignOrthoBasis& basis() const { return *basis_; }

 private:
  const SignOrthoBasis* basis_;
  int n_;
};

struct CubatureRule {
  int d = 0;
  int exact_degree = 0;  // 2n-1
  std::vector<CVecX> nodes;
  VecX weights;
  std::string provenance;  // "zeros" | "closed-form"

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gaussian rule on a complete simple zero set with weights 1/K_n(z,z).
CubatureRule gauss_cubature(const ZeroSet& zeros, const KernelEvaluator& kernel,
                            const Tolerances& tol = Tolerances{});

/// max over |alpha| <= degree of |sum_z w_z z^alpha - mu_alpha|, and the scale
/// max |mu_alpha| to judge it against.
struct ExactnessReport {
  Real max_dev = 0;
  Real scale = 0;
  MultiIndex worst;
};
ExactnessReport cubature_exactness(const CubatureRule& rule, const MomentProvider& provider,
                                   int degree);

/// Value at x of the degree-n interpolation polynomial matching f on the zero
/// set, sum_z f(z) K_n(x,z) / K_n(z,z).
Complex lagrange_interpolate(const ZeroSet& zeros, const KernelEvaluator& kernel,
                             std::span<const Complex> samples, std::span<const Complex> x);

/// Residual of the kernel cross identity in multiplied form,
///   | K_n(x,y) (x_j - conj(y_j)) - ([A_{n,j} P_{n+1}(x)]^T conj(P_n(y))
///                                   - P_n(x)^T [A_{n,j} conj(P_{n+1}(y))]) |.
/// Throws ConfluentRequested when x_j == conj(y_j).
Real christoffel_darboux_residual(const SignOrthoBasis& basis, const RecurrenceData& rec, int n,
                                  std::span<const Complex> x, std::span<const Complex> y, int j);

/// Residual of the confluent form at a real point,
///   | K_n(x,x) - (P_n(x)^T [A_{n,j} d_j P_{n+1}(x)] - [A_{n,j} P_{n+1}(x)]^T d_j P_n(x)) |.
Real christoffel_darboux_confluent_residual(const SignOrthoBasis& basis, const RecurrenceData& rec,
                                            int n, std::span<const Complex> x, int j);

/// Gauss rule for a (possibly sign-changing) 1D weight given by its moments:
/// positive-definite weights go through the symmetric tridiagonal eigenproblem,
/// indefinite ones through the nonsymmetric monic companion matrix with
/// weights 1/K_{m}(t,t). Nodes must come out real and simple.
Rule1D gauss_rule_from_provider(ProviderPtr provider, int m, const Tolerances& tol = Tolerances{});

/// Gaussian cubature for the image of a product weight under the elementary
/// symmetric map, built directly from the 1D rule: for sign -1/2 the nodes are
/// images of weakly decreasing tuples of the m=n rule with multiplicity-divided
/// product weights; for sign +1/2 strictly decreasing tuples of the m=n+d-1
/// rule with the squared Vandermonde factor.
CubatureRule closed_form_symmap_rule(const MonicRecurrence1D& base, int d, int sign_half, int n);

}  // namespace mvcf

#endif
