#ifndef MVCF_ORTHOPOLY_HPP
#define MVCF_ORTHOPOLY_HPP

#include <span>
#include <vector>

#include "mvcf/moments.hpp"

namespace mvcf {

/// Monic orthogonal basis per degree k: coefficient matrix over the graded
/// monomial order (columns are polynomials, top-degree block the identity)
/// plus the Schur complement H_k = L(Phat_k Phat_k^T).
struct MonicBasis {
  int d = 0;
  int degree = 0;
  std::vector<MatX> coeff;  // coeff[k]: r_k x r_k^0
  std::vector<MatX> schur;  // H_k: r_k^0 x r_k^0, symmetric nonsingular
  ProviderPtr provider;
};

MonicBasis build_monic(ProviderPtr provider, int n, Real tol_def = Tolerances{}.def);

/// Basis normalized so that L(P_k P_k^T) = S_k with S_k a diagonal +-1
/// signature. Eigen-factors of each H_k are kept (eigenvalues descending,
/// eigenvector columns with their first significant entry positive) so the
/// construction is reproducible.
struct SignOrthoBasis {
  int d = 0;
  int degree = 0;
  std::vector<MatX> coeff;     // r_k x r_k^0
  std::vector<VecX> sign;      // diagonal of S_k
  std::vector<VecX> eigvals;   // Lambda_k, descending
  std::vector<MatX> eigvecs;   // Q_k columns, sign-fixed
  ProviderPtr provider;

  Real p0() const { return coeff[0](0, 0); }  // value of the constant polynomial
};

SignOrthoBasis sign_orthonormalize(const MonicBasis& monic, Real tol_def = Tolerances{}.def);

enum class Flavor { SignOrthonormal, Monic };

/// Coefficient matrices of the three-term relation
///   x_i S_k F_k = A_{k,i} F_{k+1} + B_{k,i} F_k + C_{k,i} F_{k-1}
/// (S_k = I for the monic flavor), with the right-inverse family D and the
/// combined matrices E, F of the recursive evaluation
///   F_{k+1} = sum_i D_{k,i}^T x_i S_k F_k - E_k F_k - F_k^{rec} F_{k-1}.
struct RecurrenceData {
  Flavor flavor = Flavor::SignOrthonormal;
  int d = 0;
  int levels = 0;                      // A,B,D,E,F stored for k < levels
  std::vector<std::vector<MatX>> A;    // A[k][i]: r_k^0 x r_{k+1}^0
  std::vector<std::vector<MatX>> B;    // B[k][i]: r_k^0 x r_k^0
  std::vector<std::vector<MatX>> C;    // C[k][i]: r_k^0 x r_{k-1}^0; C[0] empty
  std::vector<std::vector<MatX>> D;    // min-norm right-inverse rows of stacked A
  std::vector<MatX> E;                 // E[k] = sum_i D^T B
  std::vector<MatX> F;                 // F[k] = sum_i D^T C; F[0] empty
  std::vector<VecX> sign;              // S_k for k <= levels (ones for monic)
  Real p0 = 1.0L;                      // value of the degree-0 polynomial
};

/// Extract the recurrence by L-products against moment matrices:
/// A_{k,i} = S_k L(x_i P_k P_{k+1}^T) S_{k+1}, B likewise, C = A^T shifted.
/// Verifies rank A_{k,i} = r_k^0 and full rank of the stacked A-matrix.
RecurrenceData recurrence_from_L(const SignOrthoBasis& basis, const MomentProvider& provider,
                                 Real tol_def = Tolerances{}.def);

/// Monic-flavor recurrence: A is the monomial shift, C = H_k L^T H_{k-1}^{-1},
/// B recovered by comparing degree-k coefficients of x_i Phat_k.
RecurrenceData recurrence_monic(const MonicBasis& monic, Real tol_def = Tolerances{}.def);

/// Stacked values (F_0(z), ..., F_m(z)) straight from the coefficient matrices.
std::vector<CVecX> evaluate_stacked(const MonicBasis& basis, int m, std::span<const Complex> z);
std::vector<CVecX> evaluate_stacked(const SignOrthoBasis& basis, int m, std::span<const Complex> z);

/// Same values regenerated from the recurrence alone.
std::vector<CVecX> evaluate_stacked(const RecurrenceData& rec, int m, std::span<const Complex> z);

/// Partial derivative d/dz_j of the stacked values, from the coefficients.
std::vector<CVecX> evaluate_derivative(const SignOrthoBasis& basis, int m,
                                       std::span<const Complex> z, int j);

/// Both evaluation routes, checked against each other within tol (relative).
std::vector<CVecX> evaluate_checked(const SignOrthoBasis& basis, const RecurrenceData& rec, int m,
                                    std::span<const Complex> z, Real tol = Tolerances{}.eval);

/// max_k,j<k |L(P_k P_j^T)| residual against the moment scale; test hook.
Real orthogonality_residual(const SignOrthoBasis& basis, const MomentProvider& provider);

/// Coefficients of x_i * P for P given over monomials of degree <= k.
MatX shift_coefficients(const MatX& C, int d, int k, int coord);

/// L(P Q^T) for coefficient matrices over degrees <= kp, <= kq.
MatX l_product(const MomentProvider& provider, const MatX& P, int kp, const MatX& Q, int kq);

}  // namespace mvcf

#endif
