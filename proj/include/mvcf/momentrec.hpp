#ifndef MVCF_MOMENTREC_HPP
#define MVCF_MOMENTREC_HPP

#include <optional>
#include <span>
#include <vector>

#include "mvcf/cubature.hpp"
#include "mvcf/jacobi_mat.hpp"

namespace mvcf {

/// Exponential polynomial g(x) = sum_z G_z z^x over a simple zero set; the
/// scalar coefficients make g real on integer multi-indices (conjugate nodes
/// carry conjugate coefficients).
struct ExponentialPolynomial {
  int d = 0;
  int n = 0;  // level: nodes are the common zeros of the degree-n basis
  std::vector<CVecX> nodes;
  CVecX coeff;
  Real fit_residual = 0;
  Real vdm_condition = 0;
};

/// Square matrix [z^alpha] with rows over a lower set of size r_{n-1} and one
/// column per node; nonsingularity is what makes the fit uniquely solvable.
struct ThetaVandermonde {
  std::vector<MultiIndex> rows;
  CMatX V;
  Real condition = 0;
};

/// The full triangle |alpha| <= n-1 in graded order.
std::vector<MultiIndex> triangle_lower_set(int d, int n);

ThetaVandermonde theta_vandermonde(const ZeroSet& zeros, const std::vector<MultiIndex>& lower);

/// Solve g(alpha) = prev_alpha over the lower set (default: full triangle of
/// degree n-1). The system is solved with column scaling and partial pivoting;
/// the scaled condition number is reported on the result.
ExponentialPolynomial fit_exponential(const ZeroSet& zeros, const MomentProvider& prev_moments,
                                      const Tolerances& tol = Tolerances{},
                                      const std::vector<MultiIndex>* lower_set = nullptr);

/// Moment provider mu_alpha = scale * sum_z G_z z^alpha with unbounded degree;
/// every access verifies the imaginary residue below 1e-10 before discarding it.
ProviderPtr reconstructed_provider(const ExponentialPolynomial& g, Real scale = 1.0L);

struct CoincidenceReport {
  int n = 0;
  Real max_dev = 0;           // over |alpha| <= 2n-1
  Real scale = 0;             // max |mu_alpha| over the same range
  std::optional<MultiIndex> first_fail;
  Real rel_tol = 0;
  Real dev_at_2n = 0;         // largest deviation in the |alpha| = 2n block
  MultiIndex where_2n;
};

/// Exhaustive comparison over |alpha| <= 2n-1 plus the probe row at 2n that
/// shows the approximation order is maximal but not exceeded.
CoincidenceReport verify_coincidence(const MomentProvider& original,
                                     const MomentProvider& reconstructed, int n,
                                     Real rel_tol = 1e-8L);

/// Rational value sum_z G_z * prod_j z_j / (z_j - node_j); poles are rejected.
Complex rational_eval(const ExponentialPolynomial& g, std::span<const Complex> z);

/// Coefficients of the inverse-power series of the rational form, by expanding
/// each pole factor as a geometric series; entry p matches alphas[p].
struct LaurentTable {
  int d = 0;
  int degree = 0;
  std::vector<MultiIndex> alphas;
  VecX coeff;
};
LaurentTable laurent_coefficients(const ExponentialPolynomial& g, int max_total_degree);

/// One level of the convergent iteration.
struct ConvergentLevel {
  int n = 0;
  ZeroSet zeros;
  ExponentialPolynomial expo;      // on the mu_0-normalized scale
  ProviderPtr mu_n;                // reconstructed moments on the original scale
  std::vector<MatX> G;             // G_{n,i} = D_{n,i}^T S_n
  MatX E, F;
  CommutativityReport comm;
  CoincidenceReport coincidence;
};

struct ConvergentSequence {
  int d = 0;
  Real mu0 = 1;
  SignOrthoBasis basis;            // of the normalized input moments
  RecurrenceData recurrence;
  std::vector<ConvergentLevel> levels;
};

/// Iterate levels 1..N: truncated Jacobi matrices, commutativity gate, common
/// zeros, exponential fit against the previous level's sequence, reconstructed
/// provider and coincidence report. Each level consumes only the previous
/// reconstructed sequence plus the recurrence matrices of the input.
/// Needs input moments through degree 2(N+1).
ConvergentSequence continued_fraction_run(ProviderPtr provider, int N,
                                          const Tolerances& tol = Tolerances{},
                                          std::uint64_t seed = kDefaultSeed);

}  // namespace mvcf

#endif
