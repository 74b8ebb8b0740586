#ifndef MVCF_JACOBI_MAT_HPP
#define MVCF_JACOBI_MAT_HPP

#include <cstdint>
#include <tuple>
#include <vector>

#include "mvcf/orthopoly.hpp"

namespace mvcf {

/// Block-tridiagonal truncation of the coordinate multiplication operators:
/// diagonal blocks B_{k,i}, superdiagonal A_{k,i}, subdiagonal C_{k+1,i}
/// (= A_{k,i}^T in the sign-orthonormal flavor), of size r_{n-1} x r_{n-1},
/// together with the block-diagonal signature and the multiplication tables
/// M_i = S J_i representing x_i on polynomials of degree < n modulo the ideal.
struct TruncatedJacobi {
  int d = 0;
  int n = 0;
  Flavor flavor = Flavor::SignOrthonormal;
  std::vector<MatX> J;       // one per coordinate
  std::vector<MatX> mult;    // multiplication tables S J_i
  VecX sign;                 // diag(S_0, ..., S_{n-1})
  std::vector<int> offsets;  // n+1 block offsets
  // boundary data for the last-row condition, present when the recurrence
  // reaches degree n
  std::vector<MatX> top_A;   // A_{n-1,i}
  std::vector<MatX> top_C;   // C_{n-1,i} (monic flavor)
  VecX top_sign;             // S_n

  int size() const { return static_cast<int>(sign.size()); }
};

TruncatedJacobi build_truncated(const RecurrenceData& rec, int n);

/// Full commutator residuals |J_i S J_j - J_j S J_i| for all pairs, plus the
/// last-row block condition that decides maximal common zeros:
/// sign flavor   A_{n-1,i} S_n A_{n-1,j}^T symmetric in (i,j),
/// monic flavor  A_{n-2,i} C_{n-1,j} symmetric in (i,j).
/// Both are reported; the verdict requires both below tol (relative).
struct CommutativityReport {
  int n = 0;
  Real tol = 0;
  Real worst_full = 0;
  Real worst_top = 0;
  bool ok = false;
  std::vector<std::tuple<int, int, Real>> pair_full;  // (i, j, residual)
  std::vector<std::tuple<int, int, Real>> pair_top;
};

CommutativityReport commutativity_report(const TruncatedJacobi& tj, Real tol = Tolerances{}.comm);

/// One common zero of the degree-n basis, read off a joint eigenvector.
struct ZeroPoint {
  CVecX z;
  Real eig_residual = 0;    // worst per-coordinate generalized-eigenpair residual
  Real pn_residual = 0;     // |P_n(z)| relative to the stacked value scale
  Real basis_match = 0;     // eigenvector vs. direct stacked evaluation, relative
  bool suspect = false;     // clustered/defective eigenvalue, possible multiplicity
  bool simple = false;      // set by simplicity_check
  bool pnext_checked = false;
  Real kernel_value = 0;    // K_n(z, z), set by simplicity_check
};

struct ZeroSet {
  int d = 0;
  int n = 0;
  long long expected = 0;  // r_{n-1}
  std::vector<ZeroPoint> points;

  bool complete() const { return static_cast<long long>(points.size()) == expected; }
  bool any_suspect() const {
    for (const auto& p : points)
      if (p.suspect) return true;
    return false;
  }
  bool all_simple() const {
    for (const auto& p : points)
      if (!p.simple) return false;
    return !points.empty();
  }
};

/// Joint generalized eigenvalues of the truncated Jacobi family: a random
/// fixed-seed combination of the multiplication tables is diagonalized, each
/// eigenvector is rescaled to the stacked basis values and the candidate point
/// is read from its degree-1 block, then every coordinate equation
/// J_i xi = z_i S xi and P_n(z) ~ 0 are verified independently.
/// Points come back sorted by (real part lexicographic, imaginary part).
ZeroSet common_zeros(const TruncatedJacobi& tj, const SignOrthoBasis& basis,
                     const Tolerances& tol = Tolerances{}, std::uint64_t seed = kDefaultSeed);

/// Marks each point simple iff its kernel value clears the relative floor and
/// the eigenpair was not flagged; also checks P_{n+1}(z) != 0 when the basis
/// reaches that degree (and records the check as skipped otherwise).
void simplicity_check(ZeroSet& zeros, const SignOrthoBasis& basis,
                      const Tolerances& tol = Tolerances{});

/// Node order used everywhere points are emitted: lexicographic by real parts
/// then by imaginary parts, with coordinates within `fuzz` treated as tied so
/// that rounding noise cannot flip the order between construction routes.
bool node_lex_less(const CVecX& a, const CVecX& b, Real fuzz = 1e-9L);

}  // namespace mvcf

#endif
