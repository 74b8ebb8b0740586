#ifndef MVCF_MOMENTS_HPP
#define MVCF_MOMENTS_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mvcf/errors.hpp"
#include "mvcf/gauss1d.hpp"
#include "mvcf/index_core.hpp"
#include "mvcf/types.hpp"

namespace mvcf {

/// Source of real moments mu_alpha up to a declared reliable degree.
/// Values are memoized so that equal indices always return the identical
/// stored value; the memo table is guarded and idempotent, everything else
/// is immutable after construction.
class MomentProvider {
 public:
  virtual ~MomentProvider() = default;

  int dim() const { return d_; }
  int max_degree() const { return max_degree_; }
  const std::string& source() const { return source_; }

  Real moment(const MultiIndex& alpha) const;
  Real moment0() const { return moment(MultiIndex(std::vector<int>(static_cast<std::size_t>(d_), 0))); }

 protected:
  MomentProvider(int d, int max_degree, std::string source)
      : d_(d), max_degree_(max_degree), source_(std::move(source)) {}
  virtual Real compute(const MultiIndex& alpha) const = 0;

 private:
  int d_;
  int max_degree_;
  std::string source_;
  mutable std::map<std::vector<int>, Real> memo_;
  mutable std::mutex memo_mutex_;
};

using ProviderPtr = std::shared_ptr<const MomentProvider>;

/// Explicit table of moments; anything absent is zero.
class TableProvider : public MomentProvider {
 public:
  TableProvider(int d, int max_degree, std::map<std::vector<int>, Real> entries);

 protected:
  Real compute(const MultiIndex& alpha) const override;

 private:
  std::map<std::vector<int>, Real> entries_;
};

/// Closed-form 1D moment sequence mu_k = fn(k).
class Closed1DProvider : public MomentProvider {
 public:
  Closed1DProvider(std::function<Real(int)> fn, int max_degree, std::string source);

 protected:
  Real compute(const MultiIndex& alpha) const override;

 private:
  std::function<Real(int)> fn_;
};

/// d-fold tensor product of a 1D provider: mu_alpha = prod_i mu1(alpha_i).
class ProductProvider : public MomentProvider {
 public:
  ProductProvider(ProviderPtr base1d, int d);

 protected:
  Real compute(const MultiIndex& alpha) const override;

 private:
  ProviderPtr base_;
};

enum class PushforwardMap { Identity, ElementarySymmetric };

/// Moments by tensor quadrature of a 1D rule. For the elementary-symmetric map,
///   mu_alpha = 1/d! * sum over node tuples of u(x)^alpha * J(x)^p * prod weights,
/// with u = (e_1,...,e_d)(x) and J the Vandermonde determinant; for the identity
/// map plain product moments without the 1/d! factor.
class PushforwardProvider : public MomentProvider {
 public:
  PushforwardProvider(Rule1D rule, PushforwardMap map, int jacobian_power, int d);

 protected:
  Real compute(const MultiIndex& alpha) const override;

 private:
  Rule1D rule_;
  PushforwardMap map_;
  int jacobian_power_;
  std::vector<std::vector<Real>> u_table_;  // per node tuple: u(x) (or x itself)
  std::vector<Real> w_table_;               // per node tuple: weight * J^p (/ d!)
};

ProviderPtr quadrature_pushforward_provider(const Rule1D& rule, PushforwardMap map,
                                            int jacobian_power, int d);

/// Rescaled view mu_alpha -> scale * mu_alpha.
class ScaledProvider : public MomentProvider {
 public:
  ScaledProvider(ProviderPtr base, Real scale);

 protected:
  Real compute(const MultiIndex& alpha) const override;

 private:
  ProviderPtr base_;
  Real scale_;
};

/// Moment matrix M_n = [mu_{alpha+beta}] over the graded basis, with the
/// degree partition used throughout: M_{n-1} top-left, cross block, and the
/// top-degree block M_{n,n}.
struct MomentMatrixSet {
  int d = 0, n = 0;
  MatX full;

  int r_prev() const { return static_cast<int>(poly_space_dim(d, n - 1)); }
  auto prev() const { return full.topLeftCorner(r_prev(), r_prev()); }
  auto cross() const { return full.topRightCorner(r_prev(), full.cols() - r_prev()); }
  auto top() const {
    const int r0 = static_cast<int>(full.cols()) - r_prev();
    return full.bottomRightCorner(r0, r0);
  }
};

MomentMatrixSet moment_matrix(const MomentProvider& provider, int n);

struct DefinitenessRow {
  int n = 0;
  Real determinant = 0;
  Real sv_floor = 0;  // smallest/largest singular value
  bool definite = false;
};

std::vector<DefinitenessRow> definiteness_scan(const MomentProvider& provider, int N,
                                               Real tol_def = Tolerances{}.def);

struct HankelSchurReport {
  int n = 0;
  MatX hstar;      // M_{n-1,n}^T M_{n-1}^{-1} M_{n-1,n}
  Real deviation = 0;
  Real scale = 0;  // max |hstar|
  bool hankel = false;
  // witness pair with alpha+beta == alpha2+beta2 realizing the deviation
  MultiIndex alpha, beta, alpha2, beta2;
};

/// Tests whether the Schur projection of the top block is a (generalized)
/// Hankel matrix, i.e. entries depend on alpha+beta only.
HankelSchurReport hankel_schur_test(const MomentProvider& provider, int n, Real tol);

/// JSON moment-sequence document for all |alpha| <= degree.
std::string moments_to_json(const MomentProvider& provider, int degree);
ProviderPtr table_provider_from_json(const std::string& text);

/// Solve A X = B for symmetric (possibly indefinite) A through its spectral
/// factorization; throws `code` when A is numerically singular relative to tol.
MatX solve_symmetric(const MatX& A, const MatX& B, Real tol, Err code);

}  // namespace mvcf

#endif
