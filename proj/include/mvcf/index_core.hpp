#ifndef MVCF_INDEX_CORE_HPP
#define MVCF_INDEX_CORE_HPP

#include <map>
#include <span>
#include <vector>

#include "mvcf/types.hpp"

namespace mvcf {

/// Exponent vector of a monomial x^alpha; entries are nonnegative.
struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}
  MultiIndex(std::initializer_list<int> exps) : e(exps) {}

  int dim() const { return static_cast<int>(e.size()); }
  int degree() const {
    int s = 0;
    for (int v : e) s += v;
    return s;
  }
  int operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
  bool operator==(const MultiIndex& o) const { return e == o.e; }
  auto operator<=>(const MultiIndex& o) const = default;
};

MultiIndex add(const MultiIndex& a, const MultiIndex& b);
MultiIndex bumped(const MultiIndex& a, int coord);  // a + e_i

/// dim of polynomials of total degree <= n in d variables, C(n+d, d).
long long poly_space_dim(int d, int n);
/// dim of homogeneous polynomials of degree n, C(n+d-1, d-1).
long long homog_space_dim(int d, int n);

/// All monomials of total degree <= n in d variables, ordered by total degree
/// ascending and lexicographically descending (x1 before x2 before ...) inside
/// each degree block. Every matrix in the toolkit indexes rows and columns by
/// this order, so it is fixed once and for all here.
class GradedBasis {
 public:
  GradedBasis(int d, int n);

  int dim() const { return d_; }
  int degree() const { return n_; }
  int size() const { return static_cast<int>(list_.size()); }
  const MultiIndex& at(int pos) const { return list_[static_cast<std::size_t>(pos)]; }
  const std::vector<MultiIndex>& all() const { return list_; }

  /// Position of alpha in the order; throws if |alpha| > n or dim mismatch.
  int position(const MultiIndex& alpha) const;
  bool contains(const MultiIndex& alpha) const;

  /// First position of the degree-k block.
  int block_start(int k) const { return block_start_[static_cast<std::size_t>(k)]; }
  int block_size(int k) const;

  /// Monomial values [z^alpha : |alpha| <= n] stacked in basis order.
  CVecX monomials_at(std::span<const Complex> z) const;

 private:
  int d_, n_;
  std::vector<MultiIndex> list_;
  std::vector<int> block_start_;
  std::map<std::vector<int>, int> pos_;
};

GradedBasis graded_monomials(int d, int n);

/// The 0/1 matrix L_{n,i} with one 1 per row mapping the degree-(n+1) monomial
/// block to x_i times the degree-n block: row alpha has its 1 at column alpha + e_i.
MatX shift_matrix(int d, int n, int coord);

/// z^alpha with the empty product equal to 1; zero bases with zero exponent are skipped.
Complex multi_power(std::span<const Complex> z, const MultiIndex& alpha);

}  // namespace mvcf

#endif
