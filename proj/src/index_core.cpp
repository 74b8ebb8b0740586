#include "mvcf/index_core.hpp"

#include <stdexcept>

#include "mvcf/errors.hpp"

namespace mvcf {

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out = a;
  for (std::size_t i = 0; i < out.e.size(); ++i) out.e[i] += b.e[i];
  return out;
}

MultiIndex bumped(const MultiIndex& a, int coord) {
  MultiIndex out = a;
  out.e[static_cast<std::size_t>(coord)] += 1;
  return out;
}

long long poly_space_dim(int d, int n) {
  if (n < 0) return 0;
  long long r = 1;
  for (int i = 1; i <= d; ++i) r = r * (n + i) / i;
  return r;
}

long long homog_space_dim(int d, int n) {
  if (n < 0) return 0;
  return poly_space_dim(d - 1, n);
}

namespace {

// Emit the degree-k block, lexicographically descending with the first
// variable most significant.
void emit_block(int d, int k, std::vector<int>& prefix, int rem, std::vector<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == d - 1) {
    std::vector<int> full = prefix;
    full.push_back(rem);
    out.emplace_back(std::move(full));
    return;
  }
  for (int e = rem; e >= 0; --e) {
    prefix.push_back(e);
    emit_block(d, k, prefix, rem - e, out);
    prefix.pop_back();
  }
  (void)k;
}

}  // namespace

GradedBasis::GradedBasis(int d, int n) : d_(d), n_(n) {
  if (d < 1) throw std::invalid_argument("GradedBasis: dimension must be >= 1");
  if (n < 0) throw std::invalid_argument("GradedBasis: degree must be >= 0");
  for (int k = 0; k <= n; ++k) {
    block_start_.push_back(static_cast<int>(list_.size()));
    std::vector<int> prefix;
    emit_block(d, k, prefix, k, list_);
  }
  block_start_.push_back(static_cast<int>(list_.size()));
  for (int i = 0; i < size(); ++i) pos_[list_[static_cast<std::size_t>(i)].e] = i;
}

int GradedBasis::position(const MultiIndex& alpha) const {
  auto it = pos_.find(alpha.e);
  if (it == pos_.end())
    throw std::invalid_argument("GradedBasis::position: index outside basis");
  return it->second;
}

bool GradedBasis::contains(const MultiIndex& alpha) const { return pos_.count(alpha.e) != 0; }

int GradedBasis::block_size(int k) const {
  return block_start_[static_cast<std::size_t>(k) + 1] - block_start_[static_cast<std::size_t>(k)];
}

CVecX GradedBasis::monomials_at(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != d_)
    throw std::invalid_argument("monomials_at: point dimension mismatch");
  CVecX out(size());
  for (int i = 0; i < size(); ++i) out(i) = multi_power(z, list_[static_cast<std::size_t>(i)]);
  return out;
}

GradedBasis graded_monomials(int d, int n) { return GradedBasis(d, n); }

MatX shift_matrix(int d, int n, int coord) {
  if (coord < 0 || coord >= d) throw std::invalid_argument("shift_matrix: coordinate out of range");
  GradedBasis from(d, n), to(d, n + 1);
  const int r0 = from.block_size(n);
  const int r1 = to.block_size(n + 1);
  MatX L = MatX::Zero(r0, r1);
  const int fs = from.block_start(n);
  const int ts = to.block_start(n + 1);
  for (int r = 0; r < r0; ++r) {
    const MultiIndex tgt = bumped(from.at(fs + r), coord);
    L(r, to.position(tgt) - ts) = 1.0L;
  }
  return L;
}

Complex multi_power(std::span<const Complex> z, const MultiIndex& alpha) {
  if (static_cast<int>(z.size()) != alpha.dim())
    throw std::invalid_argument("multi_power: dimension mismatch");
  Complex out(1.0L, 0.0L);
  for (int j = 0; j < alpha.dim(); ++j) {
    for (int k = 0; k < alpha[j]; ++k) out *= z[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace mvcf
