#include "mvcf/gauss1d.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "mvcf/errors.hpp"

namespace mvcf {

MonicRecurrence1D jacobi_recurrence(Real a, Real b, int count) {
  if (a <= -1.0L || b <= -1.0L) throw std::invalid_argument("jacobi_recurrence: need a,b > -1");
  MonicRecurrence1D rec;
  rec.mu0 = std::exp(static_cast<Real>((a + b + 1) * std::log(2.0L)) + std::lgamma(a + 1.0L) +
                     std::lgamma(b + 1.0L) - std::lgamma(a + b + 2.0L));
  rec.b.resize(static_cast<std::size_t>(count));
  rec.c.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const Real s = 2.0L * k + a + b;
    rec.b[static_cast<std::size_t>(k)] =
        (k == 0) ? (b - a) / (a + b + 2.0L) : (b * b - a * a) / (s * (s + 2.0L));
    if (k == 0)
      rec.c[0] = 0.0L;
    else if (k == 1)
      rec.c[1] = 4.0L * (a + 1.0L) * (b + 1.0L) / ((a + b + 2.0L) * (a + b + 2.0L) * (a + b + 3.0L));
    else
      rec.c[static_cast<std::size_t>(k)] =
          4.0L * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0L) * (s - 1.0L));
  }
  return rec;
}

MonicRecurrence1D jacobi_recurrence_normalized(Real a, Real b, int count) {
  MonicRecurrence1D rec = jacobi_recurrence(a, b, count);
  rec.mu0 = 1.0L;
  return rec;
}

Rule1D gauss_rule(const MonicRecurrence1D& rec, int m) {
  if (m < 1) throw std::invalid_argument("gauss_rule: need at least one point");
  if (rec.count() < m)
    fail(Err::Insufficient1DRule, "gauss_rule: recurrence supplies " +
                                      std::to_string(rec.count()) + " coefficients, need " +
                                      std::to_string(m));
  MatX J = MatX::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    J(k, k) = rec.b[static_cast<std::size_t>(k)];
    if (k + 1 < m) {
      const Real ck = rec.c[static_cast<std::size_t>(k) + 1];
      if (!(ck > 0.0L))
        fail(Err::Insufficient1DRule, "gauss_rule: nonpositive c_k, weight is not positive");
      const Real off = std::sqrt(ck);
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<MatX> es(J);
  Rule1D rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(m);
  for (int k = 0; k < m; ++k) {
    const Real v0 = es.eigenvectors()(0, k);
    rule.weights(k) = rec.mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace mvcf
