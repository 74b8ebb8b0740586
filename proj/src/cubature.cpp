#include "mvcf/cubature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

namespace mvcf {

KernelEvaluator::KernelEvaluator(const SignOrthoBasis& basis, int n) : basis_(&basis), n_(n) {
  if (n > basis.degree)
    fail(Err::IncompleteRecurrence, "KernelEvaluator: basis not built through degree " + std::to_string(n));
}

Complex KernelEvaluator::operator()(std::span<const Complex> x, std::span<const Complex> y) const {
  const auto vx = evaluate_stacked(*basis_, n_, x);
  const auto vy = evaluate_stacked(*basis_, n_, y);
  Complex acc(0.0L, 0.0L);
  for (int k = 0; k <= n_; ++k) {
    const VecX& S = basis_->sign[static_cast<std::size_t>(k)];
    const auto& a = vx[static_cast<std::size_t>(k)];
    const auto& b = vy[static_cast<std::size_t>(k)];
    for (int j = 0; j < a.size(); ++j) acc += a(j) * S(j) * std::conj(b(j));
  }
  return acc;
}

Real KernelEvaluator::diag(std::span<const Complex> x) const {
  const auto vx = evaluate_stacked(*basis_, n_, x);
  Real acc = 0.0L;
  for (int k = 0; k <= n_; ++k) {
    const VecX& S = basis_->sign[static_cast<std::size_t>(k)];
    const auto& a = vx[static_cast<std::size_t>(k)];
    for (int j = 0; j < a.size(); ++j) acc += S(j) * std::norm(a(j));
  }
  return acc;
}

CubatureRule gauss_cubature(const ZeroSet& zeros, const KernelEvaluator& kernel,
                            const Tolerances& tol) {
  if (!zeros.complete() || zeros.any_suspect())
    fail(Err::IncompleteZeroSet,
         "gauss_cubature: zero set has " + std::to_string(zeros.points.size()) + " of " +
             std::to_string(zeros.expected) + " points" +
             (zeros.any_suspect() ? " (with multiplicity suspects)" : ""));
  CubatureRule rule;
  rule.d = zeros.d;
  rule.exact_degree = 2 * zeros.n - 1;
  rule.provenance = "zeros";
  rule.weights.resize(static_cast<int>(zeros.points.size()));
  int idx = 0;
  for (const auto& pt : zeros.points) {
    std::vector<Complex> z(pt.z.data(), pt.z.data() + pt.z.size());
    const Real Kzz = kernel.diag(z);
    const auto vals = evaluate_stacked(kernel.basis(), zeros.n, z);
    Real abs2 = 0.0L;
    for (const auto& v : vals) abs2 += v.squaredNorm();
    if (std::abs(Kzz) <= tol.kernel * abs2)
      fail(Err::ZeroKernelValue, "gauss_cubature: kernel vanishes at a node");
    rule.nodes.push_back(pt.z);
    rule.weights(idx++) = 1.0L / Kzz;
  }
  return rule;
}

ExactnessReport cubature_exactness(const CubatureRule& rule, const MomentProvider& provider,
                                   int degree) {
  const GradedBasis basis(provider.dim(), degree);
  ExactnessReport rep;
  for (int p = 0; p < basis.size(); ++p) {
    const MultiIndex& a = basis.at(p);
    Complex acc(0.0L, 0.0L);
    for (int k = 0; k < rule.size(); ++k) {
      std::vector<Complex> z(rule.nodes[static_cast<std::size_t>(k)].data(),
                             rule.nodes[static_cast<std::size_t>(k)].data() +
                                 rule.nodes[static_cast<std::size_t>(k)].size());
      acc += rule.weights(k) * multi_power(z, a);
    }
    const Real mu = provider.moment(a);
    rep.scale = std::max(rep.scale, std::abs(mu));
    const Real dev = std::abs(acc - Complex(mu, 0.0L));
    if (dev > rep.max_dev) {
      rep.max_dev = dev;
      rep.worst = a;
    }
  }
  return rep;
}

Complex lagrange_interpolate(const ZeroSet& zeros, const KernelEvaluator& kernel,
                             std::span<const Complex> samples, std::span<const Complex> x) {
  if (!zeros.complete() || zeros.any_suspect())
    fail(Err::IncompleteZeroSet, "lagrange_interpolate: zero set incomplete");
  if (samples.size() != zeros.points.size())
    throw std::invalid_argument("lagrange_interpolate: one sample per node required");
  Complex acc(0.0L, 0.0L);
  for (std::size_t k = 0; k < zeros.points.size(); ++k) {
    const auto& pt = zeros.points[k];
    std::vector<Complex> z(pt.z.data(), pt.z.data() + pt.z.size());
    const Real Kzz = kernel.diag(z);
    if (Kzz == 0.0L) fail(Err::ZeroKernelValue, "lagrange_interpolate: kernel vanishes at a node");
    acc += samples[k] * kernel(x, z) / Kzz;
  }
  return acc;
}

Real christoffel_darboux_residual(const SignOrthoBasis& basis, const RecurrenceData& rec, int n,
                                  std::span<const Complex> x, std::span<const Complex> y, int j) {
  if (rec.levels < n + 1 || basis.degree < n + 1)
    fail(Err::IncompleteRecurrence, "christoffel_darboux_residual: need data through degree n+1");
  const Complex denom = x[static_cast<std::size_t>(j)] - std::conj(y[static_cast<std::size_t>(j)]);
  if (std::abs(denom) == 0.0L)
    fail(Err::ConfluentRequested, "christoffel_darboux_residual: x_j equals conj(y_j)");
  const KernelEvaluator kernel(basis, n);
  const auto vx = evaluate_stacked(basis, n + 1, x);
  const auto vy = evaluate_stacked(basis, n + 1, y);
  const CMatX A = rec.A[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)].cast<Complex>();
  const CVecX Apx = A * vx[static_cast<std::size_t>(n) + 1];
  const CVecX Apy = A * vy[static_cast<std::size_t>(n) + 1].conjugate();
  Complex num(0.0L, 0.0L);
  for (int t = 0; t < Apx.size(); ++t) num += Apx(t) * std::conj(vy[static_cast<std::size_t>(n)](t));
  for (int t = 0; t < Apy.size(); ++t) num -= vx[static_cast<std::size_t>(n)](t) * Apy(t);
  return std::abs(kernel(x, y) * denom - num);
}

Real christoffel_darboux_confluent_residual(const SignOrthoBasis& basis, const RecurrenceData& rec,
                                            int n, std::span<const Complex> x, int j) {
  if (rec.levels < n + 1 || basis.degree < n + 1)
    fail(Err::IncompleteRecurrence, "christoffel_darboux_confluent_residual: need degree n+1 data");
  const KernelEvaluator kernel(basis, n);
  const auto v = evaluate_stacked(basis, n + 1, x);
  const auto dv = evaluate_derivative(basis, n + 1, x, j);
  const CMatX A = rec.A[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)].cast<Complex>();
  const CVecX Apx = A * v[static_cast<std::size_t>(n) + 1];
  const CVecX Adx = A * dv[static_cast<std::size_t>(n) + 1];
  Complex rhs(0.0L, 0.0L);
  for (int t = 0; t < Apx.size(); ++t) rhs -= Apx(t) * dv[static_cast<std::size_t>(n)](t);
  for (int t = 0; t < Adx.size(); ++t) rhs += v[static_cast<std::size_t>(n)](t) * Adx(t);
  return std::abs(Complex(kernel.diag(x), 0.0L) - rhs);
}

Rule1D gauss_rule_from_provider(ProviderPtr provider, int m, const Tolerances& tol) {
  if (provider->dim() != 1)
    throw std::invalid_argument("gauss_rule_from_provider: provider must be 1D");
  if (2 * m > provider->max_degree())
    fail(Err::Insufficient1DRule, "gauss_rule_from_provider: moments reliable only to degree " +
                                      std::to_string(provider->max_degree()));
  const MonicBasis monic = build_monic(provider, m, tol.def);
  bool positive = true;
  for (const MatX& H : monic.schur)
    if (H(0, 0) <= 0.0L) positive = false;

  Rule1D rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  if (positive) {
    MonicRecurrence1D rec;
    rec.mu0 = provider->moment0();
    rec.b.resize(static_cast<std::size_t>(m));
    rec.c.resize(static_cast<std::size_t>(m));
    const RecurrenceData rd = recurrence_monic(monic, tol.def);
    for (int k = 0; k < m; ++k) {
      rec.b[static_cast<std::size_t>(k)] = rd.B[static_cast<std::size_t>(k)][0](0, 0);
      rec.c[static_cast<std::size_t>(k)] =
          k == 0 ? 0.0L : rd.C[static_cast<std::size_t>(k)][0](0, 0);
    }
    return gauss_rule(rec, m);
  }

  // indefinite weight: eigenvalues of the nonsymmetric companion-style
  // truncation of the monic recurrence, weights from the kernel diagonal
  const SignOrthoBasis sob = sign_orthonormalize(monic, tol.def);
  const RecurrenceData rd = recurrence_monic(monic, tol.def);
  MatX J = MatX::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    J(k, k) = rd.B[static_cast<std::size_t>(k)][0](0, 0);
    if (k + 1 < m) {
      J(k, k + 1) = 1.0L;
      J(k + 1, k) = rd.C[static_cast<std::size_t>(k) + 1][0](0, 0);
    }
  }
  Eigen::EigenSolver<MatX> es(J);
  const CVecX lam = es.eigenvalues();
  const Real scale = std::max(Real(1.0L), lam.cwiseAbs().maxCoeff());
  std::vector<Real> nodes;
  for (int k = 0; k < m; ++k) {
    if (std::abs(lam(k).imag()) > 1e3L * tol.pair * scale)
      fail(Err::Insufficient1DRule, "gauss_rule_from_provider: weight has complex nodes");
    nodes.push_back(lam(k).real());
  }
  std::sort(nodes.begin(), nodes.end());
  const KernelEvaluator kernel(sob, m - 1);
  for (int k = 0; k < m; ++k) {
    if (k + 1 < m && std::abs(nodes[static_cast<std::size_t>(k) + 1] - nodes[static_cast<std::size_t>(k)]) <=
                         tol.pair * scale)
      fail(Err::Insufficient1DRule, "gauss_rule_from_provider: coincident nodes");
    rule.nodes(k) = nodes[static_cast<std::size_t>(k)];
    const Complex z(nodes[static_cast<std::size_t>(k)], 0.0L);
    const Real Kzz = kernel.diag(std::span<const Complex>(&z, 1));
    if (Kzz == 0.0L) fail(Err::ZeroKernelValue, "gauss_rule_from_provider: zero kernel at node");
    rule.weights(k) = 1.0L / Kzz;
  }
  return rule;
}

namespace {

std::vector<Real> elementary_symmetric_values(const std::vector<Real>& x) {
  const std::size_t d = x.size();
  std::vector<Real> c(d + 1, 0.0L);
  c[0] = 1.0L;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = d; j >= 1; --j) c[j] -= x[i] * c[j - 1];
  std::vector<Real> e(d);
  Real sgn = -1.0L;
  for (std::size_t k = 1; k <= d; ++k) {
    e[k - 1] = sgn * c[k];
    sgn = -sgn;
  }
  return e;
}

void push_node(CubatureRule& rule, const std::vector<Real>& ts, Real w) {
  CVecX node(static_cast<int>(ts.size()));
  const auto e = elementary_symmetric_values(ts);
  for (std::size_t k = 0; k < e.size(); ++k) node(static_cast<int>(k)) = Complex(e[k], 0.0L);
  rule.nodes.push_back(node);
  rule.weights.conservativeResize(rule.weights.size() + 1);
  rule.weights(rule.weights.size() - 1) = w;
}

// weakly decreasing index tuples gamma_1 >= ... >= gamma_d over {0..m-1}
void walk_monotone(int d, int m, bool strict, std::vector<int>& g,
                   const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(g.size()) == d) {
    visit(g);
    return;
  }
  const int hi = g.empty() ? m - 1 : (strict ? g.back() - 1 : g.back());
  for (int v = hi; v >= 0; --v) {
    g.push_back(v);
    walk_monotone(d, m, strict, g, visit);
    g.pop_back();
  }
}

}  // namespace

CubatureRule closed_form_symmap_rule(const MonicRecurrence1D& base, int d, int sign_half, int n) {
  if (sign_half != -1 && sign_half != 1)
    throw std::invalid_argument("closed_form_symmap_rule: sign must be -1 (W_{-1/2}) or +1 (W_{+1/2})");
  const int m = sign_half < 0 ? n : n + d - 1;
  const Rule1D rule1d = gauss_rule(base, m);

  CubatureRule rule;
  rule.d = d;
  rule.exact_degree = 2 * n - 1;
  rule.provenance = "closed-form";
  rule.weights.resize(0);

  std::vector<int> g;
  if (sign_half < 0) {
    walk_monotone(d, m, /*strict=*/false, g, [&](const std::vector<int>& gamma) {
      std::vector<Real> ts;
      Real w = 1.0L;
      for (int gi : gamma) {
        ts.push_back(rule1d.nodes(gi));
        w *= rule1d.weights(gi);
      }
      // divide by the factorials of the multiplicities in gamma
      int run = 1;
      for (std::size_t i = 1; i <= gamma.size(); ++i) {
        if (i < gamma.size() && gamma[i] == gamma[i - 1]) {
          ++run;
        } else {
          for (int f = 2; f <= run; ++f) w /= f;
          run = 1;
        }
      }
      push_node(rule, ts, w);
    });
  } else {
    walk_monotone(d, m, /*strict=*/true, g, [&](const std::vector<int>& gamma) {
      std::vector<Real> ts;
      Real w = 1.0L;
      for (int gi : gamma) {
        ts.push_back(rule1d.nodes(gi));
        w *= rule1d.weights(gi);
      }
      Real J = 1.0L;
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j) J *= ts[i] - ts[j];
      push_node(rule, ts, J * J * w);
    });
  }

  // deterministic order, same convention as the zero sets
  std::vector<int> perm(static_cast<std::size_t>(rule.size()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return node_lex_less(rule.nodes[static_cast<std::size_t>(a)],
                         rule.nodes[static_cast<std::size_t>(b)]);
  });
  CubatureRule sorted = rule;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    sorted.nodes[i] = rule.nodes[static_cast<std::size_t>(perm[i])];
    sorted.weights(static_cast<int>(i)) = rule.weights(perm[i]);
  }
  return sorted;
}

}  // namespace mvcf
