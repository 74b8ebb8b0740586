#include "mvcf/momentrec.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace mvcf {

std::vector<MultiIndex> triangle_lower_set(int d, int n) {
  const GradedBasis basis(d, n - 1);
  return basis.all();
}

namespace {

void check_lower_set(const std::vector<MultiIndex>& lower, int d) {
  std::map<std::vector<int>, bool> have;
  for (const auto& a : lower) {
    if (a.dim() != d) throw std::invalid_argument("lower set: dimension mismatch");
    have[a.e] = true;
  }
  if (have.size() != lower.size()) throw std::invalid_argument("lower set: repeated index");
  for (const auto& a : lower) {
    for (int j = 0; j < d; ++j) {
      if (a[j] == 0) continue;
      MultiIndex down = a;
      down.e[static_cast<std::size_t>(j)] -= 1;
      if (!have.count(down.e))
        throw std::invalid_argument("lower set: not downward closed");
    }
  }
}

}  // namespace

ThetaVandermonde theta_vandermonde(const ZeroSet& zeros, const std::vector<MultiIndex>& lower) {
  ThetaVandermonde out;
  out.rows = lower;
  out.V.resize(static_cast<int>(lower.size()), static_cast<int>(zeros.points.size()));
  for (std::size_t r = 0; r < lower.size(); ++r) {
    for (std::size_t c = 0; c < zeros.points.size(); ++c) {
      const auto& z = zeros.points[c].z;
      std::vector<Complex> zz(z.data(), z.data() + z.size());
      out.V(static_cast<int>(r), static_cast<int>(c)) = multi_power(zz, lower[r]);
    }
  }
  Eigen::JacobiSVD<CMatX> svd(out.V);
  const auto& s = svd.singularValues();
  out.condition = s(s.size() - 1) > 0.0L ? s(0) / s(s.size() - 1) : std::numeric_limits<Real>::infinity();
  return out;
}

ExponentialPolynomial fit_exponential(const ZeroSet& zeros, const MomentProvider& prev_moments,
                                      const Tolerances& tol,
                                      const std::vector<MultiIndex>* lower_set) {
  if (zeros.any_suspect())
    fail(Err::MultipleZeros,
         "fit_exponential: zero set at degree " + std::to_string(zeros.n) +
             " has multiplicity suspects; only simple zero sets are handled");
  if (!zeros.complete())
    fail(Err::MultipleZeros, "fit_exponential: zero set incomplete at degree " +
                                 std::to_string(zeros.n) + " (" +
                                 std::to_string(zeros.points.size()) + " of " +
                                 std::to_string(zeros.expected) + ")");

  std::vector<MultiIndex> lower =
      lower_set ? *lower_set : triangle_lower_set(zeros.d, zeros.n);
  check_lower_set(lower, zeros.d);
  if (static_cast<long long>(lower.size()) != zeros.expected)
    throw std::invalid_argument("fit_exponential: lower set must have r_{n-1} elements");

  ThetaVandermonde vdm = theta_vandermonde(zeros, lower);
  const int N = static_cast<int>(lower.size());
  CVecX rhs(N);
  for (int r = 0; r < N; ++r) rhs(r) = Complex(prev_moments.moment(lower[static_cast<std::size_t>(r)]), 0.0L);

  // column scaling, then partially pivoted LU
  VecX colscale(N);
  CMatX Vs = vdm.V;
  for (int c = 0; c < N; ++c) {
    colscale(c) = std::max(Vs.col(c).cwiseAbs().maxCoeff(), Real(1e-300L));
    Vs.col(c) /= Complex(colscale(c), 0.0L);
  }
  Eigen::JacobiSVD<CMatX> svd(Vs);
  const auto& sv = svd.singularValues();
  const Real cond = sv(sv.size() - 1) > 0.0L ? sv(0) / sv(sv.size() - 1)
                                             : std::numeric_limits<Real>::infinity();
  if (!(sv(sv.size() - 1) > 1e3L * std::numeric_limits<Real>::epsilon() * sv(0)))
    fail(Err::SingularVandermonde, "fit_exponential: interpolation matrix numerically singular");
  Eigen::PartialPivLU<CMatX> lu(Vs);
  CVecX c = lu.solve(rhs);
  for (int k = 0; k < N; ++k) c(k) /= Complex(colscale(k), 0.0L);

  // conjugate symmetry: real nodes get real coefficients, conjugate node pairs
  // conjugate coefficients
  std::vector<bool> done(static_cast<std::size_t>(N), false);
  for (int k = 0; k < N; ++k) {
    if (done[static_cast<std::size_t>(k)]) continue;
    const auto& zk = zeros.points[static_cast<std::size_t>(k)].z;
    if (zk.imag().cwiseAbs().maxCoeff() <= tol.pair) {
      c(k) = Complex(c(k).real(), 0.0L);
      done[static_cast<std::size_t>(k)] = true;
      continue;
    }
    for (int l = k + 1; l < N; ++l) {
      if (done[static_cast<std::size_t>(l)]) continue;
      const auto& zl = zeros.points[static_cast<std::size_t>(l)].z;
      if ((zk.conjugate() - zl).cwiseAbs().maxCoeff() <= 1e2L * tol.pair) {
        const Complex avg = (c(k) + std::conj(c(l))) / Real(2.0L);
        c(k) = avg;
        c(l) = std::conj(avg);
        done[static_cast<std::size_t>(k)] = done[static_cast<std::size_t>(l)] = true;
        break;
      }
    }
  }

  ExponentialPolynomial out;
  out.d = zeros.d;
  out.n = zeros.n;
  for (const auto& pt : zeros.points) out.nodes.push_back(pt.z);
  out.coeff = c;
  out.vdm_condition = cond;
  Real rhs_scale = std::max(Real(1.0L), rhs.cwiseAbs().maxCoeff());
  out.fit_residual = (vdm.V * c - rhs).cwiseAbs().maxCoeff() / rhs_scale;
  if (out.fit_residual > tol.fit * std::max(Real(1.0L), cond))
    fail(Err::SingularVandermonde, "fit_exponential: residual " +
                                       std::to_string(static_cast<double>(out.fit_residual)) +
                                       " exceeds tolerance");
  return out;
}

namespace {

class ExponentialMomentProvider : public MomentProvider {
 public:
  ExponentialMomentProvider(ExponentialPolynomial g, Real scale)
      : MomentProvider(g.d, 1 << 24, "reconstructed sequence"),
        g_(std::move(g)),
        scale_(scale) {}

 protected:
  Real compute(const MultiIndex& alpha) const override {
    Complex acc(0.0L, 0.0L);
    for (std::size_t k = 0; k < g_.nodes.size(); ++k) {
      std::vector<Complex> z(g_.nodes[k].data(), g_.nodes[k].data() + g_.nodes[k].size());
      acc += g_.coeff(static_cast<int>(k)) * multi_power(z, alpha);
    }
    if (std::abs(acc.imag()) > 1e-10L * std::max(Real(1.0L), std::abs(acc.real())))
      throw std::runtime_error("reconstructed moment has a non-real residue");
    return scale_ * acc.real();
  }

 private:
  ExponentialPolynomial g_;
  Real scale_;
};

class ConstantOneProvider : public MomentProvider {
 public:
  explicit ConstantOneProvider(int d) : MomentProvider(d, 1 << 24, "closed-form table") {}

 protected:
  Real compute(const MultiIndex&) const override { return 1.0L; }
};

}  // namespace

ProviderPtr reconstructed_provider(const ExponentialPolynomial& g, Real scale) {
  return std::make_shared<ExponentialMomentProvider>(g, scale);
}

CoincidenceReport verify_coincidence(const MomentProvider& original,
                                     const MomentProvider& reconstructed, int n, Real rel_tol) {
  if (2 * n - 1 > original.max_degree())
    fail(Err::DegreeExceeded, "verify_coincidence: need original moments through degree " +
                                  std::to_string(2 * n - 1));
  CoincidenceReport rep;
  rep.n = n;
  rep.rel_tol = rel_tol;
  const GradedBasis basis(original.dim(), 2 * n - 1);
  for (int p = 0; p < basis.size(); ++p)
    rep.scale = std::max(rep.scale, std::abs(original.moment(basis.at(p))));
  for (int p = 0; p < basis.size(); ++p) {
    const Real dev = std::abs(original.moment(basis.at(p)) - reconstructed.moment(basis.at(p)));
    rep.max_dev = std::max(rep.max_dev, dev);
    if (!rep.first_fail && dev > rel_tol * std::max(rep.scale, Real(1.0L)))
      rep.first_fail = basis.at(p);
  }
  if (2 * n <= original.max_degree()) {
    const GradedBasis probe(original.dim(), 2 * n);
    for (int p = probe.block_start(2 * n); p < probe.size(); ++p) {
      const Real dev = std::abs(original.moment(probe.at(p)) - reconstructed.moment(probe.at(p)));
      if (dev > rep.dev_at_2n) {
        rep.dev_at_2n = dev;
        rep.where_2n = probe.at(p);
      }
    }
  }
  return rep;
}

Complex rational_eval(const ExponentialPolynomial& g, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != g.d)
    throw std::invalid_argument("rational_eval: dimension mismatch");
  Complex acc(0.0L, 0.0L);
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    Complex term = g.coeff(static_cast<int>(k));
    for (int j = 0; j < g.d; ++j) {
      const Complex denom = z[static_cast<std::size_t>(j)] - g.nodes[k](j);
      if (std::abs(denom) <= 1e-14L * (Real(1.0L) + std::abs(z[static_cast<std::size_t>(j)])))
        fail(Err::PoleHit, "rational_eval: evaluation point hits a pole");
      term *= z[static_cast<std::size_t>(j)] / denom;
    }
    acc += term;
  }
  return acc;
}

LaurentTable laurent_coefficients(const ExponentialPolynomial& g, int max_total_degree) {
  LaurentTable out;
  out.d = g.d;
  out.degree = max_total_degree;
  const GradedBasis basis(g.d, max_total_degree);
  out.alphas = basis.all();
  out.coeff = VecX::Zero(basis.size());
  // geometric expansion of each pole factor: 1/(1 - node_j/z_j) contributes the
  // power table node_j^k on coordinate j; the series coefficient at alpha is the
  // product of table entries
  for (std::size_t knode = 0; knode < g.nodes.size(); ++knode) {
    std::vector<std::vector<Complex>> table(static_cast<std::size_t>(g.d));
    for (int j = 0; j < g.d; ++j) {
      table[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(max_total_degree) + 1);
      table[static_cast<std::size_t>(j)][0] = Complex(1.0L, 0.0L);
      for (int p = 1; p <= max_total_degree; ++p)
        table[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)] =
            table[static_cast<std::size_t>(j)][static_cast<std::size_t>(p) - 1] * g.nodes[knode](j);
    }
    for (int p = 0; p < basis.size(); ++p) {
      Complex term = g.coeff(static_cast<int>(knode));
      for (int j = 0; j < g.d; ++j)
        term *= table[static_cast<std::size_t>(j)][static_cast<std::size_t>(basis.at(p)[j])];
      out.coeff(p) += term.real();
    }
  }
  return out;
}

ConvergentSequence continued_fraction_run(ProviderPtr provider, int N, const Tolerances& tol,
                                          std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("continued_fraction_run: need at least one level");
  if (2 * (N + 1) > provider->max_degree())
    fail(Err::DegreeExceeded, "continued_fraction_run: needs moments through degree " +
                                  std::to_string(2 * (N + 1)));
  ConvergentSequence seq;
  seq.d = provider->dim();
  seq.mu0 = provider->moment0();
  if (seq.mu0 == 0.0L)
    fail(Err::SingularMomentMatrix, "continued_fraction_run: mu_0 vanishes, cannot normalize");
  ProviderPtr normalized = std::make_shared<ScaledProvider>(provider, 1.0L / seq.mu0);

  const MonicBasis monic = build_monic(normalized, N + 1, tol.def);
  seq.basis = sign_orthonormalize(monic, tol.def);
  seq.recurrence = recurrence_from_L(seq.basis, *normalized, tol.def);

  ProviderPtr prev = std::make_shared<ConstantOneProvider>(seq.d);
  for (int n = 1; n <= N; ++n) {
    ConvergentLevel level;
    level.n = n;
    const TruncatedJacobi tj = build_truncated(seq.recurrence, n);
    level.comm = commutativity_report(tj, tol.comm);
    if (!level.comm.ok)
      fail(Err::CommutativityFailed,
           "continued_fraction_run: level " + std::to_string(n) +
               " fails the commutativity condition; the sequence has no associated "
               "continued fraction");
    level.zeros = common_zeros(tj, seq.basis, tol, seed);
    simplicity_check(level.zeros, seq.basis, tol);
    if (level.zeros.any_suspect() || !level.zeros.complete())
      fail(Err::MultipleZeros, "continued_fraction_run: level " + std::to_string(n) +
                                   " zero set is not simple and complete");
    level.expo = fit_exponential(level.zeros, *prev, tol);
    ProviderPtr recon = reconstructed_provider(level.expo, 1.0L);
    level.mu_n = reconstructed_provider(level.expo, seq.mu0);
    level.coincidence = verify_coincidence(*normalized, *recon, n);
    for (int i = 0; i < seq.d; ++i)
      level.G.push_back(seq.recurrence.D[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)].transpose() *
                        MatX(seq.recurrence.sign[static_cast<std::size_t>(n)].asDiagonal()));
    level.E = seq.recurrence.E[static_cast<std::size_t>(n)];
    level.F = seq.recurrence.F[static_cast<std::size_t>(n)];
    seq.levels.push_back(std::move(level));
    prev = std::move(recon);
  }
  return seq;
}

}  // namespace mvcf
