#include "mvcf/moments.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "mvcf/jsonio.hpp"

namespace mvcf {

Real MomentProvider::moment(const MultiIndex& alpha) const {
  if (alpha.dim() != d_) throw std::invalid_argument("moment: index dimension mismatch");
  if (alpha.degree() > max_degree_)
    fail(Err::DegreeExceeded, "moment: degree " + std::to_string(alpha.degree()) +
                                  " exceeds reliable maximum " + std::to_string(max_degree_));
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(alpha.e);
    if (it != memo_.end()) return it->second;
  }
  const Real value = compute(alpha);
  if (!std::isfinite(static_cast<double>(value)))
    throw std::runtime_error("moment: non-finite value at requested index");
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return memo_.emplace(alpha.e, value).first->second;
}

TableProvider::TableProvider(int d, int max_degree, std::map<std::vector<int>, Real> entries)
    : MomentProvider(d, max_degree, "closed-form table"), entries_(std::move(entries)) {}

Real TableProvider::compute(const MultiIndex& alpha) const {
  auto it = entries_.find(alpha.e);
  return it == entries_.end() ? 0.0L : it->second;
}

Closed1DProvider::Closed1DProvider(std::function<Real(int)> fn, int max_degree, std::string source)
    : MomentProvider(1, max_degree, std::move(source)), fn_(std::move(fn)) {}

Real Closed1DProvider::compute(const MultiIndex& alpha) const { return fn_(alpha[0]); }

ProductProvider::ProductProvider(ProviderPtr base1d, int d)
    : MomentProvider(d, base1d->max_degree(), "1D-quadrature product"), base_(std::move(base1d)) {
  if (base_->dim() != 1) throw std::invalid_argument("ProductProvider: base must be 1D");
}

Real ProductProvider::compute(const MultiIndex& alpha) const {
  Real out = 1.0L;
  for (int i = 0; i < alpha.dim(); ++i) out *= base_->moment(MultiIndex{alpha[i]});
  return out;
}

namespace {

int pushforward_max_degree(int m, PushforwardMap map, int jacobian_power, int d) {
  // an m-point rule integrates per-variable degree 2m-1 exactly; the symmetric
  // map keeps u^alpha multilinear per factor, so per-variable degree is
  // |alpha| + p*(d-1)
  if (map == PushforwardMap::Identity) return 2 * m - 1;
  return 2 * m - 1 - jacobian_power * (d - 1);
}

std::vector<Real> elementary_symmetric(const std::vector<Real>& x) {
  // Vieta: expand prod (t - x_i) and flip signs.
  const std::size_t d = x.size();
  std::vector<Real> c(d + 1, 0.0L);
  c[0] = 1.0L;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = d; j >= 1; --j) c[j] -= x[i] * c[j - 1];
  }
  std::vector<Real> e(d);
  Real sgn = -1.0L;
  for (std::size_t k = 1; k <= d; ++k) {
    e[k - 1] = sgn * c[k];
    sgn = -sgn;
  }
  return e;
}

}  // namespace

PushforwardProvider::PushforwardProvider(Rule1D rule, PushforwardMap map, int jacobian_power, int d)
    : MomentProvider(d, pushforward_max_degree(rule.size(), map, jacobian_power, d),
                     map == PushforwardMap::ElementarySymmetric ? "symmetric-map pushforward"
                                                                : "1D-quadrature product"),
      rule_(std::move(rule)),
      map_(map),
      jacobian_power_(jacobian_power) {
  if (jacobian_power != 0 && jacobian_power != 2)
    throw std::invalid_argument("PushforwardProvider: jacobian power must be 0 or 2");
  const int m = rule_.size();
  Real fact = 1.0L;
  for (int i = 2; i <= d; ++i) fact *= i;
  std::vector<int> tuple(static_cast<std::size_t>(d), 0);
  std::vector<Real> x(static_cast<std::size_t>(d));
  while (true) {
    Real w = 1.0L;
    for (int i = 0; i < d; ++i) {
      x[static_cast<std::size_t>(i)] = rule_.nodes(tuple[static_cast<std::size_t>(i)]);
      w *= rule_.weights(tuple[static_cast<std::size_t>(i)]);
    }
    if (jacobian_power_ != 0) {
      Real J = 1.0L;
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          J *= x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      for (int p = 0; p < jacobian_power_; ++p) w *= J;
    }
    if (map_ == PushforwardMap::ElementarySymmetric) {
      u_table_.push_back(elementary_symmetric(x));
      w_table_.push_back(w / fact);
    } else {
      u_table_.push_back(x);
      w_table_.push_back(w);
    }
    int pos = d - 1;
    while (pos >= 0 && ++tuple[static_cast<std::size_t>(pos)] == m) tuple[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
}

Real PushforwardProvider::compute(const MultiIndex& alpha) const {
  Real acc = 0.0L;
  for (std::size_t t = 0; t < u_table_.size(); ++t) {
    Real term = w_table_[t];
    for (int i = 0; i < alpha.dim(); ++i) {
      const Real ui = u_table_[t][static_cast<std::size_t>(i)];
      for (int p = 0; p < alpha[i]; ++p) term *= ui;
    }
    acc += term;
  }
  return acc;
}

ProviderPtr quadrature_pushforward_provider(const Rule1D& rule, PushforwardMap map,
                                            int jacobian_power, int d) {
  return std::make_shared<PushforwardProvider>(rule, map, jacobian_power, d);
}

ScaledProvider::ScaledProvider(ProviderPtr base, Real scale)
    : MomentProvider(base->dim(), base->max_degree(), base->source()),
      base_(std::move(base)),
      scale_(scale) {}

Real ScaledProvider::compute(const MultiIndex& alpha) const { return scale_ * base_->moment(alpha); }

MomentMatrixSet moment_matrix(const MomentProvider& provider, int n) {
  if (2 * n > provider.max_degree())
    fail(Err::DegreeExceeded, "moment_matrix: needs moments to degree " + std::to_string(2 * n) +
                                  ", provider is reliable to " +
                                  std::to_string(provider.max_degree()));
  const GradedBasis basis(provider.dim(), n);
  MomentMatrixSet out;
  out.d = provider.dim();
  out.n = n;
  out.full.resize(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    for (int j = i; j < basis.size(); ++j) {
      const Real v = provider.moment(add(basis.at(i), basis.at(j)));
      out.full(i, j) = v;
      out.full(j, i) = v;
    }
  }
  return out;
}

std::vector<DefinitenessRow> definiteness_scan(const MomentProvider& provider, int N, Real tol_def) {
  std::vector<DefinitenessRow> rows;
  for (int n = 0; n <= N; ++n) {
    const MomentMatrixSet M = moment_matrix(provider, n);
    DefinitenessRow row;
    row.n = n;
    row.determinant = Eigen::FullPivLU<MatX>(M.full).determinant();
    Eigen::JacobiSVD<MatX> svd(M.full);
    const Real smax = svd.singularValues()(0);
    const Real smin = svd.singularValues()(svd.singularValues().size() - 1);
    row.sv_floor = smax > 0.0L ? smin / smax : 0.0L;
    row.definite = row.sv_floor > tol_def;
    rows.push_back(row);
  }
  return rows;
}

MatX solve_symmetric(const MatX& A, const MatX& B, Real tol, Err code) {
  Eigen::SelfAdjointEigenSolver<MatX> es(A);
  const VecX lam = es.eigenvalues();
  const Real lmax = lam.cwiseAbs().maxCoeff();
  if (lmax == 0.0L || lam.cwiseAbs().minCoeff() <= tol * lmax)
    fail(code, "symmetric solve: matrix numerically singular");
  return es.eigenvectors() * lam.cwiseInverse().asDiagonal() *
         (es.eigenvectors().transpose() * B);
}

HankelSchurReport hankel_schur_test(const MomentProvider& provider, int n, Real tol) {
  if (n < 1) throw std::invalid_argument("hankel_schur_test: need n >= 1");
  const MomentMatrixSet M = moment_matrix(provider, n);
  const MatX cross = M.cross();
  const MatX X = solve_symmetric(M.prev(), cross, Tolerances{}.def, Err::SingularMomentMatrix);

  HankelSchurReport rep;
  rep.n = n;
  rep.hstar = cross.transpose() * X;
  rep.scale = rep.hstar.cwiseAbs().maxCoeff();

  const GradedBasis deg_n(provider.dim(), n);
  const int start = deg_n.block_start(n);
  const int r0 = deg_n.block_size(n);
  // group index pairs by alpha+beta and compare entries inside each group
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
  for (int i = 0; i < r0; ++i)
    for (int j = 0; j < r0; ++j)
      groups[add(deg_n.at(start + i), deg_n.at(start + j)).e].push_back({i, j});
  rep.deviation = 0.0L;
  for (const auto& [key, cells] : groups) {
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        const Real dev = std::abs(rep.hstar(cells[a].first, cells[a].second) -
                                  rep.hstar(cells[b].first, cells[b].second));
        if (dev > rep.deviation) {
          rep.deviation = dev;
          rep.alpha = deg_n.at(start + cells[a].first);
          rep.beta = deg_n.at(start + cells[a].second);
          rep.alpha2 = deg_n.at(start + cells[b].first);
          rep.beta2 = deg_n.at(start + cells[b].second);
        }
      }
    }
  }
  rep.hankel = rep.deviation <= tol * std::max(rep.scale, Real(1e-300L));
  return rep;
}

std::string moments_to_json(const MomentProvider& provider, int degree) {
  Json doc;
  doc["d"] = provider.dim();
  doc["max_degree"] = degree;
  Json entries = Json::array();
  const GradedBasis basis(provider.dim(), degree);
  for (int i = 0; i < basis.size(); ++i) {
    Json entry;
    entry["alpha"] = basis.at(i).e;
    entry["value"] = static_cast<double>(provider.moment(basis.at(i)));
    entries.push_back(std::move(entry));
  }
  doc["entries"] = std::move(entries);
  return dump_json17(doc);
}

ProviderPtr table_provider_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  const int d = doc.at("d").get<int>();
  const int max_degree = doc.at("max_degree").get<int>();
  std::map<std::vector<int>, Real> entries;
  for (const auto& entry : doc.at("entries")) {
    entries[entry.at("alpha").get<std::vector<int>>()] =
        static_cast<Real>(entry.at("value").get<double>());
  }
  return std::make_shared<TableProvider>(d, max_degree, std::move(entries));
}

}  // namespace mvcf
