#include "mvcf/families.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "mvcf/cubature.hpp"
#include "mvcf/orthopoly.hpp"

namespace mvcf {

Real jacobi_poly(const JacobiParams& p, int n, Real t) {
  if (n < 0) throw std::invalid_argument("jacobi_poly: degree must be >= 0");
  if (n == 0) return 1.0L;
  Real pm1 = 1.0L;
  Real pc = (p.a - p.b) / 2.0L + (p.a + p.b + 2.0L) / 2.0L * t;
  for (int k = 2; k <= n; ++k) {
    const Real s = 2.0L * k + p.a + p.b;
    const Real a1 = 2.0L * k * (k + p.a + p.b) * (s - 2.0L);
    const Real a2 = (s - 1.0L) * (p.a * p.a - p.b * p.b);
    const Real a3 = (s - 1.0L) * s * (s - 2.0L);
    const Real a4 = 2.0L * (k + p.a - 1.0L) * (k + p.b - 1.0L) * s;
    const Real next = ((a2 + a3 * t) * pc - a4 * pm1) / a1;
    pm1 = pc;
    pc = next;
  }
  return pc;
}

VecX jacobi_poly_coefficients(const JacobiParams& p, int n) {
  std::vector<VecX> polys;
  polys.push_back(VecX::Ones(1));
  if (n >= 1) {
    VecX p1(2);
    p1 << (p.a - p.b) / 2.0L, (p.a + p.b + 2.0L) / 2.0L;
    polys.push_back(p1);
  }
  for (int k = 2; k <= n; ++k) {
    const Real s = 2.0L * k + p.a + p.b;
    const Real a1 = 2.0L * k * (k + p.a + p.b) * (s - 2.0L);
    const Real a2 = (s - 1.0L) * (p.a * p.a - p.b * p.b);
    const Real a3 = (s - 1.0L) * s * (s - 2.0L);
    const Real a4 = 2.0L * (k + p.a - 1.0L) * (k + p.b - 1.0L) * s;
    VecX next = VecX::Zero(k + 1);
    next.head(k) += (a2 / a1) * polys[static_cast<std::size_t>(k) - 1];
    next.tail(k) += (a3 / a1) * polys[static_cast<std::size_t>(k) - 1];
    next.head(k - 1) -= (a4 / a1) * polys[static_cast<std::size_t>(k) - 2];
    polys.push_back(std::move(next));
  }
  return polys[static_cast<std::size_t>(n)];
}

Real gen_gegenbauer_even(Real lambda, Real mu, int n, Real t) {
  return jacobi_poly({lambda - 0.5L, mu - 0.5L}, n, 2.0L * t * t - 1.0L);
}

namespace {

// q(s) -> q(2t^2 - 1) as a coefficient vector in t
VecX substitute_quadratic(const VecX& q) {
  const int m = static_cast<int>(q.size()) - 1;
  VecX out = VecX::Zero(2 * m + 1);
  VecX power = VecX::Zero(1);  // (2t^2-1)^k, ascending in t
  power(0) = 1.0L;
  for (int k = 0; k <= m; ++k) {
    for (int i = 0; i < power.size(); ++i) out(i) += q(k) * power(i);
    if (k < m) {
      VecX next = VecX::Zero(power.size() + 2);
      next.head(power.size()) = -power;
      next.tail(power.size()) += 2.0L * power;
      power = std::move(next);
    }
  }
  return out;
}

void validate_signed_params(const SignedGegenbauerWeight& w) {
  if (!(w.lambda > -0.5L) || !(w.mu > 0.0L))
    throw std::invalid_argument("signed weight requires lambda > -1/2 and mu > 0");
  // the quadratic-substitution factorization below needs the odd power
  // t^{2mu+1}, i.e. integer mu; other parameters are numerics-only
  if (std::abs(w.mu - std::llroundl(w.mu)) > 1e-9L)
    throw std::invalid_argument("closed forms of the signed weight require integer mu");
}

}  // namespace

VecX signed_gegenbauer_poly(const SignedGegenbauerWeight& w, int n) {
  validate_signed_params(w);
  if (n == 0) return VecX::Ones(1);
  const int m = n / 2;
  VecX q;
  if (n % 2 == 0) {
    q = substitute_quadratic(jacobi_poly_coefficients({w.lambda - 0.5L, w.mu + 0.5L}, m));
  } else {
    const VecX even = substitute_quadratic(jacobi_poly_coefficients({w.lambda + 0.5L, w.mu + 0.5L}, m));
    q = VecX::Zero(even.size() + 1);
    q.head(even.size()) += even;   // 1 * even(t)
    q.tail(even.size()) += even;   // t * even(t)
  }
  return q / q(q.size() - 1);  // monic
}

VecX signed_gegenbauer_zeros(const SignedGegenbauerWeight& w, int n) {
  validate_signed_params(w);
  VecX zeros(n);
  if (n == 0) return zeros;
  const int m = n / 2;
  std::vector<Real> out;
  if (n % 2 == 1) out.push_back(-1.0L);
  if (m > 0) {
    const Real a = (n % 2 == 0 ? w.lambda - 0.5L : w.lambda + 0.5L);
    const Rule1D rule = gauss_rule(jacobi_recurrence(a, w.mu + 0.5L, m), m);
    for (int k = 0; k < m; ++k) {
      const Real tk = std::sqrt((1.0L + rule.nodes(k)) / 2.0L);
      out.push_back(tk);
      out.push_back(-tk);
    }
  }
  std::sort(out.begin(), out.end());
  for (int k = 0; k < n; ++k) zeros(k) = out[static_cast<std::size_t>(k)];
  return zeros;
}

VecX orthonormal_values_1d(const MonicRecurrence1D& rec, int m, Real t) {
  if (rec.count() < m + 1)
    fail(Err::Insufficient1DRule, "orthonormal_values_1d: recurrence too short");
  VecX vals(m + 1);
  Real pm1 = 0.0L, pc = 1.0L, h = rec.mu0;  // h tracks the squared monic norm
  vals(0) = pc / std::sqrt(h);
  for (int k = 0; k < m; ++k) {
    const Real next = (t - rec.b[static_cast<std::size_t>(k)]) * pc -
                      (k > 0 ? rec.c[static_cast<std::size_t>(k)] * pm1 : 0.0L);
    pm1 = pc;
    pc = next;
    h *= rec.c[static_cast<std::size_t>(k) + 1];
    vals(k + 1) = pc / std::sqrt(h);
  }
  return vals;
}

Real symmetric_polynomial(const MonicRecurrence1D& base, int sign_half, const MultiIndex& partition,
                          std::span<const Real> x) {
  const int d = static_cast<int>(x.size());
  if (partition.dim() != d) throw std::invalid_argument("symmetric_polynomial: dimension mismatch");
  for (int i = 1; i < d; ++i)
    if (partition[i] > partition[i - 1])
      throw std::invalid_argument("symmetric_polynomial: index must be weakly decreasing");

  if (sign_half < 0) {
    const int top = partition[0];
    std::vector<VecX> pv;
    for (int j = 0; j < d; ++j)
      pv.push_back(orthonormal_values_1d(base, std::max(top, 1), x[static_cast<std::size_t>(j)]));
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) perm[static_cast<std::size_t>(j)] = j;
    Real acc = 0.0L;
    do {
      Real term = 1.0L;
      for (int i = 0; i < d; ++i)
        term *= pv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])](partition[i]);
      acc += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
  }

  Real J = 1.0L;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) J *= x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
  Real scale = 0.0L;
  for (Real v : x) scale = std::max(scale, std::abs(v));
  if (std::abs(J) <= 1e-13L * std::max(Real(1.0L), scale))
    fail(Err::ConfluentPoint, "symmetric_polynomial: coincident coordinates in the +1/2 family");
  const int top = partition[0] + d - 1;
  std::vector<VecX> pv;
  for (int j = 0; j < d; ++j)
    pv.push_back(orthonormal_values_1d(base, std::max(top, 1), x[static_cast<std::size_t>(j)]));
  MatX M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = pv[static_cast<std::size_t>(j)](partition[i] + d - 1 - i);
  return M.determinant() / J;
}

std::vector<MultiIndex> partitions_with_top(int d, int n) {
  std::vector<MultiIndex> out;
  std::vector<int> cur = {n};
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == d) {
      out.emplace_back(cur);
      return;
    }
    for (int v = cur.back(); v >= 0; --v) {
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

Real pushforward_basis_check(const MonicRecurrence1D& base, int d, int sign_half, int n) {
  const int needed = 2 * n + 2;
  const int m = needed * std::max(d, 2) + 10;
  if (base.count() < m) fail(Err::Insufficient1DRule, "pushforward_basis_check: base recurrence too short");
  const Rule1D rule = gauss_rule(base, m);
  ProviderPtr provider = quadrature_pushforward_provider(
      rule, PushforwardMap::ElementarySymmetric, sign_half < 0 ? 0 : 2, d);
  const MonicBasis monic = build_monic(provider, n);
  const SignOrthoBasis basis = sign_orthonormalize(monic);

  const auto parts = partitions_with_top(d, n);
  const int r0 = static_cast<int>(homog_space_dim(d, n));
  const int samples = 3 * r0 + 8;
  std::mt19937_64 gen(kDefaultSeed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  MatX Vq(samples, static_cast<int>(parts.size()));
  MatX Vp(samples, r0);
  for (int s = 0; s < samples; ++s) {
    std::vector<Real> x(static_cast<std::size_t>(d));
    bool ok = false;
    while (!ok) {
      for (auto& xi : x) xi = static_cast<Real>(uni(gen));
      ok = true;
      for (int i = 0; ok && i < d; ++i)
        for (int j = i + 1; ok && j < d; ++j)
          if (std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]) < 1e-3L) ok = false;
    }
    for (std::size_t q = 0; q < parts.size(); ++q)
      Vq(s, static_cast<int>(q)) = symmetric_polynomial(base, sign_half, parts[q], x);
    // image point under the elementary symmetric map
    std::vector<Real> c(static_cast<std::size_t>(d) + 1, 0.0L);
    c[0] = 1.0L;
    for (int i = 0; i < d; ++i)
      for (int j = d; j >= 1; --j) c[static_cast<std::size_t>(j)] -= x[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j) - 1];
    std::vector<Complex> u(static_cast<std::size_t>(d));
    Real sgn = -1.0L;
    for (int k = 1; k <= d; ++k) {
      u[static_cast<std::size_t>(k) - 1] = Complex(sgn * c[static_cast<std::size_t>(k)], 0.0L);
      sgn = -sgn;
    }
    const auto vals = evaluate_stacked(basis, n, u);
    for (int q = 0; q < r0; ++q) Vp(s, q) = vals.back()(q).real();
  }

  // cross-projection: each value matrix must lie in the column span of the other
  const auto rel_residual = [](const MatX& A, const MatX& B) {
    const MatX X = Eigen::ColPivHouseholderQR<MatX>(A).solve(B);
    return (A * X - B).norm() / B.norm();
  };
  return std::max(rel_residual(Vq, Vp), rel_residual(Vp, Vq));
}

// --- descriptors ---

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body, const std::string& what) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      fail(Err::BadDescriptor, what + ": expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

Real parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const Real v = std::stold(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Err::BadDescriptor, what + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

WeightDescriptor parse_weight_descriptor(const std::string& text) {
  WeightDescriptor out;
  out.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "legendre") {
    out.family = WeightDescriptor::Family::Legendre;
  } else if (head == "chebyshev") {
    out.family = WeightDescriptor::Family::Chebyshev;
  } else if (head == "gegenbauer") {
    out.family = WeightDescriptor::Family::Gegenbauer;
    auto kv = parse_kv(body, "gegenbauer");
    if (!kv.count("lambda") || !kv.count("mu"))
      fail(Err::BadDescriptor, "gegenbauer: needs lambda=<f>,mu=<f>");
    out.lambda = parse_real(kv["lambda"], "gegenbauer lambda");
    out.mu = parse_real(kv["mu"], "gegenbauer mu");
    if (!(out.lambda > -0.5L) || !(out.mu > 0.0L))
      fail(Err::BadDescriptor, "gegenbauer: requires lambda > -1/2 and mu > 0");
  } else if (head == "symmap") {
    out.family = WeightDescriptor::Family::SymMap;
    auto kv = parse_kv(body, "symmap");
    if (!kv.count("base") || !kv.count("d") || !kv.count("sign"))
      fail(Err::BadDescriptor, "symmap: needs base=<name>,d=<int>,sign=<-0.5|+0.5>");
    out.base = kv["base"];
    if (out.base != "legendre" && out.base != "chebyshev")
      fail(Err::BadDescriptor, "symmap: base must be legendre or chebyshev");
    out.d = static_cast<int>(parse_real(kv["d"], "symmap d"));
    if (out.d < 1) fail(Err::BadDescriptor, "symmap: d must be >= 1");
    const std::string s = kv["sign"];
    if (s == "-0.5" || s == "-1/2")
      out.sign_half = -1;
    else if (s == "+0.5" || s == "0.5" || s == "+1/2" || s == "1/2")
      out.sign_half = +1;
    else
      fail(Err::BadDescriptor, "symmap: sign must be -0.5 or +0.5");
  } else if (head == "table") {
    out.family = WeightDescriptor::Family::Table;
    out.path = body;
    if (out.path.empty()) fail(Err::BadDescriptor, "table: needs a file path");
  } else {
    fail(Err::BadDescriptor, "unknown weight family '" + head +
                                 "'; valid: legendre, chebyshev, gegenbauer:lambda=,mu=, "
                                 "symmap:base=,d=,sign=, table:<path>");
  }
  return out;
}

MonicRecurrence1D base_recurrence_1d(const std::string& name, int count) {
  if (name == "legendre") return jacobi_recurrence_normalized(0.0L, 0.0L, count);
  if (name == "chebyshev") return jacobi_recurrence_normalized(-0.5L, -0.5L, count);
  fail(Err::BadDescriptor, "base_recurrence_1d: unknown base '" + name + "'");
}

ProviderPtr legendre_provider_1d() {
  return std::make_shared<Closed1DProvider>(
      [](int k) { return k % 2 == 0 ? 1.0L / (k + 1) : 0.0L; }, 2000, "closed-form table");
}

ProviderPtr chebyshev_provider_1d() {
  return std::make_shared<Closed1DProvider>(
      [](int k) {
        if (k % 2 == 1) return Real(0.0L);
        Real v = 1.0L;
        for (int j = 1; 2 * j <= k; ++j) v *= Real(2 * j - 1) / Real(2 * j);
        return v;
      },
      2000, "closed-form table");
}

ProviderPtr gegenbauer_provider_1d(Real lambda, Real mu, int needed_degree) {
  const int m = needed_degree * 2 + 10;
  const Rule1D rule = gauss_rule(jacobi_recurrence(lambda - 0.5L, lambda - 0.5L, m), m);
  // fold the factor t^{2mu+1} (1-t) into the integrand; integer exponents are
  // plain powers, fractional ones extend to t < 0 as the odd function
  // sign(t) |t|^{2mu+1}
  const Real expo = 2.0L * mu + 1.0L;
  const long long iexpo = std::llroundl(expo);
  const bool integer_expo = std::abs(expo - Real(iexpo)) < 1e-12L;
  auto fn = [rule, expo, iexpo, integer_expo](int k) {
    Real acc = 0.0L;
    for (int i = 0; i < rule.size(); ++i) {
      const Real t = rule.nodes(i);
      Real tpow;
      if (integer_expo) {
        tpow = 1.0L;
        for (long long p = 0; p < iexpo; ++p) tpow *= t;
      } else {
        tpow = (t >= 0.0L ? 1.0L : -1.0L) * std::pow(std::abs(t), expo);
      }
      Real tk = 1.0L;
      for (int p = 0; p < k; ++p) tk *= t;
      acc += rule.weights(i) * tk * tpow * (1.0L - t);
    }
    return acc;
  };
  return std::make_shared<Closed1DProvider>(fn, needed_degree, "1D-quadrature product");
}

ProviderPtr make_provider(const WeightDescriptor& desc, int dimension, int needed_degree) {
  int d = dimension;
  if (desc.fixes_dimension()) {
    const int own = desc.family == WeightDescriptor::Family::SymMap ? desc.d : 0;
    if (own > 0 && dimension > 0 && own != dimension)
      fail(Err::BadDescriptor, "descriptor fixes d=" + std::to_string(own) +
                                   " but d=" + std::to_string(dimension) + " was requested");
    if (own > 0) d = own;
  }
  if (d <= 0) d = 1;

  switch (desc.family) {
    case WeightDescriptor::Family::Legendre:
    case WeightDescriptor::Family::Chebyshev: {
      ProviderPtr base = desc.family == WeightDescriptor::Family::Legendre
                             ? legendre_provider_1d()
                             : chebyshev_provider_1d();
      if (d == 1) return base;
      return std::make_shared<ProductProvider>(base, d);
    }
    case WeightDescriptor::Family::Gegenbauer: {
      ProviderPtr base = gegenbauer_provider_1d(desc.lambda, desc.mu, needed_degree);
      if (d == 1) return base;
      return std::make_shared<ProductProvider>(base, d);
    }
    case WeightDescriptor::Family::SymMap: {
      const int m = needed_degree * std::max(d, 2) + 10;
      const Rule1D rule = gauss_rule(base_recurrence_1d(desc.base, m), m);
      return quadrature_pushforward_provider(rule, PushforwardMap::ElementarySymmetric,
                                             desc.sign_half < 0 ? 0 : 2, d);
    }
    case WeightDescriptor::Family::Table: {
      std::ifstream f(desc.path);
      if (!f) fail(Err::BadDescriptor, "table: cannot open '" + desc.path + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      ProviderPtr p = table_provider_from_json(buf.str());
      if (dimension > 0 && p->dim() != dimension)
        fail(Err::BadDescriptor, "table: file has d=" + std::to_string(p->dim()));
      return p;
    }
  }
  fail(Err::BadDescriptor, "unreachable");
}

}  // namespace mvcf
