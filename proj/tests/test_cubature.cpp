#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvcf/cubature.hpp"
#include "mvcf/families.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mvcf;

namespace {

struct Pipeline {
  ProviderPtr provider;
  SignOrthoBasis basis;
  RecurrenceData rec;
};

Pipeline make_pipeline(ProviderPtr p, int degree) {
  Pipeline out;
  out.provider = p;
  out.basis = sign_orthonormalize(build_monic(p, degree));
  out.rec = recurrence_from_L(out.basis, *p);
  return out;
}

ZeroSet zeros_at(const Pipeline& pipe, int n) {
  ZeroSet z = common_zeros(build_truncated(pipe.rec, n), pipe.basis);
  simplicity_check(z, pipe.basis);
  return z;
}

ProviderPtr complex_zero_provider() {
  std::map<std::vector<int>, Real> entries{{{0}, 1.0L}, {{2}, -2.0L}, {{4}, 5.0L}, {{6}, 0.0L}};
  return std::make_shared<TableProvider>(1, 8, std::move(entries));
}

}  // namespace

TEST_CASE("kernel: degree zero and the legendre value at the origin") {
  auto geg = gegenbauer_provider_1d(0.5L, 1.0L, 10);
  const Pipeline gp = make_pipeline(geg, 2);
  const KernelEvaluator K0(gp.basis, 0);
  std::vector<Complex> origin = {Complex(0.0L, 0.0L)};
  const Real mu0 = geg->moment0();
  check_rel(K0.diag(origin), (mu0 > 0 ? 1.0L : -1.0L) / std::abs(mu0), 1e-15L);

  const Pipeline lp = make_pipeline(legendre_provider_1d(), 2);
  const KernelEvaluator K1(lp.basis, 1);
  check_rel(K1.diag(origin), 1.0L, 1e-16L);  // P_1(0) = 0
}

TEST_CASE("kernel: hermitian symmetry and real diagonal") {
  auto ps = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 3);
  const KernelEvaluator K(pipe.basis, 3);
  std::mt19937_64 gen(3);
  for (int t = 0; t < 10; ++t) {
    const auto x = random_complex_point(gen, 2);
    const auto y = random_complex_point(gen, 2);
    const Complex a = K(x, y);
    const Complex b = K(y, x);
    CHECK(std::abs(a - std::conj(b)) <= 1e-12L * std::max<Real>(1.0L, std::abs(a)));
  }
}

TEST_CASE("kernel: reproducing property through the moment matrix") {
  auto ps = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 2);
  const int n = 2;
  const GradedBasis gb(2, n);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VecX qhat(gb.size());
  for (int i = 0; i < gb.size(); ++i) qhat(i) = static_cast<Real>(uni(gen));
  // L(K_n(x, .) q(.)) = sum_k P_k(x)^T S_k L(P_k q), with L(P_k q) = C_k^T M qhat
  const MomentMatrixSet M = moment_matrix(*ps, n);
  std::vector<Complex> x = {Complex(0.3L, 0.0L), Complex(-0.2L, 0.0L)};
  const auto vx = evaluate_stacked(pipe.basis, n, x);
  Real acc = 0.0L;
  for (int k = 0; k <= n; ++k) {
    const MatX& C = pipe.basis.coeff[static_cast<std::size_t>(k)];
    MatX Cp = MatX::Zero(gb.size(), C.cols());
    Cp.topRows(C.rows()) = C;
    const VecX proj = Cp.transpose() * M.full * qhat;
    for (int q = 0; q < proj.size(); ++q)
      acc += vx[static_cast<std::size_t>(k)](q).real() *
             pipe.basis.sign[static_cast<std::size_t>(k)](q) * proj(q);
  }
  const Real qx = (qhat.cast<Complex>().transpose() * gb.monomials_at(x))(0, 0).real();
  check_close(acc, qx, 1e-14L);
}

TEST_CASE("christoffel-darboux: legendre residuals at random complex pairs") {
  const Pipeline pipe = make_pipeline(legendre_provider_1d(), 5);
  std::mt19937_64 gen(7);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_complex_point(gen, 1);
    const auto y = random_complex_point(gen, 1);
    CHECK(christoffel_darboux_residual(pipe.basis, pipe.rec, 3, x, y, 0) <= 1e-10L);
  }
}

TEST_CASE("christoffel-darboux: symmap residuals independent of the coordinate") {
  auto ps = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 3);
  std::mt19937_64 gen(13);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_complex_point(gen, 2);
    const auto y = random_complex_point(gen, 2);
    const Real r1 = christoffel_darboux_residual(pipe.basis, pipe.rec, 2, x, y, 0);
    const Real r2 = christoffel_darboux_residual(pipe.basis, pipe.rec, 2, x, y, 1);
    CHECK(r1 <= 1e-9L);
    CHECK(r2 <= 1e-9L);
  }
}

TEST_CASE("christoffel-darboux: confluent form matches the divided-difference limit") {
  const Pipeline pipe = make_pipeline(legendre_provider_1d(), 5);
  const int n = 3;
  const KernelEvaluator K(pipe.basis, n);
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> uni(-0.9, 0.9);
  for (int t = 0; t < 5; ++t) {
    std::vector<Complex> x = {Complex(static_cast<Real>(uni(gen)), 0.0L)};
    CHECK(christoffel_darboux_confluent_residual(pipe.basis, pipe.rec, n, x, 0) <= 1e-12L);
    // divided difference of the cross form at step h reproduces the kernel to O(h)
    const Real h = 1e-6L;
    std::vector<Complex> y = {x[0] + Complex(h, 0.0L)};
    const auto vx = evaluate_stacked(pipe.basis, n + 1, x);
    const auto vy = evaluate_stacked(pipe.basis, n + 1, y);
    const MatX& A = pipe.rec.A[n][0];
    Complex num = (A.cast<Complex>() * vx[n + 1]).dot(CVecX(vy[n]).conjugate()) -
                  (A.cast<Complex>() * vy[n + 1].conjugate()).dot(CVecX(vx[n]).conjugate());
    const Complex dd = num / (x[0] - std::conj(y[0]));
    const Real kxx = K.diag(x);
    CHECK(std::abs(dd.real() - kxx) <= 1e-4L * std::max<Real>(1.0L, std::abs(kxx)));
    CHECK(std::abs(dd.real() - kxx) >= 0.0L);
  }
}

TEST_CASE("confluent request on the cross form is rejected") {
  const Pipeline pipe = make_pipeline(legendre_provider_1d(), 5);
  std::vector<Complex> x = {Complex(0.25L, 0.0L)};
  CHECK_THROWS_AS(christoffel_darboux_residual(pipe.basis, pipe.rec, 3, x, x, 0), Error);
}

TEST_CASE("gauss cubature: chebyshev n=3 has equal weights 1/3 at the roots") {
  const Pipeline pipe = make_pipeline(chebyshev_provider_1d(), 4);
  const ZeroSet zeros = zeros_at(pipe, 3);
  const KernelEvaluator K(pipe.basis, 3);
  const CubatureRule rule = gauss_cubature(zeros, K);
  REQUIRE(rule.size() == 3);
  for (int k = 0; k < 3; ++k) check_rel(rule.weights(k), 1.0L / 3.0L, 1e-14L);
  const auto rep = cubature_exactness(rule, *pipe.provider, 5);
  CHECK(rep.max_dev <= 1e-15L);
}

TEST_CASE("gauss cubature: symmap n=2 rule is exact through degree 3") {
  auto ps = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 3);
  const ZeroSet zeros = zeros_at(pipe, 2);
  const KernelEvaluator K(pipe.basis, 2);
  const CubatureRule rule = gauss_cubature(zeros, K);
  const auto rep = cubature_exactness(rule, *ps, 3);
  CHECK(rep.max_dev <= 1e-9L * std::max<Real>(rep.scale, 1.0L));
  // weight sum equals mu_0
  check_rel(rule.weights.sum(), ps->moment0(), 1e-10L);
  // positive weights for a positive definite functional
  for (int k = 0; k < rule.size(); ++k) CHECK(rule.weights(k) > 0.0L);
}

TEST_CASE("gauss cubature: signed weight sums to its (negative) mass") {
  auto geg = gegenbauer_provider_1d(0.5L, 1.0L, 12);
  const Pipeline pipe = make_pipeline(geg, 5);
  const ZeroSet zeros = zeros_at(pipe, 4);
  const KernelEvaluator K(pipe.basis, 4);
  const CubatureRule rule = gauss_cubature(zeros, K);
  check_rel(rule.weights.sum(), geg->moment0(), 1e-10L);
  const auto rep = cubature_exactness(rule, *geg, 7);
  CHECK(rep.max_dev <= 1e-9L * std::max<Real>(rep.scale, 1.0L));
}

TEST_CASE("gauss cubature: vanishing kernel at complex zeros is refused") {
  const Pipeline pipe = make_pipeline(complex_zero_provider(), 3);
  ZeroSet zeros = zeros_at(pipe, 2);
  const KernelEvaluator K(pipe.basis, 2);
  CHECK_THROWS_AS(gauss_cubature(zeros, K), Error);
}

TEST_CASE("gauss cubature: incomplete zero set is refused") {
  auto ps = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 3);
  ZeroSet zeros = zeros_at(pipe, 2);
  zeros.points.pop_back();
  const KernelEvaluator K(pipe.basis, 2);
  CHECK_THROWS_AS(gauss_cubature(zeros, K), Error);
}

TEST_CASE("lagrange interpolation: constants, nodes, and degree n-1 reproduction") {
  auto ps = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 3);
  const int n = 2;
  const ZeroSet zeros = zeros_at(pipe, n);
  const KernelEvaluator K(pipe.basis, n);

  std::vector<Complex> ones(zeros.points.size(), Complex(1.0L, 0.0L));
  std::mt19937_64 gen(23);
  for (int t = 0; t < 5; ++t) {
    const auto x = random_complex_point(gen, 2);
    const Complex v = lagrange_interpolate(zeros, K, ones, x);
    CHECK(std::abs(v - Complex(1.0L, 0.0L)) <= 1e-10L);
  }

  // random polynomial of degree n-1 in the orthogonal basis
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Real> coeff;
  auto eval_poly = [&](std::span<const Complex> x) {
    const auto v = evaluate_stacked(pipe.basis, n - 1, x);
    Complex acc(0.0L, 0.0L);
    std::size_t c = 0;
    for (int k = 0; k <= n - 1; ++k)
      for (int q = 0; q < v[static_cast<std::size_t>(k)].size(); ++q)
        acc += coeff[c++] * v[static_cast<std::size_t>(k)](q);
    return acc;
  };
  for (int c = 0; c < 3; ++c) coeff.push_back(static_cast<Real>(uni(gen)));
  std::vector<Complex> samples;
  for (const auto& pt : zeros.points) {
    std::vector<Complex> z(pt.z.data(), pt.z.data() + pt.z.size());
    samples.push_back(eval_poly(z));
  }
  // interpolates its own samples
  for (std::size_t k = 0; k < zeros.points.size(); ++k) {
    std::vector<Complex> z(zeros.points[k].z.data(),
                           zeros.points[k].z.data() + zeros.points[k].z.size());
    CHECK(std::abs(lagrange_interpolate(zeros, K, samples, z) - samples[k]) <= 1e-10L);
  }
  // and reproduces the polynomial away from the nodes
  for (int t = 0; t < 5; ++t) {
    const auto x = random_complex_point(gen, 2);
    CHECK(std::abs(lagrange_interpolate(zeros, K, samples, x) - eval_poly(x)) <= 1e-9L);
  }
}

TEST_CASE("closed-form symmap rule: frozen values for the chebyshev base") {
  const auto base = base_recurrence_1d("chebyshev", 8);
  const CubatureRule rule = closed_form_symmap_rule(base, 2, -1, 2);
  REQUIRE(rule.size() == 3);
  const Real s2 = std::sqrt(2.0L);
  CHECK(std::abs(rule.nodes[0](0).real() + s2) <= 1e-17L);
  CHECK(std::abs(rule.nodes[0](1).real() - 0.5L) <= 1e-17L);
  check_rel(rule.weights(0), 0.125L, 1e-16L);
  check_rel(rule.weights(1), 0.25L, 1e-16L);
  check_rel(rule.weights(2), 0.125L, 1e-16L);

  // +1/2 at n=1: single node u(t2,t1) = (0, -1/2), weight (t2-t1)^2/4 = 1/2
  const CubatureRule plus = closed_form_symmap_rule(base, 2, +1, 1);
  REQUIRE(plus.size() == 1);
  CHECK(std::abs(plus.nodes[0](0).real()) <= 1e-17L);
  CHECK(std::abs(plus.nodes[0](1).real() + 0.5L) <= 1e-17L);
  check_rel(plus.weights(0), 0.5L, 1e-16L);
}

TEST_CASE("closed-form and eigenvalue rules agree for both signs") {
  for (int sign : {-1, +1}) {
    for (const char* base_name : {"chebyshev", "legendre"}) {
      CAPTURE(sign);
      CAPTURE(base_name);
      const std::string desc = std::string("symmap:base=") + base_name +
                               ",d=2,sign=" + (sign < 0 ? "-0.5" : "+0.5");
      auto p = make_provider(parse_weight_descriptor(desc), 0, 14);
      const Pipeline pipe = make_pipeline(p, 4);
      for (int n = 1; n <= 3; ++n) {
        const ZeroSet zeros = zeros_at(pipe, n);
        const KernelEvaluator K(pipe.basis, n);
        const CubatureRule eig = gauss_cubature(zeros, K);
        const CubatureRule cf =
            closed_form_symmap_rule(base_recurrence_1d(base_name, n + 4), 2, sign, n);
        REQUIRE(eig.size() == cf.size());
        for (int k = 0; k < eig.size(); ++k) {
          CHECK((eig.nodes[static_cast<std::size_t>(k)] - cf.nodes[static_cast<std::size_t>(k)])
                    .cwiseAbs()
                    .maxCoeff() <= 1e-8L);
          CHECK(std::abs(eig.weights(k) - cf.weights(k)) <= 1e-8L);
        }
        const auto repa = cubature_exactness(eig, *p, 2 * n - 1);
        const auto repb = cubature_exactness(cf, *p, 2 * n - 1);
        CHECK(repa.max_dev <= 1e-9L * std::max<Real>(repa.scale, 1.0L));
        CHECK(repb.max_dev <= 1e-9L * std::max<Real>(repb.scale, 1.0L));
      }
    }
  }
}

TEST_CASE("closed-form and eigenvalue rules agree in three variables") {
  auto p = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=3,sign=-0.5"), 0, 8);
  check_rel(p->moment0(), 1.0L / 6.0L, 1e-12L);  // 1/3! of unit mass
  const Pipeline pipe = make_pipeline(p, 3);
  const ZeroSet zeros = zeros_at(pipe, 2);
  REQUIRE(zeros.complete());  // r_1 = 4
  CHECK(zeros.expected == 4);
  const KernelEvaluator K(pipe.basis, 2);
  const CubatureRule eig = gauss_cubature(zeros, K);
  const CubatureRule cf = closed_form_symmap_rule(base_recurrence_1d("chebyshev", 8), 3, -1, 2);
  REQUIRE(eig.size() == cf.size());
  for (int k = 0; k < eig.size(); ++k) {
    CHECK((eig.nodes[static_cast<std::size_t>(k)] - cf.nodes[static_cast<std::size_t>(k)])
              .cwiseAbs()
              .maxCoeff() <= 1e-8L);
    CHECK(std::abs(eig.weights(k) - cf.weights(k)) <= 1e-8L);
  }
  const auto rep = cubature_exactness(eig, *p, 3);
  CHECK(rep.max_dev <= 1e-9L * std::max<Real>(rep.scale, 1.0L));
}

TEST_CASE("1D rule from a provider: positive and signed routes") {
  const Rule1D ref = gauss_rule(jacobi_recurrence_normalized(0.0L, 0.0L, 5), 5);
  const Rule1D viaP = gauss_rule_from_provider(legendre_provider_1d(), 5);
  for (int k = 0; k < 5; ++k) {
    check_close(viaP.nodes(k), ref.nodes(k), 1e-14L);
    check_rel(viaP.weights(k), ref.weights(k), 1e-13L);
  }

  auto geg = gegenbauer_provider_1d(0.5L, 1.0L, 16);
  const Rule1D signed_rule = gauss_rule_from_provider(geg, 5);
  for (int k = 0; k <= 9; ++k) {
    Real acc = 0.0L;
    for (int j = 0; j < 5; ++j) acc += signed_rule.weights(j) * std::pow(signed_rule.nodes(j), Real(k));
    const Real want = geg->moment(MultiIndex{k});
    CHECK(std::abs(acc - want) <= 1e-12L * std::max<Real>(1.0L, std::abs(want)));
  }
}

TEST_CASE("cubature rule totals stay real for real integrands on conjugate nodes") {
  // weights of a conjugate pair are equal, so the pairing argument applies even
  // when nodes are complex; exercised on a rule built by hand from the fit path
  auto ps = make_provider(parse_weight_descriptor("symmap:base=legendre,d=2,sign=-0.5"), 0, 10);
  const Pipeline pipe = make_pipeline(ps, 3);
  const ZeroSet zeros = zeros_at(pipe, 2);
  const KernelEvaluator K(pipe.basis, 2);
  const CubatureRule rule = gauss_cubature(zeros, K);
  const GradedBasis gb(2, 3);
  for (int i = 0; i < gb.size(); ++i) {
    Complex acc(0.0L, 0.0L);
    for (int k = 0; k < rule.size(); ++k) {
      std::vector<Complex> z(rule.nodes[static_cast<std::size_t>(k)].data(),
                             rule.nodes[static_cast<std::size_t>(k)].data() + 2);
      acc += rule.weights(k) * multi_power(z, gb.at(i));
    }
    CHECK(std::abs(acc.imag()) <= 1e-10L);
  }
}
