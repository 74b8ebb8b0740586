#include <doctest.h>

#include <cmath>

#include "mvcf/families.hpp"
#include "mvcf/moments.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mvcf;

namespace {

// oscillatory modulation: moments of p(t) * w(t) for a fixed polynomial p
class ModulatedProvider : public MomentProvider {
 public:
  ModulatedProvider(ProviderPtr base, VecX poly)
      : MomentProvider(1, base->max_degree() - static_cast<int>(poly.size()) + 1,
                       "closed-form table"),
        base_(std::move(base)),
        poly_(std::move(poly)) {}

 protected:
  Real compute(const MultiIndex& alpha) const override {
    Real acc = 0.0L;
    for (int j = 0; j < poly_.size(); ++j)
      acc += poly_(j) * base_->moment(MultiIndex{alpha[0] + j});
    return acc;
  }

 private:
  ProviderPtr base_;
  VecX poly_;
};

}  // namespace

TEST_CASE("moment matrix: legendre 1D and 2D product") {
  auto p1 = legendre_provider_1d();
  const MomentMatrixSet M1 = moment_matrix(*p1, 1);
  CHECK(M1.full(0, 0) == 1.0L);
  CHECK(M1.full(0, 1) == 0.0L);
  check_rel(M1.full(1, 1), 1.0L / 3.0L, 1e-18L);

  auto p2 = std::make_shared<ProductProvider>(p1, 2);
  const MomentMatrixSet M2 = moment_matrix(*p2, 1);
  REQUIRE(M2.full.rows() == 3);
  check_rel(M2.full(1, 1), 1.0L / 3.0L, 1e-18L);
  check_rel(M2.full(2, 2), 1.0L / 3.0L, 1e-18L);
  CHECK(M2.full(0, 1) == 0.0L);
  CHECK(M2.full(1, 2) == 0.0L);
}

TEST_CASE("moment matrix: chebyshev against the cosine-substitution oracle") {
  auto p = chebyshev_provider_1d();
  const MomentMatrixSet M = moment_matrix(*p, 2);
  // expected [[1,0,1/2],[0,1/2,0],[1/2,0,3/8]]
  const Real expected[3][3] = {{1.0L, 0.0L, 0.5L}, {0.0L, 0.5L, 0.0L}, {0.5L, 0.0L, 0.375L}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) check_close(M.full(i, j), expected[i][j], 1e-17L);
  for (int k = 0; k <= 8; ++k)
    check_close(p->moment(MultiIndex{k}), oracles::chebyshev_moment(k), 1e-17L);
}

TEST_CASE("moment matrix: generalized Hankel entries are the identical fetch") {
  auto p = std::make_shared<ProductProvider>(chebyshev_provider_1d(), 2);
  const MomentMatrixSet M = moment_matrix(*p, 2);
  const GradedBasis basis(2, 2);
  for (int i = 0; i < basis.size(); ++i)
    for (int j = 0; j < basis.size(); ++j)
      for (int k = 0; k < basis.size(); ++k)
        for (int l = 0; l < basis.size(); ++l)
          if (add(basis.at(i), basis.at(j)) == add(basis.at(k), basis.at(l)))
            CHECK(M.full(i, j) == M.full(k, l));  // bitwise, same cached value
}

TEST_CASE("moment matrix: degree guard") {
  auto p = std::make_shared<TableProvider>(1, 2, std::map<std::vector<int>, Real>{{{0}, 1.0L}});
  CHECK_THROWS_AS(moment_matrix(*p, 2), Error);
}

TEST_CASE("definiteness scan: legendre definite, point mass singular") {
  auto leg = legendre_provider_1d();
  for (const auto& row : definiteness_scan(*leg, 4)) CHECK(row.definite);

  // mu = (1, 0, 0, ...): the origin point mass
  auto pm = std::make_shared<TableProvider>(1, 10, std::map<std::vector<int>, Real>{{{0}, 1.0L}});
  const auto rows = definiteness_scan(*pm, 1);
  CHECK(rows[0].definite);
  CHECK(!rows[1].definite);
}

TEST_CASE("definiteness scan: oscillatory modulation zeroes the low moments") {
  // p = x^2 - 1/3 (degree-2 monic of the base weight): first two moments vanish
  VecX poly(3);
  poly << -1.0L / 3.0L, 0.0L, 1.0L;
  auto mod = std::make_shared<ModulatedProvider>(legendre_provider_1d(), poly);
  CHECK(std::abs(mod->moment(MultiIndex{0})) < 1e-19L);
  CHECK(std::abs(mod->moment(MultiIndex{1})) < 1e-19L);
  CHECK(mod->moment(MultiIndex{2}) > 0.0L);
  const auto rows = definiteness_scan(*mod, 1);
  CHECK(!rows[0].definite);
  CHECK(!rows[1].definite);
}

TEST_CASE("pushforward provider: identity map reproduces chebyshev") {
  const Rule1D rule = gauss_rule(jacobi_recurrence_normalized(-0.5L, -0.5L, 30), 30);
  auto p = quadrature_pushforward_provider(rule, PushforwardMap::Identity, 0, 1);
  check_rel(p->moment(MultiIndex{2}), 0.5L, 1e-17L);
  for (int k = 0; k <= 10; ++k)
    check_close(p->moment(MultiIndex{k}), oracles::chebyshev_moment(k), 1e-17L);
}

TEST_CASE("pushforward provider: symmetric map moments") {
  const Rule1D rule = gauss_rule(jacobi_recurrence_normalized(-0.5L, -0.5L, 30), 30);
  auto flat = quadrature_pushforward_provider(rule, PushforwardMap::ElementarySymmetric, 0, 2);
  CHECK(std::abs(flat->moment(MultiIndex{1, 0})) < 1e-18L);  // odd symmetry
  check_rel(flat->moment(MultiIndex{0, 0}), 0.5L, 1e-17L);   // 1/2! of mass 1

  auto vand = quadrature_pushforward_provider(rule, PushforwardMap::ElementarySymmetric, 2, 2);
  // (1/2) int (x-y)^2 dw dw = mu2 mu0 - mu1^2 = 1/2
  check_rel(vand->moment(MultiIndex{0, 0}), 0.5L, 1e-17L);
}

TEST_CASE("pushforward consistency: d=1 symmetric map equals identity map") {
  const Rule1D rule = gauss_rule(jacobi_recurrence_normalized(0.0L, 0.0L, 20), 20);
  auto a = quadrature_pushforward_provider(rule, PushforwardMap::ElementarySymmetric, 0, 1);
  auto b = quadrature_pushforward_provider(rule, PushforwardMap::Identity, 0, 1);
  for (int k = 0; k <= 12; ++k) {
    const Real va = a->moment(MultiIndex{k});
    const Real vb = b->moment(MultiIndex{k});
    CHECK(std::abs(va - vb) <= 1e-13L * std::max<Real>(1.0L, std::abs(vb)));
  }
}

TEST_CASE("product moments are permutation symmetric") {
  auto p = std::make_shared<ProductProvider>(chebyshev_provider_1d(), 3);
  const GradedBasis basis(3, 4);
  for (int i = 0; i < basis.size(); ++i) {
    MultiIndex a = basis.at(i);
    MultiIndex s = a;
    std::sort(s.e.begin(), s.e.end());
    CHECK(std::abs(p->moment(a) - p->moment(s)) <= 1e-13L * std::max<Real>(1.0L, std::abs(p->moment(s))));
  }
}

TEST_CASE("hankel-schur test: d=1 collapses, symmap passes, products fail") {
  auto leg = legendre_provider_1d();
  for (int n = 1; n <= 3; ++n) {
    const auto rep = hankel_schur_test(*leg, n, 1e-9L);
    CHECK(rep.deviation == 0.0L);
    CHECK(rep.hankel);
  }

  const WeightDescriptor symmap = parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5");
  auto ps = make_provider(symmap, 0, 8);
  CHECK(hankel_schur_test(*ps, 2, 1e-9L).hankel);

  auto pl = std::make_shared<ProductProvider>(legendre_provider_1d(), 2);
  const auto rep = hankel_schur_test(*pl, 2, 1e-9L);
  CHECK(!rep.hankel);
  CHECK(rep.deviation > 0.05L);
  // the witness pair shares alpha+beta
  CHECK(add(rep.alpha, rep.beta) == add(rep.alpha2, rep.beta2));
}

TEST_CASE("hankel-schur test: singular base matrix is reported") {
  auto pm = std::make_shared<TableProvider>(1, 10, std::map<std::vector<int>, Real>{{{0}, 1.0L}});
  CHECK_THROWS_AS(hankel_schur_test(*pm, 2, 1e-9L), Error);
}

TEST_CASE("moment JSON round trip") {
  auto p = std::make_shared<ProductProvider>(chebyshev_provider_1d(), 2);
  const std::string text = moments_to_json(*p, 4);
  auto q = table_provider_from_json(text);
  CHECK(q->dim() == 2);
  CHECK(q->max_degree() == 4);
  const GradedBasis basis(2, 4);
  for (int i = 0; i < basis.size(); ++i) {
    const double a = static_cast<double>(p->moment(basis.at(i)));
    const double b = static_cast<double>(q->moment(basis.at(i)));
    CHECK(a == b);  // 17 significant digits round-trip doubles exactly
  }
}
