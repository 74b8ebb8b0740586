#include <doctest.h>

#include <cmath>

#include "mvcf/cubature.hpp"
#include "mvcf/families.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mvcf;

TEST_CASE("jacobi polynomials: values and normalization") {
  CHECK(jacobi_poly({0.3L, 0.7L}, 0, 0.42L) == 1.0L);
  check_rel(jacobi_poly({0.0L, 0.0L}, 1, 0.37L), 0.37L, 1e-18L);  // legendre P_1
  check_rel(jacobi_poly({0.0L, 0.0L}, 2, 0.5L), (3.0L * 0.25L - 1.0L) / 2.0L, 1e-16L);  // -1/8
  // P_n(1) = C(n+a, n)
  const Real a = 0.5L, b = 1.5L;
  Real binom = 1.0L;
  for (int n = 1; n <= 5; ++n) {
    binom *= (n + a) / n;
    check_rel(jacobi_poly({a, b}, n, 1.0L), binom, 1e-15L);
  }
  // coefficient vectors evaluate to the same thing
  const VecX c3 = jacobi_poly_coefficients({a, b}, 3);
  Real t = -0.62L, acc = 0.0L, tp = 1.0L;
  for (int i = 0; i < c3.size(); ++i) {
    acc += c3(i) * tp;
    tp *= t;
  }
  check_rel(acc, jacobi_poly({a, b}, 3, t), 1e-15L);
}

TEST_CASE("even generalized gegenbauer: evenness and reduction to legendre") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const Real x = static_cast<Real>(uni(gen));
    check_close(gen_gegenbauer_even(0.8L, 1.3L, 2, x), gen_gegenbauer_even(0.8L, 1.3L, 2, -x),
                1e-16L);
  }
  // zeros of the degree-4 polynomial are +-sqrt((1+s)/2) over the inner zeros s
  const Real lam = 0.9L, mu = 1.4L;
  const Rule1D inner = gauss_rule(jacobi_recurrence(lam - 0.5L, mu - 0.5L, 2), 2);
  for (int k = 0; k < 2; ++k) {
    const Real root = std::sqrt((1.0L + inner.nodes(k)) / 2.0L);
    CHECK(std::abs(gen_gegenbauer_even(lam, mu, 2, root)) <= 1e-14L);
    CHECK(std::abs(gen_gegenbauer_even(lam, mu, 2, -root)) <= 1e-14L);
  }
  // lambda = 1/2, mu = 0 degenerates to even-degree legendre: same zero set
  const Rule1D leg6 = gauss_rule(jacobi_recurrence_normalized(0.0L, 0.0L, 6), 6);
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(gen_gegenbauer_even(0.5L, 0.0L, 3, leg6.nodes(k))) <= 1e-14L);
}

TEST_CASE("signed gegenbauer: degree one is 1 + t") {
  const VecX p1 = signed_gegenbauer_poly({0.5L, 1.0L}, 1);
  REQUIRE(p1.size() == 2);
  check_rel(p1(0), 1.0L, 1e-15L);
  CHECK(p1(1) == 1.0L);
}

TEST_CASE("signed gegenbauer: closed-form zeros match the moment pipeline") {
  for (const auto params : {SignedGegenbauerWeight{0.5L, 1.0L}, SignedGegenbauerWeight{1.5L, 2.0L}}) {
    CAPTURE(params.lambda);
    CAPTURE(params.mu);
    auto provider = gegenbauer_provider_1d(params.lambda, params.mu, 16);
    const SignOrthoBasis basis = sign_orthonormalize(build_monic(provider, 7));
    const RecurrenceData rec = recurrence_from_L(basis, *provider);
    for (int n = 1; n <= 6; ++n) {
      const ZeroSet zeros = common_zeros(build_truncated(rec, n), basis);
      const VecX ref = signed_gegenbauer_zeros(params, n);
      REQUIRE(zeros.complete());
      for (int k = 0; k < n; ++k) {
        CHECK(std::abs(zeros.points[static_cast<std::size_t>(k)].z(0).real() - ref(k)) <= 1e-7L);
        CHECK(std::abs(zeros.points[static_cast<std::size_t>(k)].z(0).imag()) <= 1e-10L);
      }
      // all inside [-1, 1], simple by distinctness
      for (int k = 0; k + 1 < n; ++k) CHECK(ref(k) < ref(k + 1) - 1e-6L);
      CHECK(ref(0) >= -1.0L - 1e-14L);
      CHECK(ref(n - 1) <= 1.0L + 1e-14L);
    }
  }
}

TEST_CASE("signed gegenbauer: closed-form polynomial values vanish at pipeline zeros") {
  const SignedGegenbauerWeight w{0.5L, 1.0L};
  for (int n = 1; n <= 6; ++n) {
    const VecX coeff = signed_gegenbauer_poly(w, n);
    const VecX zeros = signed_gegenbauer_zeros(w, n);
    for (int k = 0; k < n; ++k) {
      Real acc = 0.0L, tp = 1.0L;
      for (int i = 0; i < coeff.size(); ++i) {
        acc += coeff(i) * tp;
        tp *= zeros(k);
      }
      CHECK(std::abs(acc) <= 1e-13L);
    }
  }
}

TEST_CASE("signed gegenbauer: even-degree squared norms are negative for integer mu") {
  auto provider = gegenbauer_provider_1d(0.5L, 1.0L, 16);
  const MonicBasis monic = build_monic(provider, 6);
  for (int k = 2; k <= 6; k += 2) CHECK(monic.schur[static_cast<std::size_t>(k)](0, 0) < 0.0L);
}

TEST_CASE("symmetric polynomials: constants, symmetry, orthogonality") {
  const auto base = base_recurrence_1d("chebyshev", 10);

  // d=2, partition (0,0): the permutation sum is 2 p_0^2 = 2 (unit mass)
  std::vector<Real> x = {0.3L, -0.5L};
  check_rel(symmetric_polynomial(base, -1, MultiIndex{0, 0}, x), 2.0L, 1e-15L);

  // symmetry under coordinate swap, both signs
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<Real> p = {static_cast<Real>(uni(gen)), static_cast<Real>(uni(gen))};
    if (std::abs(p[0] - p[1]) < 1e-3L) continue;
    std::vector<Real> q = {p[1], p[0]};
    for (int sign : {-1, +1}) {
      const MultiIndex part{3, 1};
      check_close(symmetric_polynomial(base, sign, part, p),
                  symmetric_polynomial(base, sign, part, q), 1e-13L);
    }
  }

  // orthogonality over the product weight by an independent closed-form
  // tensor rule: (1/2) sum Q_a Q_b w w = m_1! ... eps delta_{a,b}
  std::vector<long double> nodes, weights;
  oracles::chebyshev_gauss(24, nodes, weights);
  auto integrate = [&](const MultiIndex& a, const MultiIndex& b, int sign) {
    Real acc = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        std::vector<Real> pt = {nodes[i], nodes[j]};
        if (std::abs(pt[0] - pt[1]) < 1e-12L && sign > 0) continue;
        Real f = symmetric_polynomial(base, sign, a, pt) * symmetric_polynomial(base, sign, b, pt);
        if (sign > 0) {
          const Real J = pt[0] - pt[1];
          f *= J * J;
        }
        acc += f * weights[i] * weights[j];
      }
    }
    return acc / 2.0L;
  };
  std::vector<MultiIndex> partitions;
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int a2 = 0; a2 <= a1; ++a2)
      if (a1 + a2 <= 3) partitions.push_back(MultiIndex{a1, a2});
  for (std::size_t a = 0; a < partitions.size(); ++a) {
    for (std::size_t b = 0; b < partitions.size(); ++b) {
      const Real val = integrate(partitions[a], partitions[b], -1);
      if (a != b) {
        CHECK(std::abs(val) <= 1e-12L);
      } else {
        // m_1! m_2! for the multiplicities of the partition (all eps = +1 here)
        const Real want = partitions[a][0] == partitions[a][1] ? 2.0L : 1.0L;
        check_rel(val, want, 1e-12L);
      }
      const Real vplus = integrate(partitions[a], partitions[b], +1);
      if (a != b)
        CHECK(std::abs(vplus) <= 1e-12L);
      else
        check_rel(vplus, 1.0L, 1e-12L);
    }
  }
}

TEST_CASE("symmetric polynomials: the +1/2 family rejects confluent points") {
  const auto base = base_recurrence_1d("chebyshev", 6);
  std::vector<Real> x = {0.4L, 0.4L};
  CHECK_THROWS_AS(symmetric_polynomial(base, +1, MultiIndex{2, 0}, x), Error);
}

TEST_CASE("partition counts match the homogeneous dimension for d=2") {
  for (int n = 0; n <= 5; ++n)
    CHECK(static_cast<long long>(partitions_with_top(2, n).size()) == homog_space_dim(2, n));
}

TEST_CASE("pushforward basis check: mapped symmetric polynomials span the pipeline space") {
  const auto base = base_recurrence_1d("chebyshev", 64);
  for (int sign : {-1, +1}) {
    for (int n : {1, 2}) {
      CAPTURE(sign);
      CAPTURE(n);
      CHECK(pushforward_basis_check(base, 2, sign, n) <= 1e-8L);
    }
  }
}

TEST_CASE("weight descriptors: grammar") {
  CHECK(parse_weight_descriptor("legendre").family == WeightDescriptor::Family::Legendre);
  CHECK(parse_weight_descriptor("chebyshev").family == WeightDescriptor::Family::Chebyshev);
  const auto geg = parse_weight_descriptor("gegenbauer:lambda=0.5,mu=1");
  CHECK(geg.lambda == 0.5L);
  CHECK(geg.mu == 1.0L);
  const auto sym = parse_weight_descriptor("symmap:base=legendre,d=3,sign=+0.5");
  CHECK(sym.base == "legendre");
  CHECK(sym.d == 3);
  CHECK(sym.sign_half == +1);
  CHECK(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5").sign_half == -1);

  for (const char* bad : {"fourier", "gegenbauer:lambda=0.5", "symmap:base=hermite,d=2,sign=-0.5",
                          "symmap:base=chebyshev,d=2,sign=0.3", "table:"}) {
    CAPTURE(bad);
    try {
      parse_weight_descriptor(bad);
      FAIL("descriptor should have been rejected");
    } catch (const Error& e) {
      CHECK(e.code() == Err::BadDescriptor);
    }
  }
}

TEST_CASE("provider factory: dimensions and moment spot checks") {
  auto leg2 = make_provider(parse_weight_descriptor("legendre"), 2, 8);
  CHECK(leg2->dim() == 2);
  check_rel(leg2->moment(MultiIndex{2, 2}), 1.0L / 9.0L, 1e-16L);

  auto sym = make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 0, 8);
  CHECK(sym->dim() == 2);
  CHECK(std::abs(sym->moment(MultiIndex{1, 0})) <= 1e-18L);

  CHECK_THROWS_AS(
      make_provider(parse_weight_descriptor("symmap:base=chebyshev,d=2,sign=-0.5"), 3, 8), Error);
}
