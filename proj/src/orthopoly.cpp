#include "mvcf/orthopoly.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace mvcf {

namespace {

MatX pad_rows(const MatX& C, int rows) {
  MatX out = MatX::Zero(rows, C.cols());
  out.topRows(C.rows()) = C;
  return out;
}

int svd_rank(const MatX& M, Real tol) {
  Eigen::JacobiSVD<MatX> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0L) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

}  // namespace

MatX shift_coefficients(const MatX& C, int d, int k, int coord) {
  const GradedBasis from(d, k), to(d, k + 1);
  MatX out = MatX::Zero(to.size(), C.cols());
  for (int r = 0; r < from.size(); ++r)
    out.row(to.position(bumped(from.at(r), coord))) += C.row(r);
  return out;
}

MatX l_product(const MomentProvider& provider, const MatX& P, int kp, const MatX& Q, int kq) {
  const int top = std::max(kp, kq);
  const MomentMatrixSet M = moment_matrix(provider, top);
  const MatX Pp = pad_rows(P, static_cast<int>(M.full.rows()));
  const MatX Qp = pad_rows(Q, static_cast<int>(M.full.rows()));
  return Pp.transpose() * M.full * Qp;
}

MonicBasis build_monic(ProviderPtr provider, int n, Real tol_def) {
  MonicBasis out;
  out.d = provider->dim();
  out.degree = n;
  out.provider = provider;
  for (int k = 0; k <= n; ++k) {
    const MomentMatrixSet M = moment_matrix(*provider, k);
    const int r0 = static_cast<int>(homog_space_dim(out.d, k));
    if (k == 0) {
      out.coeff.push_back(MatX::Identity(1, 1));
      out.schur.push_back(M.full);
      continue;
    }
    MatX X;
    try {
      X = solve_symmetric(M.prev(), M.cross(), tol_def, Err::SingularMomentMatrix);
    } catch (const Error& e) {
      fail(Err::SingularMomentMatrix,
           "build_monic: moment matrix singular at degree " + std::to_string(k - 1));
    }
    MatX C(M.full.rows(), r0);
    C.topRows(M.r_prev()) = -X;
    C.bottomRows(r0) = MatX::Identity(r0, r0);
    MatX H = M.top() - M.cross().transpose() * X;
    H = ((H + H.transpose()) / 2.0L).eval();
    out.coeff.push_back(std::move(C));
    out.schur.push_back(std::move(H));
  }
  return out;
}

SignOrthoBasis sign_orthonormalize(const MonicBasis& monic, Real tol_def) {
  SignOrthoBasis out;
  out.d = monic.d;
  out.degree = monic.degree;
  out.provider = monic.provider;
  for (int k = 0; k <= monic.degree; ++k) {
    Eigen::SelfAdjointEigenSolver<MatX> es(monic.schur[static_cast<std::size_t>(k)]);
    const int r0 = static_cast<int>(es.eigenvalues().size());
    // descending eigenvalues, first significant eigenvector entry positive
    VecX lam(r0);
    MatX Q(r0, r0);
    for (int j = 0; j < r0; ++j) {
      lam(j) = es.eigenvalues()(r0 - 1 - j);
      Q.col(j) = es.eigenvectors().col(r0 - 1 - j);
    }
    const Real lmax = lam.cwiseAbs().maxCoeff();
    if (lmax == 0.0L || lam.cwiseAbs().minCoeff() <= tol_def * lmax)
      fail(Err::NearSingularSchur,
           "sign_orthonormalize: near-singular Schur complement at degree " + std::to_string(k));
    for (int j = 0; j < r0; ++j) {
      const Real colmax = Q.col(j).cwiseAbs().maxCoeff();
      for (int i = 0; i < r0; ++i) {
        if (std::abs(Q(i, j)) > 1e-10L * colmax) {
          if (Q(i, j) < 0.0L) Q.col(j) = -Q.col(j);
          break;
        }
      }
    }
    VecX sign(r0), invsqrt(r0);
    for (int j = 0; j < r0; ++j) {
      sign(j) = lam(j) >= 0.0L ? 1.0L : -1.0L;
      invsqrt(j) = 1.0L / std::sqrt(std::abs(lam(j)));
    }
    // P_k = |Lambda|^{-1/2} Q^T Phat_k, i.e. coefficients  Chat * Q * |Lambda|^{-1/2}
    out.coeff.push_back(monic.coeff[static_cast<std::size_t>(k)] * Q * invsqrt.asDiagonal());
    out.sign.push_back(std::move(sign));
    out.eigvals.push_back(std::move(lam));
    out.eigvecs.push_back(std::move(Q));
  }
  return out;
}

namespace {

// D as the minimum-norm solution of sum_i D_i^T A_i = I: stack the A's and take
// the pseudoinverse rows; the stacked matrix has full column rank r_{k+1}^0.
std::vector<MatX> right_inverse_family(const std::vector<MatX>& Ak, Real tol) {
  const int d = static_cast<int>(Ak.size());
  const int r0 = static_cast<int>(Ak[0].rows());
  const int r1 = static_cast<int>(Ak[0].cols());
  MatX stacked(d * r0, r1);
  for (int i = 0; i < d; ++i) stacked.middleRows(i * r0, r0) = Ak[static_cast<std::size_t>(i)];
  if (svd_rank(stacked, tol) < r1)
    fail(Err::RankDeficientA, "stacked recurrence matrix is rank deficient");
  const MatX gram = stacked.transpose() * stacked;
  const MatX Dstack = stacked * solve_symmetric(gram, MatX::Identity(r1, r1), tol, Err::RankDeficientA);
  std::vector<MatX> out;
  for (int i = 0; i < d; ++i) out.push_back(Dstack.middleRows(i * r0, r0));
  return out;
}

void finish_level(RecurrenceData& rec, int k) {
  const auto& Dk = rec.D[static_cast<std::size_t>(k)];
  MatX E = Dk[0].transpose() * rec.B[static_cast<std::size_t>(k)][0];
  for (int i = 1; i < rec.d; ++i)
    E += Dk[static_cast<std::size_t>(i)].transpose() * rec.B[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  rec.E.push_back(std::move(E));
  if (k == 0) {
    rec.F.emplace_back();
  } else {
    MatX F = Dk[0].transpose() * rec.C[static_cast<std::size_t>(k)][0];
    for (int i = 1; i < rec.d; ++i)
      F += Dk[static_cast<std::size_t>(i)].transpose() * rec.C[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    rec.F.push_back(std::move(F));
  }
}

}  // namespace

RecurrenceData recurrence_from_L(const SignOrthoBasis& basis, const MomentProvider& provider,
                                 Real tol_def) {
  RecurrenceData rec;
  rec.flavor = Flavor::SignOrthonormal;
  rec.d = basis.d;
  rec.levels = basis.degree;  // A_{k,i} needs P_{k+1}
  rec.p0 = basis.p0();
  rec.sign = basis.sign;
  for (int k = 0; k < rec.levels; ++k) {
    const MatX& Ck = basis.coeff[static_cast<std::size_t>(k)];
    const MatX& Ck1 = basis.coeff[static_cast<std::size_t>(k) + 1];
    const VecX& Sk = basis.sign[static_cast<std::size_t>(k)];
    const VecX& Sk1 = basis.sign[static_cast<std::size_t>(k) + 1];
    std::vector<MatX> Ak, Bk, Ck_;
    for (int i = 0; i < rec.d; ++i) {
      const MatX xiC = shift_coefficients(Ck, rec.d, k, i);
      MatX A = l_product(provider, xiC, k + 1, Ck1, k + 1);
      A = Sk.asDiagonal() * A * Sk1.asDiagonal();
      MatX B = l_product(provider, xiC, k + 1, Ck, k);
      B = Sk.asDiagonal() * B * Sk.asDiagonal();
      B = ((B + B.transpose()) / 2.0L).eval();
      if (svd_rank(A, tol_def) < A.rows())
        fail(Err::RankDeficientA, "recurrence_from_L: A rank deficient at degree " +
                                      std::to_string(k) + ", coordinate " + std::to_string(i + 1));
      Ak.push_back(std::move(A));
      Bk.push_back(std::move(B));
      if (k > 0)
        Ck_.push_back(rec.A[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(i)].transpose());
    }
    rec.A.push_back(std::move(Ak));
    rec.B.push_back(std::move(Bk));
    rec.C.push_back(std::move(Ck_));
    rec.D.push_back(right_inverse_family(rec.A.back(), tol_def));
    finish_level(rec, k);
  }
  return rec;
}

RecurrenceData recurrence_monic(const MonicBasis& monic, Real tol_def) {
  RecurrenceData rec;
  rec.flavor = Flavor::Monic;
  rec.d = monic.d;
  rec.levels = monic.degree;
  rec.p0 = 1.0L;
  for (int k = 0; k <= monic.degree; ++k)
    rec.sign.push_back(VecX::Ones(homog_space_dim(rec.d, k)));
  for (int k = 0; k < rec.levels; ++k) {
    const GradedBasis upto(rec.d, k + 1);
    const int prev_rows = static_cast<int>(poly_space_dim(rec.d, k - 1));
    const int deg_rows = upto.block_size(k);
    const MatX& Ck = monic.coeff[static_cast<std::size_t>(k)];
    const MatX& Ck1 = monic.coeff[static_cast<std::size_t>(k) + 1];
    std::vector<MatX> Ak, Bk, Ck_;
    for (int i = 0; i < rec.d; ++i) {
      MatX A = shift_matrix(rec.d, k, i);
      // compare coefficients in the degree-k block:
      // x_i Phat_k = A Phat_{k+1} + B Phat_k + C Phat_{k-1}, C carries no
      // degree-k rows and the top blocks of Phat are identities
      const MatX xiC = shift_coefficients(Ck, rec.d, k, i);
      const MatX lhs_degk = xiC.middleRows(prev_rows, deg_rows);
      const MatX p1_degk = Ck1.middleRows(prev_rows, deg_rows);
      MatX B = (lhs_degk - p1_degk * A.transpose()).transpose();
      Ak.push_back(std::move(A));
      Bk.push_back(std::move(B));
      if (k > 0) {
        const MatX& Hk = monic.schur[static_cast<std::size_t>(k)];
        const MatX& Hkm1 = monic.schur[static_cast<std::size_t>(k) - 1];
        const MatX L = shift_matrix(rec.d, k - 1, i);
        // C = H_k L^T H_{k-1}^{-1}  <=>  H_{k-1} C^T = L H_k
        const MatX Ct = solve_symmetric(Hkm1, L * Hk, tol_def, Err::SingularSchur);
        Ck_.push_back(Ct.transpose());
      }
    }
    rec.A.push_back(std::move(Ak));
    rec.B.push_back(std::move(Bk));
    rec.C.push_back(std::move(Ck_));
    rec.D.push_back(right_inverse_family(rec.A.back(), tol_def));
    finish_level(rec, k);
  }
  return rec;
}

namespace {

template <typename Basis>
std::vector<CVecX> evaluate_from_coeff(const Basis& basis, int m, std::span<const Complex> z) {
  if (m > basis.degree) fail(Err::IncompleteRecurrence, "evaluate: basis not built that far");
  const GradedBasis full(basis.d, m);
  const CVecX mono = full.monomials_at(z);
  std::vector<CVecX> out;
  for (int k = 0; k <= m; ++k) {
    const MatX& C = basis.coeff[static_cast<std::size_t>(k)];
    out.push_back(C.transpose().cast<Complex>() * mono.head(C.rows()));
  }
  return out;
}

}  // namespace

std::vector<CVecX> evaluate_stacked(const MonicBasis& basis, int m, std::span<const Complex> z) {
  return evaluate_from_coeff(basis, m, z);
}

std::vector<CVecX> evaluate_stacked(const SignOrthoBasis& basis, int m, std::span<const Complex> z) {
  return evaluate_from_coeff(basis, m, z);
}

std::vector<CVecX> evaluate_stacked(const RecurrenceData& rec, int m, std::span<const Complex> z) {
  if (m > rec.levels) fail(Err::IncompleteRecurrence, "evaluate: recurrence not built that far");
  std::vector<CVecX> out;
  out.push_back(CVecX::Constant(1, Complex(rec.p0, 0.0L)));
  for (int k = 0; k < m; ++k) {
    const VecX& Sk = rec.sign[static_cast<std::size_t>(k)];
    CVecX acc = CVecX::Zero(homog_space_dim(rec.d, k + 1));
    const CVecX scaled = Sk.cast<Complex>().asDiagonal() * out.back();
    for (int i = 0; i < rec.d; ++i) {
      acc += rec.D[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].transpose().cast<Complex>() *
             (z[static_cast<std::size_t>(i)] * scaled);
    }
    acc -= rec.E[static_cast<std::size_t>(k)].cast<Complex>() * out.back();
    if (k > 0) acc -= rec.F[static_cast<std::size_t>(k)].cast<Complex>() * out[static_cast<std::size_t>(k) - 1];
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<CVecX> evaluate_derivative(const SignOrthoBasis& basis, int m,
                                       std::span<const Complex> z, int j) {
  if (m > basis.degree) fail(Err::IncompleteRecurrence, "evaluate_derivative: basis not built that far");
  const GradedBasis full(basis.d, m);
  CVecX dmono = CVecX::Zero(full.size());
  std::vector<Complex> zt(z.begin(), z.end());
  for (int p = 0; p < full.size(); ++p) {
    const MultiIndex& a = full.at(p);
    if (a[j] == 0) continue;
    MultiIndex down = a;
    down.e[static_cast<std::size_t>(j)] -= 1;
    dmono(p) = Real(a[j]) * multi_power(zt, down);
  }
  std::vector<CVecX> out;
  for (int k = 0; k <= m; ++k) {
    const MatX& C = basis.coeff[static_cast<std::size_t>(k)];
    out.push_back(C.transpose().cast<Complex>() * dmono.head(C.rows()));
  }
  return out;
}

std::vector<CVecX> evaluate_checked(const SignOrthoBasis& basis, const RecurrenceData& rec, int m,
                                    std::span<const Complex> z, Real tol) {
  auto direct = evaluate_stacked(basis, m, z);
  auto recursive = evaluate_stacked(rec, m, z);
  Real scale = 1.0L;
  for (const auto& v : direct) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (int k = 0; k <= m; ++k) {
    const Real dev = (direct[static_cast<std::size_t>(k)] - recursive[static_cast<std::size_t>(k)])
                         .cwiseAbs()
                         .maxCoeff();
    if (dev > tol * scale)
      throw std::runtime_error("evaluate_checked: direct and recursive evaluation disagree");
  }
  return direct;
}

Real orthogonality_residual(const SignOrthoBasis& basis, const MomentProvider& provider) {
  Real worst = 0.0L;
  for (int k = 1; k <= basis.degree; ++k) {
    for (int j = 0; j < k; ++j) {
      const MatX G = l_product(provider, basis.coeff[static_cast<std::size_t>(k)], k,
                               basis.coeff[static_cast<std::size_t>(j)], j);
      worst = std::max(worst, G.cwiseAbs().maxCoeff());
    }
    const MatX Gkk = l_product(provider, basis.coeff[static_cast<std::size_t>(k)], k,
                               basis.coeff[static_cast<std::size_t>(k)], k);
    const MatX dev = Gkk - MatX(basis.sign[static_cast<std::size_t>(k)].asDiagonal());
    worst = std::max(worst, dev.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace mvcf
