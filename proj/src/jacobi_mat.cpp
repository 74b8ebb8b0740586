#include "mvcf/jacobi_mat.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>

#include "mvcf/cubature.hpp"

namespace mvcf {

TruncatedJacobi build_truncated(const RecurrenceData& rec, int n) {
  if (n < 1) throw std::invalid_argument("build_truncated: need n >= 1");
  if (rec.levels < n - 1 || static_cast<int>(rec.sign.size()) < n)
    fail(Err::IncompleteRecurrence,
         "build_truncated: recurrence holds " + std::to_string(rec.levels) +
             " levels, need degree " + std::to_string(n - 1));
  TruncatedJacobi tj;
  tj.d = rec.d;
  tj.n = n;
  tj.flavor = rec.flavor;
  tj.offsets.resize(static_cast<std::size_t>(n) + 1);
  tj.offsets[0] = 0;
  for (int k = 0; k < n; ++k)
    tj.offsets[static_cast<std::size_t>(k) + 1] =
        tj.offsets[static_cast<std::size_t>(k)] + static_cast<int>(homog_space_dim(rec.d, k));
  const int N = tj.offsets.back();
  tj.sign.resize(N);
  for (int k = 0; k < n; ++k)
    tj.sign.segment(tj.offsets[static_cast<std::size_t>(k)],
                    static_cast<int>(homog_space_dim(rec.d, k))) =
        rec.sign[static_cast<std::size_t>(k)];
  for (int i = 0; i < rec.d; ++i) {
    MatX J = MatX::Zero(N, N);
    for (int k = 0; k < n; ++k) {
      const int o = tj.offsets[static_cast<std::size_t>(k)];
      const int s = static_cast<int>(homog_space_dim(rec.d, k));
      J.block(o, o, s, s) = rec.B[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (k + 1 < n) {
        const int o1 = tj.offsets[static_cast<std::size_t>(k) + 1];
        const int s1 = static_cast<int>(homog_space_dim(rec.d, k + 1));
        J.block(o, o1, s, s1) = rec.A[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        J.block(o1, o, s1, s) = rec.C[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(i)];
      }
    }
    tj.mult.push_back(tj.sign.asDiagonal() * J);
    tj.J.push_back(std::move(J));
  }
  if (rec.levels >= n) {
    for (int i = 0; i < rec.d; ++i) {
      tj.top_A.push_back(rec.A[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(i)]);
      if (rec.flavor == Flavor::Monic && n >= 1 && !rec.C[static_cast<std::size_t>(n) - 1].empty())
        tj.top_C.push_back(rec.C[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(i)]);
    }
    tj.top_sign = rec.sign[static_cast<std::size_t>(n)];
  }
  return tj;
}

CommutativityReport commutativity_report(const TruncatedJacobi& tj, Real tol) {
  CommutativityReport rep;
  rep.n = tj.n;
  rep.tol = tol;
  Real scale = 1.0L;
  for (const auto& J : tj.J) scale = std::max(scale, J.cwiseAbs().maxCoeff());
  const Real scale2 = scale * scale;
  for (int i = 0; i < tj.d; ++i) {
    for (int j = i + 1; j < tj.d; ++j) {
      const MatX comm =
          tj.J[static_cast<std::size_t>(i)] * tj.sign.asDiagonal() * tj.J[static_cast<std::size_t>(j)] -
          tj.J[static_cast<std::size_t>(j)] * tj.sign.asDiagonal() * tj.J[static_cast<std::size_t>(i)];
      const Real r = comm.cwiseAbs().maxCoeff() / scale2;
      rep.pair_full.emplace_back(i, j, r);
      rep.worst_full = std::max(rep.worst_full, r);
    }
  }
  if (!tj.top_A.empty()) {
    for (int i = 0; i < tj.d; ++i) {
      for (int j = i + 1; j < tj.d; ++j) {
        MatX top;
        if (tj.flavor == Flavor::SignOrthonormal) {
          const MatX lhs = tj.top_A[static_cast<std::size_t>(i)] * tj.top_sign.asDiagonal() *
                           tj.top_A[static_cast<std::size_t>(j)].transpose();
          top = lhs - lhs.transpose();
        } else if (!tj.top_C.empty() && tj.n >= 2) {
          // A_{n-2,i} sits in the last superdiagonal block of J_i
          const int o1 = tj.offsets[static_cast<std::size_t>(tj.n) - 2];
          const int o2 = tj.offsets[static_cast<std::size_t>(tj.n) - 1];
          const int s1 = o2 - o1;
          const int s2 = tj.size() - o2;
          const MatX An2i = tj.J[static_cast<std::size_t>(i)].block(o1, o2, s1, s2);
          const MatX An2j = tj.J[static_cast<std::size_t>(j)].block(o1, o2, s1, s2);
          top = An2i * tj.top_C[static_cast<std::size_t>(j)] - An2j * tj.top_C[static_cast<std::size_t>(i)];
        } else {
          continue;
        }
        const Real r = top.cwiseAbs().maxCoeff() / scale2;
        rep.pair_top.emplace_back(i, j, r);
        rep.worst_top = std::max(rep.worst_top, r);
      }
    }
  }
  rep.ok = rep.worst_full <= tol && rep.worst_top <= tol;
  return rep;
}

bool node_lex_less(const CVecX& a, const CVecX& b, Real fuzz) {
  Real scale = 1.0L;
  scale = std::max(scale, a.cwiseAbs().maxCoeff());
  scale = std::max(scale, b.cwiseAbs().maxCoeff());
  const Real eps = fuzz * scale;
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a(i).real() - b(i).real()) > eps) return a(i).real() < b(i).real();
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a(i).imag() - b(i).imag()) > eps) return a(i).imag() < b(i).imag();
  return false;
}

ZeroSet common_zeros(const TruncatedJacobi& tj, const SignOrthoBasis& basis, const Tolerances& tol,
                     std::uint64_t seed) {
  const CommutativityReport comm = commutativity_report(tj, tol.comm);
  if (!comm.ok)
    fail(Err::CommutativityFailed,
         "common_zeros: truncated Jacobi matrices do not commute at degree " + std::to_string(tj.n) +
             " (residual " + std::to_string(static_cast<double>(std::max(comm.worst_full, comm.worst_top))) + ")");

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VecX c(tj.d);
  for (int i = 0; i < tj.d; ++i) c(i) = static_cast<Real>(normal(gen));
  c /= c.norm();

  MatX M = MatX::Zero(tj.size(), tj.size());
  for (int i = 0; i < tj.d; ++i) M += c(i) * tj.mult[static_cast<std::size_t>(i)];

  Eigen::EigenSolver<MatX> es(M);
  if (es.info() != Eigen::Success)
    fail(Err::InconsistentEigenpair, "common_zeros: eigen decomposition failed");
  const CVecX theta = es.eigenvalues();
  const CMatX V = es.eigenvectors();

  Real jac_scale = 1.0L;
  for (const auto& J : tj.J) jac_scale = std::max(jac_scale, J.cwiseAbs().maxCoeff());
  const Real theta_scale = std::max(Real(1.0L), theta.cwiseAbs().maxCoeff());

  // degree-1 block of the coefficient matrix of P_1; its top block is
  // nonsingular, so the point can be solved from the stacked values
  const MatX& C1 = basis.coeff[1];
  const MatX W = C1.bottomRows(tj.d);
  const VecX c0 = C1.row(0).transpose();
  Eigen::PartialPivLU<CMatX> Wlu(W.transpose().cast<Complex>());

  ZeroSet out;
  out.d = tj.d;
  out.n = tj.n;
  out.expected = poly_space_dim(tj.d, tj.n - 1);

  for (int m = 0; m < theta.size(); ++m) {
    CVecX xi = V.col(m);
    ZeroPoint pt;
    if (tj.n == 1) {
      pt.z.resize(tj.d);
      const Complex nrm2 = (xi.adjoint() * xi)(0, 0);
      for (int i = 0; i < tj.d; ++i)
        pt.z(i) = (xi.adjoint() * tj.mult[static_cast<std::size_t>(i)] * xi)(0, 0) / nrm2;
    } else {
      if (std::abs(xi(0)) < 1e-10L) {
        // a joint eigenvector has the nonzero constant P_0 in its leading slot
        pt.suspect = true;
        pt.z = CVecX::Zero(tj.d);
        out.points.push_back(pt);
        continue;
      }
      xi *= Complex(basis.p0(), 0.0L) / xi(0);
      pt.z = Wlu.solve(xi.segment(1, tj.d) - c0.cast<Complex>());
    }

    const Real xin = xi.norm();
    for (int i = 0; i < tj.d; ++i) {
      const CVecX resid = tj.J[static_cast<std::size_t>(i)].cast<Complex>() * xi -
                          pt.z(i) * (tj.sign.cast<Complex>().asDiagonal() * xi);
      pt.eig_residual =
          std::max(pt.eig_residual, resid.norm() / (xin * (jac_scale + std::abs(pt.z(i)))));
    }
    const Complex combo = (c.cast<Complex>().transpose() * pt.z)(0, 0);
    const Real combo_dev = std::abs(combo - theta(m)) / theta_scale;

    std::vector<Complex> zz(pt.z.data(), pt.z.data() + pt.z.size());
    const auto vals = evaluate_stacked(basis, tj.n, zz);
    Real val_scale = 1.0L;
    for (const auto& v : vals) val_scale = std::max(val_scale, v.cwiseAbs().maxCoeff());
    pt.pn_residual = vals.back().cwiseAbs().maxCoeff() / val_scale;
    if (tj.n >= 2) {
      CVecX direct(tj.size());
      for (int k = 0; k < tj.n; ++k)
        direct.segment(tj.offsets[static_cast<std::size_t>(k)],
                       vals[static_cast<std::size_t>(k)].size()) = vals[static_cast<std::size_t>(k)];
      pt.basis_match = (direct - xi).norm() / std::max(Real(1.0L), direct.norm());
    }

    if (pt.eig_residual > tol.eig || combo_dev > tol.eig || pt.pn_residual > 1e2L * tol.eig) {
      int near = 0;
      for (int l = 0; l < theta.size(); ++l)
        if (l != m && std::abs(theta(l) - theta(m)) <= 1e3L * tol.pair * theta_scale) ++near;
      if (near > 0 || pt.eig_residual <= 1e3L * tol.eig) {
        pt.suspect = true;
      } else {
        fail(Err::InconsistentEigenpair,
             "common_zeros: eigenpair fails the per-coordinate verification at degree " +
                 std::to_string(tj.n));
      }
    }
    out.points.push_back(pt);
  }

  // coincident points and unpaired complex points indicate defects
  for (std::size_t a = 0; a < out.points.size(); ++a) {
    for (std::size_t b = a + 1; b < out.points.size(); ++b) {
      if ((out.points[a].z - out.points[b].z).cwiseAbs().maxCoeff() <= tol.pair) {
        out.points[a].suspect = true;
        out.points[b].suspect = true;
      }
    }
  }
  for (std::size_t a = 0; a < out.points.size(); ++a) {
    if (out.points[a].z.imag().cwiseAbs().maxCoeff() <= tol.pair) continue;
    bool paired = false;
    for (std::size_t b = 0; b < out.points.size(); ++b) {
      if (a != b &&
          (out.points[a].z.conjugate() - out.points[b].z).cwiseAbs().maxCoeff() <= 1e2L * tol.pair) {
        paired = true;
        break;
      }
    }
    if (!paired) out.points[a].suspect = true;
  }

  std::sort(out.points.begin(), out.points.end(),
            [](const ZeroPoint& a, const ZeroPoint& b) { return node_lex_less(a.z, b.z); });
  return out;
}

void simplicity_check(ZeroSet& zeros, const SignOrthoBasis& basis, const Tolerances& tol) {
  const KernelEvaluator kernel(basis, zeros.n);
  for (auto& pt : zeros.points) {
    std::vector<Complex> z(pt.z.data(), pt.z.data() + pt.z.size());
    pt.kernel_value = kernel.diag(z);
    const auto vals = evaluate_stacked(basis, zeros.n, z);
    Real abs2 = 0.0L;
    for (const auto& v : vals) abs2 += v.squaredNorm();
    pt.simple = !pt.suspect && std::abs(pt.kernel_value) > tol.kernel * abs2;
    if (basis.degree >= zeros.n + 1) {
      const auto vnext = evaluate_stacked(basis, zeros.n + 1, z);
      pt.pnext_checked = true;
      if (vnext.back().cwiseAbs().maxCoeff() <= tol.kernel * std::sqrt(abs2)) pt.simple = false;
    }
  }
}

}  // namespace mvcf
