#ifndef MVCF_TYPES_HPP
#define MVCF_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace mvcf {

// All internal linear algebra runs in extended precision. Moment matrices are
// Hankel-like and shed digits quickly with degree; the extra mantissa bits keep
// degree <= 8 constructions comfortably inside the documented tolerances.
// Public JSON/CSV output is emitted at double precision.
using Real = long double;
using Complex = std::complex<Real>;

using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using CMatX = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVecX = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Tolerance knobs shared across the pipeline, all relative.
struct Tolerances {
  Real def = 1e-10L;    // smallest/largest singular value floor for definiteness
  Real orth = 1e-9L;    // orthogonality residuals of constructed bases
  Real eval = 1e-9L;    // agreement of direct vs. recursive evaluation
  Real comm = 1e-8L;    // commutator residual of truncated Jacobi matrices
  Real eig = 1e-7L;     // joint-eigenpair verification residual
  Real pair = 1e-8L;    // conjugate-pair matching distance
  Real cub = 1e-9L;     // cubature exactness
  Real fit = 1e-9L;     // exponential-fit residual
  Real kernel = 1e-8L;  // |K_n(z,z)| floor in the simplicity test
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace mvcf

#endif
