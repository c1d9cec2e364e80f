#include "mixgeom/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixgeom/errors.hpp"

namespace mixgeom {

MixedState::MixedState(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::InvalidState, "density matrix must be square and nonempty");
  }
  if (!matrix_.allFinite()) {
    throw Error(ErrorCode::InvalidState, "density matrix has non-finite entries");
  }
  if (hermiticity_defect(matrix_) > kStateTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  const Complex trace = matrix_.trace();
  if (std::abs(trace - 1.0) > kStateTolerance) {
    throw Error(ErrorCode::InvalidState, "trace is " + std::to_string(trace.real()));
  }
  const EighResult es = eigh(matrix_);
  if (es.eigenvalues(0) < -kStateTolerance) {
    throw Error(ErrorCode::InvalidState,
                "negative eigenvalue " + std::to_string(es.eigenvalues(0)));
  }
}

MixedState MixedState::maximally_mixed(Eigen::Index n) {
  return MixedState(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

TypedDecomposition::TypedDecomposition(Eigen::Index dim, std::vector<SpectralBlock> blocks)
    : dim_(dim), blocks_(std::move(blocks)), kernel_rank_(dim) {
  if (dim <= 0 || blocks_.empty()) {
    throw Error(ErrorCode::InvalidState, "decomposition needs a positive dimension and a block");
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const SpectralBlock& b = blocks_[i];
    if (b.frame.rows() != dim || b.rank() <= 0) {
      throw Error(ErrorCode::InvalidState, "frame shape does not match dimension");
    }
    if (!(b.p > 0.0)) {
      throw Error(ErrorCode::InvalidState, "block probability must be positive");
    }
    if (i > 0 && !(blocks_[i - 1].p > b.p)) {
      throw Error(ErrorCode::InvalidState, "block probabilities must strictly decrease");
    }
    const Eigen::Index r = b.rank();
    if ((b.frame.adjoint() * b.frame - ComplexMatrix::Identity(r, r)).norm() > kFrameTolerance) {
      throw Error(ErrorCode::InvalidState, "frame columns are not orthonormal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((blocks_[j].frame.adjoint() * b.frame).norm() > kFrameTolerance) {
        throw Error(ErrorCode::InvalidState, "frames of distinct blocks overlap");
      }
    }
    norm += static_cast<double>(r) * b.p;
    kernel_rank_ -= r;
  }
  if (kernel_rank_ < 0) {
    throw Error(ErrorCode::InvalidState, "ranks exceed the dimension");
  }
  if (std::abs(norm - 1.0) > MixedState::kStateTolerance) {
    throw Error(ErrorCode::InvalidState, "sum of r_i p_i is " + std::to_string(norm));
  }
}

std::vector<Eigen::Index> TypedDecomposition::type() const {
  std::vector<Eigen::Index> tau;
  tau.reserve(blocks_.size());
  for (const SpectralBlock& b : blocks_) tau.push_back(b.rank());
  return tau;
}

TypedDecomposition decompose(const MixedState& rho, const DecomposeOptions& opts) {
  if (!(opts.eps_deg > 0.0) || !(opts.eps_zero > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "eps_deg and eps_zero must be positive");
  }
  const EighResult es = eigh(rho.matrix());
  const Eigen::Index n = rho.dim();
  const RealVector& lambda = es.eigenvalues;

  const double range = lambda(n - 1) - lambda(0);
  const double tol = opts.eps_deg * std::max(range, lambda(n - 1));

  // Walk from the largest eigenvalue down, single-linkage on sorted values.
  std::vector<SpectralBlock> blocks;
  Eigen::Index hi = n - 1;
  while (hi >= 0 && lambda(hi) >= opts.eps_zero) {
    Eigen::Index lo = hi;
    while (lo - 1 >= 0 && lambda(lo - 1) >= opts.eps_zero) {
      const double gap = lambda(lo) - lambda(lo - 1);
      if (gap >= tol && gap < 2.0 * tol) {
        throw Error(ErrorCode::AmbiguousClustering,
                    "eigenvalue gap " + std::to_string(gap) + " within [eps, 2 eps) of " +
                        std::to_string(tol));
      }
      if (gap >= tol) break;
      --lo;
    }
    const Eigen::Index r = hi - lo + 1;
    const double p = lambda.segment(lo, r).mean();
    blocks.push_back({p, es.eigenvectors.middleCols(lo, r)});
    hi = lo - 1;
  }
  if (blocks.empty()) {
    throw Error(ErrorCode::InvalidState, "no eigenvalue above eps_zero");
  }
  return TypedDecomposition(n, std::move(blocks));
}

MixedState gibbs(const ComplexMatrix& h, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and nonnegative");
  }
  const EighResult es = eigh(h);
  const RealVector exponents = -beta * es.eigenvalues;
  const double shift = exponents.maxCoeff();
  RealVector weights = (exponents.array() - shift).exp();
  weights /= weights.sum();
  ComplexMatrix rho = es.eigenvectors * weights.cast<Complex>().asDiagonal() *
                      es.eigenvectors.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return MixedState(std::move(rho));
}

MixedState compose(const TypedDecomposition& d) {
  ComplexMatrix rho = ComplexMatrix::Zero(d.dim(), d.dim());
  for (const SpectralBlock& b : d.blocks()) {
    rho.noalias() += b.p * (b.frame * b.frame.adjoint());
  }
  rho = 0.5 * (rho + rho.adjoint());
  // Kernel eigenvalues dropped by decompose may leave a trace defect of order
  // n * eps_zero; renormalize so the result is a valid state again.
  rho /= rho.trace().real();
  return MixedState(std::move(rho));
}

}  // namespace mixgeom
