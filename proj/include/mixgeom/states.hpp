#pragma once

#include <vector>

#include "mixgeom/numerics.hpp"

namespace mixgeom {

/// Density matrix: Hermitian, positive semidefinite and of unit trace, all
/// within `kStateTolerance`. Construction validates; instances are immutable.
class MixedState {
 public:
  static constexpr double kStateTolerance = 1e-10;

  explicit MixedState(ComplexMatrix matrix);

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  static MixedState maximally_mixed(Eigen::Index n);

 private:
  ComplexMatrix matrix_;
};

/// Thresholds deciding degeneracy and the kernel under floating point.
/// `eps_deg` is relative to the spectral scale max(range, largest eigenvalue).
struct DecomposeOptions {
  double eps_deg = 1e-8;
  double eps_zero = 1e-12;
};

/// One eigenspace with a nonzero eigenvalue: probability p and an n x r frame
/// with orthonormal columns spanning the eigenspace.
struct SpectralBlock {
  double p;
  ComplexMatrix frame;

  Eigen::Index rank() const noexcept { return frame.cols(); }
  ComplexMatrix projector() const { return frame * frame.adjoint(); }
};

/// Spectral decomposition grouped by distinct nonzero eigenvalue. Blocks are
/// ordered by strictly decreasing p; the kernel only enters through its rank.
class TypedDecomposition {
 public:
  static constexpr double kFrameTolerance = 1e-10;

  /// Validates frame orthonormality, cross-orthogonality, strict ordering,
  /// normalization sum r_i p_i = 1 and the rank count.
  TypedDecomposition(Eigen::Index dim, std::vector<SpectralBlock> blocks);

  Eigen::Index dim() const noexcept { return dim_; }
  const std::vector<SpectralBlock>& blocks() const noexcept { return blocks_; }
  Eigen::Index kernel_rank() const noexcept { return kernel_rank_; }

  /// The type tau = (r_1, ..., r_k) in block order.
  std::vector<Eigen::Index> type() const;

 private:
  Eigen::Index dim_;
  std::vector<SpectralBlock> blocks_;
  Eigen::Index kernel_rank_;
};

TypedDecomposition decompose(const MixedState& rho, const DecomposeOptions& opts = {});

/// exp(-beta H)/Tr exp(-beta H), evaluated in the eigenbasis of H with the
/// exponents shifted by their maximum.
MixedState gibbs(const ComplexMatrix& h, double beta);

/// sum_i p_i w_i w_i^dagger.
MixedState compose(const TypedDecomposition& d);

}  // namespace mixgeom
