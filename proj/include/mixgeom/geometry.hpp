#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mixgeom/states.hpp"

namespace mixgeom {

/// A point of the total space over a fixed type: the same data as a
/// TypedDecomposition, but the frames are a definite choice rather than
/// representatives of an equivalence class.
class BundlePoint {
 public:
  explicit BundlePoint(TypedDecomposition d) : d_(std::move(d)) {}

  Eigen::Index dim() const noexcept { return d_.dim(); }
  const std::vector<SpectralBlock>& blocks() const noexcept { return d_.blocks(); }
  std::vector<Eigen::Index> type() const { return d_.type(); }
  const TypedDecomposition& decomposition() const noexcept { return d_; }

  /// Right-multiplies frame i by the r_i x r_i unitary u.
  BundlePoint gauged(std::size_t block, const ComplexMatrix& u) const;

 private:
  TypedDecomposition d_;
};

/// Fisher-Rao (classical) and eigenvalue-weighted Grassmannian (quantum)
/// contributions to a metric coefficient.
struct MetricValue {
  double classical = 0.0;
  double quantum = 0.0;
  double total = 0.0;

  static MetricValue from_parts(double classical, double quantum) {
    return {classical, quantum, classical + quantum};
  }
};

/// sum_i sqrt(p_i q_i) Tr(w_i^dagger v_i).
Complex hermitian_form(const BundlePoint& p, const BundlePoint& q);

/// sqrt(2 (1 - Re <p, q>)), the distance on the total space.
double dist_total(const BundlePoint& p, const BundlePoint& q);

/// Inner product of the generalized purifications sum_i sqrt(p_i) w_i (x) a_i
/// built with orthonormal rank-one ancilla amplitudes a_i. `ancilla_order`
/// permutes which ancilla basis vector each block uses (identity if empty).
Complex purification_inner(const BundlePoint& p, const BundlePoint& q,
                           const std::vector<std::size_t>& ancilla_order = {});

/// Flattened purification vector of a bundle point (ancilla dimension k).
Eigen::VectorXcd purification_vector(const BundlePoint& p,
                                     const std::vector<std::size_t>& ancilla_order = {});

/// Distance on the base space: infimum of dist_total over both fibers,
/// evaluated per block as the nuclear norm of w_i^dagger v_i.
double dist_base(const MixedState& rho, const MixedState& sigma,
                 const DecomposeOptions& opts = {});

/// Same infimum estimated by Haar sampling of gauge tuples followed by
/// Riemannian gradient refinement of the best sample. Independent of the
/// closed form; used as its oracle.
double dist_base_bruteforce(const MixedState& rho, const MixedState& sigma,
                            std::int64_t samples, std::uint64_t seed,
                            const DecomposeOptions& opts = {});

/// w w^dagger v. Requires w^dagger w = I and v^dagger w + w^dagger v = 0.
ComplexMatrix vertical_project(const ComplexMatrix& w, const ComplexMatrix& v);

/// v - w w^dagger v, same preconditions.
ComplexMatrix horizontal_project(const ComplexMatrix& w, const ComplexMatrix& v);

using StateCurve = std::function<MixedState(double)>;

struct FiniteDifferenceOptions {
  /// Central step; defaults to 1e-5 * max(1, |t0|).
  std::optional<double> step;
  DecomposeOptions decompose;
};

/// Interferometric metric coefficient g(d/dt, d/dt) at t0 from central
/// differences of block probabilities and projectors.
MetricValue interferometric_metric_fd(const StateCurve& curve, double t0,
                                      const FiniteDifferenceOptions& opts = {});

/// Bures metric coefficient (1/2) sum_{jl} |<j|rho'|l>|^2 / (l_j + l_l) at t0,
/// split into diagonal (classical) and off-diagonal (quantum) eigenbasis terms.
MetricValue bures_metric_parts_fd(const StateCurve& curve, double t0,
                                  const FiniteDifferenceOptions& opts = {});

inline double bures_metric_fd(const StateCurve& curve, double t0,
                              const FiniteDifferenceOptions& opts = {}) {
  return bures_metric_parts_fd(curve, t0, opts).total;
}

}  // namespace mixgeom
