#include "mixgeom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mixgeom/errors.hpp"

namespace mixgeom {

namespace {

constexpr double kRadicandFloor = -1e-12;
constexpr double kTangencyTolerance = 1e-10;
constexpr double kImaginaryResidue = 1e-10;

std::string type_string(const std::vector<Eigen::Index>& tau, Eigen::Index dim) {
  std::string s = "n=" + std::to_string(dim) + " tau=(";
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(tau[i]);
  }
  return s + ")";
}

void require_same_type(const TypedDecomposition& a, const TypedDecomposition& b) {
  if (a.dim() != b.dim() || a.type() != b.type()) {
    throw Error(ErrorCode::TypeMismatch, type_string(a.type(), a.dim()) + " vs " +
                                             type_string(b.type(), b.dim()));
  }
}

double distance_from_fidelity(double overlap) {
  const double radicand = 2.0 * (1.0 - overlap);
  if (radicand < kRadicandFloor) {
    throw Error(ErrorCode::Diagnostics,
                "distance radicand " + std::to_string(radicand) + " is negative");
  }
  return std::sqrt(std::max(0.0, radicand));
}

std::vector<std::size_t> resolve_order(const std::vector<std::size_t>& order, std::size_t k) {
  if (order.empty()) {
    std::vector<std::size_t> identity(k);
    std::iota(identity.begin(), identity.end(), 0);
    return identity;
  }
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i || sorted.size() != k) {
      throw Error(ErrorCode::InvalidArgument, "ancilla order must be a permutation of blocks");
    }
  }
  return order;
}

void require_stiefel_tangent(const ComplexMatrix& w, const ComplexMatrix& v) {
  if (w.rows() != v.rows() || w.cols() != v.cols()) {
    throw Error(ErrorCode::NotTangent, "frame and tangent shapes differ");
  }
  const Eigen::Index r = w.cols();
  if ((w.adjoint() * w - ComplexMatrix::Identity(r, r)).norm() > kTangencyTolerance) {
    throw Error(ErrorCode::NotTangent, "frame columns are not orthonormal");
  }
  const ComplexMatrix wv = w.adjoint() * v;
  if ((wv + wv.adjoint()).norm() > kTangencyTolerance * (1.0 + v.norm())) {
    throw Error(ErrorCode::NotTangent, "v^dagger w + w^dagger v is not zero");
  }
}

double default_step(double t0) { return 1e-5 * std::max(1.0, std::abs(t0)); }

double resolve_step(const FiniteDifferenceOptions& opts, double t0) {
  const double h = opts.step.value_or(default_step(t0));
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  }
  return h;
}

struct Stencil {
  TypedDecomposition minus;
  TypedDecomposition center;
  TypedDecomposition plus;
};

Stencil decompose_stencil(const StateCurve& curve, double t0, double h,
                          const DecomposeOptions& opts) {
  Stencil s{decompose(curve(t0 - h), opts), decompose(curve(t0), opts),
            decompose(curve(t0 + h), opts)};
  for (const TypedDecomposition* side : {&s.minus, &s.plus}) {
    if (side->dim() != s.center.dim() || side->type() != s.center.type()) {
      throw Error(ErrorCode::TypeChanged,
                  type_string(s.center.type(), s.center.dim()) + " at t0 but " +
                      type_string(side->type(), side->dim()) + " on the stencil");
    }
  }
  return s;
}

}  // namespace

BundlePoint BundlePoint::gauged(std::size_t block, const ComplexMatrix& u) const {
  std::vector<SpectralBlock> blocks = d_.blocks();
  if (block >= blocks.size() || u.rows() != blocks[block].rank() || u.cols() != u.rows()) {
    throw Error(ErrorCode::InvalidArgument, "gauge matrix does not match block rank");
  }
  blocks[block].frame = blocks[block].frame * u;
  return BundlePoint(TypedDecomposition(d_.dim(), std::move(blocks)));
}

Complex hermitian_form(const BundlePoint& p, const BundlePoint& q) {
  require_same_type(p.decomposition(), q.decomposition());
  Complex sum = 0.0;
  for (std::size_t i = 0; i < p.blocks().size(); ++i) {
    const SpectralBlock& a = p.blocks()[i];
    const SpectralBlock& b = q.blocks()[i];
    sum += std::sqrt(a.p * b.p) * (a.frame.adjoint() * b.frame).trace();
  }
  return sum;
}

double dist_total(const BundlePoint& p, const BundlePoint& q) {
  return distance_from_fidelity(hermitian_form(p, q).real());
}

Eigen::VectorXcd purification_vector(const BundlePoint& p,
                                     const std::vector<std::size_t>& ancilla_order) {
  const std::size_t k = p.blocks().size();
  const std::vector<std::size_t> order = resolve_order(ancilla_order, k);
  Eigen::Index max_rank = 0;
  for (const SpectralBlock& b : p.blocks()) max_rank = std::max(max_rank, b.rank());

  // Ambient space C^n (x) C^{max rank} (x) C^k; frames are zero-padded to a
  // common column count so every block lives in the same fixed space.
  const Eigen::Index n = p.dim();
  const Eigen::Index kk = static_cast<Eigen::Index>(k);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n * max_rank * kk);
  for (std::size_t i = 0; i < k; ++i) {
    const SpectralBlock& b = p.blocks()[i];
    ComplexMatrix padded = ComplexMatrix::Zero(n, max_rank);
    padded.leftCols(b.rank()) = b.frame;
    const Eigen::VectorXcd amplitude = padded.reshaped();
    // amplitude (x) e_slot
    const auto slot = static_cast<Eigen::Index>(order[i]);
    const double weight = std::sqrt(b.p);
    for (Eigen::Index a = 0; a < amplitude.size(); ++a) {
      psi(a * kk + slot) += weight * amplitude(a);
    }
  }
  return psi;
}

Complex purification_inner(const BundlePoint& p, const BundlePoint& q,
                           const std::vector<std::size_t>& ancilla_order) {
  require_same_type(p.decomposition(), q.decomposition());
  return purification_vector(p, ancilla_order).dot(purification_vector(q, ancilla_order));
}

double dist_base(const MixedState& rho, const MixedState& sigma, const DecomposeOptions& opts) {
  const TypedDecomposition a = decompose(rho, opts);
  const TypedDecomposition b = decompose(sigma, opts);
  require_same_type(a, b);
  double overlap = 0.0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    const SpectralBlock& x = a.blocks()[i];
    const SpectralBlock& y = b.blocks()[i];
    overlap += std::sqrt(x.p * y.p) * nuclear_norm(x.frame.adjoint() * y.frame);
  }
  return distance_from_fidelity(overlap);
}

double dist_base_bruteforce(const MixedState& rho, const MixedState& sigma,
                            std::int64_t samples, std::uint64_t seed,
                            const DecomposeOptions& opts) {
  if (samples <= 0) {
    throw Error(ErrorCode::InvalidArgument, "samples must be positive");
  }
  const TypedDecomposition a = decompose(rho, opts);
  const TypedDecomposition b = decompose(sigma, opts);
  require_same_type(a, b);

  const std::size_t k = a.blocks().size();
  std::vector<ComplexMatrix> overlaps(k);
  std::vector<double> weights(k);
  for (std::size_t i = 0; i < k; ++i) {
    overlaps[i] = a.blocks()[i].frame.adjoint() * b.blocks()[i].frame;
    weights[i] = std::sqrt(a.blocks()[i].p * b.blocks()[i].p);
  }
  auto block_value = [&](std::size_t i, const ComplexMatrix& u) {
    return weights[i] * (overlaps[i] * u).trace().real();
  };

  std::mt19937_64 rng(seed);
  std::vector<ComplexMatrix> best(k);
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<ComplexMatrix> trial(k);
  for (std::int64_t s = 0; s < samples; ++s) {
    double value = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      trial[i] = haar_unitary(overlaps[i].rows(), rng);
      value += block_value(i, trial[i]);
    }
    if (value > best_value) {
      best_value = value;
      best = trial;
    }
  }

  // Riemannian gradient ascent on U(r) per block: move along U exp(eta X)
  // with X the anti-Hermitian part of (A U)^dagger, halving eta on failure.
  double refined = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    ComplexMatrix u = best[i];
    double value = block_value(i, u);
    double eta = 1.0 / (overlaps[i].norm() + 1e-300);
    for (int iter = 0; iter < 2000 && eta > 1e-12; ++iter) {
      const ComplexMatrix au = overlaps[i] * u;
      const ComplexMatrix x = 0.5 * (au.adjoint() - au);
      if (x.norm() < 1e-15) break;
      const ComplexMatrix candidate = u * expi_hermitian(Complex(0.0, -eta) * x);
      const double candidate_value = block_value(i, candidate);
      if (candidate_value > value) {
        u = candidate;
        value = candidate_value;
        eta *= 1.5;
      } else {
        eta *= 0.5;
      }
    }
    refined += value;
  }
  return distance_from_fidelity(std::max(refined, best_value));
}

ComplexMatrix vertical_project(const ComplexMatrix& w, const ComplexMatrix& v) {
  require_stiefel_tangent(w, v);
  return w * (w.adjoint() * v);
}

ComplexMatrix horizontal_project(const ComplexMatrix& w, const ComplexMatrix& v) {
  require_stiefel_tangent(w, v);
  return v - w * (w.adjoint() * v);
}

MetricValue interferometric_metric_fd(const StateCurve& curve, double t0,
                                      const FiniteDifferenceOptions& opts) {
  const double h = resolve_step(opts, t0);
  const Stencil s = decompose_stencil(curve, t0, h, opts.decompose);

  double classical = 0.0;
  double quantum = 0.0;
  for (std::size_t i = 0; i < s.center.blocks().size(); ++i) {
    const SpectralBlock& c = s.center.blocks()[i];
    const SpectralBlock& m = s.minus.blocks()[i];
    const SpectralBlock& p = s.plus.blocks()[i];
    const double r = static_cast<double>(c.rank());

    const ComplexMatrix pc = c.projector();
    const ComplexMatrix pm = m.projector();
    const ComplexMatrix pp = p.projector();
    // Descending-order pairing is only meaningful while each block's
    // eigenspace stays close to itself across the stencil.
    const double overlap_m = (pc * pm).trace().real() / r;
    const double overlap_p = (pc * pp).trace().real() / r;
    if (overlap_m < 0.5 || overlap_p < 0.5) {
      throw Error(ErrorCode::StepTooLarge,
                  "eigenvalue ordering changes across the stencil at block " + std::to_string(i));
    }

    const double pdot = (p.p - m.p) / (2.0 * h);
    const ComplexMatrix pdot_proj = (pp - pm) / (2.0 * h);
    classical += 0.25 * r * pdot * pdot / c.p;

    const Complex g = (pc * pdot_proj * pdot_proj).trace();
    if (std::abs(g.imag()) > kImaginaryResidue * (1.0 + std::abs(g.real()))) {
      throw Error(ErrorCode::Diagnostics,
                  "imaginary residue " + std::to_string(g.imag()) + " in Tr(P dP dP)");
    }
    quantum += c.p * g.real();
  }
  return MetricValue::from_parts(classical, quantum);
}

MetricValue bures_metric_parts_fd(const StateCurve& curve, double t0,
                                  const FiniteDifferenceOptions& opts) {
  const double h = resolve_step(opts, t0);
  const MixedState center = curve(t0);
  const MixedState minus = curve(t0 - h);
  const MixedState plus = curve(t0 + h);
  const TypedDecomposition d0 = decompose(center, opts.decompose);
  for (const MixedState* side : {&minus, &plus}) {
    const TypedDecomposition d = decompose(*side, opts.decompose);
    if (d.dim() != d0.dim() || d.type() != d0.type()) {
      throw Error(ErrorCode::TypeChanged, type_string(d0.type(), d0.dim()) + " at t0 but " +
                                              type_string(d.type(), d.dim()) +
                                              " on the stencil");
    }
  }

  // Eigenbasis of rho(t0) assembled from the block frames plus a kernel
  // complement; eigenvalues are the block means, zero on the kernel.
  const Eigen::Index n = d0.dim();
  ComplexMatrix basis(n, n);
  RealVector lambda = RealVector::Zero(n);
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < d0.blocks().size(); ++i) {
    const SpectralBlock& b = d0.blocks()[i];
    basis.middleCols(col, b.rank()) = b.frame;
    lambda.segment(col, b.rank()).setConstant(b.p);
    for (Eigen::Index j = 0; j < b.rank(); ++j) label[static_cast<std::size_t>(col + j)] = static_cast<int>(i);
    col += b.rank();
  }
  if (d0.kernel_rank() > 0) {
    const EighResult es = eigh(center.matrix());
    basis.rightCols(d0.kernel_rank()) = es.eigenvectors.leftCols(d0.kernel_rank());
  }

  const ComplexMatrix rho_dot = (plus.matrix() - minus.matrix()) / (2.0 * h);
  const ComplexMatrix r = basis.adjoint() * rho_dot * basis;

  double classical = 0.0;
  double quantum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double denom = lambda(j) + lambda(l);
      if (!(denom > opts.decompose.eps_zero)) continue;
      const double term = 0.5 * std::norm(r(j, l)) / denom;
      const int lj = label[static_cast<std::size_t>(j)];
      if (lj >= 0 && lj == label[static_cast<std::size_t>(l)]) {
        classical += term;
      } else {
        quantum += term;
      }
    }
  }
  return MetricValue::from_parts(classical, quantum);
}

}  // namespace mixgeom
