#include "mixgeom/interferometer.hpp"

#include <cmath>
#include <string>

#include "mixgeom/errors.hpp"

namespace mixgeom {

namespace {

bool is_unitary(const ComplexMatrix& u, Eigen::Index n) {
  if (u.rows() != n || u.cols() != n || !u.allFinite()) return false;
  return (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm() <=
         InterferometerSetup::kUnitaryTolerance;
}

void require_unitaries(const MixedState& rho, const ComplexMatrix& u, const ComplexMatrix& v) {
  if (!is_unitary(u, rho.dim())) {
    throw Error(ErrorCode::InvalidSetup, "U is not an n x n unitary");
  }
  if (!is_unitary(v, rho.dim())) {
    throw Error(ErrorCode::InvalidSetup, "V is not an n x n unitary");
  }
  const ComplexMatrix& r = rho.matrix();
  if ((v * r - r * v).norm() >= InterferometerSetup::kCommutatorTolerance) {
    throw Error(ErrorCode::InvalidSetup, "V does not commute with rho");
  }
}

ComplexMatrix splitter_matrix(BeamSplitter splitter) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix b(2, 2);
  if (splitter == BeamSplitter::Symmetric) {
    b << s, Complex(0.0, s), Complex(0.0, s), s;
  } else {
    b << s, s, s, -s;
  }
  return b;
}

}  // namespace

InterferometerSetup::InterferometerSetup(MixedState rho, ComplexMatrix u, ComplexMatrix v)
    : rho_(std::move(rho)), u_(std::move(u)), v_(std::move(v)) {
  require_unitaries(rho_, u_, v_);
}

double port_probability(const InterferometerSetup& setup) {
  const Complex overlap = (setup.u() * setup.rho().matrix() * setup.v().adjoint()).trace();
  return 0.5 * (1.0 + overlap.real());
}

PortProbabilities simulate_chain(const MixedState& rho, const ComplexMatrix& u,
                                 const ComplexMatrix& v, BeamSplitter splitter) {
  require_unitaries(rho, u, v);
  const Eigen::Index n = rho.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix b = splitter_matrix(splitter);

  // Path qubit (x) internal degree of freedom, path index major.
  ComplexMatrix splitter_full = ComplexMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      splitter_full.block(i * n, j * n, n, n) = b(i, j) * id;
    }
  }
  ComplexMatrix controlled = ComplexMatrix::Zero(2 * n, 2 * n);
  controlled.topLeftCorner(n, n) = v;
  controlled.bottomRightCorner(n, n) = u;

  ComplexMatrix state = ComplexMatrix::Zero(2 * n, 2 * n);
  state.topLeftCorner(n, n) = rho.matrix();
  for (const ComplexMatrix* stage : {&splitter_full, &controlled, &splitter_full}) {
    state = (*stage) * state * stage->adjoint();
  }

  const double port0 = state.topLeftCorner(n, n).trace().real();
  const double port1 = state.bottomRightCorner(n, n).trace().real();
  if (splitter == BeamSplitter::Symmetric) return {port1, port0};
  return {port0, port1};
}

OptimalPort max_port_probability(const MixedState& rho, const ComplexMatrix& u,
                                 const DecomposeOptions& opts) {
  const Eigen::Index n = rho.dim();
  if (!is_unitary(u, n)) {
    throw Error(ErrorCode::InvalidSetup, "U is not an n x n unitary");
  }
  const TypedDecomposition d = decompose(rho, opts);
  const MixedState rotated(u * rho.matrix() * u.adjoint());
  if (decompose(rotated, opts).type() != d.type()) {
    throw Error(ErrorCode::TypeMismatch, "U changes the type of rho");
  }

  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  for (const SpectralBlock& b : d.blocks()) {
    const ComplexMatrix overlap = b.frame.adjoint() * u * b.frame;
    const ComplexMatrix vi = polar_maximizer(overlap).adjoint();
    v += b.frame * (vi - ComplexMatrix::Identity(b.rank(), b.rank())) * b.frame.adjoint();
  }
  const InterferometerSetup setup(rho, u, v);
  return {port_probability(setup), v};
}

}  // namespace mixgeom
