#include "mixgeom/bandmodels.hpp"

#include <cmath>

#include "mixgeom/errors.hpp"

namespace mixgeom {

Vec3 TwoBandModel::d_dM(const Momentum& k, double m) const {
  if (d_vector_dM) return (*d_vector_dM)(k, m);
  constexpr double h = 1e-6;
  return (d_vector(k, m + h) - d_vector(k, m - h)) / (2.0 * h);
}

TwoBandModel dirac_model() {
  TwoBandModel model;
  model.name = "dirac";
  model.spatial_dim = 2;
  model.d_vector = [](const Momentum& k, double m) {
    return Vec3(std::sin(k[0]), std::sin(k[1]), m - std::cos(k[0]) - std::cos(k[1]));
  };
  model.d_vector_dM = [](const Momentum&, double) { return Vec3(0.0, 0.0, 1.0); };
  return model;
}

TwoBandModel model_by_name(const std::string& name) {
  if (name == "dirac") return dirac_model();
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + name + "'");
}

BlochPoint bloch_point(const TwoBandModel& model, const Momentum& k, double m, double eps_gap) {
  const Vec3 d = model.d(k, m);
  const double energy = d.norm();
  if (!(energy > eps_gap)) {
    throw Error(ErrorCode::GaplessPoint, "|d| = " + std::to_string(energy));
  }
  const Vec3 dd = model.d_dM(k, m);
  const Vec3 n = d / energy;
  const double dE = n.dot(dd);
  // Component of dd/dM orthogonal to n, scaled by 1/E.
  const Vec3 dn = (dd - dE * n) / energy;
  return {energy, n, dE, dn, dn.squaredNorm()};
}

ComplexMatrix pauli_hamiltonian(const Vec3& d) {
  ComplexMatrix h(2, 2);
  h << d.z(), Complex(d.x(), -d.y()), Complex(d.x(), d.y()), -d.z();
  return h;
}

ComplexMatrix fock_hamiltonian(const ComplexMatrix& h) {
  if (h.rows() != 2 || h.cols() != 2) {
    throw Error(ErrorCode::NotHermitian, "single-particle Hamiltonian must be 2 x 2");
  }
  require_hermitian(h);
  // The number operator is conserved: the vacuum has energy 0, the
  // one-particle sector carries h itself, the filled state carries Tr h.
  ComplexMatrix f = ComplexMatrix::Zero(4, 4);
  f.block(1, 1, 2, 2) = h;
  f(3, 3) = h.trace();
  return f;
}

}  // namespace mixgeom
