#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "mixgeom/numerics.hpp"

namespace mixgeom {

using Vec3 = Eigen::Vector3d;

/// Crystal momentum; components beyond the model's spatial dimension are ignored.
using Momentum = std::array<double, 3>;

using DVectorField = std::function<Vec3(const Momentum&, double)>;

/// Two-band Bloch Hamiltonian family h(k; M) = d(k; M) . sigma.
struct TwoBandModel {
  std::string name;
  int spatial_dim = 2;
  DVectorField d_vector;
  /// Analytic dd/dM. When absent a central difference with step 1e-6 is used.
  std::optional<DVectorField> d_vector_dM;

  Vec3 d(const Momentum& k, double m) const { return d_vector(k, m); }
  Vec3 d_dM(const Momentum& k, double m) const;
};

/// d(k; M) = (sin kx, sin ky, M - cos kx - cos ky).
TwoBandModel dirac_model();

/// Looks up a built-in model by name ("dirac"); throws InvalidArgument otherwise.
TwoBandModel model_by_name(const std::string& name);

/// Energy, unit vector and their M-derivatives at one momentum.
struct BlochPoint {
  double energy;
  Vec3 n;
  double dE_dM;
  Vec3 dn_dM;
  /// |dn/dM|^2
  double dn_dM_sq;
};

inline constexpr double kDefaultGapThreshold = 1e-12;

/// Throws GaplessPoint when |d| <= eps_gap.
BlochPoint bloch_point(const TwoBandModel& model, const Momentum& k, double m,
                       double eps_gap = kDefaultGapThreshold);

/// 2 x 2 Bloch Hamiltonian d . sigma.
ComplexMatrix pauli_hamiltonian(const Vec3& d);

/// Second-quantized lift sum_ab h_ab c_a^dagger c_b on the Fock basis
/// {|vac>, c1^dagger|vac>, c2^dagger|vac>, c1^dagger c2^dagger|vac>}.
ComplexMatrix fock_hamiltonian(const ComplexMatrix& h);

}  // namespace mixgeom
