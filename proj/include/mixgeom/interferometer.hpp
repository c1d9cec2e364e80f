#pragma once

#include "mixgeom/states.hpp"

namespace mixgeom {

/// Mach-Zehnder configuration: internal state rho, arm-1 unitary U and an
/// arm-0 unitary V commuting with rho.
class InterferometerSetup {
 public:
  static constexpr double kUnitaryTolerance = 1e-10;
  static constexpr double kCommutatorTolerance = 1e-8;

  InterferometerSetup(MixedState rho, ComplexMatrix u, ComplexMatrix v);

  const MixedState& rho() const noexcept { return rho_; }
  const ComplexMatrix& u() const noexcept { return u_; }
  const ComplexMatrix& v() const noexcept { return v_; }

 private:
  MixedState rho_;
  ComplexMatrix u_;
  ComplexMatrix v_;
};

/// Probability at the output port that interferes constructively when U = V:
/// (1/2)(1 + Re Tr(U rho V^dagger)).
double port_probability(const InterferometerSetup& setup);

enum class BeamSplitter {
  /// |l> -> (|0> + i |1>)/sqrt 2 style balanced splitter; constructive port is 1.
  Symmetric,
  /// Hadamard |l> -> (|0> + (-1)^l |1>)/sqrt 2; arms swap, constructive port is 0.
  Hadamard,
};

struct PortProbabilities {
  double constructive;
  double destructive;
};

/// Propagates |0><0| (x) rho through splitter, controlled unitary
/// |0><0| (x) V + |1><1| (x) U and a second splitter as explicit 2n x 2n
/// density matrices, then reads off both detector probabilities.
PortProbabilities simulate_chain(const MixedState& rho, const ComplexMatrix& u,
                                 const ComplexMatrix& v,
                                 BeamSplitter splitter = BeamSplitter::Symmetric);

struct OptimalPort {
  double probability;
  ComplexMatrix v_opt;
};

/// Maximizes the constructive probability over V = sum_i w_i V_i w_i^dagger
/// (identity on the kernel). Each V_i is the polar factor of w_i^dagger U w_i.
OptimalPort max_port_probability(const MixedState& rho, const ComplexMatrix& u,
                                 const DecomposeOptions& opts = {});

}  // namespace mixgeom
