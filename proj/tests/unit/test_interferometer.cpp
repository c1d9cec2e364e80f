#include <doctest.h>

#include <cmath>
#include <random>

#include "mixgeom/errors.hpp"
#include "mixgeom/geometry.hpp"
#include "mixgeom/interferometer.hpp"
#include "support/oracles.hpp"

using namespace mixgeom;
namespace mt = mixgeom::testing;

namespace {

ComplexMatrix sigma_z() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

ComplexMatrix eye(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

// Random unitary commuting with rho: block-diagonal in its spectral frames.
ComplexMatrix commuting_unitary(const MixedState& rho, std::mt19937_64& rng) {
  const TypedDecomposition d = decompose(rho);
  ComplexMatrix v = eye(d.dim());
  for (const SpectralBlock& b : d.blocks()) {
    v += b.frame * (haar_unitary(b.rank(), rng) - eye(b.rank())) * b.frame.adjoint();
  }
  return v;
}

}  // namespace

TEST_SUITE("interferometer") {
  TEST_CASE("port probability closed cases") {
    const MixedState mixed = MixedState::maximally_mixed(2);
    CHECK(port_probability(InterferometerSetup(mixed, eye(2), eye(2))) == doctest::Approx(1.0));
    CHECK(port_probability(InterferometerSetup(mixed, sigma_z(), eye(2))) ==
          doctest::Approx(0.5));
  }

  TEST_CASE("setup validation") {
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho.diagonal() << 0.7, 0.3;
    const MixedState state(rho);
    ComplexMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    try {
      InterferometerSetup(state, eye(2), sx);
      FAIL("non-commuting V accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSetup);
    }
    try {
      InterferometerSetup(state, 2.0 * eye(2), eye(2));
      FAIL("non-unitary U accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSetup);
    }
  }

  TEST_CASE("explicit beam-splitter chain reproduces the formula") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 2 + trial % 3;
      const std::vector<Eigen::Index> ranks =
          n == 2 ? std::vector<Eigen::Index>{1, 1} : std::vector<Eigen::Index>{1, n - 1};
      const MixedState rho = mt::random_state(ranks, 0, rng);
      const ComplexMatrix u = haar_unitary(n, rng);
      const ComplexMatrix v = commuting_unitary(rho, rng);
      const double formula = port_probability(InterferometerSetup(rho, u, v));
      for (BeamSplitter bs : {BeamSplitter::Symmetric, BeamSplitter::Hadamard}) {
        const PortProbabilities chain = simulate_chain(rho, u, v, bs);
        CHECK(std::abs(chain.constructive - formula) < 1e-12);
        CHECK(std::abs(chain.constructive + chain.destructive - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("chain limiting cases") {
    std::mt19937_64 rng(2);
    const MixedState rho = mt::random_state({1, 2}, 0, rng);
    const ComplexMatrix u = commuting_unitary(rho, rng);
    const PortProbabilities same = simulate_chain(rho, u, u);
    CHECK(same.constructive == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(same.destructive) < 1e-12);
    const PortProbabilities flipped = simulate_chain(rho, -eye(3), eye(3));
    CHECK(std::abs(flipped.constructive) < 1e-12);
    CHECK(flipped.destructive == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("maximal port probability is 1 - d^2/4") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const MixedState rho = mt::random_state({1, 2, 1}, trial % 2, rng);
      const Eigen::Index n = rho.matrix().rows();
      const ComplexMatrix u = haar_unitary(n, rng);
      const OptimalPort best = max_port_probability(rho, u);
      const MixedState rotated(u * rho.matrix() * u.adjoint());
      const double d = dist_base(rho, rotated);
      CHECK(std::abs(best.probability - (1.0 - d * d / 4.0)) < 1e-12);
      // The optimizer is itself admissible and attains the value.
      const double attained = port_probability(InterferometerSetup(rho, u, best.v_opt));
      CHECK(std::abs(attained - best.probability) < 1e-12);
      for (int s = 0; s < 5; ++s) {
        const ComplexMatrix v = commuting_unitary(rho, rng);
        CHECK(port_probability(InterferometerSetup(rho, u, v)) <= best.probability + 1e-12);
      }
    }
  }

  TEST_CASE("maximal port probability for small rotations follows the metric") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const MixedState rho = mt::random_state({1, 1, 2}, 0, rng);
      const ComplexMatrix h = random_hermitian(4, rng);
      auto rotation = [&](double t) { return expi_hermitian(-t * h); };
      const StateCurve curve = [&](double t) {
        const ComplexMatrix u = rotation(t);
        return MixedState(u * rho.matrix() * u.adjoint());
      };
      const double g = interferometric_metric_fd(curve, 0.0).total;
      // 1 - pr(t) = g t^2 / 4 + O(t^4), even in t; Richardson removes t^4.
      auto scaled = [&](double t) {
        return 4.0 * (1.0 - max_port_probability(rho, rotation(t)).probability) / (t * t);
      };
      const double t = 1e-2;
      const double estimate = (4.0 * scaled(t / 2) - scaled(t)) / 3.0;
      CHECK(estimate == doctest::Approx(g).epsilon(1e-7));
    }
  }

  TEST_CASE("identity rotation is detected with certainty") {
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho.diagonal() << 0.7, 0.3;
    const OptimalPort p = max_port_probability(MixedState(rho), eye(2));
    CHECK(p.probability == doctest::Approx(1.0));
    CHECK((p.v_opt - eye(2)).norm() < 1e-12);
  }
}
