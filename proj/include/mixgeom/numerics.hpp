#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mixgeom {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Spectral decomposition of a Hermitian matrix: ascending eigenvalues and
/// orthonormal eigenvector columns in matching order.
struct EighResult {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Relative Hermiticity defect ||H - H^dagger||_F / (1 + ||H||_F).
double hermiticity_defect(const ComplexMatrix& h);

/// Throws InvalidArgument when any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, const char* what);

/// Throws NotHermitian unless h is square and Hermitian within `tol` (relative).
void require_hermitian(const ComplexMatrix& h, double tol = 1e-10);

EighResult eigh(const ComplexMatrix& h);

/// Sum of singular values.
double nuclear_norm(const ComplexMatrix& a);

/// Unitary maximizing Re Tr(A U): for A = X S Y^dagger it is Y X^dagger.
ComplexMatrix polar_maximizer(const ComplexMatrix& a);

/// 1/(cosh x + 1) and cosh x/(cosh x + 1) for x >= 0 without forming cosh x.
struct ThermalFactors {
  double inv_cosh_plus_one;
  double cosh_ratio;
};

ThermalFactors thermal_factors(double x);

/// (cosh x - 1)/cosh x, the Bures quantum-part weight, overflow-free.
double bures_weight(double x);

/// exp(i * K) for Hermitian K, through the eigenbasis.
ComplexMatrix expi_hermitian(const ComplexMatrix& k);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng);

/// Random Hermitian matrix with standard normal entries (GUE up to scaling).
ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace mixgeom
