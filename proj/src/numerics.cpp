#include "mixgeom/numerics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "mixgeom/errors.hpp"

namespace mixgeom {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::AmbiguousClustering: return "AmbiguousClustering";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::TypeChanged: return "TypeChanged";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::Diagnostics: return "Diagnostics";
    case ErrorCode::InvalidSetup: return "InvalidSetup";
    case ErrorCode::GaplessPoint: return "GaplessPoint";
    case ErrorCode::GaplessParameter: return "GaplessParameter";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double hermiticity_defect(const ComplexMatrix& h) {
  return (h - h.adjoint()).norm() / (1.0 + h.norm());
}

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  }
}

void require_hermitian(const ComplexMatrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  }
  require_finite(h, "Hermitian input");
  const double defect = hermiticity_defect(h);
  if (defect > tol) {
    throw Error(ErrorCode::NotHermitian,
                "relative anti-Hermitian part " + std::to_string(defect));
  }
}

EighResult eigh(const ComplexMatrix& h) {
  require_hermitian(h);
  // Symmetrize so the solver only ever sees an exactly Hermitian matrix.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Diagnostics, "eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double nuclear_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

ComplexMatrix polar_maximizer(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().adjoint();
}

ThermalFactors thermal_factors(double x) {
  x = std::abs(x);
  const double e = std::exp(-x);
  const double denom = (1.0 + e) * (1.0 + e);
  return {2.0 * e / denom, (1.0 + e * e) / denom};
}

double bures_weight(double x) {
  x = std::abs(x);
  const double m = -std::expm1(-x);  // 1 - e^{-x}
  const double e = std::exp(-x);
  return m * m / (1.0 + e * e);
}

ComplexMatrix expi_hermitian(const ComplexMatrix& k) {
  const EighResult es = eigh(k);
  const Eigen::VectorXcd phases =
      es.eigenvalues.unaryExpr([](double l) { return std::polar(1.0, l); });
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

namespace {

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

ComplexMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace mixgeom
