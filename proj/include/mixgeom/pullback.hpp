#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mixgeom/bandmodels.hpp"
#include "mixgeom/geometry.hpp"

namespace mixgeom {

// Per-momentum integrands of the Gibbs-state pullbacks along M. Each is the
// coefficient of dM^2 before integration over the Brillouin zone.

/// Interferometric: (1/4)/(cosh bE + 1) * (b^2 E'^2 + cosh(bE) |n'|^2).
MetricValue interf_integrand_parts(const BlochPoint& bp, double beta);
double interf_integrand(const BlochPoint& bp, double beta);

/// Bures: (1/4) [b^2 E'^2/(cosh bE + 1) + (cosh bE - 1)/cosh bE |n'|^2].
MetricValue bures_integrand_parts(const BlochPoint& bp, double beta);
double bures_integrand(const BlochPoint& bp, double beta);

/// Fubini-Study: (1/4) |n'|^2.
double fubini_study_integrand(const BlochPoint& bp);

/// Number of worker threads: `requested` if positive, else MIXGEOM_THREADS,
/// else the hardware concurrency.
int resolve_thread_count(int requested = 0);

struct BzIntegral {
  double value = 0.0;
  std::int64_t failed_cells = 0;
};

/// Integrand returning nullopt for cells that cannot be evaluated.
using BzIntegrand = std::function<std::optional<double>(const Momentum&)>;

/// Midpoint rule on [-pi, pi)^dim with N^dim cells and normalized measure
/// d^dk/(2pi)^d. Failed cells are excluded and counted. The reduction order is
/// fixed, so the result does not depend on the thread count.
BzIntegral bz_integrate(const BzIntegrand& f, int n, int dim, int threads = 1);

/// Vector-valued variant: `f` writes `components` values into its output span
/// and returns false for a failed cell.
using BzVectorIntegrand = std::function<bool(const Momentum&, std::span<double>)>;

struct BzVectorIntegral {
  std::vector<double> values;
  std::int64_t failed_cells = 0;
};

BzVectorIntegral bz_integrate_components(const BzVectorIntegrand& f, std::size_t components,
                                         int n, int dim, int threads = 1);

/// Lattice (link-variable) Chern number of the lower band on an N x N
/// periodic momentum grid. Throws GaplessParameter when |d| < eps_gap on the
/// grid refined by cell midpoints.
int chern_number(const TwoBandModel& model, double m, int n,
                 double eps_gap = kDefaultGapThreshold);

struct OracleValue {
  MetricValue interf;
  MetricValue bures;
};

/// Metrics of the per-momentum 4 x 4 Fock Gibbs family M -> gibbs(fock(d.sigma), beta),
/// evaluated by finite differences in the geometry module. Validation only.
OracleValue per_momentum_oracle(const TwoBandModel& model, const Momentum& k, double m,
                                double beta, std::optional<double> step = std::nullopt);

struct MetricSample {
  double m = 0.0;
  double t = 0.0;
  MetricValue g_interf;
  MetricValue g_bures;
  double g_fs = 0.0;
  int bz_grid = 0;
  std::int64_t gapless_cells = 0;
};

struct ScanOptions {
  int threads = 0;
  double eps_gap = kDefaultGapThreshold;
};

/// BZ-integrated metrics for every (M, T) pair, M-major then T. Only
/// two-dimensional models are scanned.
std::vector<MetricSample> metric_scan(const TwoBandModel& model,
                                      const std::vector<double>& m_values,
                                      const std::vector<double>& t_values, int n,
                                      const ScanOptions& opts = {});

}  // namespace mixgeom
