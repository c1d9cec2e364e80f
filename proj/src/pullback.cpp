#include "mixgeom/pullback.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "mixgeom/errors.hpp"
#include "mixgeom/states.hpp"

namespace mixgeom {

MetricValue interf_integrand_parts(const BlochPoint& bp, double beta) {
  const double x = beta * bp.energy;
  const ThermalFactors f = thermal_factors(x);
  const double classical = 0.25 * f.inv_cosh_plus_one * beta * beta * bp.dE_dM * bp.dE_dM;
  const double quantum = 0.25 * f.cosh_ratio * bp.dn_dM_sq;
  return MetricValue::from_parts(classical, quantum);
}

double interf_integrand(const BlochPoint& bp, double beta) {
  return interf_integrand_parts(bp, beta).total;
}

MetricValue bures_integrand_parts(const BlochPoint& bp, double beta) {
  const double x = beta * bp.energy;
  const ThermalFactors f = thermal_factors(x);
  const double classical = 0.25 * f.inv_cosh_plus_one * beta * beta * bp.dE_dM * bp.dE_dM;
  const double quantum = 0.25 * bures_weight(x) * bp.dn_dM_sq;
  return MetricValue::from_parts(classical, quantum);
}

double bures_integrand(const BlochPoint& bp, double beta) {
  return bures_integrand_parts(bp, beta).total;
}

double fubini_study_integrand(const BlochPoint& bp) { return 0.25 * bp.dn_dM_sq; }

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIXGEOM_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

double midpoint(int i, int n) {
  return -std::numbers::pi + (static_cast<double>(i) + 0.5) * (2.0 * std::numbers::pi / n);
}

void require_grid(int n, int dim) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "BZ grid needs N >= 2");
  if (dim < 1 || dim > 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
}

// Runs `work(slice)` for slice in [0, count) across `threads` workers.
template <class Work>
void for_each_slice(int count, int threads, Work&& work) {
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int s = 0; s < count; ++s) work(s);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int s = next.fetch_add(1); s < count; s = next.fetch_add(1)) work(s);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace

BzVectorIntegral bz_integrate_components(const BzVectorIntegrand& f, std::size_t components,
                                         int n, int dim, int threads) {
  require_grid(n, dim);
  // One slice per value of the first momentum component. Every slice sums its
  // cells in lexicographic order; slices are then combined in index order.
  struct Slice {
    std::vector<CompensatedSum> sums;
    std::int64_t failed = 0;
  };
  std::vector<Slice> slices(static_cast<std::size_t>(n));
  const int inner1 = dim >= 2 ? n : 1;
  const int inner2 = dim >= 3 ? n : 1;

  for_each_slice(n, threads, [&](int i0) {
    Slice& slice = slices[static_cast<std::size_t>(i0)];
    slice.sums.assign(components, CompensatedSum{});
    std::vector<double> out(components);
    Momentum k{midpoint(i0, n), 0.0, 0.0};
    for (int i1 = 0; i1 < inner1; ++i1) {
      if (dim >= 2) k[1] = midpoint(i1, n);
      for (int i2 = 0; i2 < inner2; ++i2) {
        if (dim >= 3) k[2] = midpoint(i2, n);
        std::fill(out.begin(), out.end(), 0.0);
        bool ok = f(k, out);
        if (ok) {
          ok = std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); });
        }
        if (!ok) {
          ++slice.failed;
          continue;
        }
        for (std::size_t c = 0; c < components; ++c) slice.sums[c].add(out[c]);
      }
    }
  });

  std::vector<CompensatedSum> total(components);
  BzVectorIntegral result;
  for (const Slice& slice : slices) {
    for (std::size_t c = 0; c < components; ++c) total[c].add(slice.sums[c].value());
    result.failed_cells += slice.failed;
  }
  const double cells = std::pow(static_cast<double>(n), dim);
  result.values.resize(components);
  for (std::size_t c = 0; c < components; ++c) result.values[c] = total[c].value() / cells;
  return result;
}

BzIntegral bz_integrate(const BzIntegrand& f, int n, int dim, int threads) {
  const BzVectorIntegral r = bz_integrate_components(
      [&f](const Momentum& k, std::span<double> out) {
        const std::optional<double> v = f(k);
        if (!v) return false;
        out[0] = *v;
        return true;
      },
      1, n, dim, threads);
  return {r.values[0], r.failed_cells};
}

int chern_number(const TwoBandModel& model, double m, int n, double eps_gap) {
  if (model.spatial_dim != 2) {
    throw Error(ErrorCode::InvalidArgument, "Chern number needs a two-dimensional model");
  }
  if (n < 8) throw Error(ErrorCode::InvalidArgument, "Chern grid needs N >= 8");
  const double pi = std::numbers::pi;

  // Gap check on the lattice refined by midpoints, which contains every
  // high-symmetry momentum (0 and pi) for any N.
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = 0; j < 2 * n; ++j) {
      const Momentum k{-pi + pi * i / n, -pi + pi * j / n, 0.0};
      const double e = model.d(k, m).norm();
      if (!(e >= eps_gap)) {
        throw Error(ErrorCode::GaplessParameter,
                    "|d| = " + std::to_string(e) + " at M = " + std::to_string(m));
      }
    }
  }

  std::vector<Eigen::Vector2cd> lower(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Momentum k{-pi + 2.0 * pi * i / n, -pi + 2.0 * pi * j / n, 0.0};
      const EighResult es = eigh(pauli_hamiltonian(model.d(k, m)));
      lower[static_cast<std::size_t>(i * n + j)] = es.eigenvectors.col(0);
    }
  }
  auto state = [&](int i, int j) -> const Eigen::Vector2cd& {
    return lower[static_cast<std::size_t>(((i % n + n) % n) * n + (j % n + n) % n)];
  };
  auto link = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
    const Complex z = a.dot(b);
    return z / std::abs(z);
  };

  // Berry connection A = i <u|grad u>; the plaquette phase is the flux of
  // F = dA_y/dk_x - dA_x/dk_y through each cell.
  double flux = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex loop = link(state(i, j), state(i + 1, j)) *
                           link(state(i + 1, j), state(i + 1, j + 1)) *
                           link(state(i + 1, j + 1), state(i, j + 1)) *
                           link(state(i, j + 1), state(i, j));
      flux += -std::arg(loop);
    }
  }
  return static_cast<int>(std::lround(flux / (2.0 * pi)));
}

OracleValue per_momentum_oracle(const TwoBandModel& model, const Momentum& k, double m,
                                double beta, std::optional<double> step) {
  const StateCurve curve = [&](double mm) {
    return gibbs(fock_hamiltonian(pauli_hamiltonian(model.d(k, mm))), beta);
  };
  FiniteDifferenceOptions opts;
  opts.step = step;
  return {interferometric_metric_fd(curve, m, opts), bures_metric_parts_fd(curve, m, opts)};
}

std::vector<MetricSample> metric_scan(const TwoBandModel& model,
                                      const std::vector<double>& m_values,
                                      const std::vector<double>& t_values, int n,
                                      const ScanOptions& opts) {
  if (model.spatial_dim != 2) {
    throw Error(ErrorCode::InvalidArgument, "scans are wired for two-dimensional models only");
  }
  if (m_values.empty() || t_values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "M and T lists must be nonempty");
  }
  std::vector<double> betas;
  betas.reserve(t_values.size());
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::InvalidArgument, "temperatures must be positive and finite");
    }
    betas.push_back(1.0 / t);
  }
  const int threads = resolve_thread_count(opts.threads);

  // Components per temperature: interf classical, interf quantum, bures
  // quantum, Fubini-Study. The Bures classical part equals the interferometric one.
  constexpr std::size_t kPerT = 4;
  std::vector<MetricSample> samples;
  samples.reserve(m_values.size() * t_values.size());
  for (double m : m_values) {
    const BzVectorIntegral r = bz_integrate_components(
        [&](const Momentum& k, std::span<double> out) {
          BlochPoint bp;
          try {
            bp = bloch_point(model, k, m, opts.eps_gap);
          } catch (const Error&) {
            return false;
          }
          const double fs = fubini_study_integrand(bp);
          for (std::size_t t = 0; t < betas.size(); ++t) {
            const MetricValue gi = interf_integrand_parts(bp, betas[t]);
            const MetricValue gb = bures_integrand_parts(bp, betas[t]);
            out[t * kPerT + 0] = gi.classical;
            out[t * kPerT + 1] = gi.quantum;
            out[t * kPerT + 2] = gb.quantum;
            out[t * kPerT + 3] = fs;
          }
          return true;
        },
        kPerT * betas.size(), n, 2, threads);
    for (std::size_t t = 0; t < betas.size(); ++t) {
      MetricSample s;
      s.m = m;
      s.t = t_values[t];
      const double classical = r.values[t * kPerT + 0];
      s.g_interf = MetricValue::from_parts(classical, r.values[t * kPerT + 1]);
      s.g_bures = MetricValue::from_parts(classical, r.values[t * kPerT + 2]);
      s.g_fs = r.values[t * kPerT + 3];
      s.bz_grid = n;
      s.gapless_cells = r.failed_cells;
      samples.push_back(s);
    }
  }
  return samples;
}

}  // namespace mixgeom
