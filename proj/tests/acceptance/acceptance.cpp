// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mixgeom/cli.hpp"
#include "mixgeom/errors.hpp"
#include "mixgeom/geometry.hpp"
#include "mixgeom/interferometer.hpp"
#include "mixgeom/pullback.hpp"
#include "support/oracles.hpp"

using namespace mixgeom;
namespace mt = mixgeom::testing;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const TwoBandModel& dirac() {
  static const TwoBandModel model = dirac_model();
  return model;
}

// Single-threaded unless MIXGEOM_THREADS says otherwise.
ScanOptions scan_options() {
  ScanOptions o;
  o.threads = resolve_thread_count(0);
  return o;
}

Outcome gauge_infimum() {
  std::mt19937_64 rng(101);
  const std::vector<std::pair<std::vector<Eigen::Index>, Eigen::Index>> types{
      {{1, 1, 2}, 0}, {{2, 2}, 0}, {{1, 1, 2}, 1}, {{2, 2}, 2}, {{1, 2, 3}, 0}};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto& [ranks, kernel] = types[static_cast<std::size_t>(i) % types.size()];
    const MixedState rho = mt::random_state(ranks, kernel, rng);
    const MixedState sigma = mt::random_state(ranks, kernel, rng);
    const double closed = dist_base(rho, sigma);
    const double brute = dist_base_bruteforce(rho, sigma, 10000, 1000 + static_cast<std::uint64_t>(i));
    worst = std::max(worst, std::abs(closed - brute));
  }
  return {worst < 1e-6, fmt("max |closed - brute| = %.3e (tol 1e-6)", worst)};
}

Outcome purification_identity() {
  std::mt19937_64 rng(202);
  const std::vector<std::vector<Eigen::Index>> types{{1, 1, 2}, {2, 2}, {1, 1, 1}, {3, 1, 2}};
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto& ranks = types[static_cast<std::size_t>(i) % types.size()];
    const BundlePoint p(decompose(mt::random_state(ranks, i % 2, rng)));
    const BundlePoint q(decompose(mt::random_state(ranks, i % 2, rng)));
    worst = std::max(worst, std::abs(hermitian_form(p, q) - purification_inner(p, q)));
  }
  return {worst < 1e-12, fmt("max |<p,q> - <psi_p,psi_q>| = %.3e (tol 1e-12)", worst)};
}

Outcome metric_distance() {
  std::mt19937_64 rng(303);
  const std::vector<std::vector<Eigen::Index>> types{{1, 1}, {1, 1, 2}, {2, 1}, {1, 2, 1}};
  const std::vector<double> deltas{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  double worst_slope = 0.0;
  double worst_rel = 0.0;
  for (int i = 0; i < 20; ++i) {
    const mt::SmoothCurve curve(types[static_cast<std::size_t>(i) % types.size()], i % 2, rng);
    const double t0 = 0.1;
    const MixedState base = curve.state(t0);
    auto d2 = [&](double h) {
      const double d = dist_base(base, curve.state(t0 + h));
      return d * d;
    };
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double h : deltas) {
      const double x = std::log(h), y = std::log(d2(h));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(deltas.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    worst_slope = std::max(worst_slope, std::abs(slope - 2.0));

    // Symmetric quotient removes the odd term; Richardson removes h^2.
    auto quotient = [&](double h) {
      const double b = dist_base(base, curve.state(t0 - h));
      return (d2(h) + b * b) / (2.0 * h * h);
    };
    const double h = 1e-2;
    const double coefficient = (4.0 * quotient(h / 2) - quotient(h)) / 3.0;
    const double g =
        interferometric_metric_fd([&](double t) { return curve.state(t); }, t0).total;
    worst_rel = std::max(worst_rel, std::abs(coefficient - g) / g);
  }
  return {worst_slope <= 0.1 && worst_rel < 1e-5,
          fmt("max |slope - 2| = %.3e (tol 0.1), max rel coefficient error = %.3e (tol 1e-5)",
              worst_slope, worst_rel)};
}

Outcome interferometer_theorem() {
  std::mt19937_64 rng(404);
  double worst_identity = 0.0;
  double worst_excess = -1.0;
  for (int i = 0; i < 20; ++i) {
    const std::vector<Eigen::Index> ranks = i % 2 ? std::vector<Eigen::Index>{1, 2, 1}
                                                  : std::vector<Eigen::Index>{2, 1};
    const MixedState rho = mt::random_state(ranks, i % 3 == 0, rng);
    const Eigen::Index n = rho.matrix().rows();
    const ComplexMatrix u = haar_unitary(n, rng);
    const OptimalPort best = max_port_probability(rho, u);
    const double d = dist_base(rho, MixedState(u * rho.matrix() * u.adjoint()));
    worst_identity = std::max(worst_identity, std::abs(best.probability - (1.0 - d * d / 4.0)));
    const TypedDecomposition dec = decompose(rho);
    for (int s = 0; s < 100; ++s) {
      ComplexMatrix v = ComplexMatrix::Identity(n, n);
      for (const SpectralBlock& b : dec.blocks()) {
        v += b.frame * (haar_unitary(b.rank(), rng) - ComplexMatrix::Identity(b.rank(), b.rank())) *
             b.frame.adjoint();
      }
      const double pr = port_probability(InterferometerSetup(rho, u, v));
      worst_excess = std::max(worst_excess, pr - best.probability);
    }
  }
  return {worst_identity < 1e-12 && worst_excess < 1e-10,
          fmt("max |pr_max - (1 - d^2/4)| = %.3e (tol 1e-12), max pr(V) - pr_max = %.3e "
              "(tol 1e-10)",
              worst_identity, worst_excess)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(505);
  constexpr double kMinGap = 0.1;
  double worst = 0.0;
  int checked = 0;
  while (checked < 50) {
    const Momentum k{mt::uniform(rng, -pi, pi), mt::uniform(rng, -pi, pi), 0.0};
    const double m = mt::uniform(rng, -3.0, 3.0);
    const double beta = mt::uniform(rng, 0.1, 20.0);
    if (dirac().d(k, m).norm() < kMinGap) continue;
    ++checked;
    const BlochPoint bp = bloch_point(dirac(), k, m);
    const OracleValue oracle = per_momentum_oracle(dirac(), k, m, beta);
    const double gi = interf_integrand(bp, beta);
    const double gb = bures_integrand(bp, beta);
    worst = std::max(worst, std::abs(oracle.interf.total - gi) / gi);
    worst = std::max(worst, std::abs(oracle.bures.total - gb) / gb);
  }
  return {worst < 1e-6, fmt("max relative deviation = %.3e (tol 1e-6)", worst)};
}

Outcome tensor_additivity() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const mt::SmoothCurve a({1, 1}, 0, rng);
    const mt::SmoothCurve b({1, 1}, 0, rng);
    const double t0 = mt::uniform(rng, -0.5, 0.5);
    const double gp = interferometric_metric_fd(
                          [&](double t) { return MixedState(mt::kron(a(t), b(t))); }, t0)
                          .total;
    const double ga = interferometric_metric_fd([&](double t) { return a.state(t); }, t0).total;
    const double gb = interferometric_metric_fd([&](double t) { return b.state(t); }, t0).total;
    worst = std::max(worst, std::abs(gp - ga - gb));
  }
  return {worst < 1e-9, fmt("max |g(a x b) - g(a) - g(b)| = %.3e (tol 1e-9)", worst)};
}

Outcome limits() {
  const ScanOptions opts = scan_options();
  const MetricSample hot = metric_scan(dirac(), {1.0}, {1e6}, 201, opts).front();
  const double halving = std::abs(hot.g_interf.quantum - 0.5 * hot.g_fs);
  const MetricSample cold = metric_scan(dirac(), {1.0}, {1.0 / 200.0}, 201, opts).front();
  const double di = std::abs(cold.g_interf.total - cold.g_fs);
  const double db = std::abs(cold.g_bures.total - cold.g_fs);
  return {halving < 1e-8 && di < 1e-6 && db < 1e-6,
          fmt("T=1e6: |g_I^q - g_fs/2| = %.3e (tol 1e-8); beta=200: |g_I - g_fs| = %.3e, "
              "|g_B - g_fs| = %.3e (tol 1e-6)",
              halving, di, db)};
}

Outcome chern_map() {
  const int minus = chern_number(dirac(), -1.0, 41);
  const int plus = chern_number(dirac(), 1.0, 41);
  const int trivial = chern_number(dirac(), 3.0, 41);
  return {minus == 1 && plus == -1 && trivial == 0,
          fmt("C(-1) = %d, C(1) = %d, C(3) = %d (expected 1, -1, 0)", minus, plus, trivial)};
}

struct Fig2 {
  std::vector<MetricSample> rows;
  std::string csv;
};

Fig2 fig2_scan() {
  cli::ScanConfig config;
  config.m = {-1.0, 1.0, 41};
  config.bz_grid = 201;
  const std::vector<double> ts{0.25, 0.5, 1.0};
  Fig2 out;
  out.rows = metric_scan(dirac(), config.m.values(), ts, config.bz_grid, scan_options());
  std::vector<cli::ScanRow> rows;
  for (const MetricSample& s : out.rows) rows.push_back({s, std::nullopt, std::nullopt});
  std::ostringstream csv;
  cli::write_csv(csv, config, rows);
  out.csv = csv.str();
  return out;
}

Outcome fig2(const Fig2& scan) {
  std::vector<std::string> notes;
  bool ok = true;

  // (a) interferometric ridge at M = 0 on every row.
  bool ridge = true;
  for (double t : {0.25, 0.5, 1.0}) {
    const MetricSample* best = nullptr;
    for (const MetricSample& s : scan.rows) {
      if (s.t == t && (!best || s.g_interf.total > best->g_interf.total)) best = &s;
    }
    ridge &= std::abs(best->m) < 1e-12;
    notes.push_back(fmt("T=%.2f argmax M=%.2f", t, best->m));
  }
  notes.insert(notes.begin(), fmt("(a) %s", ridge ? "pass" : "FAIL"));
  ok &= ridge;

  const ScanOptions opts = scan_options();
  auto at_critical = [&](int n) { return metric_scan(dirac(), {0.0}, {0.5}, n, opts).front(); };
  const MetricSample s101 = at_critical(101);
  const MetricSample s401 = at_critical(401);
  const MetricSample s801 = at_critical(801);

  // (b) non-convergence of the interferometric value at the critical point.
  const double ratio = s401.g_interf.total / s101.g_interf.total;
  const bool b = ratio > 1.5;
  notes.push_back(fmt("(b) %s g_I(401)/g_I(101) = %.4f (need > 1.5)", b ? "pass" : "FAIL", ratio));
  ok &= b;

  // (c) Bures regularity at the same point.
  const double change = std::abs(s801.g_bures.total - s401.g_bures.total) / s401.g_bures.total;
  const bool c = change < 0.01;
  notes.push_back(fmt("(c) %s |dg_B|/g_B = %.3e (need < 1e-2)", c ? "pass" : "FAIL", change));
  ok &= c;

  // (d) no Bures ridge at T = 1.
  std::vector<double> bures_row;
  const MetricSample* best = nullptr;
  for (const MetricSample& s : scan.rows) {
    if (s.t != 1.0) continue;
    bures_row.push_back(s.g_bures.total);
    if (!best || s.g_bures.total > best->g_bures.total) best = &s;
  }
  std::sort(bures_row.begin(), bures_row.end());
  const double median = bures_row[bures_row.size() / 2];
  const bool off_centre = std::abs(best->m) > 1e-12;
  const bool d = off_centre || best->g_bures.total <= 2.0 * median;
  notes.push_back(fmt("(d) %s argmax M=%.2f, max/median = %.4f", d ? "pass" : "FAIL", best->m,
                      best->g_bures.total / median));
  ok &= d;

  std::string detail;
  for (std::size_t i = 0; i < notes.size(); ++i) detail += (i ? "; " : "") + notes[i];
  return {ok, detail};
}

Outcome determinism(const Fig2& first) {
  const Fig2 second = fig2_scan();
  const bool same = first.csv == second.csv;
  return {same, fmt("%zu CSV bytes, %s", first.csv.size(), same ? "identical" : "DIFFERENT")};
}

int run(int id, const char* name, double budget_s, const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", id,
              name, o.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
  return pass ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  failures += run(1, "gauge infimum", 60, gauge_infimum);
  failures += run(2, "purification identity", 5, purification_identity);
  failures += run(3, "metric-distance consistency", 30, metric_distance);
  failures += run(4, "interferometer theorem", 10, interferometer_theorem);
  failures += run(5, "closed-form oracle equivalence", 60, oracle_equivalence);
  failures += run(6, "tensor-product additivity", 10, tensor_additivity);
  failures += run(7, "limit checks", 120, limits);
  failures += run(8, "Chern phase map", 5, chern_map);
  Fig2 scan;
  failures += run(9, "temperature scan", 900, [&] {
    scan = fig2_scan();
    return fig2(scan);
  });
  failures += run(10, "determinism", 900, [&] { return determinism(scan); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
