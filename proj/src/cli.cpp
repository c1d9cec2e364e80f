#include "mixgeom/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixgeom/errors.hpp"

namespace mixgeom::cli {

namespace {

std::string format_double(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

OutputTarget classify_output(const std::string& path) {
  if (ends_with(path, ".csv")) return {path, OutputFormat::Csv};
  if (ends_with(path, ".json")) return {path, OutputFormat::Json};
  throw UsageError("out: cannot infer format of '" + path + "' (expected .csv or .json)");
}

}  // namespace

std::vector<double> Range::values() const {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v.push_back(min);
    return v;
  }
  for (int i = 0; i < steps; ++i) {
    if (i == steps - 1) {
      v.push_back(max);
    } else {
      v.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
  }
  return v;
}

Range parse_range(const std::string& text, const std::string& key) {
  const std::size_t a = text.find(':');
  const std::size_t b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw UsageError(key + ": expected min:max:steps, got '" + text + "'");
  }
  Range r;
  try {
    std::size_t used = 0;
    const std::string smin = text.substr(0, a);
    const std::string smax = text.substr(a + 1, b - a - 1);
    const std::string ssteps = text.substr(b + 1);
    r.min = std::stod(smin, &used);
    if (used != smin.size()) throw std::invalid_argument(smin);
    r.max = std::stod(smax, &used);
    if (used != smax.size()) throw std::invalid_argument(smax);
    r.steps = std::stoi(ssteps, &used);
    if (used != ssteps.size()) throw std::invalid_argument(ssteps);
  } catch (const std::logic_error&) {
    throw UsageError(key + ": malformed range '" + text + "'");
  }
  if (!std::isfinite(r.min) || !std::isfinite(r.max)) {
    throw UsageError(key + ": range bounds must be finite");
  }
  if (r.steps < 1) throw UsageError(key + ": steps must be >= 1");
  if (r.steps == 1 && r.min != r.max) {
    throw UsageError(key + ": a single-step range needs min == max");
  }
  if (r.max < r.min) throw UsageError(key + ": max must not be below min");
  return r;
}

void ScanConfig::validate() const {
  if (model != "dirac") throw UsageError("model: unknown model '" + model + "'");
  if (m.steps < 1) throw UsageError("m: steps must be >= 1");
  if (t.steps < 1) throw UsageError("t: steps must be >= 1");
  if (!(t.min > 0.0)) throw UsageError("t: temperatures must be > 0");
  if (bz_grid < 3) throw UsageError("bz_grid must be >= 3");
  if (bz_grid % 2 == 0) throw UsageError("bz_grid must be odd");
}

ScanConfig parse_config(const std::vector<std::string>& args) {
  ScanConfig config;
  std::string m_text;
  std::string t_text;
  std::vector<std::string> outputs;

  CLI::App app{"Interferometric and Bures metric scan over (M, T)", "scan"};
  app.set_config("--config", "", "key = value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--model", config.model, "built-in model name (dirac)");
  app.add_option("--m", m_text, "M range min:max:steps (inclusive)");
  app.add_option("--t", t_text, "T range min:max:steps (inclusive, T > 0)");
  app.add_option("--bz", config.bz_grid, "odd Brillouin-zone grid size N");
  app.add_option("--out", outputs, "output path (.csv or .json), repeatable");
  app.add_option("--svg", config.svg_prefix, "prefix for SVG heatmaps and line cuts");
  app.add_flag("--emit-chern", config.emit_chern, "append the lattice Chern number column");
  app.add_flag("--emit-convergence-pair", config.emit_convergence_pair,
               "append totals recomputed on the 2N+1 grid");
  app.add_option("--seed", config.seed, "seed recorded in JSON metadata");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!m_text.empty()) config.m = parse_range(m_text, "m");
  if (!t_text.empty()) config.t = parse_range(t_text, "t");
  for (const std::string& path : outputs) config.outputs.push_back(classify_output(path));
  config.validate();
  return config;
}

std::vector<ScanRow> compute_rows(const ScanConfig& config, const ScanOptions& opts) {
  const TwoBandModel model = model_by_name(config.model);
  const std::vector<double> ms = config.m.values();
  const std::vector<double> ts = config.t.values();
  const std::vector<MetricSample> base = metric_scan(model, ms, ts, config.bz_grid, opts);
  std::vector<MetricSample> refined;
  if (config.emit_convergence_pair) {
    refined = metric_scan(model, ms, ts, 2 * config.bz_grid + 1, opts);
  }

  std::vector<ScanRow> rows;
  rows.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    ScanRow row{base[i], std::nullopt, std::nullopt};
    if (config.emit_chern) {
      try {
        row.chern = chern_number(model, base[i].m, std::max(config.bz_grid, 8), opts.eps_gap);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::GaplessParameter) throw;
      }
    }
    if (config.emit_convergence_pair) row.refined = refined[i];
    rows.push_back(row);
  }
  return rows;
}

std::string csv_header(const ScanConfig& config) {
  std::string h =
      "M,T,g_interf_classical,g_interf_quantum,g_interf_total,g_bures_classical,"
      "g_bures_quantum,g_bures_total,g_fs,gapless_cells";
  if (config.emit_chern) h += ",chern";
  if (config.emit_convergence_pair) h += ",g_interf_total_refined,g_bures_total_refined";
  return h;
}

void write_csv(std::ostream& os, const ScanConfig& config, const std::vector<ScanRow>& rows) {
  os << csv_header(config) << '\n';
  for (const ScanRow& row : rows) {
    const MetricSample& s = row.sample;
    os << format_double(s.m) << ',' << format_double(s.t) << ','
       << format_double(s.g_interf.classical) << ',' << format_double(s.g_interf.quantum) << ','
       << format_double(s.g_interf.total) << ',' << format_double(s.g_bures.classical) << ','
       << format_double(s.g_bures.quantum) << ',' << format_double(s.g_bures.total) << ','
       << format_double(s.g_fs) << ',' << s.gapless_cells;
    if (config.emit_chern) {
      os << ',';
      if (row.chern) os << *row.chern;
    }
    if (config.emit_convergence_pair) {
      os << ',' << format_double(row.refined->g_interf.total) << ','
         << format_double(row.refined->g_bures.total);
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const ScanConfig& config, const std::vector<ScanRow>& rows) {
  nlohmann::ordered_json doc;
  doc["format"] = 1;
  doc["model"] = config.model;
  doc["bz_grid"] = config.bz_grid;
  doc["seed"] = config.seed;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const ScanRow& row : rows) {
    const MetricSample& s = row.sample;
    nlohmann::ordered_json item;
    item["M"] = s.m;
    item["T"] = s.t;
    item["g_interf_classical"] = s.g_interf.classical;
    item["g_interf_quantum"] = s.g_interf.quantum;
    item["g_interf_total"] = s.g_interf.total;
    item["g_bures_classical"] = s.g_bures.classical;
    item["g_bures_quantum"] = s.g_bures.quantum;
    item["g_bures_total"] = s.g_bures.total;
    item["g_fs"] = s.g_fs;
    item["gapless_cells"] = s.gapless_cells;
    if (config.emit_chern) {
      item["chern"] = row.chern ? nlohmann::ordered_json(*row.chern) : nlohmann::ordered_json();
    }
    if (config.emit_convergence_pair) {
      item["g_interf_total_refined"] = row.refined->g_interf.total;
      item["g_bures_total_refined"] = row.refined->g_bures.total;
    }
    items.push_back(std::move(item));
  }
  doc["rows"] = std::move(items);
  os << doc.dump(2) << '\n';
}

namespace {

constexpr double kPlotWidth = 640.0;
constexpr double kPlotHeight = 420.0;
constexpr double kMargin = 60.0;

std::string fixed(double v, int digits = 2) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
  return buf.data();
}

std::string short_number(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3g", v);
  return buf.data();
}

// Piecewise-linear blue -> yellow ramp on t in [0, 1].
std::string ramp_color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<int, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(stops[i][c] * (1.0 - f) + stops[i + 1][c] * f));
  }
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf.data();
}

void svg_open(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kPlotWidth + 2 * kMargin, 0)
     << "\" height=\"" << fixed(kPlotHeight + 2 * kMargin, 0) << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << fixed(kMargin, 0) << "\" y=\"30\" font-size=\"16\">" << title
     << "</text>\n";
}

void svg_axes(std::ostream& os, const std::string& xlabel, const std::string& ylabel,
              double xmin, double xmax, double ymin, double ymax) {
  const double x0 = kMargin;
  const double y0 = kMargin + kPlotHeight;
  os << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(kMargin) << "\" width=\""
     << fixed(kPlotWidth) << "\" height=\"" << fixed(kPlotHeight)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fixed(x0 + kPlotWidth / 2) << "\" y=\"" << fixed(y0 + 40)
     << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"15\" y=\"" << fixed(kMargin + kPlotHeight / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << fixed(kMargin + kPlotHeight / 2)
     << ")\">" << ylabel << "</text>\n";
  os << "<text x=\"" << fixed(x0) << "\" y=\"" << fixed(y0 + 18) << "\" text-anchor=\"middle\">"
     << short_number(xmin) << "</text>\n";
  os << "<text x=\"" << fixed(x0 + kPlotWidth) << "\" y=\"" << fixed(y0 + 18)
     << "\" text-anchor=\"middle\">" << short_number(xmax) << "</text>\n";
  os << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(y0) << "\" text-anchor=\"end\">"
     << short_number(ymin) << "</text>\n";
  os << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(kMargin + 10)
     << "\" text-anchor=\"end\">" << short_number(ymax) << "</text>\n";
}

}  // namespace

void write_heatmap_svg(std::ostream& os, const ScanConfig& config,
                       const std::vector<ScanRow>& rows, bool bures) {
  const std::vector<double> ms = config.m.values();
  const std::vector<double> ts = config.t.values();
  auto value = [&](const ScanRow& r) {
    return bures ? r.sample.g_bures.total : r.sample.g_interf.total;
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const ScanRow& r : rows) {
    lo = std::min(lo, value(r));
    hi = std::max(hi, value(r));
  }
  const double span = hi > lo ? hi - lo : 1.0;

  svg_open(os, bures ? "Bures metric g_B(M, T)" : "Interferometric metric g_I(M, T)");
  const double cw = kPlotWidth / static_cast<double>(ms.size());
  const double ch = kPlotHeight / static_cast<double>(ts.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const ScanRow& r = rows[i * ts.size() + j];
      const double x = kMargin + cw * static_cast<double>(i);
      // Temperature increases upwards.
      const double y = kMargin + kPlotHeight - ch * static_cast<double>(j + 1);
      os << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(cw + 0.5)
         << "\" height=\"" << fixed(ch + 0.5) << "\" fill=\"" << ramp_color((value(r) - lo) / span)
         << "\"/>\n";
    }
  }
  svg_axes(os, "M", "T", ms.front(), ms.back(), ts.front(), ts.back());
  os << "<text x=\"" << fixed(kMargin + kPlotWidth) << "\" y=\"30\" text-anchor=\"end\">range ["
     << short_number(lo) << ", " << short_number(hi) << "]</text>\n";
  os << "</svg>\n";
}

void write_cuts_svg(std::ostream& os, const ScanConfig& config, const std::vector<ScanRow>& rows) {
  const std::vector<double> ms = config.m.values();
  const std::vector<double> ts = config.t.values();
  double hi = 0.0;
  for (const ScanRow& r : rows) hi = std::max({hi, r.sample.g_interf.total, r.sample.g_bures.total});
  if (!(hi > 0.0)) hi = 1.0;
  const double mspan = ms.back() > ms.front() ? ms.back() - ms.front() : 1.0;

  svg_open(os, "Line cuts at fixed T (solid: interferometric, dashed: Bures)");
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const std::string color = ramp_color(ts.size() > 1 ? static_cast<double>(j) / (ts.size() - 1) : 0.0);
    for (int which = 0; which < 2; ++which) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
         << (which == 1 ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const ScanRow& r = rows[i * ts.size() + j];
        const double v = which == 0 ? r.sample.g_interf.total : r.sample.g_bures.total;
        const double x = kMargin + kPlotWidth * (ms[i] - ms.front()) / mspan;
        const double y = kMargin + kPlotHeight * (1.0 - v / hi);
        os << fixed(x) << ',' << fixed(y) << ' ';
      }
      os << "\"/>\n";
    }
    os << "<text x=\"" << fixed(kMargin + kPlotWidth + 5) << "\" y=\""
       << fixed(kMargin + 15.0 * static_cast<double>(j + 1)) << "\" fill=\"" << color
       << "\">T=" << short_number(ts[j]) << "</text>\n";
  }
  svg_axes(os, "M", "metric", ms.front(), ms.back(), 0.0, hi);
  os << "</svg>\n";
}

int run_scan(const ScanConfig& config, std::ostream& log) {
  std::vector<ScanRow> rows;
  try {
    rows = compute_rows(config);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }

  auto write_file = [&](const std::string& path, auto&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      log << "error: cannot open '" << path << "' for writing\n";
      return false;
    }
    writer(out);
    out.flush();
    if (!out) {
      log << "error: failed writing '" << path << "'\n";
      return false;
    }
    return true;
  };

  bool ok = true;
  for (const OutputTarget& target : config.outputs) {
    ok &= write_file(target.path, [&](std::ostream& os) {
      if (target.format == OutputFormat::Csv) {
        write_csv(os, config, rows);
      } else {
        write_json(os, config, rows);
      }
    });
  }
  if (config.outputs.empty()) write_csv(std::cout, config, rows);
  if (!config.svg_prefix.empty()) {
    ok &= write_file(config.svg_prefix + "_interf_heatmap.svg",
                     [&](std::ostream& os) { write_heatmap_svg(os, config, rows, false); });
    ok &= write_file(config.svg_prefix + "_bures_heatmap.svg",
                     [&](std::ostream& os) { write_heatmap_svg(os, config, rows, true); });
    ok &= write_file(config.svg_prefix + "_cuts.svg",
                     [&](std::ostream& os) { write_cuts_svg(os, config, rows); });
  }

  std::int64_t gapless = 0;
  for (const ScanRow& r : rows) gapless += r.sample.gapless_cells;
  log << "scanned " << rows.size() << " (M, T) cells at N=" << config.bz_grid;
  if (gapless > 0) log << ", " << gapless << " gapless BZ cells excluded";
  log << '\n';
  return ok ? 0 : 1;
}

int main_entry(int argc, char** argv) {
  const std::string usage =
      "usage: mixgeom scan [--config FILE] [--model dirac] [--m min:max:steps]\n"
      "                    [--t min:max:steps] [--bz N] [--out PATH]... [--svg PREFIX]\n"
      "                    [--emit-chern] [--emit-convergence-pair] [--seed S]\n";
  if (argc < 2) {
    std::cerr << usage;
    return 2;
  }
  const std::string command = argv[1];
  if (command == "-h" || command == "--help") {
    std::cout << usage;
    return 0;
  }
  if (command != "scan") {
    std::cerr << "unknown command '" << command << "'\n" << usage;
    return 2;
  }
  std::vector<std::string> args(argv + 2, argv + argc);
  if (std::find(args.begin(), args.end(), "--help") != args.end() ||
      std::find(args.begin(), args.end(), "-h") != args.end()) {
    std::cout << usage;
    return 0;
  }
  ScanConfig config;
  try {
    config = parse_config(args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return run_scan(config, std::cerr);
}

}  // namespace mixgeom::cli
