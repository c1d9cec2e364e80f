#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mixgeom/errors.hpp"
#include "mixgeom/geometry.hpp"
#include "mixgeom/interferometer.hpp"
#include "mixgeom/pullback.hpp"

namespace py = pybind11;
using namespace mixgeom;

namespace {

Momentum to_momentum(const std::vector<double>& k) {
  if (k.empty() || k.size() > 3) {
    throw Error(ErrorCode::InvalidArgument, "k must have 1 to 3 components");
  }
  Momentum out{0.0, 0.0, 0.0};
  std::copy(k.begin(), k.end(), out.begin());
  return out;
}

StateCurve to_curve(const std::function<ComplexMatrix(double)>& f) {
  return [f](double t) {
    py::gil_scoped_acquire gil;
    return MixedState(f(t));
  };
}

FiniteDifferenceOptions fd_options(std::optional<double> step) {
  FiniteDifferenceOptions o;
  o.step = step;
  return o;
}

py::dict sample_dict(const MetricSample& s) {
  py::dict d;
  d["M"] = s.m;
  d["T"] = s.t;
  d["g_interf"] = s.g_interf;
  d["g_bures"] = s.g_bures;
  d["g_fs"] = s.g_fs;
  d["bz_grid"] = s.bz_grid;
  d["gapless_cells"] = s.gapless_cells;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mixgeom, m) {
  m.doc() = "Interferometric and Bures geometry of mixed quantum states";

  py::register_exception<Error>(m, "MixgeomError", PyExc_ValueError);

  py::class_<MetricValue>(m, "MetricValue")
      .def_readonly("classical", &MetricValue::classical)
      .def_readonly("quantum", &MetricValue::quantum)
      .def_readonly("total", &MetricValue::total)
      .def("__repr__", [](const MetricValue& v) {
        return "MetricValue(classical=" + std::to_string(v.classical) +
               ", quantum=" + std::to_string(v.quantum) + ", total=" + std::to_string(v.total) +
               ")";
      });

  py::class_<TypedDecomposition>(m, "Decomposition")
      .def_property_readonly("dim", &TypedDecomposition::dim)
      .def_property_readonly("type", &TypedDecomposition::type)
      .def_property_readonly("kernel_rank", &TypedDecomposition::kernel_rank)
      .def_property_readonly("weights",
                             [](const TypedDecomposition& d) {
                               std::vector<double> p;
                               for (const SpectralBlock& b : d.blocks()) p.push_back(b.p);
                               return p;
                             })
      .def_property_readonly("frames",
                             [](const TypedDecomposition& d) {
                               std::vector<ComplexMatrix> w;
                               for (const SpectralBlock& b : d.blocks()) w.push_back(b.frame);
                               return w;
                             })
      .def("compose", [](const TypedDecomposition& d) { return compose(d).matrix(); });

  m.def(
      "thermal_factors",
      [](double x) {
        const ThermalFactors f = thermal_factors(x);
        return py::make_tuple(f.inv_cosh_plus_one, f.cosh_ratio);
      },
      py::arg("x"), "(1/(cosh x + 1), cosh x/(cosh x + 1)) without overflow");
  m.def("bures_weight", &bures_weight, py::arg("x"), "(cosh x - 1)/cosh x");

  m.def(
      "gibbs", [](const ComplexMatrix& h, double beta) { return gibbs(h, beta).matrix(); },
      py::arg("h"), py::arg("beta"));
  m.def(
      "decompose",
      [](const ComplexMatrix& rho, double eps_deg, double eps_zero) {
        return decompose(MixedState(rho), DecomposeOptions{eps_deg, eps_zero});
      },
      py::arg("rho"), py::arg("eps_deg") = 1e-8, py::arg("eps_zero") = 1e-12);

  m.def(
      "dist_base",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma) {
        return dist_base(MixedState(rho), MixedState(sigma));
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "dist_base_bruteforce",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma, std::int64_t samples,
         std::uint64_t seed) {
        return dist_base_bruteforce(MixedState(rho), MixedState(sigma), samples, seed);
      },
      py::arg("rho"), py::arg("sigma"), py::arg("samples") = 10000, py::arg("seed") = 0);

  m.def(
      "interferometric_metric",
      [](const std::function<ComplexMatrix(double)>& curve, double t0,
         std::optional<double> step) {
        return interferometric_metric_fd(to_curve(curve), t0, fd_options(step));
      },
      py::arg("curve"), py::arg("t0"), py::arg("step") = py::none(),
      "Metric coefficient of t -> curve(t) at t0 by central differences");
  m.def(
      "bures_metric",
      [](const std::function<ComplexMatrix(double)>& curve, double t0,
         std::optional<double> step) {
        return bures_metric_parts_fd(to_curve(curve), t0, fd_options(step));
      },
      py::arg("curve"), py::arg("t0"), py::arg("step") = py::none());

  m.def(
      "port_probability",
      [](const ComplexMatrix& rho, const ComplexMatrix& u, const ComplexMatrix& v) {
        return port_probability(InterferometerSetup(MixedState(rho), u, v));
      },
      py::arg("rho"), py::arg("u"), py::arg("v"));
  m.def(
      "simulate_chain",
      [](const ComplexMatrix& rho, const ComplexMatrix& u, const ComplexMatrix& v,
         const std::string& splitter) {
        BeamSplitter bs;
        if (splitter == "symmetric") {
          bs = BeamSplitter::Symmetric;
        } else if (splitter == "hadamard") {
          bs = BeamSplitter::Hadamard;
        } else {
          throw Error(ErrorCode::InvalidArgument, "splitter must be 'symmetric' or 'hadamard'");
        }
        const PortProbabilities p = simulate_chain(MixedState(rho), u, v, bs);
        return py::make_tuple(p.constructive, p.destructive);
      },
      py::arg("rho"), py::arg("u"), py::arg("v"), py::arg("splitter") = "symmetric");
  m.def(
      "max_port_probability",
      [](const ComplexMatrix& rho, const ComplexMatrix& u) {
        const OptimalPort best = max_port_probability(MixedState(rho), u);
        return py::make_tuple(best.probability, best.v_opt);
      },
      py::arg("rho"), py::arg("u"));

  m.def(
      "bloch_point",
      [](const std::vector<double>& k, double mass, const std::string& model) {
        const BlochPoint bp = bloch_point(model_by_name(model), to_momentum(k), mass);
        py::dict d;
        d["energy"] = bp.energy;
        d["n"] = bp.n;
        d["dE_dM"] = bp.dE_dM;
        d["dn_dM"] = bp.dn_dM;
        d["dn_dM_sq"] = bp.dn_dM_sq;
        return d;
      },
      py::arg("k"), py::arg("m"), py::arg("model") = "dirac");
  m.def(
      "integrands",
      [](const std::vector<double>& k, double mass, double beta, const std::string& model) {
        const BlochPoint bp = bloch_point(model_by_name(model), to_momentum(k), mass);
        py::dict d;
        d["interf"] = interf_integrand_parts(bp, beta);
        d["bures"] = bures_integrand_parts(bp, beta);
        d["fs"] = fubini_study_integrand(bp);
        return d;
      },
      py::arg("k"), py::arg("m"), py::arg("beta"), py::arg("model") = "dirac");
  m.def(
      "per_momentum_oracle",
      [](const std::vector<double>& k, double mass, double beta, const std::string& model) {
        const OracleValue o =
            per_momentum_oracle(model_by_name(model), to_momentum(k), mass, beta);
        py::dict d;
        d["interf"] = o.interf;
        d["bures"] = o.bures;
        return d;
      },
      py::arg("k"), py::arg("m"), py::arg("beta"), py::arg("model") = "dirac");
  m.def(
      "chern_number",
      [](double mass, int n, const std::string& model) {
        return chern_number(model_by_name(model), mass, n);
      },
      py::arg("m"), py::arg("n") = 41, py::arg("model") = "dirac");
  m.def(
      "metric_scan",
      [](const std::vector<double>& ms, const std::vector<double>& ts, int n, int threads,
         const std::string& model) {
        ScanOptions opts;
        opts.threads = threads;
        std::vector<MetricSample> samples;
        {
          py::gil_scoped_release release;
          samples = metric_scan(model_by_name(model), ms, ts, n, opts);
        }
        py::list out;
        for (const MetricSample& s : samples) out.append(sample_dict(s));
        return out;
      },
      py::arg("m_values"), py::arg("t_values"), py::arg("n") = 201, py::arg("threads") = 0,
      py::arg("model") = "dirac",
      "Brillouin-zone integrated metrics for every (M, T), M-major");
}
