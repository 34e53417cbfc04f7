#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skewless/analysis.hpp"
#include "skewless/cli.hpp"
#include "skewless/config.hpp"
#include "skewless/noise.hpp"
#include "skewless/optimize.hpp"
#include "skewless/scenarios.hpp"
#include "skewless/sim.hpp"

namespace py = pybind11;
using namespace skewless;

namespace {

py::dict verdict_dict(const SyncVerdict& v) {
  py::dict d;
  d["stable"] = v.stable;
  d["marginal"] = v.marginal;
  d["connected"] = v.connected;
  d["real_spectrum"] = v.real_spectrum;
  d["rho_j2"] = v.rho_j2;
  d["reasons"] = v.reasons;
  d["nu"] = v.nu;
  d["tau_max"] = v.tau_max ? py::cast(*v.tau_max) : py::none();
  return d;
}

py::dict trace_dict(const SimTrace& t) {
  py::dict d;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> off(
      t.offsets_us.data(), t.steps, t.n);
  d["offsets_us"] = MatrixXd(off);
  d["reference"] = t.reference;
  d["sqrt_sn_us"] = t.metrics.sqrt_sn_us;
  d["ci99_us"] = t.metrics.ci99_us;
  d["ci100_us"] = t.metrics.ci100_us;
  d["drift_fit"] = t.metrics.drift_fit;
  d["mean_offsets_us"] = t.metrics.mean_offsets_us;
  return d;
}

}  // namespace

PYBIND11_MODULE(_skewless, m) {
  m.doc() = "Skewless clock synchronization core (zero-based node indices)";

  py::class_<Edge>(m, "Edge")
      .def(py::init([](int from, int to, double weight, double gain) {
             return Edge{from, to, weight, gain};
           }),
           py::arg("from_"), py::arg("to"), py::arg("weight") = 1.0, py::arg("noise_gain") = 1.0)
      .def_readwrite("from_", &Edge::from)
      .def_readwrite("to", &Edge::to)
      .def_readwrite("weight", &Edge::weight)
      .def_readwrite("noise_gain", &Edge::noise_gain);

  py::class_<TopologySpec>(m, "Topology")
      .def(py::init([](int n, std::vector<Edge> edges, std::optional<VectorXd> skew) {
             TopologySpec t;
             t.n = n;
             t.edges = std::move(edges);
             if (skew) t.skew = *skew;
             t.validate();
             return t;
           }),
           py::arg("n"), py::arg("edges"), py::arg("skew") = py::none())
      .def_readonly("n", &TopologySpec::n)
      .def_readonly("edges", &TopologySpec::edges)
      .def_property_readonly("laplacian", [](const TopologySpec& t) { return laplacian(t); })
      .def_property_readonly("mu_max", [](const TopologySpec& t) { return mu_max_exact(t); })
      .def_property_readonly("leader", [](const TopologySpec& t) { return find_leader(t); });

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init([](double k1, double k2, double p, double tau) {
             ProtocolParams q{k1, k2, p, tau};
             q.validate();
             return q;
           }),
           py::arg("kappa1") = 1.1, py::arg("kappa2") = 1.0, py::arg("p") = 0.99,
           py::arg("tau") = 1.0)
      .def_readwrite("kappa1", &ProtocolParams::kappa1)
      .def_readwrite("kappa2", &ProtocolParams::kappa2)
      .def_readwrite("p", &ProtocolParams::p)
      .def_readwrite("tau", &ProtocolParams::tau)
      .def("__repr__", [](const ProtocolParams& q) {
        return "ProtocolParams(kappa1=" + std::to_string(q.kappa1) + ", kappa2=" +
               std::to_string(q.kappa2) + ", p=" + std::to_string(q.p) +
               ", tau=" + std::to_string(q.tau) + ")";
      });

  m.def("default_params", &default_params, py::arg("tau"));
  m.def("client_server", &client_server, py::arg("c") = 0.7);
  m.def("leader_loop", &leader_loop, py::arg("c") = 0.7);
  m.def("wheel_topology", &wheel_topology, py::arg("n"), py::arg("k"), py::arg("c") = 0.7);
  m.def("experiment6_topology", &experiment6_topology, py::arg("preset"));

  m.def("check_theorem2", [](const TopologySpec& t, const ProtocolParams& q) {
    return verdict_dict(check_theorem2(t, q, build_graph_quantities(t)));
  });
  m.def("tau_max_for", &tau_max_for, py::arg("params"), py::arg("mu_max"));
  m.def("tau_bound_topology_free", &tau_bound_topology_free, py::arg("params"),
        py::arg("alpha_max"), py::arg("r_hat_max") = 1.0);
  m.def("hermite_biehler_stable", &hermite_biehler_stable, py::arg("nu"), py::arg("params"));
  m.def("predict_fixed_point",
        [](const TopologySpec& t, const ProtocolParams& q, const VectorXd& x0,
           const VectorXd& s0) {
          SystemState z = SystemState::zeros(t.n);
          z.x = x0;
          z.s = s0;
          const FixedPoint fp = predict_fixed_point(z, t, q, build_graph_quantities(t));
          return py::make_tuple(fp.x_star, fp.r_star);
        },
        py::arg("topology"), py::arg("params"), py::arg("x0"), py::arg("s0"));

  m.def("h2_norm", [](const TopologySpec& t, const ProtocolParams& q) {
    return h2_norm(build_matrices(t, q, build_graph_quantities(t))).f;
  });
  m.def("h2_gradient", [](const TopologySpec& t, const ProtocolParams& q) {
    const H2Gradient g = h2_gradient(t, q);
    return py::make_tuple(g.f, g.d_kappa1, g.d_kappa2, g.d_p);
  });
  m.def(
      "optimize",
      [](const TopologySpec& t, const ProtocolParams& q, double rho_star, int max_iter) {
        OptimizeOptions o;
        o.rho_star = rho_star;
        o.max_iter = max_iter;
        const OptimizeResult r = optimize_params(t, q, o);
        std::vector<double> fs;
        for (const auto& it : r.log) fs.push_back(it.f);
        return py::make_tuple(r.params, r.f, r.rho, fs);
      },
      py::arg("topology"), py::arg("params"), py::arg("rho_star") = 0.999,
      py::arg("max_iter") = 200);

  m.def("load_config", [](const std::string& path) {
    const Config c = load_config(path);
    return py::make_tuple(c.scenario.topo, c.scenario.params);
  });
  m.def(
      "simulate",
      [](const std::string& config_path, std::optional<std::uint64_t> seed) {
        Config c = load_config(config_path);
        if (seed) c.scenario.noise.seed = *seed;
        return trace_dict(run(c.scenario));
      },
      py::arg("config"), py::arg("seed") = py::none());
  m.def(
      "simulate_preset",
      [](const std::string& name, std::optional<long> steps, int wheel_k) {
        Scenario sc = preset_scenario(name, wheel_k);
        if (steps) sc.steps = *steps;
        sc.validate();
        return trace_dict(run(sc));
      },
      py::arg("name"), py::arg("steps") = py::none(), py::arg("wheel_k") = 0);

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
