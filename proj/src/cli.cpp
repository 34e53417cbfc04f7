#include "skewless/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "skewless/analysis.hpp"
#include "skewless/csv.hpp"
#include "skewless/scenarios.hpp"

namespace skewless {
namespace {

std::string seconds_short(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", t);
  return buf;
}

std::string join(const VectorXd& v, double scale = 1.0) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_number(v(i) * scale);
  }
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

}  // namespace

int cmd_analyze(const Scenario& sc, std::ostream& out) {
  const GraphQuantities gq = build_graph_quantities(sc.topo);
  const SyncVerdict v = check_theorem2(sc.topo, sc.params, gq);
  const char* word = v.stable ? "stable" : (v.marginal ? "marginal" : "unstable");

  out << word << ", tauMax=" << (!v.tau_max ? std::string("n/a")
                                : std::isinf(*v.tau_max) ? std::string("inf")
                                                         : seconds_short(*v.tau_max) + "s") << '\n';
  out << "rhoJ2: " << format_number(v.rho_j2) << '\n';
  out << "connected: " << (v.connected ? "yes" : "no") << '\n';
  out << "leader: " << (gq.leader ? std::to_string(*gq.leader + 1) : "none") << '\n';
  out << "real_spectrum: " << (v.real_spectrum ? "yes" : "no") << '\n';
  out << "nu:";
  for (const auto& nu : v.nu) {
    out << ' ' << format_number(nu.real());
    if (nu.imag() != 0.0) out << (nu.imag() > 0 ? "+" : "") << format_number(nu.imag()) << 'i';
  }
  out << '\n';
  out << "mu_max: " << format_number(gq.mu_max) << '\n';
  out << "tau_max_s: " << (v.tau_max ? format_number(*v.tau_max) : "n/a") << '\n';

  const double r_hat = sc.topo.skews().maxCoeff();
  std::string bound = "n/a";
  try {
    bound = format_number(tau_bound_topology_free(sc.params, gq.alpha_max, r_hat));
  } catch (const std::invalid_argument&) {
  }
  out << "tau_bound_topology_free_s: " << bound << '\n';
  for (const std::string& r : v.reasons) out << "reason: " << r << '\n';

  const SystemState z0 = sc.initial_state();
  std::string x_star = "n/a";
  std::string r_star = "n/a";
  try {
    const FixedPoint fp = predict_fixed_point(z0, sc.topo, sc.params, gq);
    x_star = format_number(fp.x_star);
    r_star = format_number(fp.r_star);
  } catch (const std::domain_error&) {
  }
  out << "x_star_s: " << x_star << '\n';
  out << "r_star: " << r_star << '\n';

  const VectorXd wbar = constant_biases(sc);
  std::string drift = "n/a";
  std::string offsets = "n/a";
  try {
    drift = format_number(drift_rate(sc.topo, gq, sc.params, wbar));
  } catch (const std::domain_error&) {
  }
  try {
    offsets = join(steady_state_offsets(sc.topo, gq, sc.params, wbar), 1e6);
  } catch (const std::domain_error&) {
  }
  out << "drift_rate_per_step: " << drift << '\n';
  out << "steady_offsets_us: " << offsets << '\n';

  if (v.stable) return kExitStable;
  return v.marginal ? kExitMarginal : kExitUnstable;
}

int cmd_simulate(const Scenario& sc, const std::string& out_dir, std::ostream& out) {
  const SimTrace trace = run(sc);
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f = open_out(dir / "trace.csv");
    write_trace_csv(f, trace);
    if (!f) throw std::runtime_error("write failed: trace.csv");
  }
  {
    std::ofstream f = open_out(dir / "metrics.csv");
    write_metrics_csv(f, trace.metrics);
    if (!f) throw std::runtime_error("write failed: metrics.csv");
  }
  out << "sqrtSn_us=" << format_number(trace.metrics.sqrt_sn_us)
      << " CI99_us=" << format_number(trace.metrics.ci99_us)
      << " CI100_us=" << format_number(trace.metrics.ci100_us)
      << " drift_fit=" << format_number(trace.metrics.drift_fit) << '\n';
  if (trace.diverged_at) {
    out << "diverged at step " << *trace.diverged_at << '\n';
    return kExitUnstable;
  }
  return kExitStable;
}

int cmd_optimize(const TopologySpec& topo, const ProtocolParams& init,
                 const OptimizeOptions& options, const std::string& out_dir, std::ostream& out) {
  OptimizeResult r;
  try {
    r = optimize_params(topo, init, options);
  } catch (const std::invalid_argument& ex) {
    out << "infeasible start: " << ex.what() << '\n';
    return kExitUnstable;
  } catch (const std::runtime_error& ex) {
    out << "infeasible start: " << ex.what() << '\n';
    return kExitUnstable;
  }
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f = open_out(dir / "opt_log.csv");
    write_opt_log_csv(f, r);
  }
  {
    std::ofstream f = open_out(dir / "opt_params.csv");
    write_opt_params_csv(f, r);
  }
  out << "kappa1=" << format_number(r.params.kappa1) << " kappa2=" << format_number(r.params.kappa2)
      << " p=" << format_number(r.params.p) << " tau=" << format_number(r.params.tau)
      << " f=" << format_number(r.f) << " rho=" << format_number(r.rho) << '\n';
  return kExitStable;
}

Scenario preset_scenario(const std::string& name, int wheel_k) {
  if (name == "exp1") return experiment1_scenario();
  if (name == "exp1a" || name == "exp1b" || name == "exp1c") {
    Scenario sc;
    sc.topo = name == "exp1a" ? client_server(0.7) : leader_loop(0.7);
    sc.params = default_params(name == "exp1c" ? 0.5 : 1.0);
    // Same start as the matching configs: uncorrected clocks, 1 ms apart.
    SystemState z = SystemState::zeros(sc.topo.n);
    z.s.setOnes();
    if (name == "exp1a") {
      sc.topo.skew = Eigen::Vector2d(1.0, 1.00002);
      z.x << 0.0, 1e-3;
    } else {
      sc.topo.skew = Eigen::Vector3d(1.0, 1.00002, 0.99997);
      z.x << 0.0, 1e-3, -5e-4;
    }
    sc.initial = z;
    sc.steps = 2000;
    return sc;
  }
  if (name == "exp2") return experiment2_scenario(wheel_k);
  if (name == "exp5") return experiment5_scenario();
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace skewless
