#include "skewless/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace skewless {
namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const int line = node.IsDefined() && node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw ConfigError(source_, line, msg);
  }

  template <typename T>
  T as(const YAML::Node& node, const std::string& what) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "invalid value for '" + what + "'");
    }
  }

  template <typename T>
  T get(const YAML::Node& parent, const std::string& key, T fallback) const {
    const YAML::Node node = parent[key];
    if (!node) return fallback;
    return as<T>(node, key);
  }

  template <typename T>
  T require(const YAML::Node& parent, const std::string& key) const {
    const YAML::Node node = parent[key];
    if (!node) fail(parent, "missing key '" + key + "'");
    return as<T>(node, key);
  }

  VectorXd vector(const YAML::Node& node, const std::string& what, int expected) const {
    if (!node.IsSequence()) fail(node, "'" + what + "' must be a list");
    if (static_cast<int>(node.size()) != expected) {
      fail(node, "'" + what + "' must have " + std::to_string(expected) + " entries");
    }
    VectorXd v(expected);
    for (int i = 0; i < expected; ++i) v(i) = as<double>(node[i], what);
    return v;
  }

  int node_label(const YAML::Node& node, int n, const std::string& what) const {
    const int label = as<int>(node, what);
    if (label < 1 || label > n) {
      fail(node, "'" + what + "' must be a node label in 1.." + std::to_string(n));
    }
    return label - 1;
  }

  std::vector<Edge> edges(const YAML::Node& list, int n, const std::string& what) const {
    std::vector<Edge> out;
    if (!list) return out;
    if (!list.IsSequence()) fail(list, "'" + what + "' must be a list");
    for (const YAML::Node& item : list) {
      Edge e;
      if (item.IsSequence()) {
        if (item.size() < 2 || item.size() > 4) fail(item, "edge must be [from, to, weight, gain]");
        e.from = node_label(item[0], n, "from");
        e.to = node_label(item[1], n, "to");
        if (item.size() > 2) e.weight = as<double>(item[2], "weight");
        if (item.size() > 3) e.noise_gain = as<double>(item[3], "noise_gain");
      } else if (item.IsMap()) {
        e.from = node_label(item["from"], n, "from");
        e.to = node_label(item["to"], n, "to");
        e.weight = get<double>(item, "weight", 1.0);
        e.noise_gain = get<double>(item, "noise_gain", 1.0);
      } else {
        fail(item, "edge must be a list or a map");
      }
      out.push_back(e);
    }
    return out;
  }

  TopologySpec topology(const YAML::Node& node, int n_fixed = 0) const {
    if (!node || !node.IsMap()) fail(node, "missing 'topology' section");
    TopologySpec t;
    t.n = n_fixed ? n_fixed : require<int>(node, "nodes");
    if (t.n < 1) fail(node["nodes"], "'nodes' must be >= 1");
    t.edges = edges(node["edges"], t.n, "edges");
    if (const YAML::Node c = node["commit"]) {
      std::vector<int> degree(t.n, 0);
      for (const Edge& e : t.edges) ++degree[e.from];
      const double commit = as<double>(c, "commit");
      for (Edge& e : t.edges) e.weight = commit / degree[e.from];
    }
    if (const YAML::Node s = node["skews"]) t.skew = vector(s, "skews", t.n);
    if (const YAML::Node g = node["wander_gains"]) t.wander_gain = vector(g, "wander_gains", t.n);
    try {
      t.validate();
    } catch (const std::invalid_argument& ex) {
      fail(node, ex.what());
    }
    return t;
  }

  JitterModel jitter(const YAML::Node& node) const {
    const std::string model = get<std::string>(node, "model", "none");
    JitterModel j;
    if (model == "none") {
      j = JitterModel::none();
    } else if (model == "uniform-grid") {
      j = JitterModel::uniform_grid(require<double>(node, "max"), get<double>(node, "grid", 1e-3));
    } else if (model == "gaussian") {
      j = JitterModel::gaussian(require<double>(node, "sigma"));
    } else if (model == "constant") {
      j = JitterModel::constant(require<double>(node, "bias"));
    } else {
      fail(node["model"], "unknown jitter model '" + model + "'");
    }
    try {
      j.validate();
    } catch (const std::invalid_argument& ex) {
      fail(node, ex.what());
    }
    return j;
  }

 private:
  std::string source_;
};

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line) {}

Config parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ConfigError(source, ex.mark.line + 1, ex.msg);
  }
  if (!root.IsMap()) throw ConfigError(source, 1, "config must be a mapping");
  const Reader rd(source);
  if (!root["topology"]) throw ConfigError(source, root.Mark().line + 1, "missing 'topology' section");

  Config cfg;
  Scenario& sc = cfg.scenario;
  sc.topo = rd.topology(root["topology"]);
  const int n = sc.topo.n;

  if (const YAML::Node p = root["params"]) {
    sc.params.kappa1 = rd.get<double>(p, "kappa1", sc.params.kappa1);
    sc.params.kappa2 = rd.get<double>(p, "kappa2", sc.params.kappa2);
    sc.params.p = rd.get<double>(p, "p", sc.params.p);
    sc.params.tau = rd.get<double>(p, "tau", sc.params.tau);
    try {
      sc.params.validate();
    } catch (const std::invalid_argument& ex) {
      rd.fail(p, ex.what());
    }
  }

  if (const YAML::Node init = root["initial"]) {
    SystemState z = sc.initial_state();
    if (init["x"]) z.x = rd.vector(init["x"], "x", n);
    if (init["s"]) z.s = rd.vector(init["s"], "s", n);
    if (init["y"]) z.y = rd.vector(init["y"], "y", n);
    sc.initial = z;
  }

  if (const YAML::Node nz = root["noise"]) {
    if (nz["jitter"]) sc.noise.jitter = rd.jitter(nz["jitter"]);
    if (const YAML::Node list = nz["edges"]) {
      if (!list.IsSequence()) rd.fail(list, "'noise.edges' must be a list");
      for (const YAML::Node& item : list) {
        const int from = rd.node_label(item["from"], n, "from");
        const int to = rd.node_label(item["to"], n, "to");
        sc.noise.edge_jitter[{from, to}] = rd.jitter(item);
      }
    }
    sc.noise.wander_sigma = rd.get<double>(nz, "wander_sigma", 0.0);
    if (sc.noise.wander_sigma < 0.0) rd.fail(nz["wander_sigma"], "'wander_sigma' must be >= 0");
    sc.noise.seed = rd.get<std::uint64_t>(nz, "seed", sc.noise.seed);
  }

  if (const YAML::Node s = root["scenario"]) {
    sc.steps = rd.get<long>(s, "steps", sc.steps);
    if (sc.steps < 1) rd.fail(s["steps"], "'steps' must be >= 1");
    sc.warmup = rd.get<double>(s, "warmup", sc.warmup);
    if (!(sc.warmup >= 0.0 && sc.warmup < 1.0)) rd.fail(s["warmup"], "'warmup' must be in [0, 1)");
    if (s["reference"]) sc.reference = rd.node_label(s["reference"], n, "reference");
    sc.spurious_filter = rd.get<bool>(s, "spurious_filter", false);
    sc.spurious_threshold = rd.get<double>(s, "spurious_threshold", sc.spurious_threshold);
    sc.record_stride = rd.get<long>(s, "record_stride", 1);
    if (sc.record_stride < 1) rd.fail(s["record_stride"], "'record_stride' must be >= 1");
    if (const YAML::Node w = s["fit_window"]) {
      if (!w.IsSequence() || w.size() != 2) rd.fail(w, "'fit_window' must be [begin, end]");
      sc.fit_window = std::make_pair(rd.as<long>(w[0], "fit_window"), rd.as<long>(w[1], "fit_window"));
    }
    if (const YAML::Node events = s["events"]) {
      if (!events.IsSequence()) rd.fail(events, "'events' must be a list");
      for (const YAML::Node& ev : events) {
        const long step = rd.require<long>(ev, "step");
        if (step < 0 || step >= sc.steps) rd.fail(ev["step"], "event step outside [0, steps)");
        const std::string type = rd.require<std::string>(ev, "type");
        if (type == "replace-topology") {
          YAML::Node body = ev["topology"] ? ev["topology"] : ev;
          TopologySpec t = rd.topology(body, n);
          if (t.skew.size() == 0) t.skew = sc.topo.skew;
          if (t.wander_gain.size() == 0) t.wander_gain = sc.topo.wander_gain;
          sc.events.push_back(Event::replace_topology(step, std::move(t)));
        } else if (type == "disable-node") {
          sc.events.push_back(Event::disable_node(step, rd.node_label(ev["node"], n, "node")));
        } else if (type == "enable-node") {
          sc.events.push_back(Event::enable_node(step, rd.node_label(ev["node"], n, "node")));
        } else if (type == "inject-offset") {
          sc.events.push_back(Event::inject_offset(step, rd.node_label(ev["node"], n, "node"),
                                                   rd.require<double>(ev, "seconds")));
        } else if (type == "inject-bias") {
          sc.events.push_back(Event::inject_bias(step, rd.node_label(ev["from"], n, "from"),
                                                 rd.node_label(ev["to"], n, "to"),
                                                 rd.require<double>(ev, "seconds")));
        } else {
          rd.fail(ev["type"], "unknown event type '" + type + "'");
        }
      }
    }
  }

  if (const YAML::Node o = root["optimize"]) {
    cfg.optimize.rho_star = rd.get<double>(o, "rho_star", cfg.optimize.rho_star);
    if (!(cfg.optimize.rho_star > 0.0 && cfg.optimize.rho_star < 1.0)) {
      rd.fail(o["rho_star"], "'rho_star' must be in (0, 1)");
    }
    cfg.optimize.max_iter = rd.get<int>(o, "max_iter", cfg.optimize.max_iter);
    if (const YAML::Node free = o["free"]) {
      if (!free.IsSequence()) rd.fail(free, "'free' must be a list");
      for (const YAML::Node& item : free) {
        const std::string name = rd.as<std::string>(item, "free");
        if (name == "tau") {
          cfg.optimize.free_tau = true;
        } else if (name == "alpha") {
          cfg.optimize.free_alpha = true;
        } else if (name != "kappa1" && name != "kappa2" && name != "p") {
          rd.fail(item, "unknown free parameter '" + name + "'");
        }
      }
    }
  }

  try {
    sc.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(source, 0, ex.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

VectorXd constant_biases(const Scenario& sc) {
  VectorXd w(sc.topo.edge_count());
  for (int k = 0; k < sc.topo.edge_count(); ++k) {
    const Edge& e = sc.topo.edges[k];
    w(k) = sc.noise.jitter_for(e.from, e.to).mean();
  }
  return w;
}

}  // namespace skewless
