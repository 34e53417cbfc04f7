#include "skewless/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace skewless {

Event Event::replace_topology(long step, TopologySpec topo) {
  Event e;
  e.step = step;
  e.kind = Kind::ReplaceTopology;
  e.topology = std::move(topo);
  return e;
}

Event Event::disable_node(long step, int node) {
  Event e;
  e.step = step;
  e.kind = Kind::DisableNode;
  e.node = node;
  return e;
}

Event Event::enable_node(long step, int node) {
  Event e;
  e.step = step;
  e.kind = Kind::EnableNode;
  e.node = node;
  return e;
}

Event Event::inject_offset(long step, int node, double seconds) {
  Event e;
  e.step = step;
  e.kind = Kind::InjectOffset;
  e.node = node;
  e.seconds = seconds;
  return e;
}

Event Event::inject_bias(long step, int from, int to, double seconds) {
  Event e;
  e.step = step;
  e.kind = Kind::InjectBias;
  e.from = from;
  e.to = to;
  e.seconds = seconds;
  return e;
}

void Scenario::validate() const {
  topo.validate();
  params.validate();
  noise.validate();
  if (steps < 1) throw std::invalid_argument("scenario: steps must be >= 1");
  if (!(warmup >= 0.0 && warmup < 1.0)) throw std::invalid_argument("scenario: warmup must be in [0, 1)");
  if (record_stride < 1) throw std::invalid_argument("scenario: record stride must be >= 1");
  if (reference && (*reference < 0 || *reference >= topo.n)) {
    throw std::invalid_argument("scenario: reference node out of range");
  }
  if (initial && initial->size() != topo.n) {
    throw std::invalid_argument("scenario: initial state size != node count");
  }
  for (const Event& e : events) {
    if (e.step < 0 || e.step >= steps) {
      throw std::invalid_argument("scenario: event step " + std::to_string(e.step) +
                                  " outside [0, steps)");
    }
    switch (e.kind) {
      case Event::Kind::ReplaceTopology:
        e.topology.validate();
        if (e.topology.n != topo.n) {
          throw std::invalid_argument("scenario: replacement topology changes the node count");
        }
        break;
      case Event::Kind::DisableNode:
      case Event::Kind::EnableNode:
      case Event::Kind::InjectOffset:
        if (e.node < 0 || e.node >= topo.n) throw std::invalid_argument("scenario: event node out of range");
        break;
      case Event::Kind::InjectBias:
        if (e.from < 0 || e.from >= topo.n || e.to < 0 || e.to >= topo.n) {
          throw std::invalid_argument("scenario: bias edge out of range");
        }
        break;
    }
  }
}

SystemState Scenario::initial_state() const {
  if (initial) return *initial;
  SystemState z = SystemState::zeros(topo.n);
  z.s = topo.skews().cwiseInverse();
  return z;
}

int Scenario::reference_node() const {
  if (reference) return *reference;
  return find_leader(topo).value_or(0);
}

namespace {

struct ActiveGraph {
  TopologySpec topo;
  std::vector<int> source_edge;  // index into the configured topology
};

}  // namespace

SimTrace run(const Scenario& sc) {
  sc.validate();
  const int n = sc.topo.n;
  SimTrace trace;
  trace.n = n;
  trace.reference = sc.reference_node();
  trace.tau = sc.params.tau;
  trace.steps = sc.steps;
  trace.offsets_us.resize(static_cast<std::size_t>(sc.steps) * n);

  std::vector<Event> events = sc.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.step < b.step; });
  auto next_event = events.begin();

  TopologySpec configured = sc.topo;
  GraphQuantities gq = build_graph_quantities(configured);
  std::vector<bool> enabled(n, true);
  std::map<std::pair<int, int>, double> bias;
  std::map<std::pair<int, int>, double> last_accepted;

  std::mt19937_64 rng(sc.noise.seed);
  std::normal_distribution<double> wander(0.0, 1.0);
  const VectorXd wander_gain = configured.wander_gains();

  SystemState z = sc.initial_state();
  std::vector<bool> mask;
  std::vector<bool> previous_mask;
  ActiveGraph active;
  bool topology_changed = true;
  std::vector<double> measured;

  for (long k = 0; k < sc.steps; ++k) {
    for (; next_event != events.end() && next_event->step == k; ++next_event) {
      const Event& e = *next_event;
      switch (e.kind) {
        case Event::Kind::ReplaceTopology:
          configured.edges = e.topology.edges;
          if (e.topology.skew.size()) configured.skew = e.topology.skew;
          gq = build_graph_quantities(configured);
          topology_changed = true;
          break;
        case Event::Kind::DisableNode:
          enabled[e.node] = false;
          break;
        case Event::Kind::EnableNode:
          enabled[e.node] = true;
          break;
        case Event::Kind::InjectOffset:
          z.x(e.node) += e.seconds;
          break;
        case Event::Kind::InjectBias:
          bias[{e.from, e.to}] = e.seconds;
          break;
      }
    }

    for (int i = 0; i < n; ++i) {
      trace.offsets_us[k * n + i] = (z.x(i) - z.x(trace.reference)) * 1e6;
    }
    if (k % sc.record_stride == 0) {
      trace.sample_steps.push_back(k);
      trace.x.insert(trace.x.end(), z.x.data(), z.x.data() + n);
      trace.s.insert(trace.s.end(), z.s.data(), z.s.data() + n);
      if (gq.connected) {
        const Decomposition d = decompose(z, configured, gq);
        trace.collective.insert(trace.collective.end(), d.collective.data(), d.collective.data() + 3);
      } else {
        trace.collective.insert(trace.collective.end(), 3, std::numeric_limits<double>::quiet_NaN());
      }
    }

    // Measure every configured edge whose endpoints are both running.
    const int m = configured.edge_count();
    mask.assign(m, false);
    measured.assign(m, 0.0);
    for (int e = 0; e < m; ++e) {
      const Edge& edge = configured.edges[e];
      const double noise = sc.noise.jitter_for(edge.from, edge.to).sample(rng);
      if (!enabled[edge.from] || !enabled[edge.to]) continue;
      const auto b = bias.find({edge.from, edge.to});
      const double w = noise + (b == bias.end() ? 0.0 : b->second);
      const double value = z.x(edge.to) - z.x(edge.from) + edge.noise_gain * w;
      if (sc.spurious_filter) {
        const auto last = last_accepted.find({edge.from, edge.to});
        if (last != last_accepted.end() && std::abs(value - last->second) > sc.spurious_threshold) {
          continue;
        }
        last_accepted[{edge.from, edge.to}] = value;
      }
      mask[e] = true;
      measured[e] = value;
    }

    if (topology_changed || mask != previous_mask) {
      active.topo = configured;
      active.topo.edges.clear();
      active.source_edge.clear();
      for (int e = 0; e < m; ++e) {
        if (!mask[e]) continue;
        active.topo.edges.push_back(configured.edges[e]);
        active.source_edge.push_back(e);
      }
      previous_mask = mask;
      topology_changed = false;
    }
    std::vector<double> offsets;
    offsets.reserve(active.source_edge.size());
    for (int e : active.source_edge) offsets.push_back(measured[e]);

    SystemState next = step_algorithm1(z, active.topo, sc.params, offsets);
    for (int i = 0; i < n; ++i) {
      if (!enabled[i]) {
        // Disabled nodes free-run on their last skew correction.
        next.s(i) = z.s(i);
        next.y(i) = z.y(i);
      }
    }
    if (sc.noise.wander_sigma > 0.0) {
      for (int i = 0; i < n; ++i) next.s(i) += wander_gain(i) * sc.noise.wander_sigma * wander(rng);
    }
    z = std::move(next);
    if (!z.x.allFinite() || !z.s.allFinite() || !z.y.allFinite()) {
      // Overflowed: keep what was recorded and stop.
      trace.diverged_at = k + 1;
      trace.steps = k + 1;
      trace.offsets_us.resize(static_cast<std::size_t>(trace.steps) * n);
      break;
    }
  }

  const long last = trace.steps;
  const long warm = static_cast<long>(std::floor(sc.warmup * static_cast<double>(last)));
  if (last - warm >= 2) {
    trace.metrics = metrics(trace, sc.warmup);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    trace.metrics.sqrt_sn_us = trace.metrics.ci99_us = trace.metrics.ci100_us = nan;
  }
  long begin = warm;
  long end = last;
  if (sc.fit_window) {
    begin = sc.fit_window->first;
    end = std::min(sc.fit_window->second, last);
  }
  if (end - begin >= 10 && n > 1) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i != trace.reference) sum += quadratic_drift_fit(trace, i, begin, end);
    }
    trace.metrics.drift_fit = sum / (n - 1);
  } else {
    trace.metrics.drift_fit = std::numeric_limits<double>::quiet_NaN();
  }
  return trace;
}

TraceMetrics metrics(const SimTrace& trace, double warmup) {
  const long begin = static_cast<long>(std::floor(warmup * static_cast<double>(trace.steps)));
  const long count = trace.steps - begin;
  if (count < 2) throw std::invalid_argument("metrics: need at least two post-warmup samples");
  const int n = trace.n;
  TraceMetrics out;
  out.mean_offsets_us.assign(n, 0.0);
  for (long k = begin; k < trace.steps; ++k) {
    for (int i = 0; i < n; ++i) out.mean_offsets_us[i] += trace.offset_us(k, i);
  }
  for (double& m : out.mean_offsets_us) m /= static_cast<double>(count);
  if (n < 2) return out;

  std::vector<double> deviations;
  deviations.reserve(static_cast<std::size_t>(count) * (n - 1));
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == trace.reference) continue;
    for (long k = begin; k < trace.steps; ++k) {
      const double d = trace.offset_us(k, i) - out.mean_offsets_us[i];
      sum_sq += d * d;
      deviations.push_back(std::abs(d));
    }
  }
  out.sqrt_sn_us = std::sqrt(sum_sq / static_cast<double>(count) / (n - 1));
  std::sort(deviations.begin(), deviations.end());
  // Linear interpolation between closest ranks.
  const double pos = 0.99 * static_cast<double>(deviations.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, deviations.size() - 1);
  out.ci99_us = deviations[lo] + (pos - static_cast<double>(lo)) * (deviations[hi] - deviations[lo]);
  out.ci100_us = deviations.back();
  return out;
}

std::vector<double> relative_frequency_error(const SimTrace& trace, int node, long lag) {
  if (lag < 1) throw std::invalid_argument("relative_frequency_error: lag must be >= 1");
  if (node < 0 || node >= trace.n) throw std::invalid_argument("relative_frequency_error: bad node");
  const int n = trace.n;
  const int ref = trace.reference;
  std::vector<double> out;
  for (std::size_t j = static_cast<std::size_t>(lag); j < trace.sample_steps.size(); ++j) {
    const std::size_t i = j - static_cast<std::size_t>(lag);
    const double d_now = trace.x[j * n + ref] - trace.x[j * n + node];
    const double d_then = trace.x[i * n + ref] - trace.x[i * n + node];
    const double dx = trace.x[j * n + node] - trace.x[i * n + node];
    if (dx == 0.0) continue;
    out.push_back((d_now - d_then) / dx);
  }
  return out;
}

double quadratic_drift_fit(const SimTrace& trace, int node, long begin, long end) {
  begin = std::max(begin, 0L);
  end = std::min(end, trace.steps);
  if (end - begin < 10) throw std::invalid_argument("quadratic_drift_fit: need at least ten samples");
  if (node < 0 || node >= trace.n) throw std::invalid_argument("quadratic_drift_fit: bad node");
  const long count = end - begin;
  const double centre = 0.5 * static_cast<double>(begin + end - 1);
  const double half = std::max(0.5 * static_cast<double>(count - 1), 1.0);
  Eigen::MatrixXd design(count, 3);
  Eigen::VectorXd rhs(count);
  for (long k = begin; k < end; ++k) {
    const double u = (static_cast<double>(k) - centre) / half;
    design(k - begin, 0) = 1.0;
    design(k - begin, 1) = u;
    design(k - begin, 2) = u * u;
    rhs(k - begin) = trace.offset_us(k, node) * 1e-6;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw std::invalid_argument("quadratic_drift_fit: degenerate window");
  const Eigen::Vector3d coef = qr.solve(rhs);
  return coef(2) / (half * half);
}

}  // namespace skewless
