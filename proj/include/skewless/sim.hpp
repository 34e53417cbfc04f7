#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "skewless/noise.hpp"

namespace skewless {

struct Event {
  enum class Kind { ReplaceTopology, DisableNode, EnableNode, InjectOffset, InjectBias };
  long step = 0;
  Kind kind = Kind::InjectOffset;
  TopologySpec topology;  // ReplaceTopology; node count must match
  int node = -1;          // DisableNode, EnableNode, InjectOffset
  int from = -1;          // InjectBias
  int to = -1;
  double seconds = 0.0;   // InjectOffset / InjectBias amount

  static Event replace_topology(long step, TopologySpec topo);
  static Event disable_node(long step, int node);
  static Event enable_node(long step, int node);
  static Event inject_offset(long step, int node, double seconds);
  static Event inject_bias(long step, int from, int to, double seconds);
};

struct Scenario {
  TopologySpec topo;
  ProtocolParams params;
  NoiseSpec noise;
  long steps = 1000;
  std::vector<Event> events;
  double warmup = 0.2;
  /// Initial state; when empty, x = y = 0 and s_i = 1 / r_i.
  std::optional<SystemState> initial;
  /// Node offsets are measured against; defaults to the leader, else node 0.
  std::optional<int> reference;
  bool spurious_filter = false;
  double spurious_threshold = 0.5;  // seconds between consecutive polls
  long record_stride = 1;           // stride for x, s and collective samples
  std::optional<std::pair<long, long>> fit_window;  // [begin, end) steps

  void validate() const;
  SystemState initial_state() const;
  int reference_node() const;
};

struct TraceMetrics {
  double sqrt_sn_us = 0.0;
  double ci99_us = 0.0;
  double ci100_us = 0.0;
  std::vector<double> mean_offsets_us;
  double drift_fit = 0.0;  // s / step^2, mean over non-reference nodes
};

struct SimTrace {
  int n = 0;
  int reference = 0;
  double tau = 1.0;
  long steps = 0;
  /// v_i(t_k) = x_i - x_reference in microseconds, row k holds all nodes.
  std::vector<double> offsets_us;
  /// Strided samples.
  std::vector<long> sample_steps;
  std::vector<double> x;           // seconds, n per sample
  std::vector<double> s;           // n per sample
  std::vector<double> collective;  // (x~, s~, y~) per sample; NaN when not connected
  TraceMetrics metrics;
  /// Set when the state overflowed; `steps` then counts only the finite steps.
  std::optional<long> diverged_at;

  double offset_us(long step, int node) const { return offsets_us[step * n + node]; }
};

/// Runs a scenario. Bit-reproducible for a given seed. Stops early when the
/// state stops being finite.
SimTrace run(const Scenario& sc);

/// Mean-centred pooled statistics over samples with step >= warmup * steps.
/// Throws std::invalid_argument with fewer than two samples.
TraceMetrics metrics(const SimTrace& trace, double warmup);

/// (D(t) - D(t - lag)) / (x(t) - x(t - lag)) over the strided samples, where
/// D = x_reference - x_node. Samples with a zero denominator are skipped.
std::vector<double> relative_frequency_error(const SimTrace& trace, int node, long lag);

/// Least-squares quadratic coefficient of the node's offset (seconds) against
/// the step index over [begin, end). Throws std::invalid_argument with fewer
/// than ten samples or a degenerate window.
double quadratic_drift_fit(const SimTrace& trace, int node, long begin, long end);

}  // namespace skewless
