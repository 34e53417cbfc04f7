#pragma once

#include <stdexcept>
#include <string>

#include "skewless/optimize.hpp"
#include "skewless/sim.hpp"

namespace skewless {

/// Parse or validation failure, anchored to a line of the source when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Everything a config file can describe. Node labels in the file are
/// one-based; all in-memory indices are zero-based.
struct Config {
  Scenario scenario;  // topology, params, noise, initial state, events
  OptimizeOptions optimize;
};

Config parse_config(const std::string& text, const std::string& source = "<config>");
Config load_config(const std::string& path);

/// Constant per-edge biases implied by the noise section, in topology edge order.
VectorXd constant_biases(const Scenario& sc);

}  // namespace skewless
