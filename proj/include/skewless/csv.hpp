#pragma once

#include <ostream>
#include <string>

#include "skewless/optimize.hpp"
#include "skewless/sim.hpp"

namespace skewless {

/// "%.12g"; NaN prints as "nan".
std::string format_number(double v);

/// step,node,offset_us,skew,xtilde,stilde,ytilde for every recorded sample.
/// Nodes are one-based; skew is the node's correction s_i.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

/// sqrtSn_us,CI99_us,CI100_us,drift_fit
void write_metrics_csv(std::ostream& out, const TraceMetrics& m);

/// iter,f,rho,kappa1,kappa2,p
void write_opt_log_csv(std::ostream& out, const OptimizeResult& r);

/// kappa1,kappa2,p,tau,f,rho for the final iterate.
void write_opt_params_csv(std::ostream& out, const OptimizeResult& r);

}  // namespace skewless
