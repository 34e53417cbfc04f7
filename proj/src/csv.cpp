#include "skewless/csv.hpp"

#include <cmath>
#include <cstdio>

namespace skewless {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "step,node,offset_us,skew,xtilde,stilde,ytilde\n";
  const int n = trace.n;
  for (std::size_t j = 0; j < trace.sample_steps.size(); ++j) {
    const long k = trace.sample_steps[j];
    const double* c = &trace.collective[3 * j];
    for (int i = 0; i < n; ++i) {
      out << k << ',' << i + 1 << ',' << format_number(trace.offset_us(k, i)) << ','
          << format_number(trace.s[j * n + i]) << ',' << format_number(c[0]) << ','
          << format_number(c[1]) << ',' << format_number(c[2]) << '\n';
    }
  }
}

void write_metrics_csv(std::ostream& out, const TraceMetrics& m) {
  out << "sqrtSn_us,CI99_us,CI100_us,drift_fit\n";
  out << format_number(m.sqrt_sn_us) << ',' << format_number(m.ci99_us) << ','
      << format_number(m.ci100_us) << ',' << format_number(m.drift_fit) << '\n';
}

void write_opt_log_csv(std::ostream& out, const OptimizeResult& r) {
  out << "iter,f,rho,kappa1,kappa2,p\n";
  for (const OptimizeIterate& it : r.log) {
    out << it.iter << ',' << format_number(it.f) << ',' << format_number(it.rho) << ','
        << format_number(it.params.kappa1) << ',' << format_number(it.params.kappa2) << ','
        << format_number(it.params.p) << '\n';
  }
}

void write_opt_params_csv(std::ostream& out, const OptimizeResult& r) {
  out << "kappa1,kappa2,p,tau,f,rho\n";
  out << format_number(r.params.kappa1) << ',' << format_number(r.params.kappa2) << ','
      << format_number(r.params.p) << ',' << format_number(r.params.tau) << ','
      << format_number(r.f) << ',' << format_number(r.rho) << '\n';
}

}  // namespace skewless
