#include "skewless/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace skewless {
namespace {

constexpr double kMargin = 1e-9;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 50;

struct Point {
  ProtocolParams params;
  TopologySpec topo;
};

struct Evaluation {
  bool feasible = false;
  double f = std::numeric_limits<double>::infinity();
  double rho = std::numeric_limits<double>::infinity();
};

Evaluation evaluate(const Point& pt, double rho_star) {
  Evaluation ev;
  if (!parameter_condition_violations(pt.params).empty()) return ev;
  const GraphQuantities gq = build_graph_quantities(pt.topo);
  if (!gq.connected) return ev;
  const SystemMatrices m = build_matrices(pt.topo, pt.params, gq);
  ev.rho = spectral_radius(m.Ahat);
  if (!(ev.rho <= rho_star) || !(ev.rho < 1.0)) return ev;
  ev.f = h2_norm(m).f;
  ev.feasible = std::isfinite(ev.f);
  return ev;
}

// Clamp into (i)-(ii) and positivity of tau / alpha.
void project(Point& pt) {
  ProtocolParams& pp = pt.params;
  pp.p = std::clamp(pp.p, kMargin, 2.0 - kMargin);
  if (pp.kappa1 <= kMargin) pp.kappa1 = kMargin;
  const double dk_max = 2.0 * pp.kappa1 / (3.0 * pp.p);
  const double dk = std::clamp(pp.delta_kappa(), kMargin * dk_max, (1.0 - kMargin) * dk_max);
  pp.kappa2 = pp.kappa1 - dk;
  if (pp.tau <= kMargin) pp.tau = kMargin;
  for (Edge& e : pt.topo.edges) e.weight = std::max(e.weight, kMargin);
}

struct Layout {
  bool tau = false;
  bool alpha = false;
  int edges = 0;
  int size() const { return 3 + (tau ? 1 : 0) + (alpha ? edges : 0); }
};

VectorXd pack(const Point& pt, const Layout& lay) {
  VectorXd v(lay.size());
  v(0) = pt.params.kappa1;
  v(1) = pt.params.kappa2;
  v(2) = pt.params.p;
  int i = 3;
  if (lay.tau) v(i++) = pt.params.tau;
  if (lay.alpha) {
    for (const Edge& e : pt.topo.edges) v(i++) = e.weight;
  }
  return v;
}

Point unpack(const VectorXd& v, const Point& base, const Layout& lay) {
  Point pt = base;
  pt.params.kappa1 = v(0);
  pt.params.kappa2 = v(1);
  pt.params.p = v(2);
  int i = 3;
  if (lay.tau) pt.params.tau = v(i++);
  if (lay.alpha) {
    for (Edge& e : pt.topo.edges) e.weight = v(i++);
  }
  return pt;
}

VectorXd gradient(const Point& pt, const Layout& lay) {
  const H2Gradient g = h2_gradient(pt.topo, pt.params, lay.alpha);
  VectorXd out(lay.size());
  out(0) = g.d_kappa1;
  out(1) = g.d_kappa2;
  out(2) = g.d_p;
  int i = 3;
  if (lay.tau) {
    const double h = 1e-6 * pt.params.tau;
    ProtocolParams plus = pt.params;
    ProtocolParams minus = pt.params;
    plus.tau += h;
    minus.tau -= h;
    out(i++) = (h2_value(pt.topo, plus) - h2_value(pt.topo, minus)) / (2.0 * h);
  }
  if (lay.alpha) {
    for (double d : g.d_alpha) out(i++) = d;
  }
  return out;
}

}  // namespace

OptimizeResult optimize_params(const TopologySpec& topo, const ProtocolParams& init,
                               const OptimizeOptions& options) {
  init.validate();
  const auto violations = parameter_condition_violations(init);
  if (!violations.empty()) {
    std::string msg = "optimize: initial parameters violate";
    for (const auto& v : violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }

  // Pre-phase: rescale (kappa1, kappa2) until rho(Ahat) <= rho_star. Both
  // too large and too small gains push rho towards one, so scan a range.
  Point current{init, topo};
  Evaluation ev = evaluate(current, options.rho_star);
  double scale_used = 1.0;
  if (!ev.feasible) {
    double best_rho = std::numeric_limits<double>::infinity();
    for (int e = -12; e <= 4; ++e) {
      const double s = std::ldexp(1.0, e);
      Point trial = current;
      trial.params.kappa1 = init.kappa1 * s;
      trial.params.kappa2 = init.kappa2 * s;
      const Evaluation te = evaluate(trial, options.rho_star);
      if (te.feasible && te.rho < best_rho) {
        best_rho = te.rho;
        scale_used = s;
      }
    }
    if (!std::isfinite(best_rho)) {
      throw std::runtime_error("optimize: no stable starting point found");
    }
    current.params.kappa1 = init.kappa1 * scale_used;
    current.params.kappa2 = init.kappa2 * scale_used;
    ev = evaluate(current, options.rho_star);
  }

  const Layout lay{options.free_tau, options.free_alpha, topo.edge_count()};
  OptimizeResult result;
  result.kappa_scale = scale_used;
  result.log.push_back({0, ev.f, ev.rho, current.params});

  // Projected BFGS in coordinates u = theta / scale, with the scale frozen at
  // the start. Coordinates pinned at a bound with the gradient pushing outward
  // are held fixed; the curvature estimate restarts whenever that set changes.
  const int dim = lay.size();
  const VectorXd scale = pack(current, lay).cwiseAbs().cwiseMax(1e-3);
  auto to_point = [&](const VectorXd& u) {
    Point pt = unpack(u.cwiseProduct(scale), current, lay);
    project(pt);
    return pt;
  };
  VectorXd u = pack(current, lay).cwiseQuotient(scale);
  VectorXd g = gradient(current, lay).cwiseProduct(scale);
  MatrixXd h_inv;
  std::vector<bool> pinned;
  bool fresh = true;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    // A coordinate is pinned when a small descent probe cannot move it.
    const VectorXd probe = pack(to_point(u - 1e-6 * g), lay).cwiseQuotient(scale);
    std::vector<bool> now_pinned(dim);
    VectorXd g_free = g;
    for (int j = 0; j < dim; ++j) {
      now_pinned[j] = std::abs(probe(j) - u(j)) < 1e-3 * 1e-6 * std::abs(g(j));
      if (now_pinned[j]) g_free(j) = 0.0;
    }
    // Projected-gradient stationarity.
    if (g_free.lpNorm<Eigen::Infinity>() <= options.rel_tolerance * ev.f) break;
    if (now_pinned != pinned) {
      pinned = now_pinned;
      fresh = true;
    }
    if (fresh) {
      h_inv = MatrixXd::Identity(dim, dim) * (0.05 / g_free.norm());
      fresh = false;
    }
    VectorXd direction = -(h_inv * g_free);
    for (int j = 0; j < dim; ++j) {
      if (pinned[j]) direction(j) = 0.0;
    }
    if (!(direction.dot(g_free) < 0.0)) {
      h_inv = MatrixXd::Identity(dim, dim) * (0.05 / g_free.norm());
      direction = -(h_inv * g_free);
    }

    bool accepted = false;
    double t = 1.0;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      const Point trial = to_point(u + t * direction);
      const VectorXd u_trial = pack(trial, lay).cwiseQuotient(scale);
      const double predicted = g.dot(u_trial - u);  // negative for a descent step
      const Evaluation te = evaluate(trial, options.rho_star);
      if (te.feasible && te.f <= ev.f + kArmijo * std::min(predicted, 0.0) && te.f < ev.f) {
        const VectorXd g_new = gradient(trial, lay).cwiseProduct(scale);
        VectorXd sk = u_trial - u;
        VectorXd yk = g_new - g;
        for (int j = 0; j < dim; ++j) {
          if (pinned[j]) sk(j) = yk(j) = 0.0;
        }
        const double sy = sk.dot(yk);
        if (sy > 1e-16 * sk.norm() * yk.norm()) {
          if (h_inv.isApprox(MatrixXd::Identity(dim, dim) * h_inv(0, 0))) {
            h_inv = MatrixXd::Identity(dim, dim) * (sy / yk.squaredNorm());
          }
          const double rho_k = 1.0 / sy;
          const MatrixXd v = MatrixXd::Identity(dim, dim) - rho_k * yk * sk.transpose();
          h_inv = v.transpose() * h_inv * v + rho_k * sk * sk.transpose();
        }
        current = trial;
        ev = te;
        u = u_trial;
        g = g_new;
        result.log.push_back({iter, ev.f, ev.rho, current.params});
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (h_inv.isApprox(MatrixXd::Identity(dim, dim) * h_inv(0, 0))) break;
      fresh = true;  // retry once along the plain gradient
    }
  }

  result.params = current.params;
  result.topology = current.topo;
  result.f = ev.f;
  result.rho = ev.rho;
  return result;
}

}  // namespace skewless
