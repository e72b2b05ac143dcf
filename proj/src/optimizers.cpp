#include "wqa/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "wqa/error.hpp"
#include "wqa/fusion.hpp"
#include "wqa/random.hpp"
#include "wqa/text.hpp"

namespace wqa::opt {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Pso: return "pso";
    case Method::NelderMead: return "nelder-mead";
    case Method::Lbfgs: return "lbfgs";
    case Method::Powell: return "powell";
  }
  return "pso";
}

std::optional<Method> parse_method(std::string_view s) {
  const std::string v = text::fold_case(s);
  if (v == "pso") return Method::Pso;
  if (v == "nelder-mead" || v == "nelder_mead" || v == "nm") return Method::NelderMead;
  if (v == "lbfgs" || v == "l-bfgs" || v == "bfgs") return Method::Lbfgs;
  if (v == "powell") return Method::Powell;
  return std::nullopt;
}

std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

namespace {

using Vec = std::vector<double>;

std::vector<Bounds> resolve_bounds(const OptimizerConfig& cfg, std::size_t n) {
  std::vector<Bounds> b;
  if (cfg.bounds.empty()) b.assign(n, Bounds{});
  else if (cfg.bounds.size() == 1) b.assign(n, cfg.bounds.front());
  else if (cfg.bounds.size() == n) b = cfg.bounds;
  else fail(ErrorKind::InvalidArgument, "bounds given for " + std::to_string(cfg.bounds.size()) + " of " +
                                           std::to_string(n) + " dimensions");
  for (const auto& x : b) {
    require(std::isfinite(x.lo) && std::isfinite(x.hi) && x.lo < x.hi, "each bound needs finite lo < hi");
  }
  return b;
}

void validate(const OptimizerConfig& cfg, std::size_t n) {
  require(n >= 1, "optimizer needs at least one dimension");
  require(!cfg.max_iterations || *cfg.max_iterations >= 1, "max_iterations must be >= 1");
  require(cfg.tolerance > 0.0, "tolerance must be positive");
}

void project(Vec& x, const std::vector<Bounds>& b) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], b[i].lo, b[i].hi);
}

// Shared bookkeeping: best-so-far point and the monotone trace.
class Tracker {
 public:
  Tracker(const Objective& f, std::string method) : f_(f), start_(f.evaluations()) { result_.method = std::move(method); }

  double eval(const Vec& x) {
    const double v = f_(x);
    offer(x, v);
    return v;
  }

  void offer(const Vec& x, double v) {
    if (result_.best_weights.empty() || v < result_.best_error) {
      result_.best_error = v;
      result_.best_weights = x;
    }
  }

  void mark_iteration() { result_.trace.push_back(result_.best_error); }

  OptimizationResult finish(std::size_t iterations, bool converged) {
    result_.iterations = iterations;
    result_.converged = converged;
    result_.evaluations = f_.evaluations() - start_;
    return std::move(result_);
  }

 private:
  const Objective& f_;
  std::size_t start_;
  OptimizationResult result_;
};

void evaluate_swarm(const Objective& f, const std::vector<Vec>& xs, Vec& out, std::size_t threads) {
  const std::size_t count = xs.size();
  if (threads <= 1 || count < 2) {
    for (std::size_t p = 0; p < count; ++p) out[p] = f(xs[p]);
    return;
  }
  threads = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t p = t; p < count; p += threads) out[p] = f(xs[p]);
    });
  }
  for (auto& th : pool) th.join();
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

}  // namespace

OptimizationResult optimize_pso(const Objective& f, std::size_t n, const OptimizerConfig& cfg) {
  validate(cfg, n);
  const auto& p = cfg.pso;
  require(p.swarm_size >= 1, "swarm size must be >= 1");
  const auto bounds = resolve_bounds(cfg, n);
  const std::size_t iterations = cfg.max_iterations.value_or(100);

  Rng rng(cfg.seed);
  std::vector<Vec> x(p.swarm_size, Vec(n));
  std::vector<Vec> v(p.swarm_size, Vec(n));
  for (std::size_t k = 0; k < p.swarm_size; ++k) {
    for (std::size_t d = 0; d < n; ++d) {
      const double span = bounds[d].hi - bounds[d].lo;
      x[k][d] = rng.uniform(bounds[d].lo, bounds[d].hi);
      v[k][d] = rng.uniform(-span, span) * 0.5;
    }
  }

  Tracker tr(f, "pso");
  Vec fx(p.swarm_size);
  evaluate_swarm(f, x, fx, p.threads);
  std::vector<Vec> pbest = x;
  Vec pbest_f = fx;
  std::size_t g = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  for (std::size_t k = 0; k < p.swarm_size; ++k) tr.offer(x[k], fx[k]);
  tr.mark_iteration();

  for (std::size_t it = 0; it < iterations; ++it) {
    const Vec gbest = pbest[g];
    for (std::size_t k = 0; k < p.swarm_size; ++k) {
      for (std::size_t d = 0; d < n; ++d) {
        const double span = bounds[d].hi - bounds[d].lo;
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double vel = p.inertia * v[k][d] + p.cognitive * r1 * (pbest[k][d] - x[k][d]) +
                     p.social * r2 * (gbest[d] - x[k][d]);
        vel = std::clamp(vel, -span, span);
        v[k][d] = vel;
        x[k][d] = std::clamp(x[k][d] + vel, bounds[d].lo, bounds[d].hi);
      }
    }
    evaluate_swarm(f, x, fx, p.threads);
    for (std::size_t k = 0; k < p.swarm_size; ++k) {
      if (fx[k] < pbest_f[k]) {
        pbest_f[k] = fx[k];
        pbest[k] = x[k];
      }
      if (pbest_f[k] < pbest_f[g]) g = k;
      tr.offer(x[k], fx[k]);
    }
    tr.mark_iteration();
  }
  return tr.finish(iterations, false);
}

OptimizationResult optimize_nelder_mead(const Objective& f, std::span<const double> x0_in, const OptimizerConfig& cfg) {
  const std::size_t n = x0_in.size();
  validate(cfg, n);
  const auto& c = cfg.nelder_mead;
  const auto bounds = resolve_bounds(cfg, n);
  const std::size_t max_iter = cfg.max_iterations.value_or(200 * n);

  Tracker tr(f, "nelder-mead");
  Vec x0(x0_in.begin(), x0_in.end());
  project(x0, bounds);
  std::vector<Vec> sim{x0};
  for (std::size_t k = 0; k < n; ++k) {
    Vec y = x0;
    y[k] = y[k] != 0.0 ? (1.0 + c.nonzero_delta) * y[k] : c.zero_delta;
    project(y, bounds);
    sim.push_back(std::move(y));
  }
  Vec fsim(n + 1);
  for (std::size_t k = 0; k <= n; ++k) fsim[k] = tr.eval(sim[k]);

  auto sort_simplex = [&] {
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fsim[a] < fsim[b]; });
    std::vector<Vec> s2;
    Vec f2;
    for (auto i : order) {
      s2.push_back(sim[i]);
      f2.push_back(fsim[i]);
    }
    sim = std::move(s2);
    fsim = std::move(f2);
  };
  auto combine = [&](const Vec& a, double wa, const Vec& b, double wb) {
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = wa * a[i] + wb * b[i];
    project(out, bounds);
    return out;
  };

  sort_simplex();
  tr.mark_iteration();
  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < max_iter) {
    double xspread = 0.0;
    double fspread = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) xspread = std::max(xspread, std::abs(sim[k][i] - sim[0][i]));
      fspread = std::max(fspread, std::abs(fsim[k] - fsim[0]));
    }
    if (xspread <= cfg.tolerance && fspread <= cfg.tolerance) {
      converged = true;
      break;
    }

    Vec xbar(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) xbar[i] += sim[k][i] / static_cast<double>(n);
    }
    const Vec& worst = sim[n];
    const double rho = c.reflection;
    Vec xr = combine(xbar, 1.0 + rho, worst, -rho);
    const double fxr = tr.eval(xr);
    bool shrink = false;
    if (fxr < fsim[0]) {
      Vec xe = combine(xbar, 1.0 + rho * c.expansion, worst, -rho * c.expansion);
      const double fxe = tr.eval(xe);
      if (fxe < fxr) {
        sim[n] = std::move(xe);
        fsim[n] = fxe;
      } else {
        sim[n] = std::move(xr);
        fsim[n] = fxr;
      }
    } else if (fxr < fsim[n - 1]) {
      sim[n] = std::move(xr);
      fsim[n] = fxr;
    } else if (fxr < fsim[n]) {
      Vec xc = combine(xbar, 1.0 + c.contraction * rho, worst, -c.contraction * rho);
      const double fxc = tr.eval(xc);
      if (fxc <= fxr) {
        sim[n] = std::move(xc);
        fsim[n] = fxc;
      } else {
        shrink = true;
      }
    } else {
      Vec xcc = combine(xbar, 1.0 - c.contraction, worst, c.contraction);
      const double fxcc = tr.eval(xcc);
      if (fxcc < fsim[n]) {
        sim[n] = std::move(xcc);
        fsim[n] = fxcc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t k = 1; k <= n; ++k) {
        sim[k] = combine(sim[0], 1.0 - c.shrink, sim[k], c.shrink);
        fsim[k] = tr.eval(sim[k]);
      }
    }
    sort_simplex();
    ++iterations;
    tr.mark_iteration();
  }
  return tr.finish(iterations, converged);
}

namespace {

// Central differences; at a bound the stencil is clipped and the quotient uses
// the actual spacing.
Vec fd_gradient(const Objective& f, Tracker& tr, const Vec& x, double h, const std::vector<Bounds>& b) {
  const std::size_t n = x.size();
  Vec g(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec hi = x;
    Vec lo = x;
    hi[i] = std::min(x[i] + h, b[i].hi);
    lo[i] = std::max(x[i] - h, b[i].lo);
    const double spacing = hi[i] - lo[i];
    if (spacing <= 0.0) {
      g[i] = 0.0;
      continue;
    }
    g[i] = (tr.eval(hi) - tr.eval(lo)) / spacing;
  }
  (void)f;
  return g;
}

}  // namespace

OptimizationResult optimize_lbfgs(const Objective& f, std::span<const double> x0_in, const OptimizerConfig& cfg) {
  const std::size_t n = x0_in.size();
  validate(cfg, n);
  const auto& p = cfg.lbfgs;
  require(p.memory >= 1, "L-BFGS memory must be >= 1");
  require(p.fd_step > 0.0, "finite-difference step must be positive");
  const auto bounds = resolve_bounds(cfg, n);
  const std::size_t max_iter = cfg.max_iterations.value_or(200);

  Tracker tr(f, "lbfgs");
  Vec x(x0_in.begin(), x0_in.end());
  project(x, bounds);
  double fx = tr.eval(x);
  if (!std::isfinite(fx)) fail(ErrorKind::Domain, "objective is not finite at the initial point");
  Vec g = fd_gradient(f, tr, x, p.fd_step, bounds);
  tr.mark_iteration();

  std::deque<Vec> s_hist;
  std::deque<Vec> y_hist;
  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < max_iter) {
    if (norm(g) < cfg.tolerance) {
      converged = true;
      break;
    }
    // Two-loop recursion for d = -H g.
    Vec q = g;
    const std::size_t m = s_hist.size();
    Vec alpha(m);
    Vec rho(m);
    for (std::size_t k = m; k-- > 0;) {
      rho[k] = 1.0 / dot(y_hist[k], s_hist[k]);
      alpha[k] = rho[k] * dot(s_hist[k], q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (m > 0) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (double& v : q) v *= gamma;
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho[k] * dot(y_hist[k], q);
      for (std::size_t i = 0; i < n; ++i) q[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    Vec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = -q[i];
    if (dot(g, d) >= 0.0) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      s_hist.clear();
      y_hist.clear();
    }

    double step = m == 0 ? std::min(1.0, 1.0 / norm(g)) : 1.0;
    bool accepted = false;
    Vec x_new;
    double f_new = fx;
    for (std::size_t bt = 0; bt <= p.max_backtracks; ++bt, step *= 0.5) {
      x_new = x;
      for (std::size_t i = 0; i < n; ++i) x_new[i] += step * d[i];
      project(x_new, bounds);
      Vec s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = x_new[i] - x[i];
      if (norm(s) == 0.0) break;
      f_new = tr.eval(x_new);
      if (!std::isfinite(f_new)) fail(ErrorKind::Domain, "objective returned a non-finite value during line search");
      if (f_new <= fx + p.armijo * std::min(dot(g, s), 0.0)) {
        accepted = true;
        break;
      }
    }
    ++iterations;
    if (!accepted) {
      tr.mark_iteration();
      break;
    }
    Vec g_new = fd_gradient(f, tr, x_new, p.fd_step, bounds);
    Vec s(n);
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    if (dot(s, y) > 1e-12 * norm(s) * norm(y) && dot(s, y) > 0.0) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (s_hist.size() > p.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
    tr.mark_iteration();
  }
  return tr.finish(iterations, converged);
}

namespace {

struct LineResult {
  double t;
  double f;
};

// Brent minimization (golden section with parabolic steps) over [a, b].
LineResult brent_bounded(const std::function<double(double)>& fn, double a, double b, double xatol,
                         std::size_t max_iter) {
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  const double golden_mean = 0.5 * (3.0 - std::sqrt(5.0));
  double fulc = a + golden_mean * (b - a);
  double nfc = fulc;
  double xf = fulc;
  double rat = 0.0;
  double e = 0.0;
  double fx = fn(xf);
  double ffulc = fx;
  double fnfc = fx;
  double xm = 0.5 * (a + b);
  double tol1 = sqrt_eps * std::abs(xf) + xatol / 3.0;
  double tol2 = 2.0 * tol1;
  std::size_t iter = 0;
  while (std::abs(xf - xm) > tol2 - 0.5 * (b - a) && iter++ < max_iter) {
    bool golden = true;
    if (std::abs(e) > tol1) {
      golden = false;
      double r = (xf - nfc) * (fx - ffulc);
      double q = (xf - fulc) * (fx - fnfc);
      double p = (xf - fulc) * q - (xf - nfc) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      r = e;
      e = rat;
      if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - xf) && p < q * (b - xf)) {
        rat = p / q;
        const double x = xf + rat;
        if (x - a < tol2 || b - x < tol2) {
          const double si = xm - xf >= 0.0 ? 1.0 : -1.0;
          rat = tol1 * si;
        }
      } else {
        golden = true;
      }
    }
    if (golden) {
      e = xf >= xm ? a - xf : b - xf;
      rat = golden_mean * e;
    }
    const double si = rat >= 0.0 ? 1.0 : -1.0;
    const double x = xf + si * std::max(std::abs(rat), tol1);
    const double fu = fn(x);
    if (fu <= fx) {
      if (x >= xf) a = xf;
      else b = xf;
      fulc = nfc;
      ffulc = fnfc;
      nfc = xf;
      fnfc = fx;
      xf = x;
      fx = fu;
    } else {
      if (x < xf) a = x;
      else b = x;
      if (fu <= fnfc || nfc == xf) {
        fulc = nfc;
        ffulc = fnfc;
        nfc = x;
        fnfc = fu;
      } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
        fulc = x;
        ffulc = fu;
      }
    }
    xm = 0.5 * (a + b);
    tol1 = sqrt_eps * std::abs(xf) + xatol / 3.0;
    tol2 = 2.0 * tol1;
  }
  return {xf, fx};
}

// Minimizes along x + t d over the segment where the point stays inside the
// box. Returns the better of the Brent result and the starting point.
LineResult line_minimize(Tracker& tr, const Vec& x, double fx, const Vec& d, const std::vector<Bounds>& b,
                         const PowellParams& p) {
  double tlo = -std::numeric_limits<double>::infinity();
  double thi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d[i] == 0.0) continue;
    double t1 = (b[i].lo - x[i]) / d[i];
    double t2 = (b[i].hi - x[i]) / d[i];
    if (t1 > t2) std::swap(t1, t2);
    tlo = std::max(tlo, t1);
    thi = std::min(thi, t2);
  }
  if (!(thi > tlo) || !std::isfinite(tlo) || !std::isfinite(thi)) return {0.0, fx};
  auto along = [&](double t) {
    Vec y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += t * d[i];
    project(y, b);
    return tr.eval(y);
  };
  auto r = brent_bounded(along, tlo, thi, p.line_tolerance, p.max_line_iterations);
  if (r.f < fx) return r;
  return {0.0, fx};
}

}  // namespace

OptimizationResult optimize_powell(const Objective& f, std::span<const double> x0_in, const OptimizerConfig& cfg) {
  const std::size_t n = x0_in.size();
  validate(cfg, n);
  const auto bounds = resolve_bounds(cfg, n);
  const std::size_t max_iter = cfg.max_iterations.value_or(100);

  Tracker tr(f, "powell");
  Vec x(x0_in.begin(), x0_in.end());
  project(x, bounds);
  double fx = tr.eval(x);
  tr.mark_iteration();

  std::vector<Vec> dirs(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;

  auto move = [&](const Vec& d) {
    auto r = line_minimize(tr, x, fx, d, bounds, cfg.powell);
    if (r.t != 0.0) {
      for (std::size_t i = 0; i < n; ++i) x[i] += r.t * d[i];
      project(x, bounds);
      fx = r.f;
    }
  };

  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < max_iter) {
    const Vec x_start = x;
    const double f_start = fx;
    double biggest = 0.0;
    std::size_t big_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fx;
      move(dirs[i]);
      if (before - fx > biggest) {
        biggest = before - fx;
        big_index = i;
      }
    }
    ++iterations;
    tr.mark_iteration();
    if (2.0 * (f_start - fx) <= cfg.tolerance * (std::abs(f_start) + std::abs(fx)) + 1e-20) {
      converged = true;
      break;
    }
    Vec new_dir(n);
    Vec extrapolated(n);
    for (std::size_t i = 0; i < n; ++i) {
      new_dir[i] = x[i] - x_start[i];
      extrapolated[i] = 2.0 * x[i] - x_start[i];
    }
    project(extrapolated, bounds);
    const double f_ext = tr.eval(extrapolated);
    if (f_ext < f_start) {
      const double a = f_start - fx - biggest;
      const double b = f_start - f_ext;
      const double t = 2.0 * (f_start - 2.0 * fx + f_ext) * a * a - biggest * b * b;
      if (t < 0.0) {
        move(new_dir);
        dirs[big_index] = dirs.back();
        dirs.back() = new_dir;
      }
    }
  }
  return tr.finish(iterations, converged);
}

OptimizationResult optimize(Method m, const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg) {
  switch (m) {
    case Method::Pso: return optimize_pso(f, x0.size(), cfg);
    case Method::NelderMead: return optimize_nelder_mead(f, x0, cfg);
    case Method::Lbfgs: return optimize_lbfgs(f, x0, cfg);
    case Method::Powell: return optimize_powell(f, x0, cfg);
  }
  fail(ErrorKind::InvalidArgument, "unknown optimizer");
}

OptimizationResult grid_search_oracle(const Objective& f, std::size_t n, double step) {
  require(n >= 1, "grid search needs at least one dimension");
  if (n > 4) fail(ErrorKind::InvalidArgument, "grid search supports at most 4 dimensions, got " + std::to_string(n));
  require(step > 0.0 && step <= 0.5, "grid step must lie in (0, 0.5]");
  const auto total = static_cast<std::size_t>(std::llround(1.0 / step));

  Tracker tr(f, "grid");
  std::vector<std::size_t> k(n, 0);
  Vec w(n);
  // Enumerate compositions of `total` into n parts, first coordinate largest first.
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t dim, std::size_t left) {
    if (dim + 1 == n) {
      k[dim] = left;
      for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(k[i]) / static_cast<double>(total);
      tr.eval(w);
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      k[dim] = v;
      walk(dim + 1, left - v);
    }
  };
  walk(0, total);
  tr.mark_iteration();
  return tr.finish(1, true);
}

Objective fusion_objective(std::shared_ptr<const ScoreMatrix> scores, std::vector<Label> labels, double threshold) {
  require(scores != nullptr, "null score matrix");
  require(labels.size() == scores->samples(), "labels do not align with score matrix");
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  return Objective([scores, labels = std::move(labels), threshold](std::span<const double> w) {
    bool positive = false;
    for (double v : w) {
      if (!(v >= 0.0) || !std::isfinite(v)) return 1.0;
      positive = positive || v > 0.0;
    }
    if (!positive) return 1.0;
    return fitness_error(w, *scores, labels, threshold);
  });
}

Objective surrogate_objective(std::shared_ptr<const ScoreMatrix> scores, std::vector<Label> labels, double threshold,
                              double temperature) {
  require(scores != nullptr, "null score matrix");
  require(labels.size() == scores->samples(), "labels do not align with score matrix");
  require(temperature > 0.0, "surrogate temperature must be positive");
  return Objective([scores, labels = std::move(labels), threshold, temperature](std::span<const double> w) {
    bool positive = false;
    for (double v : w) {
      if (!(v >= 0.0) || !std::isfinite(v)) return 1.0;
      positive = positive || v > 0.0;
    }
    if (!positive) return 1.0;
    const auto fused = fuse(*scores, w);
    double sum = 0.0;
    for (std::size_t j = 0; j < fused.size(); ++j) {
      const double wrong_side = labels[j] == Label::Relevant ? threshold - fused[j] : fused[j] - threshold;
      sum += 1.0 / (1.0 + std::exp(-temperature * wrong_side));
    }
    return sum / static_cast<double>(fused.size());
  });
}

std::vector<double> halton_simplex_point(std::size_t index, std::size_t n) {
  require(n >= 1, "simplex dimension must be positive");
  std::vector<double> x(n);
  std::size_t base = 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 1.0, u = 0.0;
    for (std::size_t k = index; k > 0; k /= base) {
      f /= static_cast<double>(base);
      u += f * static_cast<double>(k % base);
    }
    x[i] = -std::log1p(-u);
    sum += x[i];
    // next prime
    for (++base;; ++base) {
      bool prime = true;
      for (std::size_t d = 2; d * d <= base && prime; ++d) prime = base % d != 0;
      if (prime) break;
    }
  }
  if (!(sum > 0.0)) return uniform_weights(n);
  for (auto& v : x) v /= sum;
  return x;
}

OptimizationResult optimize_fusion(Method m, std::shared_ptr<const ScoreMatrix> scores, std::vector<Label> labels,
                                   double threshold, const OptimizerConfig& cfg, const FusionSearch& search) {
  require(scores != nullptr, "null score matrix");
  const std::size_t n = scores->models();
  for (double t : search.temperatures) require(t > 0.0 && std::isfinite(t), "temperatures must be positive");
  const Objective raw = fusion_objective(scores, labels, threshold);
  const Vec x0 = uniform_weights(n);
  require(search.pso_swarms >= 1, "at least one swarm is required");
  if (m == Method::Pso) {
    OptimizationResult best;
    std::size_t evaluations = 0, iterations = 0;
    std::vector<double> trace;
    for (std::size_t k = 0; k < search.pso_swarms; ++k) {
      OptimizerConfig c = cfg;
      c.seed = cfg.seed ^ (0x9E3779B97F4A7C15ULL * k);
      auto r = optimize_pso(raw, n, c);
      evaluations += r.evaluations;
      iterations += r.iterations;
      trace.insert(trace.end(), r.trace.begin(), r.trace.end());
      if (k == 0 || r.best_error < best.best_error) best = std::move(r);
    }
    best.evaluations = evaluations;
    best.iterations = iterations;
    best.trace = std::move(trace);
    return best;
  }

  OptimizationResult out;
  out.method = std::string(to_string(m));
  auto offer = [&](std::span<const double> x, double e) {
    if (out.best_weights.empty() || e < out.best_error) {
      out.best_error = e;
      out.best_weights.assign(x.begin(), x.end());
    }
  };
  const Objective recorded([&](std::span<const double> x) {
    const double e = raw(x);
    offer(x, e);
    return e;
  });
  for (std::size_t s = 0; s <= search.restarts; ++s) {
    Vec x = s == 0 ? x0 : halton_simplex_point(s, n);
    for (double t : search.temperatures) {
      const Objective smooth = surrogate_objective(scores, labels, threshold, t);
      const Objective stage([&](std::span<const double> p) {
        recorded(p);
        return smooth(p);
      });
      auto r = optimize(m, stage, x, cfg);
      x = std::move(r.best_weights);
      out.iterations += r.iterations;
      out.evaluations += r.evaluations;
      out.trace.push_back(out.best_error);
    }
    auto r = optimize(m, recorded, x, cfg);
    out.iterations += r.iterations;
    out.evaluations += r.evaluations;
    out.converged = r.converged;
    out.trace.push_back(out.best_error);
  }
  return out;
}

std::string to_json(const OptimizationResult& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["best_weights"] = r.best_weights;
  j["best_error"] = r.best_error;
  j["evaluations"] = r.evaluations;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["trace"] = r.trace;
  return j.dump();
}

}  // namespace wqa::opt
