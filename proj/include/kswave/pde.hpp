#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "exact.hpp"
#include "model.hpp"

namespace kswave {

/// Uniform cell-centered grid on [x_min, x_max].
struct Grid1D {
  double x_min = -30.0;
  double x_max = 30.0;
  std::size_t n = 3000;

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double x(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
};

inline void validate(const Grid1D& g) {
  if (!(g.x_max > g.x_min) || !std::isfinite(g.x_min) || !std::isfinite(g.x_max))
    throw Error("grid extent must be finite with x_max > x_min");
  if (g.n < 16) throw Error("grid needs at least 16 cells");
}

/// Cell averages of both species at one instant.
struct Field1D {
  double t = 0.0;
  std::vector<double> u, w;
};

enum class InitialCondition { exact, limit, step, background };

inline const char* initial_condition_name(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::exact: return "exact";
    case InitialCondition::limit: return "limit";
    case InitialCondition::step: return "step";
    case InitialCondition::background: return "background";
  }
  return "?";
}

inline InitialCondition parse_initial_condition(const std::string& s) {
  if (s == "exact") return InitialCondition::exact;
  if (s == "limit") return InitialCondition::limit;
  if (s == "step") return InitialCondition::step;
  if (s == "background") return InitialCondition::background;
  throw Error("unknown initial condition: " + s);
}

/// Smallest u value the scheme admits; keeps the advective velocity
/// w u_x / u finite in the far-left tail where u underflows.
inline double u_floor(const ModelParams& p) { return 1e-10 * p.u_r; }

inline Field1D initial_field(const Grid1D& g, const ModelParams& p, InitialCondition ic) {
  validate(g);
  validate(p);
  Field1D f;
  f.t = 0.0;
  f.u.resize(g.n);
  f.w.resize(g.n);
  const double floor_u = u_floor(p);
  switch (ic) {
    case InitialCondition::exact: {
      for (std::size_t i = 0; i < g.n; ++i) {
        const UW s = exact_wave(g.x(i), p);
        f.u[i] = std::max(s.u, floor_u);
        f.w[i] = s.w;
      }
      break;
    }
    case InitialCondition::limit: {
      for (std::size_t i = 0; i < g.n; ++i) {
        const UW s = limit_wave(g.x(i), p);
        f.u[i] = std::max(s.u, floor_u);
        f.w[i] = s.w;
      }
      // The limit profile has a corner at x = 0 and a w jump; smooth both
      // over a few cells so the explicit scheme starts from resolvable data.
      for (int pass = 0; pass < 3; ++pass) {
        auto smooth = [&](std::vector<double>& q) {
          std::vector<double> r = q;
          for (std::size_t i = 1; i + 1 < g.n; ++i)
            r[i] = 0.25 * q[i - 1] + 0.5 * q[i] + 0.25 * q[i + 1];
          q = std::move(r);
        };
        smooth(f.u);
        smooth(f.w);
      }
      break;
    }
    case InitialCondition::step: {
      const double width = 3.0 * g.dx();
      const double wh = p.c * p.c * p.u_r / (p.chi * p.k);
      for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        f.u[i] = std::max(floor_u, p.u_r / (1.0 + std::exp(-x / width)));
        const double arg = x / (5.0 * g.dx());
        f.w[i] = wh * std::exp(-0.5 * arg * arg);
      }
      break;
    }
    case InitialCondition::background: {
      for (std::size_t i = 0; i < g.n; ++i) {
        f.u[i] = p.u_r;
        f.w[i] = 0.0;
      }
      break;
    }
  }
  return f;
}

namespace detail {
/// Advective face velocities a_{i+1/2} = chi (u_{i+1} - u_i) / (dx u_face)
/// for the chemotactic transport of w. Returns n+1 values; boundary faces 0.
inline void face_velocities(const Field1D& f, const Grid1D& g, const ModelParams& p,
                            std::vector<double>& a) {
  const double dx = g.dx();
  const double floor_u = u_floor(p);
  a.assign(g.n + 1, 0.0);
  for (std::size_t i = 0; i + 1 < g.n; ++i) {
    const double uf = std::max(0.5 * (f.u[i] + f.u[i + 1]), floor_u);
    a[i + 1] = p.chi * (f.u[i + 1] - f.u[i]) / (dx * uf);
  }
}
}  // namespace detail

/// Largest stable explicit step for the current state: the diffusive bound
/// dx^2/(2 max D) and the advective bound dx/max|a|, with safety factor 0.4.
inline double stable_dt(const Field1D& f, const Grid1D& g, const ModelParams& p) {
  const double dx = g.dx();
  const double dmax = std::max({p.d_u(), p.d_w(), 1e-12});
  double dt = dx * dx / (2.0 * dmax);
  std::vector<double> a;
  detail::face_velocities(f, g, p, a);
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  if (amax > 0.0) dt = std::min(dt, dx / amax);
  return 0.4 * dt;
}

/// One explicit Euler step with zero-flux boundaries: central diffusion for
/// both species, first-order upwind for the chemotactic transport of w,
/// pointwise reaction -k w for u. The background state (u = u_r, w = 0) is a
/// bit-exact fixed point, and the w update telescopes (mass conserved).
inline void step(Field1D& f, const Grid1D& g, const ModelParams& p, double dt) {
  const double dx = g.dx();
  const std::size_t n = g.n;
  const double du = p.d_u(), dw = p.d_w();
  const double floor_u = u_floor(p);

  std::vector<double> a;
  detail::face_velocities(f, g, p, a);

  // Total w flux through each interior face (diffusive + advective).
  std::vector<double> flux_w(n + 1, 0.0), flux_u(n + 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    flux_u[i + 1] = -du * (f.u[i + 1] - f.u[i]) / dx;
    const double adv = a[i + 1] >= 0.0 ? a[i + 1] * f.w[i] : a[i + 1] * f.w[i + 1];
    flux_w[i + 1] = -dw * (f.w[i + 1] - f.w[i]) / dx + adv;
  }

  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    f.u[i] += dt * (-(flux_u[i + 1] - flux_u[i]) / dx - p.k * f.w[i]);
    f.w[i] += dt * (-(flux_w[i + 1] - flux_w[i]) / dx);
    if (f.u[i] < floor_u) f.u[i] = floor_u;
    if (f.w[i] < 0.0) f.w[i] = 0.0;
    ok = ok && std::isfinite(f.u[i]) && std::isfinite(f.w[i]);
  }
  f.t += dt;
  if (!ok) throw UnstableStep();
}

struct SimulateOptions {
  double t_end = 5.0;
  double snapshot_dt = 0.5;
  std::size_t max_steps = 50'000'000;
  InitialCondition init = InitialCondition::exact;
};

/// March the initial state to t_end, recording snapshots every snapshot_dt
/// (steps are clipped so each snapshot instant is hit exactly).
inline std::vector<Field1D> simulate(const Grid1D& g, const ModelParams& p,
                                     const SimulateOptions& opt) {
  if (!(opt.t_end > 0.0) || !(opt.snapshot_dt > 0.0)) throw Error("t_end and snapshot_dt must be positive");
  Field1D f = initial_field(g, p, opt.init);
  std::vector<Field1D> out;
  out.push_back(f);
  double next_snap = opt.snapshot_dt;
  std::size_t steps = 0;
  while (f.t < opt.t_end) {
    if (++steps > opt.max_steps) throw MaxStepsExceeded();
    double dt = stable_dt(f, g, p);
    const double target = std::min(next_snap, opt.t_end);
    if (f.t + dt >= target) dt = target - f.t;
    step(f, g, p, dt);
    if (f.t >= target) {
      f.t = target;  // suppress accumulated roundoff in the time stamp
      out.push_back(f);
      next_snap += opt.snapshot_dt;
    }
  }
  return out;
}

struct WaveSpeed {
  double speed = 0.0;
  double intercept = 0.0;     ///< fitted front position at t = 0
  double uncertainty = 0.0;   ///< standard error of the slope
  std::size_t n_used = 0;
};

/// Position where u crosses the given level, scanning from the right so the
/// advancing front is picked even if the far tail is noisy.
inline double front_position(const Field1D& f, const Grid1D& g, double level) {
  if (f.u.empty()) throw Error("empty field");
  std::size_t i = f.u.size() - 1;
  if (f.u[i] < level) throw LevelNotCrossed();
  while (i > 0 && f.u[i - 1] >= level) --i;
  if (i == 0) throw FrontLeftDomain();
  // Linear interpolation between cell centers i-1 and i.
  const double x0 = g.x(i - 1), x1 = g.x(i);
  const double q0 = f.u[i - 1], q1 = f.u[i];
  if (q1 == q0) return x0;
  return x0 + (level - q0) / (q1 - q0) * (x1 - x0);
}

/// Least-squares wave speed from the front positions of snapshots with
/// t >= t_min. Needs at least two usable snapshots.
inline WaveSpeed measure_wave_speed(const std::vector<Field1D>& snaps, const Grid1D& g,
                                    double level, double t_min = 0.5) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> ts, xs;
  for (const auto& f : snaps) {
    if (f.t < t_min) continue;
    const double x = front_position(f, g, level);
    ts.push_back(f.t);
    xs.push_back(x);
    sx += f.t;
    sy += x;
    sxx += f.t * f.t;
    sxy += f.t * x;
  }
  const double n = static_cast<double>(ts.size());
  if (ts.size() < 2) throw FitIllConditioned("need at least two snapshots past t_min");
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw FitIllConditioned("degenerate snapshot times");
  WaveSpeed ws;
  ws.n_used = ts.size();
  ws.speed = (n * sxy - sx * sy) / den;
  ws.intercept = (sy - ws.speed * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = xs[i] - (ws.intercept + ws.speed * ts[i]);
    ss += r * r;
  }
  if (ts.size() > 2) ws.uncertainty = std::sqrt(ss / (n - 2.0) * (n / den));
  return ws;
}

struct AlignedError {
  double shift = 0.0;   ///< x-offset applied to the reference wave
  double sup_u = 0.0;
  double sup_w = 0.0;
  double l2_u = 0.0;
  double l2_w = 0.0;
};

namespace detail {
template <class ErrFn>
inline double golden_min(ErrFn err, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = err(x1), f2 = err(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = err(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = err(x2);
    }
  }
  return 0.5 * (a + b);
}
}  // namespace detail

/// Align a numerical state against the closed-form wave (translation is the
/// only free parameter) and report the remaining discrepancy. The shift is
/// chosen to minimize the sup-error of u via a coarse scan plus golden-
/// section refinement.
inline AlignedError compare_profile(const Field1D& f, const Grid1D& g, const ModelParams& p,
                                    double shift_radius = 0.0) {
  validate(g);
  if (f.u.size() != g.n || f.w.size() != g.n) throw Error("field does not match grid");
  validate(p, ValidationContext::exact_solution);
  if (shift_radius <= 0.0) shift_radius = 0.25 * (g.x_max - g.x_min);

  auto sup_err_u = [&](double s) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const UW r = exact_wave(g.x(i) - s, p);
      m = std::max(m, std::abs(f.u[i] - r.u));
    }
    return m;
  };

  const int coarse = 129;
  double best_s = 0.0, best_e = std::numeric_limits<double>::infinity();
  for (int j = 0; j < coarse; ++j) {
    const double s = -shift_radius + 2.0 * shift_radius * j / (coarse - 1);
    const double e = sup_err_u(s);
    if (e < best_e) {
      best_e = e;
      best_s = s;
    }
  }
  const double hs = 2.0 * shift_radius / (coarse - 1);
  const double s_opt = detail::golden_min(sup_err_u, best_s - hs, best_s + hs);
  const double s_fin = sup_err_u(s_opt) <= best_e ? s_opt : best_s;

  AlignedError ae;
  ae.shift = s_fin;
  double s2u = 0.0, s2w = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const UW r = exact_wave(g.x(i) - s_fin, p);
    const double eu = f.u[i] - r.u, ew = f.w[i] - r.w;
    ae.sup_u = std::max(ae.sup_u, std::abs(eu));
    ae.sup_w = std::max(ae.sup_w, std::abs(ew));
    s2u += eu * eu;
    s2w += ew * ew;
  }
  ae.l2_u = std::sqrt(s2u * g.dx());
  ae.l2_w = std::sqrt(s2w * g.dx());
  return ae;
}

}  // namespace kswave
