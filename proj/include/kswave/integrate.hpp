#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace kswave {

/// Embedded Dormand-Prince 5(4) integration with dense output and event
/// localization. The state is a fixed-size array; the right-hand side is any
/// callable (double t, const State&) -> State.

template <std::size_t N>
using StateVec = std::array<double, N>;

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 0.0;   ///< 0 selects an automatic initial step
  double h_max = 0.0;    ///< 0 means |span|
  std::size_t max_steps = 10'000'000;
  double event_tol = 1e-10;      ///< localize events to |g| <= event_tol
  bool require_event = false;    ///< raise EventNotBracketed if the span ends first
};

enum class StopReason { span_end, event, predicate };

template <std::size_t N>
struct TrajectoryPoint {
  double t = 0.0;
  StateVec<N> y{};
};

template <std::size_t N>
struct Trajectory {
  std::vector<TrajectoryPoint<N>> points;
  StopReason reason = StopReason::span_end;
  int event_index = -1;      ///< which event stopped the run, if any
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
};

/// A scalar event g(t, y); a sign change of g over an accepted step is
/// localized on the dense interpolant. direction limits which crossings fire.
template <std::size_t N>
struct Event {
  std::function<double(double, const StateVec<N>&)> g;
  int direction = 0;     ///< +1: fire on g rising through 0; -1: falling; 0: either
  bool terminal = true;
};

namespace detail {

template <std::size_t N>
StateVec<N> axpy(const StateVec<N>& y, double h, const StateVec<N>& d) {
  StateVec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * d[i];
  return r;
}

/// Dense-output evaluator for one accepted Dormand-Prince step.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  StateVec<N> r1{}, r2{}, r3{}, r4{}, r5{};

  StateVec<N> eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    StateVec<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    return y;
  }
};

}  // namespace detail

/// Integrate rhs over [t0, t1] (either direction). Events are localized to
/// |g| <= event_tol on the continuous extension; stop_when, if given, is
/// checked at accepted steps and must hold at `sustain` consecutive steps to
/// stop. Throws StepSizeUnderflow, MaxStepsExceeded, EventNotBracketed.
template <std::size_t N, class RHS>
Trajectory<N> integrate(RHS&& rhs, StateVec<N> y0, double t0, double t1,
                        const IntegratorOptions& opt = {},
                        const std::vector<Event<N>>& events = {},
                        const std::function<bool(double, const StateVec<N>&)>& stop_when = nullptr,
                        int sustain = 1) {
  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Continuous-extension weights.
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  const double span = t1 - t0;
  if (span == 0.0) {
    Trajectory<N> tr;
    tr.points.push_back({t0, y0});
    if (opt.require_event && !events.empty()) throw EventNotBracketed();
    return tr;
  }
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double h_max = opt.h_max > 0.0 ? opt.h_max : std::abs(span);

  Trajectory<N> tr;
  tr.points.push_back({t0, y0});

  double t = t0;
  StateVec<N> y = y0;
  StateVec<N> k1 = rhs(t, y);

  auto err_norm = [&](const StateVec<N>& e, const StateVec<N>& ya, const StateVec<N>& yb) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double r = e[i] / sc;
      s += r * r;
    }
    return std::sqrt(s / static_cast<double>(N));
  };

  // Initial step: crude but adequate for the smooth systems used here.
  double h = opt.h_init;
  if (h == 0.0) {
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      ynorm = std::max(ynorm, std::abs(y[i]));
      fnorm = std::max(fnorm, std::abs(k1[i]));
    }
    h = fnorm > 0.0 ? 0.01 * (ynorm + opt.abs_tol / opt.rel_tol) / fnorm : 1e-6 * std::abs(span);
    h = std::min(std::max(h, 1e-12), h_max);
  }
  h = std::min(std::abs(h), h_max) * dir;

  std::vector<double> g_prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i].g(t, y);
  int sustained = 0;
  if (stop_when && stop_when(t, y)) {
    if (sustain <= 1) {
      tr.reason = StopReason::predicate;
      return tr;
    }
    sustained = 1;
  }

  for (std::size_t step = 0;; ++step) {
    if (step >= opt.max_steps) throw MaxStepsExceeded();
    const bool last = dir * (t + h - t1) >= 0.0;
    if (last) h = t1 - t;
    if (std::abs(h) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
      throw StepSizeUnderflow();

    using detail::axpy;
    StateVec<N> k2 = rhs(t + c2 * h, axpy(y, h * a21, k1));
    StateVec<N> yt;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    StateVec<N> k3 = rhs(t + c3 * h, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    StateVec<N> k4 = rhs(t + c4 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    StateVec<N> k5 = rhs(t + c5 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    StateVec<N> k6 = rhs(t + h, yt);
    StateVec<N> y1;
    for (std::size_t i = 0; i < N; ++i)
      y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    StateVec<N> k7 = rhs(t + h, y1);

    StateVec<N> errv;
    for (std::size_t i = 0; i < N; ++i)
      errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double err = err_norm(errv, y, y1);

    if (err > 1.0) {
      ++tr.n_rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // Accepted. Build the dense interpolant for this step.
    detail::DenseStep<N> dense;
    dense.t0 = t;
    dense.h = h;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      dense.r1[i] = y[i];
      dense.r2[i] = ydiff;
      dense.r3[i] = bspl;
      dense.r4[i] = ydiff - h * k7[i] - bspl;
      dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }

    const double t_new = t + h;
    ++tr.n_accepted;

    // Event localization on the continuous extension.
    bool stopped = false;
    for (std::size_t ie = 0; ie < events.size(); ++ie) {
      const double g0 = g_prev[ie];
      const double g1 = events[ie].g(t_new, y1);
      const bool crossed = (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0);
      const bool dir_ok = events[ie].direction == 0 || (events[ie].direction > 0 && g0 < g1) ||
                          (events[ie].direction < 0 && g0 > g1);
      g_prev[ie] = g1;
      if (!crossed || !dir_ok) continue;

      double ta = t, tb = t_new, ga = g0, gb = g1;
      double tm = tb;
      StateVec<N> ym = y1;
      double gm = gb;
      for (int it = 0; it < 200 && std::abs(gm) > opt.event_tol; ++it) {
        // Bisection on the dense interpolant; robust for any continuous g.
        tm = 0.5 * (ta + tb);
        if (tm == ta || tm == tb) break;
        ym = dense.eval(tm);
        gm = events[ie].g(tm, ym);
        if ((ga < 0.0) == (gm < 0.0)) {
          ta = tm;
          ga = gm;
        } else {
          tb = tm;
          gb = gm;
        }
      }
      tr.points.push_back({tm, ym});
      if (events[ie].terminal) {
        tr.reason = StopReason::event;
        tr.event_index = static_cast<int>(ie);
        return tr;
      }
    }

    t = t_new;
    y = y1;
    k1 = k7;  // first-same-as-last
    tr.points.push_back({t, y});

    if (stop_when) {
      if (stop_when(t, y)) {
        if (++sustained >= sustain) {
          tr.reason = StopReason::predicate;
          return tr;
        }
      } else {
        sustained = 0;
      }
    }
    (void)stopped;

    if (last) break;
    const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h = dir * std::min(std::abs(h) * fac, h_max);
  }

  if (opt.require_event && !events.empty()) throw EventNotBracketed();
  tr.reason = StopReason::span_end;
  return tr;
}

}  // namespace kswave
