// Adaptive Runge-Kutta integrator: accuracy on problems with known
// solutions, event localization on the dense interpolant, stop predicates,
// and failure modes.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <kswave/errors.hpp>
#include <kswave/integrate.hpp>

using namespace kswave;

TEST_CASE("exponential decay is integrated to tight tolerance") {
  const auto rhs = [](double, const StateVec<1>& y) { return StateVec<1>{-y[0]}; };
  const auto tr = integrate<1>(rhs, StateVec<1>{1.0}, 0.0, 5.0);
  REQUIRE(tr.reason == StopReason::span_end);
  REQUIRE_FALSE(tr.points.empty());
  CHECK(tr.points.front().t == 0.0);
  CHECK(tr.points.back().t == 5.0);  // span end is hit exactly
  CHECK(tr.points.back().y[0] == Catch::Approx(std::exp(-5.0)).epsilon(1e-9));
  CHECK(tr.n_accepted > 0);
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    CHECK(tr.points[i].t > tr.points[i - 1].t);
}

TEST_CASE("harmonic oscillator conserves energy to solver tolerance") {
  const auto rhs = [](double, const StateVec<2>& y) { return StateVec<2>{y[1], -y[0]}; };
  const auto tr = integrate<2>(rhs, StateVec<2>{1.0, 0.0}, 0.0, 20.0 * M_PI);
  REQUIRE(tr.reason == StopReason::span_end);
  const auto& yf = tr.points.back().y;
  const double energy = yf[0] * yf[0] + yf[1] * yf[1];
  CHECK(energy == Catch::Approx(1.0).epsilon(1e-7));
  CHECK(yf[0] == Catch::Approx(1.0).margin(1e-6));
  CHECK(yf[1] == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("backward spans integrate toward smaller t") {
  const auto rhs = [](double, const StateVec<1>& y) { return StateVec<1>{y[0]}; };
  const auto tr = integrate<1>(rhs, StateVec<1>{1.0}, 0.0, -3.0);
  REQUIRE(tr.reason == StopReason::span_end);
  CHECK(tr.points.back().t == -3.0);
  CHECK(tr.points.back().y[0] == Catch::Approx(std::exp(-3.0)).epsilon(1e-9));
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    CHECK(tr.points[i].t < tr.points[i - 1].t);
}

TEST_CASE("terminal event stops the run at the crossing") {
  // y' = 1 from y(0) = -1 crosses y = 0 at exactly t = 1.
  const auto rhs = [](double, const StateVec<1>&) { return StateVec<1>{1.0}; };
  Event<1> ev;
  ev.g = [](double, const StateVec<1>& y) { return y[0]; };
  const auto tr = integrate<1>(rhs, StateVec<1>{-1.0}, 0.0, 10.0, {}, {ev});
  REQUIRE(tr.reason == StopReason::event);
  CHECK(tr.event_index == 0);
  CHECK(tr.points.back().t == Catch::Approx(1.0).margin(1e-10));
  CHECK(std::abs(tr.points.back().y[0]) < 1e-9);
}

TEST_CASE("event on a curved solution is localized on the dense output") {
  // y' = cos t, y(0) = 0, so y = sin t crosses 0.5 first at t = pi/6.
  const auto rhs = [](double t, const StateVec<1>&) { return StateVec<1>{std::cos(t)}; };
  Event<1> ev;
  ev.g = [](double, const StateVec<1>& y) { return y[0] - 0.5; };
  ev.direction = +1;
  const auto tr = integrate<1>(rhs, StateVec<1>{0.0}, 0.0, 10.0, {}, {ev});
  REQUIRE(tr.reason == StopReason::event);
  CHECK(tr.points.back().t == Catch::Approx(M_PI / 6.0).margin(1e-9));
}

TEST_CASE("direction filter ignores crossings with the wrong sign change") {
  // y = sin t falls through zero at t = pi; a rising-only event must skip it
  // and fire at t = 2 pi instead.
  const auto rhs = [](double t, const StateVec<1>&) { return StateVec<1>{std::cos(t)}; };
  const StateVec<1> y0{std::sin(0.5)};  // so y(t) = sin t exactly
  Event<1> rising;
  rising.g = [](double, const StateVec<1>& y) { return y[0]; };
  rising.direction = +1;
  const auto tr = integrate<1>(rhs, y0, 0.5, 10.0, {}, {rising});
  REQUIRE(tr.reason == StopReason::event);
  CHECK(tr.points.back().t == Catch::Approx(2.0 * M_PI).margin(1e-8));

  Event<1> falling = rising;
  falling.direction = -1;
  const auto tf = integrate<1>(rhs, y0, 0.5, 10.0, {}, {falling});
  REQUIRE(tf.reason == StopReason::event);
  CHECK(tf.points.back().t == Catch::Approx(M_PI).margin(1e-8));
}

TEST_CASE("non-terminal events record nothing and the run continues") {
  const auto rhs = [](double t, const StateVec<1>&) { return StateVec<1>{std::cos(t)}; };
  Event<1> ev;
  ev.g = [](double, const StateVec<1>& y) { return y[0]; };
  ev.terminal = false;
  const auto tr = integrate<1>(rhs, StateVec<1>{0.0}, 0.5, 10.0, {}, {ev});
  CHECK(tr.reason == StopReason::span_end);
  CHECK(tr.points.back().t == 10.0);
}

TEST_CASE("stop predicate with sustain fires only when satisfied repeatedly") {
  const auto rhs = [](double, const StateVec<1>& y) { return StateVec<1>{-y[0]}; };
  const auto below = [](double, const StateVec<1>& y) { return y[0] < 0.1; };
  const auto tr = integrate<1>(rhs, StateVec<1>{1.0}, 0.0, 50.0, {}, {}, below, 2);
  REQUIRE(tr.reason == StopReason::predicate);
  CHECK(tr.points.back().y[0] < 0.1);
  CHECK(tr.points.back().t < 50.0);
  // The predicate must have held on two consecutive accepted steps, so the
  // previous stored point is already below the threshold too.
  REQUIRE(tr.points.size() >= 2);
  CHECK(tr.points[tr.points.size() - 2].y[0] < 0.1);
}

TEST_CASE("finite-time blow-up underflows the step size") {
  // y' = y^2 from y(0) = 1 blows up at t = 1; the controller cannot pass it.
  const auto rhs = [](double, const StateVec<1>& y) { return StateVec<1>{y[0] * y[0]}; };
  CHECK_THROWS_AS(integrate<1>(rhs, StateVec<1>{1.0}, 0.0, 2.0), Error);
}

TEST_CASE("step budget is enforced") {
  const auto rhs = [](double, const StateVec<1>& y) { return StateVec<1>{-y[0]}; };
  IntegratorOptions opt;
  opt.max_steps = 10;
  CHECK_THROWS_AS(integrate<1>(rhs, StateVec<1>{1.0}, 0.0, 1e6, opt), MaxStepsExceeded);
}

TEST_CASE("require_event raises when the span ends without a crossing") {
  const auto rhs = [](double, const StateVec<1>&) { return StateVec<1>{1.0}; };
  Event<1> ev;
  ev.g = [](double, const StateVec<1>& y) { return y[0] - 100.0; };  // never reached
  IntegratorOptions opt;
  opt.require_event = true;
  CHECK_THROWS_AS(integrate<1>(rhs, StateVec<1>{0.0}, 0.0, 1.0, opt, {ev}), EventNotBracketed);
}

TEST_CASE("tolerances steer the error") {
  const auto rhs = [](double, const StateVec<1>& y) { return StateVec<1>{-y[0]}; };
  IntegratorOptions loose;
  loose.rel_tol = 1e-4;
  loose.abs_tol = 1e-6;
  const auto tl = integrate<1>(rhs, StateVec<1>{1.0}, 0.0, 5.0, loose);
  IntegratorOptions tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-14;
  const auto tt = integrate<1>(rhs, StateVec<1>{1.0}, 0.0, 5.0, tight);
  const double el = std::abs(tl.points.back().y[0] - std::exp(-5.0));
  const double et = std::abs(tt.points.back().y[0] - std::exp(-5.0));
  CHECK(et < el);
  CHECK(tt.n_accepted > tl.n_accepted);
}
