// Closed-form travelling wave: frozen reference values, residuals of the
// travelling-wave system, derivative identities, the sharp-interface limit,
// and profile sampling.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <kswave/kswave.hpp>

using namespace kswave;

namespace {
ModelParams with_dw(double dw) {
  ModelParams p;  // chi = 2, k = 1, c = 2, u_r = 1, a = 4
  p.mu = 0.0;     // the closed form solves the zero-u-diffusion member
  p.eps = dw;
  return p;
}
}  // namespace

TEST_CASE("frozen reference values of the closed-form wave") {
  // High-precision evaluations of the closed form, frozen as literals.
  SECTION("d_w = 1, z = -10") {
    const UW f = exact_wave(-10.0, with_dw(1.0));
    CHECK(f.u == Catch::Approx(2.0611536181902035814e-9).epsilon(5e-15));
    CHECK(f.w == Catch::Approx(8.2446144557673973746e-9).epsilon(5e-15));
  }
  SECTION("d_w = 0.25, z = -3") {
    const UW f = exact_wave(-3.0, with_dw(0.25));
    CHECK(f.u == Catch::Approx(0.029941298192230859784).epsilon(5e-15));
    CHECK(f.w == Catch::Approx(0.068437253009337051861).epsilon(5e-15));
  }
  SECTION("d_w = 0.5, z = 1.5") {
    const UW f = exact_wave(1.5, with_dw(0.5));
    CHECK(f.u == Catch::Approx(0.99876368716112724624).epsilon(5e-15));
    CHECK(f.w == Catch::Approx(0.0098660673502245889427).epsilon(5e-15));
  }
  SECTION("d_w = 1, z = 0 is exact in binary arithmetic") {
    // sigma1 = sigma2 = 1, so u = 2^{-1} and w = 4 * 2^{-2}, both exact.
    const UW f = exact_wave(0.0, with_dw(1.0));
    CHECK(f.u == 0.5);
    CHECK(f.w == 1.0);
  }
}

TEST_CASE("wave limits: depleted behind, rest state ahead") {
  const ModelParams p = with_dw(0.5);
  const UW left = exact_wave(-200.0, p);
  CHECK(left.u < 1e-100);
  CHECK(left.w < 1e-100);
  const UW right = exact_wave(60.0, p);
  CHECK(right.u == Catch::Approx(p.u_r).epsilon(1e-12));
  CHECK(right.w < 1e-40);
}

TEST_CASE("log-space evaluation survives extreme arguments") {
  for (double dw : {0.1, 1.0}) {
    const ModelParams p = with_dw(dw);
    for (double z : {-1e4, -500.0, 500.0, 1e4}) {
      const UW f = exact_wave(z, p);
      CHECK(std::isfinite(f.u));
      CHECK(std::isfinite(f.w));
      CHECK(f.u >= 0.0);
      CHECK(f.w >= 0.0);
      CHECK(f.u <= p.u_r * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("closed form requires 0 < d_w < chi") {
  CHECK_THROWS_AS(exact_wave(0.0, with_dw(0.0)), DiffusionZero);
  CHECK_THROWS_AS(exact_wave(0.0, with_dw(2.0)), DiffusionExceedsChi);
  CHECK_THROWS_AS(exact_wave(0.0, with_dw(3.0)), DiffusionExceedsChi);
}

TEST_CASE("amplitude constant is a pure translation") {
  // Scaling a by e^{c delta / d_w} shifts the profile right by delta.
  const double dw = 0.5, delta = 0.7;
  const ModelParams p = with_dw(dw);
  ModelParams shifted = p;
  shifted.a = p.a * std::exp(p.c * delta / dw);
  for (double z : {-4.0, -1.0, 0.0, 0.3, 2.0}) {
    const UW f = exact_wave(z - delta, p);
    const UW g = exact_wave(z, shifted);
    CHECK(g.u == Catch::Approx(f.u).epsilon(1e-12));
    CHECK(g.w == Catch::Approx(f.w).epsilon(1e-12));
  }
}

TEST_CASE("analytic residuals vanish across the d_w sweep") {
  for (double dw : {1.0, 0.5, 0.25, 0.1, 0.05}) {
    const ModelParams p = with_dw(dw);
    for (int i = 0; i <= 100; ++i) {
      const double z = -10.0 + 15.0 * i / 100.0;
      const Residuals r = tw_residual_analytic(z, p);
      CHECK(std::abs(r.r_u) < 1e-8);
      CHECK(std::abs(r.r_w) < 1e-8);
    }
  }
}

TEST_CASE("finite-difference residuals agree with the analytic ones") {
  for (double dw : {1.0, 0.25, 0.05}) {
    const ModelParams p = with_dw(dw);
    const auto wave = [&](double zz) { return exact_wave(zz, p); };
    for (double z : {-8.0, -3.0, -1.0, 0.0, 0.5, 2.0, 4.0}) {
      const Residuals r = tw_residual(wave, z, p);
      CHECK(std::abs(r.r_u) < 1e-4);
      CHECK(std::abs(r.r_w) < 1e-4);
    }
  }
}

TEST_CASE("derivatives of the closed form match finite differences") {
  for (double dw : {1.0, 0.25}) {
    const ModelParams p = with_dw(dw);
    const double h = 1e-5;
    for (double z : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
      const UWDerivs d = exact_wave_derivs(z, p);
      const UW fp = exact_wave(z + h, p);
      const UW fm = exact_wave(z - h, p);
      const UW f0 = exact_wave(z, p);
      CHECK(d.u == Catch::Approx(f0.u).epsilon(1e-14));
      CHECK(d.w == Catch::Approx(f0.w).epsilon(1e-14));
      // FD references carry O(h^2) truncation plus roundoff amplified by
      // 1/h or 1/h^2, so compare with mixed relative/absolute tolerances.
      CHECK(d.du == Catch::Approx((fp.u - fm.u) / (2 * h)).epsilon(1e-5).margin(1e-8));
      CHECK(d.dw == Catch::Approx((fp.w - fm.w) / (2 * h)).epsilon(1e-5).margin(1e-8));
      CHECK(d.d2u == Catch::Approx((fp.u - 2 * f0.u + fm.u) / (h * h)).epsilon(5e-4).margin(1e-5));
      CHECK(d.d2w == Catch::Approx((fp.w - 2 * f0.w + fm.w) / (h * h)).epsilon(5e-4).margin(1e-5));
    }
  }
}

TEST_CASE("frozen limit-profile values and gluing") {
  const ModelParams p;  // limit profile uses chi, k, c, u_r only
  SECTION("z = -1: (e^{-1}, 2 e^{-1})") {
    const UW f = limit_wave(-1.0, p);
    CHECK(f.u == Catch::Approx(0.3678794411714423216).epsilon(5e-15));
    CHECK(f.w == Catch::Approx(0.73575888234288464319).epsilon(5e-15));
    CHECK(f.u == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(f.w == Catch::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  }
  SECTION("ahead of the front: rest state") {
    for (double z : {1e-12, 0.5, 3.0, 100.0}) {
      const UW f = limit_wave(z, p);
      CHECK(f.u == p.u_r);
      CHECK(f.w == 0.0);
    }
  }
  SECTION("u is continuous at the front, w jumps by c^2 u_r/(k chi)") {
    const UW f = limit_wave(0.0, p);
    CHECK(f.u == p.u_r);
    CHECK(f.w == Catch::Approx(p.c * p.c * p.u_r / (p.k * p.chi)).epsilon(1e-15));
  }
}

TEST_CASE("behind-the-front density ratio approaches its closed form") {
  // w/u -> c^2/(k (chi - d_w)) as z -> -infinity; with d_w = 1 this is 4.
  const ModelParams p = with_dw(1.0);
  CHECK(asymptotic_ratio(p) == Catch::Approx(4.0).epsilon(1e-15));
  const UW f = exact_wave(-40.0, p);
  CHECK(f.w / f.u == Catch::Approx(4.0).epsilon(1e-6));

  ModelParams q = p;
  q.eps = 0.0;  // the limit member keeps the formula with d_w = 0
  CHECK(asymptotic_ratio(q) == Catch::Approx(2.0).epsilon(1e-15));
  q.eps = 2.0;
  CHECK_THROWS_AS(asymptotic_ratio(q), DiffusionExceedsChi);
}

TEST_CASE("exact profiles converge pointwise to the limit profile") {
  const double z = -2.0;
  const UW lim = limit_wave(z, ModelParams{});
  double prev_u = 1e300, prev_w = 1e300;
  for (double dw : {0.5, 0.25, 0.1, 0.05, 0.01}) {
    const UW f = exact_wave(z, with_dw(dw));
    const double du = std::abs(f.u - lim.u);
    const double dwv = std::abs(f.w - lim.w);
    CHECK(du < prev_u);
    CHECK(dwv < prev_w);
    prev_u = du;
    prev_w = dwv;
  }
}

TEST_CASE("profile sampling") {
  const ModelParams p = with_dw(0.5);
  const WaveProfile pr = sample_profile(Construction::exact, -10.0, 5.0, 31, p);
  REQUIRE(pr.z.size() == 31);
  CHECK(pr.z.front() == -10.0);
  CHECK(pr.z.back() == 5.0);  // endpoint exact, not accumulated
  CHECK(pr.construction == Construction::exact);
  for (std::size_t i = 1; i < pr.z.size(); ++i) CHECK(pr.z[i] > pr.z[i - 1]);

  const WaveProfile lim = sample_profile(Construction::limit, -3.0, 3.0, 11, ModelParams{});
  CHECK(lim.construction == Construction::limit);
  CHECK(lim.u.back() == 1.0);
  CHECK(lim.w.back() == 0.0);

  CHECK_THROWS_AS(sample_profile(Construction::exact, 5.0, -10.0, 31, p), Error);
  CHECK_THROWS_AS(sample_profile(Construction::exact, -1.0, 1.0, 1, p), Error);
  CHECK_THROWS_AS(sample_profile(Construction::singular, -1.0, 1.0, 10, p), Error);
}

TEST_CASE("profile invariants are enforced") {
  WaveProfile pr;
  pr.z = {0.0, 1.0};
  pr.u = {1.0, 2.0};
  pr.w = {0.5};
  CHECK_THROWS_AS(check_profile(pr), Error);  // length mismatch
  pr.w = {0.5, 0.5};
  CHECK_NOTHROW(check_profile(pr));
  pr.z = {1.0, 1.0};
  CHECK_THROWS_AS(check_profile(pr), Error);  // not strictly increasing
  pr.z = {0.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(check_profile(pr), Error);  // non-finite
}

TEST_CASE("construction names are stable") {
  CHECK(std::string(construction_name(Construction::exact)) == "exact");
  CHECK(std::string(construction_name(Construction::limit)) == "limit");
  CHECK(std::string(construction_name(Construction::singular)) == "singular");
  CHECK(std::string(construction_name(Construction::shooting)) == "shooting");
  CHECK(std::string(construction_name(Construction::pde)) == "pde");
}
