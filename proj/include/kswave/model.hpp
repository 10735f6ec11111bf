#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace kswave {

/// Parameters of the chemotaxis consumption model
///
///   u_t = d_u u_xx - k w,
///   w_t = d_w w_xx - (chi (w/u) u_x)_x,
///
/// written in the travelling frame z = x - c t with rest states
/// u(-inf) = 0, u(+inf) = u_r, w(+-inf) = 0. The two diffusivities are
/// slaved to one scale: d_u = mu * eps and d_w = eps. Everything is
/// dimensionless.
struct ModelParams {
  double chi = 2.0;   ///< chemotactic sensitivity (> 0)
  double k = 1.0;     ///< consumption rate (> 0)
  double c = 2.0;     ///< wave speed (> 0, right-moving)
  double u_r = 1.0;   ///< rest state of u ahead of the wave (> 0)
  double a = 4.0;     ///< amplitude constant of the closed-form wave (> 0); see exact.hpp
  double mu = 1.0;    ///< diffusivity ratio d_u / d_w (>= 0)
  double eps = 0.1;   ///< diffusion scale; also the slow/fast separation (>= 0)

  double d_u() const { return mu * eps; }
  double d_w() const { return eps; }
};

/// Rest state of u behind the wave. Fixed: the waves treated here deplete u completely.
inline constexpr double u_left = 0.0;

/// u at or below this value counts as having left the phase-space domain u > 0.
inline constexpr double u_singular_floor = 1e-300;

enum class ValidationContext {
  general,         ///< sign/finiteness constraints only
  exact_solution,  ///< additionally 0 < d_w < chi, required by the closed form
};

inline void validate(const ModelParams& p, ValidationContext ctx = ValidationContext::general) {
  // NaN fails every comparison, so non-finite values are rejected by the same checks.
  if (!(p.chi > 0.0) || !std::isfinite(p.chi)) throw NonPositiveParameter("chi");
  if (!(p.k > 0.0) || !std::isfinite(p.k)) throw NonPositiveParameter("k");
  if (!(p.c > 0.0) || !std::isfinite(p.c)) throw NonPositiveParameter("c");
  if (!(p.u_r > 0.0) || !std::isfinite(p.u_r)) throw NonPositiveParameter("u_r");
  if (!(p.a > 0.0) || !std::isfinite(p.a)) throw NonPositiveParameter("a");
  if (!(p.mu >= 0.0) || !std::isfinite(p.mu)) throw NonPositiveParameter("mu");
  if (!(p.eps >= 0.0) || !std::isfinite(p.eps)) throw NonPositiveParameter("eps");
  if (ctx == ValidationContext::exact_solution) {
    if (p.d_w() == 0.0) throw DiffusionZero();
    if (!(p.d_w() < p.chi)) throw DiffusionExceedsChi();
  }
}

/// A point of the first-order travelling-wave phase space (u, v, w, u~),
/// where v = u_z and u~ = mu*eps*u_z + c*u is the conserved-flux variable.
/// The companion slow variables v~ and w~ vanish identically for waves with
/// these rest states (both decay at infinity and are constants of the flow);
/// they are hard-coded to zero throughout, with slow_rhs6 kept as the
/// regression hook for that reduction.
struct PhasePoint {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double u_tilde = 0.0;

  std::array<double, 4> to_array() const { return {u, v, w, u_tilde}; }
  static PhasePoint from_array(const std::array<double, 4>& x) { return {x[0], x[1], x[2], x[3]}; }
};

namespace detail {
inline void require_mu_positive(const ModelParams& p) {
  if (!(p.mu > 0.0)) throw NonPositiveParameter("mu");
}
inline void require_u_regular(double u) {
  if (!(u > u_singular_floor)) throw SingularState();
}
}  // namespace detail

/// Fast-scale system in y = z/eps:
///   mu u_y = u~ - c u,  mu v_y = -c v + k w,  w_y = -c w + chi v w / u,  u~_y = eps k w.
/// Requires mu > 0 and u > 0.
inline PhasePoint fast_rhs(const PhasePoint& s, const ModelParams& p) {
  detail::require_mu_positive(p);
  detail::require_u_regular(s.u);
  return {(s.u_tilde - p.c * s.u) / p.mu,
          (-p.c * s.v + p.k * s.w) / p.mu,
          -p.c * s.w + p.chi * s.v * s.w / s.u,
          p.eps * p.k * s.w};
}

/// Slow-scale system in z (the same flow; fast_rhs divided by eps in the first
/// three components). Requires mu > 0, eps > 0, u > 0.
inline PhasePoint slow_rhs(const PhasePoint& s, const ModelParams& p) {
  detail::require_mu_positive(p);
  if (!(p.eps > 0.0)) throw NonPositiveParameter("eps");
  detail::require_u_regular(s.u);
  const double me = p.mu * p.eps;
  return {(s.u_tilde - p.c * s.u) / me,
          (-p.c * s.v + p.k * s.w) / me,
          (-p.c * s.w + p.chi * s.v * s.w / s.u) / p.eps,
          p.k * s.w};
}

/// Layer problem: the fast system with the slow variable u~ frozen (eps = 0).
inline PhasePoint layer_rhs(const PhasePoint& s, const ModelParams& p) {
  detail::require_mu_positive(p);
  detail::require_u_regular(s.u);
  return {(s.u_tilde - p.c * s.u) / p.mu,
          (-p.c * s.v + p.k * s.w) / p.mu,
          -p.c * s.w + p.chi * s.v * s.w / s.u,
          0.0};
}

/// Full six-variable slow system including the companion variables v~ and w~
/// (which obey v~_z = w~_z = 0). State order: (u, v, w, u~, v~, w~).
/// With v~ = w~ = 0 the first four components coincide with slow_rhs; a
/// regression test pins that reduction.
inline std::array<double, 6> slow_rhs6(const std::array<double, 6>& s, const ModelParams& p) {
  detail::require_mu_positive(p);
  if (!(p.eps > 0.0)) throw NonPositiveParameter("eps");
  detail::require_u_regular(s[0]);
  const double me = p.mu * p.eps;
  return {(s[3] - p.c * s[0]) / me,
          (s[4] - p.c * s[1] + p.k * s[2]) / me,
          (s[5] - p.c * s[2] + p.chi * s[1] * s[2] / s[0]) / p.eps,
          p.k * s[2],
          0.0,
          0.0};
}

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Jacobian of the layer problem's (u, v, w) block, u~ frozen.
inline Mat3 layer_jacobian(const PhasePoint& s, const ModelParams& p) {
  detail::require_mu_positive(p);
  detail::require_u_regular(s.u);
  const double com = p.c / p.mu;
  return {{{-com, 0.0, 0.0},
           {0.0, -com, p.k / p.mu},
           {-p.chi * s.v * s.w / (s.u * s.u), p.chi * s.w / s.u, -p.c + p.chi * s.v / s.u}}};
}

/// Eigenvalues of layer_jacobian, sorted by descending real part.
///
/// The first row of the Jacobian is (-c/mu, 0, 0), so -c/mu is always an
/// eigenvalue and the rest of the spectrum is the 2x2 block over (v, w):
/// lambda^2 - tr lambda + det with tr = -c/mu + J33 and det = -(c/mu) J33 - (k/mu) J32.
inline std::array<std::complex<double>, 3> layer_spectrum(const PhasePoint& s, const ModelParams& p) {
  const Mat3 j = layer_jacobian(s, p);
  const double com = p.c / p.mu;
  const double tr = -com + j[2][2];
  const double det = -com * j[2][2] - j[1][2] * j[2][1];
  const double disc = tr * tr - 4.0 * det;
  std::array<std::complex<double>, 3> lam;
  lam[0] = {-com, 0.0};
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Stable quadratic roots for lambda^2 - tr lambda + det: form the
    // larger-magnitude root first, recover the other from the product.
    const double s2 = tr >= 0.0 ? tr + root : tr - root;
    const double l1 = 0.5 * s2;
    const double l2 = s2 == 0.0 ? 0.0 : det / l1;
    lam[1] = {l1, 0.0};
    lam[2] = {l2, 0.0};
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    lam[1] = {0.5 * tr, im};
    lam[2] = {0.5 * tr, -im};
  }
  std::sort(lam.begin(), lam.end(), [](const std::complex<double>& x, const std::complex<double>& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return lam;
}

}  // namespace kswave
