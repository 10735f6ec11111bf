#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "model.hpp"

namespace kswave {

namespace detail {
/// log(e^x + e^y) without overflow.
inline double logaddexp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}
}  // namespace detail

/// Constants of the closed-form travelling wave (d_u = 0, 0 < d_w < chi):
///
///   u(z) = (sigma2 + sigma1 e^{-c z / d_w})^{d_w/(d_w-chi)}
///   w(z) = a e^{-c z / d_w} (sigma2 + sigma1 e^{-c z / d_w})^{chi/(d_w-chi)}
///
/// with sigma1 = a k (chi - d_w)/c^2 and sigma2 = u_r^{(d_w-chi)/d_w}. The
/// amplitude constant a only positions the wave: scaling a by e^{c D / d_w}
/// translates the profile by D, so a = 4 is a normalization choice.
struct ExactWaveConstants {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double log_sigma1 = 0.0;
  double log_sigma2 = 0.0;
  double exponent_u = 0.0;  ///< d_w/(d_w-chi), negative
  double exponent_w = 0.0;  ///< chi/(d_w-chi), negative

  static ExactWaveConstants from(const ModelParams& p) {
    validate(p, ValidationContext::exact_solution);
    const double dw = p.d_w();
    ExactWaveConstants k;
    k.sigma1 = p.a * p.k * (p.chi - dw) / (p.c * p.c);
    k.log_sigma1 = std::log(k.sigma1);
    k.log_sigma2 = (dw - p.chi) / dw * std::log(p.u_r);
    k.sigma2 = std::exp(k.log_sigma2);
    k.exponent_u = dw / (dw - p.chi);
    k.exponent_w = p.chi / (dw - p.chi);
    return k;
  }
};

struct UW {
  double u = 0.0;
  double w = 0.0;
};

struct UWDerivs {
  double u = 0.0, w = 0.0;
  double du = 0.0, dw = 0.0;
  double d2u = 0.0, d2w = 0.0;
};

/// Closed-form travelling wave, evaluated in log space so that arbitrarily
/// negative z (where e^{-c z / d_w} overflows) stays well defined.
inline UW exact_wave(double z, const ModelParams& p) {
  const ExactWaveConstants k = ExactWaveConstants::from(p);
  const double ell = -p.c * z / p.d_w();
  const double t = detail::logaddexp(k.log_sigma2, k.log_sigma1 + ell);
  return {std::exp(k.exponent_u * t), std::exp(std::log(p.a) + ell + k.exponent_w * t)};
}

/// Closed-form wave with first and second z-derivatives, via logarithmic
/// derivatives. With q = sigma1 E / (sigma2 + sigma1 E) in (0, 1):
///   (log u)'  = c q / (chi - d_w)
///   (log u)'' = -c^2 q (1-q) / (d_w (chi - d_w))
///   (log w)'  = -(c/d_w) (1 + b q),          b = chi/(d_w-chi)
///   (log w)'' = (c/d_w)^2 b q (1-q)
inline UWDerivs exact_wave_derivs(double z, const ModelParams& p) {
  const ExactWaveConstants k = ExactWaveConstants::from(p);
  const double dw = p.d_w();
  const double ell = -p.c * z / dw;
  const double t = detail::logaddexp(k.log_sigma2, k.log_sigma1 + ell);
  // q = 1 / (1 + exp(log_sigma2 - log_sigma1 - ell)), overflow-safe.
  const double d = k.log_sigma2 - k.log_sigma1 - ell;
  const double q = d > 0.0 ? std::exp(-d) / (1.0 + std::exp(-d)) : 1.0 / (1.0 + std::exp(d));
  const double q1q = q * (1.0 - q);

  UWDerivs r;
  r.u = std::exp(k.exponent_u * t);
  r.w = std::exp(std::log(p.a) + ell + k.exponent_w * t);
  const double ru = p.c * q / (p.chi - dw);
  const double ru1 = -p.c * p.c * q1q / (dw * (p.chi - dw));
  const double rw = -(p.c / dw) * (1.0 + k.exponent_w * q);
  const double rw1 = (p.c / dw) * (p.c / dw) * k.exponent_w * q1q;
  r.du = r.u * ru;
  r.d2u = r.u * (ru * ru + ru1);
  r.dw = r.w * rw;
  r.d2w = r.w * (rw * rw + rw1);
  return r;
}

/// Sharp-interface profile reached as d_w -> 0 (u-diffusion already zero):
/// an exponential ramp glued to the rest state at z = 0, with w proportional
/// to u behind the front and a shock in w at the gluing point.
inline UW limit_wave(double z, const ModelParams& p) {
  validate(p);
  if (z > 0.0) return {p.u_r, 0.0};
  const double e = std::exp(p.c * z / p.chi);
  return {p.u_r * e, (p.c * p.c * p.u_r / (p.k * p.chi)) * e};
}

/// lim_{z -> -inf} w/u of the closed-form wave: c^2 / (k (chi - d_w)).
/// Valid for 0 <= d_w < chi (d_w = 0 gives the limit profile's constant ratio).
inline double asymptotic_ratio(const ModelParams& p) {
  validate(p);
  if (!(p.d_w() < p.chi)) throw DiffusionExceedsChi();
  return p.c * p.c / (p.k * (p.chi - p.d_w()));
}

/// Residuals of the travelling-wave ODE system
///   r_u = d_u u'' + c u' - k w
///   r_w = d_w w'' + c w' - chi ((w/u) u')'
/// A true wave satisfies r_u = r_w = 0.
struct Residuals {
  double r_u = 0.0;
  double r_w = 0.0;
};

/// Residuals of the closed-form wave using its analytic derivatives.
inline Residuals tw_residual_analytic(double z, const ModelParams& p) {
  const UWDerivs f = exact_wave_derivs(z, p);
  const double r_u = p.d_u() * f.d2u + p.c * f.du - p.k * f.w;
  // (chi w u'/u)' = chi (w' u'/u + w u''/u - w u'^2/u^2)
  const double gprime =
      p.chi * (f.dw * f.du / f.u + f.w * f.d2u / f.u - f.w * f.du * f.du / (f.u * f.u));
  const double r_w = p.d_w() * f.d2w + p.c * f.dw - gprime;
  return {r_u, r_w};
}

/// Default step for the finite-difference residual.
inline double tw_residual_default_step(double z) { return std::max(1e-5, 1e-5 * std::abs(z)); }

/// Residuals of an arbitrary profile (any callable z -> UW) by second-order
/// central differences on a five-point stencil. h = 0 selects the default step.
template <class F>
Residuals tw_residual(F&& profile, double z, const ModelParams& p, double h = 0.0) {
  if (h == 0.0) h = tw_residual_default_step(z);
  if (!(h > 0.0)) throw NonPositiveParameter("h");
  const UW fm2 = profile(z - 2.0 * h);
  const UW fm1 = profile(z - h);
  const UW f0 = profile(z);
  const UW fp1 = profile(z + h);
  const UW fp2 = profile(z + 2.0 * h);

  const double du = (fp1.u - fm1.u) / (2.0 * h);
  const double d2u = (fp1.u - 2.0 * f0.u + fm1.u) / (h * h);
  const double dwd = (fp1.w - fm1.w) / (2.0 * h);
  const double d2w = (fp1.w - 2.0 * f0.w + fm1.w) / (h * h);

  // chemotaxis term g = chi w u'/u evaluated at z +- h, then differenced
  const double du_p = (fp2.u - f0.u) / (2.0 * h);
  const double du_m = (f0.u - fm2.u) / (2.0 * h);
  const double g_p = p.chi * fp1.w * du_p / fp1.u;
  const double g_m = p.chi * fm1.w * du_m / fm1.u;
  const double gprime = (g_p - g_m) / (2.0 * h);

  return {p.d_u() * d2u + p.c * du - p.k * f0.w, p.d_w() * d2w + p.c * dwd - gprime};
}

enum class Construction { exact, limit, singular, shooting, pde };

inline const char* construction_name(Construction c) {
  switch (c) {
    case Construction::exact: return "exact";
    case Construction::limit: return "limit";
    case Construction::singular: return "singular";
    case Construction::shooting: return "shooting";
    case Construction::pde: return "pde";
  }
  return "unknown";
}

/// A sampled wave profile on a strictly increasing coordinate grid.
struct WaveProfile {
  std::vector<double> z;
  std::vector<double> u;
  std::vector<double> w;
  Construction construction = Construction::exact;
};

/// Throws if the profile violates its invariants (strictly increasing grid,
/// matching column lengths, finite values).
inline void check_profile(const WaveProfile& pr) {
  if (pr.z.size() != pr.u.size() || pr.z.size() != pr.w.size())
    throw Error("profile columns have mismatched lengths");
  for (std::size_t i = 0; i < pr.z.size(); ++i) {
    if (!std::isfinite(pr.z[i]) || !std::isfinite(pr.u[i]) || !std::isfinite(pr.w[i]))
      throw Error("profile contains a non-finite value");
    if (i > 0 && !(pr.z[i] > pr.z[i - 1])) throw Error("profile grid is not strictly increasing");
  }
}

/// Uniformly sampled closed-form or limit profile on [z_min, z_max], n >= 2 points.
inline WaveProfile sample_profile(Construction kind, double z_min, double z_max, int n,
                                  const ModelParams& p) {
  if (kind != Construction::exact && kind != Construction::limit)
    throw Error("sample_profile supports the exact and limit constructions only");
  if (!(z_min < z_max)) throw Error("sample_profile requires z_min < z_max");
  if (n < 2) throw Error("sample_profile requires n >= 2");
  WaveProfile pr;
  pr.construction = kind;
  pr.z.resize(static_cast<std::size_t>(n));
  pr.u.resize(static_cast<std::size_t>(n));
  pr.w.resize(static_cast<std::size_t>(n));
  const double dz = (z_max - z_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double z = i == n - 1 ? z_max : z_min + i * dz;
    const UW f = kind == Construction::exact ? exact_wave(z, p) : limit_wave(z, p);
    pr.z[static_cast<std::size_t>(i)] = z;
    pr.u[static_cast<std::size_t>(i)] = f.u;
    pr.w[static_cast<std::size_t>(i)] = f.w;
  }
  check_profile(pr);
  return pr;
}

}  // namespace kswave
