#pragma once

#include <cmath>
#include <vector>

#include "exact.hpp"
#include "integrate.hpp"
#include "model.hpp"

namespace kswave {

/// The critical manifold of the fast/slow travelling-wave system consists of
/// two branches that meet at the origin:
///   attracting:  (u, v, w) = (u~/c, 0, 0)
///   repelling:   (u, v, w) = (u~/c, u~/chi, c u~/(chi k))
enum class Branch { attracting, repelling };

inline PhasePoint branch_point(Branch b, double u_tilde, const ModelParams& p) {
  validate(p);
  if (!(u_tilde >= 0.0) || !std::isfinite(u_tilde)) throw NegativeUTilde();
  if (b == Branch::attracting) return {u_tilde / p.c, 0.0, 0.0, u_tilde};
  return {u_tilde / p.c, u_tilde / p.chi, p.c * u_tilde / (p.chi * p.k), u_tilde};
}

struct BranchStability {
  std::array<std::complex<double>, 3> eigenvalues;  ///< sorted by descending real part
  bool is_attracting = false;  ///< all eigenvalues in the open left half-plane
  bool is_repelling = false;   ///< at least one eigenvalue with positive real part
};

/// Stability of the layer flow transverse to a branch point. The attracting
/// branch has spectrum {-c/mu, -c/mu, -c}; the repelling branch has
/// {-c/mu, c(-1 +- sqrt(1+4 mu))/(2 mu)}, with exactly one unstable direction.
/// Requires mu > 0 and u~ > 0 (the branches intersect at u~ = 0, where the
/// layer Jacobian is not defined on the manifold).
inline BranchStability classify_branch(Branch b, double u_tilde, const ModelParams& p) {
  detail::require_mu_positive(p);
  if (!(u_tilde >= 0.0) || !std::isfinite(u_tilde)) throw NegativeUTilde();
  if (u_tilde == 0.0) throw OnIntersection();
  const PhasePoint pt = branch_point(b, u_tilde, p);
  BranchStability s;
  s.eigenvalues = layer_spectrum(pt, p);
  bool any_pos = false, all_neg = true;
  for (const auto& lam : s.eigenvalues) {
    if (lam.real() > 0.0) any_pos = true;
    if (!(lam.real() < 0.0)) all_neg = false;
  }
  s.is_attracting = all_neg;
  s.is_repelling = any_pos;
  return s;
}

/// Slow flow restricted to the repelling branch, u~_z = c u~ / chi, with the
/// trajectory normalized so that u~(0) = c u_r (the front sits at z = 0):
/// u(z) = u_r e^{c z / chi}, w(z) = (c^2 u_r/(k chi)) e^{c z / chi}.
/// The expressions match limit_wave(z) for z <= 0 exactly.
inline PhasePoint reduced_flow_on_Sr(double z, const ModelParams& p) {
  validate(p);
  const double e = std::exp(p.c * z / p.chi);
  const double u = p.u_r * e;
  const double w = (p.c * p.c * p.u_r / (p.k * p.chi)) * e;
  return {u, p.c * u / p.chi, w, p.c * u};
}

/// dw/dy of the mu = 0 layer problem, where u = u~/c is frozen and v = k w / c
/// is slaved: dw/dy = -c w + chi k w^2 / u~.
inline double layer_rhs_mu0(double w, double u_tilde, const ModelParams& p) {
  validate(p);
  if (!(u_tilde > 0.0)) throw NegativeUTilde();
  return -p.c * w + p.chi * p.k * w * w / u_tilde;
}

/// Closed-form heteroclinic fibre of the mu = 0 layer problem joining the
/// repelling branch (y -> -inf) to the attracting branch (y -> +inf):
///   u = u~/c,  v = k u~ / (chi k + beta e^{c y}),  w = c u~ / (chi k + beta e^{c y}).
/// beta > 0 positions the transition; beta = chi k puts the midpoint at y = 0.
inline PhasePoint fibre_mu0(double y, double u_tilde, double beta, const ModelParams& p) {
  validate(p);
  if (!(u_tilde >= 0.0) || !std::isfinite(u_tilde)) throw NegativeUTilde();
  if (!(beta > 0.0)) throw NonPositiveBeta();
  const double denom = p.chi * p.k + beta * std::exp(p.c * y);
  return {u_tilde / p.c, p.k * u_tilde / denom, p.c * u_tilde / denom, u_tilde};
}

/// Default fibre normalization: transition midpoint at y = 0.
inline double fibre_beta_default(const ModelParams& p) { return p.chi * p.k; }

struct FibreOptions {
  double delta = 1e-6;        ///< displacement off the repelling branch
  double landing_tol = 1e-8;  ///< |v|, |w| below this counts as landed
  double y_max = 200.0;
  IntegratorOptions integ{};
};

struct FibreTrajectory {
  std::vector<double> y;
  std::vector<PhasePoint> points;
};

/// Heteroclinic fibre of the mu > 0 layer problem, computed by integrating the
/// (v, w) layer subsystem with u frozen at u~/c. The start point is the
/// repelling-branch point displaced by delta along the unstable eigenvector,
/// signed so that w decreases. Throws NoLanding if the trajectory fails to
/// reach |v|, |w| < landing_tol (wrong displacement sign, or tolerances too
/// tight for the span).
inline FibreTrajectory fibre_numeric(double u_tilde, const ModelParams& p,
                                     const FibreOptions& opt = {}) {
  detail::require_mu_positive(p);
  if (!(u_tilde > 0.0) || !std::isfinite(u_tilde)) throw NegativeUTilde();
  const PhasePoint sr = branch_point(Branch::repelling, u_tilde, p);
  const double u_frozen = sr.u;

  // Unstable eigenvector of the (v, w) block at the repelling point:
  // lambda+ = c(-1 + sqrt(1+4 mu))/(2 mu), direction (k/(c + mu lambda+), 1).
  const double lam = p.c * (-1.0 + std::sqrt(1.0 + 4.0 * p.mu)) / (2.0 * p.mu);
  const double ev_v = p.k / (p.c + p.mu * lam);
  const double nrm = std::hypot(ev_v, 1.0);
  StateVec<2> y0{sr.v - opt.delta * ev_v / nrm, sr.w - opt.delta / nrm};

  const double w_cap = 10.0 * sr.w;
  auto rhs = [&](double, const StateVec<2>& s) -> StateVec<2> {
    return {(-p.c * s[0] + p.k * s[1]) / p.mu, -p.c * s[1] + p.chi * s[0] * s[1] / u_frozen};
  };
  auto landed = [&](double, const StateVec<2>& s) {
    if (std::abs(s[1]) > w_cap) throw BlowUp();
    return std::abs(s[0]) < opt.landing_tol && std::abs(s[1]) < opt.landing_tol;
  };

  Trajectory<2> tr;
  try {
    tr = integrate<2>(rhs, y0, 0.0, opt.y_max, opt.integ, {}, landed);
  } catch (const BlowUp&) {
    throw NoLanding("fibre blew up past the repelling branch (check the displacement sign)");
  }
  if (tr.reason != StopReason::predicate) throw NoLanding();

  FibreTrajectory out;
  out.y.reserve(tr.points.size());
  out.points.reserve(tr.points.size());
  for (const auto& q : tr.points) {
    out.y.push_back(q.t);
    out.points.push_back({u_frozen, q.y[0], q.y[1], u_tilde});
  }
  return out;
}

/// The singular travelling wave assembled from its three pieces: the slow
/// segment on the repelling branch (z <= 0), the fast jump at z = 0 along the
/// heteroclinic fibre at u~ = c u_r, and the rest point (u_r, 0, 0, c u_r) on
/// the attracting branch (z > 0).
struct SingularOrbit {
  ModelParams params;
  std::vector<double> slow_z;
  std::vector<PhasePoint> slow_points;
  double jump_z = 0.0;
  FibreTrajectory fibre;   ///< fast-scale jump, parameterized by y
  PhasePoint rest_point;

  /// (u, w) shadow of the orbit as a function of z; identical to limit_wave.
  UW trace_at(double z) const {
    if (z > 0.0) return {params.u_r, 0.0};
    const PhasePoint pt = reduced_flow_on_Sr(z, params);
    return {pt.u, pt.w};
  }
};

struct SingularOrbitOptions {
  int n_slow = 400;
  double fibre_y_span = 25.0;  ///< sampling span for the mu = 0 closed form
  int n_fibre = 201;
  FibreOptions fibre_numeric_opts{};
};

inline SingularOrbit assemble_singular_orbit(const ModelParams& p, double z_min,
                                             const SingularOrbitOptions& opt = {}) {
  validate(p);
  if (!(z_min < 0.0)) throw Error("assemble_singular_orbit requires z_min < 0");
  if (opt.n_slow < 2) throw Error("assemble_singular_orbit requires n_slow >= 2");
  SingularOrbit orb;
  orb.params = p;
  orb.jump_z = 0.0;
  orb.rest_point = branch_point(Branch::attracting, p.c * p.u_r, p);

  const double dz = -z_min / (opt.n_slow - 1);
  for (int i = 0; i < opt.n_slow; ++i) {
    const double z = i == opt.n_slow - 1 ? 0.0 : z_min + i * dz;
    orb.slow_z.push_back(z);
    orb.slow_points.push_back(reduced_flow_on_Sr(z, p));
  }

  const double ut_jump = p.c * p.u_r;
  if (p.mu > 0.0) {
    orb.fibre = fibre_numeric(ut_jump, p, opt.fibre_numeric_opts);
  } else {
    const double beta = fibre_beta_default(p);
    const double dy = 2.0 * opt.fibre_y_span / (opt.n_fibre - 1);
    for (int i = 0; i < opt.n_fibre; ++i) {
      const double y = -opt.fibre_y_span + i * dy;
      orb.fibre.y.push_back(y);
      orb.fibre.points.push_back(fibre_mu0(y, ut_jump, beta, p));
    }
  }
  return orb;
}

}  // namespace kswave
