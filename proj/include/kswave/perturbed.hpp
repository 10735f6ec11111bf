#pragma once

#include <cmath>
#include <vector>

#include "integrate.hpp"
#include "model.hpp"
#include "singular.hpp"

namespace kswave {

namespace detail {
/// Linear coefficients (u, v, w) = coeff * u~ of a perturbed branch. The
/// attracting branch is unchanged by the perturbation; the repelling branch
/// tilts to
///   u = u~ (chi - eps) / (c (chi - eps(1 - mu))),
///   v = u~ / (chi - eps(1 - mu)),
///   w = c u~ / (k (chi - eps)),
/// and both are exactly invariant for the full slow flow (not merely to
/// leading order).
struct BranchCoeffs {
  double au = 0.0, av = 0.0, aw = 0.0;
};

inline BranchCoeffs perturbed_coeffs(Branch b, const ModelParams& p) {
  validate(p);
  if (b == Branch::attracting) return {1.0 / p.c, 0.0, 0.0};
  const double cme = p.chi - p.eps;
  const double d = p.chi - p.eps * (1.0 - p.mu);
  if (!(cme > 0.0) || !(d > 0.0)) throw DegenerateDenominator();
  return {cme / (p.c * d), 1.0 / d, p.c / (p.k * cme)};
}
}  // namespace detail

/// Point of the eps-perturbed branch at a given u~ (eps taken from params).
inline PhasePoint perturbed_point(Branch b, double u_tilde, const ModelParams& p) {
  if (!(u_tilde >= 0.0) || !std::isfinite(u_tilde)) throw NegativeUTilde();
  const auto a = detail::perturbed_coeffs(b, p);
  return {a.au * u_tilde, a.av * u_tilde, a.aw * u_tilde, u_tilde};
}

/// Invariance defect of a perturbed branch under the slow flow: compares the
/// branch tangent (chain rule through u~_z = k w) against the slow vector
/// field at the branch point, component-wise, normalized by the magnitude of
/// the terms composing each rate. Exactly invariant branches give rounding-
/// level residuals (< 1e-12); a 1% distortion of w gives > 1e-3.
///
/// w_scale deliberately distorts the w component before measuring (negative
/// control); 1.0 measures the branch itself.
inline double invariance_residual(Branch b, double u_tilde, const ModelParams& p,
                                  double w_scale = 1.0) {
  detail::require_mu_positive(p);
  if (!(p.eps > 0.0)) throw NonPositiveParameter("eps");
  if (!(u_tilde > 0.0) || !std::isfinite(u_tilde)) throw NegativeUTilde();
  const auto a = detail::perturbed_coeffs(b, p);
  PhasePoint pt{a.au * u_tilde, a.av * u_tilde, a.aw * u_tilde, u_tilde};
  pt.w *= w_scale;

  const double me = p.mu * p.eps;
  const double utz = p.k * pt.w;  // u~_z along the branch
  const double tang[3] = {a.au * utz, a.av * utz, a.aw * utz};
  const double field[3] = {(pt.u_tilde - p.c * pt.u) / me, (-p.c * pt.v + p.k * pt.w) / me,
                           (-p.c * pt.w + p.chi * pt.v * pt.w / std::max(pt.u, u_singular_floor)) / p.eps};
  // Scale of the terms that compose each component (before cancellation).
  const double compose[3] = {
      (std::abs(pt.u_tilde) + p.c * std::abs(pt.u)) / me + std::abs(tang[0]),
      (p.c * std::abs(pt.v) + p.k * std::abs(pt.w)) / me + std::abs(tang[1]),
      (p.c * std::abs(pt.w) + p.chi * std::abs(pt.v * pt.w) / std::max(pt.u, u_singular_floor)) / p.eps +
          std::abs(tang[2])};

  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double scale = std::max(compose[i], std::numeric_limits<double>::min());
    r = std::max(r, std::abs(tang[i] - field[i]) / scale);
  }
  return r;
}

struct ShootOptions {
  double u_tilde_start = 0.0;  ///< <= 0 selects the default c u_r / 2
  double delta_rel = 1e-8;     ///< displacement as a fraction of the start-point norm
  double landing_tol = 1e-9;   ///< |v| and |w| below this, sustained one further step
  double w_cap_factor = 10.0;  ///< blow-up at w > factor * (c^2 u_r / (chi k))
  double y_max = 500.0;
  IntegratorOptions integ{};
};

/// One perturbed heteroclinic: the fast flow from the perturbed repelling
/// branch down to the attracting branch.
struct HeteroclinicResult {
  double epsilon = 0.0;
  double u_tilde_start = 0.0;
  double u_singular = 0.0;      ///< end state of the singular orbit through the same fibre, u~start/c
  double u_end = 0.0;           ///< rest value of u at the landing point, u~landing/c
  double end_state_gap = 0.0;   ///< |u_end - u_singular|; equals |u_end - u_r| when u~start = c u_r
  double speed_offset = 0.0;    ///< informational: c * gap / u_singular
  double u_tilde_landing = 0.0;
  double y_landing = 0.0;
  std::size_t n_accepted = 0;
  WaveProfile profile;          ///< (u, w) against z = eps * y, w-maximum near z = 0
};

/// Shoot the perturbed heteroclinic: start on the perturbed repelling branch
/// at u~start, displaced by delta along the unstable eigenvector of the layer
/// Jacobian (signed so w decreases), and integrate the fast system until
/// |v|, |w| stay below the landing tolerance for one further accepted step.
///
/// The landing u~ exceeds u~start by O(eps) (u~ keeps growing during the
/// jump), which is exactly the end-state deviation reported as end_state_gap.
/// eps = 0 freezes u~ and reproduces the singular fibre.
inline HeteroclinicResult shoot_heteroclinic(const ModelParams& p, const ShootOptions& opt = {}) {
  detail::require_mu_positive(p);
  validate(p);
  const double ut0 = opt.u_tilde_start > 0.0 ? opt.u_tilde_start : 0.5 * p.c * p.u_r;
  const PhasePoint start_on = perturbed_point(Branch::repelling, ut0, p);

  // Unstable eigenvector of the layer Jacobian at the start point. Its u
  // component vanishes; the (v, w) part is (k/(mu lambda + c), 1).
  const auto lam3 = layer_spectrum(start_on, p);
  const double lam = lam3[0].real();
  if (!(lam > 0.0) || lam3[0].imag() != 0.0)
    throw Error("start point has no real unstable direction");
  const double ev = p.k / (p.mu * lam + p.c);
  const double nrm = std::hypot(ev, 1.0);
  const double norm_pt = std::sqrt(start_on.u * start_on.u + start_on.v * start_on.v +
                                   start_on.w * start_on.w + start_on.u_tilde * start_on.u_tilde);
  const double delta = opt.delta_rel * norm_pt;

  StateVec<4> y0 = {start_on.u, start_on.v - delta * ev / nrm, start_on.w - delta / nrm,
                    start_on.u_tilde};

  const double w_cap = opt.w_cap_factor * p.c * p.c * p.u_r / (p.chi * p.k);
  auto rhs = [&](double, const StateVec<4>& s) -> StateVec<4> {
    const PhasePoint d = fast_rhs(PhasePoint::from_array(s), p);
    return d.to_array();
  };
  auto landed = [&](double, const StateVec<4>& s) {
    if (s[2] > w_cap) throw BlowUp();
    return std::abs(s[1]) < opt.landing_tol && std::abs(s[2]) < opt.landing_tol;
  };

  IntegratorOptions io = opt.integ;
  const Trajectory<4> tr = integrate<4>(rhs, y0, 0.0, opt.y_max, io, {}, landed, 2);
  if (tr.reason != StopReason::predicate) throw NoLanding();

  HeteroclinicResult res;
  res.epsilon = p.eps;
  res.u_tilde_start = ut0;
  res.u_singular = ut0 / p.c;
  res.u_tilde_landing = tr.points.back().y[3];
  res.y_landing = tr.points.back().t;
  res.u_end = res.u_tilde_landing / p.c;
  res.end_state_gap = std::abs(res.u_end - res.u_singular);
  res.speed_offset = p.c * res.end_state_gap / res.u_singular;
  res.n_accepted = tr.n_accepted;

  // Profile in the slow coordinate, shifted so the w maximum sits near z = 0.
  std::size_t imax = 0;
  for (std::size_t i = 0; i < tr.points.size(); ++i)
    if (tr.points[i].y[2] > tr.points[imax].y[2]) imax = i;
  double y_peak = tr.points[imax].t;
  if (imax > 0 && imax + 1 < tr.points.size()) {
    // Parabolic refinement through the three samples around the maximum.
    const double t0 = tr.points[imax - 1].t, t1 = tr.points[imax].t, t2 = tr.points[imax + 1].t;
    const double w0 = tr.points[imax - 1].y[2], w1 = tr.points[imax].y[2],
                 w2 = tr.points[imax + 1].y[2];
    const double d1 = (w1 - w0) / (t1 - t0), d2 = (w2 - w1) / (t2 - t1);
    const double curv = (d2 - d1) / (0.5 * (t2 - t0));
    if (curv < 0.0) {
      const double tv = 0.5 * (t0 + t1) - d1 / curv;
      if (tv > t0 && tv < t2) y_peak = tv;
    }
  }
  const double scale = p.eps > 0.0 ? p.eps : 1.0;
  res.profile.construction = Construction::shooting;
  for (const auto& q : tr.points) {
    res.profile.z.push_back(scale * (q.t - y_peak));
    res.profile.u.push_back(q.y[0]);
    res.profile.w.push_back(q.y[2]);
  }
  check_profile(res.profile);
  return res;
}

/// Sup-distance between a shot profile and the singular orbit's (u, w) trace,
/// normalized so both describe a wave with end state u_ref = u~start/c. The u
/// component is compared everywhere; w is compared outside a fixed window
/// around the jump (a shock admits no uniform approximation by smooth layers).
inline double shot_singular_distance(const HeteroclinicResult& shot, const ModelParams& p,
                                     double w_window = 0.25) {
  ModelParams q = p;
  q.u_r = shot.u_singular;  // singular wave through the same fibre
  double sup = 0.0;
  for (std::size_t i = 0; i < shot.profile.z.size(); ++i) {
    const double z = shot.profile.z[i];
    const UW ref = limit_wave(z, q);
    sup = std::max(sup, std::abs(shot.profile.u[i] - ref.u));
    if (std::abs(z) > w_window) sup = std::max(sup, std::abs(shot.profile.w[i] - ref.w));
  }
  return sup;
}

struct ConvergenceRow {
  double eps = 0.0;
  double gap = 0.0;
  double sup_dist = 0.0;
  double speed_offset = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;  ///< sorted by descending eps
  double slope = 0.0;                ///< log-log least-squares order of gap vs eps
};

/// End-state convergence of the perturbed heteroclinic as eps -> 0. Shots
/// default to u~start = c u_r here (the normalization in which the singular
/// end state is u_r itself), so end_state_gap is literally |u_end - u_r|.
/// Requires at least three distinct eps values spanning a decade; gaps at the
/// rounding floor make the fit meaningless and raise FitIllConditioned.
inline ConvergenceStudy convergence_study(const ModelParams& base, std::vector<double> epsilons,
                                          ShootOptions opt = {}) {
  std::sort(epsilons.begin(), epsilons.end(), std::greater<double>());
  epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());
  if (epsilons.size() < 3) throw FitIllConditioned("need at least three distinct eps values");
  for (double e : epsilons)
    if (!(e > 0.0) || !std::isfinite(e)) throw NonPositiveParameter("eps");
  if (!(epsilons.front() / epsilons.back() >= 10.0))
    throw FitIllConditioned("eps values must span at least a decade");

  if (opt.u_tilde_start <= 0.0) opt.u_tilde_start = base.c * base.u_r;

  ConvergenceStudy st;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double e : epsilons) {
    ModelParams p = base;
    p.eps = e;
    const HeteroclinicResult shot = shoot_heteroclinic(p, opt);
    if (!(shot.end_state_gap > 1e-14 * base.u_r))
      throw FitIllConditioned("end-state gap at rounding floor");
    ConvergenceRow row{e, shot.end_state_gap, shot_singular_distance(shot, p), shot.speed_offset};
    st.rows.push_back(row);
    const double lx = std::log(e), ly = std::log(row.gap);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(st.rows.size());
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw FitIllConditioned("degenerate abscissae");
  st.slope = (n * sxy - sx * sy) / den;
  return st;
}

}  // namespace kswave
