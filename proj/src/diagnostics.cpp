#include "chemolab/diagnostics.hpp"

#include "chemolab/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemolab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void DiagnosticsConfig::validate(int dim) const {
  if (!(effective_p(dim) > 1.0)) {
    throw std::invalid_argument("DiagnosticsConfig: p must be > 1");
  }
  if (!(q > 0.0)) throw std::invalid_argument("DiagnosticsConfig: q must be > 0");
  const double th = effective_theta(dim);
  if (!(th > 0.0 && th < 1.0)) {
    throw std::invalid_argument("DiagnosticsConfig: theta must be in (0,1)");
  }
  if (cadence < 1) throw std::invalid_argument("DiagnosticsConfig: cadence >= 1");
  if (!(band >= 0.0)) throw std::invalid_argument("DiagnosticsConfig: band >= 0");
}

DiagnosticsRecord record(const State& state, const ModelParams& params,
                         const DiagnosticsConfig& config) {
  const Grid& g = state.u.grid;
  config.validate(g.dim);
  const double vol = g.cell_volume();
  const Array uv = state.u.data + state.v.data;

  DiagnosticsRecord r;
  r.t = state.t;
  r.mass_u = state.u.data.sum() * vol;
  r.mass_v = state.v.data.sum() * vol;
  r.mass_combined = uv.sum() * vol;
  const double p = config.effective_p(g.dim);
  r.lp_moment = uv.pow(p).sum() * vol;
  r.max_uv = uv.maxCoeff();
  r.min_uv = uv.minCoeff();
  if (r.min_uv > 0.0) {
    r.neg_moment = uv.pow(-config.q).sum() * vol;
    r.neg_moment_shift = uv.pow(1.0 - config.q).sum() * vol;
    r.ln_mass = uv.log().sum() * vol;
  } else {
    r.neg_moment = kInf;
    r.neg_moment_shift = kInf;
    r.ln_mass = -kInf;
  }
  r.min_w = state.w.data.minCoeff();
  r.dirichlet_quotient =
      r.min_w > 0.0 ? dirichlet_quotient(state.w) : 0.0;
  ScalarField sum{g, uv};
  r.holder_seminorm =
      holder_seminorm(sum, config.effective_theta(g.dim), default_strides(g));
  r.delta0_ratio = r.mass_combined > 0.0 ? r.min_w / r.mass_combined : 0.0;
  return r;
}

namespace {

void fold(CheckReport& rep, double margin, double t) {
  if (margin < rep.worst_margin) {
    rep.worst_margin = margin;
    rep.worst_time = t;
  }
}

void finalize(CheckReport& rep) { rep.pass = rep.worst_margin >= 0.0; }

}  // namespace

CheckReport check_mass_upper(const Trajectory& traj, const ModelParams& params,
                             double volume, double band) {
  if (traj.empty()) throw std::invalid_argument("check_mass_upper: empty trajectory");
  CheckReport rep{"mass_upper", false, true, kInf, traj.front().t, ""};
  const double cap_u = params.a1 * volume / params.b1;
  const double cap_v = params.a2 * volume / params.b2;
  const double m1 = std::max(traj.front().mass_u, cap_u);
  const double m2 = std::max(traj.front().mass_v, cap_v);
  for (const auto& r : traj) {
    fold(rep, m1 * (1.0 + band) - r.mass_u, r.t);
    fold(rep, m2 * (1.0 + band) - r.mass_v, r.t);
  }
  // limsup form over the trailing 20%
  const size_t tail0 = traj.size() - std::max<size_t>(1, traj.size() / 5);
  double su = 0.0, sv = 0.0;
  size_t n = 0;
  for (size_t i = tail0; i < traj.size(); ++i, ++n) {
    su += traj[i].mass_u;
    sv += traj[i].mass_v;
  }
  fold(rep, cap_u * (1.0 + band) - su / n, traj.back().t);
  fold(rep, cap_v * (1.0 + band) - sv / n, traj.back().t);
  finalize(rep);
  return rep;
}

CheckReport check_ln_mass_slope(const Trajectory& traj, const ModelParams& params,
                                double volume, double band) {
  CheckReport rep{"ln_mass_slope", false, true, kInf, 0.0, ""};
  if (traj.size() < 2) {
    rep.applicable = false;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.note = "trajectory too short";
    return rep;
  }
  const double chi_sq = std::max(params.chi1 * params.chi1, params.chi2 * params.chi2);
  const double m1 = std::max(traj.front().mass_u, params.a1 * volume / params.b1);
  const double m2 = std::max(traj.front().mass_v, params.a2 * volume / params.b2);
  const double K = params.mu * volume * chi_sq / 4.0 - params.a_min() * volume +
                   (params.b_max() + params.c_max()) * (m1 + m2);
  if (!(K > 0.0)) {
    rep.applicable = false;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.note = "proof constant nonpositive; bound not asserted";
    return rep;
  }
  rep.note = "K=" + std::to_string(K);
  for (size_t i = 0; i + 1 < traj.size(); ++i) {
    if (!std::isfinite(traj[i].ln_mass) || !std::isfinite(traj[i + 1].ln_mass)) continue;
    const double dt = traj[i + 1].t - traj[i].t;
    if (!(dt > 0.0)) continue;
    const double slope = (traj[i + 1].ln_mass - traj[i].ln_mass) / dt;
    fold(rep, slope + K + band * std::abs(K), traj[i].t);
  }
  if (rep.worst_margin == kInf) {
    rep.applicable = false;
    rep.worst_margin = 0.0;
    rep.note = "no finite ln_mass samples";
  }
  finalize(rep);
  return rep;
}

CheckReport check_negative_moment_ode(const Trajectory& traj,
                                      const ModelParams& params, double mu,
                                      double chi1, double chi2, double beta,
                                      double B, double band) {
  CheckReport rep{"negative_moment_ode", false, true, kInf, 0.0, ""};
  const QExponent qe = q_exponent(chi1, chi2, beta, B);
  if (qe.degenerate) {
    throw std::invalid_argument("check_negative_moment_ode: degenerate q");
  }
  const double q = qe.q;
  const double f = eval_f(mu, chi1, chi2, beta, B);
  const double bc = params.b_max() + params.c_max();
  bool degenerate_samples = false;
  for (size_t i = 0; i + 1 < traj.size(); ++i) {
    if (!std::isfinite(traj[i].neg_moment) || !std::isfinite(traj[i + 1].neg_moment) ||
        !std::isfinite(traj[i].neg_moment_shift)) {
      degenerate_samples = true;
      continue;
    }
    const double dt = traj[i + 1].t - traj[i].t;
    if (!(dt > 0.0)) continue;
    const double lhs = (traj[i + 1].neg_moment - traj[i].neg_moment) / (q * dt);
    const double rhs = (f - params.a_min()) * traj[i].neg_moment +
                       bc * traj[i].neg_moment_shift;
    const double scale = std::abs(f - params.a_min()) * traj[i].neg_moment +
                         bc * traj[i].neg_moment_shift;
    fold(rep, rhs + band * scale - lhs, traj[i].t);
  }
  if (rep.worst_margin == kInf) {
    rep.applicable = false;
    rep.worst_margin = 0.0;
    rep.note = degenerate_samples ? "degenerate: zero-density samples"
                                  : "trajectory too short";
    rep.pass = true;
    return rep;
  }
  if (degenerate_samples) rep.note = "some zero-density samples skipped";
  finalize(rep);
  return rep;
}

CheckReport check_negative_moment_decay(const Trajectory& traj,
                                        const ModelParams& params, double volume,
                                        double q, double eps0, double band) {
  CheckReport rep{"negative_moment_decay", false, true, kInf, 0.0, ""};
  if (!(eps0 > 0.0)) {
    rep.applicable = false;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.note = "persistence margin nonpositive";
    return rep;
  }
  if (!(q > 0.0 && q < 1.0)) {
    rep.applicable = false;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.note = "no q < 1 witness; explicit constants unavailable";
    return rep;
  }
  if (traj.size() < 2 || !std::isfinite(traj.front().neg_moment)) {
    rep.applicable = false;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.note = "trajectory too short or degenerate at tau";
    return rep;
  }
  const auto& first = traj.front();
  const double m_star = std::max(first.mass_u, params.a1 * volume / params.b1) +
                        std::max(first.mass_v, params.a2 * volume / params.b2);
  const double c_tau =
      (params.b_max() + params.c_max()) * std::pow(volume, q) * std::pow(m_star, 1.0 - q);
  const double asymptote = 2.0 * q * c_tau / eps0;  // M3 = 0 for q < 1
  for (size_t i = 1; i < traj.size(); ++i) {
    if (!std::isfinite(traj[i].neg_moment)) continue;
    const double envelope =
        std::exp(-eps0 * q * (traj[i].t - first.t) / 2.0) * first.neg_moment +
        asymptote;
    fold(rep, envelope * (1.0 + band) - traj[i].neg_moment, traj[i].t);
  }
  if (rep.worst_margin == kInf) {
    rep.applicable = false;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.note = "no finite samples after tau";
    return rep;
  }
  finalize(rep);
  return rep;
}

PersistenceSummary check_persistence(const Trajectory& traj, double burn_in_time) {
  if (traj.empty() || traj.back().t < burn_in_time) {
    throw std::invalid_argument("check_persistence: trajectory shorter than burn-in");
  }
  PersistenceSummary out;
  out.report = CheckReport{"pointwise_persistence", false, true, kInf, 0.0, ""};
  const size_t half = traj.size() / 2;
  double m0 = kInf, m1 = 0.0, m2 = 0.0, m3 = 0.0;
  for (size_t i = half; i < traj.size(); ++i) {
    m0 = std::min(m0, traj[i].min_uv);
    m1 = std::max(m1, traj[i].neg_moment);
    m2 = std::max(m2, traj[i].lp_moment);
    m3 = std::max(m3, traj[i].holder_seminorm);
  }
  out.m0_star = m0;
  out.m1_star = m1;
  out.m2_star = m2;
  out.m3_star = m3;
  out.report.worst_margin = m0;
  out.report.worst_time = traj.back().t;
  out.report.pass = m0 > 0.0;
  return out;
}

CheckReport check_delta0_bound(const Trajectory& traj, double delta0) {
  CheckReport rep{"delta0_lower_bound", false, true, kInf, 0.0, ""};
  for (const auto& r : traj) {
    fold(rep, r.delta0_ratio - delta0 + 1e-12, r.t);
  }
  if (rep.worst_margin == kInf) {
    rep.applicable = false;
    rep.worst_margin = 0.0;
  }
  finalize(rep);
  return rep;
}

CheckReport check_dirichlet_bound(const Trajectory& traj, double mu,
                                  double volume, double band) {
  CheckReport rep{"dirichlet_quotient_bound", false, true, kInf, 0.0, ""};
  for (const auto& r : traj) {
    fold(rep, mu * volume * (1.0 + band) - r.dirichlet_quotient, r.t);
  }
  if (rep.worst_margin == kInf) {
    rep.applicable = false;
    rep.worst_margin = 0.0;
  }
  finalize(rep);
  return rep;
}

CheckReport check_moment_interpolation(const Trajectory& traj, double volume,
                                       double q, double band) {
  CheckReport rep{"moment_interpolation", false, true, kInf, 0.0, ""};
  for (const auto& r : traj) {
    if (!std::isfinite(r.neg_moment)) continue;
    const double holder = std::pow(r.mass_combined, q / (q + 1.0)) *
                          std::pow(r.neg_moment, 1.0 / (q + 1.0));
    fold(rep, holder + band * volume - volume, r.t);
  }
  if (rep.worst_margin == kInf) {
    rep.applicable = false;
    rep.worst_margin = 0.0;
  }
  finalize(rep);
  return rep;
}

}  // namespace chemolab
