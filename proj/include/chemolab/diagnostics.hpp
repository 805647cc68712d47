#pragma once

#include <string>
#include <vector>

#include "chemolab/elliptic.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

struct DiagnosticsConfig {
  double p = 0.0;      // L^p exponent; 0 means "use 3*dim + 1"
  double q = 0.5;      // negative-moment exponent
  double theta = 0.0;  // Holder exponent; 0 means "use dim / (2p) / 2"
  int cadence = 1;     // record every k steps
  double band = 0.05;  // discretization allowance for inequality checks
  double burn_in_fraction = 0.5;

  double effective_p(int dim) const { return p > 0.0 ? p : 3.0 * dim + 1.0; }
  double effective_theta(int dim) const {
    return theta > 0.0 ? theta : 0.5 * dim / (2.0 * effective_p(dim));
  }
  void validate(int dim) const;
};

/// One time sample of every monitored functional. `neg_moment_shift`
/// (int (u+v)^{1-q}, needed by the moment ODE check) is carried alongside
/// but is not part of the CSV row schema.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double mass_combined = 0.0;
  double lp_moment = 0.0;
  double neg_moment = 0.0;
  double ln_mass = 0.0;
  double min_w = 0.0;
  double max_uv = 0.0;
  double min_uv = 0.0;
  double dirichlet_quotient = 0.0;
  double holder_seminorm = 0.0;
  double delta0_ratio = 0.0;

  double neg_moment_shift = 0.0;

  bool operator==(const DiagnosticsRecord&) const = default;
};

using Trajectory = std::vector<DiagnosticsRecord>;

DiagnosticsRecord record(const State& state, const ModelParams& params,
                         const DiagnosticsConfig& config);

struct CheckReport {
  std::string name;
  bool pass = false;
  bool applicable = true;  // false: hypotheses not met, reported not-applicable
  double worst_margin = 0.0;  // nonnegative means pass
  double worst_time = 0.0;
  std::string note;
};

/// mass_u(t) <= max{mass_u(tau), a1 |O| / b1} (1 + band) for all t, and the
/// tail mean (last 20%) <= a1 |O| / b1 (1 + band); symmetric for v.
CheckReport check_mass_upper(const Trajectory& traj, const ModelParams& params,
                             double volume, double band);

/// Forward difference quotients of int ln(u+v) stay above -K - band |K| with
/// K = mu |O| max(chi1^2, chi2^2) / 4 - a_min |O| + (b_max + c_max)(m1* + m2*).
CheckReport check_ln_mass_slope(const Trajectory& traj, const ModelParams& params,
                                double volume, double band);

/// (1/q) dX/dt <= (f - a_min) X + (b_max + c_max) int (u+v)^{1-q}, with
/// q tied to (beta, B). The trajectory must have been recorded at this q.
CheckReport check_negative_moment_ode(const Trajectory& traj,
                                      const ModelParams& params, double mu,
                                      double chi1, double chi2, double beta,
                                      double B, double band);

/// Explicit q < 1 envelope: X(t) <= exp(-eps0 q (t - tau) / 2) X(tau)
/// + 2 q C_tau / eps0 with C_tau = (b_max + c_max) |O|^q m*(tau)^{1-q}.
CheckReport check_negative_moment_decay(const Trajectory& traj,
                                        const ModelParams& params, double volume,
                                        double q, double eps0, double band);

/// Empirical M0* = min of min_uv over the trailing half of the samples;
/// M1*-M3* analogs are tail maxima of neg_moment, lp_moment, holder_seminorm.
struct PersistenceSummary {
  CheckReport report;
  double m0_star = 0.0, m1_star = 0.0, m2_star = 0.0, m3_star = 0.0;
};

PersistenceSummary check_persistence(const Trajectory& traj, double burn_in_time);

/// delta0_ratio >= delta0 - 1e-12 on every record.
CheckReport check_delta0_bound(const Trajectory& traj, double delta0);

/// dirichlet_quotient <= mu |O| (1 + band) on every record.
CheckReport check_dirichlet_bound(const Trajectory& traj, double mu,
                                  double volume, double band);

/// |O| <= mass^{q/(q+1)} neg_moment^{1/(q+1)} + band |O| on every record.
CheckReport check_moment_interpolation(const Trajectory& traj, double volume,
                                       double q, double band);

}  // namespace chemolab
