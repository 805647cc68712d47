#pragma once

#include <memory>

#include "chemolab/diagnostics.hpp"
#include "chemolab/elliptic.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

/// Donor-cell upwind flux F = chi * rho_upwind * (grad w)_face / w_face with
/// harmonic-mean face values of w; boundary faces 0. Requires w > 0.
FaceField chemotactic_flux(const ScalarField& density, const ScalarField& w,
                           double chi);

/// Lotka-Volterra rates split for the Patankar step.
struct ReactionRates {
  Array growth_u, loss_u;  // a1 u and b1 u + c1 v
  Array growth_v, loss_v;  // a2 v and b2 v + c2 u
};

ReactionRates reaction_rates(const ScalarField& u, const ScalarField& v,
                             const ModelParams& params);

/// Pointwise net rates u (a1 - b1 u - c1 v), v (a2 - b2 v - c2 u).
Array net_rate_u(const ScalarField& u, const ScalarField& v, const ModelParams& params);
Array net_rate_v(const ScalarField& u, const ScalarField& v, const ModelParams& params);

/// IMEX time stepper: explicit upwind chemotaxis, implicit diffusion,
/// Patankar reactions, then a fresh w-solve so the state stays consistent.
class Stepper {
 public:
  Stepper(const Grid& grid, const ModelParams& params, const StepControl& control);

  /// Solves w from (u0, v0) and assembles the initial state at t = 0.
  State initialize(const ScalarField& u0, const ScalarField& v0) const;

  double stable_dt(const State& state) const;

  /// Advances by stable_dt(state). Throws on invariant violations.
  void step(State& state) const;

  const ModelParams& params() const { return params_; }
  const StepControl& control() const { return control_; }
  const HelmholtzSolver& w_solver() const { return *w_solver_; }

 private:
  Grid grid_;
  ModelParams params_;
  StepControl control_;
  std::shared_ptr<HelmholtzSolver> w_solver_;
  // Diffusion factorization cache: (I - dt Lap_h) for the last dt used.
  mutable std::shared_ptr<HelmholtzSolver> diffusion_;
  mutable double diffusion_dt_ = -1.0;

  const HelmholtzSolver& diffusion_solver(double dt) const;
};

struct RunResult {
  StopReason reason = StopReason::reached_final_time;
  State final_state;
  Trajectory trajectory;
  std::string error;  // populated on solver_failure
};

/// Steps from (u0, v0) until t_final or a guard fires, recording diagnostics
/// at the configured cadence (plus the initial and final states).
/// Requires int(u0) > 0 and int(v0) > 0 unless allow_single_species.
RunResult run(const Grid& grid, const ScalarField& u0, const ScalarField& v0,
              const ModelParams& params, const StepControl& control,
              double t_final, const Guards& guards,
              const DiagnosticsConfig& diag, bool allow_single_species = false);

}  // namespace chemolab
