#include "chemolab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace chemolab {

void StepControl::validate() const {
  if (!(dt_max > 0.0)) throw std::invalid_argument("StepControl: dt_max must be > 0");
  if (!(cfl_advection > 0.0 && cfl_advection <= 1.0) ||
      !(cfl_reaction > 0.0 && cfl_reaction <= 1.0)) {
    throw std::invalid_argument("StepControl: CFL factors must be in (0,1]");
  }
  if (positivity_floor < 0.0) {
    throw std::invalid_argument("StepControl: positivity_floor must be >= 0");
  }
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::reached_final_time: return "reached_final_time";
    case StopReason::sup_blowup: return "sup_blowup";
    case StopReason::mass_vanishing: return "mass_vanishing";
    case StopReason::solver_failure: return "solver_failure";
  }
  return "unknown";
}

namespace {

// Face velocity (grad w) / w_face with harmonic-mean w; 0 on boundary faces.
FaceField face_velocity(const ScalarField& w) {
  const Grid& g = w.grid;
  FaceField vel = make_face_field(g);
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  auto v = [](double wl, double wr, double h) {
    const double wf = 2.0 * wl * wr / (wl + wr);
    return (wr - wl) / (h * wf);
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      vel.faces[0][vel.face_index(0, i, j)] =
          v(w.data[g.index(i - 1, j)], w.data[g.index(i, j)], g.spacing[0]);
    }
  }
  if (g.dim == 2) {
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        vel.faces[1][vel.face_index(1, i, j)] =
            v(w.data[g.index(i, j - 1)], w.data[g.index(i, j)], g.spacing[1]);
      }
    }
  }
  return vel;
}

double max_abs_velocity(const FaceField& vel) {
  double m = vel.faces[0].size() ? vel.faces[0].abs().maxCoeff() : 0.0;
  if (vel.faces[1].size()) m = std::max(m, vel.faces[1].abs().maxCoeff());
  return m;
}

}  // namespace

FaceField chemotactic_flux(const ScalarField& density, const ScalarField& w,
                           double chi) {
  require_finite(density, "chemotactic_flux(density)");
  require_finite(w, "chemotactic_flux(w)");
  if ((w.data <= 0.0).any()) {
    throw std::invalid_argument("chemotactic_flux: w must be positive");
  }
  const Grid& g = density.grid;
  FaceField vel = face_velocity(w);
  FaceField flux = make_face_field(g);
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const Eigen::Index f = flux.face_index(0, i, j);
      const double u = vel.faces[0][f];
      const double donor =
          u >= 0.0 ? density.data[g.index(i - 1, j)] : density.data[g.index(i, j)];
      flux.faces[0][f] = chi * donor * u;
    }
  }
  if (g.dim == 2) {
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Eigen::Index f = flux.face_index(1, i, j);
        const double u = vel.faces[1][f];
        const double donor =
            u >= 0.0 ? density.data[g.index(i, j - 1)] : density.data[g.index(i, j)];
        flux.faces[1][f] = chi * donor * u;
      }
    }
  }
  return flux;
}

ReactionRates reaction_rates(const ScalarField& u, const ScalarField& v,
                             const ModelParams& params) {
  if ((u.data < 0.0).any() || (v.data < 0.0).any()) {
    throw std::invalid_argument("reaction_rates: densities must be nonnegative");
  }
  ReactionRates r;
  r.growth_u = params.a1 * u.data;
  r.loss_u = params.b1 * u.data + params.c1 * v.data;
  r.growth_v = params.a2 * v.data;
  r.loss_v = params.b2 * v.data + params.c2 * u.data;
  return r;
}

Array net_rate_u(const ScalarField& u, const ScalarField& v, const ModelParams& p) {
  return u.data * (p.a1 - p.b1 * u.data - p.c1 * v.data);
}

Array net_rate_v(const ScalarField& u, const ScalarField& v, const ModelParams& p) {
  return v.data * (p.a2 - p.b2 * v.data - p.c2 * u.data);
}

Stepper::Stepper(const Grid& grid, const ModelParams& params,
                 const StepControl& control)
    : grid_(grid), params_(params), control_(control) {
  params_.validate();
  control_.validate();
  w_solver_ = std::make_shared<HelmholtzSolver>(grid, params.mu);
}

State Stepper::initialize(const ScalarField& u0, const ScalarField& v0) const {
  State s;
  s.t = 0.0;
  s.u = u0;
  s.v = v0;
  s.w = solve_w(*w_solver_, u0, v0, params_).w;
  return s;
}

double Stepper::stable_dt(const State& state) const {
  double dt = control_.dt_max;
  if (!control_.disable_chemotaxis) {
    const double chi = std::max(params_.chi1, params_.chi2);
    const double speed = chi * max_abs_velocity(face_velocity(state.w));
    const double h = grid_.dim == 2 ? std::min(grid_.spacing[0], grid_.spacing[1])
                                    : grid_.spacing[0];
    if (speed > 0.0) dt = std::min(dt, control_.cfl_advection * h / speed);
  }
  if (!control_.disable_reactions) {
    dt = std::min(dt, control_.cfl_reaction / params_.a_max());
  }
  if (!(dt > 0.0)) throw std::runtime_error("stable_dt: nonpositive step");
  return dt;
}

const HelmholtzSolver& Stepper::diffusion_solver(double dt) const {
  // (I - dt Lap_h) x = rhs is the Helmholtz operator with mu = 1/dt, scaled.
  if (!diffusion_ || diffusion_dt_ != dt) {
    diffusion_ = std::make_shared<HelmholtzSolver>(grid_, 1.0 / dt);
    diffusion_dt_ = dt;
  }
  return *diffusion_;
}

void Stepper::step(State& state) const {
  const double dt = stable_dt(state);

  // (i) w is already consistent with the incoming (u, v).
  // (ii) explicit upwind chemotaxis.
  Array u_adv = state.u.data;
  Array v_adv = state.v.data;
  if (!control_.disable_chemotaxis) {
    const ScalarField div_u =
        divergence_faces(chemotactic_flux(state.u, state.w, params_.chi1));
    const ScalarField div_v =
        divergence_faces(chemotactic_flux(state.v, state.w, params_.chi2));
    u_adv -= dt * div_u.data;
    v_adv -= dt * div_v.data;
  }

  // (iii) implicit diffusion: (I - dt Lap) x = u_adv, solved as
  // (-Lap + (1/dt) I) x = u_adv / dt.
  const HelmholtzSolver& diff = diffusion_solver(dt);
  Array u_dif = diff.solve(u_adv / dt);
  Array v_dif = diff.solve(v_adv / dt);

  // (iv) Patankar reaction update: production explicit, loss as a divisor.
  if (!control_.disable_reactions) {
    const Array loss_u = params_.b1 * u_dif + params_.c1 * v_dif;
    const Array loss_v = params_.b2 * v_dif + params_.c2 * u_dif;
    Array u_new = (u_dif + dt * params_.a1 * u_dif) / (1.0 + dt * loss_u);
    Array v_new = (v_dif + dt * params_.a2 * v_dif) / (1.0 + dt * loss_v);
    u_dif = std::move(u_new);
    v_dif = std::move(v_new);
  }

  state.u.data = std::move(u_dif);
  state.v.data = std::move(v_dif);
  if (control_.positivity_floor > 0.0) {
    state.u.data = state.u.data.max(control_.positivity_floor);
    state.v.data = state.v.data.max(control_.positivity_floor);
  }

  require_finite(state.u, "step(u)");
  require_finite(state.v, "step(v)");
  if (state.u.data.minCoeff() < 0.0 || state.v.data.minCoeff() < 0.0) {
    throw std::runtime_error("step: positivity lost");
  }

  state.w = solve_w(*w_solver_, state.u, state.v, params_).w;
  state.t += dt;
}

RunResult run(const Grid& grid, const ScalarField& u0, const ScalarField& v0,
              const ModelParams& params, const StepControl& control,
              double t_final, const Guards& guards,
              const DiagnosticsConfig& diag, bool allow_single_species) {
  require_finite(u0, "run(u0)");
  require_finite(v0, "run(v0)");
  if ((u0.data < 0.0).any() || (v0.data < 0.0).any()) {
    throw std::invalid_argument("run: initial data must be nonnegative");
  }
  const double mass_u0 = integrate(u0);
  const double mass_v0 = integrate(v0);
  if (!allow_single_species && (mass_u0 <= 0.0 || mass_v0 <= 0.0)) {
    throw std::invalid_argument(
        "run: both species need positive initial mass (set allow_single_species "
        "for the one-species reductions)");
  }
  if (mass_u0 + mass_v0 <= 0.0) {
    throw std::invalid_argument("run: total initial mass must be positive");
  }

  Stepper stepper(grid, params, control);
  RunResult result;
  diag.validate(grid.dim);

  const double sup0 = (u0.data + v0.data).maxCoeff();
  const double sup_guard = guards.sup_factor * sup0;
  const double mass_guard = guards.mass_factor * (mass_u0 + mass_v0);

  try {
    State state = stepper.initialize(u0, v0);
    result.trajectory.push_back(record(state, params, diag));
    long step_count = 0;
    while (state.t < t_final) {
      stepper.step(state);
      ++step_count;
      const Array uv = state.u.data + state.v.data;
      const double sup = uv.maxCoeff();
      const double mass = uv.sum() * grid.cell_volume();
      const bool done = state.t >= t_final;
      if (step_count % diag.cadence == 0 || done || sup > sup_guard ||
          mass < mass_guard) {
        result.trajectory.push_back(record(state, params, diag));
      }
      if (sup > sup_guard) {
        result.reason = StopReason::sup_blowup;
        result.final_state = std::move(state);
        return result;
      }
      if (mass < mass_guard) {
        result.reason = StopReason::mass_vanishing;
        result.final_state = std::move(state);
        return result;
      }
    }
    result.reason = StopReason::reached_final_time;
    result.final_state = std::move(state);
  } catch (const std::runtime_error& e) {
    result.reason = StopReason::solver_failure;
    result.error = e.what();
  }
  return result;
}

}  // namespace chemolab
