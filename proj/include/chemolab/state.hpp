#pragma once

#include "chemolab/grid.hpp"

namespace chemolab {

/// One time sample of the coupled system. w is kept consistent with (u, v):
/// after every step it is re-solved from the updated densities.
struct State {
  double t = 0.0;
  ScalarField u, v, w;
};

struct StepControl {
  double dt_max = 0.05;
  double cfl_advection = 0.5;
  double cfl_reaction = 0.5;
  double positivity_floor = 0.0;  // 0: no clipping, positivity is structural
  // Test-only switches; the production scheme always runs both terms.
  bool disable_chemotaxis = false;
  bool disable_reactions = false;

  void validate() const;
};

enum class StopReason {
  reached_final_time,
  sup_blowup,
  mass_vanishing,
  solver_failure,
};

const char* to_string(StopReason r);

struct Guards {
  double sup_factor = 1e6;    // stop when ||u+v||_inf > factor * initial sup
  double mass_factor = 1e-12; // stop when int(u+v) < factor * initial mass
};

}  // namespace chemolab
