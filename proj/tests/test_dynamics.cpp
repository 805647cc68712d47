#include <doctest.h>

#include <cmath>
#include <random>

#include "chemolab/dynamics.hpp"

using namespace chemolab;

namespace {

ScalarField bump(const Grid& g, double baseline, double amplitude,
                 double center, double width) {
  ScalarField f = make_field(g);
  for (int i = 0; i < g.cells[0]; ++i) {
    const double x = g.center(0, i);
    f.data[i] = baseline +
                amplitude * std::exp(-(x - center) * (x - center) /
                                     (2.0 * width * width));
  }
  return f;
}

}  // namespace

TEST_CASE("chemotactic_flux: hand-evaluated upwind stencil") {
  const Grid g = build_grid(1, {1.0}, {3});
  const double h = g.spacing[0];
  ScalarField w = make_field(g);
  w.data << 1.0, 2.0, 1.0;
  const ScalarField u = make_field(g, 1.0);
  const FaceField flux = chemotactic_flux(u, w, 1.0);
  // w_face = harmonic mean(1,2) = 4/3; velocity = (1/h)/(4/3); donors are
  // the outer cells with density 1, so flux = +-3/(4h).
  CHECK(flux.faces[0][0] == 0.0);
  CHECK(flux.faces[0][3] == 0.0);
  CHECK(flux.faces[0][1] == doctest::Approx(3.0 / (4.0 * h)).epsilon(1e-14));
  CHECK(flux.faces[0][2] == doctest::Approx(-3.0 / (4.0 * h)).epsilon(1e-14));
}

TEST_CASE("chemotactic_flux: trivial zeros and preconditions") {
  const Grid g = build_grid(1, {1.0}, {16});
  const ScalarField u = bump(g, 0.1, 1.0, 0.5, 0.1);
  CHECK(chemotactic_flux(u, make_field(g, 2.0), 1.5).faces[0].abs().maxCoeff() ==
        0.0);
  ScalarField w = bump(g, 1.0, 0.5, 0.3, 0.1);
  CHECK(chemotactic_flux(make_field(g, 0.0), w, 1.5).faces[0].abs().maxCoeff() ==
        0.0);
  CHECK_THROWS(chemotactic_flux(u, make_field(g, 0.0), 1.0));
}

TEST_CASE("reaction_rates: logistic fixed points and arithmetic") {
  const Grid g = build_grid(1, {1.0}, {8});
  ModelParams p;
  p.a1 = 2.0;
  p.b1 = 1.0;
  p.c1 = 0.5;
  const ScalarField one = make_field(g, 1.0);
  CHECK((net_rate_u(one, one, p) - 0.5).abs().maxCoeff() <= 1e-15);

  ModelParams q;
  const ScalarField fix = make_field(g, q.a1 / q.b1);
  const ScalarField zero = make_field(g, 0.0);
  CHECK(net_rate_u(fix, zero, q).abs().maxCoeff() <= 1e-15);
  CHECK(net_rate_v(zero, fix, q).abs().maxCoeff() <= 1e-15);

  const ReactionRates rates = reaction_rates(one, one, p);
  CHECK((rates.growth_u - p.a1).abs().maxCoeff() <= 1e-15);
  CHECK((rates.loss_u - (p.b1 + p.c1)).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("stable_dt: reaction cap, advective cap, resolution scaling") {
  ModelParams p;
  StepControl ctl;
  ctl.dt_max = 1.0;

  const Grid g = build_grid(1, {1.0}, {32});
  Stepper stepper(g, p, ctl);
  const State flat = stepper.initialize(make_field(g, 1.0), make_field(g, 1.0));
  CHECK(stepper.stable_dt(flat) == doctest::Approx(0.5).epsilon(1e-14));

  auto advective_dt = [&](int n) {
    const Grid gn = build_grid(1, {1.0}, {n});
    Stepper s(gn, p, ctl);
    const State st = s.initialize(bump(gn, 0.2, 2.0, 0.5, 0.08),
                                  bump(gn, 0.2, 1.0, 0.3, 0.08));
    // oracle: recompute the max face speed from the public flux with unit
    // density, which then equals the signed velocity
    const FaceField vel =
        chemotactic_flux(make_field(gn, 1.0), st.w, std::max(p.chi1, p.chi2));
    const double speed = vel.faces[0].abs().maxCoeff();
    const double expect =
        std::min({ctl.dt_max, ctl.cfl_advection * gn.spacing[0] / speed,
                  ctl.cfl_reaction / p.a_max()});
    CHECK(s.stable_dt(st) == doctest::Approx(expect).epsilon(1e-12));
    return ctl.cfl_advection * gn.spacing[0] / speed;
  };
  const double cap64 = advective_dt(64);
  const double cap128 = advective_dt(128);
  CHECK(cap128 / cap64 == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("homogeneous single-species run reaches the logistic fixed point") {
  const Grid g = build_grid(1, {1.0}, {16});
  ModelParams p;
  StepControl ctl;
  Stepper stepper(g, p, ctl);
  State state = stepper.initialize(make_field(g, 0.5), make_field(g, 0.0));
  for (int k = 0; k < 10000 && std::abs(state.u.data[0] - 1.0) > 1e-8; ++k) {
    stepper.step(state);
  }
  CHECK((state.u.data - p.a1 / p.b1).abs().maxCoeff() <= 1e-8);
  CHECK(state.v.data.abs().maxCoeff() == 0.0);
}

TEST_CASE("pure diffusion conserves mass per step") {
  const Grid g = build_grid(1, {1.0}, {64});
  ModelParams p;
  StepControl ctl;
  ctl.disable_chemotaxis = true;
  ctl.disable_reactions = true;
  Stepper stepper(g, p, ctl);
  State state = stepper.initialize(bump(g, 0.1, 2.0, 0.3, 0.05),
                                   bump(g, 0.1, 1.0, 0.7, 0.05));
  double mu_prev = integrate(state.u), mv_prev = integrate(state.v);
  for (int k = 0; k < 200; ++k) {
    stepper.step(state);
    const double mu_now = integrate(state.u), mv_now = integrate(state.v);
    CHECK(std::abs(mu_now - mu_prev) <= 1e-12 * mu_prev);
    CHECK(std::abs(mv_now - mv_prev) <= 1e-12 * mv_prev);
    mu_prev = mu_now;
    mv_prev = mv_now;
  }
}

TEST_CASE("single step matches a dense-matrix replica on 16 cells") {
  const Grid g = build_grid(1, {1.0}, {16});
  const Eigen::Index n = g.n_cells();
  ModelParams p;
  p.chi1 = 1.0;
  p.chi2 = 0.5;
  p.c1 = 0.4;
  p.c2 = 0.6;
  StepControl ctl;
  Stepper stepper(g, p, ctl);
  State state = stepper.initialize(bump(g, 0.2, 1.0, 0.4, 0.08),
                                   bump(g, 0.3, 0.8, 0.6, 0.08));
  const double dt = stepper.stable_dt(state);

  // dense Laplacian from the public stencil
  Eigen::MatrixXd lap(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    ScalarField e = make_field(g, 0.0);
    e.data[j] = 1.0;
    lap.col(j) = laplacian_neumann(e).data.matrix();
  }
  const Eigen::MatrixXd diffusion =
      (Eigen::MatrixXd::Identity(n, n) - dt * lap).inverse();
  const Eigen::MatrixXd helmholtz =
      (p.mu * Eigen::MatrixXd::Identity(n, n) - lap).inverse();

  auto transport = [&](const ScalarField& rho, const ScalarField& w, double chi) {
    ScalarField adv = rho;
    adv.data -= dt * divergence_faces(chemotactic_flux(rho, w, chi)).data;
    return Array((diffusion * adv.data.matrix()).array());
  };
  const Array u_tilde = transport(state.u, state.w, p.chi1);
  const Array v_tilde = transport(state.v, state.w, p.chi2);
  const Array u_ref = (u_tilde + dt * p.a1 * u_tilde) /
                      (1.0 + dt * (p.b1 * u_tilde + p.c1 * v_tilde));
  const Array v_ref = (v_tilde + dt * p.a2 * v_tilde) /
                      (1.0 + dt * (p.b2 * v_tilde + p.c2 * u_tilde));
  const Array w_ref =
      (helmholtz * (p.nu * u_ref + p.lambda * v_ref).matrix()).array();

  stepper.step(state);
  CHECK((state.u.data - u_ref).abs().maxCoeff() <= 1e-13);
  CHECK((state.v.data - v_ref).abs().maxCoeff() <= 1e-13);
  CHECK((state.w.data - w_ref).abs().maxCoeff() <= 1e-13);
  CHECK(state.t == doctest::Approx(dt).epsilon(1e-15));
}

TEST_CASE("Patankar step is structurally positive, no clipping") {
  const Grid g = build_grid(1, {1.0}, {48});
  ModelParams p;
  p.chi1 = p.chi2 = 2.0;
  StepControl ctl;
  CHECK(ctl.positivity_floor == 0.0);
  Stepper stepper(g, p, ctl);
  ScalarField u0 = bump(g, 1e-6, 3.0, 0.25, 0.04);
  ScalarField v0 = bump(g, 1e-6, 2.0, 0.75, 0.04);
  State state = stepper.initialize(u0, v0);
  for (int k = 0; k < 500; ++k) {
    stepper.step(state);
    CHECK(state.u.data.minCoeff() >= 0.0);
    CHECK(state.v.data.minCoeff() >= 0.0);
  }
}

TEST_CASE("run: homogeneous weak coupling matches an ODE oracle") {
  const Grid g = build_grid(1, {1.0}, {16});
  ModelParams p;
  p.b1 = p.b2 = 0.5;
  p.c1 = p.c2 = 0.05;
  StepControl ctl;
  Guards guards;
  DiagnosticsConfig diag;
  diag.cadence = 50;
  const RunResult rr = run(g, make_field(g, 0.4), make_field(g, 0.6), p, ctl,
                           50.0, guards, diag);
  CHECK(rr.reason == StopReason::reached_final_time);

  // RK4 on the spatially homogeneous two-species ODE
  double u = 0.4, v = 0.6;
  const double dt = 1e-4;
  auto fu = [&](double uu, double vv) { return uu * (p.a1 - p.b1 * uu - p.c1 * vv); };
  auto fv = [&](double uu, double vv) { return vv * (p.a2 - p.b2 * vv - p.c2 * uu); };
  for (double t = 0.0; t < 50.0 - dt / 2; t += dt) {
    const double k1u = fu(u, v), k1v = fv(u, v);
    const double k2u = fu(u + dt / 2 * k1u, v + dt / 2 * k1v);
    const double k2v = fv(u + dt / 2 * k1u, v + dt / 2 * k1v);
    const double k3u = fu(u + dt / 2 * k2u, v + dt / 2 * k2v);
    const double k3v = fv(u + dt / 2 * k2u, v + dt / 2 * k2v);
    const double k4u = fu(u + dt * k3u, v + dt * k3v);
    const double k4v = fv(u + dt * k3u, v + dt * k3v);
    u += dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  CHECK(rr.trajectory.back().mass_combined ==
        doctest::Approx((u + v) * g.volume()).epsilon(1e-6));
}

TEST_CASE("run: zero-mass species requires the explicit flag") {
  const Grid g = build_grid(1, {1.0}, {16});
  ModelParams p;
  StepControl ctl;
  Guards guards;
  DiagnosticsConfig diag;
  CHECK_THROWS(run(g, make_field(g, 0.0), make_field(g, 1.0), p, ctl, 1.0,
                   guards, diag));
  const RunResult rr = run(g, make_field(g, 0.0), make_field(g, 1.0), p, ctl,
                           1.0, guards, diag, /*allow_single_species=*/true);
  CHECK(rr.reason == StopReason::reached_final_time);
}

TEST_CASE("StepControl validation") {
  StepControl ctl;
  ctl.dt_max = 0.0;
  CHECK_THROWS(ctl.validate());
  ctl = StepControl{};
  ctl.cfl_advection = 1.5;
  CHECK_THROWS(ctl.validate());
}
