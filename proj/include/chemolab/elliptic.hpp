#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>

#include "chemolab/grid.hpp"

namespace chemolab {

/// The eleven positive system constants.
struct ModelParams {
  double chi1 = 1.0, chi2 = 1.0;
  double a1 = 1.0, a2 = 1.0;
  double b1 = 1.0, b2 = 1.0;
  double c1 = 1.0, c2 = 1.0;
  double mu = 1.0, nu = 1.0, lambda = 1.0;

  void validate() const;

  double a_min() const { return std::min(a1, a2); }
  double a_max() const { return std::max(a1, a2); }
  double b_min() const { return std::min(b1, b2); }
  double b_max() const { return std::max(b1, b2); }
  double c_min() const { return std::min(c1, c2); }
  double c_max() const { return std::max(c1, c2); }
};

/// Factorized representation of (-Lap_h + mu I). The assembled operator is
/// certified to be an M-matrix at construction: positive diagonal,
/// nonpositive off-diagonals, diagonal dominance with margin mu.
class HelmholtzSolver {
 public:
  enum class Mode { automatic, direct, iterative };

  HelmholtzSolver(const Grid& grid, double mu, double tol = 1e-12,
                  Mode mode = Mode::automatic);

  const Grid& grid() const { return grid_; }
  double mu() const { return mu_; }
  double tolerance() const { return tol_; }
  bool direct() const { return direct_; }

  /// Solves (-Lap_h + mu I) x = rhs. Throws on iterative non-convergence.
  Array solve(const Array& rhs) const;

  const Eigen::SparseMatrix<double>& op() const { return op_; }

 private:
  Grid grid_;
  double mu_;
  double tol_;
  bool direct_;
  Eigen::SparseMatrix<double> op_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
  std::shared_ptr<Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                           Eigen::Lower | Eigen::Upper>>
      cg_;
};

struct WSolution {
  ScalarField w;
  bool degenerate = false;  // all-zero source, w identically 0
};

/// Solves 0 = Lap w - mu w + nu u + lambda v with Neumann boundary.
/// Requires u, v >= 0 entrywise; positive sources give w > 0 everywhere.
WSolution solve_w(const HelmholtzSolver& solver, const ScalarField& u,
                  const ScalarField& v, const ModelParams& params);

/// ||(-Lap_h + mu) w - (nu u + lambda v)||_inf
double residual(const ScalarField& w, const ScalarField& u,
                const ScalarField& v, const ModelParams& params);

/// Discrete analog of the lower-bound constant in min w >= delta0 * int(u+v):
/// min(nu,lambda) times the smallest entry of the discrete Green matrix of
/// (-Lap_h + mu). Guarded to grids with at most 20000 cells.
double discrete_delta0(const Grid& grid, const ModelParams& params);

/// Cached variant keyed on (grid, mu, nu, lambda).
double discrete_delta0_cached(const Grid& grid, const ModelParams& params);

/// Quadrature of |grad w|^2 / w^2 with face gradients and harmonic-mean
/// face values of w. Requires w > 0 everywhere.
double dirichlet_quotient(const ScalarField& w);

}  // namespace chemolab
