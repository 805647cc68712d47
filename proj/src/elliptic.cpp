#include "chemolab/elliptic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace chemolab {

void ModelParams::validate() const {
  const double vals[] = {chi1, chi2, a1, a2, b1, b2, c1, c2, mu, nu, lambda};
  const char* names[] = {"chi1", "chi2", "a1", "a2", "b1", "b2",
                         "c1",   "c2",   "mu", "nu", "lambda"};
  for (int i = 0; i < 11; ++i) {
    if (!(vals[i] > 0.0) || !std::isfinite(vals[i])) {
      throw std::invalid_argument(std::string("ModelParams: ") + names[i] +
                                  " must be a positive constant");
    }
  }
}

namespace {

constexpr Eigen::Index kDirectLimit = 250000;

Eigen::SparseMatrix<double> assemble_helmholtz(const Grid& g, double mu) {
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  const double ix2 = 1.0 / (g.spacing[0] * g.spacing[0]);
  const double iy2 = g.dim == 2 ? 1.0 / (g.spacing[1] * g.spacing[1]) : 0.0;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(g.n_cells()) * 5);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Index c = g.index(i, j);
      double diag = mu;
      if (i > 0) {
        trips.emplace_back(c, g.index(i - 1, j), -ix2);
        diag += ix2;
      }
      if (i < nx - 1) {
        trips.emplace_back(c, g.index(i + 1, j), -ix2);
        diag += ix2;
      }
      if (g.dim == 2) {
        if (j > 0) {
          trips.emplace_back(c, g.index(i, j - 1), -iy2);
          diag += iy2;
        }
        if (j < ny - 1) {
          trips.emplace_back(c, g.index(i, j + 1), -iy2);
          diag += iy2;
        }
      }
      trips.emplace_back(c, c, diag);
    }
  }
  Eigen::SparseMatrix<double> op(g.n_cells(), g.n_cells());
  op.setFromTriplets(trips.begin(), trips.end());
  op.makeCompressed();
  return op;
}

void certify_m_matrix(const Eigen::SparseMatrix<double>& op, double mu) {
  for (int k = 0; k < op.outerSize(); ++k) {
    double diag = 0.0;
    double offsum = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(op, k); it; ++it) {
      if (it.row() == it.col()) {
        diag = it.value();
      } else {
        if (it.value() > 0.0) {
          throw std::logic_error("HelmholtzSolver: positive off-diagonal");
        }
        offsum += -it.value();
      }
    }
    if (!(diag > 0.0) || diag - offsum < 0.5 * mu) {
      throw std::logic_error("HelmholtzSolver: diagonal dominance lost");
    }
  }
}

}  // namespace

HelmholtzSolver::HelmholtzSolver(const Grid& grid, double mu, double tol,
                                 Mode mode)
    : grid_(grid), mu_(mu), tol_(tol) {
  if (!(mu > 0.0)) throw std::invalid_argument("HelmholtzSolver: mu must be > 0");
  op_ = assemble_helmholtz(grid, mu);
  certify_m_matrix(op_, mu);
  direct_ = mode == Mode::direct ||
            (mode == Mode::automatic && grid.n_cells() <= kDirectLimit);
  if (direct_) {
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    ldlt_->compute(op_);
    if (ldlt_->info() != Eigen::Success) {
      throw std::runtime_error("HelmholtzSolver: factorization failed");
    }
  } else {
    cg_ = std::make_shared<Eigen::ConjugateGradient<
        Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>>();
    cg_->setTolerance(tol * 1e-2);
    cg_->setMaxIterations(10 * grid.n_cells());
    cg_->compute(op_);
  }
}

Array HelmholtzSolver::solve(const Array& rhs) const {
  if (rhs.size() != grid_.n_cells()) {
    throw std::invalid_argument("HelmholtzSolver::solve: rhs size mismatch");
  }
  Eigen::VectorXd x;
  if (direct_) {
    x = ldlt_->solve(rhs.matrix());
  } else {
    x = cg_->solve(rhs.matrix());
    if (cg_->info() != Eigen::Success) {
      const double res = (op_ * x - rhs.matrix()).lpNorm<Eigen::Infinity>();
      throw std::runtime_error(
          "HelmholtzSolver: CG did not converge, residual = " +
          std::to_string(res));
    }
  }
  return x.array();
}

WSolution solve_w(const HelmholtzSolver& solver, const ScalarField& u,
                  const ScalarField& v, const ModelParams& params) {
  require_finite(u, "solve_w(u)");
  require_finite(v, "solve_w(v)");
  if ((u.data < 0.0).any() || (v.data < 0.0).any()) {
    throw std::invalid_argument("solve_w: sources must be nonnegative");
  }
  if (u.grid != solver.grid() || v.grid != solver.grid()) {
    throw std::invalid_argument("solve_w: grid mismatch");
  }
  Array rhs = params.nu * u.data + params.lambda * v.data;
  WSolution out;
  out.w.grid = solver.grid();
  if (rhs.maxCoeff() == 0.0) {
    out.w.data = Array::Zero(rhs.size());
    out.degenerate = true;
    return out;
  }
  out.w.data = solver.solve(rhs);
#ifndef NDEBUG
  if (solver.grid().n_cells() <= 20000) {
    const double d0 = discrete_delta0_cached(solver.grid(), params);
    const double mass = (u.data + v.data).sum() * solver.grid().cell_volume();
    if (out.w.data.minCoeff() < d0 * mass - 1e-12) {
      throw std::logic_error("solve_w: discrete Green lower bound violated");
    }
  }
#endif
  return out;
}

double residual(const ScalarField& w, const ScalarField& u,
                const ScalarField& v, const ModelParams& params) {
  ScalarField lap = laplacian_neumann(w);
  Array r = -lap.data + params.mu * w.data -
            (params.nu * u.data + params.lambda * v.data);
  return r.abs().maxCoeff();
}

double discrete_delta0(const Grid& grid, const ModelParams& params) {
  if (grid.n_cells() > 20000) {
    throw std::invalid_argument(
        "discrete_delta0: grid too large (limit 20000 cells)");
  }
  HelmholtzSolver solver(grid, params.mu);
  const double inv_vol = 1.0 / grid.cell_volume();
  double g_min = std::numeric_limits<double>::infinity();
  Array rhs = Array::Zero(grid.n_cells());
  for (Eigen::Index j = 0; j < grid.n_cells(); ++j) {
    rhs[j] = inv_vol;
    Array col = solver.solve(rhs);
    g_min = std::min(g_min, col.minCoeff());
    rhs[j] = 0.0;
  }
  return std::min(params.nu, params.lambda) * g_min;
}

double discrete_delta0_cached(const Grid& grid, const ModelParams& params) {
  using Key = std::tuple<int, int, int, double, double, double, double, double>;
  static std::map<Key, double> cache;
  static std::mutex m;
  Key key{grid.dim,        grid.cells[0], grid.cells[1], grid.lengths[0],
          grid.lengths[1], params.mu,     params.nu,     params.lambda};
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double d0 = discrete_delta0(grid, params);
  std::lock_guard<std::mutex> lock(m);
  cache.emplace(key, d0);
  return d0;
}

double dirichlet_quotient(const ScalarField& w) {
  require_finite(w, "dirichlet_quotient");
  if ((w.data <= 0.0).any()) {
    throw std::invalid_argument("dirichlet_quotient: w must be positive");
  }
  const Grid& g = w.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  const double vol = g.cell_volume();
  double total = 0.0;
  auto face_term = [&](double wl, double wr, double h) {
    const double grad = (wr - wl) / h;
    const double wf = 2.0 * wl * wr / (wl + wr);  // harmonic mean
    const double ratio = grad / wf;
    return ratio * ratio * vol;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      total += face_term(w.data[g.index(i - 1, j)], w.data[g.index(i, j)],
                         g.spacing[0]);
    }
  }
  if (g.dim == 2) {
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        total += face_term(w.data[g.index(i, j - 1)], w.data[g.index(i, j)],
                           g.spacing[1]);
      }
    }
  }
  return total;
}

}  // namespace chemolab
