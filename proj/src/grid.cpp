#include "chemolab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chemolab {

Grid build_grid(int dim, const std::vector<double>& lengths,
                const std::vector<int>& cells) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("build_grid: dim must be 1 or 2");
  }
  if (lengths.size() != static_cast<size_t>(dim) ||
      cells.size() != static_cast<size_t>(dim)) {
    throw std::invalid_argument("build_grid: lengths/cells size must match dim");
  }
  Grid g;
  g.dim = dim;
  for (int ax = 0; ax < dim; ++ax) {
    if (!(lengths[ax] > 0.0) || !std::isfinite(lengths[ax])) {
      throw std::invalid_argument("build_grid: lengths must be positive");
    }
    if (cells[ax] < 3) {
      throw std::invalid_argument("build_grid: need at least 3 cells per axis");
    }
    g.lengths[ax] = lengths[ax];
    g.cells[ax] = cells[ax];
    g.spacing[ax] = lengths[ax] / cells[ax];
  }
  return g;
}

ScalarField make_field(const Grid& grid, double value) {
  return ScalarField{grid, Array::Constant(grid.n_cells(), value)};
}

void require_finite(const ScalarField& f, const char* what) {
  if (f.data.size() != f.grid.n_cells()) {
    throw std::invalid_argument(std::string(what) + ": field size mismatch");
  }
  if (!f.data.isFinite().all()) {
    throw std::invalid_argument(std::string(what) + ": field has NaN/Inf");
  }
}

FaceField make_face_field(const Grid& grid) {
  FaceField ff;
  ff.grid = grid;
  const int nx = grid.cells[0];
  const int ny = grid.dim == 2 ? grid.cells[1] : 1;
  ff.faces[0] = Array::Zero(static_cast<Eigen::Index>(nx + 1) * ny);
  ff.faces[1] = grid.dim == 2
                    ? Array::Zero(static_cast<Eigen::Index>(nx) * (ny + 1))
                    : Array();
  return ff;
}

double integrate(const ScalarField& f) {
  require_finite(f, "integrate");
  return f.data.sum() * f.grid.cell_volume();
}

ScalarField laplacian_neumann(const ScalarField& f) {
  require_finite(f, "laplacian_neumann");
  const Grid& g = f.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  ScalarField out = make_field(g);
  const double ix2 = 1.0 / (g.spacing[0] * g.spacing[0]);
  const double iy2 = g.dim == 2 ? 1.0 / (g.spacing[1] * g.spacing[1]) : 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Index c = g.index(i, j);
      const double fc = f.data[c];
      // Mirrored ghosts: the off-grid neighbor equals the cell itself.
      const double fl = i > 0 ? f.data[g.index(i - 1, j)] : fc;
      const double fr = i < nx - 1 ? f.data[g.index(i + 1, j)] : fc;
      double lap = (fl - 2.0 * fc + fr) * ix2;
      if (g.dim == 2) {
        const double fd = j > 0 ? f.data[g.index(i, j - 1)] : fc;
        const double fu = j < ny - 1 ? f.data[g.index(i, j + 1)] : fc;
        lap += (fd - 2.0 * fc + fu) * iy2;
      }
      out.data[c] = lap;
    }
  }
  return out;
}

FaceField gradient_faces(const ScalarField& f) {
  require_finite(f, "gradient_faces");
  const Grid& g = f.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  FaceField ff = make_face_field(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      ff.faces[0][ff.face_index(0, i, j)] =
          (f.data[g.index(i, j)] - f.data[g.index(i - 1, j)]) / g.spacing[0];
    }
  }
  if (g.dim == 2) {
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        ff.faces[1][ff.face_index(1, i, j)] =
            (f.data[g.index(i, j)] - f.data[g.index(i, j - 1)]) / g.spacing[1];
      }
    }
  }
  return ff;
}

namespace {

void check_boundary_faces(const FaceField& flux) {
  const Grid& g = flux.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  for (int j = 0; j < ny; ++j) {
    if (flux.faces[0][flux.face_index(0, 0, j)] != 0.0 ||
        flux.faces[0][flux.face_index(0, nx, j)] != 0.0) {
      throw std::invalid_argument("divergence_faces: nonzero boundary face");
    }
  }
  if (g.dim == 2) {
    for (int i = 0; i < nx; ++i) {
      if (flux.faces[1][flux.face_index(1, i, 0)] != 0.0 ||
          flux.faces[1][flux.face_index(1, i, ny)] != 0.0) {
        throw std::invalid_argument("divergence_faces: nonzero boundary face");
      }
    }
  }
}

}  // namespace

ScalarField divergence_faces(const FaceField& flux) {
  check_boundary_faces(flux);
  const Grid& g = flux.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  ScalarField out = make_field(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double div = (flux.faces[0][flux.face_index(0, i + 1, j)] -
                    flux.faces[0][flux.face_index(0, i, j)]) /
                   g.spacing[0];
      if (g.dim == 2) {
        div += (flux.faces[1][flux.face_index(1, i, j + 1)] -
                flux.faces[1][flux.face_index(1, i, j)]) /
               g.spacing[1];
      }
      out.data[g.index(i, j)] = div;
    }
  }
  require_finite(out, "divergence_faces");
  return out;
}

double holder_seminorm(const ScalarField& f, double theta,
                       const std::vector<int>& strides) {
  require_finite(f, "holder_seminorm");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("holder_seminorm: theta must be in (0,1)");
  }
  if (strides.empty()) {
    throw std::invalid_argument("holder_seminorm: strides must be nonempty");
  }
  const Grid& g = f.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  double best = 0.0;
  for (int s : strides) {
    if (s <= 0) throw std::invalid_argument("holder_seminorm: strides must be positive");
    const double dx = std::pow(s * g.spacing[0], theta);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i + s < nx; ++i) {
        best = std::max(best, std::abs(f.data[g.index(i + s, j)] -
                                       f.data[g.index(i, j)]) /
                                  dx);
      }
    }
    if (g.dim == 2) {
      const double dy = std::pow(s * g.spacing[1], theta);
      for (int j = 0; j + s < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          best = std::max(best, std::abs(f.data[g.index(i, j + s)] -
                                         f.data[g.index(i, j)]) /
                                    dy);
        }
      }
    }
  }
  return best;
}

std::vector<int> default_strides(const Grid& grid) {
  int widest = grid.cells[0];
  if (grid.dim == 2) widest = std::max(widest, grid.cells[1]);
  std::vector<int> s;
  for (int k = 1; k < widest; k *= 2) s.push_back(k);
  return s;
}

}  // namespace chemolab
