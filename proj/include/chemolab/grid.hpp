#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace chemolab {

using Array = Eigen::ArrayXd;

/// Cell-centered rectangular mesh (1D interval or 2D rectangle).
/// Neumann boundaries are encoded by mirrored ghost cells, so every
/// discrete operator below has exact zero flux through the boundary.
struct Grid {
  int dim = 1;
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<int, 2> cells{1, 1};
  std::array<double, 2> spacing{1.0, 1.0};

  Eigen::Index n_cells() const {
    return static_cast<Eigen::Index>(cells[0]) * cells[1];
  }
  double cell_volume() const {
    return dim == 1 ? spacing[0] : spacing[0] * spacing[1];
  }
  double volume() const { return dim == 1 ? lengths[0] : lengths[0] * lengths[1]; }
  Eigen::Index index(int i, int j = 0) const {
    return i + static_cast<Eigen::Index>(cells[0]) * j;
  }
  /// Coordinate of the cell center along one axis.
  double center(int axis, int i) const { return (i + 0.5) * spacing[axis]; }

  bool operator==(const Grid&) const = default;
};

Grid build_grid(int dim, const std::vector<double>& lengths,
                const std::vector<int>& cells);

/// One real value per cell of `grid`, stored in x-major order.
struct ScalarField {
  Grid grid;
  Array data;
};

ScalarField make_field(const Grid& grid, double value = 0.0);

/// Throws if the field holds a NaN/Inf or has the wrong length.
void require_finite(const ScalarField& f, const char* what);

/// Per-axis face values. Axis 0 holds (nx+1) x ny faces, axis 1 holds
/// nx x (ny+1). Boundary faces are stored but must carry exactly 0.
struct FaceField {
  Grid grid;
  std::array<Array, 2> faces;

  Eigen::Index face_index(int axis, int i, int j = 0) const {
    const int stride = axis == 0 ? grid.cells[0] + 1 : grid.cells[0];
    return i + static_cast<Eigen::Index>(stride) * j;
  }
};

FaceField make_face_field(const Grid& grid);

double integrate(const ScalarField& f);

/// 3-point (1D) / 5-point (2D) Laplacian with mirrored ghost cells.
ScalarField laplacian_neumann(const ScalarField& f);

/// Centered two-point difference on interior faces; boundary faces 0.
FaceField gradient_faces(const ScalarField& f);

/// Signed face sums per cell divided by spacing. Rejects fluxes with
/// nonzero boundary faces; integrate(result) telescopes to 0.
ScalarField divergence_faces(const FaceField& flux);

/// Lower estimate of the C^theta seminorm from axis-aligned cell pairs
/// at the given lattice strides. Monotone in the stride set.
double holder_seminorm(const ScalarField& f, double theta,
                       const std::vector<int>& strides);

/// Powers of two up to the widest axis.
std::vector<int> default_strides(const Grid& grid);

}  // namespace chemolab
