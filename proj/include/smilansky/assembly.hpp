#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "smilansky/model.hpp"

namespace smilansky {

enum class BoundaryCondition { dirichlet, neumann };

// Uniform grid on [-R, R]. Dirichlet grids hold the n interior nodes
// (spacing 2R/(n+1)); Neumann grids include both endpoints (spacing 2R/(n-1)).
class Grid1D {
 public:
  Grid1D(double half_width, std::size_t n, BoundaryCondition bc);

  // Grid with spacing as close as possible to `target_spacing` from below.
  static Grid1D with_spacing(double half_width, double target_spacing, BoundaryCondition bc);

  double half_width() const { return half_width_; }
  std::size_t size() const { return n_; }
  BoundaryCondition bc() const { return bc_; }
  double spacing() const { return spacing_; }
  double node(std::size_t i) const;
  std::vector<double> nodes() const;

 private:
  double half_width_;
  std::size_t n_;
  BoundaryCondition bc_;
  double spacing_;
};

// Dirichlet box [-X, X] x [-Y, Y] with nx * ny interior nodes. Unknowns are
// ordered x-major: index = i * ny + j.
class Grid2D {
 public:
  Grid2D(double x_half_width, double y_half_width, std::size_t nx, std::size_t ny);
  static Grid2D with_spacing(double x_half_width, double y_half_width, double dx, double dy);

  double x_half_width() const { return x_.half_width(); }
  double y_half_width() const { return y_.half_width(); }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }
  std::size_t size() const { return nx() * ny(); }
  const Grid1D& x() const { return x_; }
  const Grid1D& y() const { return y_; }

 private:
  Grid1D x_;
  Grid1D y_;
};

// Symmetric matrix in compressed-row form with both triangles stored.
class SparseSymmetricOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseSymmetricOperator() = default;
  // Entries may repeat (they are summed). Throws ValidationError unless the
  // summed matrix is exactly symmetric with finite diagonal.
  SparseSymmetricOperator(std::size_t dim, std::vector<Entry> entries);

  std::size_t dim() const { return dim_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  bool symmetry_checked() const { return symmetry_checked_; }

  void multiply(std::span<const double> in, std::span<double> out) const;
  double at(std::size_t row, std::size_t col) const;
  std::vector<double> diagonal() const;
  double max_asymmetry() const;
  // Lower bound on the spectrum from Gershgorin discs.
  double gershgorin_lower() const;
  // Upper bound on the spectrum from Gershgorin discs.
  double gershgorin_upper() const;

  // One "row col value" line per stored entry (0-based, both triangles),
  // preceded by a "% dim nnz" header line.
  void write_coordinate(std::ostream& out) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
  bool symmetry_checked_ = false;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n - 1
};

struct AssemblyOptions {
  bool strict = false;                   // escalate resolution warnings to errors
  std::size_t memory_cap = 4'000'000;    // max unknowns for 2D assembly
};

// Three-point discretisation of L = -d^2/dx^2 + omega^2 - lambda V(x).
// Neumann closure mirrors the ghost node and is symmetrised with the
// trapezoidal weights, which keeps the constant mode exact.
Tridiagonal tridiagonal_L(const ModelParams& params, const Grid1D& grid,
                          const AssemblyOptions& options = {});
SparseSymmetricOperator assemble_L(const ModelParams& params, const Grid1D& grid,
                                   const AssemblyOptions& options = {});

// -d^2/dx^2 + omega^2 y0^2 - lambda y0^2 V(x y0), the fibre of H at fixed y0.
Tridiagonal tridiagonal_fibre(const ModelParams& params, double y0, const Grid1D& grid);

// -d^2/dy^2 + omega^2 y^2.
Tridiagonal tridiagonal_oscillator(double omega, const Grid1D& grid);

// Five-point discretisation of H = -Delta + omega^2 y^2 - lambda y^2 V(xy).
SparseSymmetricOperator assemble_H(const ModelParams& params, const Grid2D& grid,
                                   const AssemblyOptions& options = {});

SparseSymmetricOperator to_operator(const Tridiagonal& t);

}  // namespace smilansky
