#include "smilansky/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "smilansky/error.hpp"
#include "smilansky/format.hpp"

namespace smilansky {

Grid1D::Grid1D(double half_width, std::size_t n, BoundaryCondition bc)
    : half_width_(half_width), n_(n), bc_(bc) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ParameterError("grid half-width must be positive");
  }
  if (n < 3) throw ParameterError("grid needs at least 3 points");
  spacing_ = bc == BoundaryCondition::dirichlet ? 2.0 * half_width / static_cast<double>(n + 1)
                                                : 2.0 * half_width / static_cast<double>(n - 1);
}

Grid1D Grid1D::with_spacing(double half_width, double target_spacing, BoundaryCondition bc) {
  if (!(target_spacing > 0.0)) throw ParameterError("grid spacing must be positive");
  const double cells = std::ceil(2.0 * half_width / target_spacing - 1e-9);
  const auto c = static_cast<std::size_t>(std::max(cells, 2.0));
  return bc == BoundaryCondition::dirichlet ? Grid1D(half_width, std::max<std::size_t>(c - 1, 3), bc)
                                            : Grid1D(half_width, c + 1, bc);
}

double Grid1D::node(std::size_t i) const {
  const double offset = bc_ == BoundaryCondition::dirichlet ? static_cast<double>(i + 1)
                                                            : static_cast<double>(i);
  // Mirror the lower half so the node set is exactly symmetric about 0.
  if (2 * i + 1 > n_) return -node(n_ - 1 - i);
  return -half_width_ + offset * spacing_;
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

Grid2D::Grid2D(double x_half_width, double y_half_width, std::size_t nx, std::size_t ny)
    : x_(x_half_width, nx, BoundaryCondition::dirichlet),
      y_(y_half_width, ny, BoundaryCondition::dirichlet) {}

Grid2D Grid2D::with_spacing(double x_half_width, double y_half_width, double dx, double dy) {
  const auto gx = Grid1D::with_spacing(x_half_width, dx, BoundaryCondition::dirichlet);
  const auto gy = Grid1D::with_spacing(y_half_width, dy, BoundaryCondition::dirichlet);
  return {x_half_width, y_half_width, gx.size(), gy.size()};
}

SparseSymmetricOperator::SparseSymmetricOperator(std::size_t dim, std::vector<Entry> entries)
    : dim_(dim) {
  std::vector<std::size_t> counts(dim + 1, 0);
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw ValidationError("matrix entry out of range");
    ++counts[e.row + 1];
  }
  for (std::size_t r = 0; r < dim; ++r) counts[r + 1] += counts[r];
  std::vector<std::pair<std::size_t, double>> slots(entries.size());
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (const auto& e : entries) slots[fill[e.row]++] = {e.col, e.value};

  row_offsets_.assign(1, 0);
  row_offsets_.reserve(dim + 1);
  col_indices_.reserve(entries.size());
  values_.reserve(entries.size());
  for (std::size_t r = 0; r < dim; ++r) {
    auto first = slots.begin() + static_cast<std::ptrdiff_t>(counts[r]);
    auto last = slots.begin() + static_cast<std::ptrdiff_t>(counts[r + 1]);
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!col_indices_.empty() && values_.size() > row_offsets_.back() &&
          col_indices_.back() == it->first) {
        values_.back() += it->second;
      } else {
        col_indices_.push_back(it->first);
        values_.push_back(it->second);
      }
    }
    row_offsets_.push_back(values_.size());
  }

  for (std::size_t r = 0; r < dim_; ++r) {
    if (!std::isfinite(at(r, r))) throw ValidationError("non-finite diagonal entry in row " + std::to_string(r));
  }
  if (max_asymmetry() != 0.0) throw ValidationError("assembled matrix is not exactly symmetric");
  symmetry_checked_ = true;
}

void SparseSymmetricOperator::multiply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    double sum = 0.0;
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      sum += values_[k] * in[col_indices_[k]];
    }
    out[r] = sum;
  }
}

double SparseSymmetricOperator::at(std::size_t row, std::size_t col) const {
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> SparseSymmetricOperator::diagonal() const {
  std::vector<double> d(dim_);
  for (std::size_t r = 0; r < dim_; ++r) d[r] = at(r, r);
  return d;
}

double SparseSymmetricOperator::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(col_indices_[k], r)));
    }
  }
  return worst;
}

double SparseSymmetricOperator::gershgorin_lower() const {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < dim_; ++r) {
    double radius = 0.0;
    double d = 0.0;
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      if (col_indices_[k] == r) d = values_[k];
      else radius += std::abs(values_[k]);
    }
    lo = std::min(lo, d - radius);
  }
  return lo;
}

double SparseSymmetricOperator::gershgorin_upper() const {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < dim_; ++r) {
    double radius = 0.0;
    double d = 0.0;
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      if (col_indices_[k] == r) d = values_[k];
      else radius += std::abs(values_[k]);
    }
    hi = std::max(hi, d + radius);
  }
  return hi;
}

void SparseSymmetricOperator::write_coordinate(std::ostream& out) const {
  out << "% " << dim_ << ' ' << values_.size() << '\n';
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      out << r << ' ' << col_indices_[k] << ' ' << format_double(values_[k]) << '\n';
    }
  }
}

namespace {

void check_resolution_1d(const ModelParams& params, const Grid1D& grid,
                         const AssemblyOptions& options) {
  if (params.lambda == 0.0) return;
  const double limit = params.potential.a() / 8.0;
  if (grid.spacing() <= limit) return;
  const std::string msg = "grid spacing " + format_double(grid.spacing()) +
                          " exceeds a/8 = " + format_double(limit) + "; V is under-resolved";
  if (options.strict) throw ResolutionError(msg);
  std::clog << "warning: " << msg << '\n';
}

Tridiagonal tridiagonal_with_potential(const Grid1D& grid, const auto& potential) {
  const std::size_t n = grid.size();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.assign(n - 1, -inv_h2);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = 2.0 * inv_h2 + potential(grid.node(i));
  if (grid.bc() == BoundaryCondition::neumann) {
    // Ghost-node closure gives rows (2, -2) at the ends; the similarity
    // transform with sqrt of the trapezoid weights symmetrises them.
    const double edge = -std::sqrt(2.0) * inv_h2;
    t.offdiag.front() = edge;
    t.offdiag.back() = edge;
  }
  return t;
}

}  // namespace

Tridiagonal tridiagonal_L(const ModelParams& params, const Grid1D& grid,
                          const AssemblyOptions& options) {
  params.validate();
  check_resolution_1d(params, grid, options);
  const double w2 = params.omega * params.omega;
  return tridiagonal_with_potential(
      grid, [&](double x) { return w2 - params.lambda * params.potential(x); });
}

SparseSymmetricOperator assemble_L(const ModelParams& params, const Grid1D& grid,
                                   const AssemblyOptions& options) {
  return to_operator(tridiagonal_L(params, grid, options));
}

Tridiagonal tridiagonal_fibre(const ModelParams& params, double y0, const Grid1D& grid) {
  params.validate();
  const double w2 = params.omega * params.omega;
  const double y2 = y0 * y0;
  return tridiagonal_with_potential(grid, [&](double x) {
    return w2 * y2 - params.lambda * y2 * params.potential(x * y0);
  });
}

Tridiagonal tridiagonal_oscillator(double omega, const Grid1D& grid) {
  if (!(omega > 0.0)) throw ParameterError("omega must be positive");
  const double w2 = omega * omega;
  return tridiagonal_with_potential(grid, [&](double y) { return w2 * y * y; });
}

SparseSymmetricOperator assemble_H(const ModelParams& params, const Grid2D& grid,
                                   const AssemblyOptions& options) {
  params.validate();
  if (grid.size() > options.memory_cap) {
    throw ResourceError("2D grid has " + std::to_string(grid.size()) +
                        " unknowns, above the cap of " + std::to_string(options.memory_cap));
  }
  if (params.lambda > 0.0) {
    const double limit = params.potential.a() / (8.0 * grid.y_half_width());
    if (grid.x().spacing() > limit) {
      throw ResolutionError("dx = " + format_double(grid.x().spacing()) +
                            " exceeds a/(8 Y) = " + format_double(limit) +
                            "; the channel V(xy) is unresolved at the largest |y|");
    }
  }

  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  const double cx = 1.0 / (grid.x().spacing() * grid.x().spacing());
  const double cy = 1.0 / (grid.y().spacing() * grid.y().spacing());
  const double w2 = params.omega * params.omega;
  const auto ys = grid.y().nodes();

  std::vector<SparseSymmetricOperator::Entry> entries;
  entries.reserve(grid.size() * 5);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = grid.x().node(i);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = ys[j];
      const std::size_t row = i * ny + j;
      const double potential = w2 * y * y - params.lambda * y * y * params.potential(x * y);
      if (i > 0) entries.push_back({row, row - ny, -cx});
      if (j > 0) entries.push_back({row, row - 1, -cy});
      entries.push_back({row, row, 2.0 * cx + 2.0 * cy + potential});
      if (j + 1 < ny) entries.push_back({row, row + 1, -cy});
      if (i + 1 < nx) entries.push_back({row, row + ny, -cx});
    }
  }
  return {grid.size(), std::move(entries)};
}

SparseSymmetricOperator to_operator(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  std::vector<SparseSymmetricOperator::Entry> entries;
  entries.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) entries.push_back({i, i - 1, t.offdiag[i - 1]});
    entries.push_back({i, i, t.diag[i]});
    if (i + 1 < n) entries.push_back({i, i + 1, t.offdiag[i]});
  }
  return {n, std::move(entries)};
}

}  // namespace smilansky
