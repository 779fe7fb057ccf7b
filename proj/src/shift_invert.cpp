#include "shift_invert.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <vector>

#include "smilansky/error.hpp"
#include "smilansky/format.hpp"

namespace smilansky::detail {

struct ShiftedFactorization::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
};

ShiftedFactorization::ShiftedFactorization(const SparseSymmetricOperator& a, double shift)
    : impl_(std::make_unique<Impl>()), shift_(shift) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(a.nonzeros() / 2 + a.dim());
  const auto& offsets = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      if (cols[k] > r) continue;
      const double v = cols[k] == r ? vals[k] - shift : vals[k];
      triplets.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[k]), v);
    }
  }
  Eigen::SparseMatrix<double> lower(n, n);
  lower.setFromTriplets(triplets.begin(), triplets.end());
  impl_->ldlt.compute(lower);
  if (impl_->ldlt.info() != Eigen::Success) {
    throw SolverError("LDL^T factorisation failed at shift " + format_double(shift));
  }
  const auto& d = impl_->ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] < 0.0) ++negative_pivots_;
  }
}

ShiftedFactorization::~ShiftedFactorization() = default;

void ShiftedFactorization::solve(std::span<const double> rhs, std::span<double> out) const {
  const auto n = static_cast<Eigen::Index>(rhs.size());
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  Eigen::Map<Eigen::VectorXd> x(out.data(), n);
  x = impl_->ldlt.solve(b);
}

}  // namespace smilansky::detail
