#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "smilansky/assembly.hpp"

namespace smilansky::detail {

// Sparse LDL^T of A - shift I with a fill-reducing ordering.
class ShiftedFactorization {
 public:
  ShiftedFactorization(const SparseSymmetricOperator& a, double shift);
  ~ShiftedFactorization();
  ShiftedFactorization(const ShiftedFactorization&) = delete;
  ShiftedFactorization& operator=(const ShiftedFactorization&) = delete;

  double shift() const { return shift_; }
  std::size_t negative_pivots() const { return negative_pivots_; }
  void solve(std::span<const double> rhs, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double shift_;
  std::size_t negative_pivots_ = 0;
};

}  // namespace smilansky::detail
