#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smilansky/assembly.hpp"

namespace smilansky {

struct SpectralResult {
  std::vector<double> eigenvalues;                 // ascending
  std::vector<std::vector<double>> eigenvectors;   // unit norm, may be empty
  std::vector<double> residuals;                   // ||A v - theta v|| / ||v||
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;
};

// ||A v - theta v|| / ||v||, accumulated in extended precision.
double residual_norm(const SparseSymmetricOperator& a, double theta, std::span<const double> v);
double residual_norm(const Tridiagonal& t, double theta, std::span<const double> v);

// All eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL;
// eigenvectors (optional) by inverse iteration.
SpectralResult dense_tridiagonal_eigs(const Tridiagonal& t, bool want_vectors = false);

// The `count` smallest eigenvalues by Sturm-sequence bisection, with
// optional inverse-iteration eigenvectors. O(n) per bisection step.
SpectralResult tridiagonal_lowest(const Tridiagonal& t, std::size_t count, bool want_vectors = false);

// Number of eigenvalues strictly below x (Sturm count).
std::size_t sturm_count(const Tridiagonal& t, double x);

// Eigen-decomposition of a small dense symmetric matrix (row-major n x n)
// by cyclic Jacobi. Eigenvalues ascending; vectors stored column-wise.
void jacobi_eigs(std::vector<double> matrix, std::size_t n, std::vector<double>& values,
                 std::vector<double>& vectors);

enum class SpectralTransform {
  automatic,       // shift-invert above `transform_threshold` unknowns
  none,            // plain Lanczos on A
  shift_invert,    // Lanczos on (A - sigma)^{-1}, sigma below the spectrum
};

struct ExtremalOptions {
  double tol = 1e-8;              // absolute residual target per pair
  std::size_t basis_size = 0;     // 0: max(2 count + 20, 40)
  int max_restarts = 400;
  std::uint64_t seed = 20160601;
  SpectralTransform transform = SpectralTransform::automatic;
  std::size_t transform_threshold = 3000;
};

// The `count` smallest eigenpairs of A by thick-restart Lanczos with full
// reorthogonalisation. Residuals are always recomputed against A itself.
// count >= dim throws ParameterError; nonconvergence returns converged=false.
SpectralResult extremal_sparse_eigs(const SparseSymmetricOperator& a, std::size_t count,
                                    const ExtremalOptions& options = {});

// Sylvester inertia of A - shift I through a sparse LDL^T factorisation:
// the number of eigenvalues of A strictly below `shift`.
std::size_t count_eigenvalues_below(const SparseSymmetricOperator& a, double shift);

// Deterministic start vector in [-1/2, 1/2)^n.
std::vector<double> seeded_vector(std::size_t n, std::uint64_t seed);

}  // namespace smilansky
