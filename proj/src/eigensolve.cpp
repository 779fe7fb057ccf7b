#include "smilansky/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "shift_invert.hpp"
#include "smilansky/error.hpp"
#include "smilansky/format.hpp"

namespace smilansky {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void normalize(std::vector<double>& v) {
  const double n = norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

double tridiagonal_norm(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(t.diag[i]);
    if (i > 0) row += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) row += std::abs(t.offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

double pivot_floor(const Tridiagonal& t) {
  double e2 = 1.0;
  for (double e : t.offdiag) e2 = std::max(e2, e * e);
  return std::numeric_limits<double>::min() * e2;
}

void check_tridiagonal(const Tridiagonal& t) {
  if (t.diag.empty()) throw ParameterError("empty tridiagonal matrix");
  if (t.offdiag.size() + 1 != t.diag.size()) {
    throw ParameterError("off-diagonal must have n - 1 entries");
  }
}

// Gaussian elimination with partial pivoting on T - shift I, stored in
// LAPACK gttrf layout, followed by repeated solves.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const Tridiagonal& t, double shift) {
    const std::size_t n = t.diag.size();
    const double tiny = std::max(kEps * tridiagonal_norm(t), std::numeric_limits<double>::min());
    lower_ = t.offdiag;
    upper_ = t.offdiag;
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag_[i] = t.diag[i] - shift;
    upper2_.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped_.assign(n, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(diag_[i]) >= std::abs(lower_[i])) {
        if (diag_[i] == 0.0) diag_[i] = tiny;
        const double fact = lower_[i] / diag_[i];
        lower_[i] = fact;
        diag_[i + 1] -= fact * upper_[i];
      } else {
        const double fact = diag_[i] / lower_[i];
        diag_[i] = lower_[i];
        lower_[i] = fact;
        const double temp = upper_[i];
        upper_[i] = diag_[i + 1];
        diag_[i + 1] = temp - fact * diag_[i + 1];
        if (i + 2 < n) {
          upper2_[i] = upper_[i + 1];
          upper_[i + 1] = -fact * upper_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    if (diag_[n - 1] == 0.0) diag_[n - 1] = tiny;
  }

  void solve(std::vector<double>& x) const {
    const std::size_t n = diag_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        x[i + 1] -= lower_[i] * x[i];
      } else {
        const double temp = x[i];
        x[i] = x[i + 1];
        x[i + 1] = temp - lower_[i] * x[i];
      }
    }
    x[n - 1] /= diag_[n - 1];
    if (n > 1) x[n - 2] = (x[n - 2] - upper_[n - 2] * x[n - 1]) / diag_[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) {
      x[k] = (x[k] - upper_[k] * x[k + 1] - upper2_[k] * x[k + 2]) / diag_[k];
    }
  }

 private:
  std::vector<double> lower_, diag_, upper_, upper2_;
  std::vector<bool> swapped_;
};

std::vector<std::vector<double>> inverse_iteration(const Tridiagonal& t,
                                                   const std::vector<double>& values) {
  const std::size_t n = t.diag.size();
  const double tnorm = std::max(tridiagonal_norm(t), std::numeric_limits<double>::min());
  const double cluster_gap = 1e-3 * tnorm;
  std::vector<std::vector<double>> vectors;
  vectors.reserve(values.size());
  std::size_t cluster_start = 0;
  double previous_shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0 && values[k] - values[k - 1] > cluster_gap) cluster_start = k;
    double shift = values[k];
    // Separate coincident shifts so each solve lands on a distinct vector.
    if (shift - previous_shift < 10.0 * kEps * tnorm) shift = previous_shift + 10.0 * kEps * tnorm;
    previous_shift = shift;
    const ShiftedTridiagonalLU lu(t, shift);
    std::vector<double> x = seeded_vector(n, 7919 + k);
    normalize(x);
    for (int iter = 0; iter < 4; ++iter) {
      lu.solve(x);
      for (std::size_t j = cluster_start; j < k; ++j) axpy(-dot(vectors[j], x), vectors[j], x);
      normalize(x);
    }
    // Fix the sign so that output is deterministic: largest entry positive.
    const auto it = std::max_element(x.begin(), x.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*it < 0.0) {
      for (double& v : x) v = -v;
    }
    vectors.push_back(std::move(x));
  }
  return vectors;
}

double bisect_eigenvalue(const Tridiagonal& t, std::size_t k, double lo, double hi) {
  const double floor = pivot_floor(t);
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + floor) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

void fill_residuals(const Tridiagonal& t, SpectralResult& result) {
  result.residuals.clear();
  for (std::size_t i = 0; i < result.eigenvectors.size(); ++i) {
    result.residuals.push_back(residual_norm(t, result.eigenvalues[i], result.eigenvectors[i]));
  }
}

}  // namespace

std::vector<double> seeded_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
  return v;
}

double residual_norm(const SparseSymmetricOperator& a, double theta, std::span<const double> v) {
  const auto& offsets = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  long double r2 = 0.0L;
  long double v2 = 0.0L;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    long double s = -static_cast<long double>(theta) * v[r];
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      s += static_cast<long double>(vals[k]) * v[cols[k]];
    }
    r2 += s * s;
    v2 += static_cast<long double>(v[r]) * v[r];
  }
  return static_cast<double>(std::sqrt(r2 / v2));
}

double residual_norm(const Tridiagonal& t, double theta, std::span<const double> v) {
  const std::size_t n = t.diag.size();
  long double r2 = 0.0L;
  long double v2 = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double s = (static_cast<long double>(t.diag[i]) - theta) * v[i];
    if (i > 0) s += static_cast<long double>(t.offdiag[i - 1]) * v[i - 1];
    if (i + 1 < n) s += static_cast<long double>(t.offdiag[i]) * v[i + 1];
    r2 += s * s;
    v2 += static_cast<long double>(v[i]) * v[i];
  }
  return static_cast<double>(std::sqrt(r2 / v2));
}

std::size_t sturm_count(const Tridiagonal& t, double x) {
  const double floor = pivot_floor(t);
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < floor) q = -floor;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    q = t.diag[i] - x - t.offdiag[i - 1] * t.offdiag[i - 1] / q;
    if (std::abs(q) < floor) q = -floor;
    if (q < 0.0) ++count;
  }
  return count;
}

SpectralResult dense_tridiagonal_eigs(const Tridiagonal& t, bool want_vectors) {
  check_tridiagonal(t);
  const std::size_t n = t.diag.size();
  std::vector<double> d = t.diag;
  std::vector<double> e = t.offdiag;
  e.push_back(0.0);
  constexpr int kMaxIterations = 60;
  int total_iterations = 0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++iter > kMaxIterations) {
        throw SolverError("implicit QL did not converge for eigenvalue " + std::to_string(l) +
                          " after " + std::to_string(kMaxIterations) + " sweeps");
      }
      ++total_iterations;
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());

  SpectralResult result;
  result.eigenvalues = std::move(d);
  result.iterations = total_iterations;
  result.converged = true;
  if (want_vectors) {
    result.eigenvectors = inverse_iteration(t, result.eigenvalues);
    fill_residuals(t, result);
  }
  return result;
}

SpectralResult tridiagonal_lowest(const Tridiagonal& t, std::size_t count, bool want_vectors) {
  check_tridiagonal(t);
  const std::size_t n = t.diag.size();
  if (count == 0 || count > n) throw ParameterError("requested eigenvalue count out of range");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) radius += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  const double pad = kEps * std::max(std::abs(lo), std::abs(hi)) * n + pivot_floor(t);
  lo -= pad;
  hi += pad;

  SpectralResult result;
  result.eigenvalues.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double start = k == 0 ? lo : result.eigenvalues.back();
    result.eigenvalues.push_back(bisect_eigenvalue(t, k, start, hi));
  }
  result.converged = true;
  if (want_vectors) {
    result.eigenvectors = inverse_iteration(t, result.eigenvalues);
    fill_residuals(t, result);
  }
  return result;
}

void jacobi_eigs(std::vector<double> a, std::size_t n, std::vector<double>& values,
                 std::vector<double>& vectors) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  const auto at = [n](std::vector<double>& m, std::size_t r, std::size_t c) -> double& {
    return m[r * n + c];
  };
  double scale = 0.0;
  for (double x : a) scale += x * x;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
    }
    if (off <= 1e-32 * scale || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (apq == 0.0) continue;
        const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = at(a, r, p);
          const double arq = at(a, r, q);
          at(a, r, p) = c * arp - s * arq;
          at(a, r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = at(a, p, r);
          const double aqr = at(a, q, r);
          at(a, p, r) = c * apr - s * aqr;
          at(a, q, r) = s * apr + c * aqr;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = at(v, r, p);
          const double vrq = at(v, r, q);
          at(v, r, p) = c * vrp - s * vrq;
          at(v, r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
  values.resize(n);
  vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = a[order[k] * n + order[k]];
    for (std::size_t r = 0; r < n; ++r) vectors[r * n + k] = v[r * n + order[k]];
  }
}

namespace {

using Apply = std::function<void(std::span<const double>, std::span<double>)>;

struct RitzSet {
  std::vector<double> values;                 // of the operator, descending
  std::vector<std::vector<double>> vectors;
  int applications = 0;
  int restarts = 0;
  bool converged = false;
};

// Thick-restart Lanczos for the largest eigenvalues of a symmetric operator.
// Every new direction is orthogonalised twice against the whole basis, so
// the projected matrix is the full Rayleigh quotient of the basis.
class ThickRestartLanczos {
 public:
  ThickRestartLanczos(Apply op, std::size_t dim, std::size_t count, std::size_t basis,
                      std::uint64_t seed)
      : op_(std::move(op)), dim_(dim), count_(count), m_(std::min(basis, dim)), seed_(seed) {}

  // `ready(values, estimates)` decides when to form Ritz vectors;
  // `accept(values, vectors)` performs the true-residual check.
  template <class Ready, class Accept>
  RitzSet run(int max_restarts, Ready&& ready, Accept&& accept) {
    std::vector<std::vector<double>> basis(m_ + 1, std::vector<double>(dim_, 0.0));
    std::vector<double> t(m_ * m_, 0.0);
    basis[0] = seeded_vector(dim_, seed_);
    normalize(basis[0]);
    std::size_t kept = 0;
    RitzSet out;
    std::vector<double> w(dim_);
    std::vector<double> coeff(m_ + 1);
    std::vector<double> values;
    std::vector<double> z;

    for (int restart = 0; restart <= max_restarts; ++restart) {
      out.restarts = restart;
      double beta_last = 0.0;
      std::size_t filled = m_;
      for (std::size_t j = kept; j < m_; ++j) {
        op_(basis[j], w);
        ++out.applications;
        std::fill(coeff.begin(), coeff.end(), 0.0);
        for (int pass = 0; pass < 2; ++pass) {
          for (std::size_t i = 0; i <= j; ++i) {
            const double c = dot(basis[i], w);
            coeff[i] += c;
            axpy(-c, basis[i], w);
          }
        }
        for (std::size_t i = 0; i <= j; ++i) {
          t[i * m_ + j] = coeff[i];
          t[j * m_ + i] = coeff[i];
        }
        double beta = norm(w);
        const double scale = std::abs(coeff[j]) + beta;
        if (beta <= 1e-12 * scale || beta == 0.0) {
          // Invariant subspace: continue with a fresh orthogonal direction.
          if (j + 1 >= dim_) {
            filled = j + 1;
            beta_last = 0.0;
            break;
          }
          w = seeded_vector(dim_, seed_ + 1000 + j + static_cast<std::uint64_t>(restart) * m_);
          for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i <= j; ++i) axpy(-dot(basis[i], w), basis[i], w);
          }
          normalize(w);
          beta = 0.0;
          basis[j + 1] = w;
        } else {
          for (std::size_t r = 0; r < dim_; ++r) basis[j + 1][r] = w[r] / beta;
        }
        if (j + 1 < m_) {
          t[(j + 1) * m_ + j] = beta;
          t[j * m_ + (j + 1)] = beta;
        } else {
          beta_last = beta;
        }
      }

      // Rayleigh-Ritz on the filled block.
      std::vector<double> block(filled * filled);
      for (std::size_t r = 0; r < filled; ++r) {
        for (std::size_t c = 0; c < filled; ++c) block[r * filled + c] = t[r * m_ + c];
      }
      jacobi_eigs(std::move(block), filled, values, z);
      // Descending order of operator eigenvalues.
      std::vector<double> ritz(filled);
      std::vector<double> estimates(filled);
      for (std::size_t k = 0; k < filled; ++k) {
        const std::size_t col = filled - 1 - k;
        ritz[k] = values[col];
        estimates[k] = std::abs(beta_last * z[(filled - 1) * filled + col]);
      }
      const std::size_t wanted = std::min(count_, filled);
      out.values.assign(ritz.begin(), ritz.begin() + static_cast<std::ptrdiff_t>(wanted));

      const auto ritz_vector = [&](std::size_t k) {
        const std::size_t col = filled - 1 - k;
        std::vector<double> y(dim_, 0.0);
        for (std::size_t i = 0; i < filled; ++i) axpy(z[i * filled + col], basis[i], y);
        normalize(y);
        return y;
      };

      const bool exhausted = filled < m_ || restart == max_restarts;
      if (ready(out.values, std::span<const double>(estimates.data(), wanted)) || exhausted) {
        out.vectors.clear();
        for (std::size_t k = 0; k < wanted; ++k) out.vectors.push_back(ritz_vector(k));
        if (accept(out.values, out.vectors)) {
          out.converged = true;
          return out;
        }
        if (exhausted) return out;
      }

      // Thick restart: keep the leading Ritz vectors plus the residual direction.
      kept = std::min(m_ - 2, std::max(count_ + 1, m_ / 2));
      std::vector<std::vector<double>> fresh;
      fresh.reserve(kept);
      for (std::size_t k = 0; k < kept; ++k) fresh.push_back(ritz_vector(k));
      std::vector<double> residual_direction = std::move(basis[m_]);
      for (std::size_t k = 0; k < kept; ++k) basis[k] = std::move(fresh[k]);
      basis[kept] = std::move(residual_direction);
      basis[m_].assign(dim_, 0.0);
      std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t k = 0; k < kept; ++k) t[k * m_ + k] = ritz[k];
    }
    return out;
  }

 private:
  Apply op_;
  std::size_t dim_;
  std::size_t count_;
  std::size_t m_;
  std::uint64_t seed_;
};

double rayleigh_quotient(const SparseSymmetricOperator& a, const std::vector<double>& y,
                         std::vector<double>& scratch) {
  a.multiply(y, scratch);
  return dot(y, scratch) / dot(y, y);
}

}  // namespace

SpectralResult extremal_sparse_eigs(const SparseSymmetricOperator& a, std::size_t count,
                                    const ExtremalOptions& options) {
  const std::size_t dim = a.dim();
  if (count == 0) throw ParameterError("eigenpair count must be positive");
  if (count >= dim) {
    throw ParameterError("requested " + std::to_string(count) + " eigenpairs of a " +
                         std::to_string(dim) + "-dimensional matrix; count must be < dim");
  }
  if (!(options.tol > 0.0)) throw ParameterError("eigensolver tolerance must be positive");
  const std::size_t basis =
      options.basis_size > 0 ? options.basis_size : std::max<std::size_t>(2 * count + 20, 40);
  if (basis <= count + 2 && basis < dim) throw ParameterError("Lanczos basis too small for count");

  bool use_shift = options.transform == SpectralTransform::shift_invert;
  if (options.transform == SpectralTransform::automatic) use_shift = dim > options.transform_threshold;

  std::vector<double> scratch(dim);
  std::ostringstream diag;

  const auto accept_with = [&](auto to_eigenvalue) {
    return [&, to_eigenvalue](const std::vector<double>&, const std::vector<std::vector<double>>& vecs) {
      for (const auto& y : vecs) {
        const double theta = rayleigh_quotient(a, y, scratch);
        (void)to_eigenvalue;
        if (!(residual_norm(a, theta, y) <= options.tol)) return false;
      }
      return true;
    };
  };

  RitzSet ritz;
  double sigma = 0.0;
  if (!use_shift) {
    ThickRestartLanczos lanczos(
        [&a](std::span<const double> in, std::span<double> out) {
          a.multiply(in, out);
          for (double& x : out) x = -x;
        },
        dim, count, basis, options.seed);
    ritz = lanczos.run(
        options.max_restarts,
        [&](const std::vector<double>&, std::span<const double> est) {
          return std::all_of(est.begin(), est.end(), [&](double e) { return e <= 0.5 * options.tol; });
        },
        accept_with(0));
    diag << "transform=none";
  } else {
    // Locate a shift below the spectrum: start under a short Lanczos
    // estimate of the bottom and confirm with the inertia of A - sigma I.
    ThickRestartLanczos probe(
        [&a](std::span<const double> in, std::span<double> out) {
          a.multiply(in, out);
          for (double& x : out) x = -x;
        },
        dim, 1, std::min<std::size_t>(40, dim - 1), options.seed);
    const RitzSet estimate = probe.run(
        0, [](const auto&, auto) { return false; }, [](const auto&, const auto&) { return false; });
    const double bottom = -estimate.values.front();
    double delta = 0.05 * (1.0 + std::abs(bottom));
    std::unique_ptr<detail::ShiftedFactorization> factor;
    double too_high = bottom;
    for (int attempt = 0; attempt < 24; ++attempt) {
      sigma = bottom - delta;
      factor = std::make_unique<detail::ShiftedFactorization>(a, sigma);
      if (factor->negative_pivots() == 0) break;
      too_high = sigma;
      delta *= 4.0;
      factor.reset();
    }
    if (!factor) throw SolverError("could not place a shift below the spectrum");
    // The probe overestimates the bottom on stiff matrices; pull sigma up
    // towards it so the wanted eigenvalues separate after inversion.
    for (int step = 0; step < 4 && too_high - sigma > 1e-3 * (1.0 + std::abs(sigma)); ++step) {
      const double mid = 0.5 * (sigma + too_high);
      auto trial = std::make_unique<detail::ShiftedFactorization>(a, mid);
      if (trial->negative_pivots() == 0) {
        sigma = mid;
        factor = std::move(trial);
      } else {
        too_high = mid;
      }
    }

    double readiness = 0.1;
    ThickRestartLanczos lanczos(
        [&factor](std::span<const double> in, std::span<double> out) { factor->solve(in, out); },
        dim, count, basis, options.seed);
    auto accept = accept_with(0);
    ritz = lanczos.run(
        options.max_restarts,
        [&](const std::vector<double>& nu, std::span<const double> est) {
          for (std::size_t k = 0; k < est.size(); ++k) {
            if (!(est[k] <= readiness * options.tol * nu[k] * nu[k])) return false;
          }
          return true;
        },
        [&](const std::vector<double>& nu, const std::vector<std::vector<double>>& vecs) {
          const bool ok = accept(nu, vecs);
          if (!ok) readiness *= 0.1;
          return ok;
        });
    ritz.applications += estimate.applications;
    diag << "transform=shift-invert sigma=" << format_double(sigma);
  }
  diag << " restarts=" << ritz.restarts << " applications=" << ritz.applications;

  SpectralResult result;
  result.iterations = ritz.applications;
  result.converged = ritz.converged;
  result.diagnostics = diag.str();
  std::vector<std::size_t> order(ritz.vectors.size());
  std::vector<double> thetas(ritz.vectors.size());
  for (std::size_t k = 0; k < ritz.vectors.size(); ++k) {
    normalize(ritz.vectors[k]);
    thetas[k] = rayleigh_quotient(a, ritz.vectors[k], scratch);
  }
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return thetas[i] < thetas[j]; });
  for (std::size_t k : order) {
    result.eigenvalues.push_back(thetas[k]);
    result.residuals.push_back(residual_norm(a, thetas[k], ritz.vectors[k]));
    result.eigenvectors.push_back(std::move(ritz.vectors[k]));
  }
  return result;
}

std::size_t count_eigenvalues_below(const SparseSymmetricOperator& a, double shift) {
  const detail::ShiftedFactorization factor(a, shift);
  return factor.negative_pivots();
}

}  // namespace smilansky
