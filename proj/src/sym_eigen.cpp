#include "nmosc/sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nmosc/errors.hpp"

namespace nmosc {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder reduction of a (row-major) symmetric matrix to tridiagonal
// form; diagonal in d, subdiagonal in e[1..n-1]. When with_vectors is set,
// `a` is overwritten with the accumulated orthogonal transform Q such that
// A = Q T Q^T.
void tred2(std::vector<double>& a, std::size_t n, std::vector<double>& d, std::vector<double>& e,
           bool with_vectors) {
  auto at = [&a, n](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          if (with_vectors) at(j, i) = at(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
    if (i == 1) break;
  }

  if (with_vectors) d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (with_vectors) {
      if (d[i] != 0.0) {
        for (std::size_t j = 0; j < i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
          for (std::size_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
        }
      }
      d[i] = at(i, i);
      at(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
    } else {
      d[i] = at(i, i);
    }
  }
}

// Values-only Householder reduction. Maintains the full symmetric active
// block so every inner loop runs over contiguous rows; roughly 4x faster
// than the triangular bookkeeping above at dimensions in the thousands.
void tred2_values(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                  std::vector<double>& e) {
  std::vector<double> q(n, 0.0);
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double* row_i = &a[i * n];
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(row_i[k]);
      if (scale == 0.0) {
        e[i] = row_i[l];
      } else {
        double h = 0.0;
        for (std::size_t k = 0; k <= l; ++k) {
          row_i[k] /= scale;
          h += row_i[k] * row_i[k];
        }
        double f = row_i[l];
        const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        row_i[l] = f - g;
        // p = A u / h over the active block, then q = p - (u.p / 2h) u
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          const double* row_j = &a[j * n];
          double acc = 0.0;
          for (std::size_t k = 0; k <= l; ++k) acc += row_j[k] * row_i[k];
          q[j] = acc / h;
          f += q[j] * row_i[j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) q[j] -= hh * row_i[j];
        // A <- A - q u^T - u q^T, full rows
        for (std::size_t j = 0; j <= l; ++j) {
          const double uj = row_i[j];
          const double qj = q[j];
          double* row_j = &a[j * n];
          for (std::size_t k = 0; k <= l; ++k) row_j[k] -= uj * q[k] + qj * row_i[k];
        }
      }
    } else {
      e[i] = row_i[l];
    }
    if (i == 1) break;
  }
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
}

// Implicit-shift QL on the tridiagonal (d, e); z accumulates eigenvectors
// when nonempty (z arrives holding Q from tred2 or the identity).
void tqli(std::vector<double>& d, std::vector<double>& e, std::size_t n, std::vector<double>* z) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        if (iter++ == 50) throw NumericError("sym_eigen: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            auto& zz = *z;
            for (std::size_t k = 0; k < n; ++k) {
              f = zz[k * n + (i + 1)];
              zz[k * n + (i + 1)] = s * zz[k * n + i] + c * f;
              zz[k * n + i] = c * zz[k * n + i] - s * f;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymEigenResult sym_eigen(std::vector<double> matrix, std::size_t n, bool with_vectors) {
  if (n == 0) throw DomainError("sym_eigen: empty matrix");
  if (matrix.size() != n * n) throw DomainError("sym_eigen: size mismatch");

  SymEigenResult out;
  out.n = n;
  out.values.assign(n, 0.0);
  std::vector<double> e(n, 0.0);

  if (n == 1) {
    out.values[0] = matrix[0];
    if (with_vectors) out.vectors = {1.0};
    return out;
  }

  // Symmetrize from the lower triangle so callers only have to fill half.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) matrix[j * n + i] = matrix[i * n + j];

  if (with_vectors)
    tred2(matrix, n, out.values, e, true);
  else
    tred2_values(matrix, n, out.values, e);
  tqli(out.values, e, n, with_vectors ? &matrix : nullptr);

  // Ascending order; permute eigenvector columns along.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return out.values[x] < out.values[y]; });
  std::vector<double> sorted_values(n);
  for (std::size_t j = 0; j < n; ++j) sorted_values[j] = out.values[order[j]];
  out.values = std::move(sorted_values);
  if (with_vectors) {
    out.vectors.assign(n * n, 0.0);
    // column-major output: component i of eigenvector j at [i + n*j].
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) out.vectors[i + n * j] = matrix[i * n + order[j]];
  }
  return out;
}

}  // namespace nmosc
