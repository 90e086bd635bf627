#include "sslm/nn/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sslm::kern {

// Parallelism pays off only once rows are wide enough to amortize the fork.
static constexpr long kParallelFlops = 16 * 1024;  // see bench/kernel_bench

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec(const Mat& w, const double* x, double* y) {
  const int r = w.rows, c = w.cols;
#pragma omp parallel for schedule(static) if (static_cast<long>(r) * c >= kParallelFlops)
  for (int i = 0; i < r; ++i) y[i] = dot(w[i], x, c);
}

void matvec_acc(const Mat& w, const double* x, double* y) {
  const int r = w.rows, c = w.cols;
#pragma omp parallel for schedule(static) if (static_cast<long>(r) * c >= kParallelFlops)
  for (int i = 0; i < r; ++i) y[i] += dot(w[i], x, c);
}

void tmatvec_acc(const Mat& w, const double* x, double* y) {
  const int r = w.rows, c = w.cols;
#pragma omp parallel for schedule(static) if (static_cast<long>(r) * c >= kParallelFlops)
  for (int j = 0; j < c; ++j) {
    double s = 0.0;
    for (int i = 0; i < r; ++i) s += w[i][j] * x[i];
    y[j] += s;
  }
}

void outer_acc(Mat& g, const double* u, const double* v) {
  const int r = g.rows, c = g.cols;
#pragma omp parallel for schedule(static) if (static_cast<long>(r) * c >= kParallelFlops)
  for (int i = 0; i < r; ++i) {
    double ui = u[i];
    double* row = g[i];
    for (int j = 0; j < c; ++j) row[j] += ui * v[j];
  }
}

void matmul(const Mat& a, const Mat& b, Mat& c) {
  const int n = a.rows, k = a.cols, m = b.cols;
  c = Mat(n, m);
#pragma omp parallel for schedule(static) if (static_cast<long>(n) * k * m >= kParallelFlops)
  for (int i = 0; i < n; ++i) {
    const double* arow = a[i];
    double* crow = c[i];
    for (int p = 0; p < k; ++p) {
      double apv = arow[p];
      const double* brow = b[p];
      for (int j = 0; j < m; ++j) crow[j] += apv * brow[j];
    }
  }
}

bool cholesky(Mat& a, double tol) {
  const int n = a.rows;
  for (int k = 0; k < n; ++k) {
    double d = a[k][k];
    for (int p = 0; p < k; ++p) d -= a[k][p] * a[k][p];
    if (!(d > tol)) return false;
    double lkk = std::sqrt(d);
    a[k][k] = lkk;
    const double inv = 1.0 / lkk;
    // Column update: each row below the pivot is independent.
#pragma omp parallel for schedule(static) if (static_cast<long>(n - k) * k >= kParallelFlops)
    for (int i = k + 1; i < n; ++i) {
      double s = a[i][k];
      const double* ri = a[i];
      const double* rk = a[k];
      for (int p = 0; p < k; ++p) s -= ri[p] * rk[p];
      a[i][k] = s * inv;
    }
    for (int j = k + 1; j < n; ++j) a[k][j] = 0.0;
  }
  return true;
}

void solve_lower(const Mat& l, const double* b, double* y) {
  const int n = l.rows;
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    const double* row = l[i];
    for (int j = 0; j < i; ++j) s -= row[j] * y[j];
    y[i] = s / row[i];
  }
}

void solve_lower_transposed(const Mat& l, const double* b, double* y) {
  const int n = l.rows;
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= l[j][i] * y[j];
    y[i] = s / l[i][i];
  }
}

namespace ref {

void matvec(const Mat& w, const double* x, double* y) {
  for (int i = 0; i < w.rows; ++i) y[i] = kern::dot(w[i], x, w.cols);
}

void matvec_acc(const Mat& w, const double* x, double* y) {
  for (int i = 0; i < w.rows; ++i) y[i] += kern::dot(w[i], x, w.cols);
}

void tmatvec_acc(const Mat& w, const double* x, double* y) {
  for (int j = 0; j < w.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < w.rows; ++i) s += w[i][j] * x[i];
    y[j] += s;
  }
}

void outer_acc(Mat& g, const double* u, const double* v) {
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) g[i][j] += u[i] * v[j];
}

void matmul(const Mat& a, const Mat& b, Mat& c) {
  c = Mat(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int p = 0; p < a.cols; ++p) {
      double apv = a[i][p];
      for (int j = 0; j < b.cols; ++j) c[i][j] += apv * b[p][j];
    }
}

}  // namespace ref

}  // namespace sslm::kern
