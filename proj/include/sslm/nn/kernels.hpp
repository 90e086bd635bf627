#pragma once

#include "sslm/nn/tensor.hpp"

namespace sslm::kern {

// Dense kernels used by the recurrent core and the mixed-model solver.
// The OpenMP variants assign each output element to exactly one thread and
// keep every inner accumulation serial, so results are bitwise identical to
// the serial reference for any thread count. The reference implementations
// live in kern::ref and are compared elementwise in the test suite and the
// benchmark harness.

// y = W x
void matvec(const Mat& w, const double* x, double* y);
// y += W x
void matvec_acc(const Mat& w, const double* x, double* y);
// y += W^T x   (x has w.rows entries, y has w.cols)
void tmatvec_acc(const Mat& w, const double* x, double* y);
// G += u v^T   (u has g.rows entries, v has g.cols)
void outer_acc(Mat& g, const double* u, const double* v);
// C = A B
void matmul(const Mat& a, const Mat& b, Mat& c);
// In-place lower Cholesky of a symmetric positive definite matrix.
// Returns false when a pivot drops below tol (matrix not SPD enough).
bool cholesky(Mat& a, double tol = 1e-12);
// Solve L y = b (lower triangular, forward substitution).
void solve_lower(const Mat& l, const double* b, double* y);
// Solve L^T y = b (backward substitution on the same lower factor).
void solve_lower_transposed(const Mat& l, const double* b, double* y);

double dot(const double* a, const double* b, int n);

namespace ref {
void matvec(const Mat& w, const double* x, double* y);
void matvec_acc(const Mat& w, const double* x, double* y);
void tmatvec_acc(const Mat& w, const double* x, double* y);
void outer_acc(Mat& g, const double* u, const double* v);
void matmul(const Mat& a, const Mat& b, Mat& c);
}  // namespace ref

}  // namespace sslm::kern
