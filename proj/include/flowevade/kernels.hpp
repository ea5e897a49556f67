#pragma once

#include <vector>

#include "flowevade/matrix.hpp"

// Dense kernels behind the network code. Each kernel comes in two flavours:
// the default OpenMP-parallel one and a serial reference twin under
// kernels::serial. Parallelism is always over output elements with a fixed
// serial inner loop, so results are bit-identical for any thread count.

namespace flowevade::kernels {

// C[m x n] = A[m x k] * B[k x n]
Matrix matmul(const Matrix& a, const Matrix& b);

// C[m x n] = A[m x k] * B[n x k]^T
Matrix matmul_bt(const Matrix& a, const Matrix& b);

// C[m x n] = A[k x m]^T * B[k x n]
Matrix matmul_at(const Matrix& a, const Matrix& b);

// M[r] += v for every row r
void add_row_vector(Matrix& m, const std::vector<double>& v);

std::vector<double> column_sums(const Matrix& m);

namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_bt(const Matrix& a, const Matrix& b);
Matrix matmul_at(const Matrix& a, const Matrix& b);
void add_row_vector(Matrix& m, const std::vector<double>& v);
std::vector<double> column_sums(const Matrix& m);
}  // namespace serial

}  // namespace flowevade::kernels
