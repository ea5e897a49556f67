#include "flowevade/kernels.hpp"

#include <stdexcept>

namespace flowevade::kernels {

namespace {

void check_matmul(const Matrix& a, const Matrix& b, std::size_t a_inner, std::size_t b_inner) {
  if (a_inner != b_inner) throw std::invalid_argument("matmul: inner dimension mismatch");
  (void)a;
  (void)b;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a, b, a.cols(), b.rows());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
#pragma omp parallel for schedule(static)
  for (long long ir = 0; ir < static_cast<long long>(m); ++ir) {
    const std::size_t i = static_cast<std::size_t>(ir);
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.row(p);
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  check_matmul(a, b, a.cols(), b.cols());
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Matrix c(m, n);
#pragma omp parallel for schedule(static)
  for (long long ir = 0; ir < static_cast<long long>(m); ++ir) {
    const std::size_t i = static_cast<std::size_t>(ir);
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] = acc;
    }
  }
  return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
  check_matmul(a, b, a.rows(), b.rows());
  const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
  Matrix c(m, n);
#pragma omp parallel for schedule(static)
  for (long long ir = 0; ir < static_cast<long long>(m); ++ir) {
    const std::size_t i = static_cast<std::size_t>(ir);
    double* crow = c.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(p, i);
      if (av == 0.0) continue;
      const double* brow = b.row(p);
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

void add_row_vector(Matrix& m, const std::vector<double>& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("add_row_vector: width mismatch");
#pragma omp parallel for schedule(static)
  for (long long ir = 0; ir < static_cast<long long>(m.rows()); ++ir) {
    double* row = m.row(static_cast<std::size_t>(ir));
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += v[c];
  }
}

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> sums(m.cols(), 0.0);
#pragma omp parallel for schedule(static)
  for (long long cr = 0; cr < static_cast<long long>(m.cols()); ++cr) {
    const std::size_t c = static_cast<std::size_t>(cr);
    double acc = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) acc += m(r, c);
    sums[c] = acc;
  }
  return sums;
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a, b, a.cols(), b.rows());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.row(p);
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  check_matmul(a, b, a.cols(), b.cols());
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Matrix c(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] = acc;
    }
  }
  return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
  check_matmul(a, b, a.rows(), b.rows());
  const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
  Matrix c(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(p, i);
      if (av == 0.0) continue;
      const double* brow = b.row(p);
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

void add_row_vector(Matrix& m, const std::vector<double>& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("add_row_vector: width mismatch");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += v[c];
  }
}

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> sums(m.cols(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) acc += m(r, c);
    sums[c] = acc;
  }
  return sums;
}

}  // namespace serial

}  // namespace flowevade::kernels
