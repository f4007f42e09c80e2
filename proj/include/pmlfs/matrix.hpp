#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace pmlfs {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// aᵀ·b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a·bᵀ without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double frobenius_sq(const Matrix& a);
std::vector<double> row_l2_norms(const Matrix& a);

/// Sum of row-wise L2 norms.
double l21_norm(const Matrix& a);

double min_entry(const Matrix& a);
double max_entry(const Matrix& a);
bool all_finite(const Matrix& a);

/// Throws ShapeError unless `m` has entries all >= 0.
void require_nonnegative(const Matrix& m, std::string_view name);

/// Rows (in the given order) of `a`.
Matrix select_rows(const Matrix& a, std::span<const std::size_t> rows);
/// Columns (in the given order) of `a`.
Matrix select_cols(const Matrix& a, std::span<const std::size_t> cols);

/// Solves s·x = b for symmetric positive definite s via Cholesky.
/// `b` may hold several right-hand sides as columns.
Matrix solve_spd(const Matrix& s, const Matrix& b);

}  // namespace pmlfs
