// Copyright 2026 The siwsample Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIW_MATRIX_HPP
#define SIW_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "siw/errors.hpp"

namespace siw {

/// Dense square matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() : dim_(0) {}
  explicit SquareMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim, 0.0) {
    if (dim < 1) throw ParameterError("matrix dimension must be >= 1");
  }

  static SquareMatrix identity(int dim) { return scaled_identity(dim, 1.0); }
  static SquareMatrix scaled_identity(int dim, double c) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = c;
    return m;
  }

  int dim() const { return dim_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * dim_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * dim_ + c]; }

  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * dim_; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * dim_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool operator==(const SquareMatrix& o) const = default;

 private:
  int dim_;
  std::vector<double> data_;
};

/// K x K orthonormal matrix, stored column-major so that individual columns
/// are contiguous (they are the unit vectors the sampler operates on).
class OrthogonalMatrix {
 public:
  OrthogonalMatrix() : dim_(0) {}
  explicit OrthogonalMatrix(int dim)
      : dim_(dim), cols_(static_cast<std::size_t>(dim) * dim, 0.0) {
    if (dim < 1) throw ParameterError("matrix dimension must be >= 1");
  }

  int dim() const { return dim_; }

  std::span<double> col(int c) {
    return {cols_.data() + static_cast<std::size_t>(c) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> col(int c) const {
    return {cols_.data() + static_cast<std::size_t>(c) * dim_, static_cast<std::size_t>(dim_)};
  }

  double at(int r, int c) const { return cols_[static_cast<std::size_t>(c) * dim_ + r]; }
  double& at(int r, int c) { return cols_[static_cast<std::size_t>(c) * dim_ + r]; }

  SquareMatrix to_dense() const {
    SquareMatrix m(dim_);
    for (int c = 0; c < dim_; ++c)
      for (int r = 0; r < dim_; ++r) m(r, c) = at(r, c);
    return m;
  }

  /// Columns reordered as cols[i] = old cols[perm[i]].
  OrthogonalMatrix permuted_columns(std::span<const int> perm) const;

  /// max |Q'Q - I| — orthonormality defect.
  double orthonormality_defect() const;

 private:
  int dim_;
  std::vector<double> cols_;
};

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b);

/// max |A - A'|.
double symmetry_defect(const SquareMatrix& a);

/// In-place (A + A')/2.
void symmetrize(SquareMatrix& a);

/// Cholesky test for positive definiteness (lower factor discarded).
bool is_positive_definite(const SquareMatrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const SquareMatrix& a);

}  // namespace siw

#endif
