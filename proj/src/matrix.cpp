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

#include "siw/matrix.hpp"

#include <cmath>
#include <cstring>

#include "siw/kernels.hpp"

namespace siw {

OrthogonalMatrix OrthogonalMatrix::permuted_columns(std::span<const int> perm) const {
  OrthogonalMatrix out(dim_);
  for (int i = 0; i < dim_; ++i) {
    auto src = col(perm[i]);
    std::memcpy(out.col(i).data(), src.data(), sizeof(double) * src.size());
  }
  return out;
}

double OrthogonalMatrix::orthonormality_defect() const {
  const auto& k = kernels::active();
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      double g = k.dot(col(i).data(), col(j).data(), static_cast<std::size_t>(dim_));
      double d = std::fabs(g - (i == j ? 1.0 : 0.0));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("matrix dimensions differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::fabs(a.data()[i] - b.data()[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

double symmetry_defect(const SquareMatrix& a) {
  double worst = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = r + 1; c < a.dim(); ++c) {
      double d = std::fabs(a(r, c) - a(c, r));
      if (d > worst) worst = d;
    }
  return worst;
}

void symmetrize(SquareMatrix& a) {
  for (int r = 0; r < a.dim(); ++r)
    for (int c = r + 1; c < a.dim(); ++c) {
      double v = 0.5 * (a(r, c) + a(c, r));
      a(r, c) = v;
      a(c, r) = v;
    }
}

bool is_positive_definite(const SquareMatrix& a) {
  const int n = a.dim();
  SquareMatrix l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0)) return false;  // also rejects NaN
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& a) {
  const int n = a.dim();
  SquareMatrix m = a;
  symmetrize(m);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (m(p, q) == 0.0) continue;
        double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace siw
