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

#include "siw/randmat.hpp"

#include <cmath>
#include <vector>

#include "siw/kernels.hpp"

namespace siw {

OrthogonalMatrix sample_haar_orthogonal(int dim, RandomStream& rng) {
  if (dim < 1) throw ParameterError("sample_haar_orthogonal: dimension must be >= 1");
  const auto& k = kernels::active();
  const int n = dim;

  // Gaussian matrix in column-major storage; Householder QR then works on
  // contiguous spans. Column j below the diagonal doubles as storage for the
  // reflector v_j (v_j[0] = 1 implicit).
  OrthogonalMatrix a(n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) a.at(r, c) = rng.normal();

  std::vector<double> tau(n, 0.0);
  std::vector<double> rdiag(n, 0.0);

  for (int j = 0; j < n; ++j) {
    double* x = a.col(j).data() + j;
    const std::size_t m = static_cast<std::size_t>(n - j);
    double norm = std::sqrt(k.dot(x, x, m));
    if (norm == 0.0) {
      tau[j] = 0.0;
      rdiag[j] = 0.0;
      continue;
    }
    const double alpha = (x[0] >= 0.0) ? -norm : norm;
    const double v0 = x[0] - alpha;
    x[0] = alpha;  // R diagonal entry
    if (m > 1) k.scal(1.0 / v0, x + 1, m - 1);
    tau[j] = -v0 / alpha;
    rdiag[j] = alpha;

    // Reflect the trailing columns.
    for (int c = j + 1; c < n; ++c) {
      double* y = a.col(c).data() + j;
      double s = y[0];
      if (m > 1) s += k.dot(x + 1, y + 1, m - 1);
      s *= tau[j];
      y[0] -= s;
      if (m > 1) k.axpy(-s, x + 1, y + 1, m - 1);
    }
  }

  // Back-accumulate Q = H_0 H_1 ... H_{n-1} applied to the identity.
  OrthogonalMatrix q(n);
  for (int c = 0; c < n; ++c) q.at(c, c) = 1.0;
  for (int j = n - 1; j >= 0; --j) {
    if (tau[j] == 0.0) continue;
    const double* v = a.col(j).data() + j;  // v[0] implicit 1
    const std::size_t m = static_cast<std::size_t>(n - j);
    for (int c = 0; c < n; ++c) {
      double* y = q.col(c).data() + j;
      double s = y[0];
      if (m > 1) s += k.dot(v + 1, y + 1, m - 1);
      s *= tau[j];
      y[0] -= s;
      if (m > 1) k.axpy(-s, v + 1, y + 1, m - 1);
    }
  }

  // Positive-diagonal correction: flip each column by the sign of R_jj.
  for (int j = 0; j < n; ++j) {
    if (rdiag[j] < 0.0) k.scal(-1.0, q.col(j).data(), static_cast<std::size_t>(n));
  }
  return q;
}

double sample_gamma(double shape, RandomStream& rng) {
  if (!(shape > 0.0)) throw ParameterError("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_inverse_gamma(double shape, double scale, RandomStream& rng) {
  if (!(shape > 0.0)) throw ParameterError("sample_inverse_gamma: shape must be > 0");
  if (!(scale > 0.0)) throw ParameterError("sample_inverse_gamma: scale must be > 0");
  return scale / sample_gamma(shape, rng);
}

}  // namespace siw
