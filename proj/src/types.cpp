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

#include "siw/types.hpp"

#include <cmath>

#include "siw/kernels.hpp"

namespace siw {

SIWParams::SIWParams(double nu, SquareMatrix psi) : nu_(nu), psi_(std::move(psi)) {
  if (!(nu_ > 1.0)) throw ParameterError("SIWParams: nu must be > 1");
  if (symmetry_defect(psi_) > 1e-10)
    throw ParameterError("SIWParams: psi is not symmetric within 1e-10");
  if (!is_positive_definite(psi_))
    throw ParameterError("SIWParams: psi is not positive definite");
}

SIWParams SIWParams::identity_scaled(double nu, double c, int dim) {
  if (!(c > 0.0)) throw ParameterError("SIWParams: c must be > 0");
  return SIWParams(nu, SquareMatrix::scaled_identity(dim, c));
}

SquareMatrix EigenFactor::compose_power(int p) const {
  const auto& k = kernels::active();
  const int n = dim();
  SquareMatrix out(n);
  for (int j = 0; j < n; ++j) {
    const double lp = (p == 1) ? lambdas[j] : std::pow(lambdas[j], p);
    const double* g = gamma.col(j).data();
    for (int r = 0; r < n; ++r) {
      k.axpy(lp * g[r], g, out.row(r), static_cast<std::size_t>(n));
    }
  }
  return out;
}

SquareMatrix compose(const EigenFactor& factor) { return factor.compose(); }

std::vector<std::int64_t> SampleBatch::pool_counts() const {
  std::vector<std::int64_t> counts(pool.size(), 0);
  for (auto idx : indices) ++counts[idx];
  return counts;
}

}  // namespace siw
