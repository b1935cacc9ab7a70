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

#ifndef SIW_ESTIMATORS_HPP
#define SIW_ESTIMATORS_HPP

#include <functional>
#include <optional>
#include <string>

#include "siw/types.hpp"

namespace siw {

/// Scalar test function over SPD matrices, with the minimal nu above which
/// it is square-integrable under the sampler's output law.
struct TestFunction {
  std::string id;
  std::function<double(const SquareMatrix&)> eval;
  double min_nu = 1.0;    // integrable for nu > min_nu
  bool builtin = false;   // built-in catalog entries enforce min_nu, user ones warn
};

namespace testfn {
/// f(Sigma) = Sigma_ij; needs nu > 3.
TestFunction entry(int i, int j);
/// f(Sigma) = tr(Sigma); needs nu > 3.
TestFunction trace();
/// f(Sigma) = det(Sigma); needs nu > 2K+1.
TestFunction determinant(int dim);
/// f(Sigma) = det(Sigma)^(-1/2); needs nu > 1.
TestFunction inv_sqrt_determinant();
/// Gaussian likelihood of the rows of `data` (centered at `mean`) under
/// covariance Sigma, up to the constant factor; needs nu > 1.
TestFunction gaussian_likelihood(const std::vector<std::vector<double>>& data,
                                 const std::vector<double>& mean);
/// Constant function (no integrability constraint).
TestFunction constant(double value);
}  // namespace testfn

/// (1/N) sum_n (Sigma^(n))^p via the eigen-pairs: Sigma^p = Gamma D^p Gamma'.
SquareMatrix moment_estimator(const SampleBatch& batch, int p);

/// Closed-form moments of the identity-scale distribution:
///   p=-1: 2(nu-1)/c I (nu > 1), p=1: c/(2(nu-2)) I (nu > 2),
///   p=2: c^2/(4(nu-2)(nu-3)) I (nu > 3).
/// Throws ParameterError when the moment does not exist for the given nu.
SquareMatrix theoretical_moment_identity(double nu, double c, int p, int dim);

/// Scalar moment factor from the same formulas (the diagonal value).
double theoretical_moment_scalar(double nu, double c, int p);

/// Mean absolute entrywise error (1/K^2) sum_ij |estimate - truth|.
double error_ep(const SquareMatrix& estimate, const SquareMatrix& truth);

/// (1/N) sum_n f(Sigma^(n)).
double sir_estimator(const SampleBatch& batch, const TestFunction& f);

/// Mean absolute entrywise difference between the first-moment estimates of
/// two independent batches; the empirical convergence metric.
double e1_sir(const SampleBatch& batch_a, const SampleBatch& batch_b);

}  // namespace siw

#endif
