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

#include "siw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "siw/kernels.hpp"

namespace siw {

namespace testfn {

TestFunction entry(int i, int j) {
  TestFunction f;
  f.id = "entry(" + std::to_string(i) + "," + std::to_string(j) + ")";
  f.eval = [i, j](const SquareMatrix& s) { return s(i, j); };
  f.min_nu = 3.0;
  f.builtin = true;
  return f;
}

TestFunction trace() {
  TestFunction f;
  f.id = "trace";
  f.eval = [](const SquareMatrix& s) {
    double acc = 0.0;
    for (int i = 0; i < s.dim(); ++i) acc += s(i, i);
    return acc;
  };
  f.min_nu = 3.0;
  f.builtin = true;
  return f;
}

namespace {
// det via an unpivoted-free LU with partial pivoting; fine for SPD input.
double determinant_value(const SquareMatrix& s) {
  const int n = s.dim();
  SquareMatrix a = s;
  double det = 1.0;
  for (int j = 0; j < n; ++j) {
    int piv = j;
    for (int r = j + 1; r < n; ++r)
      if (std::fabs(a(r, j)) > std::fabs(a(piv, j))) piv = r;
    if (piv != j) {
      for (int c = 0; c < n; ++c) std::swap(a(j, c), a(piv, c));
      det = -det;
    }
    if (a(j, j) == 0.0) return 0.0;
    det *= a(j, j);
    for (int r = j + 1; r < n; ++r) {
      const double m = a(r, j) / a(j, j);
      for (int c = j; c < n; ++c) a(r, c) -= m * a(j, c);
    }
  }
  return det;
}
}  // namespace

TestFunction determinant(int dim) {
  TestFunction f;
  f.id = "determinant";
  f.eval = determinant_value;
  f.min_nu = 2.0 * dim + 1.0;
  f.builtin = true;
  return f;
}

TestFunction inv_sqrt_determinant() {
  TestFunction f;
  f.id = "inv-sqrt-determinant";
  f.eval = [](const SquareMatrix& s) { return 1.0 / std::sqrt(determinant_value(s)); };
  f.min_nu = 1.0;
  f.builtin = true;
  return f;
}

TestFunction gaussian_likelihood(const std::vector<std::vector<double>>& data,
                                 const std::vector<double>& mean) {
  TestFunction f;
  f.id = "gaussian-likelihood";
  f.min_nu = 1.0;
  f.builtin = true;
  f.eval = [data, mean](const SquareMatrix& s) {
    const int n = s.dim();
    // Cholesky solve for each centered row; likelihood up to the 2*pi factor.
    SquareMatrix l(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        double acc = s(i, j);
        for (int k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
        if (i == j) {
          if (!(acc > 0.0)) throw NumericError("gaussian_likelihood: matrix not SPD");
          l(i, i) = std::sqrt(acc);
        } else {
          l(i, j) = acc / l(j, j);
        }
      }
    }
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(l(i, i));
    double quad = 0.0;
    std::vector<double> y(n);
    for (const auto& row : data) {
      for (int i = 0; i < n; ++i) {
        double acc = row[i] - mean[i];
        for (int k = 0; k < i; ++k) acc -= l(i, k) * y[k];
        y[i] = acc / l(i, i);
      }
      for (int i = 0; i < n; ++i) quad += y[i] * y[i];
    }
    return std::exp(-static_cast<double>(data.size()) * logdet - 0.5 * quad);
  };
  return f;
}

TestFunction constant(double value) {
  TestFunction f;
  f.id = "constant";
  f.eval = [value](const SquareMatrix&) { return value; };
  f.min_nu = 1.0;
  f.builtin = false;
  return f;
}

}  // namespace testfn

SquareMatrix moment_estimator(const SampleBatch& batch, int p) {
  if (batch.indices.empty()) throw ParameterError("moment_estimator: empty batch");
  const auto& k = kernels::active();
  const int n = batch.dim;
  const auto counts = batch.pool_counts();
  const double total = static_cast<double>(batch.indices.size());

  SquareMatrix acc(n);
  for (std::size_t m = 0; m < batch.pool.size(); ++m) {
    if (counts[m] == 0) continue;
    const EigenFactor& f = batch.pool[m];
    if (p < 0) {
      const double lo = *std::min_element(f.lambdas.begin(), f.lambdas.end());
      const double hi = *std::max_element(f.lambdas.begin(), f.lambdas.end());
      if (!(lo > 0.0) || lo / hi < 1e-15)
        throw NumericError("moment_estimator: numerically singular sample");
    }
    SquareMatrix power = f.compose_power(p);
    k.axpy(static_cast<double>(counts[m]) / total, power.data(), acc.data(), power.size());
  }
  return acc;
}

double theoretical_moment_scalar(double nu, double c, int p) {
  if (!(c > 0.0)) throw ParameterError("theoretical moment: c must be > 0");
  switch (p) {
    case -1:
      if (!(nu > 1.0)) throw ParameterError("moment of order -1 requires nu > 1");
      return 2.0 * (nu - 1.0) / c;
    case 1:
      if (!(nu > 2.0)) throw ParameterError("moment of order 1 requires nu > 2");
      return c / (2.0 * (nu - 2.0));
    case 2:
      if (!(nu > 3.0)) throw ParameterError("moment of order 2 requires nu > 3");
      return c * c / (4.0 * (nu - 2.0) * (nu - 3.0));
    default:
      throw ParameterError("theoretical moment: p must be -1, 1 or 2");
  }
}

SquareMatrix theoretical_moment_identity(double nu, double c, int p, int dim) {
  return SquareMatrix::scaled_identity(dim, theoretical_moment_scalar(nu, c, p));
}

double error_ep(const SquareMatrix& estimate, const SquareMatrix& truth) {
  if (estimate.dim() != truth.dim()) throw ShapeError("error_ep: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i)
    acc += std::fabs(estimate.data()[i] - truth.data()[i]);
  const double k = static_cast<double>(estimate.dim());
  return acc / (k * k);
}

double sir_estimator(const SampleBatch& batch, const TestFunction& f) {
  if (batch.indices.empty()) throw ParameterError("sir_estimator: empty batch");
  if (batch.provenance.nu > 0.0 && !(batch.provenance.nu > f.min_nu)) {
    if (f.builtin) {
      throw ParameterError("sir_estimator: " + f.id + " requires nu > " +
                           std::to_string(f.min_nu));
    }
    std::cerr << "warning: test function " << f.id << " may not be square-integrable at nu="
              << batch.provenance.nu << "\n";
  }
  const auto counts = batch.pool_counts();
  const double total = static_cast<double>(batch.indices.size());
  double acc = 0.0;
  for (std::size_t m = 0; m < batch.pool.size(); ++m) {
    if (counts[m] == 0) continue;
    acc += static_cast<double>(counts[m]) / total * f.eval(batch.pool[m].compose());
  }
  return acc;
}

double e1_sir(const SampleBatch& batch_a, const SampleBatch& batch_b) {
  if (batch_a.dim != batch_b.dim) throw ShapeError("e1_sir: dimension mismatch");
  return error_ep(moment_estimator(batch_a, 1), moment_estimator(batch_b, 1));
}

}  // namespace siw
