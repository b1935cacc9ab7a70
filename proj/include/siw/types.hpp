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

#ifndef SIW_TYPES_HPP
#define SIW_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "siw/matrix.hpp"

namespace siw {

/// Parameters of the shrinkage inverse-Wishart distribution with the
/// eigengap exponent fixed at 1: degree of freedom nu > 1 and a symmetric
/// positive-definite scale matrix psi.
class SIWParams {
 public:
  /// Validates nu > 1, symmetry of psi within 1e-10, and positive
  /// definiteness (Cholesky); throws ParameterError otherwise.
  SIWParams(double nu, SquareMatrix psi);

  /// psi = c * I_K.
  static SIWParams identity_scaled(double nu, double c, int dim);

  double nu() const { return nu_; }
  const SquareMatrix& psi() const { return psi_; }
  int dim() const { return psi_.dim(); }

 private:
  double nu_;
  SquareMatrix psi_;
};

/// Eigen-pair (lambda, Gamma) of a sample: strictly positive eigenvalues in
/// non-increasing order plus the orthonormal eigenvector matrix.
struct EigenFactor {
  std::vector<double> lambdas;
  OrthogonalMatrix gamma;

  int dim() const { return gamma.dim(); }

  /// Gamma diag(lambda^p) Gamma', accumulated column by column as rank-1
  /// updates so the result is bitwise symmetric.
  SquareMatrix compose_power(int p) const;

  /// Sigma = Gamma diag(lambda) Gamma'.
  SquareMatrix compose() const { return compose_power(1); }
};

SquareMatrix compose(const EigenFactor& factor);

/// One proposal draw of the SIR sampler: the sorted eigen-pair and its
/// unnormalized log importance weight.
struct ProposalDraw {
  EigenFactor factor;
  double log_weight;
};

/// How a batch was produced; fully determines it given the code version.
struct Provenance {
  std::string algorithm;  // "siw-exact", "siw-sir" or "siw-sir-clipped"
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  double nu = 0.0;
  int dim = 0;
  std::string psi_descriptor;
  long long proposal_count = 0;  // M; 0 for the exact sampler
  long long sample_count = 0;    // N
  long long clip_count = 0;      // M_T; 0 when no clipping
};

/// Importance weights of one SIR run, kept in the log domain.
struct WeightVector {
  std::vector<double> log_weights;          // as produced by the proposals
  std::vector<double> log_weights_clipped;  // equal to log_weights when unclipped
  std::vector<double> probabilities;        // normalized from the clipped vector
  bool clipped = false;
  long long clip_threshold_index = 0;  // M_T when clipped
};

/// Ordered collection of output samples. Samples are stored as eigen-pairs
/// in a pool plus indices into it; resampled batches reuse pool entries
/// instead of duplicating K x K matrices.
struct SampleBatch {
  int dim = 0;
  std::vector<EigenFactor> pool;
  std::vector<std::uint32_t> indices;
  Provenance provenance;

  std::size_t size() const { return indices.size(); }
  const EigenFactor& factor(std::size_t n) const { return pool[indices[n]]; }

  /// Occurrences of each pool entry among the output samples.
  std::vector<std::int64_t> pool_counts() const;
};

}  // namespace siw

#endif
