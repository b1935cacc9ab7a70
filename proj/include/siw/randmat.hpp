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

#ifndef SIW_RANDMAT_HPP
#define SIW_RANDMAT_HPP

#include "siw/matrix.hpp"
#include "siw/rng.hpp"

namespace siw {

/// Orthogonal matrix distributed per the Haar measure on O(K).
///
/// QR of a K x K matrix with i.i.d. standard normal entries, with the
/// diagonal of R forced positive (each column of Q is flipped by the sign
/// of the matching R diagonal entry). Without the sign fix the factorization
/// is not distribution-free and the result is not Haar.
OrthogonalMatrix sample_haar_orthogonal(int dim, RandomStream& rng);

/// Gamma variate with the given shape and unit rate; exact for all
/// shape > 0 (Marsaglia & Tsang 2000 squeeze-rejection, with the
/// u^(1/shape) boost below shape 1).
double sample_gamma(double shape, RandomStream& rng);

/// Inverse-gamma variate: density proportional to x^(-shape-1) exp(-scale/x),
/// generated as the reciprocal of a rate-parameterized gamma variate.
/// Note: for shape below ~0.05 the distribution carries visible mass beyond
/// double range; such draws would overflow. Practical shapes here are >= 0.5.
double sample_inverse_gamma(double shape, double scale, RandomStream& rng);

}  // namespace siw

#endif
