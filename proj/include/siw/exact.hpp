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

#ifndef SIW_EXACT_HPP
#define SIW_EXACT_HPP

#include <functional>

#include "siw/rng.hpp"
#include "siw/types.hpp"

namespace siw {

/// One exact draw from the identity-scale distribution (psi = c I):
/// Haar eigenvectors composed with K i.i.d. inverse-gamma(nu-1, c/2)
/// eigenvalues sorted in descending order (the ordered joint is recovered
/// by sorting an unordered i.i.d. vector). Eigenvalues and eigenvectors
/// are independent in this case, so no importance correction is needed.
EigenFactor sample_siw_identity_draw(double nu, double c, int dim, RandomStream& rng);

/// N independent exact draws from the identity-scale distribution.
/// Draw n consumes substream n of `rng`, so results do not depend on the
/// number of worker threads.
SampleBatch sample_siw_identity(double nu, double c, int dim, long long n_samples,
                                const RandomStream& rng, int threads = 1);

/// Streaming variant: invokes `sink(n, factor)` for every draw without
/// retaining anything. Used by the experiment runners to keep memory flat.
void sample_siw_identity_stream(double nu, double c, int dim, long long n_samples,
                                const RandomStream& rng, int threads,
                                const std::function<void(long long, EigenFactor&)>& sink);

}  // namespace siw

#endif
