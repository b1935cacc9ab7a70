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

#ifndef SIW_KERNELS_HPP
#define SIW_KERNELS_HPP

#include <cstddef>

namespace siw::kernels {

/// Vector kernels behind the dense linear algebra inner loops (Householder
/// QR, quadratic forms, rank-1 eigencomposition, weight reductions).
///
/// Each kernel has a scalar reference implementation plus, where the target
/// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant
/// is chosen once at runtime from CPU capabilities; the choice is stable for
/// the lifetime of the process, so repeated runs on the same machine are
/// bit-identical. Set SIW_KERNELS=scalar|avx2|neon to override.
struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scal)(double a, double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // max over n >= 1 elements
  double (*max)(const double* x, std::size_t n);
};

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);

/// True if the backend is compiled in and the CPU supports it.
bool available(Backend b);

/// The kernel table for a specific backend. Throws if unavailable.
const Ops& table(Backend b);

/// The active kernel table (selected on first use).
const Ops& active();
Backend active_backend();

/// Force a backend (tests, CLI --kernels flag). Throws if unavailable.
void force_backend(Backend b);

}  // namespace siw::kernels

#endif
