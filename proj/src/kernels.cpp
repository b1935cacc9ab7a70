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

// Runtime kernel dispatch: CPU capability detection plus an env override.

#include "siw/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace siw::kernels {

extern const Ops kScalarOps;
#ifdef SIW_HAVE_AVX2_KERNELS
extern const Ops kAvx2Ops;
#endif
#ifdef SIW_HAVE_NEON_KERNELS
extern const Ops kNeonOps;
#endif

namespace {

bool cpu_supports_avx2_fma() {
#if defined(SIW_HAVE_AVX2_KERNELS) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_default() {
  if (const char* env = std::getenv("SIW_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && available(Backend::avx2)) return Backend::avx2;
    if (std::strcmp(env, "neon") == 0 && available(Backend::neon)) return Backend::neon;
  }
  if (available(Backend::avx2)) return Backend::avx2;
  if (available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Ops* init_active() {
  Backend b = detect_default();
  g_backend.store(b, std::memory_order_relaxed);
  const Ops* ops = &table(b);
  g_active.store(ops, std::memory_order_release);
  return ops;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_supports_avx2_fma();
    case Backend::neon:
#ifdef SIW_HAVE_NEON_KERNELS
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Ops& table(Backend b) {
  switch (b) {
    case Backend::scalar:
      return kScalarOps;
    case Backend::avx2:
#ifdef SIW_HAVE_AVX2_KERNELS
      if (cpu_supports_avx2_fma()) return kAvx2Ops;
#endif
      break;
    case Backend::neon:
#ifdef SIW_HAVE_NEON_KERNELS
      return kNeonOps;
#else
      break;
#endif
  }
  throw std::runtime_error(std::string("kernel backend unavailable: ") + backend_name(b));
}

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (!ops) ops = init_active();
  return *ops;
}

Backend active_backend() {
  active();
  return g_backend.load(std::memory_order_relaxed);
}

void force_backend(Backend b) {
  const Ops& ops = table(b);  // throws if unavailable
  g_backend.store(b, std::memory_order_relaxed);
  g_active.store(&ops, std::memory_order_release);
}

}  // namespace siw::kernels
