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

#include "siw/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "siw/estimators.hpp"
#include "siw/exact.hpp"
#include "siw/io.hpp"
#include "siw/kernels.hpp"
#include "siw/parallel.hpp"
#include "siw/randmat.hpp"
#include "siw/sir.hpp"

namespace siw {

namespace {

// Experiment stream layout under the master seed: substream 0 generates psi,
// substreams 2 + cell-linearized indices drive the runs. Pure functions of
// the config, never of thread scheduling.
constexpr std::uint64_t kPsiSubstream = 0;
constexpr std::uint64_t kRunSubstreamBase = 2;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void ExperimentConfig::apply_default_grids() {
  if (m_grid.empty()) {
    switch (kind) {
      case ExperimentKind::moment_validation:
        m_grid = {100, 1100, 2100};  // acts as the N grid here
        break;
      case ExperimentKind::ess_table:
        m_grid = full ? std::vector<long long>{500, 2500, 4500, 6500, 8500, 10000}
                      : std::vector<long long>{500, 2500, 4500};
        break;
      case ExperimentKind::convergence_curve:
        if (full) {
          for (long long m = 500; m <= 10000; m += 500) m_grid.push_back(m);
        } else {
          m_grid = {500, 1000, 2000, 4000, 8000};
        }
        break;
      case ExperimentKind::runtime:
        if (algorithm == "exact") {
          m_grid = {100, 1100, 2100};  // N grid
        } else {
          m_grid = full ? std::vector<long long>{500, 2500, 4500, 6500, 8500, 10000}
                        : std::vector<long long>{500, 2500};
        }
        break;
    }
  }
  if (k_grid.empty()) {
    k_grid = full ? std::vector<int>{10, 100, 1000} : std::vector<int>{10, 100};
  }
}

void ExperimentConfig::validate() const {
  if (dim < 1) throw ParameterError("config: K must be >= 1");
  if (!(nu > 1.0)) throw ParameterError("config: nu must be > 1");
  if (repetitions < 1) throw ParameterError("config: repetitions must be >= 1");
  if (!(n_rule > 0.0)) throw ParameterError("config: n_rule must be > 0");
  if (clip_exponent && !(*clip_exponent > 0.0 && *clip_exponent <= 1.0))
    throw ParameterError("config: clip_exponent must be in (0, 1]");
  for (std::size_t i = 1; i < m_grid.size(); ++i) {
    if (m_grid[i] <= m_grid[i - 1])
      throw ParameterError("config: m_grid must be strictly increasing");
  }
  if (kind == ExperimentKind::runtime && algorithm != "exact" && algorithm != "sir")
    throw ParameterError("config: algorithm must be exact or sir");
}

SquareMatrix gen_psi_case(int dim, int which_case, RandomStream& rng) {
  if (dim < 2) throw ParameterError("gen_psi_case: K must be >= 2 (two eigenvalues are pinned)");
  if (which_case != 1 && which_case != 2)
    throw ParameterError("gen_psi_case: case must be 1 or 2");
  EigenFactor f;
  f.gamma = sample_haar_orthogonal(dim, rng);
  f.lambdas.resize(dim);
  if (which_case == 1) {
    f.lambdas[0] = 2.0;
    f.lambdas[1] = 1.01;
    for (int i = 2; i < dim; ++i) f.lambdas[i] = rng.uniform(0.01, 1.0) + 1.0;
  } else {
    f.lambdas[0] = 1.0;
    f.lambdas[1] = 1.01;
    for (int i = 2; i < dim; ++i) f.lambdas[i] = rng.uniform(0.01, 1.0);
  }
  return f.compose();
}

SquareMatrix resolve_psi(const ExperimentConfig& config) {
  switch (config.psi) {
    case PsiSpec::identity_scaled:
      return SquareMatrix::scaled_identity(config.dim, config.c);
    case PsiSpec::case1:
    case PsiSpec::case2: {
      RandomStream psi_rng = RandomStream(config.seed).substream(kPsiSubstream);
      return gen_psi_case(config.dim, config.psi == PsiSpec::case1 ? 1 : 2, psi_rng);
    }
    case PsiSpec::file:
      return io::read_psi_matrix(config.psi_file);
  }
  throw ParameterError("resolve_psi: unknown psi spec");
}

std::vector<MomentValidationRow> run_moment_validation(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.apply_default_grids();
  config.validate();
  if (config.psi != PsiSpec::identity_scaled)
    throw ParameterError("moment validation runs on identity-scaled psi only");

  const auto& kops = kernels::active();
  RandomStream root(config.seed);
  std::vector<MomentValidationRow> rows;
  const int powers[3] = {-1, 1, 2};

  std::uint64_t cell = 0;
  for (int dim : config.k_grid) {
    for (long long n : config.m_grid) {
      RandomStream cell_rng = root.substream(kRunSubstreamBase + cell);
      ++cell;

      // Stream the draws; accumulate sum of Sigma^p in index order (chunked
      // so the QR work runs in parallel while accumulation stays ordered).
      SquareMatrix acc[3] = {SquareMatrix(dim), SquareMatrix(dim), SquareMatrix(dim)};
      const long long chunk = 256;
      for (long long base = 0; base < n; base += chunk) {
        const long long hi = std::min(n, base + chunk);
        std::vector<std::array<SquareMatrix, 3>> block(static_cast<std::size_t>(hi - base));
        parallel_for(hi - base, config.threads, [&](long long j) {
          RandomStream sub = cell_rng.substream(static_cast<std::uint64_t>(base + j));
          EigenFactor f = sample_siw_identity_draw(config.nu, config.c, dim, sub);
          for (int pi = 0; pi < 3; ++pi)
            block[static_cast<std::size_t>(j)][pi] = f.compose_power(powers[pi]);
        });
        for (auto& mats : block)
          for (int pi = 0; pi < 3; ++pi)
            kops.axpy(1.0, mats[pi].data(), acc[pi].data(), mats[pi].size());
      }

      for (int pi = 0; pi < 3; ++pi) {
        MomentValidationRow row{dim, n, powers[pi], 0.0, true};
        kops.scal(1.0 / static_cast<double>(n), acc[pi].data(), acc[pi].size());
        try {
          const SquareMatrix truth =
              theoretical_moment_identity(config.nu, config.c, powers[pi], dim);
          row.e_p = error_ep(acc[pi], truth);
        } catch (const ParameterError&) {
          row.available = false;
          row.e_p = std::nan("");
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<CurveRecord> run_convergence_experiment(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.apply_default_grids();
  config.validate();

  const SquareMatrix psi = resolve_psi(config);
  if (!config.out_dir.empty() &&
      (config.psi == PsiSpec::case1 || config.psi == PsiSpec::case2)) {
    io::write_psi_matrix(config.out_dir + "/psi.txt", psi);
  }
  const SIWParams params(config.nu, psi);
  RandomStream root(config.seed);

  std::vector<CurveRecord> records;
  for (std::size_t j = 0; j < config.m_grid.size(); ++j) {
    const long long m = config.m_grid[j];
    const long long n = static_cast<long long>(std::llround(config.n_rule * m));
    const long long clip_rank =
        config.clip_exponent ? clip_rank_from_exponent(m, *config.clip_exponent) : 0;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const std::uint64_t pair_base =
          kRunSubstreamBase +
          2 * (static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(config.repetitions) +
               static_cast<std::uint64_t>(rep));
      const auto t0 = std::chrono::steady_clock::now();
      SirRunSummary a =
          sir_run_summary(params, m, clip_rank, n, root.substream(pair_base), config.threads);
      SirRunSummary b =
          sir_run_summary(params, m, clip_rank, n, root.substream(pair_base + 1), config.threads);
      CurveRecord rec;
      rec.proposal_count = m;
      rec.repetition = rep;
      rec.e1_sir = error_ep(a.mean_sigma, b.mean_sigma);
      rec.sqrt_m_e1 = std::sqrt(static_cast<double>(m)) * rec.e1_sir;
      rec.ess_percent = 0.5 * (a.ess_percent + b.ess_percent);
      rec.wall_time_s = seconds_since(t0);
      records.push_back(rec);
    }
  }
  return records;
}

std::vector<EssTableRow> run_ess_table(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.apply_default_grids();
  config.validate();

  const SquareMatrix psi = resolve_psi(config);
  const SIWParams params(config.nu, psi);
  RandomStream root(config.seed);
  const int which_case =
      config.psi == PsiSpec::case1 ? 1 : (config.psi == PsiSpec::case2 ? 2 : 0);

  std::vector<EssTableRow> rows;
  for (std::size_t j = 0; j < config.m_grid.size(); ++j) {
    const long long m = config.m_grid[j];
    const long long clip_rank =
        config.clip_exponent ? clip_rank_from_exponent(m, *config.clip_exponent) : 0;
    double total = 0.0;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const std::uint64_t idx =
          kRunSubstreamBase +
          static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(config.repetitions) +
          static_cast<std::uint64_t>(rep);
      std::vector<double> lw =
          proposal_log_weights(params, m, root.substream(idx), config.threads);
      if (clip_rank > 0) lw = clip_log_weights(lw, clip_rank);
      const std::vector<double> p = normalize_weights(lw);
      total += 100.0 * ess(p) / static_cast<double>(m);
    }
    rows.push_back(EssTableRow{config.dim, config.nu, which_case, m, clip_rank,
                               total / config.repetitions});
  }
  return rows;
}

std::vector<RuntimeRow> run_runtime_benchmark(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.apply_default_grids();
  config.validate();

  RandomStream root(config.seed);
  std::vector<RuntimeRow> rows;
  std::uint64_t cell = 0;
  for (int dim : config.k_grid) {
    // Case matrices need K >= 2; the benchmark reuses one psi per dimension.
    SquareMatrix psi = SquareMatrix::scaled_identity(dim, config.c);
    if (config.algorithm == "sir" && config.psi != PsiSpec::identity_scaled && dim >= 2) {
      RandomStream psi_rng = RandomStream(config.seed).substream(kPsiSubstream + cell + 1);
      psi = gen_psi_case(dim, config.psi == PsiSpec::case2 ? 2 : 1, psi_rng);
    }
    for (long long size : config.m_grid) {
      double total = 0.0;
      for (int rep = 0; rep < config.repetitions; ++rep) {
        RandomStream run_rng = root.substream(kRunSubstreamBase + cell);
        ++cell;
        const auto t0 = std::chrono::steady_clock::now();
        if (config.algorithm == "exact") {
          sample_siw_identity_stream(config.nu, config.c, dim, size, run_rng, config.threads,
                                     [](long long, EigenFactor&) {});
        } else {
          // Per convention, only proposal sampling is timed for SIR.
          const SIWParams params(config.nu, psi);
          parallel_for(size, config.threads, [&](long long m) {
            RandomStream sub = run_rng.substream(1 + static_cast<std::uint64_t>(m));
            ProposalDraw draw = sample_proposal(params, sub);
            (void)draw;
          });
        }
        total += seconds_since(t0);
      }
      rows.push_back(
          RuntimeRow{config.algorithm, dim, size, total / config.repetitions});
    }
  }
  return rows;
}

}  // namespace siw
