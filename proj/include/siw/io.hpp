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

#ifndef SIW_IO_HPP
#define SIW_IO_HPP

#include <string>

#include "siw/experiments.hpp"
#include "siw/sir.hpp"
#include "siw/types.hpp"

namespace siw::io {

/// Shortest-round-trip decimal rendering ("%.17g"); all CSV numbers go
/// through this so identical runs produce byte-identical files.
std::string format_double(double v);

/// Batch as CSV: one row per output sample, K^2 columns of row-major Sigma
/// entries, header sigma_r_c.
void write_batch_csv(const std::string& path, const SampleBatch& batch);

/// Provenance sidecar.
void write_provenance_json(const std::string& path, const Provenance& prov);

/// Per-proposal weight diagnostics: columns m, log_weight,
/// log_weight_clipped, p_m.
void write_diagnostics_csv(const std::string& path, const WeightVector& weights);

/// Summary sidecar: ESS, ESS_percent, max/min log weight, M, M_T.
void write_diagnostics_summary_json(const std::string& path, const WeightVector& weights,
                                    double ess_value, double ess_percent);

/// Scale matrix as plain text: K rows of K whitespace-separated decimals.
void write_psi_matrix(const std::string& path, const SquareMatrix& psi);

/// Reads a K x K matrix; validates symmetry within 1e-8, symmetrizes with a
/// warning when the defect is nonzero, and requires positive definiteness.
SquareMatrix read_psi_matrix(const std::string& path);

/// Experiment config in flat key = value form (# comments allowed).
/// Keys: kind, K, nu, psi, c, psi_file, m_grid, k_grid, n_rule,
/// clip_exponent, repetitions, seed, threads, full, algorithm, out_dir.
ExperimentConfig read_config(const std::string& path);

/// Run manifest: command, version, seed, parameters, output files.
/// Deliberately carries no timestamps so reruns are byte-identical.
void write_manifest(const std::string& path, const std::string& command,
                    std::uint64_t seed, const std::string& parameters_json,
                    const std::vector<std::string>& outputs);

void write_moment_validation_csv(const std::string& path,
                                 const std::vector<MomentValidationRow>& rows);
void write_curve_csv(const std::string& path, const std::vector<CurveRecord>& records);
void write_curve_summary_csv(const std::string& path, const std::vector<CurveRecord>& records);
void write_curve_timing_csv(const std::string& path, const std::vector<CurveRecord>& records);
void write_ess_table_csv(const std::string& path, const std::vector<EssTableRow>& rows);
void write_runtime_csv(const std::string& path, const std::vector<RuntimeRow>& rows);

}  // namespace siw::io

#endif
