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

#include "siw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "siw/version.hpp"

namespace siw::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline games
  if (!out) throw IOError("cannot open for writing: " + path);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_batch_csv(const std::string& path, const SampleBatch& batch) {
  auto out = open_out(path);
  const int n = batch.dim;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      out << (r == 0 && c == 0 ? "" : ",") << "sigma_" << r << "_" << c;
  out << "\n";
  for (std::size_t i = 0; i < batch.size(); ++i) {
    SquareMatrix sigma = batch.factor(i).compose();
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (j) out << ',';
      out << format_double(sigma.data()[j]);
    }
    out << "\n";
  }
}

namespace {
nlohmann::json provenance_json(const Provenance& prov) {
  nlohmann::json j;
  j["algorithm"] = prov.algorithm;
  j["seed"] = prov.seed;
  j["stream_index"] = prov.stream_index;
  j["nu"] = prov.nu;
  j["K"] = prov.dim;
  j["psi"] = prov.psi_descriptor;
  j["M"] = prov.proposal_count;
  j["N"] = prov.sample_count;
  j["M_T"] = prov.clip_count;
  j["version"] = kVersion;
  return j;
}
}  // namespace

void write_provenance_json(const std::string& path, const Provenance& prov) {
  auto out = open_out(path);
  out << provenance_json(prov).dump(2) << "\n";
}

void write_diagnostics_csv(const std::string& path, const WeightVector& weights) {
  auto out = open_out(path);
  out << "m,log_weight,log_weight_clipped,p_m\n";
  for (std::size_t m = 0; m < weights.log_weights.size(); ++m) {
    out << m << ',' << format_double(weights.log_weights[m]) << ','
        << format_double(weights.log_weights_clipped[m]) << ','
        << format_double(weights.probabilities[m]) << "\n";
  }
}

void write_diagnostics_summary_json(const std::string& path, const WeightVector& weights,
                                    double ess_value, double ess_percent) {
  double maxlw = weights.log_weights.front();
  double minlw = weights.log_weights.front();
  for (double lw : weights.log_weights) {
    maxlw = std::max(maxlw, lw);
    minlw = std::min(minlw, lw);
  }
  nlohmann::json j;
  j["ESS"] = ess_value;
  j["ESS_percent"] = ess_percent;
  j["max_log_weight"] = maxlw;
  j["min_log_weight"] = minlw;
  j["M"] = weights.log_weights.size();
  j["M_T"] = weights.clipped ? weights.clip_threshold_index : 0;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_psi_matrix(const std::string& path, const SquareMatrix& psi) {
  auto out = open_out(path);
  for (int r = 0; r < psi.dim(); ++r) {
    for (int c = 0; c < psi.dim(); ++c) {
      if (c) out << ' ';
      out << format_double(psi(r, c));
    }
    out << "\n";
  }
}

SquareMatrix read_psi_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open psi file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    double v;
    while (ss >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IOError("psi file is empty: " + path);
  const int n = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n)
      throw IOError("psi file is not a square matrix: " + path);
  }
  SquareMatrix psi(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) psi(r, c) = rows[r][c];

  const double defect = symmetry_defect(psi);
  if (defect > 1e-8)
    throw ParameterError("psi file is not symmetric within 1e-8 (defect " +
                         format_double(defect) + ")");
  if (defect > 0.0) {
    std::cerr << "warning: psi symmetrized, asymmetry defect " << defect << "\n";
    symmetrize(psi);
  }
  if (!is_positive_definite(psi))
    throw ParameterError("psi file matrix is not positive definite");
  return psi;
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "kind") {
        if (value == "moment-validation") cfg.kind = ExperimentKind::moment_validation;
        else if (value == "ess-table") cfg.kind = ExperimentKind::ess_table;
        else if (value == "convergence-curve") cfg.kind = ExperimentKind::convergence_curve;
        else if (value == "runtime") cfg.kind = ExperimentKind::runtime;
        else throw ParameterError("unknown kind: " + value);
      } else if (key == "K") {
        cfg.dim = std::stoi(value);
      } else if (key == "nu") {
        cfg.nu = std::stod(value);
      } else if (key == "psi") {
        if (value == "case1") cfg.psi = PsiSpec::case1;
        else if (value == "case2") cfg.psi = PsiSpec::case2;
        else if (value == "identity-scaled") cfg.psi = PsiSpec::identity_scaled;
        else if (value == "file") cfg.psi = PsiSpec::file;
        else throw ParameterError("unknown psi spec: " + value);
      } else if (key == "c") {
        cfg.c = std::stod(value);
      } else if (key == "psi_file") {
        cfg.psi_file = value;
        cfg.psi = PsiSpec::file;
      } else if (key == "m_grid") {
        cfg.m_grid.clear();
        for (const auto& tok : split(value, ',')) cfg.m_grid.push_back(std::stoll(tok));
      } else if (key == "k_grid") {
        cfg.k_grid.clear();
        for (const auto& tok : split(value, ',')) cfg.k_grid.push_back(std::stoi(tok));
      } else if (key == "n_rule") {
        cfg.n_rule = std::stod(value);
      } else if (key == "clip_exponent") {
        cfg.clip_exponent = std::stod(value);
      } else if (key == "repetitions") {
        cfg.repetitions = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "threads") {
        cfg.threads = std::stoi(value);
      } else if (key == "full") {
        cfg.full = (value == "true" || value == "1" || value == "yes");
      } else if (key == "algorithm") {
        cfg.algorithm = value;
      } else if (key == "out_dir") {
        cfg.out_dir = value;
      } else {
        throw ParameterError("unknown config key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw ParameterError("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  return cfg;
}

void write_manifest(const std::string& path, const std::string& command,
                    std::uint64_t seed, const std::string& parameters_json,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["parameters"] = nlohmann::json::parse(parameters_json);
  j["outputs"] = outputs;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_moment_validation_csv(const std::string& path,
                                 const std::vector<MomentValidationRow>& rows) {
  auto out = open_out(path);
  out << "K,N,p,e_p\n";
  for (const auto& r : rows) {
    out << r.dim << ',' << r.n_samples << ',' << r.p << ','
        << (r.available ? format_double(r.e_p) : "NA") << "\n";
  }
}

void write_curve_csv(const std::string& path, const std::vector<CurveRecord>& records) {
  auto out = open_out(path);
  out << "M,repetition,e1_sir,sqrtM_e1,ess_percent\n";
  for (const auto& r : records) {
    out << r.proposal_count << ',' << r.repetition << ',' << format_double(r.e1_sir) << ','
        << format_double(r.sqrt_m_e1) << ',' << format_double(r.ess_percent) << "\n";
  }
}

void write_curve_summary_csv(const std::string& path,
                             const std::vector<CurveRecord>& records) {
  // Mean and standard deviation across repetitions, per M.
  std::vector<long long> ms;
  for (const auto& r : records)
    if (ms.empty() || ms.back() != r.proposal_count) ms.push_back(r.proposal_count);
  auto out = open_out(path);
  out << "M,mean_e1_sir,sd_e1_sir,mean_sqrtM_e1,sd_sqrtM_e1,mean_ess_percent\n";
  for (long long m : ms) {
    double n = 0, s1 = 0, s2 = 0, q1 = 0, q2 = 0, e = 0;
    for (const auto& r : records) {
      if (r.proposal_count != m) continue;
      n += 1;
      s1 += r.e1_sir;
      q1 += r.e1_sir * r.e1_sir;
      s2 += r.sqrt_m_e1;
      q2 += r.sqrt_m_e1 * r.sqrt_m_e1;
      e += r.ess_percent;
    }
    const double m1 = s1 / n, m2 = s2 / n;
    const double v1 = n > 1 ? std::max(0.0, (q1 - n * m1 * m1) / (n - 1)) : 0.0;
    const double v2 = n > 1 ? std::max(0.0, (q2 - n * m2 * m2) / (n - 1)) : 0.0;
    out << m << ',' << format_double(m1) << ',' << format_double(std::sqrt(v1)) << ','
        << format_double(m2) << ',' << format_double(std::sqrt(v2)) << ','
        << format_double(e / n) << "\n";
  }
}

void write_curve_timing_csv(const std::string& path,
                            const std::vector<CurveRecord>& records) {
  auto out = open_out(path);
  out << "M,repetition,wall_time_s\n";
  for (const auto& r : records) {
    out << r.proposal_count << ',' << r.repetition << ',' << format_double(r.wall_time_s)
        << "\n";
  }
}

void write_ess_table_csv(const std::string& path, const std::vector<EssTableRow>& rows) {
  auto out = open_out(path);
  out << "K,nu,case,M,M_T,mean_ess_percent\n";
  for (const auto& r : rows) {
    out << r.dim << ',' << format_double(r.nu) << ',' << r.which_case << ','
        << r.proposal_count << ',';
    if (r.clip_rank > 0) out << r.clip_rank;
    out << ',' << format_double(r.mean_ess_percent) << "\n";
  }
}

void write_runtime_csv(const std::string& path, const std::vector<RuntimeRow>& rows) {
  auto out = open_out(path);
  out << "algorithm,K,size,mean_seconds\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.dim << ',' << r.size << ','
        << format_double(r.mean_seconds) << "\n";
  }
}

}  // namespace siw::io
