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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "siw/experiments.hpp"
#include "siw/io.hpp"
#include "siw/rng.hpp"

using namespace siw;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("siw_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("gen_psi_case validations and eigenvalue ranges") {
  RandomStream rng(40);
  CHECK_THROWS_AS(gen_psi_case(1, 1, rng), ParameterError);
  CHECK_THROWS_AS(gen_psi_case(5, 3, rng), ParameterError);

  for (int rep = 0; rep < 10; ++rep) {
    SquareMatrix psi1 = gen_psi_case(8, 1, rng);
    CHECK(symmetry_defect(psi1) <= 1e-10);
    CHECK(is_positive_definite(psi1));
    auto eig1 = symmetric_eigenvalues(psi1);
    for (double e : eig1) {
      CHECK(e >= 1.01 - 1e-9);
      CHECK(e <= 2.0 + 1e-9);
    }

    SquareMatrix psi2 = gen_psi_case(8, 2, rng);
    CHECK(is_positive_definite(psi2));
    auto eig2 = symmetric_eigenvalues(psi2);
    for (double e : eig2) {
      CHECK(e >= 0.01 - 1e-9);
      CHECK(e <= 1.01 + 1e-9);
    }
    // The top pinned pair is always present.
    CHECK(eig2.back() == doctest::Approx(1.01).epsilon(1e-9));
  }
}

TEST_CASE("case 1 yields higher ESS than case 2 at matched settings") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ess_table;
  cfg.dim = 10;
  cfg.nu = 4.0;
  cfg.m_grid = {300};
  cfg.repetitions = 3;
  cfg.seed = 101;

  cfg.psi = PsiSpec::case1;
  const double ess1 = run_ess_table(cfg).front().mean_ess_percent;
  cfg.psi = PsiSpec::case2;
  const double ess2 = run_ess_table(cfg).front().mean_ess_percent;
  CHECK(ess1 > ess2);
  CHECK(ess1 > 90.0);
}

TEST_CASE("clipping can only raise the mean ESS") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ess_table;
  cfg.dim = 10;
  cfg.nu = 20.0;
  cfg.psi = PsiSpec::case2;
  cfg.m_grid = {400};
  cfg.repetitions = 3;
  cfg.seed = 102;

  const double unclipped = run_ess_table(cfg).front().mean_ess_percent;
  cfg.clip_exponent = 0.8;
  const auto clipped_row = run_ess_table(cfg).front();
  CHECK(clipped_row.clip_rank == clip_rank_from_exponent(400, 0.8));
  CHECK(clipped_row.mean_ess_percent >= unclipped);
}

TEST_CASE("moment validation rows and availability flags") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::moment_validation;
  cfg.psi = PsiSpec::identity_scaled;
  cfg.nu = 2.5;  // p=2 moment does not exist, p=1 and p=-1 do
  cfg.c = 1.0;
  cfg.k_grid = {3};
  cfg.m_grid = {500};
  cfg.seed = 103;

  auto rows = run_moment_validation(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    if (row.p == 2) {
      CHECK(!row.available);
    } else {
      CHECK(row.available);
      CHECK(row.e_p >= 0.0);
      CHECK(std::isfinite(row.e_p));
    }
  }
}

TEST_CASE("moment validation requires identity-scaled psi") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::moment_validation;
  cfg.psi = PsiSpec::case1;
  CHECK_THROWS_AS(run_moment_validation(cfg), ParameterError);
}

TEST_CASE("convergence records: structure and determinism") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::convergence_curve;
  cfg.dim = 4;
  cfg.nu = 4.0;
  cfg.psi = PsiSpec::case1;
  cfg.m_grid = {100, 200};
  cfg.repetitions = 2;
  cfg.seed = 104;
  cfg.threads = 1;

  auto records = run_convergence_experiment(cfg);
  REQUIRE(records.size() == 4);
  for (const auto& r : records) {
    CHECK(r.e1_sir >= 0.0);
    CHECK(r.sqrt_m_e1 == std::sqrt(static_cast<double>(r.proposal_count)) * r.e1_sir);
    CHECK(r.ess_percent >= 0.0);
    CHECK(r.ess_percent <= 100.0);
  }

  auto again = run_convergence_experiment(cfg);
  cfg.threads = 3;
  auto threaded = run_convergence_experiment(cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].e1_sir == again[i].e1_sir);
    CHECK(records[i].e1_sir == threaded[i].e1_sir);
    CHECK(records[i].ess_percent == threaded[i].ess_percent);
  }
}

TEST_CASE("config grid validation") {
  ExperimentConfig cfg;
  cfg.m_grid = {500, 500};
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.m_grid = {500, 400};
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.m_grid = {500, 1000};
  cfg.repetitions = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.repetitions = 1;
  cfg.clip_exponent = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.clip_exponent = 0.8;
  cfg.validate();
}

TEST_CASE("runtime benchmark rows") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::runtime;
  cfg.algorithm = "exact";
  cfg.nu = 4.0;
  cfg.c = 1.0;
  cfg.k_grid = {3};
  cfg.m_grid = {50, 100};
  cfg.repetitions = 2;
  cfg.seed = 105;
  auto rows = run_runtime_benchmark(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.mean_seconds >= 0.0);
    CHECK(r.algorithm == "exact");
  }

  cfg.algorithm = "sir";
  cfg.psi = PsiSpec::case1;
  cfg.m_grid = {50};
  auto sir_rows = run_runtime_benchmark(cfg);
  REQUIRE(sir_rows.size() == 1);
  CHECK(sir_rows[0].mean_seconds >= 0.0);
}

TEST_CASE("psi file round trip is exact") {
  auto dir = temp_dir("psi_roundtrip");
  RandomStream rng(106);
  SquareMatrix psi = gen_psi_case(5, 2, rng);
  const auto path = (dir / "psi.txt").string();
  io::write_psi_matrix(path, psi);
  SquareMatrix back = io::read_psi_matrix(path);
  CHECK(max_abs_diff(psi, back) == 0.0);
}

TEST_CASE("psi file validation") {
  auto dir = temp_dir("psi_validate");
  {
    std::ofstream out(dir / "bad_shape.txt");
    out << "1 0\n0 1\n0 0\n";
  }
  CHECK_THROWS_AS(io::read_psi_matrix((dir / "bad_shape.txt").string()), IOError);
  {
    std::ofstream out(dir / "asym.txt");
    out << "1 0.5\n0 1\n";
  }
  CHECK_THROWS_AS(io::read_psi_matrix((dir / "asym.txt").string()), ParameterError);
  {
    // Asymmetry below the 1e-8 gate: symmetrized with a warning.
    std::ofstream out(dir / "tiny_asym.txt");
    out << "1 1e-11\n0 1\n";
  }
  SquareMatrix fixed = io::read_psi_matrix((dir / "tiny_asym.txt").string());
  CHECK(fixed(0, 1) == fixed(1, 0));
  CHECK_THROWS_AS(io::read_psi_matrix((dir / "missing.txt").string()), IOError);
  {
    std::ofstream out(dir / "indef.txt");
    out << "1 2\n2 1\n";
  }
  CHECK_THROWS_AS(io::read_psi_matrix((dir / "indef.txt").string()), ParameterError);
}

TEST_CASE("config file parsing") {
  auto dir = temp_dir("config");
  {
    std::ofstream out(dir / "exp.cfg");
    out << "# convergence study\n"
        << "kind = convergence-curve\n"
        << "K = 10\n"
        << "nu = 20\n"
        << "psi = case2\n"
        << "m_grid = 500, 1000, 2000\n"
        << "n_rule = 5\n"
        << "clip_exponent = 0.8\n"
        << "repetitions = 10\n"
        << "seed = 42\n"
        << "threads = 2\n"
        << "full = false\n";
  }
  ExperimentConfig cfg = io::read_config((dir / "exp.cfg").string());
  CHECK(cfg.kind == ExperimentKind::convergence_curve);
  CHECK(cfg.dim == 10);
  CHECK(cfg.nu == 20.0);
  CHECK(cfg.psi == PsiSpec::case2);
  CHECK(cfg.m_grid == std::vector<long long>{500, 1000, 2000});
  CHECK(cfg.clip_exponent == 0.8);
  CHECK(cfg.repetitions == 10);
  CHECK(cfg.seed == 42);
  CHECK(cfg.threads == 2);

  {
    std::ofstream out(dir / "bad_key.cfg");
    out << "frobnicate = 3\n";
  }
  CHECK_THROWS_AS(io::read_config((dir / "bad_key.cfg").string()), ParameterError);
  {
    std::ofstream out(dir / "bad_value.cfg");
    out << "K = banana\n";
  }
  CHECK_THROWS_AS(io::read_config((dir / "bad_value.cfg").string()), ParameterError);
}

TEST_CASE("experiment CSV writers emit byte-identical files on reruns") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ess_table;
  cfg.dim = 6;
  cfg.nu = 4.0;
  cfg.psi = PsiSpec::case2;
  cfg.m_grid = {200, 400};
  cfg.repetitions = 2;
  cfg.seed = 107;

  auto dir = temp_dir("csv_rerun");
  auto rows = run_ess_table(cfg);
  io::write_ess_table_csv((dir / "a.csv").string(), rows);
  auto rows2 = run_ess_table(cfg);
  io::write_ess_table_csv((dir / "b.csv").string(), rows2);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  // Header sanity.
  const std::string content = slurp(dir / "a.csv");
  CHECK(content.rfind("K,nu,case,M,M_T,mean_ess_percent\n", 0) == 0);
}

TEST_CASE("convergence experiment writes psi next to its outputs") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::convergence_curve;
  cfg.dim = 3;
  cfg.nu = 4.0;
  cfg.psi = PsiSpec::case2;
  cfg.m_grid = {50};
  cfg.repetitions = 1;
  cfg.seed = 108;
  auto dir = temp_dir("psi_persist");
  cfg.out_dir = dir.string();
  run_convergence_experiment(cfg);
  CHECK(std::filesystem::exists(dir / "psi.txt"));
  // The persisted matrix regenerates identically from the same seed.
  SquareMatrix psi = io::read_psi_matrix((dir / "psi.txt").string());
  CHECK(max_abs_diff(psi, resolve_psi(cfg)) == 0.0);
}
