#include "rgcg/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using rgcg::Matrix;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Columns F,f,g,theta,lambda of a trace file (everything except run/iter/time).
std::vector<std::string> value_columns(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::string> rows;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto third_comma = line.find(',', line.find(',', line.find(',') + 1) + 1);
    rows.push_back(line.substr(third_comma + 1));
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("instance generation is deterministic and well-formed") {
  const auto a1 = rgcg::generate_instance(42, rgcg::Manifold::Kind::Sphere, 12, 1, 0.1);
  const auto a2 = rgcg::generate_instance(42, rgcg::Manifold::Kind::Sphere, 12, 1, 0.1);
  CHECK((a1.A - a2.A).isZero(0.0));

  // Columns centered and normalized: the Gram matrix is the empirical
  // correlation matrix (unit diagonal).
  for (int j = 0; j < 12; ++j) {
    CHECK(std::abs(a1.A.col(j).mean()) <= 1e-12);
    CHECK(a1.gram(j, j) == doctest::Approx(1.0).epsilon(1e-12));
  }

  const auto st = rgcg::generate_instance(42, rgcg::Manifold::Kind::Stiefel, 10, 3, 0.1);
  CHECK((st.A - st.A.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(st.p == 3);

  const rgcg::Sphere sph(12);
  const Matrix x1 = rgcg::initial_point(42, 3, sph);
  const Matrix x2 = rgcg::initial_point(42, 3, sph);
  CHECK((x1 - x2).isZero(0.0));
  CHECK(std::abs(x1.norm() - 1.0) <= 1e-12);
  CHECK((x1 - rgcg::initial_point(42, 4, sph)).norm() > 1e-3);

  const rgcg::Stiefel stm(10, 3);
  CHECK(stm.point_error(rgcg::initial_point(7, 0, stm)) <= 1e-12);
}

TEST_CASE("trivial instance converges at iteration 0") {
  const fs::path dir = fresh_dir("rgcg_trivial");
  const fs::path csv = dir / "identity.csv";
  {
    std::ofstream out(csv);
    out << "1,0,0\n0,1,0\n0,0,1\n";
  }
  rgcg::ExperimentConfig cfg;
  cfg.manifold = rgcg::Manifold::Kind::Sphere;
  cfg.lam = 0.0;
  cfg.runs = 1;
  cfg.matrix_csv = csv.string();
  const auto summaries = rgcg::run_batch(cfg);
  REQUIRE(summaries.size() == 1);
  const auto& s = summaries[0];
  CHECK(s.n == 3);
  CHECK(s.results[0].ok);
  CHECK(s.results[0].iters == 0);
  CHECK(s.results[0].final_theta == 0.0);
  CHECK(s.results[0].status == "theta_converged");
  CHECK(s.reports[0].records.size() == 1);

  // A single one-record run produces a trace with exactly one data row.
  cfg.out_dir = (dir / "out").string();
  rgcg::write_outputs(summaries, cfg);
  const auto rows =
      value_columns(dir / "out" / ("trace_rgcg_armijo_" + rgcg::config_hash(cfg) + ".csv"));
  CHECK(rows.size() == 1);
}

TEST_CASE("summary means are exact arithmetic means of per-run values") {
  rgcg::ExperimentConfig cfg;
  cfg.n = 8;
  cfg.lam = 0.1;
  cfg.runs = 4;
  cfg.seed = 3;
  cfg.strategies = {rgcg::StrategyKind::Armijo, rgcg::StrategyKind::Diminishing};
  const auto summaries = rgcg::run_batch(cfg);
  REQUIRE(summaries.size() == 2);
  for (const auto& s : summaries) {
    double iters = 0.0;
    for (const auto& r : s.results) {
      CHECK(r.ok);
      iters += r.iters;
    }
    CHECK(s.mean_iters == iters / 4.0);
  }
}

TEST_CASE("trace files: row shape, per-row invariants, determinism of F/theta") {
  rgcg::ExperimentConfig cfg;
  cfg.n = 6;
  cfg.lam = 0.1;
  cfg.runs = 2;
  cfg.seed = 11;
  cfg.strategies = {rgcg::StrategyKind::Armijo};

  const fs::path dir1 = fresh_dir("rgcg_out1");
  const fs::path dir2 = fresh_dir("rgcg_out2");
  cfg.out_dir = dir1.string();
  rgcg::write_outputs(rgcg::run_batch(cfg), cfg);
  cfg.out_dir = dir2.string();
  rgcg::write_outputs(rgcg::run_batch(cfg), cfg);

  const std::string hash = rgcg::config_hash(cfg);
  const std::string trace_name = "trace_rgcg_armijo_" + hash + ".csv";
  REQUIRE(fs::exists(dir1 / trace_name));

  const std::string content = slurp(dir1 / trace_name);
  CHECK(content.rfind("run,iter,time_s,F,f,g,theta,lambda\n", 0) == 0);

  // Identical numeric columns across the two invocations.
  const auto cols1 = value_columns(dir1 / trace_name);
  const auto cols2 = value_columns(dir2 / trace_name);
  REQUIRE(cols1.size() == cols2.size());
  for (std::size_t i = 0; i < cols1.size(); ++i) REQUIRE(cols1[i] == cols2[i]);

  // Per-row invariants: F = f + g and theta <= 1e-12, lambda in [0, 1].
  for (const std::string& row : cols1) {
    std::stringstream ss(row);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    REQUIRE(v[0] == v[1] + v[2]);
    REQUIRE(v[3] <= 1e-12);
    REQUIRE(v[4] >= 0.0);
    REQUIRE(v[4] <= 1.0);
  }

  // Summary means recomputed from the summary file.
  const std::string summary = slurp(dir1 / ("summary_" + hash + ".csv"));
  CHECK(summary.rfind("manifold,n,p,lambda,solver,strategy,mean_time_s,mean_iters,converged_runs\n",
                      0) == 0);
}

TEST_CASE("config hash distinguishes configs and ignores the output path") {
  rgcg::ExperimentConfig a;
  a.seed = 1;
  rgcg::ExperimentConfig b = a;
  CHECK(rgcg::config_hash(a) == rgcg::config_hash(b));
  b.out_dir = "/somewhere/else";
  CHECK(rgcg::config_hash(a) == rgcg::config_hash(b));
  b.seed = 2;
  CHECK(rgcg::config_hash(a) != rgcg::config_hash(b));
}

TEST_CASE("preflight rejects unwritable output locations") {
  CHECK_THROWS(rgcg::preflight_output_dir("/dev/null/not_a_dir"));
  CHECK_THROWS_AS(rgcg::preflight_output_dir(""), std::invalid_argument);
}

TEST_CASE("csv matrix reader") {
  const fs::path dir = fresh_dir("rgcg_csv");
  const fs::path good = dir / "m.csv";
  {
    std::ofstream out(good);
    out << "1.5,2\n-3,4e-1\n";
  }
  const Matrix m = rgcg::read_csv_matrix(good.string());
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(1, 1) == 0.4);

  const fs::path ragged = dir / "ragged.csv";
  {
    std::ofstream out(ragged);
    out << "1,2\n3\n";
  }
  CHECK_THROWS(rgcg::read_csv_matrix(ragged.string()));
  CHECK_THROWS(rgcg::read_csv_matrix((dir / "missing.csv").string()));
}

TEST_CASE("failed runs are recorded and the batch continues") {
  // A non-square matrix makes the objective constructor throw per run setup;
  // the batch itself must survive and mark the run as failed.
  const fs::path dir = fresh_dir("rgcg_badmat");
  const fs::path csv = dir / "rect.csv";
  {
    std::ofstream out(csv);
    out << "1,0,0\n0,1,0\n";
  }
  rgcg::ExperimentConfig cfg;
  cfg.matrix_csv = csv.string();
  cfg.runs = 1;
  CHECK_THROWS_AS(rgcg::run_batch(cfg), std::invalid_argument);
}

TEST_SUITE_END();
