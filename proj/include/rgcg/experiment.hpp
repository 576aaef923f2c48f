#pragma once

#include "rgcg/objective.hpp"
#include "rgcg/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rgcg {

enum class StrategyKind { Armijo, Adaptive, Diminishing };
enum class SolverKind { Rgcg, Accelerated };

const char* to_string(StrategyKind s);
const char* to_string(SolverKind s);

struct ExperimentConfig {
  Manifold::Kind manifold = Manifold::Kind::Sphere;
  int n = 10;
  int p = 1;  // Stiefel columns; ignored on the sphere
  double lam = 0.1;
  std::vector<StrategyKind> strategies = {StrategyKind::Armijo};
  std::vector<SolverKind> solvers = {SolverKind::Rgcg};
  int runs = 10;
  std::uint64_t seed = 0;
  int max_iters = 2000;
  double tol_theta = 1e-4;
  int fstall_window = 5;
  double tol_fstall = 1e-4;
  ArmijoParams armijo;
  std::string out_dir;     // empty: nothing written
  std::string matrix_csv;  // empty: generate the instance from the seed
  int threads = 1;
};

/// A sparse-PCA problem instance: the data matrix, its Gram matrix and the
/// regularization weight. p = 1 selects the sphere formulation.
struct SparsePcaInstance {
  Matrix A;
  Matrix gram;
  double lam = 0.1;
  int p = 1;
};

struct RunResult {
  int run = 0;
  double time_s = 0.0;
  int iters = 0;
  double final_F = 0.0;
  double final_theta = 0.0;
  std::string status;
  bool ok = false;  // run finished with a stopping status (no internal error)
};

struct RunSummary {
  SolverKind solver = SolverKind::Rgcg;
  StrategyKind strategy = StrategyKind::Armijo;
  int n = 0;
  int p = 1;
  double lam = 0.0;
  double mean_time_s = 0.0;
  double mean_iters = 0.0;
  int converged_runs = 0;  // theta_converged or f_stalled
  std::vector<RunResult> results;
  std::vector<SolverReport> reports;  // aligned with results
};

ManifoldPtr make_manifold(Manifold::Kind kind, int n, int p);

/// Deterministic instance: i.i.d. standard-normal A keyed by the seed,
/// columns standardized (zero mean) and normalized so A^T A is the
/// empirical correlation matrix; Stiefel instances are symmetrized
/// (A + A^T)/2 after standardization.
SparsePcaInstance generate_instance(std::uint64_t seed, Manifold::Kind kind, int n, int p,
                                    double lam);

/// Initial point for run r, keyed by (seed, "x0", r): normalized Gaussian
/// vector on the sphere, polar factor of a Gaussian matrix on Stiefel.
Matrix initial_point(std::uint64_t seed, int run, const Manifold& manifold);

/// Runs every (solver, strategy) combination of the config, `runs` times
/// each on the shared instance. Individual run failures are recorded in
/// their summary row and the batch continues.
std::vector<RunSummary> run_batch(const ExperimentConfig& cfg);

/// Per-combination trace CSVs (run,iter,time_s,F,f,g,theta,lambda) and the
/// batch summary CSV, named deterministically from the config hash.
void write_outputs(const std::vector<RunSummary>& summaries, const ExperimentConfig& cfg);

/// Verifies the output directory is writable; throws before any solve runs.
void preflight_output_dir(const std::string& dir);

/// Hash of the semantically relevant config fields, used in file names.
std::string config_hash(const ExperimentConfig& cfg);

Matrix read_csv_matrix(const std::string& path);

/// Preflight, run, write, print a summary table. Returns the process exit
/// code: 0 iff every run reached a stopping status.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace rgcg
