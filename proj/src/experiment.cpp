#include "rgcg/experiment.hpp"

#include "rgcg/rng.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace rgcg {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SolverConfig solver_config_for(const ExperimentConfig& cfg, StrategyKind strategy) {
  SolverConfig sc;
  switch (strategy) {
    case StrategyKind::Armijo: sc.strategy = cfg.armijo; break;
    case StrategyKind::Adaptive: sc.strategy = AdaptiveParams{}; break;
    case StrategyKind::Diminishing: sc.strategy = DiminishingParams{}; break;
  }
  sc.max_iters = cfg.max_iters;
  sc.tol_theta = cfg.tol_theta;
  sc.fstall_window = cfg.fstall_window;
  sc.tol_fstall = cfg.tol_fstall;
  return sc;
}

void run_indexed(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

const char* to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::Armijo: return "armijo";
    case StrategyKind::Adaptive: return "adaptive";
    case StrategyKind::Diminishing: return "diminishing";
  }
  return "unknown";
}

const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Rgcg: return "rgcg";
    case SolverKind::Accelerated: return "accelerated";
  }
  return "unknown";
}

ManifoldPtr make_manifold(Manifold::Kind kind, int n, int p) {
  if (kind == Manifold::Kind::Sphere) return std::make_shared<Sphere>(n);
  return std::make_shared<Stiefel>(n, p);
}

SparsePcaInstance generate_instance(std::uint64_t seed, Manifold::Kind kind, int n, int p,
                                    double lam) {
  if (n < 2 || p < 1 || p > n) throw std::invalid_argument("generate_instance: bad dims");
  RngStream rng(seed, "A");
  Matrix A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) A(i, j) = rng.normal();
  }
  // Column standardization (zero mean, unit sample variance), scaled by
  // 1/sqrt(n-1) so A^T A is the empirical correlation matrix. This keeps
  // the quadratic term at O(1) and the L1 weights 0.1..1 competitive with
  // it, which is what makes the penalty actually sparsify.
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = A.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double norm = col.norm();
    if (norm > 0.0) col /= norm;
  }
  if (kind == Manifold::Kind::Stiefel) {
    A = 0.5 * (A + A.transpose()).eval();
  }
  SparsePcaInstance inst;
  inst.gram = A.transpose() * A;
  inst.A = std::move(A);
  inst.lam = lam;
  inst.p = (kind == Manifold::Kind::Stiefel) ? p : 1;
  return inst;
}

Matrix initial_point(std::uint64_t seed, int run, const Manifold& manifold) {
  RngStream rng(seed, "x0", static_cast<std::uint64_t>(run));
  return manifold.random_point(rng);
}

std::vector<RunSummary> run_batch(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("run_batch: runs must be >= 1");
  Matrix A;
  if (!cfg.matrix_csv.empty()) {
    A = read_csv_matrix(cfg.matrix_csv);
  } else {
    A = generate_instance(cfg.seed, cfg.manifold, cfg.n, cfg.p, cfg.lam).A;
  }
  const int n = static_cast<int>(A.rows());
  const int p = (cfg.manifold == Manifold::Kind::Stiefel) ? cfg.p : 1;
  ManifoldPtr manifold = make_manifold(cfg.manifold, n, p);
  const CompositeObjective obj = make_sparse_pca(A, cfg.lam, manifold);

  std::vector<RunSummary> summaries;
  for (SolverKind solver : cfg.solvers) {
    for (StrategyKind strategy : cfg.strategies) {
      RunSummary s;
      s.solver = solver;
      s.strategy = strategy;
      s.n = n;
      s.p = p;
      s.lam = cfg.lam;
      s.results.resize(cfg.runs);
      s.reports.resize(cfg.runs);
      const SolverConfig sc = solver_config_for(cfg, strategy);

      run_indexed(cfg.runs, cfg.threads, [&](int r) {
        RunResult& res = s.results[r];
        res.run = r;
        try {
          const Matrix x0 = initial_point(cfg.seed, r, *manifold);
          SolverReport rep = (solver == SolverKind::Rgcg)
                                 ? rgcg_solve(x0, obj, sc)
                                 : accelerated_solve(x0, obj, sc);
          res.time_s = rep.total_time;
          res.iters = rep.iterations();
          if (!rep.records.empty()) {
            res.final_F = rep.records.back().F;
            res.final_theta = rep.records.back().theta;
          }
          res.status = to_string(rep.status);
          res.ok = rep.status != SolveStatus::SubproblemError;
          s.reports[r] = std::move(rep);
        } catch (const std::exception& e) {
          res.status = std::string("error: ") + e.what();
          res.ok = false;
        }
      });

      double sum_t = 0.0, sum_it = 0.0;
      for (const RunResult& r : s.results) {
        sum_t += r.time_s;
        sum_it += r.iters;
        if (r.status == "theta_converged" || r.status == "f_stalled") ++s.converged_runs;
      }
      s.mean_time_s = sum_t / cfg.runs;
      s.mean_iters = sum_it / cfg.runs;
      summaries.push_back(std::move(s));
    }
  }
  return summaries;
}

void preflight_output_dir(const std::string& dir) {
  if (dir.empty()) throw std::invalid_argument("output directory not set");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".write_probe";
  std::ofstream out(probe);
  if (!out) {
    throw std::runtime_error("output directory not writable: " + dir);
  }
  out.close();
  fs::remove(probe, ec);
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::ostringstream key;
  key << (cfg.manifold == Manifold::Kind::Sphere ? "sphere" : "stiefel") << ',' << cfg.n << ','
      << cfg.p << ',' << fmt_double(cfg.lam) << ',' << cfg.runs << ',' << cfg.seed << ','
      << cfg.max_iters << ',' << fmt_double(cfg.tol_theta) << ',' << cfg.fstall_window << ','
      << fmt_double(cfg.tol_fstall) << ',' << fmt_double(cfg.armijo.zeta) << ','
      << fmt_double(cfg.armijo.omega1) << ',' << fmt_double(cfg.armijo.omega2) << ','
      << cfg.matrix_csv;
  for (SolverKind s : cfg.solvers) key << ',' << to_string(s);
  for (StrategyKind s : cfg.strategies) key << ',' << to_string(s);
  const std::string str = key.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : str) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string(buf, 16).substr(0, 8);
}

void write_outputs(const std::vector<RunSummary>& summaries, const ExperimentConfig& cfg) {
  if (summaries.empty()) throw std::invalid_argument("write_outputs: no results");
  const std::string hash = config_hash(cfg);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const char* mname = cfg.manifold == Manifold::Kind::Sphere ? "sphere" : "stiefel";

  for (const RunSummary& s : summaries) {
    std::ostringstream name;
    name << "trace_" << to_string(s.solver) << '_' << to_string(s.strategy) << '_' << hash
         << ".csv";
    std::ofstream out(dir / name.str());
    if (!out) throw std::runtime_error("cannot open trace file for writing");
    out << "run,iter,time_s,F,f,g,theta,lambda\n";
    for (std::size_t r = 0; r < s.reports.size(); ++r) {
      for (const IterationRecord& rec : s.reports[r].records) {
        out << r << ',' << rec.k << ',' << fmt_double(rec.wall_time) << ',' << fmt_double(rec.F)
            << ',' << fmt_double(rec.f) << ',' << fmt_double(rec.g) << ','
            << fmt_double(rec.theta) << ',' << fmt_double(rec.lambda) << '\n';
      }
    }
  }

  std::ofstream out(dir / ("summary_" + hash + ".csv"));
  if (!out) throw std::runtime_error("cannot open summary file for writing");
  out << "manifold,n,p,lambda,solver,strategy,mean_time_s,mean_iters,converged_runs\n";
  for (const RunSummary& s : summaries) {
    out << mname << ',' << s.n << ',' << s.p << ',' << fmt_double(s.lam) << ','
        << to_string(s.solver) << ',' << to_string(s.strategy) << ','
        << fmt_double(s.mean_time_s) << ',' << fmt_double(s.mean_iters) << ','
        << s.converged_runs << '\n';
  }
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("matrix CSV: ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix CSV: empty file " + path);
  Matrix A(rows.size(), rows.front().size());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = rows[i][j];
  }
  return A;
}

int run_experiment(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) preflight_output_dir(cfg.out_dir);
  const std::vector<RunSummary> summaries = run_batch(cfg);
  if (!cfg.out_dir.empty()) write_outputs(summaries, cfg);

  std::printf("%-12s %-12s %8s %12s %12s %10s\n", "solver", "strategy", "n", "mean_time_s",
              "mean_iters", "converged");
  bool all_ok = true;
  for (const RunSummary& s : summaries) {
    std::printf("%-12s %-12s %8d %12.4f %12.2f %7d/%zu\n", to_string(s.solver),
                to_string(s.strategy), s.n, s.mean_time_s, s.mean_iters, s.converged_runs,
                s.results.size());
    for (const RunResult& r : s.results) {
      if (!r.ok) {
        all_ok = false;
        std::fprintf(stderr, "  run %d failed: %s\n", r.run, r.status.c_str());
      }
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace rgcg
