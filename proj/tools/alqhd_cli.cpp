// Command-line front end: benchmark sweeps, AL-QHD runs, Hamiltonian
// encoding, and gate-resource estimation, with machine-readable run records.
//
// Every benchmark/resource row is emitted both as a human-readable table line
// on stdout and (with --out) as one JSON record per line. Records echo the
// full configuration, so any run can be reproduced exactly from its own
// output; wall-time fields are the only non-deterministic entries.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "alqhd/alm.hpp"
#include "alqhd/baseline.hpp"
#include "alqhd/objectives.hpp"
#include "alqhd/pauli.hpp"
#include "alqhd/powergrid.hpp"
#include "alqhd/resources.hpp"
#include "alqhd/zoom.hpp"

namespace {

using nlohmann::json;

constexpr const char* kSchema = "alqhd.run/1";

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

struct RecordSink {
  std::vector<json> records;

  void emit(const char* command, const json& config, json row) {
    records.push_back(
        {{"schema", kSchema}, {"command", command}, {"config", config}, {"row", std::move(row)}});
  }

  void flush(const std::string& path) const {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw alqhd::IoError("cannot open output file: " + path);
    for (const json& r : records) out << r.dump() << '\n';
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw alqhd::IoError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

/// Minimizer of the frequency-scaled Rastrigin basin nearest 2/3 on one axis
/// (the best feasible basin of the constrained benchmark): Newton on
/// 18 x + 60 pi sin(6 pi x) = 0.
double rastrigin_basin_root() {
  double x = 2.0 / 3.0;
  for (int i = 0; i < 64; ++i) {
    const double g = 18.0 * x + 60.0 * std::numbers::pi * std::sin(6.0 * std::numbers::pi * x);
    const double gp =
        18.0 + 360.0 * std::numbers::pi * std::numbers::pi * std::cos(6.0 * std::numbers::pi * x);
    const double step = g / gp;
    x -= step;
    if (std::fabs(step) < 1e-15) break;
  }
  return x;
}

// ---------------------------------------------------------------------------
// bench-ackley
// ---------------------------------------------------------------------------

struct AckleyFlags {
  std::size_t grid = 32;
  std::vector<std::size_t> zoom = {1, 7, 13, 19};
  double eta = 0.99;
  double total_time = 10.0;
  std::int64_t steps = 50000;
  double sched_s = 0.01;
  std::vector<double> seed_shift = {0.962, 0.370};
  std::vector<std::size_t> baseline_starts;
  std::uint64_t seed = 2026;
  std::string out;

  json echo() const {
    return {{"grid", grid},
            {"zoom", zoom},
            {"eta", eta},
            {"time", total_time},
            {"steps", steps},
            {"sched_s", sched_s},
            {"seed_shift", seed_shift},
            {"baseline_starts", baseline_starts},
            {"seed", seed}};
  }
};

int run_bench_ackley(const AckleyFlags& fl, RecordSink& sink) {
  const std::size_t dim = fl.seed_shift.size();
  alqhd::ObjectiveFn f = alqhd::ackley_shifted(fl.seed_shift);
  alqhd::DomainBox box = alqhd::benchmark_box(dim);
  alqhd::Schedule sch;
  sch.total_time = fl.total_time;
  sch.steps = fl.steps;
  sch.s = fl.sched_s;
  const json config = fl.echo();

  std::printf("# shifted-Ackley benchmark: grid %zu^%zu, box [-5,5]^%zu\n", fl.grid, dim, dim);
  std::printf("%4s %6s %14s %14s %12s %10s\n", "Z", "levels", "objective", "pos error",
              "norm drift", "wall [s]");
  for (std::size_t z : fl.zoom) {
    const auto t0 = std::chrono::steady_clock::now();
    alqhd::ZoomConfig cfg = alqhd::ZoomConfig::uniform(z, fl.grid, dim, fl.eta);
    alqhd::ZoomTrace trace = alqhd::refine(f, box, cfg, sch);
    const double wall = seconds_since(t0);

    double drift_max = 0.0;
    for (const alqhd::ZoomLevel& lvl : trace.levels) drift_max = std::max(drift_max, lvl.norm_drift);
    const double pos_err = distance(trace.best.position, fl.seed_shift);

    std::printf("%4zu %6zu %14.6e %14.6e %12.2e %10.2f\n", z, trace.levels.size(),
                trace.best.value, pos_err, drift_max, wall);
    sink.emit("bench-ackley", config,
              {{"kind", "refine"},
               {"z", z},
               {"levels_run", trace.levels.size()},
               {"objective", trace.best.value},
               {"position", trace.best.position},
               {"position_error", pos_err},
               {"best_level", trace.best_level},
               {"norm_drift_max", drift_max},
               {"wall_time_s", wall}});
  }

  if (!fl.baseline_starts.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<alqhd::MultistartRow> rows =
        alqhd::multistart(f, {}, box, fl.baseline_starts, fl.seed);
    const double wall = seconds_since(t0);
    std::printf("# multistart baseline (seed %llu)\n",
                static_cast<unsigned long long>(fl.seed));
    std::printf("%8s %14s %14s\n", "starts", "objective", "pos error");
    for (const alqhd::MultistartRow& r : rows) {
      const double pos_err = distance(r.x, fl.seed_shift);
      std::printf("%8zu %14.6e %14.6e\n", r.starts, r.objective, pos_err);
      sink.emit("bench-ackley", config,
                {{"kind", "baseline"},
                 {"starts", r.starts},
                 {"objective", r.objective},
                 {"position", r.x},
                 {"position_error", pos_err},
                 {"violation", r.max_violation},
                 {"wall_time_s", wall}});
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench-rastrigin
// ---------------------------------------------------------------------------

struct RastriginFlags {
  std::size_t grid = 64;
  std::vector<std::size_t> zoom = {1, 2, 3, 4};
  double eta = 0.99;
  double total_time = 10.0;
  std::int64_t steps = 50000;
  double sched_s = 0.01;
  double rho0 = 1.0;
  double gamma = 2.0;
  double rho_max = 1e9;
  std::size_t alm_iters = 15;
  double cviol_tol = 1e-9;
  std::vector<std::size_t> baseline_starts;
  std::uint64_t seed = 2026;
  std::string out;

  json echo() const {
    return {{"grid", grid},
            {"zoom", zoom},
            {"eta", eta},
            {"time", total_time},
            {"steps", steps},
            {"sched_s", sched_s},
            {"rho0", rho0},
            {"gamma", gamma},
            {"rho_max", rho_max},
            {"alm_iters", alm_iters},
            {"cviol_tol", cviol_tol},
            {"baseline_starts", baseline_starts},
            {"seed", seed}};
  }
};

int run_bench_rastrigin(const RastriginFlags& fl, RecordSink& sink) {
  alqhd::ObjectiveFn f = alqhd::rastrigin_scaled(2, 3.0);
  alqhd::ConstraintSet cs = alqhd::rastrigin_curved_constraints();
  alqhd::DomainBox box = alqhd::benchmark_box(2);
  alqhd::Schedule sch;
  sch.total_time = fl.total_time;
  sch.steps = fl.steps;
  sch.s = fl.sched_s;
  alqhd::AlmConfig alm;
  alm.rho0 = fl.rho0;
  alm.gamma = fl.gamma;
  alm.rho_max = fl.rho_max;
  alm.max_iterations = fl.alm_iters;
  alm.constraint_tol = fl.cviol_tol;
  const json config = fl.echo();
  const double root = rastrigin_basin_root();
  const std::vector<double> reference = {root, root};

  std::printf("# constrained scaled-Rastrigin benchmark: grid %zu^2, box [-5,5]^2\n", fl.grid);
  std::printf("%4s %14s %14s %12s %6s %10s %10s\n", "Z", "objective", "pos error", "violation",
              "iters", "rho", "wall [s]");
  for (std::size_t z : fl.zoom) {
    const auto t0 = std::chrono::steady_clock::now();
    alqhd::ZoomConfig cfg = alqhd::ZoomConfig::uniform(z, fl.grid, 2, fl.eta);
    alqhd::AlmReport rep = alqhd::solve(f, cs, box, cfg, alm, sch);
    const double wall = seconds_since(t0);
    const double pos_err = distance(rep.x, reference);

    std::printf("%4zu %14.6e %14.6e %12.2e %6zu %10g %10.2f\n", z, rep.objective, pos_err,
                rep.violation, rep.iterations, rep.rho_final, wall);
    sink.emit("bench-rastrigin", config,
              {{"kind", "alqhd"},
               {"z", z},
               {"objective", rep.objective},
               {"position", rep.x},
               {"position_error", pos_err},
               {"violation", rep.violation},
               {"alm_iterations", rep.iterations},
               {"rho_final", rep.rho_final},
               {"wall_time_s", wall}});
  }

  if (!fl.baseline_starts.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<alqhd::MultistartRow> rows =
        alqhd::multistart(f, cs, box, fl.baseline_starts, fl.seed);
    const double wall = seconds_since(t0);
    std::printf("# multistart baseline (seed %llu)\n",
                static_cast<unsigned long long>(fl.seed));
    std::printf("%8s %14s %14s %12s %8s\n", "starts", "objective", "pos error", "violation",
                "feasible");
    for (const alqhd::MultistartRow& r : rows) {
      const double pos_err = distance(r.x, reference);
      std::printf("%8zu %14.6e %14.6e %12.2e %8s\n", r.starts, r.objective, pos_err,
                  r.max_violation, r.feasible ? "yes" : "no");
      sink.emit("bench-rastrigin", config,
                {{"kind", "baseline"},
                 {"starts", r.starts},
                 {"objective", r.objective},
                 {"position", r.x},
                 {"position_error", pos_err},
                 {"violation", r.max_violation},
                 {"feasible", r.feasible},
                 {"wall_time_s", wall}});
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// resources
// ---------------------------------------------------------------------------

struct ResourceFlags {
  std::string case_path;  // empty: synthetic cases generated per size
  std::vector<std::size_t> sizes = {2, 3, 5};
  std::size_t resolution = 4;
  double accuracy = 1e-6;
  double synth_a = 3.0;
  double synth_b = 4.0;
  std::uint64_t trotter_steps = 1;
  std::uint64_t seed = 2026;
  std::string out;

  json echo() const {
    return {{"case", case_path},
            {"sizes", sizes},
            {"resolution", resolution},
            {"accuracy", accuracy},
            {"synth_a", synth_a},
            {"synth_b", synth_b},
            {"trotter_steps", trotter_steps},
            {"seed", seed}};
  }
};

/// Quadratic-penalty weight folding the power-balance residuals into the
/// estimation objective; fixed rather than exposed because gate counts are
/// insensitive to it (it scales coefficients, not term structure).
constexpr double kResidualPenalty = 1.0;

int run_resources(const ResourceFlags& fl, RecordSink& sink) {
  const json config = fl.echo();
  std::optional<alqhd::PowerCase> base;
  if (!fl.case_path.empty()) {
    const std::string text = read_file(fl.case_path);
    try {
      base = alqhd::parse_case(text);
    } catch (const std::exception& e) {
      throw alqhd::ParseError("resources: " + fl.case_path + ": " + e.what());
    }
  }

  alqhd::SynthesisModel model{fl.synth_a, fl.synth_b};
  std::vector<std::pair<double, double>> series;

  std::printf("# gate-resource estimation per Trotter step (r=%zu per variable)\n", fl.resolution);
  std::printf("%6s %7s %7s %12s %12s %10s %12s %10s %12s\n", "buses", "n_vars", "terms",
              "NISQ hard", "NISQ easy", "FT exact", "FT rot", "eps", "FT T total");
  for (std::size_t n_buses : fl.sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string stage = "setup";
    try {
      stage = base ? "extract_subgraph" : "generate_synthetic_case";
      alqhd::PowerCase pc = base ? alqhd::extract_subgraph(*base, n_buses)
                                 : alqhd::generate_synthetic_case(n_buses, fl.seed);
      stage = "build_ybus";
      alqhd::Ybus y = alqhd::build_ybus(pc);
      stage = "build_acopf";
      alqhd::AcopfModel m = alqhd::build_acopf(pc, y);
      stage = "penalized_objective";
      alqhd::SeparableExpr obj = alqhd::penalized_objective(m, kResidualPenalty);
      stage = "encode_expr";
      std::vector<std::vector<double>> grids(m.n);
      std::vector<std::size_t> res(m.n, fl.resolution);
      for (std::size_t j = 0; j < m.n; ++j) {
        grids[j].resize(fl.resolution);
        const double w = m.variables[j].upper - m.variables[j].lower;
        for (std::size_t k = 0; k < fl.resolution; ++k)
          grids[j][k] = m.variables[j].lower + static_cast<double>(k) * w /
                                                   static_cast<double>(fl.resolution);
      }
      alqhd::QubitLayout layout = alqhd::QubitLayout::from_resolutions(res);
      alqhd::EncodeConfig enc;
      enc.max_term_width = 8;  // squared residuals couple up to eight variables
      alqhd::ZStringHamiltonian h = alqhd::encode_expr(obj, grids, layout, enc);
      stage = "estimate";
      alqhd::ResourceEstimate est = alqhd::estimate(h, m.n, model, fl.accuracy);
      const double wall = seconds_since(t0);

      const std::uint64_t ft_rot = est.ft.rotations_kinetic + est.ft.rotations_potential;
      std::printf("%6zu %7zu %7zu %12llu %12llu %10llu %12llu %10.3e %12llu\n", n_buses, est.n_vars,
                  h.size(), static_cast<unsigned long long>(est.nisq.hard_two_qubit),
                  static_cast<unsigned long long>(est.nisq.easy_single_qubit),
                  static_cast<unsigned long long>(est.ft.exact_t),
                  static_cast<unsigned long long>(ft_rot), est.ft.epsilon,
                  static_cast<unsigned long long>(est.ft.t_total));
      series.emplace_back(static_cast<double>(est.n_vars), static_cast<double>(est.ft.t_total));
      sink.emit("resources", config,
                {{"kind", "estimate"},
                 {"n_buses", n_buses},
                 {"n_vars", est.n_vars},
                 {"hamiltonian_terms", h.size()},
                 {"nisq_hard_two_qubit", est.nisq.hard_two_qubit},
                 {"nisq_easy_single_qubit", est.nisq.easy_single_qubit},
                 {"ft_exact_t", est.ft.exact_t},
                 {"ft_rotations_kinetic", est.ft.rotations_kinetic},
                 {"ft_rotations_potential", est.ft.rotations_potential},
                 {"ft_clifford", est.ft.clifford},
                 {"epsilon", est.ft.epsilon},
                 {"r_eps", est.ft.r_eps},
                 {"ft_t_total", est.ft.t_total},
                 {"trotter_steps", fl.trotter_steps},
                 {"total_nisq_hard", fl.trotter_steps * est.nisq.hard_two_qubit},
                 {"total_ft_t", fl.trotter_steps * est.ft.t_total},
                 {"wall_time_s", wall}});
    } catch (const std::exception& e) {
      throw alqhd::InvalidArgumentError("resources: size " + std::to_string(n_buses) + ": " +
                                        stage + ": " + e.what());
    }
  }

  if (series.size() >= 3) {
    alqhd::PowerLawFit fit = alqhd::fit_power_law(series);
    std::printf("# fit: FT T total ~ %.6g * n^%.4f (R^2 = %.6f over %zu sizes)\n", fit.prefactor,
                fit.exponent, fit.r_squared, series.size());
    sink.emit("resources", config,
              {{"kind", "fit"},
               {"series", "ft_t_total"},
               {"prefactor", fit.prefactor},
               {"exponent", fit.exponent},
               {"r_squared", fit.r_squared},
               {"points", series.size()}});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// encode
// ---------------------------------------------------------------------------

alqhd::Factor factor_from_json(const json& jf, const std::string& where) {
  int kinds = 0;
  for (const char* k : {"power", "cos", "sin", "exp", "const"}) kinds += jf.contains(k) ? 1 : 0;
  if (kinds != 1)
    throw alqhd::ParseError(where + ": factor needs exactly one of power/cos/sin/exp/const");
  if (jf.contains("power")) return alqhd::Factor::power(jf.at("power").get<int>());
  if (jf.contains("const")) return alqhd::Factor::constant(jf.at("const").get<double>());
  const char* key = jf.contains("cos") ? "cos" : jf.contains("sin") ? "sin" : "exp";
  const json& inner = jf.at(key);
  const double scale = inner.value("scale", 1.0);
  const double offset = inner.value("offset", 0.0);
  if (key[0] == 'c') return alqhd::Factor::cosine(scale, offset);
  if (key[0] == 's') return alqhd::Factor::sine(scale, offset);
  return alqhd::Factor::exp_affine(scale, offset);
}

struct EncodeFlags {
  std::string expr_path;
  std::size_t resolution = 4;
  std::string out;
};

int run_encode(const EncodeFlags& fl) {
  const std::string text = read_file(fl.expr_path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw alqhd::ParseError("encode: " + fl.expr_path + ": " + e.what());
  }

  try {
    const std::size_t dim = doc.at("dim").get<std::size_t>();
    const std::vector<double> lower = doc.at("lower").get<std::vector<double>>();
    const std::vector<double> upper = doc.at("upper").get<std::vector<double>>();
    if (lower.size() != dim || upper.size() != dim)
      throw alqhd::ParseError("lower/upper must list one bound per variable");
    std::vector<std::size_t> res(dim, fl.resolution);
    if (doc.contains("resolutions")) res = doc.at("resolutions").get<std::vector<std::size_t>>();
    if (res.size() != dim) throw alqhd::ParseError("resolutions must list one entry per variable");

    alqhd::SeparableExpr expr(dim);
    std::size_t idx = 0;
    for (const json& jt : doc.at("terms")) {
      const std::string where = "terms[" + std::to_string(idx++) + "]";
      const double coeff = jt.at("coeff").get<double>();
      std::vector<alqhd::TermFactor> factors;
      for (const json& jf : jt.value("factors", json::array()))
        factors.push_back({jf.at("var").get<std::size_t>(), factor_from_json(jf, where)});
      expr.add_term(coeff, std::move(factors));
    }

    std::vector<std::vector<double>> grids(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      grids[j].resize(res[j]);
      for (std::size_t k = 0; k < res[j]; ++k)
        grids[j][k] = lower[j] + static_cast<double>(k) * (upper[j] - lower[j]) /
                                     static_cast<double>(res[j]);
    }
    alqhd::QubitLayout layout = alqhd::QubitLayout::from_resolutions(res);
    alqhd::ZStringHamiltonian h = alqhd::encode_expr(expr, grids, layout);

    std::string serialized = alqhd::serialize(h);
    if (fl.out.empty()) {
      std::fputs(serialized.c_str(), stdout);
    } else {
      std::ofstream os(fl.out, std::ios::binary);
      if (!os) throw alqhd::IoError("cannot open output file: " + fl.out);
      os << serialized;
    }

    std::fprintf(stderr, "encoded %zu variables on %zu qubits: %zu Z-string terms\n", dim,
                 layout.total_qubits(), h.size());
    for (const auto& [weight, count] : alqhd::locality_histogram(h))
      std::fprintf(stderr, "  weight %zu: %zu terms\n", weight, count);
    return 0;
  } catch (const json::exception& e) {
    throw alqhd::ParseError("encode: " + fl.expr_path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// parse-case
// ---------------------------------------------------------------------------

int run_parse_case(const std::string& path) {
  const std::string text = read_file(path);
  alqhd::PowerCase pc = alqhd::parse_case(text);  // ParseError carries the line number
  std::size_t in_service = 0;
  for (const alqhd::Branch& br : pc.branches) in_service += br.status != 0 ? 1 : 0;
  std::printf("%s: ok\n", path.c_str());
  std::printf("  name      %s\n", pc.name.c_str());
  std::printf("  baseMVA   %g\n", pc.base_mva);
  std::printf("  buses     %zu\n", pc.buses.size());
  std::printf("  branches  %zu (%zu in service)\n", pc.branches.size(), in_service);
  std::printf("  gens      %zu%s\n", pc.generators.size(),
              pc.has_gencost ? " (with cost data)" : "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical pipeline for quantum-dynamics global optimization: "
               "benchmarks, constrained solves, Hamiltonian encoding, gate-resource estimates"};
  app.require_subcommand(1);

  AckleyFlags ack;
  CLI::App* cmd_ack = app.add_subcommand("bench-ackley", "shifted-Ackley refinement sweep");
  cmd_ack->add_option("--grid", ack.grid, "grid points per axis (power of two)")
      ->capture_default_str();
  cmd_ack->add_option("--zoom", ack.zoom, "refinement depths to run")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_ack->add_option("--eta", ack.eta, "density mass kept per zoom step")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)))
      ->capture_default_str();
  cmd_ack->add_option("--time", ack.total_time, "total evolution time")->capture_default_str();
  cmd_ack->add_option("--steps", ack.steps, "time steps per evolution")->capture_default_str();
  cmd_ack->add_option("--sched-s", ack.sched_s, "schedule regularizer s")->capture_default_str();
  cmd_ack->add_option("--seed-shift", ack.seed_shift, "planted optimum coordinates")
      ->delimiter(',')
      ->expected(1, 8);
  cmd_ack->add_option("--baseline-starts", ack.baseline_starts, "multistart budgets to compare")
      ->delimiter(',');
  cmd_ack->add_option("--seed", ack.seed, "multistart sampling seed")->capture_default_str();
  cmd_ack->add_option("--out", ack.out, "write one JSON record per row to this file");

  RastriginFlags ras;
  CLI::App* cmd_ras =
      app.add_subcommand("bench-rastrigin", "constrained scaled-Rastrigin solve sweep");
  cmd_ras->add_option("--grid", ras.grid, "grid points per axis (power of two)")
      ->capture_default_str();
  cmd_ras->add_option("--zoom", ras.zoom, "refinement depths to run")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_ras->add_option("--eta", ras.eta, "density mass kept per zoom step")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)))
      ->capture_default_str();
  cmd_ras->add_option("--time", ras.total_time, "total evolution time")->capture_default_str();
  cmd_ras->add_option("--steps", ras.steps, "time steps per evolution")->capture_default_str();
  cmd_ras->add_option("--sched-s", ras.sched_s, "schedule regularizer s")->capture_default_str();
  cmd_ras->add_option("--rho0", ras.rho0, "initial penalty weight")->capture_default_str();
  cmd_ras->add_option("--gamma", ras.gamma, "penalty growth factor")->capture_default_str();
  cmd_ras->add_option("--rho-max", ras.rho_max, "penalty weight cap")->capture_default_str();
  cmd_ras->add_option("--alm-iters", ras.alm_iters, "outer iteration budget")
      ->capture_default_str();
  cmd_ras->add_option("--cviol-tol", ras.cviol_tol, "constraint violation tolerance")
      ->capture_default_str();
  cmd_ras->add_option("--baseline-starts", ras.baseline_starts, "multistart budgets to compare")
      ->delimiter(',');
  cmd_ras->add_option("--seed", ras.seed, "multistart sampling seed")->capture_default_str();
  cmd_ras->add_option("--out", ras.out, "write one JSON record per row to this file");

  ResourceFlags res;
  CLI::App* cmd_res = app.add_subcommand(
      "resources", "gate-count estimates over power-flow-derived Hamiltonians");
  cmd_res->add_option("case", res.case_path,
                      "MATPOWER-style case file (omit to use synthetic grids)");
  cmd_res->add_option("--sizes", res.sizes, "bus counts to estimate")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_res->add_option("--resolution", res.resolution, "grid points per variable")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_res->add_option("--accuracy", res.accuracy, "target accuracy of one run")
      ->capture_default_str();
  cmd_res->add_option("--synth-a", res.synth_a, "synthesis T-count slope per log2(1/eps)")
      ->capture_default_str();
  cmd_res->add_option("--synth-b", res.synth_b, "synthesis T-count offset")
      ->capture_default_str();
  cmd_res->add_option("--trotter-steps", res.trotter_steps, "steps for whole-evolution totals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_res->add_option("--seed", res.seed, "synthetic grid generator seed")->capture_default_str();
  cmd_res->add_option("--out", res.out, "write one JSON record per row to this file");

  EncodeFlags enc;
  CLI::App* cmd_enc =
      app.add_subcommand("encode", "separable expression file -> Z-string Hamiltonian file");
  cmd_enc->add_option("expr", enc.expr_path, "expression file (JSON)")->required();
  cmd_enc->add_option("--resolution", enc.resolution, "grid points per variable")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_enc->add_option("--out", enc.out, "Hamiltonian output file (default: stdout)");

  std::string case_path;
  CLI::App* cmd_parse = app.add_subcommand("parse-case", "validate a MATPOWER-style case file");
  cmd_parse->add_option("case", case_path, "case file to validate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RecordSink sink;
    int rc = 0;
    if (*cmd_ack) {
      rc = run_bench_ackley(ack, sink);
      sink.flush(ack.out);
    } else if (*cmd_ras) {
      rc = run_bench_rastrigin(ras, sink);
      sink.flush(ras.out);
    } else if (*cmd_res) {
      rc = run_resources(res, sink);
      sink.flush(res.out);
    } else if (*cmd_enc) {
      rc = run_encode(enc);
    } else if (*cmd_parse) {
      rc = run_parse_case(case_path);
    }
    return rc;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
