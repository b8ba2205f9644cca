// tukey_depth: exact halfspace depth from the command line.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "tukey/binsearch.hpp"
#include "tukey/elastic.hpp"
#include "tukey/engine.hpp"
#include "tukey/io.hpp"
#include "tukey/oracle.hpp"

namespace fs = std::filesystem;
using namespace tukey;

namespace {

enum Exit { kOk = 0, kUsage = 1, kSolveFailure = 2, kCertificateFailure = 3 };

struct InputOptions {
  std::string path;
  long query_index = -1;
  std::vector<double> query_coords;
  bool no_scale = false;

  QueryChoice choice() const {
    QueryChoice q;
    if (!query_coords.empty())
      q.coords = Eigen::Map<const Eigen::VectorXd>(query_coords.data(), static_cast<Index>(query_coords.size()));
    else if (query_index >= 0)
      q.index = query_index;
    return q;
  }
};

struct OutputOptions {
  std::string json;
  bool allow_partial = false;
  bool allow_unverified = false;
};

void add_input(CLI::App* app, InputOptions& in) {
  app->add_option("file", in.path, "Point file: header 'n d', then n rows of d reals")->required()->check(CLI::ExistingFile);
  auto* qi = app->add_option("--query", in.query_index, "Index of the query point (0-based, default 0); it is left out of the data");
  auto* qc = app->add_option("--query-coords", in.query_coords, "Query coordinates v1 .. vd");
  qi->excludes(qc);
  app->add_flag("--no-scale", in.no_scale, "Keep rows at their original length");
}

void add_output(CLI::App* app, OutputOptions& out) {
  app->add_option("--json", out.json, "Write the result as JSON to a file, '-' for stdout");
  app->add_flag("--allow-partial", out.allow_partial, "Exit 0 even when a limit leaves only bounds");
  app->add_flag("--allow-unverified", out.allow_unverified, "Exit 0 even when the certificate check fails");
}

void add_engine(CLI::App* app, EngineConfig& cfg) {
  const std::map<std::string, BranchRule> rules{{"greedy", BranchRule::kGreedy}, {"strong", BranchRule::kStrong}};
  const std::map<std::string, NodeSelection> selections{{"depth-first", NodeSelection::kDepthFirst},
                                                        {"best-first", NodeSelection::kBestFirst}};
  const std::map<std::string, KnapsackMode> knap{
      {"auto", KnapsackMode::kAuto}, {"on", KnapsackMode::kOn}, {"off", KnapsackMode::kOff}};
  const std::map<std::string, CoverVariant> variants{{"fast", CoverVariant::kFast}, {"full", CoverVariant::kFull}};

  app->add_option("--rule", cfg.rule, "Branching rule")->transform(CLI::CheckedTransformer(rules))->capture_default_str();
  app->add_option("--selection", cfg.selection, "Node selection")->transform(CLI::CheckedTransformer(selections));
  app->add_option("--knapsack", cfg.knapsack, "Pseudo-knapsack cut selector (auto: on for greedy)")
      ->transform(CLI::CheckedTransformer(knap));
  app->add_option("--strong-k", cfg.strong_k, "Candidates tried by strong branching")->capture_default_str();
  app->add_option("--cut-improve", cfg.cut_improve, "Stop the cut loop below this bound gain")->capture_default_str();
  app->add_option("--max-cut-rounds", cfg.max_cut_rounds, "Cut rounds per node")->capture_default_str();
  app->add_option("--c", cfg.c, "Box bound on the direction")->capture_default_str();
  app->add_option("--epsilon", cfg.epsilon, "Margin required of satisfied rows")->capture_default_str();
  app->add_option("--int-tol", cfg.int_tol, "Integrality tolerance")->capture_default_str();
  app->add_option("--cert-tol", cfg.cert_tol, "Certificate tolerance")->capture_default_str();
  app->add_option("--eps-pos", cfg.eps_pos, "Smallest eps counted as positive (binary search)")->capture_default_str();
  app->add_option("--viol-tol", cfg.viol_tol, "Elastic violation cutoff")->capture_default_str();
  app->add_option("--tight-tol", cfg.tight_tol, "Tight-row tolerance for cuts")->capture_default_str();
  app->add_option("--heuristic", cfg.heuristic, "Initial cover heuristic")->transform(CLI::CheckedTransformer(variants));
  app->add_option("--heuristic-k", cfg.heuristic_k, "Candidates per list in the fast heuristic")->capture_default_str();
  app->add_flag("!--no-rounding", cfg.rounding, "Disable the rounding heuristic");
  app->add_option("--time-limit", cfg.time_limit, "Seconds per MIP, 0 for none")->capture_default_str();
  app->add_option("--node-limit", cfg.node_limit, "Nodes per MIP, 0 for none")->capture_default_str();
  app->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Seed (instance generation only)")->capture_default_str();
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("tukey");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TUKEY_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept real ones.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

InfeasibleSystem load(const InputOptions& in) { return build_system(read_points(in.path, in.choice()), !in.no_scale); }

void emit_json(const std::string& target, const nlohmann::json& j) {
  if (target == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(target);
  if (!out) throw std::runtime_error("cannot write " + target);
  out << j.dump(2) << '\n';
}

int report(const DepthResult& r, const InfeasibleSystem& sys, const OutputOptions& out) {
  if (!out.json.empty()) emit_json(out.json, to_json(r, sys));
  if (out.json != "-") {
    std::cout << "depth " << r.depth << '\n'
              << "status " << to_string(r.status) << '\n'
              << "certificate " << to_string(r.certificate) << '\n'
              << "bounds [" << r.lower_bound << ", " << r.upper_bound << "]\n"
              << "cover";
    for (Index j : r.cover) std::cout << ' ' << j;
    std::cout << "\nnodes " << r.stats.nodes << " lps " << r.stats.lp_solves << " cuts " << r.stats.cuts << " mips "
              << r.stats.mips << " time " << r.stats.wall_seconds << "s\n";
  }
  if (r.status == ResultStatus::kBoundOnly && !out.allow_partial) return kSolveFailure;
  if (r.certificate == CertificateStatus::kUnverified && !out.allow_unverified) return kCertificateFailure;
  return kOk;
}

int oracle_depth(const InfeasibleSystem& sys, const std::string& method) {
  if (method == "sweep" || (method == "auto" && sys.dim == 2)) return oracle_depth_2d(sys);
  return oracle_depth_general(sys);
}

DepthResult heuristic_result(const InfeasibleSystem& sys, const EngineConfig& cfg) {
  const auto start = Clock::now();
  DepthResult r;
  r.solver = "heuristic";
  r.epsilon = cfg.epsilon;
  int lps = 0;
  const Incumbent inc = heuristic_incumbent(sys, make_bounds(sys, cfg.c, cfg.epsilon), cfg, &lps);
  r.heuristic_weight = inc.weight;
  r.depth = r.upper_bound = inc.weight + sys.zero_offset;
  r.lower_bound = sys.zero_offset + (inc.weight > 0 ? 1 : 0);
  r.status = inc.weight <= 1 ? ResultStatus::kOptimal : ResultStatus::kBoundOnly;
  r.stats.lp_solves = r.stats.heuristic_lp_solves = lps;
  attach_certificate(r, sys, inc, cfg);
  r.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

int run_bench(const std::string& dir, const std::string& solver, const EngineConfig& cfg, const std::string& json,
              bool no_scale) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::ostream& table = json == "-" ? std::cerr : std::cout;
  table << std::left << std::setw(28) << "Instance" << std::right << std::setw(6) << "Num" << std::setw(5) << "Dim"
        << std::setw(12) << "Tim" << std::setw(9) << "Nod" << std::setw(6) << "Dep" << '\n';
  nlohmann::json rows = nlohmann::json::array();
  int code = kOk;
  for (const auto& file : files) {
    const PointSet ps = read_points(file.string());
    const InfeasibleSystem sys = build_system(ps, !no_scale);
    DepthResult r;
    if (solver == "binsearch") {
      r = solve_depth_binary(sys, cfg);
    } else if (solver == "oracle") {
      const auto start = Clock::now();
      r.solver = "oracle";
      r.depth = r.lower_bound = r.upper_bound = oracle_depth(sys, "auto");
      r.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    } else {
      r = solve_depth(sys, cfg);
    }
    if (r.status == ResultStatus::kBoundOnly) code = kSolveFailure;
    if (r.certificate == CertificateStatus::kUnverified && code == kOk) code = kCertificateFailure;
    std::ostringstream tim;
    tim << std::fixed << std::setprecision(4) << r.stats.wall_seconds;
    table << std::left << std::setw(28) << file.filename().string() << std::right << std::setw(6) << ps.size()
          << std::setw(5) << ps.dim << std::setw(12) << tim.str() << std::setw(9) << r.stats.nodes << std::setw(6)
          << r.depth << (r.status == ResultStatus::kBoundOnly ? " *" : "") << '\n';
    auto j = to_json(r, sys);
    j["instance"]["file"] = file.filename().string();
    j["instance"]["points"] = ps.size();
    rows.push_back(std::move(j));
  }
  if (!json.empty()) emit_json(json, {{"schema", "tukey-depth-bench"}, {"version", kResultSchemaVersion}, {"results", rows}});
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Exact halfspace (Tukey) depth by branch-and-cut"};
  app.require_subcommand(1);

  InputOptions in;
  OutputOptions out;
  EngineConfig cfg;

  auto* depth = app.add_subcommand("depth", "Branch-and-cut on the big-M model");
  add_input(depth, in);
  add_output(depth, out);
  add_engine(depth, cfg);

  auto* binsearch = app.add_subcommand("binsearch", "Bisection on the cover size");
  add_input(binsearch, in);
  add_output(binsearch, out);
  add_engine(binsearch, cfg);

  auto* heuristic = app.add_subcommand("heuristic", "Chinneck cover only (an upper bound)");
  add_input(heuristic, in);
  add_output(heuristic, out);
  add_engine(heuristic, cfg);

  std::string method = "auto";
  auto* oracle = app.add_subcommand("oracle", "Combinatorial enumeration (general position only)");
  add_input(oracle, in);
  oracle->add_option("--json", out.json, "Write the result as JSON to a file, '-' for stdout");
  oracle->add_option("--method", method, "sweep (d = 2), general, or auto")
      ->check(CLI::IsMember({"auto", "sweep", "general"}));

  std::string mps_out, form = "depth";
  int guess = 1;
  auto* mps = app.add_subcommand("export-mps", "Write the MIP in fixed MPS format");
  add_input(mps, in);
  mps->add_option("output", mps_out, "MPS file, '-' for stdout")->required();
  mps->add_option("--form", form, "depth or guess")->check(CLI::IsMember({"depth", "guess"}));
  mps->add_option("--guess", guess, "Cover size bound for the guess form")->check(CLI::PositiveNumber);
  mps->add_option("--c", cfg.c, "Box bound on the direction");
  mps->add_option("--epsilon", cfg.epsilon, "Margin required of satisfied rows");

  std::string bench_dir, bench_solver = "depth";
  auto* bench = app.add_subcommand("bench", "Solve every .txt instance in a directory");
  bench->add_option("dir", bench_dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--solver", bench_solver, "depth, binsearch or oracle")
      ->check(CLI::IsMember({"depth", "binsearch", "oracle"}));
  bench->add_option("--json", out.json, "Write all results as JSON, '-' for stdout");
  bench->add_flag("--no-scale", in.no_scale, "Keep rows at their original length");
  add_engine(bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.validate();
    if (*bench) return run_bench(bench_dir, bench_solver, cfg, out.json, in.no_scale);

    const InfeasibleSystem sys = load(in);
    spdlog::info("{} distinct rows in dimension {}, zero offset {}", sys.size(), sys.dim, sys.zero_offset);
    if (*depth) return report(solve_depth(sys, cfg), sys, out);
    if (*binsearch) return report(solve_depth_binary(sys, cfg), sys, out);
    if (*heuristic) {
      OutputOptions relaxed = out;
      relaxed.allow_partial = true;
      return report(heuristic_result(sys, cfg), sys, relaxed);
    }
    if (*oracle) {
      const int d = oracle_depth(sys, method);
      if (!out.json.empty())
        emit_json(out.json, {{"schema", "tukey-depth-result"},
                             {"version", kResultSchemaVersion},
                             {"solver", "oracle"},
                             {"depth", d}});
      if (out.json != "-") std::cout << d << '\n';
      return kOk;
    }
    if (*mps) {
      const ParamBounds bounds = make_bounds(sys, cfg.c, cfg.epsilon);
      const MipModel model =
          form == "guess" ? MipModel::guess_form(sys, bounds, guess) : MipModel::depth(sys, bounds);
      if (mps_out == "-") write_mps(std::cout, to_mps(model));
      else write_mps(mps_out, model);
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << in.path << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return std::string(e.what()) == "not in general position" ? kSolveFailure : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolveFailure;
  }
  return kUsage;
}
