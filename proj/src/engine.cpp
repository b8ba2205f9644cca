#include "tukey/engine.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>

#include "tukey/elastic.hpp"

namespace tukey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Separated pool cuts must be violated by more than this.
constexpr double kCutViolation = 1e-7;

CutOptions cut_options(const EngineConfig& cfg) {
  CutOptions o;
  o.tight_tol = cfg.tight_tol;
  o.lp = cfg.lp;
  return o;
}

ElasticOptions elastic_options(const EngineConfig& cfg) {
  ElasticOptions o;
  o.violation_tol = cfg.viol_tol;
  o.lp = cfg.lp;
  return o;
}

void apply_fixings(LpModel& lp, const Node& node, const MipModel& mip) {
  for (Index j : node.fixed1) lp.lower[mip.s_col(j)] = lp.upper[mip.s_col(j)] = 1;
  for (Index j : node.fixed0) lp.lower[mip.s_col(j)] = lp.upper[mip.s_col(j)] = 0;
}

bool is_integral(const MipModel& mip, const LpSolution& lp, double tol) {
  for (Index j = 0; j < mip.num_binaries(); ++j) {
    const double v = lp.primal[mip.s_col(j)];
    if (v > tol && v < 1 - tol) return false;
  }
  return true;
}

double prune_bound(const MipModel& mip, double objective, double int_tol) {
  return mip.form == MipForm::kDepth ? std::ceil(objective - int_tol) : objective;
}

Incumbent incumbent_from_lp(const MipModel& mip, const LpSolution& lp) {
  Incumbent inc;
  for (Index j = 0; j < mip.num_binaries(); ++j)
    if (lp.primal[mip.s_col(j)] > 0.5) inc.cover.push_back(j);
  inc.weight = mip.sys.weight_of(inc.cover);
  inc.direction = lp.primal.head(mip.dim());
  if (mip.form == MipForm::kGuess) inc.eps = lp.primal[mip.eps_col()];
  return inc;
}

LpSolution solve_node_lp(const Node& node, const MipModel& mip, std::span<const Cut> cuts, const EngineConfig& cfg) {
  LpModel lp = mip.relaxation(cuts);
  apply_fixings(lp, node, mip);
  LpSolution sol = solve_lp(lp, cfg.lp);
  if (sol.status != LpStatus::kOptimal && sol.status != LpStatus::kInfeasible)
    throw std::runtime_error(std::string("numerics: node LP ended ") + to_string(sol.status));
  return sol;
}

bool past(const std::optional<Clock::time_point>& deadline) { return deadline && Clock::now() >= *deadline; }

}  // namespace

const char* to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::kInfeasible: return "infeasible";
    case NodeStatus::kPrunedByBound: return "pruned";
    case NodeStatus::kFathomed: return "fathomed";
    case NodeStatus::kFractional: return "fractional";
  }
  return "unknown";
}

const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kFound: return "found";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kLimit: return "limit";
  }
  return "unknown";
}

const char* to_string(ResultStatus s) { return s == ResultStatus::kOptimal ? "optimal" : "bound-only"; }
const char* to_string(CertificateStatus s) { return s == CertificateStatus::kVerified ? "verified" : "unverified"; }

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  nodes += o.nodes;
  lp_solves += o.lp_solves;
  cuts += o.cuts;
  mips += o.mips;
  heuristic_lp_solves += o.heuristic_lp_solves;
  return *this;
}

NodeOutcome bound_and_cut(const Node& node, const MipModel& mip, CutPool& pool, double cutoff,
                          const EngineConfig& cfg, std::optional<Clock::time_point> deadline) {
  NodeOutcome out;
  out.cuts = node.cuts;
  std::sort(out.cuts.begin(), out.cuts.end());
  const Index d = mip.dim(), n = mip.num_binaries();
  double previous = -kInf;

  for (;; ++out.rounds) {
    const std::vector<Cut> cuts = pool.get(out.cuts);
    out.lp = solve_node_lp(node, mip, cuts, cfg);
    ++out.lp_solves;
    if (out.lp.status == LpStatus::kInfeasible) {
      out.status = NodeStatus::kInfeasible;
      out.objective = out.bound = kInf;
      return out;
    }
    out.objective = out.lp.objective_value;
    out.bound = prune_bound(mip, out.objective, cfg.int_tol);
    if (out.bound >= cutoff) {
      out.status = NodeStatus::kPrunedByBound;
      return out;
    }
    if (is_integral(mip, out.lp, cfg.int_tol)) {
      out.status = NodeStatus::kFathomed;
      return out;
    }
    out.status = NodeStatus::kFractional;
    if (out.rounds > 0 && out.objective - previous < cfg.cut_improve) return out;
    if (out.rounds >= cfg.max_cut_rounds || past(deadline)) return out;
    previous = out.objective;

    const Eigen::VectorXd s = out.lp.primal.segment(d, n);
    std::vector<CutPool::Id> added;
    for (CutPool::Id id : pool.ids()) {
      if (std::binary_search(out.cuts.begin(), out.cuts.end(), id)) continue;
      if (pool.get(id).activity(s) < 1 - kCutViolation) added.push_back(id);
    }
    if (added.empty()) {
      for (const Cut& cut : generate_cuts(mip.sys, s, node.fixed1, node.fixed0, mip.bounds, cfg.use_knapsack(),
                                          cut_options(cfg))) {
        auto [id, fresh] = pool.insert(cut);
        if (fresh) ++out.cuts_generated;
        if (!std::binary_search(out.cuts.begin(), out.cuts.end(), id)) added.push_back(id);
      }
    }
    if (added.empty()) return out;
    out.cuts.insert(out.cuts.end(), added.begin(), added.end());
    std::sort(out.cuts.begin(), out.cuts.end());
  }
}

std::vector<Index> fractional_binaries(const Node& node, const MipModel& mip, const LpSolution& lp,
                                       double int_tol) {
  std::vector<Index> out;
  for (Index j = 0; j < mip.num_binaries(); ++j) {
    if (std::binary_search(node.fixed1.begin(), node.fixed1.end(), j)) continue;
    if (std::binary_search(node.fixed0.begin(), node.fixed0.end(), j)) continue;
    const double v = lp.primal[mip.s_col(j)];
    if (v > int_tol && v < 1 - int_tol) out.push_back(j);
  }
  return out;
}

Index select_branch_variable(const Node& node, const MipModel& mip, std::span<const Cut> cuts,
                             const LpSolution& lp, const EngineConfig& cfg, int* lp_solves) {
  const std::vector<Index> frac = fractional_binaries(node, mip, lp, cfg.int_tol);
  if (frac.empty()) throw std::logic_error("integral node");
  if (frac.size() == 1) return frac.front();

  if (cfg.rule == BranchRule::kGreedy) {
    std::vector<bool> removed(static_cast<std::size_t>(mip.num_binaries()), false);
    for (Index j : node.fixed1) removed[static_cast<std::size_t>(j)] = true;
    const ElasticSolution e = solve_elastic(mip.sys, removed, mip.bounds, elastic_options(cfg));
    if (lp_solves) *lp_solves += e.lp_solves;
    // Violated rows by violation * |sensitivity| first, then |sensitivity|,
    // then fractionality.
    auto key = [&](Index j) {
      const double sens = std::abs(e.sensitivities[j]);
      const double v = lp.primal[mip.s_col(j)];
      const int tier = e.violations[j] > 0 ? 2 : sens > cfg.viol_tol ? 1 : 0;
      const double score = tier == 2 ? e.violations[j] * sens : tier == 1 ? sens : std::min(v, 1 - v);
      return std::pair{tier, score};
    };
    Index best = frac.front();
    auto best_key = key(best);
    for (Index j : frac) {
      const auto k = key(j);
      if (k > best_key) {
        best = j;
        best_key = k;
      }
    }
    return best;
  }

  std::vector<Index> candidates = frac;
  std::stable_sort(candidates.begin(), candidates.end(), [&](Index a, Index b) {
    const double va = lp.primal[mip.s_col(a)], vb = lp.primal[mip.s_col(b)];
    return std::min(va, 1 - va) > std::min(vb, 1 - vb);
  });
  if (static_cast<int>(candidates.size()) > cfg.strong_k) candidates.resize(static_cast<std::size_t>(cfg.strong_k));
  std::sort(candidates.begin(), candidates.end());

  Index best = candidates.front();
  double best_score = -kInf;
  for (Index j : candidates) {
    auto [one, zero] = expand(node, j);
    double score = kInf;
    for (const Node* child : {&one, &zero}) {
      const LpSolution sol = solve_node_lp(*child, mip, cuts, cfg);
      if (lp_solves) ++*lp_solves;
      score = std::min(score, sol.status == LpStatus::kInfeasible ? kInf : sol.objective_value);
    }
    if (score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

std::pair<Node, Node> expand(const Node& node, Index branch_var, long first_id) {
  const bool fixed = std::binary_search(node.fixed1.begin(), node.fixed1.end(), branch_var) ||
                     std::binary_search(node.fixed0.begin(), node.fixed0.end(), branch_var);
  if (fixed) throw std::invalid_argument("branch variable already fixed");
  Node one = node, zero = node;
  one.fixed1.insert(std::upper_bound(one.fixed1.begin(), one.fixed1.end(), branch_var), branch_var);
  zero.fixed0.insert(std::upper_bound(zero.fixed0.begin(), zero.fixed0.end(), branch_var), branch_var);
  one.tree_depth = zero.tree_depth = node.tree_depth + 1;
  one.id = first_id;
  zero.id = first_id + 1;
  return {std::move(one), std::move(zero)};
}

std::optional<Incumbent> rounding_heuristic(const LpSolution& lp, const Node& node, const MipModel& mip,
                                            int incumbent_weight, const EngineConfig& cfg) {
  (void)node;
  Incumbent inc;
  std::vector<Index> kept;
  for (Index j = 0; j < mip.num_binaries(); ++j)
    (lp.primal[mip.s_col(j)] >= 0.5 ? inc.cover : kept).push_back(j);
  inc.weight = mip.sys.weight_of(inc.cover);
  if (mip.form == MipForm::kDepth ? inc.weight >= incumbent_weight : inc.weight > mip.guess) return std::nullopt;
  auto x = kept.empty() ? std::optional<Eigen::VectorXd>(Eigen::VectorXd::Zero(mip.dim()))
                        : find_direction(mip.sys, kept, mip.bounds, cfg.lp);
  if (!x) return std::nullopt;
  inc.direction = *x;
  if (mip.form == MipForm::kGuess) {
    double margin = kInf;
    Eigen::VectorXd scaled = inc.direction;
    if (!kept.empty()) margin = certificate_margin(mip.sys, inc.cover, scaled, mip.bounds.c);
    if (!(margin > cfg.eps_pos)) return std::nullopt;
    inc.direction = scaled;
    inc.eps = std::min(margin, mip.bounds.bigM);
  }
  return inc;
}

namespace {

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lower_bound != b.lower_bound) return a.lower_bound > b.lower_bound;
    return a.id > b.id;
  }
};

// Coordinator state shared by the workers.
class Search {
 public:
  Search(const MipModel& mip, CutPool& pool, const EngineConfig& cfg, std::optional<Incumbent> incumbent,
         bool early_exit)
      : mip_(mip), pool_(pool), cfg_(cfg), early_exit_(early_exit), best_(std::move(incumbent)) {
    if (mip.form == MipForm::kDepth) {
      cutoff_ = best_ ? best_->weight : mip.sys.total_weight() + 1;
    } else {
      cutoff_ = -cfg.eps_pos;
      best_.reset();
    }
    start_ = Clock::now();
    if (cfg.time_limit > 0)
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_limit));
  }

  MipResult run() {
    Node root;
    root.cuts = pool_.ids();
    root.lower_bound = -kInf;
    root.id = next_id_++;
    push(std::move(root));

    if (cfg_.workers <= 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < cfg_.workers; ++w) threads.emplace_back([this] { work(); });
      for (auto& t : threads) t.join();
    }
    if (error_) std::rethrow_exception(error_);

    MipResult r;
    r.stats = stats_;
    r.stats.mips = 1;
    r.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    r.best = best_;
    const bool exhausted = open_size() == 0 && !limit_hit_;
    if (mip_.form == MipForm::kGuess) {
      r.status = found_ ? MipStatus::kFound : exhausted ? MipStatus::kInfeasible : MipStatus::kLimit;
    } else if (exhausted) {
      r.status = best_ ? MipStatus::kOptimal : MipStatus::kInfeasible;
      r.lower_bound = best_ ? best_->weight : kInf;
    } else {
      r.status = MipStatus::kLimit;
      r.lower_bound = std::min(cutoff_, open_min_bound());
    }
    return r;
  }

 private:
  void push(Node node) {
    if (cfg_.selection == NodeSelection::kDepthFirst) stack_.push_back(std::move(node));
    else heap_.push(std::move(node));
  }
  bool pop(Node& node) {
    if (cfg_.selection == NodeSelection::kDepthFirst) {
      if (stack_.empty()) return false;
      node = std::move(stack_.back());
      stack_.pop_back();
    } else {
      if (heap_.empty()) return false;
      node = heap_.top();
      heap_.pop();
    }
    return true;
  }
  std::size_t open_size() const { return stack_.size() + heap_.size(); }
  double open_min_bound() {
    double lb = kInf;
    for (const Node& n : stack_) lb = std::min(lb, n.lower_bound);
    auto copy = heap_;
    if (!copy.empty()) lb = std::min(lb, copy.top().lower_bound);
    return std::max(lb, 0.0);
  }

  void work() {
    std::unique_lock lock(mutex_);
    while (true) {
      cv_.wait(lock, [&] { return stop_ || open_size() > 0 || busy_ == 0; });
      if (stop_ || open_size() == 0) break;
      if ((cfg_.node_limit > 0 && stats_.nodes >= cfg_.node_limit) || past(deadline_)) {
        limit_hit_ = true;
        stop_ = true;
        break;
      }
      Node node;
      pop(node);
      if (node.lower_bound >= cutoff_) continue;
      ++busy_;
      ++stats_.nodes;
      const double cutoff = cutoff_;
      const int incumbent_weight = best_ ? best_->weight : mip_.sys.total_weight() + 1;
      lock.unlock();

      std::vector<Node> children;
      std::optional<Incumbent> found;
      SearchStats local;
      try {
        process(node, cutoff, incumbent_weight, children, found, local);
      } catch (...) {
        lock.lock();
        if (!error_) error_ = std::current_exception();
        stop_ = true;
        --busy_;
        cv_.notify_all();
        break;
      }

      lock.lock();
      stats_ += local;
      if (found) offer(std::move(*found));
      for (Node& child : children) {
        child.id = next_id_++;
        if (child.lower_bound < cutoff_) push(std::move(child));
      }
      --busy_;
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  // Called with the lock held.
  void offer(Incumbent inc) {
    if (mip_.form == MipForm::kDepth) {
      if (inc.weight >= cutoff_) return;
      spdlog::debug("incumbent {} -> {}", cutoff_, inc.weight);
      cutoff_ = inc.weight;
      best_ = std::move(inc);
    } else {
      if (found_) return;
      found_ = true;
      best_ = std::move(inc);
      if (early_exit_) stop_ = true;
    }
  }

  void process(const Node& node, double cutoff, int incumbent_weight, std::vector<Node>& children,
               std::optional<Incumbent>& found, SearchStats& local) {
    NodeOutcome out = bound_and_cut(node, mip_, pool_, cutoff, cfg_, deadline_);
    local.lp_solves += out.lp_solves;
    local.cuts += out.cuts_generated;
    switch (out.status) {
      case NodeStatus::kInfeasible:
      case NodeStatus::kPrunedByBound:
        return;
      case NodeStatus::kFathomed:
        found = incumbent_from_lp(mip_, out.lp);
        return;
      case NodeStatus::kFractional:
        break;
    }
    if (cfg_.rounding && node.tree_depth > 7 && out.rounds > 5) {
      ++local.lp_solves;
      found = rounding_heuristic(out.lp, node, mip_, incumbent_weight, cfg_);
      if (found && mip_.form == MipForm::kDepth && found->weight <= out.bound) return;
    }
    Node base = node;
    base.cuts = out.cuts;
    base.lower_bound = out.bound;
    const std::vector<Cut> cuts = pool_.get(out.cuts);
    int lps = 0;
    const Index var = select_branch_variable(base, mip_, cuts, out.lp, cfg_, &lps);
    local.lp_solves += lps;
    auto [one, zero] = expand(base, var);
    // The stack pops the last push first, so s_b = 1 is explored first.
    if (cfg_.selection == NodeSelection::kDepthFirst) {
      children.push_back(std::move(zero));
      children.push_back(std::move(one));
    } else {
      children.push_back(std::move(one));
      children.push_back(std::move(zero));
    }
  }

  const MipModel& mip_;
  CutPool& pool_;
  const EngineConfig& cfg_;
  const bool early_exit_;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<Node> stack_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap_;
  int busy_ = 0;
  bool stop_ = false;
  bool limit_hit_ = false;
  bool found_ = false;
  long next_id_ = 0;
  double cutoff_ = kInf;
  std::optional<Incumbent> best_;
  SearchStats stats_;
  std::exception_ptr error_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
};

}  // namespace

MipResult solve_mip(const MipModel& mip, CutPool& pool, const EngineConfig& cfg, std::optional<Incumbent> incumbent,
                    bool early_exit) {
  cfg.validate();
  return Search(mip, pool, cfg, std::move(incumbent), early_exit).run();
}

double certificate_margin(const InfeasibleSystem& sys, std::span<const Index> cover, Eigen::VectorXd& x, double c) {
  const double norm = x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0;
  if (norm > 0) x *= c / norm;
  std::vector<bool> in_cover(static_cast<std::size_t>(sys.size()), false);
  for (Index j : cover) in_cover[static_cast<std::size_t>(j)] = true;
  double margin = kInf;
  for (Index j = 0; j < sys.size(); ++j)
    if (!in_cover[static_cast<std::size_t>(j)]) margin = std::min(margin, sys.rows.row(j).dot(x));
  return margin;
}

void attach_certificate(DepthResult& r, const InfeasibleSystem& sys, const Incumbent& inc, const EngineConfig& cfg) {
  r.cover = inc.cover;
  r.direction = inc.direction.size() == sys.dim ? inc.direction : Eigen::VectorXd::Zero(sys.dim);
  r.margin = certificate_margin(sys, r.cover, r.direction, cfg.c);
  r.certificate = r.margin > cfg.cert_tol ? CertificateStatus::kVerified : CertificateStatus::kUnverified;
  if (r.certificate == CertificateStatus::kUnverified) spdlog::warn("certificate failed, margin {}", r.margin);
}

Incumbent heuristic_incumbent(const InfeasibleSystem& sys, const ParamBounds& bounds, const EngineConfig& cfg,
                              int* lp_solves) {
  Incumbent inc;
  inc.direction = Eigen::VectorXd::Zero(sys.dim);
  if (sys.empty()) return inc;
  const HeuristicCover hc = chinneck_cover(sys, cfg.heuristic, cfg.heuristic_k, bounds, elastic_options(cfg));
  if (lp_solves) *lp_solves += hc.lp_solves;
  inc.cover = hc.cover;
  inc.weight = hc.weight;
  inc.direction = hc.direction;
  return inc;
}

DepthResult solve_depth(const InfeasibleSystem& sys, const EngineConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  DepthResult r;
  r.solver = "branch-and-cut";
  r.epsilon = cfg.epsilon;
  const ParamBounds bounds = make_bounds(sys, cfg.c, cfg.epsilon);

  int heuristic_lps = 0;
  Incumbent inc = heuristic_incumbent(sys, bounds, cfg, &heuristic_lps);
  r.heuristic_weight = inc.weight;
  r.stats.heuristic_lp_solves = heuristic_lps;
  r.stats.lp_solves = heuristic_lps;

  MipStatus status = MipStatus::kOptimal;
  int lower = inc.weight;
  if (inc.weight > 1) {
    CutPool pool;
    const MipModel mip = MipModel::depth(sys, bounds);
    MipResult m = solve_mip(mip, pool, cfg, inc);
    r.stats += m.stats;
    status = m.status;
    if (m.best) inc = *m.best;
    lower = status == MipStatus::kLimit ? static_cast<int>(std::ceil(m.lower_bound - cfg.int_tol)) : inc.weight;
  }
  r.status = status == MipStatus::kLimit ? ResultStatus::kBoundOnly : ResultStatus::kOptimal;
  r.depth = inc.weight + sys.zero_offset;
  r.upper_bound = r.depth;
  r.lower_bound = std::min(lower, inc.weight) + sys.zero_offset;
  attach_certificate(r, sys, inc, cfg);
  r.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace tukey
