// SPDX-License-Identifier: Apache-2.0
#include "cbal/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "cbal/balance.hpp"
#include "cbal/rng.hpp"
#include "cbal/scoring.hpp"
#include "cbal/selector_greedy.hpp"

namespace cbal {

namespace {

Matrix gather_rows(const Matrix& source, const std::vector<int>& ids) {
  Matrix out(static_cast<int>(ids.size()), source.cols());
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < source.cols(); ++j) out(i, j) = source(ids[i], j);
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels, const std::vector<int>& ids) {
  std::vector<int> out(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) out[i] = labels[ids[i]];
  return out;
}

// Selection rule of the pseudo-label balancing variant: entropy-descending
// order with per-class quotas floor(omega_i) over pseudo labels, then the
// remaining budget filled by entropy alone.
std::vector<int> select_pseudo_label_balanced(const ProbabilityMatrix& probs,
                                              const std::vector<double>& neg_entropy,
                                              const BalanceTarget& omega, int budget) {
  const int n = probs.samples();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return neg_entropy[a] < neg_entropy[b]; });

  std::vector<int> pseudo(n);
  for (int i = 0; i < n; ++i) pseudo[i] = argmax_row(probs.row(i));

  std::vector<int> quota(omega.classes());
  for (int k = 0; k < omega.classes(); ++k)
    quota[k] = static_cast<int>(std::floor(omega.counts[k] + 1e-9));

  std::vector<char> taken(n, 0);
  std::vector<int> per_class(omega.classes(), 0);
  std::vector<int> sel;
  sel.reserve(budget);
  for (int j : order) {
    if (static_cast<int>(sel.size()) == budget) break;
    const int k = pseudo[j];
    if (per_class[k] < quota[k]) {
      taken[j] = 1;
      per_class[k]++;
      sel.push_back(j);
    }
  }
  for (int j : order) {
    if (static_cast<int>(sel.size()) == budget) break;
    if (!taken[j]) {
      taken[j] = 1;
      sel.push_back(j);
    }
  }
  return sel;
}

std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < k; ++i) std::swap(ids[i], ids[i + rng.index(n - i)]);
  ids.resize(k);
  return ids;
}

struct SelectionOutcome {
  std::vector<int> pool_positions;  // indices into the unlabeled vector
  double solver_seconds = 0.0;
};

SelectionOutcome select_batch(Method method, const Dataset& ds, const Matrix& std_feats,
                              const CycleState& state, const Learner& learner,
                              const SimConfig& cfg, std::uint64_t seed, int cycle) {
  const int b = cfg.budget_per_cycle;
  const int n = static_cast<int>(state.unlabeled.size());
  SelectionOutcome out;

  if (method == Method::Random) {
    Rng rng(derive_seed(seed, "random-cycle", cycle));
    out.pool_positions = sample_without_replacement(n, b, rng);
    std::sort(out.pool_positions.begin(), out.pool_positions.end());
    return out;
  }

  const Matrix unlabeled_feats = gather_rows(std_feats, state.unlabeled);
  const ProbabilityMatrix probs = predict_proba(learner, unlabeled_feats);
  const BalanceTarget omega = compute_omega(state);

  if (method == Method::KCenter || method == Method::KCenterCb) {
    const Matrix labeled_feats = gather_rows(std_feats, state.labeled);
    const DistanceMatrix to_labeled = pairwise_distances(unlabeled_feats, labeled_feats);
    const DistanceMatrix among_pool = pairwise_distances(unlabeled_feats, unlabeled_feats);
    const double lambda = method == Method::KCenterCb ? cfg.lambda : 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    SelectionVector sel =
        greedy_class_balanced(probs, to_labeled, among_pool, omega, lambda, b);
    out.solver_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.pool_positions = sel.indices();
    return out;
  }

  std::vector<double> scores;  // lower = selected first
  switch (method) {
    case Method::Entropy:
    case Method::EntropyCb:
    case Method::EntropyL1Pseudo:
      scores = batch_negative_entropy(probs);
      break;
    case Method::UncertaintyVec:
    case Method::UncertaintyVecCb: {
      // Least-confidence stand-in for an externally supplied uncertainty
      // vector: higher value = more valuable, so scores are negated.
      std::vector<double> u(probs.samples());
      for (int i = 0; i < probs.samples(); ++i) {
        const auto row = probs.row(i);
        u[i] = 1.0 - row[argmax_row(row)];
      }
      const UncertaintyVector uv = UncertaintyVector::validated(std::move(u));
      scores.resize(uv.size());
      for (int i = 0; i < uv.size(); ++i) scores[i] = -uv.scores()[i];
      break;
    }
    case Method::Bald:
    case Method::BaldCb: {
      const Matrix labeled_feats = gather_rows(std_feats, state.labeled);
      const std::vector<int> labeled_labels = gather_labels(ds.labels, state.labeled);
      const int nl = labeled_feats.rows();
      std::vector<ProbabilityMatrix> committee;
      committee.reserve(cfg.bald_passes);
      for (int t = 0; t < cfg.bald_passes; ++t) {
        Rng rng(derive_seed(seed, "bald-boot", static_cast<std::uint64_t>(cycle) * 1024 + t));
        std::vector<int> boot(nl);
        for (int i = 0; i < nl; ++i) boot[i] = rng.index(nl);
        std::sort(boot.begin(), boot.end());
        Matrix bx(nl, labeled_feats.cols());
        std::vector<int> by(nl);
        for (int i = 0; i < nl; ++i) {
          for (int j = 0; j < labeled_feats.cols(); ++j) bx(i, j) = labeled_feats(boot[i], j);
          by[i] = labeled_labels[boot[i]];
        }
        const Learner member = train_learner(bx, by, ds.n_classes, cfg.learner);
        committee.push_back(predict_proba(member, unlabeled_feats));
      }
      const UncertaintyVector mi = bald_scores(committee);
      scores.resize(mi.size());
      for (int i = 0; i < mi.size(); ++i) scores[i] = -mi.scores()[i];
      break;
    }
    default:
      fail(ErrorCode::ConfigInvalid, "unhandled method");
  }

  if (method == Method::EntropyL1Pseudo) {
    out.pool_positions = select_pseudo_label_balanced(probs, scores, omega, b);
    std::sort(out.pool_positions.begin(), out.pool_positions.end());
    return out;
  }

  const bool balanced = method == Method::EntropyCb || method == Method::UncertaintyVecCb ||
                        method == Method::BaldCb;
  SelectorConfig scfg;
  scfg.lambda = balanced ? cfg.lambda : 0.0;
  scfg.budget = b;
  scfg.solver = cfg.solver;
  scfg.time_limit = cfg.solver_time_limit;
  scfg.gap_tolerance = cfg.solver_gap_tolerance;
  const SolveResult res = solve_cbal(scores, probs, omega, scfg);
  out.solver_seconds = res.wall_time;
  out.pool_positions = res.selection.indices();
  return out;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::Random: return "random";
    case Method::Entropy: return "entropy";
    case Method::EntropyCb: return "entropy_cb";
    case Method::EntropyL1Pseudo: return "entropy_l1_pseudo";
    case Method::KCenter: return "kcenter";
    case Method::KCenterCb: return "kcenter_cb";
    case Method::UncertaintyVec: return "uncertainty_vec";
    case Method::UncertaintyVecCb: return "uncertainty_vec_cb";
    case Method::Bald: return "bald";
    case Method::BaldCb: return "bald_cb";
  }
  return "?";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::Random,         Method::Entropy,        Method::EntropyCb,
      Method::EntropyL1Pseudo, Method::KCenter,       Method::KCenterCb,
      Method::UncertaintyVec, Method::UncertaintyVecCb, Method::Bald,
      Method::BaldCb,
  };
  return methods;
}

Method method_from_string(const std::string& name) {
  for (Method m : all_methods())
    if (name == to_string(m)) return m;
  fail(ErrorCode::ConfigParse, "unknown method '" + name + "'");
}

void SimConfig::validate(int pool_size) const {
  if (initial_size < 1 || budget_per_cycle < 1)
    fail(ErrorCode::ConfigInvalid, "initial_size and budget_per_cycle must be >= 1");
  if (total_budget <= initial_size)
    fail(ErrorCode::ConfigInvalid, "total budget must exceed the initial size");
  if ((total_budget - initial_size) % budget_per_cycle != 0)
    fail(ErrorCode::ConfigInvalid, "budget minus initial size must be a multiple of b");
  if (total_budget > pool_size)
    fail(ErrorCode::BudgetExceedsPool, "total budget " + std::to_string(total_budget) +
                                           " exceeds training pool " + std::to_string(pool_size));
  if (lambda < 0.0) fail(ErrorCode::ConfigInvalid, "lambda must be >= 0");
  if (bald_passes < 2) fail(ErrorCode::ConfigInvalid, "bald needs at least two passes");
  learner.validate();
}

CycleState init_labeled_split(const Dataset& ds, int b0, std::uint64_t seed) {
  const int c = ds.n_classes;
  if (b0 < c || b0 % c != 0)
    fail(ErrorCode::IndivisibleInit,
         "initial size " + std::to_string(b0) + " not divisible by " + std::to_string(c));
  const int per_class = b0 / c;

  CycleState state;
  state.initial_size = b0;
  state.class_counts.assign(c, 0);
  for (int k = 0; k < c; ++k) {
    if (static_cast<int>(ds.reserve[k].size()) < per_class)
      fail(ErrorCode::BudgetExceedsPool,
           "class " + std::to_string(k) + " reserve smaller than b0/C");
    std::vector<int> ids = ds.reserve[k];
    Rng rng(derive_seed(seed, "init-split", k));
    rng.shuffle(ids);
    for (int s = 0; s < per_class; ++s) state.labeled.push_back(ids[s]);
    state.class_counts[k] = per_class;
  }
  std::sort(state.labeled.begin(), state.labeled.end());
  std::set_difference(ds.train_pool.begin(), ds.train_pool.end(), state.labeled.begin(),
                      state.labeled.end(), std::back_inserter(state.unlabeled));
  state.cycle = 0;
  state.check_invariants();
  return state;
}

ExperimentRecord run_al_loop(const Dataset& ds, Method method, const SimConfig& cfg,
                             std::uint64_t seed) {
  cfg.validate(static_cast<int>(ds.train_pool.size()));
  const Matrix std_feats = standardized_features(ds);
  const Matrix test_feats = gather_rows(std_feats, ds.test_indices);
  const std::vector<int> test_labels = gather_labels(ds.labels, ds.test_indices);

  CycleState state = init_labeled_split(ds, cfg.initial_size, derive_seed(seed, "init"));
  state.budget_per_cycle = cfg.budget_per_cycle;
  state.total_budget = cfg.total_budget;
  const size_t pool_total = state.labeled.size() + state.unlabeled.size();

  Learner model = train_learner(gather_rows(std_feats, state.labeled),
                                gather_labels(ds.labels, state.labeled), ds.n_classes,
                                cfg.learner);

  ExperimentRecord record;
  record.method = method;
  record.seed = seed;

  const int n_cycles = cfg.cycles();
  for (int cycle = 1; cycle <= n_cycles; ++cycle) {
    state.cycle = cycle;
    const SelectionOutcome picked =
        select_batch(method, ds, std_feats, state, model, cfg, seed, cycle);
    if (static_cast<int>(picked.pool_positions.size()) != cfg.budget_per_cycle)
      fail(ErrorCode::ConfigInvalid, "selection size does not match the per-cycle budget");

    // Query the oracle: reveal true labels of the selected samples.
    std::vector<int> batch_ids(picked.pool_positions.size());
    for (size_t i = 0; i < picked.pool_positions.size(); ++i)
      batch_ids[i] = state.unlabeled[picked.pool_positions[i]];

    std::vector<int> histogram(ds.n_classes, 0);
    for (int id : batch_ids) histogram[ds.labels[id]]++;

    std::vector<int> new_labeled;
    std::merge(state.labeled.begin(), state.labeled.end(), batch_ids.begin(), batch_ids.end(),
               std::back_inserter(new_labeled));
    std::vector<int> new_unlabeled;
    std::set_difference(state.unlabeled.begin(), state.unlabeled.end(), batch_ids.begin(),
                        batch_ids.end(), std::back_inserter(new_unlabeled));
    state.labeled = std::move(new_labeled);
    state.unlabeled = std::move(new_unlabeled);
    for (int k = 0; k < ds.n_classes; ++k) state.class_counts[k] += histogram[k];

    state.check_invariants();
    if (state.labeled.size() + state.unlabeled.size() != pool_total)
      fail(ErrorCode::ConfigInvalid, "pool size not conserved");
    if (static_cast<int>(state.labeled.size()) !=
        cfg.initial_size + cycle * cfg.budget_per_cycle)
      fail(ErrorCode::ConfigInvalid, "labeled size drifted from b0 + c*b");

    // Retrain on the enlarged labeled set; this model is both the metric
    // subject for this cycle and the scorer for the next one.
    model = train_learner(gather_rows(std_feats, state.labeled),
                          gather_labels(ds.labels, state.labeled), ds.n_classes, cfg.learner);

    CycleMetrics metrics;
    metrics.cycle = cycle;
    metrics.labeled_size = static_cast<int>(state.labeled.size());
    metrics.test_accuracy = accuracy(model, test_feats, test_labels);
    metrics.l1 = l1_score(histogram, cfg.budget_per_cycle);
    metrics.histogram = std::move(histogram);
    metrics.solver_seconds = cfg.record_timings ? picked.solver_seconds : 0.0;
    record.cycles.push_back(std::move(metrics));
  }
  return record;
}

std::vector<SweepRow> lambda_sweep(const Dataset& ds, const std::vector<double>& lambdas,
                                   const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate(static_cast<int>(ds.train_pool.size()));
  if (lambdas.empty()) fail(ErrorCode::ConfigInvalid, "empty lambda grid");

  const Matrix std_feats = standardized_features(ds);
  CycleState state = init_labeled_split(ds, cfg.initial_size, derive_seed(seed, "init"));
  state.budget_per_cycle = cfg.budget_per_cycle;
  state.total_budget = cfg.total_budget;
  state.cycle = 1;

  const Learner model = train_learner(gather_rows(std_feats, state.labeled),
                                      gather_labels(ds.labels, state.labeled), ds.n_classes,
                                      cfg.learner);
  const Matrix unlabeled_feats = gather_rows(std_feats, state.unlabeled);
  const ProbabilityMatrix probs = predict_proba(model, unlabeled_feats);
  const std::vector<double> scores = batch_negative_entropy(probs);
  const BalanceTarget omega = compute_omega(state);

  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    SelectorConfig scfg;
    scfg.lambda = lambda;
    scfg.budget = cfg.budget_per_cycle;
    scfg.solver = SolverKind::BranchAndBound;  // the sweep is defined over exact solves
    const SolveResult res = solve_cbal(scores, probs, omega, scfg);

    std::vector<int> histogram(ds.n_classes, 0);
    for (int pos : res.selection.indices()) histogram[ds.labels[state.unlabeled[pos]]]++;

    SweepRow row;
    row.lambda = lambda;
    row.entropy_loss = res.linear_term;
    row.l1_loss = res.balance_term;
    row.l1_score = l1_score(histogram, cfg.budget_per_cycle);
    rows.push_back(row);
  }
  return rows;
}

double select_lambda(const std::vector<SweepRow>& table, double plateau_tol) {
  if (table.empty()) fail(ErrorCode::ConfigInvalid, "empty sweep table");
  for (size_t i = 1; i < table.size(); ++i)
    if (table[i].lambda <= table[i - 1].lambda)
      fail(ErrorCode::ConfigInvalid, "sweep table must be sorted by lambda");
  if (table.size() == 1) return table[0].lambda;

  const double final_loss = table.back().l1_loss;
  const double denom = std::max(std::abs(final_loss), 1e-12);
  // The last row alone is trivially within tolerance of itself; a plateau
  // must span at least two grid points to count as convergence.
  for (size_t k = 0; k + 1 < table.size(); ++k) {
    bool plateau = true;
    for (size_t j = k; j < table.size(); ++j) {
      if (std::abs(table[j].l1_loss - final_loss) / denom > plateau_tol) {
        plateau = false;
        break;
      }
    }
    if (plateau) return table[k].lambda;
  }
  fail(ErrorCode::NoPlateau, "l1 loss keeps improving through the last lambda");
}

}  // namespace cbal
