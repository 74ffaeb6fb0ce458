#include "planmerge/merging.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace planmerge {

namespace {

void require_uniform_length(std::span<const Candidate> candidates) {
  const auto steps = candidates.front().plan.size();
  for (const auto& c : candidates) {
    if (c.plan.size() != steps) {
      throw InvalidInput("candidate plans differ in length (" + std::to_string(c.plan.size()) +
                         " vs " + std::to_string(steps) + ")");
    }
  }
}

// Candidates sorted by (source, reputation, plan): the order in which vote
// sums are accumulated.
std::vector<const Candidate*> canonical_order(std::span<const Candidate> candidates) {
  std::vector<const Candidate*> order;
  order.reserve(candidates.size());
  for (const auto& c : candidates) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Candidate* a, const Candidate* b) {
    if (a->source_id != b->source_id) return a->source_id < b->source_id;
    if (a->reputation != b->reputation) return a->reputation < b->reputation;
    return a->plan < b->plan;
  });
  return order;
}

// Vote-maximal operation at `step`, ignoring `excluded`. std::map keeps the
// operations in lexicographic order, so the first maximum wins ties.
std::optional<Operation> vote_at(const std::vector<const Candidate*>& order, std::size_t step,
                                 const std::optional<Operation>& excluded) {
  std::map<Operation, double> scores;
  for (const Candidate* c : order) {
    const Operation& op = c->plan[step];
    if (excluded && op == *excluded) continue;
    scores[op] += c->reputation;
  }
  std::optional<Operation> winner;
  double top = 0.0;
  for (const auto& [op, score] : scores) {
    if (!winner || score > top) {
      winner = op;
      top = score;
    }
  }
  return winner;
}

}  // namespace

std::size_t best_candidate(std::span<const Candidate> candidates) {
  if (candidates.empty()) throw NoCandidate("no candidates to choose from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const auto& b = candidates[best];
    if (c.reputation > b.reputation ||
        (c.reputation == b.reputation && c.source_id < b.source_id)) {
      best = i;
    }
  }
  return best;
}

std::size_t worst_candidate(std::span<const Candidate> candidates, std::size_t exclude) {
  std::optional<std::size_t> worst;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i == exclude) continue;
    const auto& c = candidates[i];
    if (!worst) {
      worst = i;
      continue;
    }
    const auto& w = candidates[*worst];
    if (c.reputation < w.reputation ||
        (c.reputation == w.reputation && c.source_id < w.source_id)) {
      worst = i;
    }
  }
  if (!worst) throw NoCandidate("need a second candidate for the worst plan");
  return *worst;
}

Plan merge_method0(std::span<const HistoryEntry> history) {
  if (history.empty()) throw NoCandidate("merge method 0 needs a nonempty plan history");
  std::size_t chosen = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].observed_success >= history[chosen].observed_success) chosen = i;
  }
  return history[chosen].plan;
}

Plan merge_method1(std::span<const Candidate> candidates) {
  return candidates[best_candidate(candidates)].plan;
}

Plan merge_method2(std::span<const Candidate> candidates) {
  if (candidates.empty()) throw NoCandidate("merge method 2 needs at least one candidate");
  require_uniform_length(candidates);
  const auto order = canonical_order(candidates);
  const std::size_t steps = candidates.front().plan.size();
  Plan merged;
  merged.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) merged.push_back(*vote_at(order, k, std::nullopt));
  return merged;
}

Plan merge_method3(std::span<const Candidate> candidates, int num_replacements) {
  if (candidates.size() < 2) throw NoCandidate("merge method 3 needs at least two candidates");
  if (num_replacements < 0) throw InvalidInput("num_replacements must be >= 0");
  require_uniform_length(candidates);

  const std::size_t best = best_candidate(candidates);
  const std::size_t worst = worst_candidate(candidates, best);
  const Plan& best_plan = candidates[best].plan;
  const Plan& worst_plan = candidates[worst].plan;
  const auto order = canonical_order(candidates);

  Plan merged = best_plan;
  int used = 0;
  for (std::size_t k = 0; k < merged.size() && used < num_replacements; ++k) {
    if (best_plan[k] != worst_plan[k]) continue;
    if (auto alt = vote_at(order, k, best_plan[k])) {
      merged[k] = *alt;
      ++used;
    }
  }
  return merged;
}

}  // namespace planmerge
