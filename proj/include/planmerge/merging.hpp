#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "planmerge/ids.hpp"
#include "planmerge/plan.hpp"

namespace planmerge {

/// A plan offered for merging, weighted by the reputation of its source.
struct Candidate {
  AgentId source_id;
  Plan plan;
  double reputation = 0.0;
  bool is_own = false;
};

/// A previously executed plan and how well it went (1 - perceived error).
struct HistoryEntry {
  Plan plan;
  double observed_success = 0.0;
};

enum class MergeMethod : int {
  kOwnHistory = 0,    // best own previous plan, recommendations ignored
  kBestPlan = 1,      // whole plan of the most reputed candidate
  kStepVote = 2,      // per-step reputation-weighted vote
  kBestWithVote = 3,  // best plan, vote-replacing steps shared with the worst plan
};

class NoCandidate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Plan of the entry with the highest observed success; ties go to the most
/// recent (last) entry.
Plan merge_method0(std::span<const HistoryEntry> history);

/// Plan of the most reputed candidate; ties go to the lowest source id.
Plan merge_method1(std::span<const Candidate> candidates);

/// For each step, sums the reputations behind every distinct operation and
/// keeps the top one. Ties go to the lexicographically smallest operation.
/// Sums are accumulated in a canonical candidate order, so the result does
/// not depend on the order of `candidates`.
Plan merge_method2(std::span<const Candidate> candidates);

/// Starts from the best candidate's plan. At each step (left to right) where
/// the best and worst plans carry the same operation, substitutes the
/// vote-maximal operation among the *other* operations proposed at that step,
/// until `num_replacements` substitutions were made. Steps with no
/// alternative are skipped without using up a replacement.
///
/// The worst plan is the least reputed candidate other than the best one
/// (lowest source id among ties), so best and worst are always distinct
/// candidates.
Plan merge_method3(std::span<const Candidate> candidates, int num_replacements);

/// Index of the best candidate (max reputation, lowest source id on ties).
std::size_t best_candidate(std::span<const Candidate> candidates);

/// Index of the worst candidate excluding `exclude`.
std::size_t worst_candidate(std::span<const Candidate> candidates, std::size_t exclude);

}  // namespace planmerge
