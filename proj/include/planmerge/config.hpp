#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "planmerge/merging.hpp"
#include "planmerge/plan.hpp"
#include "planmerge/reputation.hpp"

namespace planmerge {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimConfig {
  PlanDims dims{1, 2, 5};
  DistanceWeights weights{1.0, 1.0, 1.0};
  ReputationParams rep_params{10, 100.0};
  int num_operators = 20;
  int num_nodes = 1;
  int availability = 1;
  int max_recommenders = 20;
  int num_iterations = 2;
  MergeMethod merge_method = MergeMethod::kOwnHistory;
  int num_replacements = 1;
  int history_depth = 5;
  bool include_own_plan = true;
  /// Local expertise every operator starts from, before its previous plans
  /// are scored.
  double initial_expertise = 1.0;
  /// Score each operator's random previous plans once at start-up, so the
  /// initial expertise and history reflect how good those plans are.
  bool evaluate_previous_plans = true;
  bool zero_noise = false;
  std::uint64_t master_seed = 1;
  int num_seeds = 1;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// exp1, exp2 or exp3. Throws ConfigError for other names.
SimConfig preset(std::string_view name);

/// Sets one field by its lower_snake_case name. Throws ConfigError for an
/// unknown key or a malformed value.
void apply_config_value(SimConfig& config, std::string_view key, std::string_view value);

/// Reads key=value lines ('#' starts a comment) and applies them in order.
void apply_config_file(SimConfig& config, const std::filesystem::path& path);
void apply_config_text(SimConfig& config, std::string_view text);

MergeMethod parse_merge_method(std::string_view text);

}  // namespace planmerge
