#pragma once

#include <stdexcept>

namespace planmerge {

class Rng;

/// Per-(operator, node type) expertise.
///  local:  ability shown in the last execution, in [0, 1].
///  global: number of executions so far, capped at the threshold.
struct ExpertiseRecord {
  double local = 1.0;
  int global = 1;

  friend bool operator==(const ExpertiseRecord&, const ExpertiseRecord&) = default;
};

struct ReputationParams {
  int global_threshold = 10;
  double max_time = 100.0;

  void validate() const;
};

/// Result of one plan execution as seen by the node.
struct ExecutionOutcome {
  double raw_error = 0.0;  // normalized plan error
  double noise_stddev = 0.0;
  double perceived_result = 0.0;
  double next_time = 0.0;
};

class DivisionGuard : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// s = (1 - E_l + 1/E_g) * error. Requires expertise.global >= 1.
double noise_stddev(const ExpertiseRecord& expertise, double error_norm);

/// One normal sample with mean `error_norm` and deviation `stddev`, clamped
/// to [0, 1]. Always consumes two draws from `rng` (see Rng::standard_normal).
double perceive_result(double error_norm, double stddev, Rng& rng);

/// Zero-noise variant: returns clamp(error_norm, 0, 1) and draws nothing.
double perceive_result_exact(double error_norm);

/// time = resul * max_time.
double next_plan_time(double perceived_result, const ReputationParams& params);

/// local <- clamp(1 - stddev, 0, 1); global <- min(global + 1, threshold).
ExpertiseRecord update_expertise(const ExpertiseRecord& old, double stddev,
                                 const ReputationParams& params);

/// The record an operator reports for an execution in progress: the global
/// count already includes that execution. This is the record the noise
/// computation sees.
ExpertiseRecord in_progress(const ExpertiseRecord& current, const ReputationParams& params);

/// rep = 1 - (1 - E_l) * (E_g / threshold).
double reputation(const ExpertiseRecord& expertise, const ReputationParams& params);

bool is_valid(const ExpertiseRecord& expertise, const ReputationParams& params);

/// Evaluate an execution with the full pipeline: noise deviation from the
/// reported expertise, perceived result, next plan time.
ExecutionOutcome evaluate_outcome(double error_norm, const ExpertiseRecord& reported,
                                  const ReputationParams& params, Rng& rng, bool zero_noise);

}  // namespace planmerge
