#include "planmerge/reputation.hpp"

#include <algorithm>
#include <cmath>

#include "planmerge/plan.hpp"
#include "planmerge/rng.hpp"

namespace planmerge {

void ReputationParams::validate() const {
  if (global_threshold < 1) throw InvalidInput("global_threshold must be >= 1");
  if (!(max_time > 0) || !std::isfinite(max_time)) throw InvalidInput("max_time must be > 0");
}

double noise_stddev(const ExpertiseRecord& expertise, double error_norm) {
  if (expertise.global < 1) {
    throw DivisionGuard("noise_stddev needs global expertise >= 1, got " +
                        std::to_string(expertise.global));
  }
  return (1.0 - expertise.local + 1.0 / expertise.global) * error_norm;
}

double perceive_result(double error_norm, double stddev, Rng& rng) {
  const double z = rng.standard_normal();
  return std::clamp(error_norm + stddev * z, 0.0, 1.0);
}

double perceive_result_exact(double error_norm) { return std::clamp(error_norm, 0.0, 1.0); }

double next_plan_time(double perceived_result, const ReputationParams& params) {
  return perceived_result * params.max_time;
}

ExpertiseRecord update_expertise(const ExpertiseRecord& old, double stddev,
                                 const ReputationParams& params) {
  return ExpertiseRecord{std::clamp(1.0 - stddev, 0.0, 1.0),
                         std::min(old.global + 1, params.global_threshold)};
}

ExpertiseRecord in_progress(const ExpertiseRecord& current, const ReputationParams& params) {
  return ExpertiseRecord{current.local, std::min(current.global + 1, params.global_threshold)};
}

double reputation(const ExpertiseRecord& expertise, const ReputationParams& params) {
  return 1.0 - (1.0 - expertise.local) *
                   (static_cast<double>(expertise.global) / params.global_threshold);
}

bool is_valid(const ExpertiseRecord& expertise, const ReputationParams& params) {
  return expertise.local >= 0.0 && expertise.local <= 1.0 && expertise.global >= 0 &&
         expertise.global <= params.global_threshold;
}

ExecutionOutcome evaluate_outcome(double error_norm, const ExpertiseRecord& reported,
                                  const ReputationParams& params, Rng& rng, bool zero_noise) {
  ExecutionOutcome out;
  out.raw_error = error_norm;
  out.noise_stddev = noise_stddev(reported, error_norm);
  out.perceived_result = zero_noise ? perceive_result_exact(error_norm)
                                    : perceive_result(error_norm, out.noise_stddev, rng);
  out.next_time = next_plan_time(out.perceived_result, params);
  return out;
}

}  // namespace planmerge
