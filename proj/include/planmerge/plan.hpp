#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace planmerge {

class Rng;

/// Raised when a value violates the documented range of a plan-core type.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlanDims {
  int num_node_types = 1;
  int num_subtypes = 1;
  int num_timesteps = 1;

  void validate() const;
  friend bool operator==(const PlanDims&, const PlanDims&) = default;
};

/// One plan step. The three fields are the whole identity of an operation:
/// equality and ordering are field-wise (type, subtype, timestep).
struct Operation {
  int node_type = 0;
  int node_subtype = 0;
  int intended_timestep = 0;

  friend auto operator<=>(const Operation&, const Operation&) = default;
};

using Plan = std::vector<Operation>;

struct DistanceWeights {
  double w_type = 1.0;
  double w_subtype = 1.0;
  double w_timestep = 1.0;

  double total() const { return w_type + w_subtype + w_timestep; }
  void validate() const;
};

bool is_valid(const Operation& op, const PlanDims& dims);
bool is_valid(const Plan& plan, const PlanDims& dims);

/// Throws InvalidInput if the plan has the wrong length or any field out of range.
void validate_plan(const Plan& plan, const PlanDims& dims);

/// Weighted distance of one suggested operation to the optimal operation at
/// `position`. Each per-dimension distance is |a - b| / max(1, count - 1),
/// so it lies in [0, 1] and collapses to a 0/1 indicator for two-valued
/// dimensions.
double op_error(const Operation& suggested, const Operation& optimal, int position,
                const DistanceWeights& weights, const PlanDims& dims);

/// Sum of op_error over every position.
double plan_error(const Plan& suggested, const Plan& optimal, const DistanceWeights& weights,
                  const PlanDims& dims);

/// plan_error divided by its upper bound num_timesteps * (w_type + w_subtype + w_timestep).
double normalized_plan_error(const Plan& suggested, const Plan& optimal,
                             const DistanceWeights& weights, const PlanDims& dims);

/// 1 - normalized_plan_error.
double improvement(const Plan& suggested, const Plan& optimal, const DistanceWeights& weights,
                   const PlanDims& dims);

/// Uniform random plan. Draws exactly 3 * num_timesteps values from `rng`,
/// in the order (type, subtype, timestep) per position, even for
/// single-valued dimensions.
Plan random_plan(Rng& rng, const PlanDims& dims);

/// Ground-truth plan for nodes of `node_type`: every step targets that type,
/// subtypes are drawn uniformly, and step i carries intended_timestep i.
/// Consumes the same 3 * num_timesteps draws as random_plan.
Plan random_optimal_plan(Rng& rng, const PlanDims& dims, int node_type);

std::string to_string(const Operation& op);
std::string to_string(const Plan& plan);

}  // namespace planmerge
