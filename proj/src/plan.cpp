#include "planmerge/plan.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "planmerge/rng.hpp"

namespace planmerge {

void PlanDims::validate() const {
  if (num_node_types < 1 || num_subtypes < 1 || num_timesteps < 1) {
    throw InvalidInput("plan dims must all be >= 1 (got " + std::to_string(num_node_types) + "/" +
                       std::to_string(num_subtypes) + "/" + std::to_string(num_timesteps) + ")");
  }
}

void DistanceWeights::validate() const {
  const bool finite = std::isfinite(w_type) && std::isfinite(w_subtype) && std::isfinite(w_timestep);
  if (!finite || w_type < 0 || w_subtype < 0 || w_timestep < 0 || !(total() > 0)) {
    throw InvalidInput("distance weights must be finite, nonnegative, with a positive sum");
  }
}

bool is_valid(const Operation& op, const PlanDims& dims) {
  return op.node_type >= 0 && op.node_type < dims.num_node_types && op.node_subtype >= 0 &&
         op.node_subtype < dims.num_subtypes && op.intended_timestep >= 0 &&
         op.intended_timestep < dims.num_timesteps;
}

bool is_valid(const Plan& plan, const PlanDims& dims) {
  if (plan.size() != static_cast<std::size_t>(dims.num_timesteps)) return false;
  for (const auto& op : plan) {
    if (!is_valid(op, dims)) return false;
  }
  return true;
}

void validate_plan(const Plan& plan, const PlanDims& dims) {
  if (plan.size() != static_cast<std::size_t>(dims.num_timesteps)) {
    throw InvalidInput("plan length " + std::to_string(plan.size()) + " != num_timesteps " +
                       std::to_string(dims.num_timesteps));
  }
  for (const auto& op : plan) {
    if (!is_valid(op, dims)) throw InvalidInput("operation out of range: " + to_string(op));
  }
}

namespace {

double normalized_distance(int a, int b, int count) {
  const int divisor = count > 1 ? count - 1 : 1;
  return static_cast<double>(std::abs(a - b)) / divisor;
}

}  // namespace

double op_error(const Operation& suggested, const Operation& optimal, int position,
                const DistanceWeights& weights, const PlanDims& dims) {
  if (!is_valid(suggested, dims) || !is_valid(optimal, dims)) {
    throw InvalidInput("operation out of range: " + to_string(suggested) + " vs " +
                       to_string(optimal));
  }
  if (position < 0 || position >= dims.num_timesteps) {
    throw InvalidInput("position " + std::to_string(position) + " out of range");
  }
  return weights.w_type * normalized_distance(suggested.node_type, optimal.node_type,
                                              dims.num_node_types) +
         weights.w_subtype *
             normalized_distance(suggested.node_subtype, optimal.node_subtype, dims.num_subtypes) +
         weights.w_timestep * normalized_distance(suggested.intended_timestep,
                                                  optimal.intended_timestep, dims.num_timesteps);
}

double plan_error(const Plan& suggested, const Plan& optimal, const DistanceWeights& weights,
                  const PlanDims& dims) {
  const auto steps = static_cast<std::size_t>(dims.num_timesteps);
  if (suggested.size() != steps || optimal.size() != steps) {
    throw InvalidInput("plan length mismatch: " + std::to_string(suggested.size()) + " / " +
                       std::to_string(optimal.size()) + " vs num_timesteps " +
                       std::to_string(dims.num_timesteps));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    total += op_error(suggested[i], optimal[i], static_cast<int>(i), weights, dims);
  }
  return total;
}

double normalized_plan_error(const Plan& suggested, const Plan& optimal,
                             const DistanceWeights& weights, const PlanDims& dims) {
  const double raw = plan_error(suggested, optimal, weights, dims);
  return raw / (dims.num_timesteps * weights.total());
}

double improvement(const Plan& suggested, const Plan& optimal, const DistanceWeights& weights,
                   const PlanDims& dims) {
  return 1.0 - normalized_plan_error(suggested, optimal, weights, dims);
}

Plan random_plan(Rng& rng, const PlanDims& dims) {
  dims.validate();
  Plan plan;
  plan.reserve(static_cast<std::size_t>(dims.num_timesteps));
  for (int i = 0; i < dims.num_timesteps; ++i) {
    Operation op;
    op.node_type = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(dims.num_node_types)));
    op.node_subtype = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(dims.num_subtypes)));
    op.intended_timestep =
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(dims.num_timesteps)));
    plan.push_back(op);
  }
  return plan;
}

Plan random_optimal_plan(Rng& rng, const PlanDims& dims, int node_type) {
  if (node_type < 0 || node_type >= dims.num_node_types) {
    throw InvalidInput("node type " + std::to_string(node_type) + " out of range");
  }
  Plan plan = random_plan(rng, dims);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    plan[i].node_type = node_type;
    plan[i].intended_timestep = static_cast<int>(i);
  }
  return plan;
}

std::string to_string(const Operation& op) {
  return "(" + std::to_string(op.node_type) + "," + std::to_string(op.node_subtype) + "," +
         std::to_string(op.intended_timestep) + ")";
}

std::string to_string(const Plan& plan) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i) out << ' ';
    out << to_string(plan[i]);
  }
  out << ']';
  return out.str();
}

}  // namespace planmerge
