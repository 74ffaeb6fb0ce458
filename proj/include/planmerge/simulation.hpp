#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "planmerge/agents.hpp"
#include "planmerge/bus.hpp"
#include "planmerge/config.hpp"
#include "planmerge/metrics.hpp"

namespace planmerge {

/// Hooks into a running simulation. All callbacks run on the simulation's thread.
class SimulationObserver {
 public:
  virtual ~SimulationObserver() = default;
  virtual void on_message(Tick, const ProtocolMessage&) {}
  /// An operator's starting plan for a node type, after start-up scoring.
  virtual void on_initial_plan(AgentId, int /*node_type*/, const Plan&, const ExpertiseRecord&) {}
  virtual void on_merge(AgentId /*op*/, AgentId /*node*/, std::span<const Candidate>,
                        const Plan& /*merged*/) {}
};

/// Thrown when an engine-level invariant breaks (capacity, conversation
/// discipline, value ranges).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One seeded run.
///
/// Each tick runs four phases in a fixed order:
///   1. nodes (by id) call for proposals or signal an expired plan;
///   2. the bus delivers until it is empty;
///   3. open calls for proposals close, and the bus drains again;
///   4. clocks advance by one.
/// A whole plan round (queries, merge, execution) completes inside phase 2.
///
/// Random streams: start-up state comes from (seed, "init") and start-up
/// scoring from (seed, "bootstrap"); node i draws from (seed, "node", i).
/// Operators never draw. The merge method therefore cannot perturb the
/// initial plans.
class Simulation {
 public:
  Simulation(const SimConfig& config, std::uint64_t seed, SimulationObserver* observer = nullptr);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs one tick. Returns false once every node finished its rounds.
  bool step();

  /// Steps until done and returns the records, one per (node, round), in
  /// (iteration, node) order.
  std::vector<MetricsRecord> run();

  Tick tick() const { return tick_; }
  const MessageBus& bus() const { return bus_; }
  std::span<const NodeAgent> nodes() const { return nodes_; }
  std::span<const OperatorAgent> operators() const { return operators_; }
  const Plan& optimal_plan(int node_type) const { return optimal_plans_.at(node_type); }
  const std::vector<MetricsRecord>& records() const { return records_; }

 private:
  void deliver();
  void check_invariants() const;

  SimConfig config_;
  std::uint64_t seed_;
  SimulationObserver* observer_;
  MessageBus bus_;
  std::vector<Plan> optimal_plans_;
  std::vector<OperatorAgent> operators_;
  std::vector<NodeAgent> nodes_;
  std::vector<MetricsRecord> records_;
  Tick tick_ = 0;
  Tick max_ticks_ = 0;
};

/// Validates `config`, then runs it once with `seed`. Output is
/// bit-identical for identical (config, seed).
std::vector<MetricsRecord> run_simulation(const SimConfig& config, std::uint64_t seed,
                                          SimulationObserver* observer = nullptr);

/// Seed of the i-th run of a batch.
inline std::uint64_t batch_seed(const SimConfig& config, int i) {
  return config.master_seed + static_cast<std::uint64_t>(i);
}

/// Runs config.num_seeds seeds with `method` across up to `jobs` threads
/// (0 = hardware concurrency). Records are ordered by seed regardless of
/// scheduling.
std::vector<MetricsRecord> run_batch(const SimConfig& config, MergeMethod method, int jobs = 0);

}  // namespace planmerge
