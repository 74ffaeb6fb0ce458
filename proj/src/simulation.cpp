#include "planmerge/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "planmerge/log.hpp"

namespace planmerge {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

Simulation::Simulation(const SimConfig& config, std::uint64_t seed, SimulationObserver* observer)
    : config_(config), seed_(seed), observer_(observer) {
  config_.validate();
  const PlanDims& dims = config_.dims;
  const LogLevel level = log_level();

  bus_.set_listener([this, level](Tick tick, const ProtocolMessage& msg) {
    if (level >= LogLevel::kProtocol) {
      std::ostringstream line;
      line << "tick=" << tick << ' ' << variant_name(msg.payload) << ' ' << to_string(msg.sender)
           << "->" << to_string(msg.receiver) << " conv=" << msg.conversation_id;
      log_line(line.str());
    }
    if (observer_) observer_->on_message(tick, msg);
  });

  Rng init = Rng::stream(seed_, "init");
  for (int t = 0; t < dims.num_node_types; ++t) {
    optimal_plans_.push_back(random_optimal_plan(init, dims, t));
  }

  std::vector<AgentId> roster;
  for (int o = 0; o < config_.num_operators; ++o) roster.push_back(AgentId::op(o));

  OperatorSettings settings;
  settings.method = config_.merge_method;
  settings.max_recommenders = config_.max_recommenders;
  settings.num_replacements = config_.num_replacements;
  settings.history_depth = config_.history_depth;
  settings.include_own_plan = config_.include_own_plan;
  settings.rep_params = config_.rep_params;

  // Previous plans are drawn for every (operator, type) before anything is
  // scored, so the draw sequence is independent of the other settings.
  std::vector<std::vector<Plan>> previous(static_cast<std::size_t>(config_.num_operators));
  for (auto& per_type : previous) {
    for (int t = 0; t < dims.num_node_types; ++t) per_type.push_back(random_plan(init, dims));
  }

  Rng bootstrap = Rng::stream(seed_, "bootstrap");
  operators_.reserve(roster.size());
  for (int o = 0; o < config_.num_operators; ++o) {
    OperatorAgent& op = operators_.emplace_back(o, config_.availability,
                                                o % dims.num_node_types, settings, roster);
    for (int t = 0; t < dims.num_node_types; ++t) {
      Plan plan = previous[static_cast<std::size_t>(o)][static_cast<std::size_t>(t)];
      const ExpertiseRecord prior{config_.initial_expertise, 1};
      ExpertiseRecord expertise = prior;
      double success = 1.0;
      if (config_.evaluate_previous_plans) {
        // The previous plan is the execution counted by the prior's global
        // expertise of 1, so it is scored with the prior record as is.
        const double err = normalized_plan_error(plan, optimal_plans_[static_cast<std::size_t>(t)],
                                                 config_.weights, dims);
        const ExecutionOutcome outcome =
            evaluate_outcome(err, prior, config_.rep_params, bootstrap, config_.zero_noise);
        expertise.local = std::clamp(1.0 - outcome.noise_stddev, 0.0, 1.0);
        success = 1.0 - outcome.perceived_result;
      }
      if (observer_) observer_->on_initial_plan(op.id(), t, plan, expertise);
      if (level >= LogLevel::kDebug) {
        log_line("init " + to_string(op.id()) + " type=" + std::to_string(t) + " plan=" +
                 to_string(plan) + " local=" + std::to_string(expertise.local));
      }
      op.seed_history(t, HistoryEntry{std::move(plan), success}, expertise);
    }
    op.set_merge_listener([this, level](AgentId who, AgentId node,
                                        std::span<const Candidate> candidates,
                                        const Plan& merged) {
      for (const auto& c : candidates) {
        check(in_unit(c.reputation), "reputation out of [0,1] for " + to_string(c.source_id));
      }
      if (level >= LogLevel::kDebug) {
        std::ostringstream line;
        line << "merge " << to_string(who) << " for " << to_string(node) << " candidates=";
        for (const auto& c : candidates) {
          line << ' ' << to_string(c.source_id) << ':' << c.reputation << ':' << to_string(c.plan);
        }
        line << " merged=" << to_string(merged);
        log_line(line.str());
      }
      if (observer_) observer_->on_merge(who, node, candidates, merged);
    });
  }

  const EvaluationContext context{dims, config_.weights, config_.rep_params, config_.zero_noise};
  nodes_.reserve(static_cast<std::size_t>(config_.num_nodes));
  for (int n = 0; n < config_.num_nodes; ++n) {
    NodeAgentState state;
    state.node_id = n;
    state.node_type = static_cast<int>(init.uniform_index(static_cast<std::uint64_t>(dims.num_node_types)));
    state.node_subtype = static_cast<int>(init.uniform_index(static_cast<std::uint64_t>(dims.num_subtypes)));
    state.time_until_next_plan = 0.0;
    const Plan optimal = optimal_plans_[static_cast<std::size_t>(state.node_type)];
    NodeAgent& node = nodes_.emplace_back(state, optimal, context, Rng::stream(seed_, "node", static_cast<std::uint64_t>(n)), roster);
    node.set_round_limit(config_.num_iterations);
    node.set_report_sink([this](const ExecutionReport& report) {
      check(in_unit(report.normalized_error) && in_unit(report.improvement) &&
                in_unit(report.perceived_result),
            "execution metrics out of [0,1] on node" + std::to_string(report.node_id));
      MetricsRecord r;
      r.seed = seed_;
      r.method = static_cast<int>(config_.merge_method);
      r.iteration = report.round;
      r.operator_id = report.operator_id;
      r.node_id = report.node_id;
      r.raw_error = report.raw_error;
      r.normalized_error = report.normalized_error;
      r.improvement = report.improvement;
      r.perceived_result = report.perceived_result;
      r.next_time = report.next_time;
      records_.push_back(r);
    });
  }

  const auto rounds = static_cast<Tick>(config_.num_iterations);
  max_ticks_ = static_cast<Tick>(config_.num_nodes) +
               rounds * (static_cast<Tick>(std::ceil(config_.rep_params.max_time)) + 2) + 16;
}

Simulation::~Simulation() = default;

void Simulation::deliver() {
  while (auto msg = bus_.next()) {
    if (msg->receiver.role == Role::kNode) {
      nodes_.at(static_cast<std::size_t>(msg->receiver.index)).handle(*msg, bus_);
    } else {
      operators_.at(static_cast<std::size_t>(msg->receiver.index)).handle(*msg, bus_);
    }
  }
}

void Simulation::check_invariants() const {
  for (const auto& op : operators_) {
    const auto& s = op.state();
    check(static_cast<int>(s.operated_nodes.size()) <= s.availability,
          to_string(op.id()) + " operates more nodes than its availability");
    for (const auto& [type, e] : s.expertise_by_type) {
      check(is_valid(e, config_.rep_params), to_string(op.id()) + " expertise out of range");
      check(in_unit(reputation(e, config_.rep_params)), to_string(op.id()) + " reputation out of range");
    }
  }
}

bool Simulation::step() {
  if (std::all_of(nodes_.begin(), nodes_.end(), [](const NodeAgent& n) { return n.finished(); })) {
    check(bus_.open_exchanges() == 0,
          std::to_string(bus_.open_exchanges()) + " conversations left without a reply");
    return false;
  }
  if (tick_ >= max_ticks_) {
    throw InvariantViolation("simulation did not finish within " + std::to_string(max_ticks_) +
                             " ticks");
  }
  bus_.set_tick(tick_);

  for (auto& node : nodes_) {
    if (!node.state().current_operator) {
      node.seek_operator(bus_);
    } else {
      node.signal_plan_needed(bus_);
    }
  }
  deliver();
  for (auto& node : nodes_) node.close_call_for_proposals(bus_);
  deliver();

  check_invariants();
  for (auto& node : nodes_) node.advance_clock();
  ++tick_;
  return true;
}

std::vector<MetricsRecord> Simulation::run() {
  while (step()) {
  }
  std::vector<MetricsRecord> out = records_;
  std::stable_sort(out.begin(), out.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
    if (a.iteration != b.iteration) return a.iteration < b.iteration;
    return a.node_id < b.node_id;
  });
  return out;
}

std::vector<MetricsRecord> run_simulation(const SimConfig& config, std::uint64_t seed,
                                          SimulationObserver* observer) {
  Simulation sim(config, seed, observer);
  return sim.run();
}

std::vector<MetricsRecord> run_batch(const SimConfig& config, MergeMethod method, int jobs) {
  SimConfig run_config = config;
  run_config.merge_method = method;
  run_config.validate();

  const int seeds = run_config.num_seeds;
  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, seeds);

  std::vector<std::vector<MetricsRecord>> per_seed(static_cast<std::size_t>(seeds));
  const auto work = [&](int first) {
    for (int i = first; i < seeds; i += workers) {
      per_seed[static_cast<std::size_t>(i)] = run_simulation(run_config, batch_seed(run_config, i));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::future<void>> futures;
    for (int w = 0; w < workers; ++w) futures.push_back(std::async(std::launch::async, work, w));
    for (auto& f : futures) f.get();
  }

  std::vector<MetricsRecord> all;
  for (auto& chunk : per_seed) all.insert(all.end(), chunk.begin(), chunk.end());
  return all;
}

}  // namespace planmerge
