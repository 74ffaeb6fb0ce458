#include "planmerge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace planmerge {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void SimConfig::validate() const {
  try {
    dims.validate();
    weights.validate();
    rep_params.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  require(num_operators >= 1, "num_operators must be >= 1");
  require(num_nodes >= 1, "num_nodes must be >= 1");
  require(availability >= 1, "availability must be >= 1");
  require(max_recommenders >= 1, "max_recommenders must be >= 1");
  require(num_iterations >= 1, "num_iterations must be >= 1");
  require(num_replacements >= 0, "num_replacements must be >= 0");
  require(history_depth >= 1, "history_depth must be >= 1");
  require(num_seeds >= 1, "num_seeds must be >= 1");
  const int m = static_cast<int>(merge_method);
  require(m >= 0 && m <= 3, "merge_method must be 0, 1, 2 or 3");
  require(initial_expertise >= 0.0 && initial_expertise <= 1.0,
          "initial_expertise must lie in [0, 1]");
  require(static_cast<long long>(num_operators) * availability >= num_nodes,
          "num_operators * availability must cover num_nodes");
}

SimConfig preset(std::string_view name) {
  SimConfig c;  // defaults are the shared core: 1 type, 2 subtypes, 5 steps, weights 1/1/1
  if (name == "exp1") {
    c.num_operators = 20;
    c.num_nodes = 1;
    c.num_iterations = 2;
  } else if (name == "exp2") {
    c.num_operators = 2;
    c.num_nodes = 2;
    c.num_iterations = 10;
  } else if (name == "exp3") {
    c.num_operators = 10;
    c.num_nodes = 10;
    c.num_iterations = 10;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected exp1, exp2 or exp3)");
  }
  return c;
}

MergeMethod parse_merge_method(std::string_view text) {
  if (text == "0") return MergeMethod::kOwnHistory;
  if (text == "1") return MergeMethod::kBestPlan;
  if (text == "2") return MergeMethod::kStepVote;
  if (text == "3") return MergeMethod::kBestWithVote;
  throw ConfigError("merge method must be 0, 1, 2 or 3, got '" + std::string(text) + "'");
}

void apply_config_value(SimConfig& c, std::string_view key, std::string_view value) {
  if (key == "num_node_types") c.dims.num_node_types = parse_number<int>(key, value);
  else if (key == "num_subtypes") c.dims.num_subtypes = parse_number<int>(key, value);
  else if (key == "num_timesteps") c.dims.num_timesteps = parse_number<int>(key, value);
  else if (key == "w_type") c.weights.w_type = parse_number<double>(key, value);
  else if (key == "w_subtype") c.weights.w_subtype = parse_number<double>(key, value);
  else if (key == "w_timestep") c.weights.w_timestep = parse_number<double>(key, value);
  else if (key == "global_threshold") c.rep_params.global_threshold = parse_number<int>(key, value);
  else if (key == "max_time") c.rep_params.max_time = parse_number<double>(key, value);
  else if (key == "num_operators") c.num_operators = parse_number<int>(key, value);
  else if (key == "num_nodes") c.num_nodes = parse_number<int>(key, value);
  else if (key == "availability") c.availability = parse_number<int>(key, value);
  else if (key == "max_recommenders") c.max_recommenders = parse_number<int>(key, value);
  else if (key == "num_iterations") c.num_iterations = parse_number<int>(key, value);
  else if (key == "merge_method") c.merge_method = parse_merge_method(value);
  else if (key == "num_replacements") c.num_replacements = parse_number<int>(key, value);
  else if (key == "history_depth") c.history_depth = parse_number<int>(key, value);
  else if (key == "include_own_plan") c.include_own_plan = parse_bool(key, value);
  else if (key == "initial_expertise") c.initial_expertise = parse_number<double>(key, value);
  else if (key == "evaluate_previous_plans") c.evaluate_previous_plans = parse_bool(key, value);
  else if (key == "zero_noise") c.zero_noise = parse_bool(key, value);
  else if (key == "master_seed") c.master_seed = parse_number<std::uint64_t>(key, value);
  else if (key == "num_seeds") c.num_seeds = parse_number<int>(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(SimConfig& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_config_value(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(SimConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    apply_config_text(config, buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace planmerge
