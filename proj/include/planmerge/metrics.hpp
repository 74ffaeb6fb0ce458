#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace planmerge {

/// One scored execution: a (seed, method, iteration, node) data point.
struct MetricsRecord {
  std::uint64_t seed = 0;
  int method = 0;
  int iteration = 0;  // 1-based plan round of the node
  int operator_id = 0;
  int node_id = 0;
  double raw_error = 0.0;
  double normalized_error = 0.0;
  double improvement = 0.0;
  double perceived_result = 0.0;
  double next_time = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// Mean improvement of one (method, iteration) cell.
struct AggregateRow {
  int seed_count = 0;
  int method = 0;
  int iteration = 0;
  double mean_improvement = 0.0;
  /// Sample standard deviation of the per-seed means; 0 with a single seed.
  double stddev = 0.0;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Groups by (method, iteration), sorted by that key. Empty input gives an empty table.
std::vector<AggregateRow> aggregate(std::span<const MetricsRecord> records);

/// Mean improvement for one cell, or NaN if the table has no such row.
double mean_at(std::span<const AggregateRow> table, int method, int iteration);

inline constexpr const char* kRawHeader =
    "seed,method,iteration,operator_id,node_id,raw_error,normalized_error,improvement,"
    "perceived_result,next_time";
inline constexpr const char* kAggregateHeader = "seed_count,method,iteration,mean_improvement,stddev";

/// Doubles are written in shortest round-trip form, independent of locale;
/// lines end with LF.
void write_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);
void write_csv(std::span<const AggregateRow> table, const std::filesystem::path& path);

std::vector<MetricsRecord> read_records_csv(const std::filesystem::path& path);

}  // namespace planmerge
