#include "planmerge/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace planmerge {

std::vector<AggregateRow> aggregate(std::span<const MetricsRecord> records) {
  struct Cell {
    std::map<std::uint64_t, std::pair<double, int>> per_seed;  // sum, count
    double sum = 0.0;
    int count = 0;
  };
  std::map<std::pair<int, int>, Cell> cells;
  for (const auto& r : records) {
    Cell& cell = cells[{r.method, r.iteration}];
    auto& [seed_sum, seed_n] = cell.per_seed[r.seed];
    seed_sum += r.improvement;
    ++seed_n;
    cell.sum += r.improvement;
    ++cell.count;
  }

  std::vector<AggregateRow> table;
  table.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    AggregateRow row;
    row.method = key.first;
    row.iteration = key.second;
    row.seed_count = static_cast<int>(cell.per_seed.size());
    row.mean_improvement = cell.sum / cell.count;
    if (row.seed_count > 1) {
      double grand = 0.0;
      for (const auto& [seed, sn] : cell.per_seed) grand += sn.first / sn.second;
      grand /= row.seed_count;
      double ss = 0.0;
      for (const auto& [seed, sn] : cell.per_seed) {
        const double d = sn.first / sn.second - grand;
        ss += d * d;
      }
      row.stddev = std::sqrt(ss / (row.seed_count - 1));
    }
    table.push_back(row);
  }
  return table;
}

double mean_at(std::span<const AggregateRow> table, int method, int iteration) {
  for (const auto& row : table) {
    if (row.method == method && row.iteration == iteration) return row.mean_improvement;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

template <class T>
void put(std::string& line, T value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  line.append(buf, ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << kRawHeader << '\n';
  std::string line;
  for (const auto& r : records) {
    line.clear();
    put(line, r.seed);
    line += ',';
    put(line, r.method);
    line += ',';
    put(line, r.iteration);
    line += ',';
    put(line, r.operator_id);
    line += ',';
    put(line, r.node_id);
    for (double v : {r.raw_error, r.normalized_error, r.improvement, r.perceived_result,
                     r.next_time}) {
      line += ',';
      put(line, v);
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

void write_csv(std::span<const AggregateRow> table, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << kAggregateHeader << '\n';
  std::string line;
  for (const auto& row : table) {
    line.clear();
    put(line, row.seed_count);
    line += ',';
    put(line, row.method);
    line += ',';
    put(line, row.iteration);
    line += ',';
    put(line, row.mean_improvement);
    line += ',';
    put(line, row.stddev);
    line += '\n';
    out << line;
  }
  finish(out, path);
}

namespace {

template <class T>
T field(std::string_view text, const std::filesystem::path& path, int lineno) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad field '" +
                  std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<MetricsRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string line;
  if (!std::getline(in, line) || line != kRawHeader) {
    throw IoError(path.string() + ": missing or unexpected header");
  }
  std::vector<MetricsRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols.size() != 10) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 10 columns");
    }
    MetricsRecord r;
    r.seed = field<std::uint64_t>(cols[0], path, lineno);
    r.method = field<int>(cols[1], path, lineno);
    r.iteration = field<int>(cols[2], path, lineno);
    r.operator_id = field<int>(cols[3], path, lineno);
    r.node_id = field<int>(cols[4], path, lineno);
    r.raw_error = field<double>(cols[5], path, lineno);
    r.normalized_error = field<double>(cols[6], path, lineno);
    r.improvement = field<double>(cols[7], path, lineno);
    r.perceived_result = field<double>(cols[8], path, lineno);
    r.next_time = field<double>(cols[9], path, lineno);
    records.push_back(r);
  }
  return records;
}

}  // namespace planmerge
