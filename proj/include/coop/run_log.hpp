#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coop {

// Per-generation training record. One CSV row per ES generation; iter counts
// generations from 0 and evals is the number of episode evaluations consumed
// before this generation (iter * population * episodes_per_eval). The
// wallclock column is informational only and excluded from determinism
// comparisons.
struct RunLogRow {
  std::uint64_t iter = 0;
  double best = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t evals = 0;
  std::uint64_t wallclock_ms = 0;
};

struct RunLog {
  std::vector<RunLogRow> rows;
};

inline constexpr std::string_view kRunLogHeader =
    "iter,best,mean,std,evals,wallclock_ms";

namespace runlog_detail {

// Shortest round-trip formatting; identical bytes for identical doubles.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::runtime_error("run log: bad numeric field '" +
                             std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::runtime_error("run log: bad integer field '" +
                             std::string(text) + "'");
  }
  return v;
}

}  // namespace runlog_detail

inline void write_run_log(const std::filesystem::path& path,
                          const RunLog& log) {
  std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
  if (!out) {
    throw std::runtime_error("write_run_log: cannot open " + path.string());
  }
  out << kRunLogHeader << '\n';
  for (const RunLogRow& row : log.rows) {
    out << row.iter << ',' << runlog_detail::format_double(row.best) << ','
        << runlog_detail::format_double(row.mean) << ','
        << runlog_detail::format_double(row.stddev) << ',' << row.evals << ','
        << row.wallclock_ms << '\n';
  }
  if (!out) {
    throw std::runtime_error("write_run_log: write failed for " +
                             path.string());
  }
}

inline RunLog read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_run_log: cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kRunLogHeader) {
    throw std::runtime_error("read_run_log: bad or missing header in " +
                             path.string());
  }
  RunLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      parts.emplace_back(line.data() + pos, end - pos);
      pos = end + 1;
    }
    if (parts.size() != 6) {
      throw std::runtime_error("read_run_log: expected 6 columns, got " +
                               std::to_string(parts.size()));
    }
    RunLogRow row;
    row.iter = runlog_detail::parse_u64(parts[0]);
    row.best = runlog_detail::parse_double(parts[1]);
    row.mean = runlog_detail::parse_double(parts[2]);
    row.stddev = runlog_detail::parse_double(parts[3]);
    row.evals = runlog_detail::parse_u64(parts[4]);
    row.wallclock_ms = runlog_detail::parse_u64(parts[5]);
    log.rows.push_back(row);
  }
  return log;
}

}  // namespace coop
