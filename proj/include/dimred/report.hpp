#pragma once

#include <dimred/csv.hpp>
#include <dimred/metrics.hpp>

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace dimred {

enum class ReportFormat { Csv, Json };

// A report plus the label of the plane it was measured on. Grayscale and CSV
// inputs have a single unlabeled section; color inputs carry one section per
// channel and an aggregate.
struct ReportSection {
  std::string channel;
  BenchReport report;
};

struct ReportOptions {
  // Wall-clock figures vary run to run; leaving them out keeps output byte-stable.
  bool include_runtime = false;
};

inline constexpr std::string_view report_csv_header =
    "method,k,abs_error,rel_error,energy,explained_variance,runtime_s,stored_values";

namespace detail {

inline bool labeled(std::span<const ReportSection> sections) {
  for (const auto& s : sections)
    if (!s.channel.empty()) return true;
  return false;
}

} // namespace detail

inline std::string to_csv(std::span<const ReportSection> sections, const ReportOptions& opts = {}) {
  const bool with_channel = detail::labeled(sections);
  std::string out;
  if (with_channel) out += "channel,";
  out += report_csv_header;
  out += '\n';
  for (const auto& section : sections) {
    for (const BenchRow& row : section.report.rows) {
      if (with_channel) out += section.channel + ',';
      out += std::string(to_string(section.report.method)) + ',' + std::to_string(row.k) + ',' +
             format_double(row.reconstruction_error) + ',' + format_double(row.relative_error) +
             ',' + format_double(row.energy_captured) + ',' +
             format_double(row.explained_variance) + ',' +
             (opts.include_runtime ? format_double(row.runtime_seconds) : std::string()) + ',' +
             std::to_string(row.stored_values) + '\n';
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json_rows(std::span<const ReportSection> sections,
                                           const ReportOptions& opts = {}) {
  const bool with_channel = detail::labeled(sections);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& section : sections) {
    for (const BenchRow& row : section.report.rows) {
      nlohmann::ordered_json obj;
      if (with_channel) obj["channel"] = section.channel;
      obj["method"] = std::string(to_string(section.report.method));
      obj["k"] = row.k;
      obj["abs_error"] = row.reconstruction_error;
      obj["rel_error"] = row.relative_error;
      obj["energy"] = row.energy_captured;
      obj["explained_variance"] = row.explained_variance;
      obj["runtime_s"] = opts.include_runtime ? nlohmann::ordered_json(row.runtime_seconds)
                                              : nlohmann::ordered_json(nullptr);
      obj["stored_values"] = row.stored_values;
      rows.push_back(std::move(obj));
    }
  }
  return rows;
}

inline std::string to_json(std::span<const ReportSection> sections, const ReportOptions& opts = {}) {
  return to_json_rows(sections, opts).dump(2) + '\n';
}

inline std::string render(std::span<const ReportSection> sections, ReportFormat format,
                          const ReportOptions& opts = {}) {
  return format == ReportFormat::Csv ? to_csv(sections, opts) : to_json(sections, opts);
}

} // namespace dimred
