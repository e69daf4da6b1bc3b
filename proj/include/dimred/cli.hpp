#pragma once

#include <dimred/csv.hpp>
#include <dimred/error.hpp>
#include <dimred/image.hpp>
#include <dimred/metrics.hpp>
#include <dimred/pca.hpp>
#include <dimred/report.hpp>
#include <dimred/svd.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dimred::cli {

enum class Subcommand { Compress, Pca, Svd, Bench, Stability, Compare };
enum class InputKind { Pgm, Ppm, Csv };

struct CliConfig {
  Subcommand subcommand = Subcommand::Compress;
  std::string input_path;
  std::string output_path;
  std::string rank_text;
  std::string ranks_text;
  std::vector<std::size_t> ranks;
  Method method = Method::Svd;
  ReportFormat report = ReportFormat::Csv;
  std::string type_override;
  bool binary = false;
  bool timing = false;
  bool with_stability = false;
  std::uint64_t seed = default_seed;
  std::size_t stability_size = 8;
  double stability_cond = 1e8;
};

// Usage problems (exit 2) as opposed to domain failures (exit 1).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Plane {
  std::string channel;
  Matrix data;
};

struct LoadedInput {
  InputKind kind = InputKind::Csv;
  std::vector<Plane> planes;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "failed writing '" + path + "'");
}

inline InputKind input_kind(const CliConfig& cfg) {
  std::string type = cfg.type_override;
  if (type.empty()) {
    type = std::filesystem::path(cfg.input_path).extension().string();
    if (!type.empty()) type.erase(0, 1);
    std::transform(type.begin(), type.end(), type.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  }
  if (type == "pgm") return InputKind::Pgm;
  if (type == "ppm") return InputKind::Ppm;
  if (type == "csv") return InputKind::Csv;
  throw UsageError("cannot infer input type of '" + cfg.input_path +
                   "'; use a .pgm/.ppm/.csv extension or --type");
}

inline LoadedInput load_input(const CliConfig& cfg) {
  LoadedInput in;
  in.kind = input_kind(cfg);
  const std::string bytes = read_file(cfg.input_path);
  switch (in.kind) {
    case InputKind::Pgm:
      in.planes.push_back({"", read_pgm(bytes).pixels()});
      break;
    case InputKind::Ppm: {
      const RgbImage img = read_ppm(bytes);
      in.planes.push_back({"red", img.red()});
      in.planes.push_back({"green", img.green()});
      in.planes.push_back({"blue", img.blue()});
      break;
    }
    case InputKind::Csv:
      in.planes.push_back({"", read_csv_matrix(bytes)});
      break;
  }
  return in;
}

inline std::vector<std::size_t> parse_ranks(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty entry in rank list '" + text + "'");
    item = item.substr(first, last - first + 1);
    const bool negative = item.front() == '-';
    const std::string digits = negative ? item.substr(1) : item;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos ||
        digits.size() > 12) {
      throw UsageError("rank '" + item + "' is not an integer");
    }
    // Negative ranks are out of range rather than malformed; report them as rank 0.
    out.push_back(negative ? 0 : static_cast<std::size_t>(std::stoull(digits)));
  }
  if (out.empty()) throw Error(Errc::EmptyRankList, "no ranks given");
  return out;
}

inline void validate_ranks(const std::vector<std::size_t>& ranks, const Matrix& m) {
  if (ranks.empty()) throw Error(Errc::EmptyRankList, "no ranks given");
  const std::size_t limit = std::min(m.rows(), m.cols());
  for (std::size_t k : ranks) {
    if (k < 1 || k > limit) {
      throw Error(Errc::InvalidRank, "rank " + std::to_string(k) + " outside valid interval [1, " +
                                         std::to_string(limit) + "]");
    }
  }
}

inline void emit(const CliConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output_path.empty()) {
    out << text;
  } else {
    write_file(cfg.output_path, text);
  }
}

inline ReportOptions report_options(const CliConfig& cfg) { return {cfg.timing}; }

inline std::string channel_prefix(const Plane& p) {
  return p.channel.empty() ? std::string() : "channel=" + p.channel + ' ';
}

inline nlohmann::ordered_json to_json(const Vector& v) {
  auto arr = nlohmann::ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

inline nlohmann::ordered_json to_json(const Matrix& m) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (double x : m.row(i)) row.push_back(x);
    arr.push_back(std::move(row));
  }
  return arr;
}

// ---------------------------------------------------------------------------

inline int run_compress(const CliConfig& cfg, std::ostream& out) {
  if (cfg.ranks.size() != 1) throw UsageError("compress takes exactly one rank");
  const LoadedInput in = load_input(cfg);
  for (const auto& p : in.planes) validate_ranks(cfg.ranks, p.data);
  const std::size_t k = cfg.ranks.front();

  std::vector<Compression> results;
  for (const auto& p : in.planes) results.push_back(compress(p.data, cfg.method, k));

  std::string text;
  if (in.planes.size() == 1) {
    text = "k=" + std::to_string(k) + " rel_error=" + format_double(results[0].error.relative) +
           " energy=" + format_double(results[0].energy) + '\n';
  } else {
    double abs_sq = 0.0;
    double ref_sq = 0.0;
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t c = 0; c < in.planes.size(); ++c) {
      const Compression& r = results[c];
      text += channel_prefix(in.planes[c]) + "k=" + std::to_string(k) +
              " rel_error=" + format_double(r.error.relative) +
              " energy=" + format_double(r.energy) + '\n';
      const double ref = frobenius_norm(in.planes[c].data);
      abs_sq += r.error.absolute * r.error.absolute;
      ref_sq += ref * ref;
      weighted += r.energy * r.total_energy;
      total += r.total_energy;
    }
    text += "channel=all k=" + std::to_string(k) +
            " rel_error=" + format_double(std::sqrt(abs_sq / ref_sq)) +
            " energy=" + format_double(weighted / total) + '\n';
  }

  if (!cfg.output_path.empty()) {
    std::string bytes;
    switch (in.kind) {
      case InputKind::Pgm: bytes = write_pgm(results[0].reconstruction, cfg.binary); break;
      case InputKind::Ppm:
        bytes = write_ppm(results[0].reconstruction, results[1].reconstruction,
                          results[2].reconstruction, cfg.binary);
        break;
      case InputKind::Csv: bytes = write_csv_matrix(results[0].reconstruction); break;
    }
    write_file(cfg.output_path, bytes);
  }
  out << text;
  return 0;
}

inline int run_pca(const CliConfig& cfg, std::ostream& out) {
  if (cfg.ranks.size() > 1) throw UsageError("pca takes a single component count");
  const LoadedInput in = load_input(cfg);
  if (in.planes.size() > 1 && !cfg.output_path.empty()) {
    throw UsageError("--output for pca is only supported on single-plane inputs");
  }

  std::vector<PcaModel> models;
  std::vector<Vector> ratios;
  for (const auto& p : in.planes) {
    const std::size_t s = cfg.ranks.empty() ? p.data.cols() : cfg.ranks.front();
    if (s < 1 || s > p.data.cols()) {
      throw Error(Errc::InvalidComponentCount, "component count " + std::to_string(s) +
                                                   " outside valid interval [1, " +
                                                   std::to_string(p.data.cols()) + "]");
    }
    models.push_back(pca_fit(p.data, s));
    ratios.push_back(explained_variance_ratio(models.back()));
  }

  std::string text;
  if (cfg.report == ReportFormat::Csv) {
    const bool labeled = in.planes.size() > 1;
    text = std::string(labeled ? "channel," : "") + "component,eigenvalue,explained_variance_ratio\n";
    for (std::size_t c = 0; c < models.size(); ++c) {
      for (std::size_t i = 0; i < models[c].spectrum().size(); ++i) {
        if (labeled) text += in.planes[c].channel + ',';
        text += std::to_string(i + 1) + ',' + format_double(models[c].spectrum()[i]) + ',' +
                format_double(ratios[c][i]) + '\n';
      }
    }
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < models.size(); ++c) {
      nlohmann::ordered_json obj;
      if (in.planes.size() > 1) obj["channel"] = in.planes[c].channel;
      obj["n_samples"] = models[c].n_samples();
      obj["n_features"] = models[c].n_features();
      obj["n_components"] = models[c].n_components();
      obj["means"] = to_json(models[c].means());
      obj["spectrum"] = to_json(models[c].spectrum());
      obj["explained_variance_ratio"] = to_json(ratios[c]);
      obj["components"] = to_json(models[c].components());
      arr.push_back(std::move(obj));
    }
    text = (arr.size() == 1 ? arr[0] : arr).dump(2) + '\n';
  }
  out << text;

  if (!cfg.output_path.empty()) {
    write_file(cfg.output_path, write_csv_matrix(project(models[0], in.planes[0].data)));
  }
  return 0;
}

inline int run_svd(const CliConfig& cfg, std::ostream& out) {
  const LoadedInput in = load_input(cfg);
  if (in.planes.size() > 1 && !cfg.output_path.empty()) {
    throw UsageError("--output for svd is only supported on single-plane inputs");
  }
  std::vector<SvdFactors> factors;
  for (const auto& p : in.planes) factors.push_back(svd(p.data));

  std::string text;
  if (cfg.report == ReportFormat::Csv) {
    const bool labeled = in.planes.size() > 1;
    text = std::string(labeled ? "channel," : "") + "index,sigma,energy\n";
    for (std::size_t c = 0; c < factors.size(); ++c) {
      for (std::size_t i = 0; i < factors[c].rank; ++i) {
        if (labeled) text += in.planes[c].channel + ',';
        text += std::to_string(i + 1) + ',' + format_double(factors[c].sigma[i]) + ',' +
                format_double(energy_captured(factors[c].sigma, i + 1)) + '\n';
      }
    }
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < factors.size(); ++c) {
      nlohmann::ordered_json obj;
      if (in.planes.size() > 1) obj["channel"] = in.planes[c].channel;
      obj["rows"] = in.planes[c].data.rows();
      obj["cols"] = in.planes[c].data.cols();
      obj["rank"] = factors[c].rank;
      obj["sigma"] = to_json(factors[c].sigma);
      arr.push_back(std::move(obj));
    }
    text = (arr.size() == 1 ? arr[0] : arr).dump(2) + '\n';
  }
  out << text;

  if (!cfg.output_path.empty()) {
    nlohmann::ordered_json f;
    f["rank"] = factors[0].rank;
    f["sigma"] = to_json(factors[0].sigma);
    f["u"] = to_json(factors[0].u);
    f["v"] = to_json(factors[0].v);
    write_file(cfg.output_path, f.dump(2) + '\n');
  }
  return 0;
}

inline std::vector<ReportSection> bench_sections(const LoadedInput& in, Method method,
                                                 const std::vector<std::size_t>& ranks) {
  std::vector<ReportSection> sections;
  std::vector<BenchReport> parts;
  for (const auto& p : in.planes) {
    parts.push_back(run_benchmark(p.data, method, ranks));
    sections.push_back({p.channel, parts.back()});
  }
  if (parts.size() > 1) sections.push_back({"all", aggregate_reports(parts)});
  return sections;
}

inline int run_bench(const CliConfig& cfg, std::ostream& out) {
  const LoadedInput in = load_input(cfg);
  for (const auto& p : in.planes) validate_ranks(cfg.ranks, p.data);
  const auto sections = bench_sections(in, cfg.method, cfg.ranks);
  emit(cfg, out, render(sections, cfg.report, report_options(cfg)));
  return 0;
}

inline nlohmann::ordered_json stability_json(const StabilityReport& r) {
  nlohmann::ordered_json obj;
  obj["n"] = r.sigma_true.size();
  obj["condition"] = r.condition_target;
  obj["seed"] = r.seed;
  obj["sigma_true"] = to_json(r.sigma_true);
  obj["sigma_svd"] = to_json(r.sigma_via_svd);
  obj["sigma_cov"] = to_json(r.sigma_via_covariance_eig);
  obj["rel_err_svd"] = r.rel_err_svd;
  obj["rel_err_cov"] = r.rel_err_cov;
  return obj;
}

inline std::string stability_csv(const StabilityReport& r) {
  std::string text = "index,sigma_true,sigma_svd,sigma_cov\n";
  for (std::size_t i = 0; i < r.sigma_true.size(); ++i) {
    text += std::to_string(i + 1) + ',' + format_double(r.sigma_true[i]) + ',' +
            format_double(r.sigma_via_svd[i]) + ',' + format_double(r.sigma_via_covariance_eig[i]) +
            '\n';
  }
  text += "\nn,condition,seed,rel_err_svd,rel_err_cov\n";
  text += std::to_string(r.sigma_true.size()) + ',' + format_double(r.condition_target) + ',' +
          std::to_string(r.seed) + ',' + format_double(r.rel_err_svd) + ',' +
          format_double(r.rel_err_cov) + '\n';
  return text;
}

inline int run_stability(const CliConfig& cfg, std::ostream& out) {
  const StabilityReport r = stability_experiment(cfg.stability_size, cfg.stability_cond, cfg.seed);
  emit(cfg, out,
       cfg.report == ReportFormat::Csv ? stability_csv(r) : stability_json(r).dump(2) + '\n');
  return 0;
}

inline int run_compare(const CliConfig& cfg, std::ostream& out) {
  const LoadedInput in = load_input(cfg);
  for (const auto& p : in.planes) validate_ranks(cfg.ranks, p.data);

  std::vector<ReportSection> sections;
  for (Method m : {Method::Pca, Method::Svd}) {
    try {
      for (auto& s : bench_sections(in, m, cfg.ranks)) sections.push_back(std::move(s));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(to_string(m)) + " section: " + e.what());
    }
  }

  struct ShiftRow {
    std::string channel;
    std::size_t k;
    CenteringShift shift;
  };
  std::vector<ShiftRow> shifts;
  std::vector<std::size_t> ranks = cfg.ranks;
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  for (const auto& p : in.planes)
    for (std::size_t k : ranks) shifts.push_back({p.channel, k, centering_sensitivity(p.data, k)});

  std::optional<StabilityReport> stability;
  if (cfg.with_stability) {
    stability = stability_experiment(cfg.stability_size, cfg.stability_cond, cfg.seed);
  }

  const bool labeled = in.planes.size() > 1;
  std::string text;
  if (cfg.report == ReportFormat::Csv) {
    text = to_csv(sections, report_options(cfg));
    text += std::string("\n") + (labeled ? "channel," : "") + "k,svd_centering_shift,pca_centering_shift\n";
    for (const auto& s : shifts) {
      if (labeled) text += s.channel + ',';
      text += std::to_string(s.k) + ',' + format_double(s.shift.svd_shift) + ',' +
              format_double(s.shift.pca_shift) + '\n';
    }
    if (stability) text += '\n' + stability_csv(*stability);
  } else {
    nlohmann::ordered_json doc;
    doc["metrics"] = to_json_rows(sections, report_options(cfg));
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : shifts) {
      nlohmann::ordered_json obj;
      if (labeled) obj["channel"] = s.channel;
      obj["k"] = s.k;
      obj["svd_centering_shift"] = s.shift.svd_shift;
      obj["pca_centering_shift"] = s.shift.pca_shift;
      arr.push_back(std::move(obj));
    }
    doc["centering"] = std::move(arr);
    if (stability) doc["stability"] = stability_json(*stability);
    text = doc.dump(2) + '\n';
  }
  emit(cfg, out, text);
  return 0;
}

inline int dispatch(CliConfig cfg, std::ostream& out) {
  const bool needs_input = cfg.subcommand != Subcommand::Stability;
  if (needs_input && cfg.input_path.empty()) throw UsageError("--input is required");

  if (!cfg.rank_text.empty()) cfg.ranks = parse_ranks(cfg.rank_text);
  if (!cfg.ranks_text.empty()) cfg.ranks = parse_ranks(cfg.ranks_text);
  const bool needs_ranks = cfg.subcommand == Subcommand::Compress ||
                           cfg.subcommand == Subcommand::Bench ||
                           cfg.subcommand == Subcommand::Compare;
  if (needs_ranks && cfg.ranks.empty()) throw UsageError("--rank or --ranks is required");

  switch (cfg.subcommand) {
    case Subcommand::Compress: return run_compress(cfg, out);
    case Subcommand::Pca: return run_pca(cfg, out);
    case Subcommand::Svd: return run_svd(cfg, out);
    case Subcommand::Bench: return run_bench(cfg, out);
    case Subcommand::Stability: return run_stability(cfg, out);
    case Subcommand::Compare: return run_compare(cfg, out);
  }
  return 2;
}

} // namespace detail

//
// Entry point shared by the `dimred` executable and the tests. Exit codes:
// 0 success, 1 domain error (one line on `err`), 2 usage error.
//
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"PCA and SVD dimensionality reduction and low-rank image compression", "dimred"};
  app.require_subcommand(1);

  std::string method_text = "svd";
  std::string report_text = "csv";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "Input image (.pgm/.ppm) or CSV matrix");
    sub->add_option("--output", cfg.output_path, "Output path");
    auto* rank = sub->add_option("--rank", cfg.rank_text, "Single rank K");
    auto* ranks = sub->add_option("--ranks", cfg.ranks_text, "Comma-separated ranks K1,K2,...");
    rank->excludes(ranks);
    sub->add_option("--method", method_text, "pca or svd")->check(CLI::IsMember({"pca", "svd"}));
    sub->add_option("--report", report_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--binary", cfg.binary, "Write binary PGM/PPM (P5/P6)");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--type", cfg.type_override, "Override input type inference")
        ->check(CLI::IsMember({"pgm", "ppm", "csv"}));
    sub->add_flag("--timing", cfg.timing, "Include wall-clock runtimes in reports");
    sub->add_option("--size", cfg.stability_size, "Stability experiment size n");
    sub->add_option("--cond", cfg.stability_cond, "Stability experiment condition number");
  };

  const std::vector<std::pair<Subcommand, std::pair<const char*, const char*>>> subs{
      {Subcommand::Compress, {"compress", "Rank-k compression of an image or matrix"}},
      {Subcommand::Pca, {"pca", "Fit PCA and report the spectrum"}},
      {Subcommand::Svd, {"svd", "Singular values and optional factors"}},
      {Subcommand::Bench, {"bench", "Error/energy/storage report over a list of ranks"}},
      {Subcommand::Stability, {"stability", "Conditioning experiment: SVD vs covariance route"}},
      {Subcommand::Compare, {"compare", "PCA vs SVD side by side with centering sensitivity"}},
  };
  for (const auto& [kind, names] : subs) {
    CLI::App* sub = app.add_subcommand(names.first, names.second);
    add_common(sub);
    if (kind == Subcommand::Compare) {
      sub->add_flag("--stability", cfg.with_stability, "Append the stability experiment");
    }
    sub->callback([&cfg, kind = kind] { cfg.subcommand = kind; });
  }

  std::vector<const char*> argv{"dimred"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  cfg.method = method_text == "pca" ? Method::Pca : Method::Svd;
  cfg.report = report_text == "json" ? ReportFormat::Json : ReportFormat::Csv;

  try {
    return detail::dispatch(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace dimred::cli
