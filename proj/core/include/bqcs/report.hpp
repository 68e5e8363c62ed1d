#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bqcs {

/// One trial of one experiment. Identity fields name the cell of the sweep
/// grid; metric fields are filled "as applicable" and stay empty otherwise.
struct ReportRow {
  std::string kind;      // conv-bench | recon-bench | rip-check | throughput
  std::string scheme;    // standard | qcs
  std::string mode;      // weight_only | dual | unscaled | raw | debiased
  std::string ensemble;  // grm | identity
  std::string family;    // dense | sparse

  std::optional<int64_t> m, p, k;
  std::optional<double> ratio;  // configured m/p
  std::optional<uint64_t> seed;
  std::optional<int64_t> trial;

  std::optional<double> relative_error;
  std::optional<double> cosine_similarity;
  std::optional<double> l2_error;
  std::optional<double> delta_hat;
  std::optional<double> alpha;
  std::optional<double> norm;
  std::optional<double> wall_ns;   // volatile
  std::optional<double> float_ns;  // volatile
  std::optional<double> speedup;   // volatile
  std::optional<int64_t> payload_bits;
  std::optional<double> mem_ratio;
  std::optional<bool> biased;

  // NaN-aware: two rows whose metrics are both NaN compare equal.
  friend bool operator==(const ReportRow&, const ReportRow&);
};

/// Per-group statistics of one metric over the trial rows.
struct SummaryRow {
  std::string kind, scheme, mode, ensemble, family;
  std::optional<int64_t> m, p, k;
  std::optional<double> ratio;
  std::string metric;
  int64_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;

  friend bool operator==(const SummaryRow&, const SummaryRow&);
};

struct ReportMeta {
  std::string schema;
  std::string version;
  std::string timestamp;  // ISO-8601 UTC; excluded from equivalence checks
  int64_t threads = 1;
};

struct ExperimentReport {
  std::string config_json;  // canonical one-line echo of the run's config
  std::vector<ReportRow> rows;
  std::vector<SummaryRow> summary;
  ReportMeta meta;
};

/// Fixed v1 column order of the CSV schema.
const std::vector<std::string>& report_columns();

/// Wall-time derived metrics; everything else must be bit-reproducible.
bool is_volatile_metric(const std::string& name);

ReportMeta make_meta();

/// Total order on rows by their identity fields; makes emission independent
/// of evaluation order.
void sort_rows_canonically(std::vector<ReportRow>& rows);

/// Generic per-group stats for every metric present, plus the named
/// conjecture row (paired win fraction of debiased QCS over dual-scaled
/// standard at each ratio) when a conv-bench report contains both sides.
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

std::string to_csv(const ExperimentReport& report);
std::string to_json_text(const ExperimentReport& report);

/// Inverse of the writers; accepts either format (sniffed from content).
ExperimentReport parse_report(const std::string& text);
ExperimentReport load_report(const std::filesystem::path& path);
void write_report(const ExperimentReport& report,
                  const std::filesystem::path& path,
                  const std::string& format);

/// Recomputes the summary from the rows and compares with the stored one.
bool verify_summary(const ExperimentReport& report, std::string* why = nullptr);

/// Byte-level reproducibility modulo wall time: configs, rows (volatile
/// fields cleared), summaries (volatile metrics dropped) and meta all match;
/// timestamps and thread counts are ignored.
bool reports_equivalent(const ExperimentReport& a, const ExperimentReport& b,
                        std::string* why = nullptr);

}  // namespace bqcs
