#include "bqcs/report.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "bqcs/errors.hpp"
#include "bqcs/stats.hpp"
#include "bqcs/version.hpp"

namespace bqcs {

using nlohmann::json;

namespace {

const std::vector<std::string> kColumns = {
    "kind",       "scheme",         "mode",
    "ensemble",   "family",         "m",
    "p",          "k",              "ratio",
    "seed",       "trial",          "relative_error",
    "cosine_similarity", "l2_error", "delta_hat",
    "alpha",      "norm",           "wall_ns",
    "float_ns",   "speedup",        "payload_bits",
    "mem_ratio",  "biased"};

const std::vector<std::string> kSummaryMetrics = {
    "relative_error", "cosine_similarity", "l2_error", "delta_hat",
    "mem_ratio",      "wall_ns",           "float_ns", "speedup"};

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  return json(v).dump();  // shortest round-trip representation
}

std::string cell(const std::optional<double>& v) {
  return v ? fmt_double(*v) : "";
}
std::string cell(const std::optional<int64_t>& v) {
  return v ? std::to_string(*v) : "";
}
std::string cell(const std::optional<uint64_t>& v) {
  return v ? std::to_string(*v) : "";
}
std::string cell(const std::optional<bool>& v) {
  return v ? (*v ? "true" : "false") : "";
}

double parse_double(const std::string& s, const std::string& col) {
  if (s == "nan") return std::nan("");
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw format_error("bad numeric cell '" + s + "' in column " + col);
  }
}

std::optional<double> opt_double(const std::string& s, const std::string& c) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, c);
}
std::optional<int64_t> opt_i64(const std::string& s, const std::string& c) {
  if (s.empty()) return std::nullopt;
  return static_cast<int64_t>(parse_double(s, c));
}
std::optional<uint64_t> opt_u64(const std::string& s, const std::string& c) {
  if (s.empty()) return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw format_error("bad unsigned cell '" + s + "' in column " + c);
  }
}
std::optional<bool> opt_bool(const std::string& s, const std::string& c) {
  if (s.empty()) return std::nullopt;
  if (s == "true") return true;
  if (s == "false") return false;
  throw format_error("bad boolean cell '" + s + "' in column " + c);
}

std::vector<std::string> row_cells(const ReportRow& r) {
  return {r.kind,
          r.scheme,
          r.mode,
          r.ensemble,
          r.family,
          cell(r.m),
          cell(r.p),
          cell(r.k),
          cell(r.ratio),
          cell(r.seed),
          cell(r.trial),
          cell(r.relative_error),
          cell(r.cosine_similarity),
          cell(r.l2_error),
          cell(r.delta_hat),
          cell(r.alpha),
          cell(r.norm),
          cell(r.wall_ns),
          cell(r.float_ns),
          cell(r.speedup),
          cell(r.payload_bits),
          cell(r.mem_ratio),
          cell(r.biased)};
}

ReportRow row_from_cells(const std::vector<std::string>& c) {
  if (c.size() != kColumns.size()) {
    throw format_error("CSV row has " + std::to_string(c.size()) +
                       " cells, expected " + std::to_string(kColumns.size()));
  }
  ReportRow r;
  r.kind = c[0];
  r.scheme = c[1];
  r.mode = c[2];
  r.ensemble = c[3];
  r.family = c[4];
  r.m = opt_i64(c[5], "m");
  r.p = opt_i64(c[6], "p");
  r.k = opt_i64(c[7], "k");
  r.ratio = opt_double(c[8], "ratio");
  r.seed = opt_u64(c[9], "seed");
  r.trial = opt_i64(c[10], "trial");
  r.relative_error = opt_double(c[11], "relative_error");
  r.cosine_similarity = opt_double(c[12], "cosine_similarity");
  r.l2_error = opt_double(c[13], "l2_error");
  r.delta_hat = opt_double(c[14], "delta_hat");
  r.alpha = opt_double(c[15], "alpha");
  r.norm = opt_double(c[16], "norm");
  r.wall_ns = opt_double(c[17], "wall_ns");
  r.float_ns = opt_double(c[18], "float_ns");
  r.speedup = opt_double(c[19], "speedup");
  r.payload_bits = opt_i64(c[20], "payload_bits");
  r.mem_ratio = opt_double(c[21], "mem_ratio");
  r.biased = opt_bool(c[22], "biased");
  return r;
}

std::optional<double> get_metric(const ReportRow& r, const std::string& name) {
  if (name == "relative_error") return r.relative_error;
  if (name == "cosine_similarity") return r.cosine_similarity;
  if (name == "l2_error") return r.l2_error;
  if (name == "delta_hat") return r.delta_hat;
  if (name == "mem_ratio") return r.mem_ratio;
  if (name == "wall_ns") return r.wall_ns;
  if (name == "float_ns") return r.float_ns;
  if (name == "speedup") return r.speedup;
  return std::nullopt;
}

// Group identity: everything except the trial coordinates and metrics.
using GroupKey =
    std::tuple<std::string, std::string, std::string, std::string, std::string,
               std::optional<int64_t>, std::optional<int64_t>,
               std::optional<int64_t>, std::optional<double>>;

GroupKey group_key(const ReportRow& r) {
  return {r.kind, r.scheme, r.mode, r.ensemble, r.family, r.m, r.p, r.k,
          r.ratio};
}

auto sort_key(const ReportRow& r) {
  return std::make_tuple(group_key(r), r.seed, r.trial);
}

json seed_or_null(const std::optional<int64_t>& v) {
  return v ? json(*v) : json(nullptr);
}

bool same_num(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

bool same_opt(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_num(*a, *b);
}

// NaN has no JSON number representation, so it rides as the string "nan",
// mirroring the CSV cell convention.
void put_num(json& j, const char* name, const std::optional<double>& v) {
  if (!v) return;
  if (std::isnan(*v)) {
    j[name] = "nan";
  } else {
    j[name] = *v;
  }
}

std::optional<double> take_num(const json& j, const char* name) {
  if (!j.contains(name)) return std::nullopt;
  const json& v = j.at(name);
  if (v.is_string() && v.get<std::string>() == "nan") return std::nan("");
  if (v.is_number()) return v.get<double>();
  throw format_error(std::string("bad numeric field '") + name + "'");
}

json summary_to_json(const SummaryRow& s) {
  json j;
  j["kind"] = s.kind;
  j["scheme"] = s.scheme;
  j["mode"] = s.mode;
  j["ensemble"] = s.ensemble;
  j["family"] = s.family;
  j["m"] = seed_or_null(s.m);
  j["p"] = seed_or_null(s.p);
  j["k"] = seed_or_null(s.k);
  j["ratio"] = s.ratio ? json(*s.ratio) : json(nullptr);
  j["metric"] = s.metric;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["p10"] = s.p10;
  j["p90"] = s.p90;
  return j;
}

SummaryRow summary_from_json(const json& j) {
  SummaryRow s;
  s.kind = j.at("kind").get<std::string>();
  s.scheme = j.at("scheme").get<std::string>();
  s.mode = j.at("mode").get<std::string>();
  s.ensemble = j.at("ensemble").get<std::string>();
  s.family = j.at("family").get<std::string>();
  if (!j.at("m").is_null()) s.m = j.at("m").get<int64_t>();
  if (!j.at("p").is_null()) s.p = j.at("p").get<int64_t>();
  if (!j.at("k").is_null()) s.k = j.at("k").get<int64_t>();
  if (!j.at("ratio").is_null()) s.ratio = j.at("ratio").get<double>();
  s.metric = j.at("metric").get<std::string>();
  s.count = j.at("count").get<int64_t>();
  s.mean = j.at("mean").get<double>();
  s.median = j.at("median").get<double>();
  s.p10 = j.at("p10").get<double>();
  s.p90 = j.at("p90").get<double>();
  return s;
}

json row_to_json(const ReportRow& r) {
  json j;
  j["kind"] = r.kind;
  if (!r.scheme.empty()) j["scheme"] = r.scheme;
  if (!r.mode.empty()) j["mode"] = r.mode;
  if (!r.ensemble.empty()) j["ensemble"] = r.ensemble;
  if (!r.family.empty()) j["family"] = r.family;
  if (r.m) j["m"] = *r.m;
  if (r.p) j["p"] = *r.p;
  if (r.k) j["k"] = *r.k;
  put_num(j, "ratio", r.ratio);
  if (r.seed) j["seed"] = *r.seed;
  if (r.trial) j["trial"] = *r.trial;
  put_num(j, "relative_error", r.relative_error);
  put_num(j, "cosine_similarity", r.cosine_similarity);
  put_num(j, "l2_error", r.l2_error);
  put_num(j, "delta_hat", r.delta_hat);
  put_num(j, "alpha", r.alpha);
  put_num(j, "norm", r.norm);
  put_num(j, "wall_ns", r.wall_ns);
  put_num(j, "float_ns", r.float_ns);
  put_num(j, "speedup", r.speedup);
  if (r.payload_bits) j["payload_bits"] = *r.payload_bits;
  put_num(j, "mem_ratio", r.mem_ratio);
  if (r.biased) j["biased"] = *r.biased;
  return j;
}

ReportRow row_from_json(const json& j) {
  ReportRow r;
  r.kind = j.value("kind", "");
  r.scheme = j.value("scheme", "");
  r.mode = j.value("mode", "");
  r.ensemble = j.value("ensemble", "");
  r.family = j.value("family", "");
  if (j.contains("m")) r.m = j.at("m").get<int64_t>();
  if (j.contains("p")) r.p = j.at("p").get<int64_t>();
  if (j.contains("k")) r.k = j.at("k").get<int64_t>();
  r.ratio = take_num(j, "ratio");
  if (j.contains("seed")) r.seed = j.at("seed").get<uint64_t>();
  if (j.contains("trial")) r.trial = j.at("trial").get<int64_t>();
  r.relative_error = take_num(j, "relative_error");
  r.cosine_similarity = take_num(j, "cosine_similarity");
  r.l2_error = take_num(j, "l2_error");
  r.delta_hat = take_num(j, "delta_hat");
  r.alpha = take_num(j, "alpha");
  r.norm = take_num(j, "norm");
  r.wall_ns = take_num(j, "wall_ns");
  r.float_ns = take_num(j, "float_ns");
  r.speedup = take_num(j, "speedup");
  if (j.contains("payload_bits"))
    r.payload_bits = j.at("payload_bits").get<int64_t>();
  r.mem_ratio = take_num(j, "mem_ratio");
  if (j.contains("biased")) r.biased = j.at("biased").get<bool>();
  return r;
}

json meta_to_json(const ReportMeta& m) {
  return json{{"schema", m.schema},
              {"version", m.version},
              {"timestamp", m.timestamp},
              {"threads", m.threads}};
}

ReportMeta meta_from_json(const json& j) {
  ReportMeta m;
  m.schema = j.value("schema", "");
  m.version = j.value("version", "");
  m.timestamp = j.value("timestamp", "");
  m.threads = j.value("threads", int64_t{1});
  return m;
}

ReportRow strip_volatile(ReportRow r) {
  r.wall_ns.reset();
  r.float_ns.reset();
  r.speedup.reset();
  return r;
}

}  // namespace

bool operator==(const ReportRow& a, const ReportRow& b) {
  return a.kind == b.kind && a.scheme == b.scheme && a.mode == b.mode &&
         a.ensemble == b.ensemble && a.family == b.family && a.m == b.m &&
         a.p == b.p && a.k == b.k && same_opt(a.ratio, b.ratio) &&
         a.seed == b.seed && a.trial == b.trial &&
         same_opt(a.relative_error, b.relative_error) &&
         same_opt(a.cosine_similarity, b.cosine_similarity) &&
         same_opt(a.l2_error, b.l2_error) &&
         same_opt(a.delta_hat, b.delta_hat) && same_opt(a.alpha, b.alpha) &&
         same_opt(a.norm, b.norm) && same_opt(a.wall_ns, b.wall_ns) &&
         same_opt(a.float_ns, b.float_ns) && same_opt(a.speedup, b.speedup) &&
         a.payload_bits == b.payload_bits &&
         same_opt(a.mem_ratio, b.mem_ratio) && a.biased == b.biased;
}

bool operator==(const SummaryRow& a, const SummaryRow& b) {
  return a.kind == b.kind && a.scheme == b.scheme && a.mode == b.mode &&
         a.ensemble == b.ensemble && a.family == b.family && a.m == b.m &&
         a.p == b.p && a.k == b.k && same_opt(a.ratio, b.ratio) &&
         a.metric == b.metric && a.count == b.count &&
         same_num(a.mean, b.mean) && same_num(a.median, b.median) &&
         same_num(a.p10, b.p10) && same_num(a.p90, b.p90);
}

const std::vector<std::string>& report_columns() { return kColumns; }

bool is_volatile_metric(const std::string& name) {
  return name == "wall_ns" || name == "float_ns" || name == "speedup";
}

ReportMeta make_meta() {
  ReportMeta m;
  m.schema = std::string(kReportSchema);
  m.version = std::string(kVersion);
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m.timestamp = buf;
  return m;
}

void sort_rows_canonically(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     return sort_key(a) < sort_key(b);
                   });
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  std::map<GroupKey, std::vector<const ReportRow*>> groups;
  for (const auto& r : rows) groups[group_key(r)].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    for (const auto& metric : kSummaryMetrics) {
      std::vector<double> vals;
      for (const ReportRow* r : members) {
        if (auto v = get_metric(*r, metric); v && !std::isnan(*v)) {
          vals.push_back(*v);
        }
      }
      if (vals.empty()) continue;
      SummaryRow s;
      std::tie(s.kind, s.scheme, s.mode, s.ensemble, s.family, s.m, s.p, s.k,
               s.ratio) = key;
      s.metric = metric;
      s.count = static_cast<int64_t>(vals.size());
      s.mean = mean(vals);
      s.median = median(vals);
      s.p10 = quantile(vals, 0.10);
      s.p90 = quantile(vals, 0.90);
      out.push_back(std::move(s));
    }
  }

  // Named conjecture rows: per ratio, paired comparison of debiased QCS
  // against dual-scaled standard on the same seeds.
  std::map<std::optional<uint64_t>, double> standard_dual;
  for (const auto& r : rows) {
    if (r.kind == "conv-bench" && r.scheme == "standard" && r.mode == "dual" &&
        r.relative_error) {
      standard_dual[r.seed] = *r.relative_error;
    }
  }
  if (!standard_dual.empty()) {
    std::map<std::optional<double>, std::vector<std::pair<double, double>>>
        paired;  // ratio -> (standard_err, qcs_err)
    for (const auto& r : rows) {
      if (r.kind == "conv-bench" && r.scheme == "qcs" &&
          r.mode == "debiased" && r.ensemble == "grm" && r.relative_error) {
        auto it = standard_dual.find(r.seed);
        if (it != standard_dual.end()) {
          paired[r.ratio].emplace_back(it->second, *r.relative_error);
        }
      }
    }
    for (const auto& [ratio, pairs] : paired) {
      int64_t wins = 0;
      std::vector<double> margins;
      for (const auto& [std_err, qcs_err] : pairs) {
        if (qcs_err < std_err) ++wins;
        margins.push_back(std_err - qcs_err);
      }
      SummaryRow s;
      s.kind = "conv-bench";
      s.scheme = "conjecture";
      s.mode = "qcs_debiased_vs_standard_dual";
      s.ensemble = "grm";
      s.ratio = ratio;
      s.metric = "qcs_win_fraction";
      s.count = static_cast<int64_t>(pairs.size());
      s.mean = static_cast<double>(wins) / static_cast<double>(pairs.size());
      s.median = median(margins);
      s.p10 = quantile(margins, 0.10);
      s.p90 = quantile(margins, 0.90);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "# " << report.meta.schema << "\n";
  out << "# config: " << report.config_json << "\n";
  out << "# meta: " << meta_to_json(report.meta).dump() << "\n";
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    out << kColumns[i] << (i + 1 < kColumns.size() ? "," : "\n");
  }
  for (const auto& r : report.rows) {
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
  }
  for (const auto& s : report.summary) {
    out << "# summary: " << summary_to_json(s).dump() << "\n";
  }
  return out.str();
}

std::string to_json_text(const ExperimentReport& report) {
  json j;
  j["schema"] = report.meta.schema;
  try {
    j["config"] = json::parse(report.config_json);
  } catch (const json::parse_error&) {
    j["config"] = report.config_json;
  }
  j["meta"] = meta_to_json(report.meta);
  j["rows"] = json::array();
  for (const auto& r : report.rows) j["rows"].push_back(row_to_json(r));
  j["summary"] = json::array();
  for (const auto& s : report.summary)
    j["summary"].push_back(summary_to_json(s));
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

ExperimentReport parse_csv_report(const std::string& text) {
  ExperimentReport rep;
  std::istringstream in(text);
  std::string line;
  bool saw_schema = false, saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# config: ", 0) == 0) {
      rep.config_json = line.substr(10);
      continue;
    }
    if (line.rfind("# meta: ", 0) == 0) {
      try {
        rep.meta = meta_from_json(json::parse(line.substr(8)));
      } catch (const json::parse_error& e) {
        throw format_error(std::string("bad meta line: ") + e.what());
      }
      continue;
    }
    if (line.rfind("# summary: ", 0) == 0) {
      try {
        rep.summary.push_back(summary_from_json(json::parse(line.substr(11))));
      } catch (const json::exception& e) {
        throw format_error(std::string("bad summary line: ") + e.what());
      }
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      if (line.substr(2) == kReportSchema) saw_schema = true;
      continue;
    }
    if (!saw_header) {
      if (split_csv_line(line) != kColumns) {
        throw format_error("CSV column header does not match schema " +
                           std::string(kReportSchema));
      }
      saw_header = true;
      continue;
    }
    rep.rows.push_back(row_from_cells(split_csv_line(line)));
  }
  if (!saw_schema) {
    throw format_error("missing schema line '# " + std::string(kReportSchema) +
                       "'");
  }
  if (!saw_header) throw format_error("missing CSV column header");
  return rep;
}

ExperimentReport parse_json_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw format_error(std::string("bad JSON report: ") + e.what());
  }
  ExperimentReport rep;
  try {
    rep.meta = meta_from_json(j.at("meta"));
    rep.config_json = j.at("config").dump();
    for (const auto& r : j.at("rows")) rep.rows.push_back(row_from_json(r));
    for (const auto& s : j.at("summary"))
      rep.summary.push_back(summary_from_json(s));
  } catch (const json::exception& e) {
    throw format_error(std::string("bad JSON report: ") + e.what());
  }
  return rep;
}

}  // namespace

ExperimentReport parse_report(const std::string& text) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t') continue;
    if (ch == '{') return parse_json_report(text);
    break;
  }
  return parse_csv_report(text);
}

ExperimentReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report(buf.str());
}

void write_report(const ExperimentReport& report,
                  const std::filesystem::path& path,
                  const std::string& format) {
  std::string text;
  if (format == "csv") {
    text = to_csv(report);
  } else if (format == "json") {
    text = to_json_text(report);
  } else {
    throw config_error("config.format: expected csv or json, got " + format);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw io_error("write failed: " + path.string());
}

bool verify_summary(const ExperimentReport& report, std::string* why) {
  const auto recomputed = summarize(report.rows);
  if (recomputed == report.summary) return true;
  if (why != nullptr) {
    *why = "stored summary has " + std::to_string(report.summary.size()) +
           " entries, recomputed has " + std::to_string(recomputed.size());
    const std::size_t n = std::min(recomputed.size(), report.summary.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!(recomputed[i] == report.summary[i])) {
        *why = "summary entry " + std::to_string(i) + " differs (metric " +
               report.summary[i].metric + ")";
        break;
      }
    }
  }
  return false;
}

bool reports_equivalent(const ExperimentReport& a, const ExperimentReport& b,
                        std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };
  try {
    if (json::parse(a.config_json) != json::parse(b.config_json)) {
      return fail("configs differ");
    }
  } catch (const json::parse_error&) {
    if (a.config_json != b.config_json) return fail("configs differ");
  }
  if (a.meta.schema != b.meta.schema || a.meta.version != b.meta.version) {
    return fail("meta schema/version differs");
  }
  if (a.rows.size() != b.rows.size()) return fail("row counts differ");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (!(strip_volatile(a.rows[i]) == strip_volatile(b.rows[i]))) {
      return fail("row " + std::to_string(i) + " differs");
    }
  }
  auto stable = [](const std::vector<SummaryRow>& s) {
    std::vector<SummaryRow> out;
    for (const auto& row : s) {
      if (!is_volatile_metric(row.metric)) out.push_back(row);
    }
    return out;
  };
  if (stable(a.summary) != stable(b.summary)) {
    return fail("non-volatile summary entries differ");
  }
  return true;
}

}  // namespace bqcs
