#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bqcs/bitcode.hpp"
#include "bqcs/cli.hpp"
#include "bqcs/report.hpp"
#include "bqcs/tensor.hpp"
#include "bqcs/version.hpp"
#include "test_util.hpp"

using namespace bqcs;
using bqcs::testutil::TempDir;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bqcs");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());

  std::ostringstream out, err;
  std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
  CliResult res;
  try {
    res.code = cli_main(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  res.out = out.str();
  res.err = err.str();
  return res;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("help and version exit cleanly") {
  CHECK(run_cli({"--help"}).code == 0);
  const CliResult v = run_cli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(kVersion) != std::string::npos);
  CHECK(run_cli({"conv-bench", "--help"}).code == 0);
}

TEST_CASE("usage errors print help on stderr and exit 2") {
  const CliResult none = run_cli({});
  CHECK(none.code == 2);
  CHECK(none.err.find("Usage") != std::string::npos);

  const CliResult unknown_sub = run_cli({"frobnicate"});
  CHECK(unknown_sub.code == 2);
  CHECK_FALSE(unknown_sub.err.empty());

  const CliResult unknown_flag = run_cli({"gen", "--out", "x", "--turbo"});
  CHECK(unknown_flag.code == 2);
  CHECK_FALSE(unknown_flag.err.empty());

  const CliResult missing_required = run_cli({"gen"});
  CHECK(missing_required.code == 2);

  const CliResult bad_choice = run_cli({"gen", "--out", "x", "--dist", "zeta"});
  CHECK(bad_choice.code == 2);
}

TEST_CASE("gen writes a loadable tensor of the requested shape") {
  TempDir dir;
  const auto path = dir.file("w.bqt");
  const CliResult res = run_cli(
      {"gen", "--shape", "4x5x2", "--seed", "3", "--out", path.string()});
  REQUIRE(res.code == 0);
  CHECK(res.out.find("wrote") != std::string::npos);
  const Tensor t = load_tensor(path);
  CHECK(t.shape() == std::vector<std::size_t>{4, 5, 2});

  // Same seed, same bytes; different seed, different bytes.
  const auto again = dir.file("w2.bqt");
  run_cli({"gen", "--shape", "4x5x2", "--seed", "3", "--out", again.string()});
  CHECK(load_tensor(again) == t);
  const auto other = dir.file("w3.bqt");
  run_cli({"gen", "--shape", "4x5x2", "--seed", "4", "--out", other.string()});
  CHECK(load_tensor(other) != t);

  CHECK(run_cli({"gen", "--shape", "4x0x2", "--out", path.string()}).code == 3);
  CHECK(run_cli({"gen", "--shape", "fish", "--out", path.string()}).code == 3);
}

TEST_CASE("quantize produces a packed code with a readable sidecar") {
  TempDir dir;
  const auto w_path = dir.file("w.bqt");
  REQUIRE(run_cli({"gen", "--shape", "6x6x1", "--seed", "7", "--out",
                   w_path.string()})
              .code == 0);

  const auto std_path = dir.file("w_std.bqc");
  const CliResult std_res =
      run_cli({"quantize", "--in", w_path.string(), "--out",
               std_path.string()});
  REQUIRE(std_res.code == 0);
  CHECK(std::filesystem::exists(std_path));
  CHECK(std::filesystem::exists(std_path.string() + ".json"));
  const BitCode std_code = load_code(std_path);
  CHECK(std_code.length() == 36);

  const auto qcs_path = dir.file("w_qcs.bqc");
  const CliResult qcs_res =
      run_cli({"quantize", "--scheme", "qcs", "--in", w_path.string(),
               "--m-ratio", "4", "--seed", "7", "--out", qcs_path.string()});
  REQUIRE(qcs_res.code == 0);
  CHECK(qcs_res.out.find("m=144") != std::string::npos);
  CHECK(qcs_res.out.find("p=36") != std::string::npos);
  CHECK(load_code(qcs_path).length() == 144);
  CHECK(std::filesystem::exists(qcs_path.string() + ".json"));

  // Explicit --m instead of a ratio.
  const auto m_path = dir.file("w_m.bqc");
  CHECK(run_cli({"quantize", "--scheme", "qcs", "--in", w_path.string(),
                 "--m", "50", "--out", m_path.string()})
            .code == 0);
  CHECK(load_code(m_path).length() == 50);

  // Exactly one of --m / --m-ratio must be given.
  CHECK(run_cli({"quantize", "--scheme", "qcs", "--in", w_path.string(),
                 "--out", m_path.string()})
            .code == 3);
  CHECK(run_cli({"quantize", "--scheme", "qcs", "--in", w_path.string(),
                 "--m", "50", "--m-ratio", "2", "--out", m_path.string()})
            .code == 3);
  CHECK(run_cli({"quantize", "--scheme", "qcs", "--in", w_path.string(),
                 "--m", "50", "--dither", "perhaps", "--out",
                 m_path.string()})
            .code == 3);

  // Missing input tensor and malformed input tensor map to exit 4.
  CHECK(run_cli({"quantize", "--in", dir.file("nope.bqt").string(), "--out",
                 m_path.string()})
            .code == 4);
  const auto junk = dir.file("junk.bqt");
  std::ofstream(junk, std::ios::binary) << "BQT1 but not really";
  CHECK(run_cli({"quantize", "--in", junk.string(), "--out", m_path.string()})
            .code == 4);
}

TEST_CASE("bench subcommands write verifiable reports") {
  TempDir dir;
  const auto out = dir.file("conv.csv");
  const CliResult res = run_cli({"conv-bench", "--input-h", "5", "--input-w",
                                 "5", "--kernel-h", "3", "--kernel-w", "3",
                                 "--ratios", "1", "--ratios", "2", "--seeds",
                                 "2", "--seed", "21", "--dither", "none",
                                 "--verify-report", "--out", out.string()});
  REQUIRE(res.code == 0);
  CHECK(res.out.find("wrote " + out.string()) != std::string::npos);
  const ExperimentReport rep = load_report(out);
  CHECK(rep.rows.size() == 16);  // 2 seeds * (2 + 1 + 1 + 2 ratios * 2 modes)
  CHECK(verify_summary(rep));

  // Omitting --out streams the same CSV to stdout.
  const CliResult piped = run_cli({"conv-bench", "--input-h", "5", "--input-w",
                                   "5", "--ratios", "1", "--seeds", "1",
                                   "--seed", "21", "--dither", "none"});
  REQUIRE(piped.code == 0);
  CHECK(piped.out.rfind("# " + std::string(kReportSchema) + "\n", 0) == 0);
  const ExperimentReport from_stdout = parse_report(piped.out);
  CHECK(verify_summary(from_stdout));
}

TEST_CASE("rip-check accepts comma lists and reports probe results") {
  TempDir dir;
  const auto out = dir.file("rip.csv");
  const CliResult res =
      run_cli({"rip-check", "--p", "32", "--m", "16,64", "--k", "1,2",
               "--trials", "20", "--seeds", "2", "--out", out.string()});
  REQUIRE(res.code == 0);
  const ExperimentReport rep = load_report(out);
  CHECK(rep.rows.size() == 16);  // 2 seeds * 2 m * 2 k * (grm + identity)
  for (const auto& r : rep.rows) {
    REQUIRE(r.delta_hat.has_value());
    if (r.ensemble == "identity") CHECK(*r.delta_hat == 0.0);
  }
}

TEST_CASE("throughput benchmark writes one row per repetition") {
  TempDir dir;
  const auto out = dir.file("tp.json");
  const CliResult res =
      run_cli({"throughput", "--sizes", "512", "--reps", "2", "--warmup", "1",
               "--format", "json", "--out", out.string()});
  REQUIRE(res.code == 0);
  const ExperimentReport rep = load_report(out);
  CHECK(rep.rows.size() == 2);
  for (const auto& r : rep.rows) CHECK(*r.mem_ratio == 32.0);
}

TEST_CASE("config files drive benches and flags override them") {
  TempDir dir;
  const auto cfg_path = dir.file("cfg.json");
  std::ofstream(cfg_path)
      << R"({"kind":"recon-bench","p":16,"ratios":[1,4],"trials":2,"seed":3})";
  const auto out = dir.file("recon.csv");
  const CliResult res = run_cli({"recon-bench", "--config", cfg_path.string(),
                                 "--seeds", "1", "--out", out.string()});
  REQUIRE(res.code == 0);
  const ExperimentReport rep = load_report(out);
  CHECK(rep.rows.size() == 2);  // --seeds overrode trials=2 from the file
  CHECK(rep.config_json.find("\"seed\":3") != std::string::npos);

  // Config kind must match the subcommand.
  CHECK(run_cli({"throughput", "--config", cfg_path.string()}).code == 3);
  // Broken config files are config errors; absent ones are io errors.
  const auto broken = dir.file("broken.json");
  std::ofstream(broken) << "{ nope";
  CHECK(run_cli({"recon-bench", "--config", broken.string()}).code == 3);
  CHECK(
      run_cli({"recon-bench", "--config", dir.file("ghost.json").string()})
          .code == 4);
}

TEST_CASE("report subcommand verifies, converts, and re-summarizes") {
  TempDir dir;
  const auto csv = dir.file("r.csv");
  REQUIRE(run_cli({"recon-bench", "--p", "8", "--ratios", "1", "--seeds", "2",
                   "--out", csv.string()})
              .code == 0);

  const CliResult ok = run_cli({"report", "--in", csv.string(),
                                "--verify-report"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("report ok (2 rows)") != std::string::npos);

  // Convert csv -> json and back; reports stay equivalent.
  const auto json_path = dir.file("r.json");
  REQUIRE(run_cli({"report", "--in", csv.string(), "--out",
                   json_path.string()})
              .code == 0);
  const ExperimentReport a = load_report(csv);
  const ExperimentReport b = load_report(json_path);
  CHECK(reports_equivalent(a, b));

  // Tampering with a summary statistic makes verification fail with exit 5.
  ExperimentReport tampered = a;
  REQUIRE_FALSE(tampered.summary.empty());
  tampered.summary[0].mean += 1.0;
  const auto bad = dir.file("bad.csv");
  write_report(tampered, bad, "csv");
  const CliResult fail = run_cli({"report", "--in", bad.string(),
                                  "--verify-report"});
  CHECK(fail.code == 5);
  CHECK_FALSE(fail.err.empty());

  // Unreadable and malformed inputs exit 4.
  CHECK(run_cli({"report", "--in", dir.file("none.csv").string()}).code == 4);
  const auto garbage = dir.file("g.csv");
  std::ofstream(garbage) << "not,a,report\n";
  CHECK(run_cli({"report", "--in", garbage.string()}).code == 4);
}

TEST_CASE("identical invocations write equivalent reports") {
  TempDir dir;
  const auto a_path = dir.file("a.csv");
  const auto b_path = dir.file("b.csv");
  const std::vector<std::string> args = {"recon-bench", "--p",    "8",
                                         "--ratios",    "1,4",    "--seeds",
                                         "2",           "--seed", "77"};
  auto with_out = [&](const std::filesystem::path& p) {
    std::vector<std::string> v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(run_cli(with_out(a_path)).code == 0);
  REQUIRE(run_cli(with_out(b_path)).code == 0);
  CHECK(reports_equivalent(load_report(a_path), load_report(b_path)));
}

TEST_SUITE_END();
