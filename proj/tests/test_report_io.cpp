#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "driftspec/error.hpp"
#include "driftspec/jobs.hpp"
#include "driftspec/report_io.hpp"

using namespace driftspec;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "driftspec_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

JobConfig converge_config() {
  JobConfig c;
  c.kind = JobKind::converge;
  c.phi = "x";
  c.epsilon = {0.2, 0.1, 0.05, 0.025};
  c.nx = 60;
  c.nt = 4;
  c.ref_n = 400;
  return c;
}

int run(const JobConfig& c, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_job(c, out, err);
  if (err_text != nullptr) *err_text = err.str();
  return code;
}

}  // namespace

TEST(ReportIo, CsvHeaderAndFullPrecision) {
  Table t{{"k", "eigenvalue", "residual"}, {{1, 0.1, 1.0 / 3.0}}};
  EXPECT_EQ(format_csv(t),
            "k,eigenvalue,residual\n1,0.10000000000000001,0.33333333333333331\n");
  EXPECT_EQ(format_csv(Table{{"k", "eigenvalue", "residual"}, {}}), "k,eigenvalue,residual\n");
}

TEST(ReportIo, JsonRoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  JobReport r;
  r.kind = "converge";
  r.version = "test";
  r.config = {{"phi", std::string("x")}, {"epsilon", std::vector<double>{0.2, 0.1}}};
  r.table.columns = {"a", "b", "c"};
  for (int i = 0; i < 50; ++i) {
    r.table.rows.push_back({u(rng), std::ldexp(u(rng), -40), 1.0 / (i + 1)});
  }
  r.metadata = {{"flag", true}, {"count", std::int64_t{3}}, {"value", 0.1 + 0.2},
                {"names", std::vector<std::string>{"fitted", "at_floor"}}};
  r.failures = {"something"};
  const JobReport back = parse_json_report(format_json(r));
  ASSERT_EQ(back.table.rows.size(), r.table.rows.size());
  for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_TRUE(same_bits(back.table.rows[i][c], r.table.rows[i][c]));
    }
  }
  EXPECT_TRUE(same_bits(std::get<double>(back.metadata[2].second), 0.1 + 0.2));
  EXPECT_EQ(std::get<std::int64_t>(back.metadata[1].second), 3);
  EXPECT_EQ(back.failures, r.failures);
  EXPECT_EQ(format_json(back), format_json(r));
  EXPECT_THROW(parse_json_report("{not json"), IoError);
}

TEST(ReportIo, UnwritablePathIsAnError) {
  EXPECT_THROW(write_csv(Table{{"k"}, {}}, "/nonexistent-dir/x.csv"), IoError);
}

TEST(Jobs, ConvergeReportHasTwelveRows) {
  const auto dir = scratch_dir();
  JobConfig c = converge_config();
  c.csv = (dir / "conv.csv").string();
  std::string err;
  const int code = run(c, &err);
  EXPECT_TRUE(code == kExitOk || code == kExitCheckFailed) << err;
  const std::string csv = slurp(c.csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epsilon,k,mu_eps,mu_ref,abs_err");
}

TEST(Jobs, SameConfigGivesByteIdenticalJson) {
  const auto dir = scratch_dir();
  JobConfig c;
  c.kind = JobKind::prop4;
  c.phi = "x";
  c.n = 80;
  c.trials = 5;
  c.json = (dir / "a.json").string();
  ASSERT_EQ(run(c), kExitOk);
  c.json = (dir / "b.json").string();
  ASSERT_EQ(run(c), kExitOk);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}

TEST(Jobs, Prop2JsonCarriesGapAndDrift) {
  const auto dir = scratch_dir();
  JobConfig c;
  c.kind = JobKind::prop2;
  c.n = 2000;
  c.json = (dir / "prop2.json").string();
  ASSERT_EQ(run(c), kExitOk);
  const JobReport r = parse_json_report(slurp(c.json));
  ASSERT_EQ(r.table.columns[2], "lambda_gap");
  ASSERT_EQ(r.table.columns[3], "drift_mu");
  EXPECT_NEAR(r.table.rows[1][2], 29.6088, 1e-3);
  EXPECT_NEAR(r.table.rows[1][3], 29.6088, 1e-3);
  EXPECT_TRUE(r.passed());
}

TEST(Jobs, ExitCodes) {
  std::string err;
  JobConfig under = converge_config();
  under.ref_n = 8;
  EXPECT_EQ(run(under, &err), kExitNumericError);
  EXPECT_NE(err.find("reference not converged"), std::string::npos) << err;
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);

  JobConfig flat;
  flat.kind = JobKind::gapcheck;
  flat.f = "1";
  flat.n = 200;
  flat.pairs = 10;
  EXPECT_EQ(run(flat, &err), kExitCheckFailed);
  EXPECT_NE(err.find("condition not satisfied"), std::string::npos) << err;

  JobConfig bad;
  bad.kind = JobKind::drift;
  bad.phi = "x";
  bad.f = "1";
  EXPECT_EQ(run(bad, &err), kExitConfigError);

  JobConfig domain;
  domain.kind = JobKind::drift;
  domain.phi = "log(x)";
  domain.a = -1.0;
  domain.n = 50;
  EXPECT_EQ(run(domain, &err), kExitConfigError);
  EXPECT_NE(err.find("log"), std::string::npos);

  JobConfig unwritable;
  unwritable.kind = JobKind::drift;
  unwritable.phi = "x";
  unwritable.n = 50;
  unwritable.csv = "/nonexistent-dir/out.csv";
  EXPECT_EQ(run(unwritable, &err), kExitConfigError);
}

TEST(Jobs, EmptyEigenvalueRequestWritesHeaderOnly) {
  const auto dir = scratch_dir();
  JobConfig c;
  c.kind = JobKind::drift;
  c.phi = "x";
  c.n = 50;
  c.num_eigs = 0;
  c.csv = (dir / "empty.csv").string();
  EXPECT_EQ(run(c), kExitOk);
  EXPECT_EQ(slurp(c.csv), "k,eigenvalue,residual\n");
}

TEST(Jobs, ConfigEchoFillsDefaults) {
  JobConfig c;
  c.kind = JobKind::prop4;
  c.phi = "x";
  const MetaList echo = config_echo(c);
  bool saw_n = false;
  for (const auto& [key, value] : echo) {
    if (key == "n") {
      EXPECT_EQ(std::get<std::int64_t>(value), 400);
      saw_n = true;
    }
  }
  EXPECT_TRUE(saw_n);
}
