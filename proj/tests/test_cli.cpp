#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "isopoly/errors.hpp"
#include "report.hpp"

using namespace isopoly;
using namespace isopoly::report;

namespace fs = std::filesystem;

namespace {

TrialRecord record(std::size_t trial, const std::string& lemma, Status s) {
  TrialRecord r;
  r.trial = trial;
  r.lemma = lemma;
  r.status = s;
  r.instance = {{"a", "1:1/2"}};
  r.measured = {{"lhs", "1/3"}, {"rhs", "1/2"}};
  if (s != Status::Pass) r.message = "because";
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// drop the header line, which carries the timestamp
std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

int run(const std::string& args) {
  const std::string cmd = std::string(ISOPOLY_BINARY) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "isopoly_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Report, StatusNamesRoundTrip) {
  for (Status s : {Status::Pass, Status::Fail, Status::HypothesisFailed, Status::InputError, Status::Budget,
                   Status::Indeterminate}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  EXPECT_EQ(to_string(Status::HypothesisFailed), "hypothesis_failed");
  EXPECT_THROW(parse_status("maybe"), ParseError);
}

TEST(Report, JsonlRoundTrip) {
  Header h{"L3", "lp:2", "7", "3", false, "2026-01-01T00:00:00Z"};
  const std::vector<TrialRecord> in = {record(0, "L3", Status::Pass), record(1, "L3", Status::Fail),
                                       record(2, "L3", Status::Budget)};
  std::stringstream ss;
  write_jsonl(ss, h, in);
  Header back_h;
  const auto back = read_jsonl(ss, &back_h);
  EXPECT_EQ(back_h.lemma, "L3");
  EXPECT_EQ(back_h.space, "lp:2");
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].trial, in[i].trial);
    EXPECT_EQ(back[i].status, in[i].status);
    EXPECT_EQ(back[i].instance, in[i].instance);
    EXPECT_EQ(back[i].measured, in[i].measured);
    EXPECT_EQ(back[i].message, in[i].message);
  }
  // only the header mentions the timestamp
  std::stringstream again;
  write_jsonl(again, h, in);
  EXPECT_EQ(body(again.str()).find("timestamp"), std::string::npos);
}

TEST(Report, SummaryCountsAndCsv) {
  const std::vector<TrialRecord> rs = {record(0, "L1", Status::Pass), record(1, "L1", Status::Pass),
                                       record(2, "L1", Status::HypothesisFailed), record(0, "L4", Status::Fail)};
  const auto sum = summarize(rs);
  ASSERT_EQ(sum.size(), 2u);
  EXPECT_EQ(sum[0].lemma, "L1");
  EXPECT_EQ(sum[0].total(), 3u);
  EXPECT_EQ(sum[0].count(Status::Pass), 2u);
  EXPECT_EQ(sum[0].count(Status::HypothesisFailed), 1u);
  EXPECT_EQ(sum[1].count(Status::Fail), 1u);
  std::stringstream csv;
  write_csv(csv, sum);
  EXPECT_EQ(csv.str(),
            "lemma,trials,pass,fail,hypothesis_failed,input_error,budget,indeterminate\n"
            "L1,3,2,0,1,0,0,0\n"
            "L4,1,0,1,0,0,0,0\n");
}

TEST(Report, ExitCodes) {
  using V = std::vector<TrialRecord>;
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::Pass)}, false), 0);
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::Pass), record(1, "L1", Status::Fail)}, false), 1);
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::Budget)}, false), 3);
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::InputError)}, false), 2);
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::HypothesisFailed)}, false), 2);
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::HypothesisFailed)}, true), 0);
  EXPECT_EQ(exit_code(V{record(0, "L1", Status::Pass)}, true), 1);
}

TEST(Certificates, NormCertificateRoundTripAndTamper) {
  const Setting& s = fixture::l2_depth4();
  const SparseVector x = parse_vector("5:1,9:1,20:-1/2");
  const NormCertificate cert = norm_M(x, s.space, s.blocks);
  const std::string text = format_norm_certificate(cert, x, s.space);
  const LoadedNorm back = load_norm_certificate(text, s.space, s.blocks);
  EXPECT_EQ(back.x, x);
  EXPECT_EQ(back.cert.value, cert.value);
  std::string bad = text;
  const std::string key = "value = " + format_rational(cert.value);
  const auto at = bad.find(key);
  ASSERT_NE(at, std::string::npos);
  bad.replace(at, key.size(), "value = " + format_rational(cert.value + 1));
  EXPECT_THROW(load_norm_certificate(bad, s.space, s.blocks), Error);
  EXPECT_THROW(load_norm_certificate(text, BaseSpaceId::c0(), fixture::c0_depth4().blocks), Error);
}

TEST(Certificates, DualCertificateRoundTripAndTamper) {
  const Setting& s = fixture::c0_depth4();
  const SparseVector f = parse_vector("5:1/2,10:-1/3,23:1");
  const DualNormCertificate cert = dual_norm_M(f, s.space, s.blocks);
  const std::string text = format_dual_certificate(cert, f, s.space);
  const LoadedDual back = load_dual_certificate(text, s.space, s.blocks);
  EXPECT_EQ(back.f, f);
  EXPECT_EQ(back.cert.value.lower, cert.value.lower);
  std::string bad = text;
  const std::string key = "lower = " + format_rational(cert.value.lower);
  const auto at = bad.find(key);
  ASSERT_NE(at, std::string::npos);
  bad.replace(at, key.size(), "lower = " + format_rational(cert.value.lower + 1));
  EXPECT_THROW(load_dual_certificate(bad, s.space, s.blocks), Error);
}

TEST(Certificates, MemberFormatRoundTrip) {
  const Setting& s = fixture::c0_depth4();
  for (const char* v : {"5:1/2,10:1/2", "3:1", ""}) {
    const auto m = in_M(parse_vector(v), s.space, s.blocks);
    ASSERT_TRUE(m.has_value());
    const MMember back = parse_member(format_member(*m), s.space, s.blocks);
    EXPECT_EQ(back.functional(), m->functional());
  }
}

TEST(Binary, CampaignsAreDeterministic) {
  const fs::path a = scratch("a.jsonl"), b = scratch("b.jsonl");
  const std::string common = "verify --space lp:2 --lemma L4 --trials 12 --seed 5 ";
  ASSERT_EQ(run(common + "--threads 1 -o " + a.string()), 0);
  ASSERT_EQ(run(common + "--threads 3 -o " + b.string()), 0);
  const std::string ta = slurp(a), tb = slurp(b);
  EXPECT_FALSE(body(ta).empty());
  EXPECT_EQ(body(ta), body(tb));
  ASSERT_EQ(run("verify --space lp:2 --lemma L4 --trials 12 --seed 6 -o " + b.string()), 0);
  EXPECT_NE(body(ta), body(slurp(b)));
}

TEST(Binary, ExitCodes) {
  const fs::path out = scratch("neg.jsonl");
  EXPECT_EQ(run("verify --space lp:2 --lemma L5 --trials 5 --violate-hypothesis -o " + out.string()), 0);
  std::ifstream in(out);
  for (const auto& r : read_jsonl(in)) EXPECT_EQ(r.status, Status::HypothesisFailed);
  EXPECT_EQ(run("params --space lp:1 -o " + scratch("bad.params").string()), 2);
  EXPECT_EQ(run("norm --space c0 --vector 5:oops"), 2);
  EXPECT_EQ(run("norm --space lp:2 --vector 6:1,7:1/2,12:1,13:1/3,30:1 --budget 1"), 3);
}

TEST(Binary, ParamsFileFeedsLaterCommands) {
  const fs::path p = scratch("c0.params"), cert = scratch("c0.norm");
  ASSERT_EQ(run("params --space c0 --depth 3 -o " + p.string()), 0);
  EXPECT_EQ(parse_parameters(slurp(p)).blocks.depth(), 3);
  ASSERT_EQ(run("norm --params " + p.string() + " --vector 5:1/2,10:1/2 -o " + cert.string()), 0);
  EXPECT_EQ(run("norm --params " + p.string() + " --check " + cert.string()), 0);
}
