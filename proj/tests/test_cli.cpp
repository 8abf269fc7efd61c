#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hjet/cli.hpp"

using namespace hjet;
using nlohmann::json;

namespace {

const std::string kProblems = HJET_PROBLEMS_DIR;

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return kProblems + "/" + name + ".json"; }

json strip_timing(json r) {
  r.erase("timing_ms");
  return r;
}

const char* kContact = R"({
  "schema": "hjet-problem/1",
  "dim": 3,
  "coframe": [["-y2", "0", "1"]],
  "base_point": ["0", "0", "0"],
  "curve": {"t0": "1/2", "components": [["0", "1"], ["0", "1"], ["0", "0", "1/2"]]}
})";

}  // namespace

TEST(ParseProblem, Contact) {
  Problem p = parse_problem(kContact);
  EXPECT_EQ(p.dim, 3u);
  ASSERT_EQ(p.coframe.size(), 1u);
  ASSERT_TRUE(p.curve.has_value());
  EXPECT_EQ(p.t0, Rational(1, 2));
  EXPECT_EQ(p.curve->at(Rational(2)), (QVector{2, 2, 2}));
  EXPECT_EQ(p.distribution().rank(), 2u);
  EXPECT_FALSE(p.first_jet.has_value());
}

TEST(ParseProblem, SyntaxErrorHasLineAndColumn) {
  try {
    parse_problem("{\n  \"schema\": \"hjet-problem/1\",\n  \"dim\": 3,,\n}");
    FAIL();
  } catch (const ProblemError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 12u);
    EXPECT_TRUE(e.path().empty());
  }
}

TEST(ParseProblem, SemanticErrorsHavePaths) {
  auto path_of = [](const std::string& text) {
    try {
      parse_problem(text);
    } catch (const ProblemError& e) {
      return e.path();
    }
    return std::string("no error");
  };
  json base = json::parse(kContact);
  json bad = base;
  bad["schema"] = "hjet-problem/2";
  EXPECT_EQ(path_of(bad.dump()), "/schema");
  bad = base;
  bad["coframe"][0][1] = "y2 +* 1";
  EXPECT_EQ(path_of(bad.dump()), "/coframe/0/1");
  bad = base;
  bad["base_point"] = {"0", "0"};
  EXPECT_EQ(path_of(bad.dump()), "/base_point");
  bad = base;
  bad["base_point"][2] = "1/0";
  EXPECT_EQ(path_of(bad.dump()), "/base_point/2");
  bad = base;
  bad["curve"]["components"][1] = "t";
  EXPECT_EQ(path_of(bad.dump()), "/curve/components/1");
  bad = base;
  bad.erase("dim");
  EXPECT_EQ(path_of(bad.dump()), "");

  bad = base;
  bad["coframe"][0][0] = "y1 + y9";
  try {
    parse_problem(bad.dump());
    FAIL();
  } catch (const ProblemError& e) {
    EXPECT_EQ(e.path(), "/coframe/0/0");
    EXPECT_EQ(e.line(), 0u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Cli, FlagExamples) {
  Outcome r = run({"flag", problem("contact")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.report()["result"]["growth"], "0,2,3");
  r = run({"flag", problem("engel")});
  EXPECT_EQ(r.report()["result"]["growth"], "0,2,3,4");
  r = run({"flag", problem("flat")});
  EXPECT_EQ(r.code, kExitVerdict);
  EXPECT_EQ(r.report()["result"]["verdict"], "not bracket-generating within max_step");
}

TEST(Cli, WcheckExamples) {
  Outcome r = run({"wcheck", problem("contact"), "--q", "0"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.report()["result"]["rank"], 2);
  r = run({"wcheck", problem("contact_stationary")});
  EXPECT_EQ(r.code, kExitVerdict);
  EXPECT_EQ(r.report()["result"]["reason"], "injectivity");
  r = run({"wcheck", problem("flat")});
  EXPECT_EQ(r.code, kExitVerdict);
  EXPECT_EQ(r.report()["result"]["reason"], "rank");
  r = run({"wcheck", problem("toy")});
  EXPECT_EQ(r.code, kExitPrecondition);
  r = run({"wcheck", problem("engel"), "--q", "1", "--alpha", "1"});
  EXPECT_EQ(r.code, kExitPrecondition);
  r = run({"wcheck", problem("engel"), "--q", "1", "--alpha", "2"});
  EXPECT_EQ(r.code, kExitOk);
}

TEST(Cli, InvertExamples) {
  Outcome r = run({"invert", problem("contact"), "--degree", "3"});
  EXPECT_EQ(r.code, kExitOk);
  const json res = r.report()["result"];
  EXPECT_TRUE(res["identity_verified"].get<bool>());
  EXPECT_EQ(res["residuals"].size(), 4u);
  for (const auto& x : res["residuals"])
    for (const auto& v : x["residual"]) EXPECT_EQ(v, "0");
  r = run({"invert", problem("flat")});
  EXPECT_EQ(r.code, kExitVerdict);
  EXPECT_NE(r.report()["error"]["message"].get<std::string>().find("not W-regular"), std::string::npos);
  r = run({"invert", problem("plane")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.report()["result"]["identity_verified"].get<bool>());
}

TEST(Cli, ScheduleExamples) {
  EXPECT_EQ(run({"schedule", "--growth", "0,10,12,14", "--K", "1"}).report()["result"]["q"], 46);
  EXPECT_EQ(run({"schedule", "--growth", "0,2,3"}).report()["result"]["q"], 1);
  EXPECT_EQ(run({"schedule", "--growth", "0,2,3,4"}).report()["result"]["q"], 6);
  const json toy = run({"schedule", "--growth", "0,10,12,14"}).report()["result"];
  EXPECT_EQ(toy["table"].size(), 13u);
  EXPECT_EQ(run({"schedule", "--growth", "0,2,x"}).code, kExitParse);
  EXPECT_EQ(run({"schedule"}).code, kExitParse);
}

TEST(Cli, CertifyExamples) {
  Outcome r = run({"certify", problem("engel"), "--K", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json res = r.report()["result"];
  EXPECT_TRUE(res["levels"][0]["C_tilde_ok"].get<bool>());
  EXPECT_EQ(res["levels"][0]["C_size"], 3);
  EXPECT_TRUE(res["regular_at_witness"].get<bool>());

  r = run({"certify", problem("contact"), "--K", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  res = r.report()["result"];
  EXPECT_EQ(res["levels"].size(), 2u);
  EXPECT_TRUE(res["fresh_variables"].get<bool>());

  r = run({"certify", problem("flat")});
  EXPECT_EQ(r.code, kExitPrecondition);
  EXPECT_EQ(r.report()["error"]["stage"], "flag");
}

TEST(Cli, ParseFailures) {
  EXPECT_EQ(run({}).code, kExitParse);
  EXPECT_EQ(run({"nonsense"}).code, kExitParse);
  EXPECT_EQ(run({"flag"}).code, kExitParse);
  EXPECT_EQ(run({"flag", problem("contact"), "--format", "xml"}).code, kExitParse);
  EXPECT_EQ(run({"flag", problem("contact"), "--q", "x"}).code, kExitParse);
  Outcome r = run({"flag", kProblems + "/missing.json"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_EQ(r.report()["error"]["stage"], "parse");
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, ReportsRoundTripAndValidate) {
  const std::vector<std::vector<std::string>> cases = {
      {"flag", problem("engel")},
      {"flag", problem("flat")},
      {"wcheck", problem("contact")},
      {"invert", problem("engel"), "--q", "1"},
      {"invert", problem("flat")},
      {"schedule", "--growth", "0,10,12,14", "--K", "2"},
      {"certify", problem("toy")},
  };
  for (const auto& args : cases) {
    Outcome r = run(args);
    const json report = r.report();
    EXPECT_EQ(validate_report(report), "") << args[0];
    EXPECT_EQ(report["exit_code"], r.code);
    EXPECT_EQ(json::parse(report.dump()), report);
  }
  json broken = run({"flag", problem("contact")}).report();
  broken["ok"] = false;
  EXPECT_NE(validate_report(broken), "");
  broken.erase("schema");
  EXPECT_NE(validate_report(broken), "");
}

TEST(Cli, ReproducibleModuloTiming) {
  for (const std::string seed : {"0", "7"}) {
    const json a = strip_timing(run({"certify", problem("engel"), "--K", "2", "--seed", seed}).report());
    const json b = strip_timing(run({"certify", problem("engel"), "--K", "2", "--seed", seed}).report());
    EXPECT_EQ(a.dump(), b.dump());
  }
  const json s0 = run({"certify", problem("toy"), "--seed", "1"}).report();
  const json s1 = run({"certify", problem("toy"), "--seed", "2"}).report();
  EXPECT_NE(s0["result"]["point"], s1["result"]["point"]);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("HJET_SEED", "11", 1);
  const json env = run({"certify", problem("toy")}).report();
  ::unsetenv("HJET_SEED");
  const json flag = run({"certify", problem("toy"), "--seed", "11"}).report();
  EXPECT_EQ(env["seed"], 11);
  EXPECT_EQ(env["result"], flag["result"]);
  EXPECT_EQ(run({"certify", problem("toy")}).report()["seed"], 0);
}

TEST(Cli, OutAndTextFormat) {
  const std::string path = ::testing::TempDir() + "hjet_report.json";
  Outcome r = run({"flag", problem("contact"), "--out", path});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  EXPECT_EQ(validate_report(json::parse(buf.str())), "");
  std::remove(path.c_str());

  r = run({"flag", problem("contact"), "--format", "text"});
  EXPECT_NE(r.out.find("result.growth: 0,2,3\n"), std::string::npos);
}
