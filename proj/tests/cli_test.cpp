#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <sublyap/cli.hpp>

using namespace sublyap;
using nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

ordered_json run_json(std::vector<std::string> args) {
  const auto r = run(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return ordered_json::parse(r.out);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

const double log_sqrt2 = 0.5 * std::log(2.0);

}  // namespace

TEST(CliAnalyze, ThueMorse) {
  const auto j = run_json({"analyze", "a->ab;b->ba"});
  EXPECT_EQ(j["schema_version"], "1");
  EXPECT_EQ(j["units"], "nats");
  const auto& r = j["report"];
  EXPECT_EQ(r["verdict"], "NoACComponent");
  EXPECT_NEAR(r["exponents_closed"]["chi_min"].get<double>(), log_sqrt2, 1e-11);
  EXPECT_FALSE(j.contains("timing_ms"));
}

TEST(CliAnalyze, DegenerateIsNotAnError) {
  const auto j = run_json({"analyze", "a->ab;b->ab"});
  EXPECT_EQ(j["report"]["verdict"], "PeriodicDegenerate");
}

TEST(CliAnalyze, InputErrorsExitTwo) {
  const auto r = run({"analyze", "a->ab;b->b"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("LengthMismatch"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  EXPECT_EQ(run({"analyze", "a->ab;b->bb"}).code, 2);
  EXPECT_EQ(run({"analyze"}).code, 2);
  EXPECT_EQ(run({"analyze", "a->ab;b->ba", "--bogus"}).code, 2);
  EXPECT_EQ(run({"analyze", "a->ab;b->ba", "--pairing", "a:b"}).code, 2);
  EXPECT_EQ(run({"analyze", "a->ab;b->ba", "--numeric", "--samples", "0"}).code, 2);
  EXPECT_EQ(run({"analyze", "a->ab;b->ba", "--json", "--text"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliAnalyze, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}

TEST(CliAnalyze, RudinShapiroPairing) {
  const auto j = run_json({"analyze", "a->ab;b->aB;B->Ab;A->AB", "--pairing", "a:A,b:B", "--iters", "500",
                           "--samples", "10"});
  const auto& r = j["report"];
  EXPECT_EQ(r["verdict"], "Inconclusive");
  ASSERT_EQ(r["blocks"].size(), 2u);
  EXPECT_NEAR(r["blocks"][1]["exponents"]["chi_max"].get<double>(), 0.0, 1e-8);
}

TEST(CliAnalyze, FileInput) {
  const auto path = std::filesystem::temp_directory_path() / "sublyap_cli_test_rules.json";
  {
    std::ofstream f(path);
    f << R"({"rules": {"a": "ab", "b": "ba"}})";
  }
  const auto from_file = run({"analyze", "--file", path.string()});
  const auto inline_rules = run({"analyze", "a->ab;b->ba"});
  std::filesystem::remove(path);
  EXPECT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, inline_rules.out);
  EXPECT_EQ(run({"analyze", "--file", path.string()}).code, 2);
}

TEST(CliAnalyze, DeterministicOutput) {
  const std::vector<std::string> args{"analyze", "a->abbab;b->baaba", "--numeric", "--iters", "400",
                                      "--samples", "20", "--seed", "7"};
  EXPECT_EQ(run(args).out, run(args).out);
  auto other = args;
  other.back() = "8";
  EXPECT_NE(run(args).out, run(other).out);
}

TEST(CliAnalyze, TextAndJsonAgree) {
  const std::vector<std::string> base{"analyze", "a->abbab;b->baaba", "--numeric", "--iters", "300", "--samples", "10"};
  auto text_args = base;
  text_args.push_back("--text");
  const auto j = run_json(base);
  const auto text = run(text_args);
  ASSERT_EQ(text.code, 0);
  std::map<std::string, std::string> fields;
  for (const auto& line : lines(text.out)) {
    const auto pos = line.find(": ");
    ASSERT_NE(pos, std::string::npos) << line;
    fields[line.substr(0, pos)] = line.substr(pos + 2);
  }
  const std::vector<std::string> keys{"chi_min", "chi_max"};
  for (const char* group : {"exponents_closed", "exponents_numeric"})
    for (const auto& key : keys) {
      const auto path = std::string("report.") + group + "." + key;
      ASSERT_TRUE(fields.count(path)) << path;
      EXPECT_EQ(std::stod(fields[path]), j["report"][group][key].get<double>()) << path;
    }
  EXPECT_EQ(std::stod(fields["report.mahler.value"]), j["report"]["mahler"]["value"].get<double>());
  EXPECT_EQ(fields["report.verdict"], j["report"]["verdict"].get<std::string>());
}

TEST(CliAnalyze, JsonRoundTrip) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"analyze", "a->ab;b->ba"},
           {"analyze", "a->abbab;b->baaba", "--numeric", "--iters", "300", "--samples", "10"},
           {"analyze", "a->ab;b->aa", "--bits"},
           {"analyze", "a->ab;b->ab"},
           {"analyze", "a->ab;b->aB;B->Ab;A->AB", "--pairing", "a:A,b:B", "--iters", "200", "--samples", "5"}}) {
    const auto j = run_json(args);
    const auto again = to_json(document_from_json(j));
    EXPECT_EQ(again.dump(), j.dump()) << args[1];
  }
}

TEST(CliAnalyze, UnknownFieldsIgnored) {
  auto j = run_json({"analyze", "a->ab;b->ba"});
  const auto expected = j.dump();
  j["future"] = {{"x", 1}};
  j["report"]["something_new"] = "ignored";
  EXPECT_EQ(to_json(document_from_json(j)).dump(), expected);
}

TEST(CliAnalyze, BitsScaling) {
  const auto nats = run_json({"analyze", "a->abbab;b->baaba"});
  const auto bits = run_json({"analyze", "a->abbab;b->baaba", "--bits"});
  EXPECT_EQ(bits["units"], "bits");
  const double n = nats["report"]["exponents_closed"]["chi_min"].get<double>();
  const double b = bits["report"]["exponents_closed"]["chi_min"].get<double>();
  EXPECT_NEAR(b, n / std::log(2.0), 1e-10);
  EXPECT_NEAR(bits["report"]["mahler"]["value"].get<double>(),
              nats["report"]["mahler"]["value"].get<double>() / std::log(2.0), 1e-10);
}

TEST(CliAnalyze, TwelveSignificantDigits) {
  const auto r = run({"analyze", "a->abbab;b->baaba"});
  EXPECT_NE(r.out.find("0.226273571962"), std::string::npos);
}

TEST(CliAnalyze, TimingIsOptIn) {
  const auto j = run_json({"analyze", "a->ab;b->ba", "--timing"});
  ASSERT_TRUE(j.contains("timing_ms"));
  EXPECT_TRUE(j["timing_ms"].contains("classify"));
}

TEST(CliMahler, Examples) {
  const auto lit = run_json({"mahler", "--coeffs", "-1,-1,1,-1"});
  EXPECT_NEAR(lit["value"].get<double>(), 0.609377863436006, 1e-11);
  EXPECT_NEAR(lit["quadrature_value"].get<double>(), 0.609377863436006, 1e-8);
  EXPECT_FALSE(lit["kronecker"].get<bool>());
  EXPECT_EQ(lit["roots"].size(), 3u);

  const auto tm = run_json({"mahler", "--coeffs", "1,-1"});
  EXPECT_EQ(tm["value"].get<double>(), 0.0);
  EXPECT_TRUE(tm["kronecker"].get<bool>());
}

TEST(CliMahler, Errors) {
  EXPECT_EQ(run({"mahler", "--coeffs", "0"}).code, 2);
  EXPECT_EQ(run({"mahler", "--coeffs", "0,0"}).code, 2);
  EXPECT_EQ(run({"mahler", "--coeffs", "1,x"}).code, 2);
  EXPECT_EQ(run({"mahler"}).code, 2);
}

TEST(CliScan, LengthTwo) {
  const auto r = run({"scan", "--length", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 6u);  // header, four rows, summary
  const auto header = split(rows[0]);
  const auto chi_col = std::find(header.begin(), header.end(), "chi_min") - header.begin();
  for (std::size_t i = 1; i + 1 < rows.size(); ++i)
    EXPECT_NEAR(std::stod(split(rows[i])[chi_col]), log_sqrt2, 1e-11) << rows[i];
  EXPECT_EQ(split(rows.back())[0], "\"summary\"");
}

TEST(CliScan, LengthFiveContainsExample) {
  const auto r = run({"scan", "--length", "5", "--format", "jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 481u);
  bool found = false;
  for (const auto& line : rows) {
    const auto j = ordered_json::parse(line);
    if (j.contains("rules") && j["rules"] == "a->abbab;b->baaba") {
      found = true;
      EXPECT_NEAR(j["chi_min"].get<double>(), 0.226273571961784, 1e-11);
    }
  }
  EXPECT_TRUE(found);
  const auto summary = ordered_json::parse(rows.back());
  EXPECT_EQ(summary["admissible"], 930);
  EXPECT_TRUE(summary["all_positive"].get<bool>());
}

TEST(CliScan, Errors) {
  EXPECT_EQ(run({"scan", "--length", "7"}).code, 2);
  EXPECT_EQ(run({"scan", "--length", "1"}).code, 2);
  EXPECT_EQ(run({"scan", "--length", "3", "--format", "xml"}).code, 2);
}

TEST(CliTrace, ThueMorse) {
  // One orbit wanders by a few hundredths at n = 2000; the median over seeds sits on log sqrt 2.
  std::vector<double> finals;
  for (int seed = 1; seed <= 9; ++seed) {
    const auto r = run({"trace", "a->ab;b->ba", "--k", "random", "--iters", "2000", "--seed", std::to_string(seed)});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows[0], "n,birkhoff_logdet,chi_min,chi_max");
    const auto last = split(rows.back());
    EXPECT_EQ(last[0], "2000");
    EXPECT_LE(std::stod(last[2]), std::stod(last[3]) + 1e-12);
    finals.push_back(std::stod(last[2]));
  }
  std::nth_element(finals.begin(), finals.begin() + 4, finals.end());
  EXPECT_NEAR(finals[4], log_sqrt2, 5e-3);
}

TEST(CliTrace, BirkhoffColumnTracksMahlerMeasure) {
  // log|det B| = log|Q - R|, so the running Birkhoff column converges to m(Q - R).
  const auto r = run({"trace", "a->abbab;b->baaba", "--k", "random", "--iters", "5000", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto last = split(lines(r.out).back());
  EXPECT_NEAR(std::stod(last[1]), 0.578445384255266, 3e-2);
}

TEST(CliTrace, Deterministic) {
  const std::vector<std::string> args{"trace", "a->ab;b->aa", "--k", "random", "--iters", "500", "--seed", "11"};
  EXPECT_EQ(run(args).out, run(args).out);
  const auto fixed = run({"trace", "a->ab;b->aa", "--k", "0.3", "--iters", "100"});
  EXPECT_EQ(fixed.code, 0) << fixed.err;
}

TEST(CliTrace, Errors) {
  EXPECT_EQ(run({"trace", "a->ab;b->ab", "--k", "random", "--iters", "100"}).code, 2);
  EXPECT_EQ(run({"trace", "a->ab;b->ba", "--k", "abc", "--iters", "100"}).code, 2);
  EXPECT_EQ(run({"trace", "a->ab;b->ba", "--iters", "100"}).code, 2);
  EXPECT_EQ(run({"trace", "a->ab;b->ba;c->cc", "--k", "0.1", "--iters", "100"}).code, 2);
}
