#include "dysmooth/cli.hpp"
#include "dysmooth/error.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dysmooth;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dysmooth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(LevelRangeParse, Forms) {
  EXPECT_EQ(parse_level_range("2..10").lo, 2);
  EXPECT_EQ(parse_level_range("2..10").hi, 10);
  EXPECT_EQ(parse_level_range("7").hi, 7);
  EXPECT_THROW(parse_level_range("5..2"), Error);
  EXPECT_THROW(parse_level_range("a..b"), Error);
}

TEST(Cli, AnalyzeKinkFitsAlphaOne) {
  const auto run = invoke({"analyze", "--function", "abs-power", "--axis", "1", "--center", "0.5", "--alpha", "1",
                           "--d", "1", "--r", "2", "--n", "2..10"});
  ASSERT_EQ(run.status, 0) << run.err;
  const auto doc = nlohmann::json::parse(run.out);
  EXPECT_NEAR(doc["result"]["fit"]["alpha"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(doc["result"]["saturation"]["class"], "below-saturation");
  EXPECT_EQ(doc["config"]["seed"], 1);
  EXPECT_EQ(doc["flags"]["weighting"], "theorem");
  EXPECT_TRUE(doc.contains("version"));
}

TEST(Cli, CertifyRows) {
  const auto run = invoke({"certify", "--r", "2..12"});
  ASSERT_EQ(run.status, 0) << run.err;
  const auto doc = nlohmann::json::parse(run.out);
  const auto& rows = doc["result"];
  ASSERT_EQ(rows.size(), 11u);
  for (const auto& row : rows) {
    EXPECT_EQ(row["status"], "pass");
    EXPECT_EQ(row["det_abs"], row["expected_pow2"]);
    EXPECT_EQ(row["c_dd"].size(), 3u);
  }
  EXPECT_EQ(rows[0]["inv_inf_norm"], "1/2");
}

TEST(Cli, BadInputLengthExitsTwo) {
  const auto path = temp_file("dysmooth_bad.json",
                              R"({"dimension":1,"level":3,"order":"lex-last-fastest","values":[0,1,2]})");
  const auto run = invoke({"analyze", "--input", path.string(), "--r", "2", "--n", "1..3"});
  std::filesystem::remove(path);
  EXPECT_EQ(run.status, 2);
  EXPECT_TRUE(run.out.empty());
  ASSERT_EQ(std::count(run.err.begin(), run.err.end(), '\n'), 1);
  const auto err = nlohmann::json::parse(run.err);
  EXPECT_EQ(err["error"]["kind"], "validation");
  EXPECT_NE(err["error"]["message"].get<std::string>().find("expected 9"), std::string::npos);
}

TEST(Cli, ExitStatuses) {
  EXPECT_EQ(invoke({"analyze", "--function", "diag-bilinear", "--d", "5", "--n", "1..2"}).status, 3);
  EXPECT_EQ(invoke({"analyze", "--function", "nope", "--n", "1..2"}).status, 2);
  EXPECT_EQ(invoke({"analyze", "--function", "abs-power", "--input", "x.json", "--n", "1..2"}).status, 2);
  EXPECT_EQ(invoke({"certify", "--r", "2..41"}).status, 3);
  EXPECT_EQ(invoke({"frobnicate"}).status, 2);
  EXPECT_EQ(invoke({"cascade", "--function", "abs-power", "--n", "2", "--u", "0.5", "--t", "0.3"}).status, 2);
  EXPECT_EQ(invoke({"--help"}).status, 0);
}

TEST(Cli, InputRoundTripMatchesFunction) {
  const auto a = invoke({"analyze", "--function", "radial-power", "--d", "2", "--center", "0.3,0.6", "--alpha", "0.5",
                         "--r", "2", "--n", "2..6", "--format", "csv"});
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "n,psi,psi_scaled_2^(nr),psi_axis1,psi_axis2");
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 6);
}

TEST(Cli, SvgChart) {
  const auto run = invoke({"analyze", "--function", "abs-power", "--alpha", "1.5", "--r", "2", "--n", "2..9", "--format", "svg"});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_EQ(run.out.rfind("<svg", 0), 0u);
  EXPECT_NE(run.out.find("<polyline"), std::string::npos);
  EXPECT_NE(run.out.find("alpha = 1.5"), std::string::npos);
}

TEST(Cli, CascadeReport) {
  const auto run = invoke({"cascade", "--function", "abs-power", "--d", "2", "--center", "0.3", "--r", "2", "--n", "3",
                           "--u", "0.2,0.7", "--i", "1", "--t", "0.05", "--stages", "4"});
  ASSERT_EQ(run.status, 0) << run.err;
  const auto doc = nlohmann::json::parse(run.out);
  EXPECT_EQ(doc["result"]["stages"].size(), 5u);
  EXPECT_TRUE(doc["result"]["margins_nonnegative"].get<bool>());
  EXPECT_TRUE(doc["result"]["stage0_annihilated"].get<bool>());
}

TEST(Cli, OutputFileAndDeterminism) {
  const auto path = std::filesystem::temp_directory_path() / "dysmooth_verify_out.json";
  const std::vector<std::string> args{"verify", "--function", "diag-bilinear", "--d", "2", "--r", "2", "--n", "2..3",
                                      "--dirs", "16", "--base-res", "16", "--dir-res", "16", "--seed", "9",
                                      "--out", path.string()};
  ASSERT_EQ(invoke(args).status, 0);
  std::stringstream first;
  first << std::ifstream(path).rdbuf();
  ASSERT_EQ(invoke(args).status, 0);
  std::stringstream second;
  second << std::ifstream(path).rdbuf();
  std::filesystem::remove(path);
  EXPECT_FALSE(first.str().empty());
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(nlohmann::json::parse(first.str())["config"]["seed"], 9);
}
