#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("embench_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Result run(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(EMBENCH_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST(Cli, SmokePipelineRunsEndToEnd) {
  const fs::path d = scratch("smoke");
  const std::string o = " --out " + d.string() + "/";
  auto step = [&](const std::string& args) {
    const Result r = run(d, args);
    EXPECT_EQ(r.code, 0) << args << "\n" << r.err;
    return r;
  };
  step("corpus --tasks MOD --per-task 40" + o + "corpus");
  step("kd --tasks MOD --pairs 40 --corpus " + d.string() + "/corpus" + o + "kd");
  step("bench --tasks MOD,Anti-CJ --per-task 16" + o + "bench");
  step("train --corpus " + d.string() + "/corpus --epochs 1 --set train.batch=16" + o + "train");
  step("distill --kd " + d.string() + "/kd --teacher " + d.string() + "/train/model.ckpt --epochs 1" + o + "distill");
  step("respond --bench " + d.string() + "/bench --model " + d.string() + "/distill/model.ckpt" + o + "respond");
  step("respond --gold --bench " + d.string() + "/bench" + o + "gold");
  step("eval --bench " + d.string() + "/bench --responses " + d.string() + "/respond/responses.jsonl" + o + "eval");
  step("eval --bench " + d.string() + "/bench --responses " + d.string() + "/gold/responses.jsonl" + o + "eval_gold");
  step("analyze --model " + d.string() + "/distill/model.ckpt --data " + d.string() + "/kd" + o + "analyze");

  for (const char* f : {"corpus/corpus.jsonl", "train/model.ckpt", "train/train_log.csv", "distill/distill_log.csv",
                        "eval/report.json", "eval/snr_accuracy.csv", "analyze/separability.csv",
                        "analyze/interpolation.csv"}) {
    EXPECT_TRUE(fs::exists(d / f)) << f;
  }
  const auto gold = nlohmann::json::parse(slurp(d / "eval_gold/report.json"));
  EXPECT_DOUBLE_EQ(gold.at("perception_macro_avg").get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(gold.at("tasks").at("Anti-CJ").at("rouge_l_f").get<double>(), 1.0);
  const auto model = nlohmann::json::parse(slurp(d / "eval/report.json"));
  EXPECT_EQ(model.at("tasks").at("MOD").at("n"), 16);
  fs::remove_all(d);
}

TEST(Cli, CompletedRunIsSkipped) {
  const fs::path d = scratch("rerun");
  const std::string args = "corpus --tasks MOD --per-task 5 --out " + d.string() + "/c";
  ASSERT_EQ(run(d, args).code, 0);
  const auto stamp = fs::last_write_time(d / "c/corpus.jsonl");
  const Result again = run(d, args);
  EXPECT_EQ(again.code, 0);
  EXPECT_NE(again.out.find("up to date"), std::string::npos) << again.out;
  EXPECT_EQ(fs::last_write_time(d / "c/corpus.jsonl"), stamp);
  // a changed setting reruns
  EXPECT_EQ(run(d, args + " --seed 9").out.find("up to date"), std::string::npos);
  fs::remove_all(d);
}

TEST(Cli, SameSeedSameHashAcrossWorkers) {
  const fs::path d = scratch("det");
  const Result a = run(d, "bench --tasks MOD,PE.PW --per-task 16 --workers 1 --out " + d.string() + "/a");
  const Result b = run(d, "bench --tasks MOD,PE.PW --per-task 16 --workers 4 --out " + d.string() + "/b");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(nlohmann::json::parse(a.out).at("content_sha256"), nlohmann::json::parse(b.out).at("content_sha256"));
  EXPECT_EQ(slurp(d / "a/bench.jsonl"), slurp(d / "b/bench.jsonl"));
  fs::remove_all(d);
}

TEST(Cli, ErrorsMapToExitCodes) {
  const fs::path d = scratch("errors");
  const Result unknown = run(d, "corpus --set corpus.bogus=1 --out " + d.string() + "/x");
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("corpus.bogus"), std::string::npos) << unknown.err;
  EXPECT_EQ(nlohmann::json::parse(unknown.err).at("error"), "config");

  EXPECT_EQ(run(d, "frobnicate").code, 2);
  EXPECT_EQ(run(d, "corpus --set corpus.total=abc --out " + d.string() + "/y").code, 2);

  const Result missing = run(d, "distill --kd " + d.string() + "/nope --teacher " + d.string() +
                                    "/nope.ckpt --out " + d.string() + "/z");
  EXPECT_EQ(missing.code, 3) << missing.err;
  EXPECT_EQ(nlohmann::json::parse(missing.err).at("error"), "data");
  fs::remove_all(d);
}

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path d = scratch("ini");
  {
    std::ofstream ini(d / "run.ini");
    ini << "seed = 4\n[corpus]\ntasks = MOD\nper_task = 3\n";
  }
  const Result r = run(d, "corpus --config " + (d / "run.ini").string() + " --set corpus.per_task=6 --out " +
                              d.string() + "/c");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("total"), 6);
  const std::string echo = slurp(d / "c/config.ini");
  EXPECT_NE(echo.find("per_task = 6"), std::string::npos) << echo;
  EXPECT_NE(echo.find("seed = 4"), std::string::npos) << echo;
  fs::remove_all(d);
}
