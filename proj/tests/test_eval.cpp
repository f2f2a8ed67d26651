#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "embench/eval.hpp"

using namespace embench;

namespace {

BenchItem choice(const std::string& id, Task t, const std::string& gold, double snr) {
  BenchItem it;
  it.id = id;
  it.task = t;
  it.options = std::array<std::string, 5>{"w", "x", "y", "z", std::string(kUnableToAnswer)};
  it.gold = gold;
  it.snr_db = snr;
  return it;
}

BenchItem reasoning(const std::string& id, const std::string& ref) {
  BenchItem it;
  it.id = id;
  it.task = Task::Anti_CJ;
  it.gold = ref;
  return it;
}

std::vector<std::string> words(const std::string& s) { return tokenize_text(s); }

}  // namespace

TEST(ExtractChoice, ParsesCommonAnswerShapes) {
  EXPECT_EQ(extract_choice("The answer is B."), 'B');
  EXPECT_EQ(extract_choice("b) QPSK"), 'B');
  EXPECT_EQ(extract_choice("(D)"), 'D');
  EXPECT_EQ(extract_choice("E: Unable to answer"), 'E');
  EXPECT_FALSE(extract_choice("cannot tell"));
  EXPECT_FALSE(extract_choice(""));
}

TEST(RougeL, IdenticalIsOne) {
  const auto s = rouge_l(words("apply notch filtering at the tone"), words("apply notch filtering at the tone"));
  EXPECT_DOUBLE_EQ(s.f1, 1.0);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(s.recall, 1.0);
}

TEST(RougeL, OneSubstitutionInFour) {
  const auto s = rouge_l(words("police kill the gunman"), words("police killed the gunman"));
  EXPECT_DOUBLE_EQ(s.precision, 0.75);
  EXPECT_DOUBLE_EQ(s.recall, 0.75);
  EXPECT_DOUBLE_EQ(s.f1, 0.75);
}

TEST(RougeL, UnequalLengths) {
  // LCS("a b c", "a x b y c z") = 3 -> P = 1, R = 0.5, F = 2/3
  const auto s = rouge_l(words("a b c"), words("a x b y c z"));
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_NEAR(s.f1, 2.0 / 3.0, 1e-15);
}

TEST(RougeL, DisjointAndEmpty) {
  EXPECT_EQ(rouge_l(words("alpha beta"), words("gamma delta")).f1, 0.0);
  EXPECT_EQ(rouge_l({}, words("gamma delta")).f1, 0.0);
  EXPECT_THROW(rouge_l(words("a"), {}), Error);
}

TEST(RougeL, WhitespaceAndCaseInvariant) {
  EXPECT_EQ(words("Use  frequency hopping.  \n"), words("use frequency hopping"));
  EXPECT_DOUBLE_EQ(rouge_l(words("Use frequency hopping.\n"), words("use frequency hopping")).f1, 1.0);
}

TEST(Bleu, IdenticalIsOne) {
  const auto t = words("one two three four five six seven eight nine ten");
  EXPECT_NEAR(bleu(t, t), 1.0, 1e-12);
}

TEST(Bleu, BrevityPenaltyForShortCandidate) {
  // every n-gram matches, so the score is the brevity penalty exp(1 - 6/4)
  EXPECT_NEAR(bleu(words("the cat sat on"), words("the cat sat on the mat")), std::exp(-0.5), 1e-12);
}

TEST(Bleu, SmoothedHigherOrders) {
  // p1 = 1/4, then zero matches smoothed to 1/(3+1), 1/(2+1), 1/(1+1)
  const double expect = std::pow(0.25 * 0.25 * (1.0 / 3.0) * 0.5, 0.25);
  EXPECT_NEAR(bleu(words("a b c d"), words("a x y z")), expect, 1e-12);
}

TEST(Bleu, ClipsRepeatedUnigrams) {
  // "the the the the" against "the cat": unigram match clipped to 1 of 4; BP = 1
  const double expect = std::pow(0.25 * 0.25 * (1.0 / 3.0) * 0.5, 0.25);
  EXPECT_NEAR(bleu(words("the the the the"), words("the cat")), expect, 1e-12);
}

TEST(Bleu, DegenerateInputs) {
  EXPECT_EQ(bleu({}, words("a b")), 0.0);
  EXPECT_EQ(bleu(words("x y"), words("a b")), 0.0);
  EXPECT_THROW(bleu(words("a"), {}), Error);
  EXPECT_THROW(bleu(words("a"), words("a"), 0), Error);
}

TEST(Evaluate, AllGoldScoresOne) {
  std::vector<BenchItem> items = {choice("a", Task::MOD, "A", -15), choice("b", Task::MOD, "C", 5),
                                  choice("c", Task::PE_PW, "D", 0), reasoning("r", "apply notch filtering")};
  std::map<std::string, std::string> resp = {{"a", "A"}, {"b", "The answer is C"}, {"c", "D) 5 µs"},
                                             {"r", "apply notch filtering"}};
  const auto rep = evaluate(items, resp);
  EXPECT_DOUBLE_EQ(rep.tasks.at("MOD").accuracy, 1.0);
  EXPECT_DOUBLE_EQ(rep.tasks.at("PE.PW").accuracy, 1.0);
  EXPECT_DOUBLE_EQ(rep.tasks.at("Anti-CJ").rouge_l_f, 1.0);
  // no 4-grams in a 3-token reference: the smoothed precision is 1/(0+1)
  EXPECT_NEAR(rep.tasks.at("Anti-CJ").bleu, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(rep.perception_macro_avg, 1.0);
}

TEST(Evaluate, UnableToAnswerScoresZero) {
  std::vector<BenchItem> items = {choice("a", Task::MOD, "A", -15), choice("b", Task::MOD, "B", 5)};
  const auto rep = evaluate(items, {{"a", "E"}, {"b", "E) Unable to answer"}});
  EXPECT_EQ(rep.tasks.at("MOD").accuracy, 0.0);
}

TEST(Evaluate, MacroAverageIsMeanOfTasks) {
  std::vector<BenchItem> items = {choice("a", Task::MOD, "A", -15), choice("b", Task::MOD, "B", -15),
                                  choice("c", Task::MOD, "C", 5), choice("d", Task::MOD, "D", 5),
                                  choice("e", Task::SD, "A", 0), choice("f", Task::SD, "B", 0)};
  const auto rep = evaluate(items, {{"a", "A"}, {"b", "B"}, {"c", "C"}, {"d", "A"}, {"e", "A"}, {"f", "A"}});
  EXPECT_DOUBLE_EQ(rep.tasks.at("MOD").accuracy, 0.75);
  EXPECT_DOUBLE_EQ(rep.tasks.at("SD").accuracy, 0.5);
  EXPECT_DOUBLE_EQ(rep.perception_macro_avg, 0.625);
  // -15 dB bin is perfect, +5 dB bin is half right
  for (const auto& r : rep.snr_bins) {
    if (r.task != "MOD") continue;
    if (r.snr_lo == -15.0) {
      EXPECT_EQ(r.accuracy, 1.0);
    } else if (r.snr_lo == 5.0) {
      EXPECT_EQ(r.accuracy, 0.5);
    } else {
      EXPECT_EQ(r.n, 0u);
    }
  }
}

TEST(Evaluate, MissingResponsesAreListed) {
  std::vector<BenchItem> items = {choice("a", Task::MOD, "A", 0), choice("q-17", Task::MOD, "B", 0)};
  try {
    evaluate(items, {{"a", "A"}});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("q-17"), std::string::npos);
  }
}

TEST(Evaluate, ReportIsReproducible) {
  std::vector<BenchItem> items = {choice("a", Task::MOD, "A", -15), reasoning("r", "use spread spectrum")};
  const std::map<std::string, std::string> resp = {{"a", "B"}, {"r", "use frequency hopping spread spectrum"}};
  EXPECT_EQ(evaluate(items, resp).to_json().dump(), evaluate(items, resp).to_json().dump());
  EXPECT_EQ(evaluate(items, resp).snr_csv(), evaluate(items, resp).snr_csv());
}

TEST(ReadResponses, ParsesJsonlAndRejectsGarbage) {
  const auto dir = fs::temp_directory_path() / "embench_test_eval";
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "ok.jsonl");
    os << R"({"id":"a","text":"B"})" << "\n\n" << R"({"id":"b","text":"x"})" << "\n";
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{not json\n";
  }
  const auto r = read_responses(dir / "ok.jsonl");
  EXPECT_EQ(r.size(), 2u);
  EXPECT_EQ(r.at("a"), "B");
  EXPECT_THROW(read_responses(dir / "bad.jsonl"), Error);
  EXPECT_THROW(read_responses(dir / "missing.jsonl"), Error);
  fs::remove_all(dir);
}
