#include <cmath>
#include <numeric>

#include "doctest.h"
#include "presgauge/error.hpp"
#include "presgauge/rewards.hpp"
#include "support.hpp"

using namespace presgauge;

namespace {

const std::string kGood =
    "<think>weighing the evidence</think>\n<answer>8.50</answer>";

}  // namespace

TEST_SUITE("rewards") {

TEST_CASE("tag parsing accepts exactly one ordered pair of blocks") {
  ParsedResponse p = parse_tagged(kGood);
  CHECK(p.well_formed);
  CHECK(p.think == "weighing the evidence");
  CHECK(p.answer == "8.50");

  CHECK(!parse_tagged("<answer>5</answer><think>x</think>").well_formed);  // order
  CHECK(!parse_tagged("<think>a</think><think>b</think><answer>5</answer>").well_formed);
  CHECK(!parse_tagged("preamble <think>a</think><answer>5</answer>").well_formed);
  CHECK(!parse_tagged("<think>a</think> trailing <answer>5</answer>").well_formed);
  CHECK(!parse_tagged("<think>a</think>").well_formed);
  CHECK(parse_tagged("<think>a</think>  \n <answer>5</answer>").well_formed);
}

TEST_CASE("score answers accept up to two fraction digits inside the range") {
  RewardConfig cfg;
  double v = 0;
  CHECK(!parse_score_answer("8.5", cfg, &v).error);
  CHECK(v == doctest::Approx(8.5));
  CHECK(!parse_score_answer(" 10 ", cfg, &v).error);
  CHECK(!parse_score_answer("1.00", cfg, &v).error);

  CHECK(parse_score_answer("8.505", cfg, &v).error == AccError::NonNumericAnswer);
  CHECK(parse_score_answer("8.", cfg, &v).error == AccError::NonNumericAnswer);
  CHECK(parse_score_answer("-3", cfg, &v).error == AccError::NonNumericAnswer);
  CHECK(parse_score_answer("score 8", cfg, &v).error == AccError::NonNumericAnswer);
  CHECK(parse_score_answer("10.01", cfg, &v).error == AccError::ScoreOutOfRange);
  CHECK(parse_score_answer("0.99", cfg, &v).error == AccError::ScoreOutOfRange);
}

TEST_CASE("scoring reward example: near miss outside tolerance") {
  RewardConfig cfg;  // zeta = 0.25
  ParsedResponse p = parse_tagged(kGood);  // answer 8.50
  RewardBreakdown rb = total_reward(p, Task::Scoring, TaskTruth{8.00}, cfg);
  CHECK(rb.r_fmt == 1);
  CHECK(rb.r_acc == 0);
  CHECK(rb.r == 1);

  RewardBreakdown hit = total_reward(
      parse_tagged("<think>t</think><answer>8.2</answer>"), Task::Scoring, TaskTruth{8.00},
      cfg);
  CHECK(hit.r_acc == 1);
  CHECK(hit.r == 2);

  // tolerance boundary is strict
  RewardBreakdown edge = total_reward(
      parse_tagged("<think>t</think><answer>8.25</answer>"), Task::Scoring, TaskTruth{8.00},
      cfg);
  CHECK(edge.r_acc == 0);
}

TEST_CASE("comparison reward example") {
  RewardConfig cfg;
  RewardBreakdown rb = total_reward(
      parse_tagged("<think>left is cramped</think><answer>Slide B</answer>"),
      Task::Comparison, TaskTruth{Choice::B}, cfg);
  CHECK(rb.r_fmt == 1);
  CHECK(rb.r_acc == 1);
  CHECK(rb.r == 2);

  RewardBreakdown wrong = total_reward(
      parse_tagged("<think>t</think><answer>slide  a</answer>"), Task::Comparison,
      TaskTruth{Choice::B}, cfg);
  CHECK(wrong.r_acc == 0);
  CHECK(!wrong.error.has_value());

  RewardBreakdown odd = total_reward(parse_tagged("<think>t</think><answer>B</answer>"),
                                     Task::Comparison, TaskTruth{Choice::B}, cfg);
  CHECK(odd.r_acc == 0);
  CHECK(odd.error == AccError::UnrecognizedChoice);
}

TEST_CASE("adjustment reward uses the f1 threshold strictly") {
  RewardConfig cfg;  // alpha = 0.5
  std::string answer =
      "<think>t</think><answer>Composition & Layout: the column drifts left.\n"
      "Typography: No major deficiencies found.\n"
      "Imagery & Visualizations: No major deficiencies found.</answer>";
  TaskTruth truth = DefectSet{DefectCategory::CompositionLayout, DefectCategory::Typography};
  RewardBreakdown rb = total_reward(parse_tagged(answer), Task::Adjustment, truth, cfg);
  CHECK(rb.r_acc == 1);  // F1 = 2/3 > 0.5

  TaskTruth exact = DefectSet{DefectCategory::CompositionLayout};
  RewardBreakdown perfect = total_reward(parse_tagged(answer), Task::Adjustment, exact, cfg);
  CHECK(perfect.r_acc == 1);

  TaskTruth miss = DefectSet{DefectCategory::ImageryVisualizations};
  RewardBreakdown zero = total_reward(parse_tagged(answer), Task::Adjustment, miss, cfg);
  CHECK(zero.r_acc == 0);
}

TEST_CASE("category extraction reads sectioned feedback") {
  DefectSet all = extract_categories(
      "Composition & Layout: crowded lower half.\n"
      "Typography: body text too small to read.\n"
      "Imagery & Visualizations: chart is stretched.");
  CHECK(all == DefectSet{DefectCategory::CompositionLayout, DefectCategory::Typography,
                         DefectCategory::ImageryVisualizations});

  DefectSet clean = extract_categories(
      "Composition and Layout: No major deficiencies found.\n"
      "Typography: No major deficiencies found.\n"
      "Imagery and Visualizations: No major deficiencies found.");
  CHECK(clean == DefectSet{DefectCategory::NoDeficiency});

  CHECK(extract_categories("No major deficiencies found.") ==
        DefectSet{DefectCategory::NoDeficiency});
  CHECK(extract_categories("rambling with no section markers").empty());
}

TEST_CASE("malformed responses earn format zero and skip accuracy") {
  RewardConfig cfg;
  RewardBreakdown rb =
      total_reward(parse_tagged("the answer is 8"), Task::Scoring, TaskTruth{8.0}, cfg);
  CHECK(rb.r_fmt == 0);
  CHECK(rb.r_acc == 0);
  CHECK(rb.r == 0);
}

TEST_CASE("group advantages normalize to unit spread") {
  GroupRewards g = group_advantages({2, 0});
  CHECK(g.advantages[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.advantages[1] == doctest::Approx(-1.0).epsilon(1e-12));

  // hand-computed: mean 1.25, population variance 0.6875
  GroupRewards h = group_advantages({2, 1, 0, 2});
  double sd = std::sqrt(0.6875);
  CHECK(h.advantages[0] == doctest::Approx(0.75 / sd).epsilon(1e-12));
  CHECK(h.advantages[1] == doctest::Approx(-0.25 / sd).epsilon(1e-12));
  CHECK(h.advantages[2] == doctest::Approx(-1.25 / sd).epsilon(1e-12));

  GroupRewards flat = group_advantages({1, 1, 1});
  for (double a : flat.advantages) CHECK(a == 0.0);

  CHECK_THROWS_AS(group_advantages({1}), Error);
  CHECK_THROWS_AS(group_advantages({}), Error);
}

TEST_CASE("advantages stay standardized across random groups") {
  Rng rng(31, "advantage-prop");
  for (int i = 0; i < 300; ++i) {
    std::vector<double> rewards;
    std::size_t n = 2 + rng.uniform_int(7);
    for (std::size_t k = 0; k < n; ++k)
      rewards.push_back(static_cast<double>(rng.uniform_int(3)));
    GroupRewards g = group_advantages(rewards);
    double lo = *std::min_element(rewards.begin(), rewards.end());
    double hi = *std::max_element(rewards.begin(), rewards.end());
    double mean = std::accumulate(g.advantages.begin(), g.advantages.end(), 0.0) / n;
    CHECK(std::abs(mean) <= 1e-9);
    if (lo == hi) {
      for (double a : g.advantages) CHECK(a == 0.0);
    } else {
      double var = 0;
      for (double a : g.advantages) var += a * a;
      CHECK(std::abs(std::sqrt(var / n) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("surrogate objective and clipping") {
  RewardConfig cfg;
  cfg.kl_beta = 0;
  std::vector<double> adv = {0.5, -1.0, 2.0};
  std::vector<double> ones = {1, 1, 1};
  double expect = (0.5 - 1.0 + 2.0) / 3.0;
  CHECK(grpo_surrogate(ones, adv, 0.0, cfg) == expect);

  // clip binds above for positive advantage
  CHECK(grpo_surrogate({1.5}, {1.0}, 0.0, cfg) == doctest::Approx(1.2).epsilon(1e-12));
  // negative advantage keeps the unclipped (smaller) branch
  CHECK(grpo_surrogate({1.5}, {-1.0}, 0.0, cfg) == doctest::Approx(-1.5).epsilon(1e-12));
  // below the band with positive advantage: ratio wins the min
  CHECK(grpo_surrogate({0.5}, {1.0}, 0.0, cfg) == doctest::Approx(0.5).epsilon(1e-12));
  // below the band with negative advantage: clip floor binds
  CHECK(grpo_surrogate({0.5}, {-1.0}, 0.0, cfg) == doctest::Approx(-0.8).epsilon(1e-12));

  cfg.kl_beta = 0.001;
  CHECK(grpo_surrogate({1.0}, {1.0}, 2.0, cfg) ==
        doctest::Approx(1.0 - 0.001 * 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(grpo_surrogate({1.0}, {1.0, 2.0}, 0.0, cfg), Error);
  CHECK_THROWS_AS(grpo_surrogate({}, {}, 0.0, cfg), Error);
  CHECK_THROWS_AS(grpo_surrogate({0.0}, {1.0}, 0.0, cfg), Error);
  CHECK_THROWS_AS(grpo_surrogate({1.0}, {1.0}, -1.0, cfg), Error);
}

TEST_CASE("task names round trip") {
  for (Task t : {Task::Scoring, Task::Adjustment, Task::Comparison}) {
    auto back = task_from_string(to_string(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  CHECK(!task_from_string("unknown").has_value());
}

}  // TEST_SUITE
