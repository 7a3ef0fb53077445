#include <chrono>
#include <cmath>

#include "doctest.h"
#include "presgauge/error.hpp"
#include "presgauge/metrics.hpp"
#include "support.hpp"

using namespace presgauge;
using namespace testsup;

TEST_SUITE("metrics") {

TEST_CASE("balance analytic fixtures") {
  // single centered element
  SlideDoc centered = one_slide({shape_el("a", 0.3, 0.3, 0.4, 0.4)});
  CHECK(layout_balance(centered).balance == doctest::Approx(1.0).epsilon(1e-12));

  // mirrored pair of equal boxes
  SlideDoc pair = one_slide(
      {shape_el("l", 0.1, 0.2, 0.2, 0.6), shape_el("r", 0.7, 0.2, 0.2, 0.6)});
  CHECK(layout_balance(pair).balance == doctest::Approx(1.0).epsilon(1e-12));

  // 3:1 area split, center of mass lands at (0.6, 0.5): d = 0.1
  SlideDoc offset = one_slide(
      {shape_el("big", 0.2, 0.25, 0.6, 0.5), shape_el("small", 0.8, 0.25, 0.2, 0.5)});
  BalanceBreakdown bb = layout_balance(offset);
  CHECK(bb.com_x == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(bb.com_y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bb.balance == doctest::Approx(1.0 - 0.1 / kBalanceDMax).epsilon(1e-12));
  CHECK(std::abs(bb.balance - 0.8585786437626905) < 1e-9);
}

TEST_CASE("balance ignores background and needs visible area") {
  SlideDoc s = one_slide({shape_el("bg", 0, 0, 1, 1), shape_el("a", 0.6, 0.6, 0.2, 0.2)});
  s.elements[0].background = true;
  BalanceBreakdown bb = layout_balance(s);
  CHECK(bb.com_x == doctest::Approx(0.7));
  CHECK(bb.com_y == doctest::Approx(0.7));

  SlideDoc all_bg = s;
  all_bg.elements.erase(all_bg.elements.begin() + 1);
  CHECK_THROWS_AS(layout_balance(all_bg), Error);
  SlideDoc empty;
  empty.id = "e";
  CHECK_THROWS_AS(layout_balance(empty), Error);
}

TEST_CASE("balance agrees with its definition on random slides") {
  Rng rng(11, "balance-oracle");
  for (int i = 0; i < 200; ++i) {
    SlideDoc s = random_slide(rng, 2, 6);
    bool visible = false;
    for (const auto& e : s.elements) visible |= !e.background;
    if (!visible) continue;
    CHECK(layout_balance(s).balance == doctest::Approx(balance_oracle(s)).epsilon(1e-12));
  }
}

TEST_CASE("tokenizer lowercases and strips punctuation") {
  CHECK(tokenize("The cat, sat!") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(tokenize("  a  b ") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("...").empty());
}

TEST_CASE("rouge-l worked example") {
  auto cand = tokenize("the cat sat on mat");
  auto ref = tokenize("the cat on the mat");
  RougeResult r = rouge_l(cand, ref);
  CHECK(r.lcs_len == 4);
  CHECK(r.precision == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.recall == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.f_score == doctest::Approx(0.8).epsilon(1e-12));

  // beta sweep keeps F between P and R
  RougeResult skew = rouge_l(tokenize("a b"), tokenize("a b c d"), 1.2);
  CHECK(skew.precision == doctest::Approx(1.0));
  CHECK(skew.recall == doctest::Approx(0.5));
  double b2 = 1.2 * 1.2;
  CHECK(skew.f_score ==
        doctest::Approx((1 + b2) * 0.5 * 1.0 / (b2 * 0.5 + 1.0)).epsilon(1e-12));

  CHECK(rouge_l(tokenize("x"), tokenize("y")).f_score == 0.0);
  CHECK_THROWS_AS(rouge_l({}, ref), Error);
  CHECK_THROWS_AS(rouge_l(cand, {}), Error);
}

TEST_CASE("lcs dynamic program equals recursive definition") {
  Rng rng(23, "lcs-oracle");
  for (int i = 0; i < 500; ++i) {
    auto a = random_tokens(rng, 8);
    auto b = random_tokens(rng, 8);
    CHECK(lcs_length(a, b) == lcs_recursive(a, b, 0, 0));
  }
}

TEST_CASE("mean absolute error") {
  CHECK(mae({7, 5, 9}, {8, 5, 6}) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(mae({1, 2}, {1}), Error);
  CHECK_THROWS_AS(mae({}, {}), Error);
}

TEST_CASE("defect f1 pairs") {
  DefectSet cl{DefectCategory::CompositionLayout};
  DefectSet cl_typo{DefectCategory::CompositionLayout, DefectCategory::Typography};
  PairPRF p = defect_f1(cl, cl_typo);
  CHECK(p.precision == doctest::Approx(1.0));
  CHECK(p.recall == doctest::Approx(0.5));
  CHECK(p.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK(defect_f1({}, {}).f1 == doctest::Approx(1.0));
  CHECK(defect_f1({}, cl).f1 == 0.0);

  DefectSet invalid{DefectCategory::NoDeficiency, DefectCategory::Typography};
  CHECK_THROWS_AS(defect_f1(invalid, cl), Error);
}

TEST_CASE("aggregate defect report counts per category") {
  DefectSet cl{DefectCategory::CompositionLayout};
  DefectSet typo{DefectCategory::Typography};
  DefectSet none{DefectCategory::NoDeficiency};
  std::vector<DefectSet> pred = {cl, typo, none, cl};
  std::vector<DefectSet> truth = {cl, cl, none, {DefectCategory::CompositionLayout,
                                                 DefectCategory::Typography}};
  DefectF1Report rep = aggregate_defect_f1(pred, truth);
  REQUIRE(rep.per_category.size() == 4);
  const CategoryPRF* cl_row = nullptr;
  const CategoryPRF* typo_row = nullptr;
  for (const auto& row : rep.per_category) {
    if (row.category == DefectCategory::CompositionLayout) cl_row = &row;
    if (row.category == DefectCategory::Typography) typo_row = &row;
  }
  REQUIRE(cl_row != nullptr);
  CHECK(cl_row->tp == 2);
  CHECK(cl_row->fp == 0);
  CHECK(cl_row->fn == 1);
  CHECK(cl_row->support == 3);
  REQUIRE(typo_row != nullptr);
  CHECK(typo_row->tp == 0);
  CHECK(typo_row->fp == 1);  // predicted on a record whose truth was only layout
  CHECK(typo_row->fn == 1);
  CHECK(typo_row->support == 1);
  CHECK(rep.records == 4);
}

TEST_CASE("comparison accuracy") {
  CHECK(comparison_accuracy({Choice::A, Choice::B, Choice::B}, {Choice::A, Choice::A,
                                                                Choice::B}) ==
        doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(comparison_accuracy({}, {}), Error);
  CHECK_THROWS_AS(comparison_accuracy({Choice::A}, {}), Error);
}

TEST_CASE("balance runtime stays under a millisecond") {
  Rng rng(5, "balance-speed");
  SlideDoc s = random_slide(rng, 6, 6);
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) layout_balance(s);
  auto dt = std::chrono::steady_clock::now() - t0;
  CHECK(std::chrono::duration<double, std::milli>(dt).count() / 1000.0 < 1.0);
}

}  // TEST_SUITE
