// Acceptance checks: one line per criterion, nonzero exit when any fail.
// Tolerances are pinned here rather than shared with the unit suite so a
// drive-by edit can't quietly loosen them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "presgauge/aesth.hpp"
#include "presgauge/checker.hpp"
#include "presgauge/harness.hpp"
#include "presgauge/metrics.hpp"
#include "presgauge/perturb.hpp"
#include "presgauge/planner.hpp"
#include "presgauge/render.hpp"
#include "presgauge/rewards.hpp"
#include "presgauge/rng.hpp"
#include "support.hpp"

using namespace presgauge;
using namespace testsup;

namespace {

constexpr double kTolBalance = 1e-9;
constexpr double kTolAdvantage = 1e-9;
constexpr double kTolClip = 1e-12;
constexpr double kTolRaster = 2.0 / 512.0;
constexpr double kBalanceBudgetMs = 1.0;
constexpr double kLcsBudgetSec = 5.0;
constexpr double kRefineBudgetSec = 10.0;

int g_failures = 0;

void report(int num, const std::string& desc, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " " << num << ": " << desc;
  if (!ok && !detail.empty()) std::cout << " [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1: analytic balance fixtures -----------------------------------------

void criterion_balance() {
  SlideDoc centered = one_slide({shape_el("a", 0.3, 0.3, 0.4, 0.4)});
  SlideDoc mirrored = one_slide(
      {shape_el("l", 0.1, 0.2, 0.2, 0.6), shape_el("r", 0.7, 0.2, 0.2, 0.6)});
  // 3:1 area ratio puts the center of mass at (0.6, 0.5): d = 0.1 exactly
  SlideDoc offset = one_slide(
      {shape_el("big", 0.2, 0.25, 0.6, 0.5), shape_el("small", 0.8, 0.25, 0.2, 0.5)});

  bool values_ok = std::abs(layout_balance(centered).balance - 1.0) <= kTolBalance &&
                   std::abs(layout_balance(mirrored).balance - 1.0) <= kTolBalance &&
                   std::abs(layout_balance(offset).balance - 0.8585786437626905) <=
                       kTolBalance;

  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) {
    layout_balance(centered);
    layout_balance(mirrored);
    layout_balance(offset);
  }
  double per_slide_ms = seconds_since(t0) * 1000.0 / 3000.0;
  bool fast = per_slide_ms < kBalanceBudgetMs;
  report(1, "layout balance matches the analytic fixtures and stays under 1 ms",
         values_ok && fast,
         values_ok ? "slow: " + std::to_string(per_slide_ms) + " ms" : "value drift");
}

// --- 2: LCS against brute force -------------------------------------------

void criterion_lcs() {
  Rng rng(104729, "acceptance-lcs");
  auto t0 = std::chrono::steady_clock::now();
  bool all_equal = true;
  for (int i = 0; i < 500 && all_equal; ++i) {
    auto a = random_tokens(rng, 8);
    auto b = random_tokens(rng, 8);
    if (lcs_length(a, b) != lcs_recursive(a, b, 0, 0)) all_equal = false;
  }
  double secs = seconds_since(t0);
  report(2, "LCS dynamic program equals brute-force enumeration on 500 pairs",
         all_equal && secs < kLcsBudgetSec,
         all_equal ? "too slow: " + std::to_string(secs) + " s" : "mismatch");
}

// --- 3: reward fidelity ----------------------------------------------------

void criterion_reward_fidelity() {
  RewardConfig cfg;  // zeta = 0.25
  RewardBreakdown scoring = total_reward(
      parse_tagged("<think>the layout reads clean but dense</think>"
                   "<answer>8.50</answer>"),
      Task::Scoring, TaskTruth{8.00}, cfg);
  bool scoring_ok = scoring.r_fmt == 1 && scoring.r_acc == 0 && scoring.r == 1;

  RewardBreakdown cmp = total_reward(
      parse_tagged("<think>the right slide balances its columns</think>"
                   "<answer>Slide B</answer>"),
      Task::Comparison, TaskTruth{Choice::B}, cfg);
  bool cmp_ok = cmp.r_fmt == 1 && cmp.r_acc == 1 && cmp.r == 2;

  report(3, "reference scoring and comparison responses earn their exact rewards",
         scoring_ok && cmp_ok);
}

// --- 4: advantage normalization -------------------------------------------

void criterion_advantages() {
  Rng rng(42, "acceptance-advantages");
  bool ok = true;
  std::string detail;
  for (int g = 0; g < 1000 && ok; ++g) {
    std::vector<double> rewards;
    bool force_flat = g % 10 == 0;
    double flat = static_cast<double>(rng.uniform_int(3));
    for (int i = 0; i < 8; ++i)
      rewards.push_back(force_flat ? flat : static_cast<double>(rng.uniform_int(3)));
    GroupRewards gr = group_advantages(rewards);
    double lo = *std::min_element(rewards.begin(), rewards.end());
    double hi = *std::max_element(rewards.begin(), rewards.end());
    double mean =
        std::accumulate(gr.advantages.begin(), gr.advantages.end(), 0.0) / 8.0;
    if (lo == hi) {
      for (double a : gr.advantages)
        if (a != 0.0) { ok = false; detail = "flat group not zeroed"; }
    } else {
      if (std::abs(mean) > kTolAdvantage) { ok = false; detail = "mean drift"; }
      double var = 0;
      for (double a : gr.advantages) var += (a - mean) * (a - mean);
      if (std::abs(std::sqrt(var / 8.0) - 1.0) > kTolAdvantage) {
        ok = false;
        detail = "std drift";
      }
    }
  }
  report(4, "group advantages are standardized over 1000 random groups", ok, detail);
}

// --- 5: surrogate objective ------------------------------------------------

void criterion_surrogate() {
  RewardConfig cfg;
  cfg.kl_beta = 0;
  Rng rng(7, "acceptance-surrogate");
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    std::vector<double> adv;
    std::vector<double> ones;
    int n = 2 + static_cast<int>(rng.uniform_int(7));
    for (int i = 0; i < n; ++i) {
      adv.push_back(rng.uniform(-2.0, 2.0));
      ones.push_back(1.0);
    }
    double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
    if (grpo_surrogate(ones, adv, 0.0, cfg) != mean) ok = false;
  }
  bool clip_hi = std::abs(grpo_surrogate({1.5}, {1.0}, 0.0, cfg) - 1.2) <= kTolClip;
  bool clip_lo = std::abs(grpo_surrogate({1.5}, {-1.0}, 0.0, cfg) - (-1.5)) <= kTolClip;
  bool clip_floor = std::abs(grpo_surrogate({0.5}, {-1.0}, 0.0, cfg) - (-0.8)) <= kTolClip;
  report(5, "clipped surrogate matches the unclipped mean and hand-derived clip cases",
         ok && clip_hi && clip_lo && clip_floor);
}

// --- 6: refinement loop semantics ------------------------------------------

struct SeqScorer : Scorer {
  std::vector<double> seq;
  int calls = 0;
  explicit SeqScorer(std::vector<double> s) : seq(std::move(s)) {}
  double score(const SlideDoc&) override { return seq[calls++]; }
  Feedback feedback(const SlideDoc&) override {
    FeedbackItem item;
    item.category = DefectCategory::CompositionLayout;
    item.suggested_op = FeedbackOp::Respace;
    return Feedback{{item}};
  }
};

struct CountRefiner : Refiner {
  int calls = 0;
  SlideDoc refine(const SlideDoc& slide, const Feedback&) override {
    SlideDoc out = slide;
    out.id = "step" + std::to_string(++calls);
    return out;
  }
};

void criterion_checker() {
  SlideDoc start = one_slide({shape_el("a", 0.3, 0.3, 0.4, 0.4)}, "start");
  bool ok = true;
  std::string detail;

  {
    SeqScorer s({9.0});
    CountRefiner r;
    CheckerConfig cfg;
    RefinementResult res = run_refinement(start, s, r, cfg);
    if (!(s.calls == 1 && r.calls == 0 && res.final_score == 9.0 &&
          res.trace.early_exit && res.final.id == "start")) {
      ok = false;
      detail = "constant-9 trace";
    }
  }
  {
    SeqScorer s({5.0, 4.0, 6.0});
    CountRefiner r;
    CheckerConfig cfg;
    cfg.max_iters = 3;
    RefinementResult res = run_refinement(start, s, r, cfg);
    if (!(s.calls == 3 && r.calls == 2 && res.final_score == 6.0 &&
          res.trace.records[1].reverted && !res.trace.records[2].reverted &&
          res.trace.best_index == 2 && res.final.id == "step2")) {
      ok = false;
      detail = "revert trace";
    }
  }
  {
    SeqScorer s({5.0, 6.0, 8.2});
    CountRefiner r;
    CheckerConfig cfg;
    RefinementResult res = run_refinement(start, s, r, cfg);
    if (!(s.calls == 3 && r.calls == 2 && res.final_score == 8.2 &&
          res.trace.early_exit && res.trace.best_index == 2)) {
      ok = false;
      detail = "late-exit trace";
    }
  }

  Rng rng(271828, "acceptance-checker");
  for (int trial = 0; trial < 10000 && ok; ++trial) {
    int iters = 1 + static_cast<int>(rng.uniform_int(5));
    std::vector<double> seq;
    for (int i = 0; i < iters; ++i) seq.push_back(rng.uniform(0.0, 10.0));
    SeqScorer s(seq);
    CountRefiner r;
    CheckerConfig cfg;
    cfg.max_iters = iters;
    cfg.revert_to_best = rng.chance(0.5);
    RefinementResult res = run_refinement(start, s, r, cfg);
    double best = -1;
    for (const IterationRecord& rec : res.trace.records) best = std::max(best, rec.score);
    if (res.final_score != best) {
      ok = false;
      detail = "final below max";
    }
  }
  report(6, "refinement loop reproduces the reference traces and always returns the best",
         ok, detail);
}

// --- 7: raster versus analytic balance -------------------------------------

void criterion_raster() {
  Rng rng(314159, "acceptance-raster");
  bool ok = true;
  double worst = 0;
  for (int i = 0; i < 200 && ok; ++i) {
    SlideDoc s = disjoint_slide(rng);
    double analytic = layout_balance(s).balance;
    double rastered = raster_balance(rasterize(s, 512, 512)).balance;
    double err = std::abs(analytic - rastered);
    worst = std::max(worst, err);
    if (err > kTolRaster) ok = false;
  }
  report(7, "raster occupancy balance tracks the box model within 2/512 on 200 slides", ok,
         "worst " + std::to_string(worst));
}

// --- 8: corpus tier separation ---------------------------------------------

std::uint64_t slide_seed(std::uint64_t base, const std::string& id) {
  return Rng(base, "perturb/" + id).next_u64();
}

void criterion_corpus() {
  const std::uint64_t seed = 2025;
  std::vector<SlideDoc> corpus = make_corpus(50, seed, {});
  std::vector<SlideDoc> corpus2 = make_corpus(50, seed, {});
  bool reproducible = encode_deck(corpus) == encode_deck(corpus2);

  HeuristicScorer scorer;
  int ordered = 0;
  bool variants_reproducible = true;
  for (const SlideDoc& s : corpus) {
    VariantTriple t = make_variants(s, slide_seed(seed, s.id));
    VariantTriple t2 = make_variants(s, slide_seed(seed, s.id));
    if (encode_slide(t.poor.slide) != encode_slide(t2.poor.slide) ||
        encode_slide(t.good.slide) != encode_slide(t2.good.slide))
      variants_reproducible = false;
    double poor = scorer.score(t.poor.slide);
    double base = scorer.score(t.base.slide);
    double good = scorer.score(t.good.slide);
    if (good >= base && base > poor) ++ordered;
  }
  report(8, "perturbation tiers separate on at least 90% of a 50-slide corpus",
         ordered >= 45 && reproducible && variants_reproducible,
         "ordered " + std::to_string(ordered) + "/50");
}

// --- 9: end-to-end refinement lift -----------------------------------------

void criterion_refinement_lift() {
  const std::uint64_t seed = 2025;
  std::vector<SlideDoc> corpus = make_corpus(50, seed, {});
  HeuristicScorer scorer;
  OpRefiner refiner;
  CheckerConfig cfg;
  cfg.threshold = 8.0;
  cfg.max_iters = 4;  // initial version plus three repair rounds

  auto t0 = std::chrono::steady_clock::now();
  int lifted = 0;
  bool monotonic = true;
  for (const SlideDoc& s : corpus) {
    VariantTriple t = make_variants(s, slide_seed(seed, s.id));
    RefinementResult res = run_refinement(t.poor.slide, scorer, refiner, cfg);
    double first = res.trace.records.front().score;
    double running = -1;
    for (const IterationRecord& rec : res.trace.records) {
      double prev = running;
      running = std::max(running, rec.score);
      if (running < prev) monotonic = false;
    }
    if (first < 6.0 && res.final_score >= 8.0) ++lifted;
  }
  double secs = seconds_since(t0);
  report(9,
         "repair loop lifts at least 80% of poor slides from <6.0 to >=8.0 within three "
         "rounds",
         lifted >= 40 && monotonic && secs < kRefineBudgetSec,
         "lifted " + std::to_string(lifted) + "/50 in " + std::to_string(secs) + " s");
}

// --- 10: harness determinism -----------------------------------------------

void criterion_harness() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "presgauge-acceptance";
  fs::create_directories(dir);

  HarnessConfig cfg;
  cfg.seed = 99;
  bool ok = true;
  std::string detail;

  // deck for perturb
  std::ostringstream deck_stream, err;
  cmd_synth({12, ""}, cfg, deck_stream, err);
  fs::path deck = dir / "deck.jsonl";
  std::ofstream(deck) << deck_stream.str();

  std::ostringstream p1, p2;
  if (cmd_perturb({deck.string(), "", 0}, cfg, p1, err) != kExitOk) ok = false;
  if (cmd_perturb({deck.string(), "", 0}, cfg, p2, err) != kExitOk) ok = false;
  if (p1.str() != p2.str() || p1.str().empty()) { ok = false; detail = "perturb drift"; }

  // eval: sequential, repeat, and parallel must agree
  std::string records;
  for (int i = 0; i < 96; ++i) {
    records += "{\"id\":\"r" + std::to_string(i) +
               "\",\"task\":\"scoring\",\"truth\":" + std::to_string(1 + i % 9) +
               ",\"prediction\":" + std::to_string(1 + (i * 5) % 9) + "}\n";
  }
  fs::path data = dir / "eval.jsonl";
  std::ofstream(data) << records;
  std::ostringstream e1, e2, e3;
  HarnessConfig par = cfg;
  par.jobs = 4;
  if (cmd_eval({data.string(), ""}, cfg, e1, err) != kExitOk) ok = false;
  if (cmd_eval({data.string(), ""}, cfg, e2, err) != kExitOk) ok = false;
  if (cmd_eval({data.string(), ""}, par, e3, err) != kExitOk) ok = false;
  if (e1.str() != e2.str()) { ok = false; detail = "eval rerun drift"; }
  if (e1.str() != e3.str()) { ok = false; detail = "parallel drift"; }

  // reward dump reruns
  std::string responses;
  for (int i = 0; i < 24; ++i) {
    responses += "{\"id\":\"g" + std::to_string(i) +
                 "\",\"task\":\"scoring\",\"truth\":7.0,\"response_text\":\"<think>t"
                 "</think><answer>" +
                 std::to_string(1 + (i * 7) % 9) + "</answer>\"}\n";
  }
  fs::path resp = dir / "resp.jsonl";
  std::ofstream(resp) << responses;
  std::ostringstream r1, r2;
  if (cmd_reward({resp.string()}, cfg, r1, err) != kExitOk) ok = false;
  if (cmd_reward({resp.string()}, cfg, r2, err) != kExitOk) ok = false;
  if (r1.str() != r2.str() || r1.str().empty()) { ok = false; detail = "reward drift"; }

  std::error_code ec;
  fs::remove_all(dir, ec);
  report(10, "eval, perturb, and reward are byte-stable across reruns and thread counts",
         ok, detail);
}

}  // namespace

int main() {
  criterion_balance();
  criterion_lcs();
  criterion_reward_fidelity();
  criterion_advantages();
  criterion_surrogate();
  criterion_checker();
  criterion_raster();
  criterion_corpus();
  criterion_refinement_lift();
  criterion_harness();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
