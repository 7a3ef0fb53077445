#include "presgauge/checker.hpp"

#include <utility>

namespace presgauge {

const char* to_string(FeedbackOp op) {
  switch (op) {
    case FeedbackOp::AlignToGrid: return "align_to_grid";
    case FeedbackOp::Rescale: return "rescale";
    case FeedbackOp::Respace: return "respace";
    case FeedbackOp::NormalizeFonts: return "normalize_fonts";
    case FeedbackOp::FixAspect: return "fix_aspect";
  }
  return "respace";
}

std::optional<FeedbackOp> feedback_op_from_string(const std::string& s) {
  if (s == "align_to_grid") return FeedbackOp::AlignToGrid;
  if (s == "rescale") return FeedbackOp::Rescale;
  if (s == "respace") return FeedbackOp::Respace;
  if (s == "normalize_fonts") return FeedbackOp::NormalizeFonts;
  if (s == "fix_aspect") return FeedbackOp::FixAspect;
  return std::nullopt;
}

std::string summarize(const Feedback& fb) {
  std::string out;
  for (const FeedbackItem& it : fb.items) {
    if (!out.empty()) out += ';';
    out += to_string(it.category);
    if (it.suggested_op) {
      out += ':';
      out += to_string(*it.suggested_op);
    }
  }
  return out;
}

namespace {

ErrorCode inner_code_of(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->code();
  return ErrorCode::InvalidArgument;
}

}  // namespace

RefinementResult run_refinement(const SlideDoc& initial, Scorer& scorer, Refiner& refiner,
                                const CheckerConfig& cfg) {
  if (cfg.max_iters < 1)
    throw Error(ErrorCode::InvalidArgument, "refinement needs at least one iteration");
  if (cfg.threshold < 1 || cfg.threshold > 10)
    throw Error(ErrorCode::InvalidArgument, "threshold outside the score range");

  CheckerTrace trace;
  SlideDoc prev;           // version scored at t-1
  SlideDoc current = initial;
  double prev_score = 0;
  SlideDoc best_slide = initial;
  double best_score = 0;
  bool have_best = false;

  for (int t = 0; t < cfg.max_iters; ++t) {
    double s;
    try {
      s = scorer.score(current);
    } catch (const std::exception& e) {
      throw RefinementError(ErrorCode::ScorerFailure,
                            std::string("scorer failed at iteration ") + std::to_string(t) +
                                ": " + e.what(),
                            std::move(trace), inner_code_of(e));
    }
    trace.records.push_back({t, s, false, false, "", current});

    if (s >= cfg.threshold) {
      trace.early_exit = true;
      trace.best_index = t;
      return {current, s, std::move(trace)};
    }

    // Work from the stronger earlier version when this one regressed.
    SlideDoc working = current;
    if (t > 0) {
      double reference = cfg.revert_to_best ? best_score : prev_score;
      const SlideDoc& fallback = cfg.revert_to_best ? best_slide : prev;
      if (s < reference) {
        working = fallback;
        trace.records.back().reverted = true;
      }
    }

    if (!have_best || s > best_score) {
      best_score = s;
      best_slide = current;
      have_best = true;
      trace.best_index = t;
    }

    if (t + 1 < cfg.max_iters) {
      Feedback fb;
      try {
        fb = scorer.feedback(working);
      } catch (const std::exception& e) {
        throw RefinementError(ErrorCode::ScorerFailure,
                              std::string("feedback failed at iteration ") + std::to_string(t) +
                                  ": " + e.what(),
                              std::move(trace), inner_code_of(e));
      }
      trace.records.back().feedback_summary = summarize(fb);
      SlideDoc next;
      try {
        next = refiner.refine(working, fb);
      } catch (const std::exception& e) {
        throw RefinementError(ErrorCode::RefinerFailure,
                              std::string("refiner failed at iteration ") + std::to_string(t) +
                                  ": " + e.what(),
                              std::move(trace), inner_code_of(e));
      }
      trace.records.back().refined = true;
      prev = std::move(current);
      prev_score = s;
      current = std::move(next);
    }
  }

  return {best_slide, best_score, std::move(trace)};
}

}  // namespace presgauge
