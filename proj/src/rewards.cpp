#include "presgauge/rewards.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "presgauge/error.hpp"

namespace presgauge {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0, pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

bool whitespace_only(const std::string& s, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to && i < s.size(); ++i)
    if (!std::isspace(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

ParsedResponse parse_tagged(const std::string& text) {
  static const std::string kThinkOpen = "<think>", kThinkClose = "</think>";
  static const std::string kAnswerOpen = "<answer>", kAnswerClose = "</answer>";
  ParsedResponse r;

  // Best-effort capture for diagnostics regardless of overall shape.
  std::size_t to = text.find(kThinkOpen), tc = text.find(kThinkClose);
  if (to != std::string::npos && tc != std::string::npos && tc > to)
    r.think = text.substr(to + kThinkOpen.size(), tc - to - kThinkOpen.size());
  std::size_t ao = text.find(kAnswerOpen), ac = text.find(kAnswerClose);
  if (ao != std::string::npos && ac != std::string::npos && ac > ao)
    r.answer = text.substr(ao + kAnswerOpen.size(), ac - ao - kAnswerOpen.size());

  if (count_of(text, kThinkOpen) != 1 || count_of(text, kThinkClose) != 1 ||
      count_of(text, kAnswerOpen) != 1 || count_of(text, kAnswerClose) != 1)
    return r;
  if (to == std::string::npos || tc == std::string::npos || ao == std::string::npos ||
      ac == std::string::npos)
    return r;
  bool ordered = to < tc && tc < ao && ao < ac;
  if (!ordered) return r;
  r.well_formed = whitespace_only(text, 0, to) &&
                  whitespace_only(text, tc + kThinkClose.size(), ao) &&
                  whitespace_only(text, ac + kAnswerClose.size(), text.size());
  return r;
}

const char* to_string(AccError e) {
  switch (e) {
    case AccError::NonNumericAnswer: return "non_numeric_answer";
    case AccError::ScoreOutOfRange: return "score_out_of_range";
    case AccError::UnrecognizedChoice: return "unrecognized_choice";
    case AccError::InvalidLabelSet: return "invalid_label_set";
  }
  return "unknown";
}

const char* to_string(Task t) {
  switch (t) {
    case Task::Scoring: return "scoring";
    case Task::Adjustment: return "adjustment";
    case Task::Comparison: return "comparison";
  }
  return "scoring";
}

std::optional<Task> task_from_string(const std::string& s) {
  if (s == "scoring") return Task::Scoring;
  if (s == "adjustment") return Task::Adjustment;
  if (s == "comparison") return Task::Comparison;
  return std::nullopt;
}

AccResult parse_score_answer(const std::string& answer, const RewardConfig& cfg,
                             double* out_score) {
  std::string t = trim(answer);
  // Decimal, at most two fractional digits: \d+(\.\d{1,2})?
  bool ok = !t.empty();
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0) ok = false;
  if (ok && i < t.size()) {
    if (t[i] != '.') ok = false;
    else {
      std::size_t frac = 0;
      ++i;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) { ++i; ++frac; }
      if (i != t.size() || frac < 1 || frac > 2) ok = false;
    }
  }
  if (!ok) return {0, AccError::NonNumericAnswer};
  double v = std::strtod(t.c_str(), nullptr);
  if (out_score) *out_score = v;
  if (v < cfg.score_min || v > cfg.score_max) return {0, AccError::ScoreOutOfRange};
  return {1, std::nullopt};
}

AccResult acc_scoring(const std::string& answer, double truth_score, const RewardConfig& cfg) {
  double v = 0;
  AccResult parsed = parse_score_answer(answer, cfg, &v);
  if (parsed.error) return {0, parsed.error};
  return {std::abs(v - truth_score) < cfg.zeta ? 1 : 0, std::nullopt};
}

AccResult acc_adjustment(const DefectSet& predicted, const DefectSet& truth,
                         const RewardConfig& cfg) {
  try {
    PairPRF prf = defect_f1(predicted, truth);
    return {prf.f1 > cfg.alpha ? 1 : 0, std::nullopt};
  } catch (const Error&) {
    return {0, AccError::InvalidLabelSet};
  }
}

AccResult acc_comparison(const std::string& answer, Choice truth) {
  std::string t = lower(trim(answer));
  // Collapse internal whitespace runs.
  std::string norm;
  for (char c : t) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!norm.empty() && norm.back() != ' ') norm += ' ';
    } else {
      norm += c;
    }
  }
  if (norm == "slide a") return {truth == Choice::A ? 1 : 0, std::nullopt};
  if (norm == "slide b") return {truth == Choice::B ? 1 : 0, std::nullopt};
  return {0, AccError::UnrecognizedChoice};
}

namespace {

constexpr const char* kSentinel = "no major deficiencies found";

std::size_t earliest(const std::string& hay, std::initializer_list<const char*> aliases) {
  std::size_t best = std::string::npos;
  for (const char* a : aliases) {
    std::size_t p = hay.find(a);
    if (p != std::string::npos && p < best) best = p;
  }
  return best;
}

}  // namespace

DefectSet extract_categories(const std::string& feedback_text) {
  std::string t = lower(feedback_text);
  struct Hit { std::size_t pos; DefectCategory cat; };
  std::vector<Hit> hits;
  std::size_t p = earliest(t, {"composition & layout", "composition and layout",
                               "layout & composition", "layout and composition"});
  if (p != std::string::npos) hits.push_back({p, DefectCategory::CompositionLayout});
  p = earliest(t, {"typography"});
  if (p != std::string::npos) hits.push_back({p, DefectCategory::Typography});
  p = earliest(t, {"imagery & visualizations", "imagery and visualizations",
                   "visualizations & imagery", "visualizations and imagery"});
  if (p != std::string::npos) hits.push_back({p, DefectCategory::ImageryVisualizations});

  bool sentinel_anywhere = t.find(kSentinel) != std::string::npos;
  if (hits.empty()) {
    if (sentinel_anywhere) return {DefectCategory::NoDeficiency};
    return {};
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
  DefectSet out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    std::size_t begin = hits[i].pos;
    std::size_t end = i + 1 < hits.size() ? hits[i + 1].pos : t.size();
    std::string section = t.substr(begin, end - begin);
    if (section.find(kSentinel) == std::string::npos) out.insert(hits[i].cat);
  }
  if (out.empty() && sentinel_anywhere) return {DefectCategory::NoDeficiency};
  return out;
}

RewardBreakdown total_reward(const ParsedResponse& parsed, Task task, const TaskTruth& truth,
                             const RewardConfig& cfg) {
  RewardBreakdown rb;
  rb.r_fmt = parsed.well_formed ? 1 : 0;
  if (!parsed.well_formed) {
    rb.r_acc = 0;
    rb.r = rb.r_fmt;
    return rb;
  }
  AccResult acc;
  switch (task) {
    case Task::Scoring:
      acc = acc_scoring(parsed.answer, std::get<double>(truth), cfg);
      break;
    case Task::Adjustment:
      acc = acc_adjustment(extract_categories(parsed.answer), std::get<DefectSet>(truth), cfg);
      break;
    case Task::Comparison:
      acc = acc_comparison(parsed.answer, std::get<Choice>(truth));
      break;
  }
  rb.r_acc = acc.value;
  rb.error = acc.error;
  rb.r = rb.r_fmt + rb.r_acc;
  return rb;
}

GroupRewards group_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2)
    throw Error(ErrorCode::GroupTooSmall, "advantage groups need at least 2 members");
  GroupRewards g;
  g.rewards = rewards;
  double lo = rewards[0], hi = rewards[0], sum = 0;
  for (double r : rewards) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  std::size_t n = rewards.size();
  // Equal rewards carry no learning signal; comparing extremes avoids a
  // near-zero variance blowing up the normalization.
  if (lo == hi) {
    g.advantages.assign(n, 0.0);
    return g;
  }
  double mean = sum / static_cast<double>(n);
  double var = 0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  double sd = std::sqrt(var / static_cast<double>(n));
  g.advantages.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.advantages[i] = (rewards[i] - mean) / sd;
  return g;
}

double grpo_surrogate(const std::vector<double>& ratios, const std::vector<double>& advantages,
                      double kl_divergence, const RewardConfig& cfg) {
  if (ratios.size() != advantages.size())
    throw Error(ErrorCode::LengthMismatch, "ratio/advantage length mismatch");
  if (ratios.empty()) throw Error(ErrorCode::EmptyInput, "empty surrogate batch");
  if (kl_divergence < 0) throw Error(ErrorCode::InvalidArgument, "negative KL divergence");
  double sum = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    double rho = ratios[i];
    if (!(rho > 0)) throw Error(ErrorCode::InvalidArgument, "ratios must be positive");
    double clipped = std::min(std::max(rho, 1 - cfg.clip_delta), 1 + cfg.clip_delta);
    sum += std::min(rho * advantages[i], clipped * advantages[i]);
  }
  return sum / static_cast<double>(ratios.size()) - cfg.kl_beta * kl_divergence;
}

}  // namespace presgauge
