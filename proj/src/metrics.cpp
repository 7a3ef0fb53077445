#include "presgauge/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "presgauge/error.hpp"

namespace presgauge {

BalanceBreakdown layout_balance(const SlideDoc& slide) {
  double total_area = 0, mx = 0, my = 0;
  for (const Element& e : slide.elements) {
    if (e.background) continue;
    double a = e.bbox.area();
    total_area += a;
    mx += a * e.bbox.cx();
    my += a * e.bbox.cy();
  }
  if (total_area <= 0) throw Error(ErrorCode::NoElements, "no non-background elements");
  BalanceBreakdown bb;
  bb.com_x = mx / total_area;
  bb.com_y = my / total_area;
  bb.d = std::hypot(bb.com_x - 0.5, bb.com_y - 0.5);
  bb.balance = std::max(0.0, 1.0 - bb.d / kBalanceDMax);
  return bb;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!cur.empty()) { out.push_back(cur); cur.clear(); }
    } else if (std::ispunct(c)) {
      continue;
    } else {
      cur += static_cast<char>(std::tolower(c));
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) cur[j] = prev[j - 1] + 1;
      else cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeResult rouge_l(const std::vector<std::string>& candidate,
                    const std::vector<std::string>& reference, double beta) {
  if (candidate.empty() || reference.empty())
    throw Error(ErrorCode::EmptyInput, "rouge_l requires nonempty token lists");
  RougeResult r;
  r.lcs_len = lcs_length(candidate, reference);
  r.precision = static_cast<double>(r.lcs_len) / static_cast<double>(candidate.size());
  r.recall = static_cast<double>(r.lcs_len) / static_cast<double>(reference.size());
  double denom = beta * beta * r.recall + r.precision;
  r.f_score = denom == 0 ? 0.0 : (1 + beta * beta) * r.recall * r.precision / denom;
  return r;
}

double mae(const std::vector<double>& predictions, const std::vector<double>& truths) {
  if (predictions.size() != truths.size())
    throw Error(ErrorCode::LengthMismatch, "mae inputs differ in length");
  if (predictions.empty()) throw Error(ErrorCode::EmptyInput, "mae over empty input");
  double sum = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    sum += std::abs(predictions[i] - truths[i]);
  return sum / static_cast<double>(predictions.size());
}

namespace {

void check_label_set(const DefectSet& s, const char* side) {
  if (s.count(DefectCategory::NoDeficiency) && s.size() > 1)
    throw Error(ErrorCode::InvalidLabelSet,
                std::string(side) + " mixes no_deficiency with defect categories");
}

}  // namespace

PairPRF defect_f1(const DefectSet& predicted, const DefectSet& truth) {
  check_label_set(predicted, "predicted");
  check_label_set(truth, "truth");
  PairPRF r;
  if (predicted.empty() && truth.empty()) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  std::size_t inter = 0;
  for (DefectCategory c : predicted) inter += truth.count(c);
  r.precision = predicted.empty() ? 0.0 : static_cast<double>(inter) / predicted.size();
  r.recall = truth.empty() ? 0.0 : static_cast<double>(inter) / truth.size();
  double denom = r.precision + r.recall;
  r.f1 = denom == 0 ? 0.0 : 2 * r.precision * r.recall / denom;
  return r;
}

DefectF1Report aggregate_defect_f1(const std::vector<DefectSet>& predicted,
                                   const std::vector<DefectSet>& truth) {
  if (predicted.size() != truth.size())
    throw Error(ErrorCode::LengthMismatch, "defect_f1 inputs differ in length");
  static constexpr DefectCategory kOrder[] = {
      DefectCategory::CompositionLayout, DefectCategory::Typography,
      DefectCategory::ImageryVisualizations, DefectCategory::NoDeficiency};
  DefectF1Report rep;
  rep.records = predicted.size();
  double macro_sum = 0;
  for (DefectCategory cat : kOrder) {
    CategoryPRF c;
    c.category = cat;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      check_label_set(predicted[i], "predicted");
      check_label_set(truth[i], "truth");
      bool p = predicted[i].count(cat) > 0;
      bool t = truth[i].count(cat) > 0;
      if (p && t) ++c.tp;
      else if (p) ++c.fp;
      else if (t) ++c.fn;
      if (t) ++c.support;
    }
    c.precision = (c.tp + c.fp) == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
    c.recall = (c.tp + c.fn) == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
    double denom = c.precision + c.recall;
    c.f1 = denom == 0 ? 0.0 : 2 * c.precision * c.recall / denom;
    if (cat != DefectCategory::NoDeficiency) macro_sum += c.f1;
    rep.per_category.push_back(c);
  }
  rep.macro_f1 = macro_sum / 3.0;
  return rep;
}

double comparison_accuracy(const std::vector<Choice>& predictions,
                           const std::vector<Choice>& truths) {
  if (predictions.size() != truths.size())
    throw Error(ErrorCode::LengthMismatch, "comparison inputs differ in length");
  if (predictions.empty()) throw Error(ErrorCode::EmptyInput, "comparison over empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == truths[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace presgauge
