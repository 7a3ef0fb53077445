#include "presgauge/remote_scorer.hpp"

#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "presgauge/error.hpp"
#include "presgauge/jsonw.hpp"
#include "presgauge/rewards.hpp"

namespace presgauge {

RemoteScorer::RemoteScorer(RemoteScorerConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.base_url.empty())
    throw Error(ErrorCode::InvalidArgument, "remote scorer needs a base URL");
}

std::string RemoteScorer::post_task(const char* task, const SlideDoc& slide) {
  jsonw::Writer w;
  w.begin_object();
  w.key("slide");
  w.value_raw(encode_slide(slide));
  w.key("task");
  w.value_string(task);
  w.end_object();

  httplib::Client client(cfg_.base_url);
  time_t sec = static_cast<time_t>(cfg_.timeout_seconds);
  time_t usec = static_cast<time_t>((cfg_.timeout_seconds - sec) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Result res;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    res = client.Post("/assess", w.str(), "application/json");
    if (res) break;
  }
  if (!res)
    throw Error(ErrorCode::Transport, "no response from " + cfg_.base_url + ": " +
                                          httplib::to_string(res.error()));
  if (res->status != 200)
    throw Error(ErrorCode::Transport,
                "scorer returned HTTP " + std::to_string(res->status));

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedRemoteResponse,
                std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string())
    throw Error(ErrorCode::MalformedRemoteResponse, "response lacks a text field");
  return j["text"].get<std::string>();
}

double RemoteScorer::score(const SlideDoc& slide) {
  std::string text = post_task("scoring", slide);
  ParsedResponse parsed = parse_tagged(text);
  if (!parsed.well_formed)
    throw Error(ErrorCode::MalformedRemoteResponse,
                "scorer text is not a single think/answer pair");
  double value = 0;
  RewardConfig rc;
  AccResult res = parse_score_answer(parsed.answer, rc, &value);
  if (res.error == AccError::ScoreOutOfRange)
    throw Error(ErrorCode::ScoreOutOfRange, "scorer answered " + parsed.answer);
  if (res.error)
    throw Error(ErrorCode::MalformedRemoteResponse,
                "scorer answer is not a score: '" + parsed.answer + "'");
  return value;
}

Feedback RemoteScorer::feedback(const SlideDoc& slide) {
  std::string text = post_task("adjustment", slide);
  ParsedResponse parsed = parse_tagged(text);
  if (!parsed.well_formed)
    throw Error(ErrorCode::MalformedRemoteResponse,
                "feedback text is not a single think/answer pair");
  DefectSet cats = extract_categories(parsed.answer);
  Feedback fb;
  for (DefectCategory c : cats) {
    FeedbackItem item;
    item.category = c;
    item.note = "reported by external scorer";
    switch (c) {
      case DefectCategory::CompositionLayout: item.suggested_op = FeedbackOp::Respace; break;
      case DefectCategory::Typography: item.suggested_op = FeedbackOp::NormalizeFonts; break;
      case DefectCategory::ImageryVisualizations: item.suggested_op = FeedbackOp::FixAspect; break;
      case DefectCategory::NoDeficiency: break;
    }
    fb.items.push_back(std::move(item));
  }
  if (fb.items.empty())
    fb.items.push_back({DefectCategory::NoDeficiency, {}, std::nullopt,
                        "No major deficiencies found."});
  return fb;
}

}  // namespace presgauge
