#pragma once

#include <string>

#include "presgauge/checker.hpp"

namespace presgauge {

struct RemoteScorerConfig {
  std::string base_url;  // scheme://host:port
  double timeout_seconds = 5.0;
  int retries = 2;  // extra attempts after a transport failure
};

// HTTP adapter for an external scoring service. POSTs
// {"slide": <slide JSON>, "task": "scoring"|"adjustment"} to /assess and
// expects {"text": "<think>...</think><answer>...</answer>"}; the answer is
// validated exactly like a local model response. Throws Transport,
// MalformedRemoteResponse, or ScoreOutOfRange.
class RemoteScorer : public Scorer {
 public:
  explicit RemoteScorer(RemoteScorerConfig cfg);
  double score(const SlideDoc& slide) override;
  Feedback feedback(const SlideDoc& slide) override;

 private:
  std::string post_task(const char* task, const SlideDoc& slide);
  RemoteScorerConfig cfg_;
};

}  // namespace presgauge
