#include "presgauge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "presgauge/error.hpp"
#include "presgauge/jsonw.hpp"
#include "presgauge/metrics.hpp"
#include "presgauge/remote_scorer.hpp"
#include "presgauge/render.hpp"
#include "presgauge/rng.hpp"

namespace presgauge {

namespace {

using jsonw::fixed6;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

struct Line {
  int number;
  std::string text;
};

std::vector<Line> split_lines(const std::string& blob) {
  std::vector<Line> out;
  int n = 0;
  std::size_t pos = 0;
  while (pos <= blob.size()) {
    std::size_t nl = blob.find('\n', pos);
    std::string line =
        blob.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    ++n;
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back({n, line});
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return out;
}

[[noreturn]] void schema_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

// ---------------------------------------------------------------- config

std::string encode_config(const HarnessConfig& cfg) {
  jsonw::Writer w;
  w.begin_object();

  w.key("aesth");
  w.begin_object();
  w.key("aspect_threshold"); w.value_double(cfg.aesth.aspect_threshold);
  w.key("balance_threshold"); w.value_double(cfg.aesth.balance_threshold);
  w.key("coverage_height"); w.value_int(cfg.aesth.coverage_height);
  w.key("coverage_width"); w.value_int(cfg.aesth.coverage_width);
  w.key("font_threshold"); w.value_double(cfg.aesth.font_threshold);
  w.key("legibility_threshold"); w.value_double(cfg.aesth.legibility_threshold);
  w.key("margin"); w.value_double(cfg.aesth.margin);
  w.key("margin_grace"); w.value_double(cfg.aesth.margin_grace);
  w.key("max_letter_spacing"); w.value_double(cfg.aesth.max_letter_spacing);
  w.key("max_line_spacing"); w.value_double(cfg.aesth.max_line_spacing);
  w.key("min_font_size"); w.value_double(cfg.aesth.min_font_size);
  w.key("overlap_threshold"); w.value_double(cfg.aesth.overlap_threshold);
  w.key("overflow_threshold"); w.value_double(cfg.aesth.overflow_threshold);
  w.key("weights");
  w.begin_object();
  w.key("balance"); w.value_double(cfg.aesth.weights.balance);
  w.key("font_hierarchy"); w.value_double(cfg.aesth.weights.font_hierarchy);
  w.key("image_aspect"); w.value_double(cfg.aesth.weights.image_aspect);
  w.key("legibility"); w.value_double(cfg.aesth.weights.legibility);
  w.key("overflow"); w.value_double(cfg.aesth.weights.overflow);
  w.key("overlap"); w.value_double(cfg.aesth.weights.overlap);
  w.key("whitespace"); w.value_double(cfg.aesth.weights.whitespace);
  w.end_object();
  w.key("whitespace_threshold"); w.value_double(cfg.aesth.whitespace_threshold);
  w.end_object();

  w.key("checker");
  w.begin_object();
  w.key("max_iters"); w.value_int(cfg.checker.max_iters);
  w.key("revert_to_best"); w.value_bool(cfg.checker.revert_to_best);
  w.key("threshold"); w.value_double(cfg.checker.threshold);
  w.end_object();

  w.key("format");
  w.value_string(cfg.format);
  w.key("jobs");
  w.value_int(cfg.jobs);

  w.key("perturb");
  w.begin_object();
  w.key("alignment_jitter"); w.value_double(cfg.perturb.alignment_jitter);
  w.key("aspect_stretch"); w.value_double(cfg.perturb.aspect_stretch);
  w.key("downscale_span"); w.value_double(cfg.perturb.downscale_span);
  w.key("font_scale_span"); w.value_double(cfg.perturb.font_scale_span);
  w.key("redraw_attempts"); w.value_int(cfg.perturb.redraw_attempts);
  w.key("reposition_max_offset"); w.value_double(cfg.perturb.reposition_max_offset);
  w.key("scale_span"); w.value_double(cfg.perturb.scale_span);
  w.key("spacing_compress"); w.value_double(cfg.perturb.spacing_compress);
  w.end_object();

  w.key("planner");
  w.begin_object();
  w.key("balance_target"); w.value_double(cfg.planner.balance_target);
  w.key("caption_max_chars"); w.value_uint(cfg.planner.caption_max_chars);
  w.key("caption_ratio"); w.value_double(cfg.planner.caption_ratio);
  w.key("char_width_ratio"); w.value_double(cfg.planner.char_width_ratio);
  w.key("gap"); w.value_double(cfg.planner.gap);
  w.key("grid_cols"); w.value_int(cfg.planner.grid_cols);
  w.key("line_spacing"); w.value_double(cfg.planner.line_spacing);
  w.key("margin"); w.value_double(cfg.planner.margin);
  w.key("max_body_font"); w.value_double(cfg.planner.max_body_font);
  w.key("min_body_font"); w.value_double(cfg.planner.min_body_font);
  w.key("start_body_font"); w.value_double(cfg.planner.start_body_font);
  w.key("title_ratio"); w.value_double(cfg.planner.title_ratio);
  w.end_object();

  w.key("reward");
  w.begin_object();
  w.key("alpha"); w.value_double(cfg.reward.alpha);
  w.key("clip_delta"); w.value_double(cfg.reward.clip_delta);
  w.key("group_size"); w.value_int(cfg.reward.group_size);
  w.key("kl_beta"); w.value_double(cfg.reward.kl_beta);
  w.key("score_max"); w.value_double(cfg.reward.score_max);
  w.key("score_min"); w.value_double(cfg.reward.score_min);
  w.key("zeta"); w.value_double(cfg.reward.zeta);
  w.end_object();

  w.key("scorer_url");
  w.value_string(cfg.scorer_url);
  w.end_object();
  return w.str();
}

std::string config_fingerprint(const HarnessConfig& cfg) {
  std::string dump = encode_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  static const char* hexd = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hexd[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf, 16);
}

namespace {

void overlay_double(const nlohmann::json& j, const char* key, double* dst) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) throw Error(ErrorCode::DecodeError, std::string(key) + " must be a number");
  *dst = j[key].get<double>();
}

void overlay_int(const nlohmann::json& j, const char* key, int* dst) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_integer())
    throw Error(ErrorCode::DecodeError, std::string(key) + " must be an integer");
  *dst = j[key].get<int>();
}

void overlay_bool(const nlohmann::json& j, const char* key, bool* dst) {
  if (!j.contains(key)) return;
  if (!j[key].is_boolean())
    throw Error(ErrorCode::DecodeError, std::string(key) + " must be a boolean");
  *dst = j[key].get<bool>();
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok)
      throw Error(ErrorCode::DecodeError,
                  std::string("unknown config key '") + it.key() + "' in " + where);
  }
}

}  // namespace

HarnessConfig load_config(const std::string& path, HarnessConfig base) {
  std::string blob = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(blob);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::DecodeError,
                "config parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::DecodeError, "config must be a JSON object");
  check_keys(j, {"aesth", "checker", "format", "jobs", "perturb", "planner", "reward",
                 "scorer_url"},
             "config root");

  if (j.contains("reward")) {
    const auto& r = j["reward"];
    check_keys(r, {"alpha", "clip_delta", "group_size", "kl_beta", "score_max", "score_min",
                   "zeta"},
               "reward");
    overlay_double(r, "alpha", &base.reward.alpha);
    overlay_double(r, "zeta", &base.reward.zeta);
    overlay_double(r, "score_min", &base.reward.score_min);
    overlay_double(r, "score_max", &base.reward.score_max);
    overlay_int(r, "group_size", &base.reward.group_size);
    overlay_double(r, "clip_delta", &base.reward.clip_delta);
    overlay_double(r, "kl_beta", &base.reward.kl_beta);
  }
  if (j.contains("checker")) {
    const auto& c = j["checker"];
    check_keys(c, {"max_iters", "revert_to_best", "threshold"}, "checker");
    overlay_int(c, "max_iters", &base.checker.max_iters);
    overlay_double(c, "threshold", &base.checker.threshold);
    overlay_bool(c, "revert_to_best", &base.checker.revert_to_best);
  }
  if (j.contains("aesth")) {
    const auto& a = j["aesth"];
    check_keys(a,
               {"aspect_threshold", "balance_threshold", "coverage_height", "coverage_width",
                "font_threshold", "legibility_threshold", "margin", "margin_grace",
                "max_letter_spacing", "max_line_spacing", "min_font_size",
                "overlap_threshold", "overflow_threshold", "weights",
                "whitespace_threshold"},
               "aesth");
    overlay_double(a, "aspect_threshold", &base.aesth.aspect_threshold);
    overlay_double(a, "balance_threshold", &base.aesth.balance_threshold);
    overlay_int(a, "coverage_height", &base.aesth.coverage_height);
    overlay_int(a, "coverage_width", &base.aesth.coverage_width);
    overlay_double(a, "font_threshold", &base.aesth.font_threshold);
    overlay_double(a, "legibility_threshold", &base.aesth.legibility_threshold);
    overlay_double(a, "margin", &base.aesth.margin);
    overlay_double(a, "margin_grace", &base.aesth.margin_grace);
    overlay_double(a, "max_letter_spacing", &base.aesth.max_letter_spacing);
    overlay_double(a, "max_line_spacing", &base.aesth.max_line_spacing);
    overlay_double(a, "min_font_size", &base.aesth.min_font_size);
    overlay_double(a, "overlap_threshold", &base.aesth.overlap_threshold);
    overlay_double(a, "overflow_threshold", &base.aesth.overflow_threshold);
    overlay_double(a, "whitespace_threshold", &base.aesth.whitespace_threshold);
    if (a.contains("weights")) {
      const auto& w = a["weights"];
      check_keys(w,
                 {"balance", "font_hierarchy", "image_aspect", "legibility", "overflow",
                  "overlap", "whitespace"},
                 "aesth.weights");
      overlay_double(w, "balance", &base.aesth.weights.balance);
      overlay_double(w, "overlap", &base.aesth.weights.overlap);
      overlay_double(w, "overflow", &base.aesth.weights.overflow);
      overlay_double(w, "whitespace", &base.aesth.weights.whitespace);
      overlay_double(w, "font_hierarchy", &base.aesth.weights.font_hierarchy);
      overlay_double(w, "legibility", &base.aesth.weights.legibility);
      overlay_double(w, "image_aspect", &base.aesth.weights.image_aspect);
    }
  }
  if (j.contains("planner")) {
    const auto& p = j["planner"];
    check_keys(p,
               {"balance_target", "caption_max_chars", "caption_ratio", "char_width_ratio",
                "gap", "grid_cols", "line_spacing", "margin", "max_body_font",
                "min_body_font", "start_body_font", "title_ratio"},
               "planner");
    overlay_double(p, "balance_target", &base.planner.balance_target);
    overlay_double(p, "caption_ratio", &base.planner.caption_ratio);
    overlay_double(p, "char_width_ratio", &base.planner.char_width_ratio);
    overlay_double(p, "gap", &base.planner.gap);
    overlay_int(p, "grid_cols", &base.planner.grid_cols);
    overlay_double(p, "line_spacing", &base.planner.line_spacing);
    overlay_double(p, "margin", &base.planner.margin);
    overlay_double(p, "max_body_font", &base.planner.max_body_font);
    overlay_double(p, "min_body_font", &base.planner.min_body_font);
    overlay_double(p, "start_body_font", &base.planner.start_body_font);
    overlay_double(p, "title_ratio", &base.planner.title_ratio);
    if (p.contains("caption_max_chars")) {
      if (!p["caption_max_chars"].is_number_unsigned())
        throw Error(ErrorCode::DecodeError, "caption_max_chars must be a non-negative integer");
      base.planner.caption_max_chars = p["caption_max_chars"].get<std::size_t>();
    }
  }
  if (j.contains("perturb")) {
    const auto& p = j["perturb"];
    check_keys(p,
               {"alignment_jitter", "aspect_stretch", "downscale_span", "font_scale_span",
                "redraw_attempts", "reposition_max_offset", "scale_span",
                "spacing_compress"},
               "perturb");
    overlay_double(p, "alignment_jitter", &base.perturb.alignment_jitter);
    overlay_double(p, "aspect_stretch", &base.perturb.aspect_stretch);
    overlay_double(p, "downscale_span", &base.perturb.downscale_span);
    overlay_double(p, "font_scale_span", &base.perturb.font_scale_span);
    overlay_int(p, "redraw_attempts", &base.perturb.redraw_attempts);
    overlay_double(p, "reposition_max_offset", &base.perturb.reposition_max_offset);
    overlay_double(p, "scale_span", &base.perturb.scale_span);
    overlay_double(p, "spacing_compress", &base.perturb.spacing_compress);
  }
  if (j.contains("scorer_url")) {
    if (!j["scorer_url"].is_string())
      throw Error(ErrorCode::DecodeError, "scorer_url must be a string");
    base.scorer_url = j["scorer_url"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string() ||
        (j["format"] != "json" && j["format"] != "md"))
      throw Error(ErrorCode::DecodeError, "format must be \"json\" or \"md\"");
    base.format = j["format"].get<std::string>();
  }
  overlay_int(j, "jobs", &base.jobs);
  return base;
}

// ------------------------------------------------------------------ eval

namespace {

struct Outcome {
  Task task = Task::Scoring;
  double truth_score = 0;
  std::optional<double> pred_score;
  DefectSet truth_labels, pred_labels;
  Choice truth_choice = Choice::A;
  std::optional<Choice> pred_choice;
};

std::optional<Choice> parse_choice_token(std::string t) {
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::size_t b = t.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return std::nullopt;
  std::size_t e = t.find_last_not_of(" \t\r\n");
  t = t.substr(b, e - b + 1);
  if (t == "a" || t == "slide a") return Choice::A;
  if (t == "b" || t == "slide b") return Choice::B;
  return std::nullopt;
}

DefectSet parse_label_array(const nlohmann::json& arr, int line, const char* field) {
  DefectSet out;
  for (const auto& v : arr) {
    if (!v.is_string()) schema_fail(line, std::string(field) + " entries must be strings");
    auto cat = defect_from_string(v.get<std::string>());
    if (!cat) schema_fail(line, "unknown category '" + v.get<std::string>() + "'");
    out.insert(*cat);
  }
  if (out.count(DefectCategory::NoDeficiency) && out.size() > 1)
    schema_fail(line, std::string(field) + " mixes no_deficiency with defects");
  return out;
}

Outcome parse_eval_record(const Line& ln, const RewardConfig& rcfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ln.text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_fail(ln.number, e.what());
  }
  if (!j.is_object()) schema_fail(ln.number, "record must be an object");
  if (!j.contains("id") || !j["id"].is_string()) schema_fail(ln.number, "missing string id");
  if (j.contains("schema_version") &&
      (!j["schema_version"].is_number_integer() || j["schema_version"] != 1))
    schema_fail(ln.number, "unsupported schema_version");
  if (!j.contains("task") || !j["task"].is_string())
    schema_fail(ln.number, "missing string task");
  auto task = task_from_string(j["task"].get<std::string>());
  if (!task) schema_fail(ln.number, "unknown task '" + j["task"].get<std::string>() + "'");
  if (!j.contains("truth")) schema_fail(ln.number, "missing truth");
  bool has_pred = j.contains("prediction");
  bool has_text = j.contains("response_text");
  if (!has_pred && !has_text)
    schema_fail(ln.number, "record needs prediction or response_text");
  if (has_text && !j["response_text"].is_string())
    schema_fail(ln.number, "response_text must be a string");

  Outcome o;
  o.task = *task;
  switch (*task) {
    case Task::Scoring: {
      if (!j["truth"].is_number()) schema_fail(ln.number, "scoring truth must be a number");
      o.truth_score = j["truth"].get<double>();
      if (has_pred) {
        if (!j["prediction"].is_number())
          schema_fail(ln.number, "scoring prediction must be a number");
        double v = j["prediction"].get<double>();
        if (v >= rcfg.score_min && v <= rcfg.score_max) o.pred_score = v;
      } else {
        ParsedResponse pr = parse_tagged(j["response_text"].get<std::string>());
        if (pr.well_formed) {
          double v = 0;
          AccResult res = parse_score_answer(pr.answer, rcfg, &v);
          if (!res.error) o.pred_score = v;
        }
      }
      break;
    }
    case Task::Adjustment: {
      if (!j["truth"].is_array()) schema_fail(ln.number, "adjustment truth must be an array");
      o.truth_labels = parse_label_array(j["truth"], ln.number, "truth");
      if (has_pred) {
        if (!j["prediction"].is_array())
          schema_fail(ln.number, "adjustment prediction must be an array");
        o.pred_labels = parse_label_array(j["prediction"], ln.number, "prediction");
      } else {
        ParsedResponse pr = parse_tagged(j["response_text"].get<std::string>());
        if (pr.well_formed) o.pred_labels = extract_categories(pr.answer);
      }
      break;
    }
    case Task::Comparison: {
      if (!j["truth"].is_string())
        schema_fail(ln.number, "comparison truth must be a string");
      auto truth = parse_choice_token(j["truth"].get<std::string>());
      if (!truth) schema_fail(ln.number, "comparison truth must name slide a or b");
      o.truth_choice = *truth;
      if (has_pred) {
        if (!j["prediction"].is_string())
          schema_fail(ln.number, "comparison prediction must be a string");
        o.pred_choice = parse_choice_token(j["prediction"].get<std::string>());
      } else {
        ParsedResponse pr = parse_tagged(j["response_text"].get<std::string>());
        if (pr.well_formed) o.pred_choice = parse_choice_token(pr.answer);
      }
      break;
    }
  }
  return o;
}

// Parse every record, optionally across threads; the first schema error in
// file order wins so parallel runs report exactly what a sequential run
// would.
std::vector<Outcome> parse_all(const std::vector<Line>& lines, const RewardConfig& rcfg,
                               int jobs) {
  std::vector<Outcome> outcomes(lines.size());
  std::vector<std::string> errors(lines.size());
  auto work = [&](std::size_t i) {
    try {
      outcomes[i] = parse_eval_record(lines[i], rcfg);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };
  if (jobs <= 1 || lines.size() < 2) {
    for (std::size_t i = 0; i < lines.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(lines.size()));
    for (int t = 0; t < n; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= lines.size()) return;
          work(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (!errors[i].empty()) throw Error(ErrorCode::SchemaViolation, errors[i]);
  return outcomes;
}

struct ScoringAgg {
  std::size_t count = 0, parse_failures = 0;
  std::vector<double> preds, truths;
};
struct AdjustmentAgg {
  std::vector<DefectSet> preds, truths;
};
struct ComparisonAgg {
  std::size_t count = 0, hits = 0, unrecognized = 0;
};

void emit_eval_json(std::ostream& out, const HarnessConfig& cfg, std::size_t records,
                    const ScoringAgg& sc, const AdjustmentAgg& adj, const ComparisonAgg& cmp) {
  jsonw::Writer w;
  w.begin_object();
  w.key("config_fingerprint");
  w.value_string(config_fingerprint(cfg));
  w.key("records");
  w.value_uint(records);
  w.key("schema_version");
  w.value_int(1);
  w.key("seed");
  w.value_uint(cfg.seed);
  w.key("tasks");
  w.begin_object();
  if (!adj.truths.empty()) {
    DefectF1Report rep = aggregate_defect_f1(adj.preds, adj.truths);
    w.key("adjustment");
    w.begin_object();
    w.key("count");
    w.value_uint(adj.truths.size());
    w.key("macro_f1");
    w.value_double(rep.macro_f1);
    w.key("per_category");
    w.begin_object();
    std::vector<const CategoryPRF*> cats;
    for (const CategoryPRF& c : rep.per_category) cats.push_back(&c);
    std::sort(cats.begin(), cats.end(), [](const CategoryPRF* a, const CategoryPRF* b) {
      return std::string(to_string(a->category)) < to_string(b->category);
    });
    for (const CategoryPRF* c : cats) {
      w.key(to_string(c->category));
      w.begin_object();
      w.key("f1"); w.value_double(c->f1);
      w.key("fn"); w.value_uint(c->fn);
      w.key("fp"); w.value_uint(c->fp);
      w.key("precision"); w.value_double(c->precision);
      w.key("recall"); w.value_double(c->recall);
      w.key("support"); w.value_uint(c->support);
      w.key("tp"); w.value_uint(c->tp);
      w.end_object();
    }
    w.end_object();
    w.end_object();
  }
  if (cmp.count > 0) {
    w.key("comparison");
    w.begin_object();
    w.key("accuracy");
    w.value_double(static_cast<double>(cmp.hits) / cmp.count);
    w.key("count");
    w.value_uint(cmp.count);
    w.key("unrecognized");
    w.value_uint(cmp.unrecognized);
    w.end_object();
  }
  if (sc.count > 0) {
    w.key("scoring");
    w.begin_object();
    w.key("count");
    w.value_uint(sc.count);
    w.key("mae");
    if (sc.preds.empty()) w.value_null();
    else w.value_double(mae(sc.preds, sc.truths));
    w.key("parse_failures");
    w.value_uint(sc.parse_failures);
    w.end_object();
  }
  w.end_object();
  w.end_object();
  out << w.str() << "\n";
}

void emit_eval_md(std::ostream& out, const HarnessConfig& cfg, std::size_t records,
                  const ScoringAgg& sc, const AdjustmentAgg& adj, const ComparisonAgg& cmp) {
  out << "# Evaluation report\n\n";
  out << "- records: " << records << "\n";
  out << "- seed: " << cfg.seed << "\n";
  out << "- config: `" << config_fingerprint(cfg) << "`\n";
  if (!adj.truths.empty()) {
    DefectF1Report rep = aggregate_defect_f1(adj.preds, adj.truths);
    out << "\n## Adjustment\n\n";
    out << "| category | precision | recall | f1 | support |\n";
    out << "|---|---:|---:|---:|---:|\n";
    for (const CategoryPRF& c : rep.per_category) {
      out << "| " << to_string(c.category) << " | " << fixed6(c.precision) << " | "
          << fixed6(c.recall) << " | " << fixed6(c.f1) << " | " << c.support << " |\n";
    }
    out << "\nmacro F1 (defect categories): " << fixed6(rep.macro_f1) << "\n";
  }
  if (cmp.count > 0) {
    out << "\n## Comparison\n\n";
    out << "| count | correct | unrecognized | accuracy |\n";
    out << "|---:|---:|---:|---:|\n";
    out << "| " << cmp.count << " | " << cmp.hits << " | " << cmp.unrecognized << " | "
        << fixed6(static_cast<double>(cmp.hits) / cmp.count) << " |\n";
  }
  if (sc.count > 0) {
    out << "\n## Scoring\n\n";
    out << "| count | parse failures | mae |\n";
    out << "|---:|---:|---:|\n";
    out << "| " << sc.count << " | " << sc.parse_failures << " | "
        << (sc.preds.empty() ? std::string("n/a") : fixed6(mae(sc.preds, sc.truths)))
        << " |\n";
  }
}

}  // namespace

int cmd_eval(const EvalOptions& opt, const HarnessConfig& cfg, std::ostream& out,
             std::ostream& err) {
  std::string blob;
  try {
    blob = read_file(opt.dataset_path);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  std::vector<Line> lines = split_lines(blob);

  std::vector<Outcome> outcomes;
  try {
    outcomes = parse_all(lines, cfg.reward, cfg.jobs);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }

  ScoringAgg sc;
  AdjustmentAgg adj;
  ComparisonAgg cmp;
  std::size_t used = 0;
  for (const Outcome& o : outcomes) {
    if (!opt.task_filter.empty() && opt.task_filter != to_string(o.task)) continue;
    ++used;
    switch (o.task) {
      case Task::Scoring:
        ++sc.count;
        if (o.pred_score) {
          sc.preds.push_back(*o.pred_score);
          sc.truths.push_back(o.truth_score);
        } else {
          ++sc.parse_failures;
        }
        break;
      case Task::Adjustment:
        adj.preds.push_back(o.pred_labels);
        adj.truths.push_back(o.truth_labels);
        break;
      case Task::Comparison:
        ++cmp.count;
        if (!o.pred_choice) ++cmp.unrecognized;
        else if (*o.pred_choice == o.truth_choice) ++cmp.hits;
        break;
    }
  }
  if (used == 0) {
    err << "no records" << (opt.task_filter.empty() ? "" : " for task " + opt.task_filter)
        << " in " << opt.dataset_path << "\n";
    return kExitEmpty;
  }

  if (cfg.format == "md") emit_eval_md(out, cfg, used, sc, adj, cmp);
  else emit_eval_json(out, cfg, used, sc, adj, cmp);
  return kExitOk;
}

// --------------------------------------------------------------- perturb

int cmd_perturb(const PerturbOptions& opt, const HarnessConfig& cfg, std::ostream& out,
                std::ostream& err) {
  std::vector<SlideDoc> deck;
  try {
    deck = decode_deck(read_file(opt.corpus_path));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  if (deck.empty()) {
    err << "no slides in " << opt.corpus_path << "\n";
    return kExitEmpty;
  }
  if (opt.count > 0 && static_cast<std::size_t>(opt.count) < deck.size())
    deck.resize(opt.count);

  std::string buffer;
  for (const SlideDoc& slide : deck) {
    std::uint64_t slide_seed = Rng(cfg.seed, "perturb/" + slide.id).next_u64();
    VariantTriple triple;
    try {
      triple = make_variants(slide, slide_seed, cfg.perturb, cfg.planner);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotApplicable) {
        err << "skipping " << slide.id << ": " << e.what() << "\n";
        continue;
      }
      err << e.what() << "\n";
      return kExitFailure;
    }
    for (const SlidePair& p : make_pairs(triple, slide_seed)) {
      buffer += encode_pair(p);
      buffer += '\n';
    }
  }
  if (opt.out_path.empty()) {
    out << buffer;
  } else {
    try {
      write_file(opt.out_path, buffer);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kExitFailure;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- reward

namespace {

struct RewardRow {
  std::string id;
  RewardBreakdown rb;
  std::optional<double> advantage;
};

RewardRow parse_reward_record(const Line& ln, const RewardConfig& rcfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ln.text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_fail(ln.number, e.what());
  }
  if (!j.is_object()) schema_fail(ln.number, "record must be an object");
  if (!j.contains("id") || !j["id"].is_string()) schema_fail(ln.number, "missing string id");
  if (!j.contains("task") || !j["task"].is_string())
    schema_fail(ln.number, "missing string task");
  auto task = task_from_string(j["task"].get<std::string>());
  if (!task) schema_fail(ln.number, "unknown task '" + j["task"].get<std::string>() + "'");
  if (!j.contains("response_text") || !j["response_text"].is_string())
    schema_fail(ln.number, "missing string response_text");
  if (!j.contains("truth")) schema_fail(ln.number, "missing truth");

  TaskTruth truth;
  switch (*task) {
    case Task::Scoring:
      if (!j["truth"].is_number()) schema_fail(ln.number, "scoring truth must be a number");
      truth = j["truth"].get<double>();
      break;
    case Task::Adjustment:
      if (!j["truth"].is_array()) schema_fail(ln.number, "adjustment truth must be an array");
      truth = parse_label_array(j["truth"], ln.number, "truth");
      break;
    case Task::Comparison: {
      if (!j["truth"].is_string())
        schema_fail(ln.number, "comparison truth must be a string");
      auto c = parse_choice_token(j["truth"].get<std::string>());
      if (!c) schema_fail(ln.number, "comparison truth must name slide a or b");
      truth = *c;
      break;
    }
  }
  RewardRow row;
  row.id = j["id"].get<std::string>();
  ParsedResponse parsed = parse_tagged(j["response_text"].get<std::string>());
  row.rb = total_reward(parsed, *task, truth, rcfg);
  return row;
}

}  // namespace

int cmd_reward(const RewardOptions& opt, const HarnessConfig& cfg, std::ostream& out,
               std::ostream& err) {
  std::string blob;
  try {
    blob = read_file(opt.responses_path);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  std::vector<Line> lines = split_lines(blob);
  std::vector<RewardRow> rows;
  try {
    for (const Line& ln : lines) rows.push_back(parse_reward_record(ln, cfg.reward));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  if (rows.empty()) {
    err << "no records in " << opt.responses_path << "\n";
    return kExitEmpty;
  }

  // Consecutive groups of N; a trailing fragment still gets advantages
  // when at least two rewards are in it.
  std::size_t n = static_cast<std::size_t>(std::max(2, cfg.reward.group_size));
  for (std::size_t start = 0; start < rows.size(); start += n) {
    std::size_t end = std::min(rows.size(), start + n);
    if (end - start < 2) break;
    std::vector<double> rewards;
    for (std::size_t i = start; i < end; ++i)
      rewards.push_back(static_cast<double>(rows[i].rb.r));
    GroupRewards g = group_advantages(rewards);
    for (std::size_t i = start; i < end; ++i) rows[i].advantage = g.advantages[i - start];
  }

  for (const RewardRow& row : rows) {
    jsonw::Writer w;
    w.begin_object();
    if (row.advantage) {
      w.key("advantage");
      w.value_double(*row.advantage);
    }
    if (row.rb.error) {
      w.key("error");
      w.value_string(to_string(*row.rb.error));
    }
    w.key("id");
    w.value_string(row.id);
    w.key("r");
    w.value_int(row.rb.r);
    w.key("r_acc");
    w.value_int(row.rb.r_acc);
    w.key("r_fmt");
    w.value_int(row.rb.r_fmt);
    w.key("schema_version");
    w.value_int(1);
    w.end_object();
    out << w.str() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- refine

int cmd_refine(const RefineOptions& opt, const HarnessConfig& cfg, std::ostream& out,
               std::ostream& err) {
  std::vector<SlideDoc> deck;
  try {
    deck = decode_deck(read_file(opt.deck_path));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  if (deck.empty()) {
    err << "no slides in " << opt.deck_path << "\n";
    return kExitEmpty;
  }

  HeuristicScorer heuristic(cfg.aesth);
  std::unique_ptr<RemoteScorer> remote;
  Scorer* scorer = &heuristic;
  if (!cfg.scorer_url.empty()) {
    remote = std::make_unique<RemoteScorer>(RemoteScorerConfig{cfg.scorer_url});
    scorer = remote.get();
  }
  OpRefiner refiner(cfg.planner);

  std::string refined_lines;
  jsonw::Writer traces;
  traces.begin_array();
  for (const SlideDoc& slide : deck) {
    RefinementResult res;
    try {
      res = run_refinement(slide, *scorer, refiner, cfg.checker);
    } catch (const RefinementError& e) {
      err << e.what() << "\n";
      return e.inner_code() == ErrorCode::Transport ? kExitTransport : kExitFailure;
    }
    SlideDoc final = res.final;
    if (final.id.empty()) final.id = slide.id;
    refined_lines += encode_slide(final);
    refined_lines += '\n';

    traces.begin_object();
    traces.key("best_index");
    traces.value_int(res.trace.best_index);
    traces.key("early_exit");
    traces.value_bool(res.trace.early_exit);
    traces.key("final_score");
    traces.value_double(res.final_score);
    traces.key("id");
    traces.value_string(slide.id);
    traces.key("iterations");
    traces.begin_array();
    for (const IterationRecord& r : res.trace.records) {
      traces.begin_object();
      traces.key("feedback_summary");
      traces.value_string(r.feedback_summary);
      traces.key("refined");
      traces.value_bool(r.refined);
      traces.key("reverted");
      traces.value_bool(r.reverted);
      traces.key("score");
      traces.value_double(r.score);
      traces.key("t");
      traces.value_int(r.t);
      traces.end_object();
    }
    traces.end_array();
    traces.end_object();

    if (!opt.svg_dir.empty()) {
      try {
        std::filesystem::create_directories(opt.svg_dir);
        for (const IterationRecord& r : res.trace.records) {
          write_file(opt.svg_dir + "/" + slide.id + "-t" + std::to_string(r.t) + ".svg",
                     to_svg(r.slide));
        }
        write_file(opt.svg_dir + "/" + slide.id + "-final.svg", to_svg(final));
      } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitFailure;
      }
    }
  }
  traces.end_array();

  try {
    if (opt.out_path.empty()) out << refined_lines;
    else write_file(opt.out_path, refined_lines);
    if (!opt.trace_path.empty()) write_file(opt.trace_path, traces.str() + "\n");
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ------------------------------------------------------------ plan/score

int cmd_plan(const PlanOptions& opt, const HarnessConfig& cfg, std::ostream& out,
             std::ostream& err) {
  ContentManifest manifest;
  try {
    manifest = decode_manifest(read_file(opt.manifest_path));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  try {
    SlideDoc slide = plan_layout(manifest, opt.aspect_ratio, cfg.planner);
    out << encode_slide(slide) << "\n";
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.code() == ErrorCode::Overconstrained ? kExitSchema : kExitFailure;
  }
  return kExitOk;
}

int cmd_score(const ScoreOptions& opt, const HarnessConfig& cfg, std::ostream& out,
              std::ostream& err) {
  std::vector<SlideDoc> deck;
  try {
    deck = decode_deck(read_file(opt.deck_path));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  if (deck.empty()) {
    err << "no slides in " << opt.deck_path << "\n";
    return kExitEmpty;
  }
  HeuristicScorer scorer(cfg.aesth);
  double sum_final = 0, sum_balance = 0;
  for (const SlideDoc& slide : deck) {
    ScoreBreakdown sb = scorer.breakdown(slide);
    sum_final += sb.final_score;
    sum_balance += sb.balance;
    jsonw::Writer w;
    w.begin_object();
    w.key("components");
    w.begin_object();
    w.key("balance"); w.value_double(sb.balance);
    w.key("font_hierarchy"); w.value_double(sb.font_hierarchy);
    w.key("image_aspect"); w.value_double(sb.image_aspect);
    w.key("legibility"); w.value_double(sb.legibility);
    w.key("overflow_penalty"); w.value_double(sb.overflow_penalty);
    w.key("overlap_penalty"); w.value_double(sb.overlap_penalty);
    w.key("whitespace_band"); w.value_double(sb.whitespace_band);
    w.end_object();
    w.key("final");
    w.value_double(sb.final_score);
    w.key("id");
    w.value_string(slide.id);
    w.key("schema_version");
    w.value_int(1);
    w.end_object();
    out << w.str() << "\n";
  }
  jsonw::Writer w;
  w.begin_object();
  w.key("deck");
  w.begin_object();
  w.key("mean_balance");
  w.value_double(sum_balance / deck.size());
  w.key("mean_final");
  w.value_double(sum_final / deck.size());
  w.key("slides");
  w.value_uint(deck.size());
  w.end_object();
  w.key("schema_version");
  w.value_int(1);
  w.end_object();
  out << w.str() << "\n";
  return kExitOk;
}

int cmd_synth(const SynthOptions& opt, const HarnessConfig& cfg, std::ostream& out,
              std::ostream& err) {
  if (opt.count <= 0) {
    err << "count must be positive\n";
    return kExitSchema;
  }
  std::string payload = encode_deck(make_corpus(opt.count, cfg.seed, cfg.planner));
  if (opt.out_path.empty()) {
    out << payload;
  } else {
    try {
      write_file(opt.out_path, payload);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kExitFailure;
    }
  }
  return kExitOk;
}

}  // namespace presgauge
