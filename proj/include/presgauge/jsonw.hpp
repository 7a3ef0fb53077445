#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace presgauge::jsonw {

// Canonical JSON emission: keys written in lexicographic order at every
// call site, floats fixed to 6 decimals, no whitespace. Two structurally
// equal values therefore serialize to identical bytes.

// Fixed 6-decimal representation; -0 normalized to 0.
std::string fixed6(double value);

// Round to 6 decimals (the canonical coordinate grid).
double round6(double value);

std::string escape(std::string_view text);

class Writer {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view name) {
    comma();
    out_ += '"';
    out_ += escape(name);
    out_ += "\":";
    pending_value_ = true;
  }

  void value_string(std::string_view v) {
    comma();
    out_ += '"';
    out_ += escape(v);
    out_ += '"';
  }
  void value_double(double v) {
    comma();
    out_ += fixed6(v);
  }
  void value_int(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
  }
  void value_uint(std::uint64_t v) {
    comma();
    out_ += std::to_string(v);
  }
  void value_bool(bool v) {
    comma();
    out_ += v ? "true" : "false";
  }
  void value_null() {
    comma();
    out_ += "null";
  }
  // Pre-serialized JSON (used to embed canonical sub-documents).
  void value_raw(std::string_view json) {
    comma();
    out_ += json;
  }

  const std::string& str() const { return out_; }

 private:
  void open(char c) {
    comma();
    out_ += c;
    first_.push_back(true);
  }
  void close(char c) {
    out_ += c;
    first_.pop_back();
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ += ',';
      first_.back() = false;
    }
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

}  // namespace presgauge::jsonw
