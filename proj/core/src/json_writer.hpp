#pragma once

// Private (not installed) streaming JSON writer shared by the emitters.
// Produces 2-space-indented output with a fixed, caller-controlled key
// order and no locale dependence, so equal inputs yield byte-equal text.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "superlin/io.hpp"

namespace superlin::detail {

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out += kHex[(c >> 4) & 0xF];
          out += kHex[c & 0xF];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view k) {
    prefix();
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\": ";
    after_key_ = true;
  }

  void string(std::string_view v) {
    prefix();
    out_ += '"';
    out_ += json_escape(v);
    out_ += '"';
  }

  void number(double v) {
    if (!std::isfinite(v)) {
      throw std::logic_error("JsonWriter: non-finite number");
    }
    prefix();
    out_ += format_g17(v);
  }

  void integer(long long v) {
    prefix();
    out_ += std::to_string(v);
  }

  void boolean(bool v) {
    prefix();
    out_ += v ? "true" : "false";
  }

  void null() {
    prefix();
    out_ += "null";
  }

  // Short numeric arrays on one line: [1, 2, 3].
  void numbers_inline(std::span<const double> values) {
    prefix();
    out_ += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out_ += ", ";
      if (!std::isfinite(values[i])) {
        throw std::logic_error("JsonWriter: non-finite number");
      }
      out_ += format_g17(values[i]);
    }
    out_ += ']';
  }

  void integers_inline(std::span<const int> values) {
    prefix();
    out_ += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out_ += ", ";
      out_ += std::to_string(values[i]);
    }
    out_ += ']';
  }

  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

 private:
  void indent(std::size_t depth) { out_.append(2 * depth, ' '); }

  void prefix() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (!frames_.empty()) {
      if (frames_.back().count > 0) out_ += ',';
      out_ += '\n';
      indent(frames_.size());
      ++frames_.back().count;
    }
  }

  void open(char c) {
    prefix();
    out_ += c;
    frames_.push_back({0});
  }

  void close(char c) {
    if (frames_.empty()) throw std::logic_error("JsonWriter: unbalanced close");
    const int count = frames_.back().count;
    frames_.pop_back();
    if (count > 0) {
      out_ += '\n';
      indent(frames_.size());
    }
    out_ += c;
  }

  struct Frame {
    int count = 0;
  };

  std::string out_;
  std::vector<Frame> frames_;
  bool after_key_ = false;
};

}  // namespace superlin::detail
