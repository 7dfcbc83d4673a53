#pragma once

#include <stdexcept>
#include <string>

namespace entrate {

// Bad model specs, bad experiment configs, bad CLI usage. Exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated operation precondition (k > n, m < 1, ...).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation refused because it would exceed the enumeration or
// per-point symbol budget. The message states the required budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StreamSection { Header, Codebook, Body, Tail };

inline const char* to_string(StreamSection s) {
  switch (s) {
    case StreamSection::Header:   return "header";
    case StreamSection::Codebook: return "codebook";
    case StreamSection::Body:     return "body";
    case StreamSection::Tail:     return "tail";
  }
  return "?";
}

// Truncated or garbled payload; identifies the failing section.
struct DecodeError : std::runtime_error {
  StreamSection section;
  DecodeError(StreamSection s, const std::string& what)
      : std::runtime_error(std::string("decode error in ") + to_string(s) + ": " + what),
        section(s) {}
};

}  // namespace entrate
