#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ibaudit {

/// Base for every error the library reports about its inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PatternSyntaxError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent data file. `line` is 1-based, 0 when unknown.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::string source = {}, std::size_t line = 0)
      : Error(format(what, source, line)), source_(std::move(source)), line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& source,
                            std::size_t line) {
    std::string out;
    if (!source.empty()) out += source + ":";
    if (line > 0) out += std::to_string(line) + ":";
    if (!out.empty()) out += " ";
    return out + what;
  }

  std::string source_;
  std::size_t line_;
};

/// Raised when no candidate reaches the minimum support.
class NoDominantPatternError : public Error {
 public:
  using Error::Error;
};

}  // namespace ibaudit
