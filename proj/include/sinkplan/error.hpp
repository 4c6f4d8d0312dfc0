#pragma once

#include <stdexcept>
#include <string>

namespace sinkplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while reading a text input; carries the source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace sinkplan
