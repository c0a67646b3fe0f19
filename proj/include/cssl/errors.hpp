#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cssl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejection sampling ran out of attempts, or the candidate pool is empty.
class SamplingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite loss or gradient during training.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int last_good_epoch)
      : std::runtime_error(what), last_good_epoch_(last_good_epoch) {}
  int last_good_epoch() const { return last_good_epoch_; }

 private:
  int last_good_epoch_;
};

}  // namespace cssl
