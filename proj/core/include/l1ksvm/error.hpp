#pragma once

#include <stdexcept>
#include <string>

namespace l1ksvm {

// Base for every error the library throws on bad input or failed preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed table on disk. The message carries the offending line number.
class LoadError : public Error {
 public:
  LoadError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Feature selection produced an empty set; recorded by the harness as a failed
// iteration rather than propagated.
class NoFeaturesSelected : public Error {
 public:
  NoFeaturesSelected() : Error("no features selected") {}
};

}  // namespace l1ksvm
