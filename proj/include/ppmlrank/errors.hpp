#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppmlrank {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed record document (bad JSON, wrong types, unknown keys or enum values).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A well-formed record that breaks one or more record invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations, std::string context = {})
      : Error(format(violations, context)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string format(const std::vector<std::string>& violations, const std::string& context) {
    std::string msg = context.empty() ? "validation failed" : context + ": validation failed";
    for (const auto& v : violations) {
      msg += "; ";
      msg += v;
    }
    return msg;
  }

  std::vector<std::string> violations_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id, const std::string& context = {})
      : Error((context.empty() ? std::string{} : context + ": ") + "duplicate framework id '" + id + "'"),
        id_(id) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A result entry refers to a dataset with no maximum for its source.
class MissingMaximumError : public Error {
 public:
  using Error::Error;
};

class UnknownVocabularyError : public Error {
 public:
  using Error::Error;
};

class InvalidFilterError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppmlrank
