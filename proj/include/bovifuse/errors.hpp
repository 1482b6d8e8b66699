#pragma once

#include <stdexcept>
#include <string>

namespace bovifuse {

/// A value violated a domain invariant (bad probability vector, negative
/// temperature, dimension mismatch, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input file failed to parse or validate. Carries the offending record
/// id and field so callers can point at the exact spot.
class ParseError : public ValidationError {
 public:
  ParseError(std::string record, std::string field, const std::string& message)
      : ValidationError(format_message(record, field, message)),
        record_(std::move(record)),
        field_(std::move(field)) {}

  const std::string& record() const { return record_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format_message(const std::string& record,
                                    const std::string& field,
                                    const std::string& message) {
    std::string out = message;
    if (!record.empty()) out += " (record '" + record + "'";
    if (!field.empty()) out += (record.empty() ? " (field '" : ", field '") + field + "'";
    if (!record.empty() || !field.empty()) out += ")";
    return out;
  }

  std::string record_;
  std::string field_;
};

/// Filesystem-level failure: missing file, unreadable bytes, write error.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bovifuse
