#pragma once

#include <stdexcept>
#include <string>

namespace attrdisc {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorCategory { Config = 2, Io = 3, Dimension = 4, Numeric = 5 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorCategory::Config, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorCategory::Io, msg); }
inline Error dimension_error(const std::string& msg) { return Error(ErrorCategory::Dimension, msg); }
inline Error numeric_error(const std::string& msg) { return Error(ErrorCategory::Numeric, msg); }

}  // namespace attrdisc
