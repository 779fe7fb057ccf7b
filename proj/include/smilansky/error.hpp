#pragma once

#include <stdexcept>
#include <string>

namespace smilansky {

// Error taxonomy. The CLI maps each category onto its exit code, so every
// throw site picks the category that describes what the caller did wrong.
enum class ErrorCategory {
  usage,      // bad parameter, invalid config, failed validation
  numerical,  // nonconvergence, resource limits, search failures
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define SMILANSKY_DEFINE_ERROR(Name, Category)                    \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what)                        \
        : Error(ErrorCategory::Category, #Name ": " + what) {}    \
  }

SMILANSKY_DEFINE_ERROR(ParameterError, usage);
SMILANSKY_DEFINE_ERROR(ValidationError, usage);
SMILANSKY_DEFINE_ERROR(ConfigError, usage);
SMILANSKY_DEFINE_ERROR(ResolutionError, usage);
SMILANSKY_DEFINE_ERROR(RegimeError, usage);
SMILANSKY_DEFINE_ERROR(ResourceError, numerical);
SMILANSKY_DEFINE_ERROR(SolverError, numerical);
SMILANSKY_DEFINE_ERROR(DomainError, numerical);
SMILANSKY_DEFINE_ERROR(BracketingError, numerical);
SMILANSKY_DEFINE_ERROR(SearchError, numerical);
SMILANSKY_DEFINE_ERROR(AccuracyError, numerical);
SMILANSKY_DEFINE_ERROR(UnconvergedError, numerical);
SMILANSKY_DEFINE_ERROR(IoError, io);

#undef SMILANSKY_DEFINE_ERROR

// what() without the leading "<Name>: ", for rewrapping.
inline std::string error_detail(const std::exception& e) {
  const std::string what = e.what();
  const auto colon = what.find(": ");
  if (colon == std::string::npos || what.find(' ') < colon) return what;
  return what.substr(colon + 2);
}

}  // namespace smilansky
