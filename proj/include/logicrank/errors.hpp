#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace logicrank {

/// 1-based position in a rule source text.
struct SourceSpan {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Rule-language failure: syntax or static validation.
class RuleError : public std::runtime_error {
 public:
  enum class Kind {
    kSyntax,
    kArity,
    kUnsafeVariable,
    kUnstratified,
    kUnknownQuery,
    kInvalidArgument,
    kUnboundVariable,
  };

  RuleError(Kind kind, SourceSpan span, const std::string& message,
            std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  SourceSpan span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  SourceSpan span_;
  std::vector<std::string> expected_;
};

/// Malformed detections, scene records or pool files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while grounding or running inference on a valid input.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logicrank
