#pragma once

#include <string>
#include <vector>

#include "visforge/eval/checks.hpp"
#include "visforge/eval/rubric.hpp"

namespace visforge::eval {

struct FeedbackIssue {
  std::string issue_id;
  std::string severity;  ///< blocking | major | minor
  std::string category;  ///< render | interaction | data | layout | task-fit
  std::string evidence;
  std::string suggested_fix;
};

struct FeedbackData {
  int iteration = 0;
  std::vector<FeedbackIssue> issues;
  bool pass = false;  ///< true iff no blocking issue

  bool has_blocking() const;
};

/// Folds check verdicts and rubric breaches into the loop gate:
///   BlankPanel / ConsoleError / LinkedViewSync fail  -> blocking
///   LayoutOverflow / ControlResponds fail            -> major
///   inconclusive checks                              -> major (never block)
///   score below a criterion's blocking_below         -> blocking task-fit
///   score <= 2 without a blocking_below              -> minor task-fit
FeedbackData compile_feedback(const std::vector<CheckResult>& check_results,
                              const ScorecardData& scorecard,
                              const std::vector<RubricCriterion>& criteria,
                              int iteration);

/// Feedback artifact body: front matter + readable issue list.
std::string feedback_body(const FeedbackData& data);

/// Inverse of feedback_body; nullopt when the body is not a valid
/// Feedback artifact.
std::optional<FeedbackData> feedback_from_body(std::string_view body);

}  // namespace visforge::eval
