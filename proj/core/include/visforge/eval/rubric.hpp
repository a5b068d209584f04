#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "visforge/gateway/gateway.hpp"
#include "visforge/support/rational.hpp"

namespace visforge::eval {

namespace fs = std::filesystem;

struct RubricCriterion {
  std::string criterion_id;
  std::string prompt;
  double weight = 1.0;
  std::optional<int> blocking_below;  ///< score below this blocks the loop
};

/// Parses a rubric file: {"criteria": [{id, prompt, weight?,
/// blocking_below?}]}. Throws RubricInvalid.
std::vector<RubricCriterion> load_rubric(const fs::path& path);

struct ScoredCriterion {
  std::string criterion_id;
  std::string prompt;
  int score = 0;
  std::string justification;
};

struct ScorecardData {
  std::vector<ScoredCriterion> criteria;
  /// Criteria whose judge output stayed invalid after one retry; their
  /// scores are withheld from the mean.
  std::vector<std::pair<std::string, std::string>> inconclusive;
  support::Rational mean;
  int range_min = 0;
  int range_max = 0;

  void recompute();  ///< mean and range from the stored scores, exact
};

/// One judge call per criterion over the evidence text; a score outside
/// 1..5 (or unparseable output) gets one retry, then the criterion is
/// marked inconclusive. Judging is evidence-text based by design.
ScorecardData score_rubric(const std::string& evidence_text,
                           const std::vector<RubricCriterion>& criteria,
                           gateway::Gateway& gateway,
                           const std::string& judge_system_prompt,
                           Stage stage = Stage::Evaluate);

/// Scorecard artifact body: front matter + a readable score table.
std::string scorecard_body(const ScorecardData& data);

/// Parses the judge's reply: first JSON object with {"score", "justification"}.
std::optional<std::pair<int, std::string>> parse_judge_reply(
    const std::string& text);

}  // namespace visforge::eval
