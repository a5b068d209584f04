#include "visforge/eval/feedback.hpp"

#include "visforge/artifact/body.hpp"
#include "visforge/artifact/schemas.hpp"

namespace visforge::eval {

using nlohmann::json;

bool FeedbackData::has_blocking() const {
  for (const auto& i : issues)
    if (i.severity == "blocking") return true;
  return false;
}

namespace {

std::string category_for_check(const std::string& kind) {
  if (kind == "BlankPanel" || kind == "ConsoleError") return "render";
  if (kind == "LinkedViewSync" || kind == "ControlResponds")
    return "interaction";
  if (kind == "LayoutOverflow") return "layout";
  return "render";
}

std::string fix_for_check(const CheckResult& result) {
  if (result.verdict == Verdict::Inconclusive)
    return "Re-run the check once the app is reachable; evidence was "
           "insufficient to grade (" + result.note + ").";
  if (result.kind == "BlankPanel")
    return "Render data into " + result.check_id.substr(6) +
           "; the panel shows a uniform region with no child elements.";
  if (result.kind == "ConsoleError")
    return "Eliminate the console errors recorded in the probe; they stop "
           "the page from working as designed.";
  if (result.kind == "LinkedViewSync")
    return "Wire the shared interaction state so the linked panels update "
           "when the source view is brushed.";
  if (result.kind == "LayoutOverflow")
    return "Constrain the offending panels to the viewport; see the "
           "overflow pixel counts in the evidence.";
  if (result.kind == "ControlResponds")
    return "Connect the control's handler; activating it changed nothing "
           "observable.";
  return "Investigate the failed check evidence.";
}

}  // namespace

FeedbackData compile_feedback(const std::vector<CheckResult>& check_results,
                              const ScorecardData& scorecard,
                              const std::vector<RubricCriterion>& criteria,
                              int iteration) {
  FeedbackData data;
  data.iteration = iteration;

  for (const auto& result : check_results) {
    if (result.verdict == Verdict::Pass) continue;
    FeedbackIssue issue;
    issue.issue_id = "check-" + result.check_id;
    issue.category = category_for_check(result.kind);
    if (result.verdict == Verdict::Inconclusive) {
      issue.severity = "major";  // surfaced, but never deadlocks the loop
    } else if (result.kind == "BlankPanel" || result.kind == "ConsoleError" ||
               result.kind == "LinkedViewSync") {
      issue.severity = "blocking";
    } else {
      issue.severity = "major";
    }
    issue.evidence = result.probe_ref.empty()
                         ? result.measured.dump()
                         : result.probe_ref + "#" + result.check_id;
    issue.suggested_fix = fix_for_check(result);
    data.issues.push_back(std::move(issue));
  }

  for (const auto& criterion : criteria) {
    const ScoredCriterion* scored = nullptr;
    for (const auto& s : scorecard.criteria)
      if (s.criterion_id == criterion.criterion_id) scored = &s;
    if (!scored) continue;
    if (criterion.blocking_below && *criterion.blocking_below > scored->score) {
      FeedbackIssue issue;
      issue.issue_id = "rubric-" + criterion.criterion_id;
      issue.severity = "blocking";
      issue.category = "task-fit";
      issue.evidence = "scorecard#" + criterion.criterion_id;
      issue.suggested_fix = "Raise the '" + criterion.criterion_id +
                            "' criterion above " +
                            std::to_string(*criterion.blocking_below) +
                            "; the judge scored it " +
                            std::to_string(scored->score) + ": " +
                            scored->justification;
      data.issues.push_back(std::move(issue));
    } else if (!criterion.blocking_below && scored->score <= 2) {
      FeedbackIssue issue;
      issue.issue_id = "rubric-" + criterion.criterion_id;
      issue.severity = "minor";
      issue.category = "task-fit";
      issue.evidence = "scorecard#" + criterion.criterion_id;
      issue.suggested_fix = "Consider improving '" + criterion.criterion_id +
                            "' (scored " + std::to_string(scored->score) +
                            "): " + scored->justification;
      data.issues.push_back(std::move(issue));
    }
  }

  data.pass = !data.has_blocking();
  return data;
}

std::string feedback_body(const FeedbackData& data) {
  json issues = json::array();
  for (const auto& i : data.issues)
    issues.push_back({{"issue_id", i.issue_id},
                      {"severity", i.severity},
                      {"category", i.category},
                      {"evidence", i.evidence},
                      {"suggested_fix", i.suggested_fix}});
  json meta = {{"kind", "Feedback"},
               {"iteration", data.iteration},
               {"issues", issues},
               {"pass", data.pass}};

  std::string prose = "# Feedback\n\n";
  prose += data.pass ? "No blocking issues.\n" : "Blocking issues present.\n";
  if (!data.issues.empty()) {
    prose += "\n| Issue | Severity | Category | Suggested fix |\n";
    prose += "|---|---|---|---|\n";
    for (const auto& i : data.issues)
      prose += "| " + i.issue_id + " | " + i.severity + " | " + i.category +
               " | " + i.suggested_fix + " |\n";
  }
  return artifact::serialize_document(meta, prose);
}

std::optional<FeedbackData> feedback_from_body(std::string_view body) {
  if (!artifact::validate_artifact(ArtifactKind::Feedback, body).ok())
    return std::nullopt;
  auto doc = artifact::parse_document(body);
  FeedbackData data;
  data.iteration = doc->meta.value("iteration", 0);
  data.pass = doc->meta.value("pass", false);
  for (const auto& i : doc->meta.value("issues", json::array())) {
    data.issues.push_back({i.value("issue_id", ""), i.value("severity", ""),
                           i.value("category", ""), i.value("evidence", ""),
                           i.value("suggested_fix", "")});
  }
  return data;
}

}  // namespace visforge::eval
