#include "visforge/eval/rubric.hpp"

#include <algorithm>

#include <json.hpp>

#include "visforge/artifact/body.hpp"
#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::eval {

using nlohmann::json;

std::vector<RubricCriterion> load_rubric(const fs::path& path) {
  if (!support::file_exists(path))
    raise(ErrorCode::RubricInvalid, "no rubric at " + path.string());
  json doc = json::parse(support::read_text_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("criteria") ||
      !doc["criteria"].is_array() || doc["criteria"].empty())
    raise(ErrorCode::RubricInvalid,
          path.string() + ": expected {\"criteria\": [...]} with >=1 entry");

  std::vector<RubricCriterion> out;
  for (const auto& c : doc["criteria"]) {
    RubricCriterion criterion;
    if (!c.is_object() || !c.contains("id") || !c.contains("prompt"))
      raise(ErrorCode::RubricInvalid, "criterion needs id and prompt");
    criterion.criterion_id = c["id"].get<std::string>();
    criterion.prompt = c["prompt"].get<std::string>();
    criterion.weight = c.value("weight", 1.0);
    if (criterion.weight <= 0)
      raise(ErrorCode::RubricInvalid,
            criterion.criterion_id + ": weight must be positive");
    if (c.contains("blocking_below")) {
      int bb = c["blocking_below"].get<int>();
      if (bb < 1 || bb > 5)
        raise(ErrorCode::RubricInvalid,
              criterion.criterion_id + ": blocking_below out of [1,5]");
      criterion.blocking_below = bb;
    }
    out.push_back(std::move(criterion));
  }
  return out;
}

void ScorecardData::recompute() {
  std::vector<int> scores;
  for (const auto& c : criteria) scores.push_back(c.score);
  mean = support::mean_of(scores);
  if (scores.empty()) {
    range_min = range_max = 0;
  } else {
    range_min = *std::min_element(scores.begin(), scores.end());
    range_max = *std::max_element(scores.begin(), scores.end());
  }
}

std::optional<std::pair<int, std::string>> parse_judge_reply(
    const std::string& text) {
  size_t start = text.find('{');
  if (start == std::string::npos) return std::nullopt;
  // Judges wrap JSON in prose at times; scan to the matching brace.
  int depth = 0;
  size_t end = start;
  for (size_t i = start; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) {
      end = i + 1;
      break;
    }
  }
  json j = json::parse(text.substr(start, end - start), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("score") ||
      !j["score"].is_number_integer())
    return std::nullopt;
  return std::make_pair(j["score"].get<int>(),
                        j.value("justification", std::string{}));
}

ScorecardData score_rubric(const std::string& evidence_text,
                           const std::vector<RubricCriterion>& criteria,
                           gateway::Gateway& gateway,
                           const std::string& judge_system_prompt,
                           Stage stage) {
  if (criteria.empty())
    raise(ErrorCode::RubricInvalid, "rubric has no criteria");

  ScorecardData data;
  for (const auto& criterion : criteria) {
    gateway::ChatRequest request;
    request.messages.push_back({"system", judge_system_prompt, ""});
    request.messages.push_back(
        {"user",
         "Criterion " + criterion.criterion_id + ": " + criterion.prompt +
             "\n\nEvidence:\n" + evidence_text +
             "\n\nRespond with JSON: {\"score\": 1-5, \"justification\": "
             "\"...\"}",
         ""});

    std::optional<std::pair<int, std::string>> judged;
    std::string reason = "no parseable judge output";
    for (int attempt = 0; attempt < 2 && !judged; ++attempt) {
      if (attempt == 1)
        request.messages.push_back(
            {"user",
             "The previous reply was not a valid score. Respond with JSON "
             "{\"score\": <integer 1-5>, \"justification\": \"...\"} only.",
             ""});
      gateway::ChatResponse response =
          gateway.complete(request, RoleName::Evaluator, stage);
      auto parsed = parse_judge_reply(response.text);
      if (parsed && parsed->first >= 1 && parsed->first <= 5) {
        judged = parsed;
      } else if (parsed) {
        reason = "score " + std::to_string(parsed->first) + " outside [1,5]";
        request.messages.push_back({"assistant", response.text, ""});
      } else {
        request.messages.push_back({"assistant", response.text, ""});
      }
    }

    if (judged) {
      data.criteria.push_back({criterion.criterion_id, criterion.prompt,
                               judged->first, judged->second});
    } else {
      data.inconclusive.emplace_back(criterion.criterion_id, reason);
    }
  }
  data.recompute();
  return data;
}

std::string scorecard_body(const ScorecardData& data) {
  json criteria = json::array();
  for (const auto& c : data.criteria)
    criteria.push_back({{"criterion_id", c.criterion_id},
                        {"prompt", c.prompt},
                        {"score", c.score},
                        {"justification", c.justification}});
  json inconclusive = json::array();
  for (const auto& [id, reason] : data.inconclusive)
    inconclusive.push_back({{"criterion_id", id}, {"reason", reason}});

  json meta = {{"kind", "Scorecard"},
               {"criteria", criteria},
               {"inconclusive", inconclusive},
               {"mean", {{"num", data.mean.num}, {"den", data.mean.den}}},
               {"range", {data.range_min, data.range_max}}};

  std::string prose = "# Scorecard\n\n";
  prose += "Mean " + data.mean.to_string() + ", range " +
           std::to_string(data.range_min) + "-" +
           std::to_string(data.range_max) + ".\n\n";
  prose += "| Criterion | Score | Justification |\n";
  prose += "|---|---|---|\n";
  for (const auto& c : data.criteria)
    prose += "| " + c.criterion_id + " | " + std::to_string(c.score) + " | " +
             c.justification + " |\n";
  for (const auto& [id, reason] : data.inconclusive)
    prose += "| " + id + " | inconclusive | " + reason + " |\n";

  return artifact::serialize_document(meta, prose);
}

}  // namespace visforge::eval
