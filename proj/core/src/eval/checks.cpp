#include "visforge/eval/checks.hpp"

#include <algorithm>

#include "visforge/error.hpp"
#include "visforge/eval/image.hpp"
#include "visforge/support/text.hpp"

namespace visforge::eval {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

json CheckSpec::to_json() const {
  json j = {{"check_id", check_id}, {"kind", kind}};
  if (!target.empty()) j["target"] = target;
  if (!response.empty()) j["response"] = response;
  if (!source.empty()) j["source"] = source;
  if (!targets.empty()) j["targets"] = targets;
  if (!interaction.empty()) {
    json steps = json::array();
    for (const auto& s : interaction) steps.push_back(s.to_json());
    j["interaction"] = steps;
  }
  if (variance_threshold) j["variance_threshold"] = *variance_threshold;
  return j;
}

std::optional<CheckSpec> CheckSpec::from_json(const json& j) {
  if (!j.is_object() || !j.contains("check_id") || !j.contains("kind"))
    return std::nullopt;
  CheckSpec spec;
  spec.check_id = j["check_id"].get<std::string>();
  spec.kind = j["kind"].get<std::string>();
  if (spec.kind != "BlankPanel" && spec.kind != "ConsoleError" &&
      spec.kind != "LinkedViewSync" && spec.kind != "LayoutOverflow" &&
      spec.kind != "ControlResponds")
    return std::nullopt;
  spec.target = j.value("target", "");
  spec.response = j.value("response", "");
  spec.source = j.value("source", "");
  if (j.contains("targets"))
    for (const auto& t : j["targets"])
      spec.targets.push_back(t.get<std::string>());
  if (j.contains("interaction")) {
    for (const auto& s : j["interaction"]) {
      auto step = mcp::ProbeStep::from_json(s);
      if (!step) return std::nullopt;
      spec.interaction.push_back(*step);
    }
  }
  if (j.contains("variance_threshold"))
    spec.variance_threshold = j["variance_threshold"].get<double>();
  return spec;
}

json CheckResult::to_json() const {
  return json{{"check_id", check_id},
              {"kind", kind},
              {"verdict", to_string(verdict)},
              {"probe_ref", probe_ref},
              {"measured", measured},
              {"note", note}};
}

namespace {

std::string slugify(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(c)));
    else if (!out.empty() && out.back() != '-')
      out.push_back('-');
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

}  // namespace

std::vector<CheckSpec> checks_from_plan(const json& plan_meta) {
  std::vector<CheckSpec> specs;

  CheckSpec console;
  console.check_id = "console-errors";
  console.kind = "ConsoleError";
  specs.push_back(std::move(console));

  std::vector<std::string> panel_selectors;
  for (const auto& p : plan_meta.value("panels", json::array())) {
    if (!p.is_object() || !p.contains("panel_id")) continue;
    const std::string selector =
        "#" + p["panel_id"].get<std::string>();
    panel_selectors.push_back(selector);
    CheckSpec blank;
    blank.check_id = "blank-" + slugify(selector);
    blank.kind = "BlankPanel";
    blank.target = selector;
    specs.push_back(std::move(blank));
  }

  if (!panel_selectors.empty()) {
    CheckSpec overflow;
    overflow.check_id = "layout-overflow";
    overflow.kind = "LayoutOverflow";
    overflow.targets = panel_selectors;
    specs.push_back(std::move(overflow));
  }

  for (const auto& l : plan_meta.value("linkages", json::array())) {
    if (!l.is_object() || !l.contains("source") || !l.contains("target"))
      continue;
    const std::string source = "#" + l["source"].get<std::string>();
    const std::string target = "#" + l["target"].get<std::string>();
    CheckSpec sync;
    sync.check_id = "sync-" + slugify(source) + "-" + slugify(target);
    sync.kind = "LinkedViewSync";
    sync.source = source;
    sync.targets = {target};
    sync.interaction = {{"click", source, ""}};
    specs.push_back(std::move(sync));
  }

  for (const auto& c : plan_meta.value("validation_checks", json::array())) {
    if (auto spec = CheckSpec::from_json(c)) specs.push_back(*spec);
  }
  return specs;
}

std::vector<CheckSpec> default_checks(
    const std::vector<std::string>& panel_selectors) {
  json plan = {{"panels", json::array()}, {"linkages", json::array()}};
  for (const auto& sel : panel_selectors) {
    std::string id = sel;
    if (!id.empty() && id[0] == '#') id.erase(0, 1);
    plan["panels"].push_back({{"panel_id", id}});
  }
  return checks_from_plan(plan);
}

namespace {

struct Snapshot {
  const mcp::DomSummary* before = nullptr;
  const mcp::DomSummary* after = nullptr;
};

Snapshot capture_pair(const mcp::PageProbe& probe) {
  Snapshot snap;
  for (const auto& entry : probe.action_log) {
    if (entry.step.op != "capture" || !entry.snapshot) continue;
    if (!snap.before)
      snap.before = &*entry.snapshot;
    else
      snap.after = &*entry.snapshot;
  }
  return snap;
}

bool element_changed(const mcp::DomSummary& before,
                     const mcp::DomSummary& after,
                     const std::string& selector, json& measured) {
  const auto* b = before.find(selector);
  const auto* a = after.find(selector);
  json delta = {{"selector", selector}};
  bool changed = false;
  if (b && a) {
    delta["element_count_delta"] = a->element_count - b->element_count;
    delta["subtree_hash_changed"] = a->subtree_hash != b->subtree_hash;
    changed = (a->element_count != b->element_count) ||
              (a->subtree_hash != b->subtree_hash);
  } else {
    delta["missing"] = true;
  }
  measured.push_back(std::move(delta));
  return changed;
}

}  // namespace

std::vector<CheckResult> run_mechanistic_checks(
    const std::string& app_url, const std::vector<CheckSpec>& specs,
    mcp::McpEndpoint& endpoint, const fs::path& probes_dir, int iteration,
    const CheckThresholds& thresholds) {
  std::vector<CheckResult> results;

  for (const auto& spec : specs) {
    CheckResult result;
    result.check_id = spec.check_id;
    result.kind = spec.kind;

    std::vector<mcp::ProbeStep> steps;
    std::vector<std::string> selectors;
    if (spec.kind == "BlankPanel") {
      selectors = {spec.target};
    } else if (spec.kind == "LayoutOverflow") {
      selectors = spec.targets;
    } else if (spec.kind == "LinkedViewSync") {
      selectors = spec.targets;
      selectors.push_back(spec.source);
      steps.push_back({"capture", "", ""});
      for (const auto& s : spec.interaction) steps.push_back(s);
      steps.push_back({"capture", "", ""});
    } else if (spec.kind == "ControlResponds") {
      selectors = {spec.response, spec.target};
      steps.push_back({"capture", "", ""});
      steps.push_back({"click", spec.target, ""});
      steps.push_back({"capture", "", ""});
    }

    const std::string probe_id =
        "i" + std::to_string(iteration) + "-" + slugify(spec.check_id);
    mcp::PageProbe probe;
    try {
      probe = mcp::probe_page(endpoint, app_url, steps, selectors, probes_dir,
                              probe_id);
    } catch (const Error& e) {
      // An unreachable app proves nothing either way.
      result.verdict = Verdict::Inconclusive;
      result.measured = {{"navigation_error", e.detail()}};
      result.note = "app unreachable";
      results.push_back(std::move(result));
      continue;
    }
    result.probe_ref = "probes/" + probe_id + ".json";

    if (probe.any_step_failed()) {
      result.verdict = Verdict::Fail;
      json failures = json::array();
      for (const auto& a : probe.action_log)
        if (!a.ok) failures.push_back(a.step.to_json());
      result.measured = {{"failed_steps", failures}};
      result.note = "interaction step failed";
      results.push_back(std::move(result));
      continue;
    }

    if (spec.kind == "ConsoleError") {
      json errors = json::array();
      for (const auto& m : probe.console_messages)
        if (m.level == "error") errors.push_back(m.text);
      result.measured = {{"error_messages", errors}};
      result.verdict = errors.empty() ? Verdict::Pass : Verdict::Fail;
      if (!errors.empty()) result.note = "console reported errors";
    } else if (spec.kind == "BlankPanel") {
      const auto* el = probe.dom_summary.find(spec.target);
      if (!el || !el->found) {
        result.verdict = Verdict::Fail;
        result.measured = {{"selector", spec.target}, {"found", false}};
        result.note = "panel selector not found";
      } else {
        double threshold =
            spec.variance_threshold.value_or(thresholds.blank_variance);
        std::string image_bytes = support::read_text_file(
            probes_dir / probe.screenshot_ref);
        auto image = Image::parse_ppm(image_bytes);
        if (!image) {
          result.verdict = Verdict::Inconclusive;
          result.note = "screenshot undecodable";
        } else {
          double variance = image->intensity_variance(
              el->bbox.x, el->bbox.y, el->bbox.w, el->bbox.h);
          bool blank = variance < threshold && el->element_count < 2;
          result.measured = {{"variance", variance},
                             {"threshold", threshold},
                             {"element_count", el->element_count}};
          result.verdict = blank ? Verdict::Fail : Verdict::Pass;
          if (blank) result.note = "panel renders as a uniform region";
        }
      }
    } else if (spec.kind == "LayoutOverflow") {
      int tol = thresholds.overflow_tolerance_px;
      int W = probe.dom_summary.viewport_w;
      int H = probe.dom_summary.viewport_h;
      json offenders = json::array();
      for (const auto& sel : spec.targets) {
        const auto* el = probe.dom_summary.find(sel);
        if (!el || !el->found) continue;
        int over_x = std::max(el->bbox.x + el->bbox.w - W, -el->bbox.x);
        int over_y = std::max(el->bbox.y + el->bbox.h - H, -el->bbox.y);
        if (over_x > tol || over_y > tol)
          offenders.push_back({{"selector", sel},
                               {"overflow_x_px", std::max(over_x, 0)},
                               {"overflow_y_px", std::max(over_y, 0)}});
      }
      result.measured = {{"offenders", offenders},
                         {"tolerance_px", tol},
                         {"viewport", {W, H}}};
      result.verdict = offenders.empty() ? Verdict::Pass : Verdict::Fail;
      if (!offenders.empty()) result.note = "element exceeds the viewport";
    } else if (spec.kind == "LinkedViewSync") {
      Snapshot snap = capture_pair(probe);
      if (!snap.before || !snap.after) {
        result.verdict = Verdict::Inconclusive;
        result.note = "missing capture snapshots";
      } else {
        json deltas = json::array();
        bool any_changed = false;
        for (const auto& target : spec.targets)
          any_changed |=
              element_changed(*snap.before, *snap.after, target, deltas);
        result.measured = {{"targets", deltas}};
        result.verdict = any_changed ? Verdict::Pass : Verdict::Fail;
        if (!any_changed)
          result.note = "no target changed after the interaction";
      }
    } else if (spec.kind == "ControlResponds") {
      Snapshot snap = capture_pair(probe);
      if (!snap.before || !snap.after) {
        result.verdict = Verdict::Inconclusive;
        result.note = "missing capture snapshots";
      } else {
        json deltas = json::array();
        bool changed = element_changed(*snap.before, *snap.after,
                                       spec.response, deltas);
        result.measured = {{"response", deltas}};
        result.verdict = changed ? Verdict::Pass : Verdict::Fail;
        if (!changed) result.note = "control produced no observable change";
      }
    }

    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace visforge::eval
