#include "senstrace/inputs.hpp"

#include <set>

#include "senstrace/errors.hpp"
#include "senstrace/json_io.hpp"
#include "senstrace/real_text.hpp"

namespace senstrace {

namespace {

// nlohmann keeps the last duplicate key silently; a SAX-level walk over the
// top-level object is the only way to notice a repeated input name.
void reject_duplicate_names(std::string_view text) {
  std::set<std::string> seen;
  int depth = 0;
  bool duplicate = false;
  std::string duplicate_name;
  nlohmann::json::parser_callback_t cb =
      [&](int current_depth, nlohmann::json::parse_event_t event,
          nlohmann::json &parsed) {
        if (event == nlohmann::json::parse_event_t::object_start) {
          ++depth;
        } else if (event == nlohmann::json::parse_event_t::object_end) {
          --depth;
        } else if (event == nlohmann::json::parse_event_t::key && depth == 1) {
          std::string name = parsed.get<std::string>();
          if (!seen.insert(name).second && !duplicate) {
            duplicate = true;
            duplicate_name = name;
          }
        }
        return true;
      };
  nlohmann::json::parse(text, cb); // throws on malformed documents
  if (duplicate) {
    throw Error(ErrorKind::DuplicateName,
                "input '" + duplicate_name + "' declared twice");
  }
}

} // namespace

InputMap parse_inputs(std::string_view text) {
  ojson doc;
  try {
    reject_duplicate_names(text);
    doc = ojson::parse(text);
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorKind::MalformedInput, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::MalformedInput,
                "inputs document must be a JSON object");
  }

  InputMap out;
  for (const auto &[name, spec] : doc.items()) {
    if (name.empty()) {
      throw Error(ErrorKind::MalformedInput, "input name must be non-empty");
    }
    if (!spec.is_object() || !spec.contains("value") ||
        !spec.contains("source") || !spec.contains("metric")) {
      throw Error(ErrorKind::MalformedInput,
                  "input '" + name +
                      "' must be an object with value, source and metric");
    }
    if (!spec["value"].is_number()) {
      throw Error(ErrorKind::MalformedInput,
                  "input '" + name + "' value must be a number");
    }
    if (!spec["source"].is_string() ||
        spec["source"].get<std::string>().empty()) {
      throw Error(ErrorKind::MalformedInput,
                  "input '" + name + "' source must be a non-empty string");
    }
    if (!spec["metric"].is_string()) {
      throw Error(ErrorKind::MalformedInput,
                  "input '" + name + "' metric must be a string");
    }
    std::string metric_str = spec["metric"].get<std::string>();
    auto metric = metric_from_name(metric_str);
    if (!metric || (*metric != Metric::Diff && *metric != Metric::Disc)) {
      throw Error(ErrorKind::UnknownMetric,
                  "input '" + name + "' has metric '" + metric_str +
                      "', expected diff or disc");
    }
    out.insert_or_assign(name,
                         InputBinding{spec["value"].get<double>(),
                                      SourceId(spec["source"].get<std::string>()),
                                      *metric});
  }
  return out;
}

std::string render_result(const EvalResult &r) {
  ojson doc;
  if (r.value.is_tagged_real()) {
    const auto &t = r.value.as_tagged_real();
    doc["value"] = format_real(t.value);
    doc["senv"] = senv_json(t.senv);
    doc["metric"] = std::string(metric_name(t.metric));
  } else {
    doc["value"] = render_value(r.value);
    doc["senv"] = ojson::object();
    doc["metric"] = nullptr;
  }
  doc["steps"] = r.steps;
  return doc.dump();
}

} // namespace senstrace
