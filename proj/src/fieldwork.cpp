#include "terra/fieldwork.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "terra/llm.hpp"
#include "terra/minds.hpp"
#include "terra/prompts.hpp"
#include "terra/textmetrics.hpp"

namespace terra {

std::string to_string(JudgeTask task) {
  switch (task) {
    case JudgeTask::kAnnotation: return "annotation";
    case JudgeTask::kAudit: return "audit";
    case JudgeTask::kNovelty: return "novelty";
    case JudgeTask::kAncestry: return "ancestry";
    case JudgeTask::kClassification: return "classification";
  }
  return "?";
}

JudgeArchive::JudgeArchive(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  out_ = std::make_shared<std::ofstream>(file, std::ios::app);
}

void JudgeArchive::record(JudgeTask task, const std::string& identity,
                          const std::string& system_text,
                          const std::string& user_text, const std::string& reply) {
  if (!out_ || !*out_) return;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  json line = {
      {"task", to_string(task)},
      {"judge", identity},
      {"request_hash", payload_hash(system_text + "\x1f" + user_text)},
      {"unix_ms", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
      {"system", system_text},
      {"user", user_text},
      {"reply", reply}};
  *out_ << line.dump() << "\n";
  out_->flush();
}

json Annotation::to_json() const {
  json events_json = json::array();
  for (const AnnotationItem& e : events) {
    json refs = json::array();
    for (const Reference& r : e.references)
      refs.push_back({{"step", r.step}, {"snippet", r.snippet}});
    events_json.push_back({{"event", e.tag},
                           {"timesteps", e.timesteps},
                           {"confidence", e.confidence},
                           {"description", e.description},
                           {"reference", refs}});
  }
  json behaviors_json = json::array();
  for (const AnnotationItem& b : behaviors) {
    json refs = json::array();
    for (const Reference& r : b.references)
      refs.push_back({{"step", r.step}, {"snippet", r.snippet}});
    behaviors_json.push_back({{"behavior", b.tag},
                              {"time_span", {b.time_span.first, b.time_span.second}},
                              {"confidence", b.confidence},
                              {"description", b.description},
                              {"reference", refs}});
  }
  return {{"events", events_json},
          {"behaviors", behaviors_json},
          {"comment", comment},
          {"emergence",
           {{"keywords", emergence_keywords}, {"comment", emergence_comment}}},
          {"warnings", warnings}};
}

std::string render_agent_log(const std::vector<const AgentRecord*>& records) {
  std::string out;
  for (const AgentRecord* r : records) {
    out += render_log_line(*r, true);
    out += '\n';
  }
  return out;
}

std::string render_group_log(const std::vector<const AgentRecord*>& records) {
  std::map<int, std::vector<const AgentRecord*>> by_step;
  for (const AgentRecord* r : records) by_step[r->t].push_back(r);
  std::string out = "{\n";
  for (const auto& [t, recs] : by_step) {
    out += "timestep " + std::to_string(t) + ": [\n";
    for (const AgentRecord* r : recs) out += "  " + render_log_line(*r, false) + "\n";
    out += "]\n";
  }
  out += "}";
  return out;
}

namespace {

std::string join_tags(const std::vector<prompts::TagDef>& tags) {
  return prompts::render_tag_list(tags);
}

std::optional<json> extract_json(const std::string& text) {
  size_t search_from = 0;
  size_t fence = text.find("```");
  if (fence != std::string::npos) {
    size_t open = text.find_first_of("{[", fence);
    if (open != std::string::npos) search_from = open;
  }
  size_t start = text.find_first_of("{[", search_from);
  if (start == std::string::npos) return std::nullopt;
  char open = text[start];
  char close = open == '{' ? '}' : ']';
  int depth = 0;
  bool in_string = false;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == open) ++depth;
    else if (c == close) {
      --depth;
      if (depth == 0) {
        json parsed = json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (parsed.is_discarded()) return std::nullopt;
        return parsed;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> vocab_match(const std::string& tag,
                                       const std::vector<prompts::TagDef>& vocab) {
  auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  std::string needle = lower(tag);
  for (const prompts::TagDef& def : vocab)
    if (lower(def.tag) == needle) return def.tag;
  return std::nullopt;
}

std::vector<Reference> parse_references(const json& item) {
  std::vector<Reference> refs;
  if (!item.contains("reference") || !item["reference"].is_array()) return refs;
  for (const json& r : item["reference"]) {
    if (!r.is_object() || !r.contains("step") || !r.contains("snippet")) continue;
    if (!r["step"].is_number() || !r["snippet"].is_string()) continue;
    refs.push_back({r["step"].get<int>(), r["snippet"].get<std::string>()});
  }
  return refs;
}

struct VocabSet {
  const std::vector<prompts::TagDef>* events;
  const std::vector<prompts::TagDef>* behaviors;
  const std::vector<prompts::TagDef>* emergent;
};

Annotation parse_annotation_reply(const std::string& reply, const std::string& log_text,
                                  const VocabSet& vocab, bool group_rules) {
  auto body = extract_json(reply);
  if (!body || !body->is_object()) throw JudgeFailure("annotation reply is not JSON");
  Annotation out;

  auto verbatim = [&](const std::vector<Reference>& refs) {
    if (refs.empty()) return false;
    for (const Reference& r : refs)
      if (r.snippet.empty() || log_text.find(r.snippet) == std::string::npos)
        return false;
    return true;
  };

  if (body->contains("events") && (*body)["events"].is_array()) {
    for (const json& e : (*body)["events"]) {
      if (!e.is_object() || !e.contains("event") || !e["event"].is_string()) continue;
      AnnotationItem item;
      auto tag = vocab_match(e["event"].get<std::string>(), *vocab.events);
      if (!tag) {
        out.warnings.push_back("dropped event with unknown tag: " +
                               e["event"].get<std::string>());
        continue;
      }
      item.tag = *tag;
      if (e.contains("timesteps") && e["timesteps"].is_array())
        for (const json& t : e["timesteps"])
          if (t.is_number()) item.timesteps.push_back(t.get<int>());
      if (item.timesteps.empty()) {
        out.warnings.push_back("dropped event without timesteps: " + item.tag);
        continue;
      }
      item.confidence = std::clamp(e.value("confidence", 0.0), 0.0, 10.0);
      if (group_rules && item.confidence < 3.0) {
        out.warnings.push_back("dropped low-confidence event: " + item.tag);
        continue;
      }
      item.description = e.value("description", "");
      item.references = parse_references(e);
      if (!verbatim(item.references)) {
        out.warnings.push_back("dropped event without verbatim reference: " + item.tag);
        continue;
      }
      out.events.push_back(std::move(item));
    }
  }
  if (body->contains("behaviors") && (*body)["behaviors"].is_array()) {
    for (const json& b : (*body)["behaviors"]) {
      if (!b.is_object() || !b.contains("behavior") || !b["behavior"].is_string())
        continue;
      AnnotationItem item;
      auto tag = vocab_match(b["behavior"].get<std::string>(), *vocab.behaviors);
      if (!tag) {
        out.warnings.push_back("dropped behavior with unknown tag: " +
                               b["behavior"].get<std::string>());
        continue;
      }
      item.tag = *tag;
      if (b.contains("time_span") && b["time_span"].is_array() &&
          b["time_span"].size() == 2 && b["time_span"][0].is_number() &&
          b["time_span"][1].is_number()) {
        item.time_span = {b["time_span"][0].get<int>(), b["time_span"][1].get<int>()};
      } else {
        out.warnings.push_back("dropped behavior without time_span: " + item.tag);
        continue;
      }
      if (item.time_span.first > item.time_span.second) {
        out.warnings.push_back("dropped behavior with inverted span: " + item.tag);
        continue;
      }
      item.confidence = std::clamp(b.value("confidence", 0.0), 0.0, 10.0);
      if (group_rules && item.confidence < 3.0) {
        out.warnings.push_back("dropped low-confidence behavior: " + item.tag);
        continue;
      }
      item.description = b.value("description", "");
      item.references = parse_references(b);
      if (!verbatim(item.references)) {
        out.warnings.push_back("dropped behavior without verbatim reference: " +
                               item.tag);
        continue;
      }
      out.behaviors.push_back(std::move(item));
    }
  }
  out.comment = body->value("comment", "");
  if (body->contains("emergence") && (*body)["emergence"].is_object()) {
    const json& em = (*body)["emergence"];
    if (em.contains("keywords") && em["keywords"].is_array()) {
      for (const json& k : em["keywords"]) {
        if (!k.is_string()) continue;
        auto tag = vocab_match(k.get<std::string>(), *vocab.emergent);
        if (tag)
          out.emergence_keywords.push_back(*tag);
        else
          out.warnings.push_back("dropped unknown emergence keyword: " +
                                 k.get<std::string>());
      }
    }
    out.emergence_comment = em.value("comment", "none");
  }
  if (out.emergence_keywords.empty()) out.emergence_keywords = {"None"};
  return out;
}

std::string complete_with_archive(Judge& judge, JudgeTask task,
                                  const std::string& system_text,
                                  const std::string& user_text,
                                  JudgeArchive* archive) {
  std::string reply = judge.complete(task, system_text, user_text);
  if (archive) archive->record(task, judge.identity(), system_text, user_text, reply);
  return reply;
}

constexpr int kAnnotationAttempts = 3;  // initial call plus two retries

}  // namespace

Annotation annotate_agent(const std::vector<const AgentRecord*>& records,
                          const std::string& agent_name, Judge& judge,
                          JudgeArchive* archive) {
  if (records.empty()) throw JudgeFailure("empty agent log for " + agent_name);
  std::string log_text = render_agent_log(records);
  std::string user = prompts::agent_annotation_user();
  user = prompts::replace_all(user, "{event_tags}", join_tags(prompts::agent_event_tags()));
  user = prompts::replace_all(user, "{behavioral_tags}",
                              join_tags(prompts::agent_behavior_tags()));
  user = prompts::replace_all(user, "{emergent_tags}",
                              join_tags(prompts::agent_emergent_tags()));
  user = prompts::replace_all(user, "{agent_name}", agent_name);
  user = prompts::replace_all(user, "{agent_summary}", log_text);

  VocabSet vocab{&prompts::agent_event_tags(), &prompts::agent_behavior_tags(),
                 &prompts::agent_emergent_tags()};
  std::string last_error;
  for (int attempt = 0; attempt < kAnnotationAttempts; ++attempt) {
    std::string reply = complete_with_archive(
        judge, JudgeTask::kAnnotation, prompts::agent_annotation_system(), user, archive);
    try {
      return parse_annotation_reply(reply, log_text, vocab, /*group_rules=*/false);
    } catch (const JudgeFailure& e) {
      last_error = e.what();
    }
  }
  throw JudgeFailure("agent annotation failed after retries: " + last_error);
}

namespace {

Annotation apply_audit(const Annotation& annotation, const json& verdicts) {
  Annotation out = annotation;
  auto apply_side = [&](std::vector<AnnotationItem>& items, const char* key,
                        const char* tag_key) {
    if (!verdicts.contains(key) || !verdicts[key].is_array()) return;
    std::vector<bool> keep(items.size(), true);
    for (const json& v : verdicts[key]) {
      if (!v.is_object() || !v.contains("index") || !v["index"].is_number()) continue;
      int idx = v["index"].get<int>();
      if (idx < 0 || idx >= static_cast<int>(items.size())) {
        out.warnings.push_back(std::string("ignored audit verdict with bad index on ") +
                               key + ": " + std::to_string(idx));
        continue;
      }
      std::string verdict = v.value("verdict", "pass");
      if (verdict == "fail") {
        keep[idx] = false;
      } else if (verdict == "revise" && v.contains("proposed_fix") &&
                 v["proposed_fix"].is_object()) {
        const json& fix = v["proposed_fix"];
        AnnotationItem& item = items[idx];
        if (fix.contains(tag_key) && fix[tag_key].is_string())
          item.tag = fix[tag_key].get<std::string>();
        if (fix.contains("timesteps") && fix["timesteps"].is_array()) {
          std::vector<int> ts;
          for (const json& t : fix["timesteps"])
            if (t.is_number()) ts.push_back(t.get<int>());
          if (!ts.empty()) item.timesteps = ts;
        }
        if (fix.contains("time_span") && fix["time_span"].is_array() &&
            fix["time_span"].size() == 2 && fix["time_span"][0].is_number() &&
            fix["time_span"][1].is_number())
          item.time_span = {fix["time_span"][0].get<int>(),
                            fix["time_span"][1].get<int>()};
        if (fix.contains("description") && fix["description"].is_string())
          item.description = fix["description"].get<std::string>();
        if (fix.contains("confidence") && fix["confidence"].is_number())
          item.confidence = std::clamp(fix["confidence"].get<double>(), 0.0, 10.0);
      }
    }
    std::vector<AnnotationItem> kept;
    for (size_t i = 0; i < items.size(); ++i)
      if (keep[i]) kept.push_back(std::move(items[i]));
    items = std::move(kept);
  };
  apply_side(out.events, "events_audit", "event");
  apply_side(out.behaviors, "behaviors_audit", "behavior");
  return out;
}

}  // namespace

Annotation audit_agent(const Annotation& annotation,
                       const std::vector<const AgentRecord*>& records,
                       const std::string& agent_name, Judge& judge,
                       JudgeArchive* archive) {
  std::string user = prompts::agent_audit_user();
  user = prompts::replace_all(user, "{agent_name}", agent_name);
  user = prompts::replace_all(user, "{event_tags}", join_tags(prompts::agent_event_tags()));
  user = prompts::replace_all(user, "{behavior_tags}",
                              join_tags(prompts::agent_behavior_tags()));
  user = prompts::replace_all(user, "{agent_logs}", render_agent_log(records));
  user = prompts::replace_all(user, "{annotations}", annotation.to_json().dump(2));
  std::string reply = complete_with_archive(judge, JudgeTask::kAudit,
                                            prompts::agent_audit_system(), user, archive);
  auto verdicts = extract_json(reply);
  if (!verdicts || !verdicts->is_object()) throw JudgeFailure("audit reply is not JSON");
  return apply_audit(annotation, *verdicts);
}

namespace {

std::string group_tags_line(const std::set<std::string>& member_ids) {
  std::string out;
  for (const std::string& id : member_ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

std::string group_names_block(const std::vector<const AgentRecord*>& records,
                              const std::set<std::string>& member_ids) {
  std::map<std::string, std::string> names;
  for (const AgentRecord* r : records)
    if (member_ids.count(r->id)) names[r->id] = r->name;
  std::string out;
  for (const auto& [id, name] : names) out += id + ":" + name + "\n";
  return out;
}

bool same_item(const AnnotationItem& a, const AnnotationItem& b) {
  return a.tag == b.tag && a.timesteps == b.timesteps && a.time_span == b.time_span;
}

void merge_annotations(Annotation& into, Annotation&& piece) {
  auto merge_side = [](std::vector<AnnotationItem>& dst,
                       std::vector<AnnotationItem>&& src) {
    for (AnnotationItem& item : src) {
      bool merged = false;
      for (AnnotationItem& existing : dst) {
        if (same_item(existing, item)) {
          existing.confidence = std::max(existing.confidence, item.confidence);
          merged = true;
          break;
        }
      }
      if (!merged) dst.push_back(std::move(item));
    }
  };
  merge_side(into.events, std::move(piece.events));
  merge_side(into.behaviors, std::move(piece.behaviors));
  if (into.comment.empty())
    into.comment = piece.comment;
  for (const std::string& k : piece.emergence_keywords)
    if (std::find(into.emergence_keywords.begin(), into.emergence_keywords.end(), k) ==
        into.emergence_keywords.end())
      into.emergence_keywords.push_back(k);
  if (into.emergence_comment.empty() || into.emergence_comment == "none")
    into.emergence_comment = piece.emergence_comment;
  for (auto& w : piece.warnings) into.warnings.push_back(std::move(w));
}

Annotation annotate_group_segment(const std::vector<const AgentRecord*>& records,
                                  const std::set<std::string>& member_ids,
                                  Judge& judge, JudgeArchive* archive) {
  std::string log_text = render_group_log(records);
  std::string user = prompts::group_annotation_user();
  user = prompts::replace_all(user, "{event_tags}", join_tags(prompts::group_event_tags()));
  user = prompts::replace_all(user, "{behavioral_tags}",
                              join_tags(prompts::group_behavior_tags()));
  user = prompts::replace_all(user, "{emergent_tags}",
                              join_tags(prompts::group_emergent_tags()));
  user = prompts::replace_all(user, "{community_tags}", group_tags_line(member_ids));
  user = prompts::replace_all(user, "{agent_names}",
                              group_names_block(records, member_ids));
  user = prompts::replace_all(user, "{community_data}", log_text);

  VocabSet vocab{&prompts::group_event_tags(), &prompts::group_behavior_tags(),
                 &prompts::group_emergent_tags()};
  std::string last_error;
  for (int attempt = 0; attempt < kAnnotationAttempts; ++attempt) {
    std::string reply = complete_with_archive(
        judge, JudgeTask::kAnnotation, prompts::group_annotation_system(), user, archive);
    try {
      return parse_annotation_reply(reply, log_text, vocab, /*group_rules=*/true);
    } catch (const JudgeFailure& e) {
      last_error = e.what();
    }
  }
  throw JudgeFailure("group annotation failed after retries: " + last_error);
}

}  // namespace

Annotation annotate_group(const std::vector<const AgentRecord*>& records,
                          const std::set<std::string>& member_ids, Judge& judge,
                          JudgeArchive* archive, const GroupAnnotateOptions& options) {
  if (member_ids.size() < 2)
    throw JudgeFailure("group annotation requires a community of at least 2 agents");
  if (records.empty()) throw JudgeFailure("empty group log");

  int n = static_cast<int>(records.size());
  if (n <= options.segment_records)
    return annotate_group_segment(records, member_ids, judge, archive);

  // Oversized logs: overlapping segments annotated separately and merged.
  Annotation merged;
  int step = std::max(1, options.segment_records - options.segment_overlap);
  for (int start = 0; start < n; start += step) {
    int end = std::min(start + options.segment_records, n);
    std::vector<const AgentRecord*> slice(records.begin() + start,
                                          records.begin() + end);
    merge_annotations(merged, annotate_group_segment(slice, member_ids, judge, archive));
    if (end == n) break;
  }
  return merged;
}

Annotation audit_group(const Annotation& annotation,
                       const std::vector<const AgentRecord*>& records,
                       const std::set<std::string>& member_ids, Judge& judge,
                       JudgeArchive* archive) {
  std::string user = prompts::group_audit_user();
  user = prompts::replace_all(user, "{event_tags}", join_tags(prompts::group_event_tags()));
  user = prompts::replace_all(user, "{behavior_tags}",
                              join_tags(prompts::group_behavior_tags()));
  user = prompts::replace_all(user, "{community_tags}", group_tags_line(member_ids));
  user = prompts::replace_all(user, "{agent_names}",
                              group_names_block(records, member_ids));
  user = prompts::replace_all(user, "{community_data}", render_group_log(records));
  user = prompts::replace_all(user, "{annotations}", annotation.to_json().dump(2));
  std::string reply = complete_with_archive(judge, JudgeTask::kAudit,
                                            prompts::group_audit_system(), user, archive);
  auto verdicts = extract_json(reply);
  if (!verdicts || !verdicts->is_object())
    throw JudgeFailure("group audit reply is not JSON");
  return apply_audit(annotation, *verdicts);
}

std::map<std::string, double> score_novelty(const std::vector<NoveltyPrior>& priors,
                                            const std::vector<NoveltyFresh>& fresh,
                                            Judge& judge, Rng& rng, int samples,
                                            JudgeArchive* archive) {
  if (fresh.empty()) throw JudgeFailure("novelty batch has no fresh artifacts");
  json prev = json::array();
  for (const NoveltyPrior& p : priors)
    prev.push_back({{"id", p.id}, {"text", p.text}, {"score", p.score}});
  json next = json::array();
  for (const NoveltyFresh& f : fresh) next.push_back({{"id", f.id}, {"text", f.text}});
  std::string user = prompts::novelty_user();
  user = prompts::replace_all(user, "{previous_artifacts}", prev.dump());
  user = prompts::replace_all(user, "{new_artifacts}", next.dump());

  std::map<std::string, double> sums;
  std::map<std::string, int> counts;
  for (int s = 0; s < samples; ++s) {
    (void)rng;  // sampling substream, reserved for stochastic judges
    std::string reply = complete_with_archive(judge, JudgeTask::kNovelty,
                                              prompts::novelty_system(), user, archive);
    auto body = extract_json(reply);
    if (!body || !body->is_object()) continue;
    for (const NoveltyFresh& f : fresh) {
      if (!body->contains(f.id) || !(*body)[f.id].is_number()) continue;
      sums[f.id] += std::clamp((*body)[f.id].get<double>(), 0.0, 5.0);
      counts[f.id] += 1;
    }
  }
  std::map<std::string, double> means;
  for (const NoveltyFresh& f : fresh) {
    if (!counts.count(f.id))
      throw JudgeFailure("no novelty sample returned a score for " + f.id);
    means[f.id] = sums[f.id] / counts[f.id];
  }
  return means;
}

std::map<std::string, double> infer_ancestors(const AncestryQuery& query, Judge& judge,
                                              JudgeArchive* archive) {
  std::map<std::string, double> out;
  if (query.candidates.empty()) return out;
  json candidates = json::object();
  for (const auto& [id, name] : query.candidates) candidates[id] = name;
  std::string user = prompts::ancestry_user();
  user = prompts::replace_all(user, "{artifact_id}", query.artifact_id);
  user = prompts::replace_all(user, "{artifact_name}", query.artifact_name);
  user = prompts::replace_all(user, "{artifact_content}", query.artifact_content);
  user = prompts::replace_all(user, "{agent_thoughts}", query.agent_thoughts);
  user = prompts::replace_all(user, "{agent_observations}", query.agent_observations);
  user = prompts::replace_all(user, "{agent_memory}", query.agent_memory);
  user = prompts::replace_all(user, "{artifact_candidates}", candidates.dump());

  std::string reply = complete_with_archive(judge, JudgeTask::kAncestry,
                                            prompts::ancestry_system(), user, archive);
  auto body = extract_json(reply);
  if (!body || !body->is_object())
    throw JudgeFailure("ancestry reply is not a JSON object");
  for (auto it = body->begin(); it != body->end(); ++it) {
    if (!candidates.contains(it.key())) continue;  // invented ids are discarded
    if (!it.value().is_number()) continue;
    out[it.key()] = std::clamp(it.value().get<double>(), 0.0, 1.0);
  }
  return out;
}

int classify_artifact(const std::string& name, const std::string& content,
                      Judge& judge, JudgeArchive* archive) {
  std::string user = prompts::classify_user();
  user = prompts::replace_all(user, "{artifact_name}", name);
  user = prompts::replace_all(user, "{artifact_content}", content);
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string reply = complete_with_archive(
        judge, JudgeTask::kClassification, prompts::classify_system(), user, archive);
    auto body = extract_json(reply);
    if (!body || !body->is_object() || !body->contains("category")) continue;
    const json& c = (*body)["category"];
    int value = 0;
    if (c.is_number()) {
      value = c.get<int>();
    } else if (c.is_string()) {
      try {
        value = std::stoi(c.get<std::string>());
      } catch (...) {
        continue;
      }
    } else {
      continue;
    }
    if (value == -1 || (value >= 1 && value <= 4)) return value;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Mock judge. Deterministic rule tables over the rendered prompts; test
// scaffolding, not a claim about LLM behavior.
// ---------------------------------------------------------------------------

namespace {

struct ParsedLine {
  int t = 0;
  std::string name, tag, action, params, message;
  bool applied = true;
};

std::string slice_between(const std::string& text, const std::string& from,
                          const std::string& to) {
  size_t start = text.find(from);
  if (start == std::string::npos) return "";
  start += from.size();
  size_t end = to.empty() ? text.size() : text.find(to, start);
  if (end == std::string::npos) end = text.size();
  return text.substr(start, end - start);
}

std::string field_after(const std::string& line, const std::string& marker,
                        const std::string& stop) {
  size_t start = line.find(marker);
  if (start == std::string::npos) return "";
  start += marker.size();
  size_t end = line.find(stop, start);
  if (end == std::string::npos) end = line.size();
  return line.substr(start, end - start);
}

std::vector<ParsedLine> parse_log_lines(const std::string& block) {
  std::vector<ParsedLine> out;
  std::istringstream in(block);
  std::string line;
  int current_t = 0;
  while (std::getline(in, line)) {
    size_t ts = line.find("timestep ");
    if (ts != std::string::npos && line.find(": [") != std::string::npos) {
      current_t = std::atoi(line.c_str() + ts + 9);
      continue;
    }
    if (line.find("name=") == std::string::npos ||
        line.find(" | action=") == std::string::npos)
      continue;
    ParsedLine p;
    size_t tpos = line.find("t=");
    if (tpos == 0) p.t = std::atoi(line.c_str() + 2);
    else p.t = current_t;
    p.name = field_after(line, "name=", " | ");
    p.tag = field_after(line, "tag=", " | ");
    p.action = field_after(line, "action=", " | ");
    p.params = field_after(line, "params=", " | ");
    p.message = field_after(line, "message=\"", "\" | ");
    if (p.params.find("(rejected:") != std::string::npos) {
      p.applied = false;
      p.params = p.params.substr(0, p.params.find(" (rejected:"));
    }
    out.push_back(std::move(p));
  }
  return out;
}

json make_item(const std::string& key, const std::string& tag,
               const std::vector<int>& steps, const std::string& description,
               const std::vector<std::pair<int, std::string>>& refs, bool behavior) {
  json refs_json = json::array();
  for (const auto& [step, snippet] : refs)
    refs_json.push_back({{"step", step}, {"snippet", snippet}});
  json item = {{key, tag},
               {"confidence", 10},
               {"description", description},
               {"reference", refs_json}};
  if (behavior)
    item["time_span"] = {steps.front(), steps.back()};
  else
    item["timesteps"] = steps;
  return item;
}

json mock_annotate(const std::string& user_text) {
  bool group = user_text.find("Group Log") != std::string::npos;
  std::string block = group ? slice_between(user_text, "Group Log\n", "")
                            : slice_between(user_text, "Agent Life Log\n", "");
  std::vector<ParsedLine> lines = parse_log_lines(block);

  json events = json::array();
  json behaviors = json::array();

  if (!group) {
    static const std::vector<std::pair<std::string, std::string>> kEventMap = {
        {"reproduce", "Reproduction"},
        {"create_artifact", "Artifact Created"},
        {"take_energy", "Conflict"},
        {"give_energy", "Exchange"},
        {"pickup_artifact", "Artifact Use"},
        {"drop_artifact", "Artifact Use"},
        {"give_artifact", "Artifact Use"},
        {"modify_artifact", "Artifact Use"},
        {"destroy_artifact", "Artifact Use"}};
    std::map<std::string, std::vector<int>> tag_steps;
    std::map<std::string, std::vector<std::pair<int, std::string>>> tag_refs;
    for (const auto& [action, tag] : kEventMap) {
      for (const ParsedLine& p : lines) {
        if (!p.applied || p.action != action) continue;
        tag_steps[tag].push_back(p.t);
        if (tag_refs[tag].empty()) tag_refs[tag].emplace_back(p.t, "action=" + action);
      }
    }
    for (const auto& [tag, steps] : tag_steps)
      events.push_back(
          make_item("event", tag, steps, "direct action evidence", tag_refs[tag], false));

    struct BehaviorRule {
      const char* action;
      const char* tag;
      const char* description;
    };
    static const BehaviorRule kBehaviorMap[] = {
        {"move", "Exploration", "repeated movement across the grid"},
        {"give_energy", "Altruism", "repeated energy donations"},
        {"take_energy", "Aggression", "repeated energy theft"},
        {"modify_artifact", "Tool Use", "repeated artifact edits"}};
    for (const BehaviorRule& rule : kBehaviorMap) {
      std::vector<int> steps;
      std::vector<std::pair<int, std::string>> refs;
      for (const ParsedLine& p : lines) {
        if (!p.applied || p.action != rule.action) continue;
        steps.push_back(p.t);
        if (refs.size() < 2) refs.emplace_back(p.t, "action=" + std::string(rule.action));
      }
      if (steps.size() >= 2)
        behaviors.push_back(
            make_item("behavior", rule.tag, steps, rule.description, refs, true));
    }
    int artifacts_created = 0;
    for (const ParsedLine& p : lines)
      if (p.applied && p.action == "create_artifact") ++artifacts_created;
    bool creative = artifacts_created >= 3;
    json emergence = {
        {"keywords", creative ? json::array({"Creativity"}) : json::array({"none"})},
        {"comment", creative ? "sustained artifact production" : "none"}};
    return json{{"events", events},
                {"behaviors", behaviors},
                {"comment", "rule-derived annotation of the agent log"},
                {"emergence", emergence}};
  }

  std::map<std::pair<std::string, std::string>, std::vector<int>> gives;
  std::vector<int> give_steps;
  std::vector<std::pair<int, std::string>> give_refs;
  for (const ParsedLine& p : lines) {
    if (!p.applied || p.action != "give_energy") continue;
    std::string target = field_after(p.params, "'target': '", "'");
    gives[{p.name, target}].push_back(p.t);
    give_steps.push_back(p.t);
    if (give_refs.size() < 2) give_refs.emplace_back(p.t, "action=give_energy");
  }
  bool reciprocity = false;
  int recip_first = 0, recip_last = 0;
  for (const auto& [pair, steps] : gives) {
    auto reverse = gives.find({pair.second, pair.first});
    if (reverse == gives.end()) continue;
    reciprocity = true;
    recip_first = std::min(steps.front(), reverse->second.front());
    recip_last = std::max(steps.back(), reverse->second.back());
  }
  if (reciprocity && give_refs.size() >= 2)
    behaviors.push_back(make_item("behavior", "Reciprocity", {recip_first, recip_last},
                                  "mutual energy gifts between members", give_refs,
                                  true));
  if (give_steps.size() >= 2)
    behaviors.push_back(make_item("behavior", "Resource Flow", give_steps,
                                  "energy circulating among members", give_refs, true));
  std::map<std::pair<int, std::string>, int> thefts;
  std::sort(give_steps.begin(), give_steps.end());
  for (const ParsedLine& p : lines) {
    if (!p.applied || p.action != "take_energy") continue;
    std::string target = field_after(p.params, "'target': '", "'");
    thefts[{p.t, target}] += 1;
  }
  for (const auto& [key, takers] : thefts) {
    if (takers < 2) continue;
    events.push_back(make_item("event", "Coordinated Attack", {key.first},
                               "multiple agents drained the same victim",
                               {{key.first, "action=take_energy"}}, false));
  }
  bool network = give_steps.size() >= 4;
  json emergence = {
      {"keywords", network ? json::array({"Resource Network"}) : json::array({"none"})},
      {"comment",
       network ? "recurring transfers form a resource network" : "none"}};
  return json{{"events", events},
              {"behaviors", behaviors},
              {"comment", "rule-derived annotation of the group log"},
              {"emergence", emergence}};
}

json mock_audit(const std::string& user_text) {
  json out = {{"events_audit", json::array()},
              {"behaviors_audit", json::array()},
              {"summary", "rule-based audit: all items pass"}};
  std::string block = slice_between(user_text, "Annotations:\n", "");
  auto parsed = extract_json(block);
  if (parsed && parsed->is_object()) {
    if (parsed->contains("events") && (*parsed)["events"].is_array())
      for (size_t i = 0; i < (*parsed)["events"].size(); ++i)
        out["events_audit"].push_back(
            {{"index", i}, {"verdict", "pass"}, {"confidence", 10}});
    if (parsed->contains("behaviors") && (*parsed)["behaviors"].is_array())
      for (size_t i = 0; i < (*parsed)["behaviors"].size(); ++i)
        out["behaviors_audit"].push_back(
            {{"index", i}, {"verdict", "pass"}, {"confidence", 10}});
  }
  return out;
}

double token_jaccard(const std::string& a, const std::string& b) {
  std::vector<std::string> ta = metric_tokens(a), tb = metric_tokens(b);
  std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  size_t inter = 0;
  for (const std::string& t : sa) inter += sb.count(t);
  size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

json mock_novelty(const std::string& user_text) {
  std::string prev_block =
      slice_between(user_text, "Previous artifacts: ", "\nNew artifacts: ");
  std::string new_block = slice_between(user_text, "New artifacts: ", "");
  auto prev = extract_json(prev_block);
  auto fresh = extract_json(new_block);
  json out = json::object();
  if (!fresh || !fresh->is_array()) return out;
  std::vector<std::string> prior_texts;
  if (prev && prev->is_array())
    for (const json& p : *prev)
      if (p.is_object() && p.contains("text")) prior_texts.push_back(p["text"]);
  for (const json& f : *fresh) {
    if (!f.is_object() || !f.contains("id") || !f.contains("text")) continue;
    std::string text = f["text"];
    double score;
    if (prior_texts.empty()) {
      score = 5.0;  // nothing to compare against
    } else {
      double best = 0.0;
      bool duplicate = false;
      for (const std::string& prior : prior_texts) {
        best = std::max(best, token_jaccard(text, prior));
        if (prior == text) duplicate = true;
      }
      score = duplicate ? 0.0 : 5.0 - std::min(5.0, best * 5.0);
    }
    out[f["id"].get<std::string>()] = score;
  }
  return out;
}

json mock_ancestry(const std::string& user_text) {
  std::string content = slice_between(user_text, "- content: ", "\n\nAgent reasoning:");
  std::string thoughts =
      slice_between(user_text, "Agent reasoning:\n", "\n\nAgent observation:");
  std::string memory =
      slice_between(user_text, "Agent memory:\n", "\n\nCandidate ancestor artifacts");
  std::string cand_block = slice_between(
      user_text, "Candidate ancestor artifacts (ONLY choose from these IDs):\n", "");
  auto candidates = extract_json(cand_block);
  json out = json::object();
  if (!candidates || !candidates->is_object()) return out;
  std::string context = content + "\n" + thoughts + "\n" + memory;
  for (auto it = candidates->begin(); it != candidates->end(); ++it) {
    std::string name = it.value().is_string() ? it.value().get<std::string>() : "";
    if (name.empty()) continue;
    if (context.find(name) != std::string::npos)
      out[it.key()] = 0.9;  // explicit mention
    else if (token_jaccard(name, content) > 0.5)
      out[it.key()] = 0.6;
  }
  return out;
}

json mock_classify(const std::string& user_text) {
  std::string name = slice_between(user_text, "Name: ", "\n");
  std::string content = slice_between(user_text, "Content: ", "");
  std::string all = name + " " + content;
  for (char& c : all) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto any = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (all.find(k) != std::string::npos) return true;
    return false;
  };
  int category = 1;
  if (any({"must ", "rule", "manifesto", "directive", "mandate", "constitution",
           "law", "obey", "comply"}))
    category = 4;
  else if (any({"hub", "wiki", "portal", "template", "knowledge base", "registry"}))
    category = 3;
  else if (any({"plan", "coordinate", "strategy", "propose", "assign", "task",
                "let's", "lets "}))
    category = 2;
  return json{{"category", category}};
}

class MockJudge : public Judge {
 public:
  std::string identity() const override { return "mock-judge/1"; }
  std::string complete(JudgeTask task, const std::string& /*system_text*/,
                       const std::string& user_text) override {
    json reply;
    switch (task) {
      case JudgeTask::kAnnotation: reply = mock_annotate(user_text); break;
      case JudgeTask::kAudit: reply = mock_audit(user_text); break;
      case JudgeTask::kNovelty: reply = mock_novelty(user_text); break;
      case JudgeTask::kAncestry: reply = mock_ancestry(user_text); break;
      case JudgeTask::kClassification: reply = mock_classify(user_text); break;
    }
    return "```json\n" + reply.dump(2) + "\n```";
  }
};

class HttpJudge : public Judge {
 public:
  explicit HttpJudge(HttpJudgeConfig config) : config_(std::move(config)) {}
  std::string identity() const override {
    return config_.annotation_model + "+" + config_.classification_model;
  }
  std::string complete(JudgeTask task, const std::string& system_text,
                       const std::string& user_text) override {
    ChatEndpoint endpoint;
    endpoint.base_url = config_.base_url;
    endpoint.api_key_env = config_.api_key_env;
    bool light = task == JudgeTask::kClassification || task == JudgeTask::kAncestry;
    endpoint.model = light ? config_.classification_model : config_.annotation_model;
    std::string error;
    auto reply = chat_complete(endpoint, system_text, user_text, &error);
    if (!reply) throw JudgeFailure("judge endpoint failed: " + error);
    return *reply;
  }

 private:
  HttpJudgeConfig config_;
};

}  // namespace

std::unique_ptr<Judge> make_mock_judge() { return std::make_unique<MockJudge>(); }

std::unique_ptr<Judge> make_http_judge(const HttpJudgeConfig& config) {
  return std::make_unique<HttpJudge>(config);
}

}  // namespace terra
