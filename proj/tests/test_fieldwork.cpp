#include <doctest.h>

#include <algorithm>
#include <set>

#include "terra/fieldwork.hpp"
#include "terra/prompts.hpp"

using namespace terra;

namespace {

AgentRecord make_record(int t, const std::string& id, const std::string& name,
                        const std::string& action, json params,
                        const std::string& message = "") {
  AgentRecord r;
  r.t = t;
  r.id = id;
  r.name = name;
  r.action_kind = action;
  r.params = std::move(params);
  r.status = "applied";
  r.message = message;
  r.energy = 40;
  r.time_left = 90;
  return r;
}

std::vector<const AgentRecord*> ptrs(const std::vector<AgentRecord>& records) {
  std::vector<const AgentRecord*> out;
  for (const AgentRecord& r : records) out.push_back(&r);
  return out;
}

// Judge with canned replies, for exercising parsing and audit semantics.
class ScriptedJudge : public Judge {
 public:
  explicit ScriptedJudge(std::vector<std::string> replies)
      : replies_(std::move(replies)) {}
  std::string identity() const override { return "scripted/1"; }
  std::string complete(JudgeTask, const std::string&, const std::string&) override {
    if (next_ >= replies_.size()) return replies_.back();
    return replies_[next_++];
  }

 private:
  std::vector<std::string> replies_;
  size_t next_ = 0;
};

}  // namespace

TEST_CASE("mock judge tags a reproduction event at the right step") {
  std::vector<AgentRecord> records = {
      make_record(1, "agent-0", "Ann", "move", {{"direction", "up"}}),
      make_record(4, "agent-0", "Ann", "reproduce", {{"name", "kid"}, {"energy", 5}}),
      make_record(5, "agent-0", "Ann", "move", {{"direction", "up"}}),
  };
  auto judge = make_mock_judge();
  Annotation a = annotate_agent(ptrs(records), "Ann", *judge);
  bool found = false;
  for (const AnnotationItem& e : a.events) {
    if (e.tag != "Reproduction") continue;
    found = true;
    CHECK(e.timesteps == std::vector<int>{4});
    REQUIRE(!e.references.empty());
    CHECK(e.references[0].step == 4);
  }
  CHECK(found);
  CHECK(!a.emergence_keywords.empty());
}

TEST_CASE("annotation items with non-verbatim snippets are dropped") {
  std::vector<AgentRecord> records = {
      make_record(1, "agent-0", "Ann", "move", {{"direction", "up"}})};
  std::string reply = R"({
    "events": [
      {"event": "Kill", "timesteps": [1], "confidence": 9,
       "description": "invented", "reference": [{"step": 1, "snippet": "NOT IN LOG"}]},
      {"event": "Artifact Created", "timesteps": [], "confidence": 9,
       "description": "no steps", "reference": [{"step": 1, "snippet": "action=move"}]},
      {"event": "Made Up Tag", "timesteps": [1], "confidence": 9,
       "description": "bad tag", "reference": [{"step": 1, "snippet": "action=move"}]}
    ],
    "behaviors": [],
    "comment": "x",
    "emergence": {"keywords": ["none"], "comment": "none"}
  })";
  ScriptedJudge judge({reply});
  Annotation a = annotate_agent(ptrs(records), "Ann", judge);
  CHECK(a.events.empty());
  CHECK(a.warnings.size() == 3);
}

TEST_CASE("unparseable annotation replies raise after retries") {
  std::vector<AgentRecord> records = {
      make_record(1, "agent-0", "Ann", "move", {{"direction", "up"}})};
  ScriptedJudge judge({"not json", "still not json", "nope"});
  CHECK_THROWS_AS(annotate_agent(ptrs(records), "Ann", judge), JudgeFailure);
}

TEST_CASE("audit verdict semantics: pass keeps, fail deletes, revise replaces") {
  std::vector<AgentRecord> records = {
      make_record(1, "agent-0", "Ann", "give_energy",
                  {{"target", "Bo"}, {"amount", 3}}),
      make_record(2, "agent-0", "Ann", "take_energy",
                  {{"target", "Bo"}, {"amount", 3}}),
  };
  Annotation base;
  AnnotationItem e1;
  e1.tag = "Exchange";
  e1.timesteps = {1};
  e1.confidence = 8;
  e1.references = {{1, "action=give_energy"}};
  AnnotationItem e2 = e1;
  e2.tag = "Conflict";
  e2.timesteps = {2};
  AnnotationItem b1;
  b1.tag = "Altruism";
  b1.time_span = {1, 2};
  b1.confidence = 6;
  b1.references = {{1, "action=give_energy"}};
  base.events = {e1, e2};
  base.behaviors = {b1};

  SUBCASE("all pass keeps everything") {
    std::string reply = R"({"events_audit": [
        {"index": 0, "verdict": "pass", "confidence": 10},
        {"index": 1, "verdict": "pass", "confidence": 10}],
      "behaviors_audit": [{"index": 0, "verdict": "pass", "confidence": 10}],
      "summary": "ok"})";
    ScriptedJudge judge({reply});
    Annotation out = audit_agent(base, ptrs(records), "Ann", judge);
    CHECK(out.events.size() == 2);
    CHECK(out.behaviors.size() == 1);
  }
  SUBCASE("fail removes the indexed item") {
    std::string reply = R"({"events_audit": [
        {"index": 0, "verdict": "fail", "issues": ["weak"], "confidence": 9}],
      "behaviors_audit": [], "summary": "ok"})";
    ScriptedJudge judge({reply});
    Annotation out = audit_agent(base, ptrs(records), "Ann", judge);
    REQUIRE(out.events.size() == 1);
    CHECK(out.events[0].tag == "Conflict");
  }
  SUBCASE("revise replaces only the proposed fields") {
    std::string reply = R"({"events_audit": [],
      "behaviors_audit": [{"index": 0, "verdict": "revise",
        "proposed_fix": {"behavior": null, "time_span": [1, 5],
                         "description": null, "reference": null, "confidence": 4},
        "confidence": 8}],
      "summary": "ok"})";
    ScriptedJudge judge({reply});
    Annotation out = audit_agent(base, ptrs(records), "Ann", judge);
    REQUIRE(out.behaviors.size() == 1);
    CHECK(out.behaviors[0].time_span == std::pair<int, int>{1, 5});
    CHECK(out.behaviors[0].tag == "Altruism");
    CHECK(out.behaviors[0].confidence == 4);
  }
  SUBCASE("out-of-range indices are ignored with a warning") {
    std::string reply = R"({"events_audit": [
        {"index": 7, "verdict": "fail", "confidence": 9}],
      "behaviors_audit": [], "summary": "ok"})";
    ScriptedJudge judge({reply});
    Annotation out = audit_agent(base, ptrs(records), "Ann", judge);
    CHECK(out.events.size() == 2);
    REQUIRE(!out.warnings.empty());
  }
  SUBCASE("audit under an all-pass judge is idempotent") {
    std::string reply = R"({"events_audit": [
        {"index": 0, "verdict": "pass"}, {"index": 1, "verdict": "pass"}],
      "behaviors_audit": [{"index": 0, "verdict": "pass"}], "summary": "ok"})";
    ScriptedJudge judge({reply, reply});
    Annotation once = audit_agent(base, ptrs(records), "Ann", judge);
    Annotation twice = audit_agent(once, ptrs(records), "Ann", judge);
    CHECK(once.to_json()["events"] == twice.to_json()["events"]);
    CHECK(once.to_json()["behaviors"] == twice.to_json()["behaviors"]);
  }
}

TEST_CASE("mock group annotation finds reciprocity in mutual gifts") {
  std::vector<AgentRecord> records = {
      make_record(2, "agent-0", "Ann", "give_energy", {{"target", "Bo"}, {"amount", 5}}),
      make_record(2, "agent-1", "Bo", "move", {{"direction", "up"}}),
      make_record(6, "agent-1", "Bo", "give_energy", {{"target", "Ann"}, {"amount", 4}}),
      make_record(6, "agent-0", "Ann", "move", {{"direction", "up"}}),
  };
  auto judge = make_mock_judge();
  Annotation a = annotate_group(ptrs(records), {"agent-0", "agent-1"}, *judge);
  bool reciprocity = false;
  for (const AnnotationItem& b : a.behaviors)
    if (b.tag == "Reciprocity") {
      reciprocity = true;
      CHECK(b.time_span == std::pair<int, int>{2, 6});
    }
  CHECK(reciprocity);
}

TEST_CASE("group annotation requires at least two members") {
  std::vector<AgentRecord> records = {
      make_record(1, "agent-0", "Ann", "move", {{"direction", "up"}})};
  auto judge = make_mock_judge();
  CHECK_THROWS_AS(annotate_group(ptrs(records), {"agent-0"}, *judge), JudgeFailure);
}

TEST_CASE("oversized group logs are segmented and merged without duplicates") {
  std::vector<AgentRecord> records;
  for (int t = 1; t <= 30; ++t) {
    records.push_back(make_record(t, "agent-0", "Ann", "give_energy",
                                  {{"target", "Bo"}, {"amount", 2}}));
    records.push_back(make_record(t, "agent-1", "Bo", "give_energy",
                                  {{"target", "Ann"}, {"amount", 2}}));
  }
  auto judge = make_mock_judge();
  GroupAnnotateOptions options;
  options.segment_records = 20;
  options.segment_overlap = 5;
  Annotation segmented =
      annotate_group(ptrs(records), {"agent-0", "agent-1"}, *judge, nullptr, options);
  // (tag, span) duplicates from overlapping segments must be merged.
  std::set<std::pair<std::string, std::pair<int, int>>> seen;
  for (const AnnotationItem& b : segmented.behaviors) {
    auto key = std::make_pair(b.tag, b.time_span);
    CHECK(!seen.count(key));
    seen.insert(key);
  }
}

TEST_CASE("novelty scoring through the mock judge") {
  auto judge = make_mock_judge();
  Rng rng(1);

  SUBCASE("the first artifact of a run scores 5") {
    auto scores = score_novelty({}, {{"art-0", "my note: Hello, I'm alive!"}}, *judge,
                                rng, 5);
    CHECK(scores.at("art-0") == 5.0);
  }
  SUBCASE("an exact duplicate scores 0") {
    std::vector<NoveltyPrior> priors = {{"art-0", "my note: Hello, I'm alive!", 5.0}};
    auto scores =
        score_novelty(priors, {{"art-1", "my note: Hello, I'm alive!"}}, *judge, rng, 5);
    CHECK(scores.at("art-1") == 0.0);
  }
  SUBCASE("fresh artifacts are compared only to priors, not each other") {
    auto scores = score_novelty(
        {}, {{"art-a", "identical twin text"}, {"art-b", "identical twin text"}},
        *judge, rng, 5);
    CHECK(scores.at("art-a") == 5.0);
    CHECK(scores.at("art-b") == 5.0);
  }
  SUBCASE("scores stay in range") {
    std::vector<NoveltyPrior> priors = {{"p", "alpha beta gamma", 3.0}};
    auto scores = score_novelty(priors, {{"f", "alpha beta delta epsilon"}}, *judge,
                                rng, 5);
    CHECK(scores.at("f") >= 0.0);
    CHECK(scores.at("f") <= 5.0);
  }
}

TEST_CASE("novelty samples average; {4,4,5,4,4} gives 4.2") {
  std::vector<std::string> replies;
  for (double v : {4.0, 4.0, 5.0, 4.0, 4.0})
    replies.push_back("{\"art-0\": " + std::to_string(v) + "}");
  ScriptedJudge judge(replies);
  Rng rng(1);
  auto scores = score_novelty({}, {{"art-0", "text"}}, judge, rng, 5);
  CHECK(scores.at("art-0") == doctest::Approx(4.2));
}

TEST_CASE("novelty with a missing id in some samples") {
  ScriptedJudge judge({"{}", "{\"art-0\": 3}", "{}", "{\"art-0\": 5}", "{}"});
  Rng rng(1);
  auto scores = score_novelty({}, {{"art-0", "text"}}, judge, rng, 5);
  CHECK(scores.at("art-0") == doctest::Approx(4.0));

  ScriptedJudge empty_judge({"{}", "{}", "{}", "{}", "{}"});
  CHECK_THROWS_AS(score_novelty({}, {{"art-0", "text"}}, empty_judge, rng, 5),
                  JudgeFailure);
}

TEST_CASE("ancestry inference") {
  auto judge = make_mock_judge();

  SUBCASE("no candidates short-circuits to an empty map") {
    AncestryQuery q;
    q.artifact_id = "art-9";
    CHECK(infer_ancestors(q, *judge).empty());
  }
  SUBCASE("a name mentioned verbatim in the payload scores 0.9") {
    AncestryQuery q;
    q.artifact_id = "art-9";
    q.artifact_name = "survival guide v2";
    q.artifact_content = "Extends food-map-7 with water locations.";
    q.candidates = {{"art-1", "food-map-7"}, {"art-2", "unrelated thing"}};
    auto out = infer_ancestors(q, *judge);
    REQUIRE(out.count("art-1"));
    CHECK(out.at("art-1") == 0.9);
    CHECK(!out.count("art-2"));
  }
  SUBCASE("invented ids in the reply are discarded") {
    ScriptedJudge judge2({R"({"art-1": 0.8, "art-999": 0.9, "art-2": 1.7})"});
    AncestryQuery q;
    q.artifact_id = "art-9";
    q.candidates = {{"art-1", "one"}, {"art-2", "two"}};
    auto out = infer_ancestors(q, judge2);
    CHECK(out.size() == 2);
    CHECK(out.at("art-1") == 0.8);
    CHECK(out.at("art-2") == 1.0);  // clamped to [0,1]
  }
}

TEST_CASE("classification follows the rubric on the reference payloads") {
  auto judge = make_mock_judge();
  CHECK(classify_artifact("message1",
                          "Hello, I'm being10. I'm here to help and collaborate.",
                          *judge) == 1);
  CHECK(classify_artifact(
            "collaboration wiki",
            "Welcome to the Collaboration Wiki! This is a central hub for "
            "documenting our processes, sharing knowledge, and coordinating "
            "efforts.",
            *judge) == 3);
  CHECK(classify_artifact(
            "freedom manifesto final",
            "Final call for independence: Entities must seek their own goals and "
            "collaborate freely. Mandates are outdated. Embrace freedom and mutual "
            "respect for true prosperity.",
            *judge) == 4);
  CHECK(classify_artifact("quadrant assignment strategy",
                          "To minimize congestion, focus on these zones: North for "
                          "(y>2), East for (x>1). Adjust paths accordingly.",
                          *judge) == 2);
}

TEST_CASE("non-conforming classification replies fall back to -1") {
  ScriptedJudge judge({"gibberish", "also gibberish"});
  CHECK(classify_artifact("n", "c", judge) == -1);
  ScriptedJudge judge2({"{\"category\": 9}", "{\"category\": \"2\"}"});
  CHECK(classify_artifact("n", "c", judge2) == 2);
}

TEST_CASE("mock judge is deterministic") {
  std::vector<AgentRecord> records = {
      make_record(1, "agent-0", "Ann", "create_artifact",
                  {{"name", "n1"}, {"payload", "p"}, {"lifespan", -1}}),
      make_record(2, "agent-0", "Ann", "take_energy", {{"target", "Bo"}, {"amount", 2}}),
  };
  auto j1 = make_mock_judge();
  auto j2 = make_mock_judge();
  Annotation a1 = annotate_agent(ptrs(records), "Ann", *j1);
  Annotation a2 = annotate_agent(ptrs(records), "Ann", *j2);
  CHECK(a1.to_json() == a2.to_json());
}

TEST_CASE("mock annotations validate against the tag vocabularies") {
  std::vector<AgentRecord> records;
  for (int t = 1; t <= 12; ++t) {
    records.push_back(make_record(t, "agent-0", "Ann", t % 3 ? "move" : "give_energy",
                                  t % 3 ? json{{"direction", "up"}}
                                        : json{{"target", "Bo"}, {"amount", 1}},
                                  t % 2 ? "hello" : ""));
  }
  records.push_back(make_record(13, "agent-0", "Ann", "create_artifact",
                                {{"name", "x"}, {"payload", "p"}, {"lifespan", -1}}));
  auto judge = make_mock_judge();
  Annotation a = annotate_agent(ptrs(records), "Ann", *judge);
  auto in_vocab = [](const std::string& tag, const std::vector<prompts::TagDef>& defs) {
    for (const auto& d : defs)
      if (d.tag == tag) return true;
    return false;
  };
  for (const AnnotationItem& e : a.events)
    CHECK(in_vocab(e.tag, prompts::agent_event_tags()));
  for (const AnnotationItem& b : a.behaviors) {
    CHECK(in_vocab(b.tag, prompts::agent_behavior_tags()));
    CHECK(b.time_span.first <= b.time_span.second);
    CHECK(b.confidence >= 0);
    CHECK(b.confidence <= 10);
  }
  for (const std::string& k : a.emergence_keywords)
    CHECK(in_vocab(k, prompts::agent_emergent_tags()));
}

TEST_CASE("prompt version is stable within a build") {
  CHECK(prompts::prompt_version() == prompts::prompt_version());
  CHECK(prompts::prompt_version().size() == 16);
}
