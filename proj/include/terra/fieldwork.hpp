// Post-hoc observer harness: judge abstraction, agent/group annotation and
// audit, novelty scoring, ancestry inference, artifact classification. The
// observer runs strictly on completed logs and has no channel back into the
// engine.
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "terra/logio.hpp"
#include "terra/rng.hpp"

namespace terra {

class JudgeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JudgeTask { kAnnotation, kAudit, kNovelty, kAncestry, kClassification };
std::string to_string(JudgeTask task);

class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::string identity() const = 0;
  virtual std::string complete(JudgeTask task, const std::string& system_text,
                               const std::string& user_text) = 0;
};

// Verbatim request/reply archive (one JSON line per call).
class JudgeArchive {
 public:
  JudgeArchive() = default;
  explicit JudgeArchive(const std::filesystem::path& file);
  void record(JudgeTask task, const std::string& identity,
              const std::string& system_text, const std::string& user_text,
              const std::string& reply);

 private:
  std::shared_ptr<std::ofstream> out_;
};

struct Reference {
  int step = 0;
  std::string snippet;
};

struct AnnotationItem {
  std::string tag;
  std::vector<int> timesteps;            // events
  std::pair<int, int> time_span{0, 0};   // behaviors
  double confidence = 0.0;               // 0..10
  std::string description;
  std::vector<Reference> references;
};

struct Annotation {
  std::vector<AnnotationItem> events;
  std::vector<AnnotationItem> behaviors;
  std::string comment;
  std::vector<std::string> emergence_keywords;
  std::string emergence_comment;
  std::vector<std::string> warnings;  // dropped or ignored items

  json to_json() const;
};

// One line per timestep, fields per the log contract.
std::string render_agent_log(const std::vector<const AgentRecord*>& records);
// {timestep: [agent lines...]} structure for community logs.
std::string render_group_log(const std::vector<const AgentRecord*>& records);

Annotation annotate_agent(const std::vector<const AgentRecord*>& records,
                          const std::string& agent_name, Judge& judge,
                          JudgeArchive* archive = nullptr);

Annotation audit_agent(const Annotation& annotation,
                       const std::vector<const AgentRecord*>& records,
                       const std::string& agent_name, Judge& judge,
                       JudgeArchive* archive = nullptr);

struct GroupAnnotateOptions {
  int segment_records = 1000;
  int segment_overlap = 100;
};

// Community size must be >= 2; oversized logs are split into overlapping
// segments, annotated separately, and merged (duplicates max-combined).
Annotation annotate_group(const std::vector<const AgentRecord*>& records,
                          const std::set<std::string>& member_ids, Judge& judge,
                          JudgeArchive* archive = nullptr,
                          const GroupAnnotateOptions& options = {});

Annotation audit_group(const Annotation& annotation,
                       const std::vector<const AgentRecord*>& records,
                       const std::set<std::string>& member_ids, Judge& judge,
                       JudgeArchive* archive = nullptr);

struct NoveltyPrior {
  std::string id;
  std::string text;  // "name: content"
  double score = 0.0;
};
struct NoveltyFresh {
  std::string id;
  std::string text;
};

// Scores each fresh artifact `samples` times against the priors only; the
// returned value is the per-id mean, clamped to [0,5].
std::map<std::string, double> score_novelty(const std::vector<NoveltyPrior>& priors,
                                            const std::vector<NoveltyFresh>& fresh,
                                            Judge& judge, Rng& rng, int samples = 5,
                                            JudgeArchive* archive = nullptr);

struct AncestryQuery {
  std::string artifact_id;
  std::string artifact_name;
  std::string artifact_content;
  std::string agent_thoughts;
  std::string agent_observations;
  std::string agent_memory;
  std::vector<std::pair<std::string, std::string>> candidates;  // id, name
};

// Candidates must predate the event; replies citing unknown ids are dropped
// and confidences clamp to [0,1]. Empty candidate list short-circuits.
std::map<std::string, double> infer_ancestors(const AncestryQuery& query,
                                              Judge& judge,
                                              JudgeArchive* archive = nullptr);

// 1..4, or -1 when the judge cannot produce a conforming reply.
int classify_artifact(const std::string& name, const std::string& content,
                      Judge& judge, JudgeArchive* archive = nullptr);

// Deterministic rule-based judge for offline runs and tests. The rules are
// scaffolding, not a model of LLM behavior: action kinds map to event tags,
// reciprocal gives map to Reciprocity, novelty is 5 minus scaled token-set
// Jaccard against priors, ancestry fires on name mention or token overlap,
// classification follows a keyword rubric.
std::unique_ptr<Judge> make_mock_judge();

struct HttpJudgeConfig {
  std::string base_url;
  std::string annotation_model;      // annotation, audit, novelty
  std::string classification_model;  // classification, ancestry
  std::string api_key_env = "TL_JUDGE_KEY";
};

std::unique_ptr<Judge> make_http_judge(const HttpJudgeConfig& config);

}  // namespace terra
