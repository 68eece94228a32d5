// Post-hoc analysis stages over completed run directories. Each stage writes
// its outputs under <run>/analysis/ and never touches engine state.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "terra/fieldwork.hpp"

namespace terra {

inline constexpr const char* kGraphSchema = "tl-graph/1";
inline constexpr const char* kAnnotationsSchema = "tl-annotations/1";
inline constexpr const char* kNoveltySchema = "tl-novelty/1";
inline constexpr const char* kAncestrySchema = "tl-ancestry/1";
inline constexpr const char* kCategoriesSchema = "tl-categories/1";
inline constexpr const char* kPhyloSchema = "tl-phylo/1";
inline constexpr const char* kComplexitySchema = "tl-complexity/1";

class MissingDependency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalyzeOptions {
  std::string judge_uri = "mock";  // "mock" or an http(s) chat endpoint
  std::string annotation_model = "annotator";
  std::string classification_model = "classifier";
  std::string judge_key_env = "TL_JUDGE_KEY";
  uint64_t seed = 1;
  int novelty_samples = 5;
  std::string logprob_uri = "trigram:";
  std::optional<std::filesystem::path> idf_file;
  std::optional<std::filesystem::path> parses_file;
  bool archive = false;
  int group_segment_records = 1000;
  int group_segment_overlap = 100;
};

// Interaction graph, SLPA cover, metrics. No judge required.
void stage_graph(const std::filesystem::path& run_dir, const AnalyzeOptions& options);

// Judge-driven outputs: annotations (agents + communities), novelty scores,
// ancestry edges, categories. Requires the graph stage for communities.
void stage_behavior(const std::filesystem::path& run_dir, const AnalyzeOptions& options);

// Phylogeny analytics over the ancestry/novelty files.
void stage_phylo(const std::filesystem::path& run_dir, const AnalyzeOptions& options);

// The four text-complexity metrics and composites.
void stage_text(const std::filesystem::path& run_dir, const AnalyzeOptions& options);

void run_stage(const std::string& stage, const std::filesystem::path& run_dir,
               const AnalyzeOptions& options);

std::unique_ptr<Judge> make_judge(const AnalyzeOptions& options);

}  // namespace terra
