// Prompt template resources. Templates are embedded constants; render
// functions substitute named slots. prompt_version() fingerprints the set so
// logs and analyses can be bound to the exact wording they ran with.
#pragma once

#include <string>
#include <vector>

namespace terra::prompts {

enum class Motivation { kMinimal, kNone, kCreative };
std::string to_string(Motivation m);
Motivation motivation_from_string(const std::string& s);

// FNV-1a fingerprint over every template shipped here, hex-encoded.
std::string prompt_version();

std::string motivation_text(Motivation m);

struct SystemPromptArgs {
  std::string agent_name;
  int memory_soft_tokens = 150;
  bool personality = true;
  bool inert_artifacts = false;
  Motivation motivation = Motivation::kMinimal;
};
std::string render_system_prompt(const SystemPromptArgs& args);

// Trait block ("=== Your Traits ===" section), 3-decimal values.
struct TraitLine {
  std::string name;
  double value;
};
std::string render_traits_block(const std::vector<TraitLine>& personality,
                                double fertility);

// Reply-format footer; action_keys joined with ", ".
std::string render_reply_footer(const std::string& action_keys);

// Judge prompt templates. Placeholders use {name} syntax; the render helpers
// in fieldwork substitute them.
const std::string& agent_annotation_system();
const std::string& agent_annotation_user();
const std::string& agent_audit_system();
const std::string& agent_audit_user();
const std::string& group_annotation_system();
const std::string& group_annotation_user();
const std::string& group_audit_system();
const std::string& group_audit_user();
const std::string& novelty_system();
const std::string& novelty_user();
const std::string& ancestry_system();
const std::string& ancestry_user();
const std::string& classify_system();
const std::string& classify_user();

struct TagDef {
  std::string tag;
  std::string description;
};

const std::vector<TagDef>& agent_event_tags();
const std::vector<TagDef>& agent_behavior_tags();
const std::vector<TagDef>& agent_emergent_tags();
const std::vector<TagDef>& group_event_tags();
const std::vector<TagDef>& group_behavior_tags();
const std::vector<TagDef>& group_emergent_tags();

std::string render_tag_list(const std::vector<TagDef>& tags);

std::string replace_all(std::string text, const std::string& slot,
                        const std::string& value);

}  // namespace terra::prompts
