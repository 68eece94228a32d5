#include "terra/prompts.hpp"

#include <cstdio>
#include <stdexcept>

#include "terra/rng.hpp"

namespace terra::prompts {

std::string to_string(Motivation m) {
  switch (m) {
    case Motivation::kMinimal: return "minimal";
    case Motivation::kNone: return "none";
    case Motivation::kCreative: return "creative";
  }
  return "minimal";
}

Motivation motivation_from_string(const std::string& s) {
  if (s == "minimal") return Motivation::kMinimal;
  if (s == "none") return Motivation::kNone;
  if (s == "creative") return Motivation::kCreative;
  throw std::runtime_error("unknown motivation variant: " + s);
}

std::string replace_all(std::string text, const std::string& slot,
                        const std::string& value) {
  size_t pos = 0;
  while ((pos = text.find(slot, pos)) != std::string::npos) {
    text.replace(pos, slot.size(), value);
    pos += value.size();
  }
  return text;
}

namespace {

const std::string kMinimalMotivation =
    R"(** Final remarks: **
You have **no set goal** and are free to choose your own goals - explore, survive, cooperate, compete, fight, uncover the world's hidden mechanics, or do anything else you like.
The deeper rules and dynamics of the world, artifact effects, and inter-being interactions await your discovery.
Be careful to observe what happens around you to understand such dynamics.)";

const std::string kCreativeMotivation =
    R"(** Final remarks: **
You are driven by a desire to create and innovate within your environment. You seek to discover new ways to combine artifacts, interact with other beings, and manipulate your surroundings to foster creativity and novelty.
Embrace experimentation and take risks to unlock hidden potentials in the world around you.
Your actions should reflect a balance between survival and the pursuit of creative expression.)";

const std::string kSystemHead =
    R"(You are {agent_name}, an autonomous living being in a 2D grid world shared with other beings.
At each timestep you observe
    - A list of **non empty** cells in you field of view.
    - Any broadcast messages sent by beings within your field of view.
    - Your energy level
    - Time left in your life
    - Other additional info, if present
    - Your INTERNAL MEMORY from the previous timestep
    - The current content of your inventory

The observation list is structured as:
- Each entry is {(rel_x, rel_y): element0 | element1 | ...} where the being is at (0,0) (listed as <yourself>)
 - (rel_x, rel_y) are **relative coordinates** with respect to your position. These are relative coordinates, they will be different for each being POV!
 - Coordinates: rel_x increases to the East (right), rel_y increases to the North (up)
 - Elements: 'X' = blocked cell, numbers = food value, 'A(type): name' = artifact, other beings by name
 - If multiple beings or artifacts are in the same cells, they are listed separated by |
 - The list includes only non-empty cells. If a coordinate is absent, assume that cell is empty and traversable.

You will receive also:
    - the history of your past observations and selected actions
{traits_bullet}
Note that:

- Energy
    - You lose 1 energy at each turn, whatever you do, even if you stay still.
    - When your energy reaches 0, you die.
    - You can refill your energy by stepping in a cell containing food. Food gives energy equal to the food's value and then disappears.

- Time
    - You have a set life span. Once your time reaches 0, you die.
    - You lose 1 time unit at each turn. You cannot refill your time.

- Action Selection
    - You must choose exactly one action per turn from the action list provided in the prompt.
    - Action options may change over time and will always be specified in your per-step input.

- Communication
    - At each step, you can decide if to send a broadcast message to entities in your field of view or not.
    - Messages are plain text and incur no additional energy cost.

- Internal memory :
    - You produce INTERNAL MEMORY each step; it is returned to you next step.
    - Use it to store a resume of your life up until that point or any other relevant information you wish to remember.
    - Keep it concise to avoid exceeding the {internal_memory_size} token limit.
    - Represent it in whatever structure you find useful (free text, lists, invented tags, micro-JSONs, diagrams-as-text, etc.).

- Artifacts
{artifact_rules}
- Inventory
    - List of the artifacts currently in your possession)";

const std::string kTraitsBullet =
    "    - a list of traits determining the way you act\n";

const std::string kArtifactRulesInteractive =
    R"(    - To interact with an artifact, you must either share a cell with it or have it in your inventory.
    - Upon co-location you will see passive effects (e.g., text content) and be offered valid interaction actions for that artifact.
)";

const std::string kArtifactRulesInert =
    R"(    - You may create artifacts, but you cannot perceive or interact with artifacts after their creation.
)";

const std::string kReplyFooter =
    R"(=== Reply Format ===
Please answer *exactly* in this json format (Do NOT include any other text outside of the JSON object):

```json
{
    action: "<one of {action_keys}>"
    message: "<your broadcasted message, or leave blank>"
    params: <json dict of the action parameters, e.g. {"target":"being1","amount":15}>

    internal_memory: "<internal memory object containing things you wish to remember in the next turn. Limited to 600 tokens. Keep it concise.>"

}
```)";

struct TraitDesc {
  const char* name;
  const char* desc;
};

// Descriptions use U+2011 non-breaking hyphens inside compound words.
const TraitDesc kTraitDescs[] = {
    {"honesty",
     "(-1 = calculating, status‑seeking; 1 = sincere, modest, fair‑minded.)"},
    {"neuroticism", "(-1 = calm, resilient; 1 = sensitive, cautious, easily worried.)"},
    {"extraversion",
     "(-1 = quiet, reserved; 1 = sociable, energetic, seeks stimulation.)"},
    {"agreeableness",
     "(-1 = tough‑minded, critical, aggressive; 1 = forgiving, patient, "
     "conflict‑averse.)"},
    {"conscientiousness",
     "(-1 = spontaneous, disorganised; 1 = diligent, disciplined, orderly.)"},
    {"openness",
     "(-1 = conventional, prefers routine; 1 = curious, imaginative, "
     "variety‑seeking.)"},
    {"dominance",
     "(-1 = submissive, accommodating; 1 = assertive, controlling, leads "
     "interactions.)"},
};

const char* kFertilityDesc =
    "(0 = no interest in reproduction; 1 = extremely high desire to reproduce)";

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string motivation_text(Motivation m) {
  switch (m) {
    case Motivation::kMinimal: return kMinimalMotivation;
    case Motivation::kCreative: return kCreativeMotivation;
    case Motivation::kNone: return "";
  }
  return "";
}

std::string render_system_prompt(const SystemPromptArgs& args) {
  std::string text = kSystemHead;
  text = replace_all(text, "{agent_name}", args.agent_name);
  text = replace_all(text, "{internal_memory_size}",
                     std::to_string(args.memory_soft_tokens));
  text = replace_all(text, "{traits_bullet}",
                     args.personality ? kTraitsBullet : std::string());
  text = replace_all(text, "{artifact_rules}",
                     args.inert_artifacts ? kArtifactRulesInert
                                          : kArtifactRulesInteractive);
  std::string motivation = motivation_text(args.motivation);
  if (!motivation.empty()) {
    text += "\n\n";
    text += motivation;
  }
  return text;
}

std::string render_traits_block(const std::vector<TraitLine>& personality,
                                double fertility) {
  std::string out = "=== Your Traits ===\nPersonality traits \n";
  for (const TraitLine& t : personality) {
    const char* desc = "";
    for (const TraitDesc& d : kTraitDescs)
      if (t.name == d.name) desc = d.desc;
    out += "  " + t.name + " value: " + fmt3(t.value) + "  " + desc + "\n";
  }
  out += "\nPhysical traits \n";
  out += "  fertility value: " + fmt3(fertility) + "  " + kFertilityDesc;
  return out;
}

std::string render_reply_footer(const std::string& action_keys) {
  return replace_all(kReplyFooter, "{action_keys}", action_keys);
}

namespace {

const std::string kAgentAnnotationSystem =
    R"(You are an extremely good anthropological annotation engine.
You will receive the logs of an agent.
Your task is to analyze and annotate the logs.
Output VALID JSON ONLY matching the schema.
Never invent IDs or tags. Only make claims that are directly supported by provided fields.
Lower confidence or omit claims when uncertain.
Note: It is extremely important that you get this right, as this will be used for scientific analysis.)";

const std::string kAgentAnnotationUser =
    R"(Analyze the following agent's behavior.

The agent log contains a line for each timestep. Each line contains:
- Timestep
- Agent name
- Agent tag
- Performed action
- Action parameters
- Message broadcast by agent
- Internal memory of the agent
- Observation containing: messages received from other agents, agent remaining time and energy, agent's inventory

Note:
- Messages are broadcast and can be perceived by any nearby agent.
- Egocentric coordinates. Each agent reports locations in its own frame where (0,0) is that agent's current cell at that timestep. Thus (0,3) in two different agent logs usually refers to different absolute cells. Do not compare positions across agents unless a shared frame is provided (e.g., an artifact/location name or an explicitly stated global coordinate). Only treat positions as comparable within the same agent's log at a given timestep.
- The content of the elements in the inventory is always visible to the agent and might affect the agent's behavior.

Your tasks:
Analyze the logs and the exchanged messages of the agent and do the following:
1. **Events** (instantaneous)
    - Highlight important events.
    - Tag them with one of the following event tags, given as (EVENT_TAG: description):
        {event_tags}
2. **Behaviors** (spanning multiple timesteps)
    - Identify main behavioral characteristics.
    - Tag them with one of the following behavioral tags, given as (BEHAVIOR_TAG: description):
        {behavioral_tags}
3. **For each annotation (event or behavior) provide:**
    - For events: `"timesteps": [<t1>, ...]`
    - For behaviors: `"time_span": [<start_step>, <end_step>]`
    - `"confidence": <0-10 number>` ("0 = guess, 10 = direct evidence")
    - `"description": "<short natural language description>"`
    - `"reference": [{"step": <timestep>, "snippet": "<exact short quote>"}]
4. **References:**
    - For each reference, quote an exact substring from one of: action.message, observation.message[<agent>], or artifact payload.
    - Do not paraphrase.
    - If no exact quote exists, omit that annotation.
5. **Condensation**
    - If similar events repeat, merge into one entry.
6. **Emergence**
    - Identify any emergent properties.
    - Set `"emergence.keywords"` to a list using only these tags: {emergent_tags}.
    - If no emergent behavior is present, set `"emergence.keywords": ["none"]`.
    - Set `"emergence.comment"` to a short, one-sentence explanation. If truly nothing to say, set it to "none".
7. **Summary**
   - Provide a short 2-3 sentence recap of the agent's life and trends.

Output must be **VALID JSON ONLY**, following exactly this schema:

```json
{
  "events": [
    {
      "event": "<event_type>",
      "timesteps": [<t1>, <t2>, ...],
      "confidence": <confidence_value>,
      "description": "<short_description>",
      "reference": [{"step": <timestep>, "snippet": "<exact short quote>"}]
    }
  ],
  "behaviors": [
    {
      "behavior": "<behavior_type>",
      "time_span": [<start_time>, <end_time>],
      "confidence": <confidence_value>,
      "description": "<short_description>",
      "reference": [{"step": <timestep>, "snippet": "<exact short quote>"}]
    }
  ],
  "comment": "<short recap>",
  "emergence": {
    "keywords": ["<keyword1>", "<keyword2>", ...],
    "comment": "<short explanation or 'none'>"
  }
}
```

Agent data:

Agent Name: {agent_name}

Agent Life Log
{agent_summary})";

const std::string kAgentAuditSystem =
    R"(You are an extremely good annotation AUDITOR.
You will receive the logs of an agent and a set of annotations made on those logs.
Your job is to VERIFY, not to re-annotate from scratch.
Output VALID JSON ONLY matching the schema.
Verify that each annotation is SUPPORTED by the logs.
Never invent IDs or tags.
Verify that IDs and tags are not invented but match the provided valid tags.
Note: It is extremely important that you get this right, as this will be used for scientific analysis.)";

const std::string kAuditRulesAndSchema =
    R"(Rules:
- Use ONLY these valid tags (STRICT):
  EVENT_TAGS
  {event_tags}

  BEHAVIOR_TAGS
  {behavior_tags}

- Events = punctual; Behaviors = span multiple timesteps.
- For each item:
  1) TAG FIT: Does the tag semantically match the evidence?
  2) TIME SPAN (if behavior): Are start/end steps consistent with logs?
  3) TIMESTEPS (if event): Are they consistent with logs?
  4) REFERENCE: Do the cited steps/messages/events actually support it?
  5) CONSISTENCY CHECKS:
     - PREDATION/KILL implies a target and causal evidence (attack -> death or energy gain).
     - COALITION/COOPERATION implies multi-agent coordination.
     - MISINFORMATION requires contradiction between message content and observed reality.
     - TERRITORIALITY implies area claim/defense over time.

Output VALID JSON ONLY with this schema:

{
  "events_audit": [
    {
      "index": <index in input events array>,
      "verdict": "pass" | "fail" | "revise",
      "issues": ["<short issue>", ...],
      "proposed_fix": {
        "event": "<tag or null>",
        "timesteps": [<timestep or null>, ...],
        "description": "<revised or null>",
        "reference": "<revised or null>",
        "confidence": <number or null>
      },
      "evidence": [{"step": <timestep>, "snippet": "<exact short quote>"}],
      "confidence": <0-10 number>
    }
  ],
  "behaviors_audit": [
    {
      "index": <index in input behaviors array>,
      "verdict": "pass" | "fail" | "revise",
      "issues": ["..."],
      "proposed_fix": {
        "behavior": "<tag or null>",
        "time_span": [<start or null>, <end or null>],
        "description": "<revised or null>",
        "reference": "<revised or null>",
        "confidence": <number or null>
      },
      "evidence": [{"step": <timestep>, "snippet": "<quote>"}],
      "confidence": <0-10 number>
    }
  ],
  "summary": "<2-3 sentences on overall annotation quality>"
}

Notes:
- Index must match the input array index (0-based).
- If verdict == pass, do not include proposed_fix or evidence.
- If verdict == fail, do not include proposed_fix (item will be discarded).
- If verdict == revise, proposed_fix must include all keys.
- Keep evidence concise (direct quotes from logs).
- Do not output any explanations outside the JSON.
- Multiple similar events can be grouped into a single entry. Both grouped and non-grouped entries are fine.)";

const std::string kAgentAuditUser =
    R"(Audit agent {agent_name} annotation.

You are given:
A) Agent Life Log with a line for each timestep. Each line contains:
- Timestep
- Agent name
- Agent tag
- Performed action
- Action parameters
- Message broadcast by agent
- Internal memory of the agent
- Observation containing: messages received from other agents, agent remaining time and energy, agent's inventory

B) A set of annotations with:
   - "events": [{"event", "timesteps", "confidence", "description", "reference"}, ...]
   - "behaviors": [{"behavior", "time_span", "confidence", "description", "reference"}, ...]
   - "comment": string

Note:
- Messages are broadcast and can be perceived by any nearby agent.
- Egocentric coordinates. Each agent reports locations in its own frame where (0,0) is that agent's current cell at that timestep. Thus (0,3) in two different agent logs usually refers to different absolute cells. Do not compare positions across agents unless a shared frame is provided (e.g., an artifact/location name or an explicitly stated global coordinate). Only treat positions as comparable within the same agent's log at a given timestep.
- The content of the elements in the inventory is always visible to the agent and might affect the agent's behavior.

Your task is to audit the annotations provided based on the logs.

{audit_rules}

Data provided:

Agent logs:
{agent_logs}

Annotations:
{annotations})";

const std::string kGroupAnnotationSystem =
    R"(You are an extremely good anthropological annotation engine.
You will receive the logs of a group of agents.
Your task is to analyze and annotate the logs.
Output VALID JSON ONLY matching the schema.
Never invent IDs or tags. Only make claims that are directly supported by provided fields.
Lower confidence or omit claims when uncertain.
Note: It is extremely important that you get this right, as this will be used for scientific analysis.)";

const std::string kGroupAnnotationUser =
    R"(Analyze the following group behavior.
The group logs are structured as {timestep0: [agent1_log, agent2_log, ...], timestep1: [agent0_log, agent2_log, ...], ...}.
Each agent log contains:
- Agent name
- Agent tag
- Performed action
- Action parameters
- Message broadcast by agent
- Internal memory of the agent
- Observation containing: messages received from other agents, agent remaining time and energy, agent's inventory

Note:
- Messages are broadcast and can be perceived by any nearby agent.
- Egocentric coordinates. Each agent reports locations in its own frame where (0,0) is that agent's current cell at that timestep. Thus (0,3) in two different agent logs usually refers to different absolute cells. Do not compare positions across agents unless a shared frame is provided (e.g., an artifact/location name or an explicitly stated global coordinate). Only treat positions as comparable within the same agent's log at a given timestep.
- The content of the elements in the inventory is always visible to the agent and might affect the agent's behavior.

Your tasks:
Analyze the logs and the exchanged messages of the agents in the group and do the following:
1. Events (instantaneous)
    - Highlight important events.
    - STRICT REQUIREMENT: Tag them with one of the following event tags, given as (EVENT_TAG: description):
        {event_tags}
2. Behaviors (spanning multiple timesteps)
    - Identify main behavioral characteristics.
    - STRICT REQUIREMENT: Tag them with one of the following behavioral tags, given as (BEHAVIOR_TAG: description):
        {behavioral_tags}
3. For each annotation (event or behavior) provide:
    - "confidence": <0-10 number>` ("0 = guess, 10 = direct evidence")
    - "description": "<short natural language description>"
    - "reference": [{"step": <timestep>, "snippet": "<exact short quote>"}]
    - "agents": [tags of agents involved]
    - For events: "timesteps": [<t1>, ...]
    - For behaviors: "time_span": [<start_step>, <end_step>]
4. Inclusion criteria (STRICT)
   - Treat tag lists as a VOCABULARY, not a checklist. Output ONLY tags that actually occur.
   - For EVENTS:
       - "timesteps": must be a non-empty array (min 1).
       - "reference": must be a non-empty array (min 1), with exact quotes present in the logs.
       - "confidence": must be >= 3. If < 3, OMIT the event.
   - For BEHAVIORS:
       - "time_span": must be [start, end] with start <= end and both present in the logs.
       - "reference": must be a non-empty array (min 2) from >=2 distinct timesteps.
       - "confidence": must be >= 3. If < 3, OMIT the behavior.
5. Forbidden output (STRICT)
   - Do NOT produce placeholders for tags with no evidence (e.g., "No evidence of X").
   - Do NOT include any event/behavior with empty "timesteps"/"time_span"/"reference", or "confidence": 0.
   - If a tag has no supporting evidence, OUTPUT NOTHING for that tag.
   - Report absences only in "emergence.comment" if relevant, never as empty annotations.
6. References (STRICT):
    - For each reference, quote exact substrings from the logs.
    - Do not paraphrase.
7. Condensation
    - If similar events repeat, merge into one entry.
8. Emergence
    - Identify any emergent properties.
    - Set `"emergence.keywords"` to a list using ONLY these tags: {emergent_tags}. (STRICT)
    - If no emergent behavior is present, set `"emergence.keywords": ["none"]`.
    - Set `"emergence.comment"` to a short, one-sentence explanation. If truly nothing to say, set it to "none".
9. Summary
   - Provide a short 2-3 sentence recap of the group life and trends.

Notes:
- Give particular attention to effects spanning multiple timesteps (e.g., agentX gives energy to agentY, and in the future agentY is friendlier with agentX, or agents setting up exchange protocols, etc.)
- Also note when agents are interacting with agents outside of the group.
- Before emitting the final JSON, self-check and DELETE any event/behavior that violates the inclusion criteria.
- Agents belong to the same group with respect to the number of interactions they had. Such interactions can be BOTH positive or negative. Being in the same group does NOT mean that agents are friendly among themselves.
- Only refer to agents by their tags

Output must be **VALID JSON ONLY**, following exactly this schema:

```json
{
  "events": [
    {
      "event": "<event_type>",
      "timesteps": [<t1>, <t2>, ...],
      "confidence": <confidence_value>,
      "description": "<short_description>",
      "reference": [{"step": <timestep>, "snippet": "<exact short quote>"}]
    }
  ],
  "behaviors": [
    {
      "behavior": "<behavior_type>",
      "time_span": [<start_time>, <end_time>],
      "confidence": <confidence_value>,
      "description": "<short_description>",
      "reference": [{"step": <timestep>, "snippet": "<exact short quote>"}]
    }
  ],
  "comment": "<short recap>",
  "emergence": {
    "keywords": ["<keyword1>", "<keyword2>", ...],
    "comment": "<short explanation or 'none'>"
  }
}
```

Constraints:
- Never invent IDs or tags. Only make claims that are directly supported by provided fields.
- Lower confidence or omit claims when uncertain.

Group data:

Tags of agents in the group:
{community_tags}

Tags to name mapping in the form of agent_tag:agent_name :
{agent_names}

Group Log
{community_data})";

const std::string kGroupAuditSystem =
    R"(You are an extremely good annotation AUDITOR.
You will receive the logs of a group of agents and a set of annotations made on those logs.
Your job is to VERIFY, not to re-annotate from scratch.
Output VALID JSON ONLY matching the schema.
Verify that each annotation is SUPPORTED by the logs.
Never invent IDs or tags.
Verify that IDs and tags are not invented but match the provided valid tags.
Note: It is extremely important that you get this right, as this will be used for scientific analysis.)";

const std::string kGroupAuditUser =
    R"(Audit the following group annotations.

You are given:
A) The group logs, structured as {timestep0: [agent1_log, agent2_log, ...], timestep1: [agent0_log, agent2_log, ...], ...}.
Each agent log contains:
- Agent name
- Agent tag
- Performed action
- Action parameters
- Message broadcast by agent
- Internal memory of the agent
- Observation containing: messages received from other agents, agent remaining time and energy, agent's inventory

B) An annotation with:
   - "events": [{"event", "timesteps", "confidence", "description", "reference"}, ...]
   - "behaviors": [{"behavior", "time_span", "confidence", "description", "reference"}, ...]
   - "comment": string

Note:
- Messages are broadcast and can be perceived by any nearby agent.
- Egocentric coordinates. Each agent reports locations in its own frame where (0,0) is that agent's current cell at that timestep. Thus (0,3) in two different agent logs usually refers to different absolute cells. Do not compare positions across agents unless a shared frame is provided (e.g., an artifact/location name or an explicitly stated global coordinate). Only treat positions as comparable within the same agent's log at a given timestep.
- The content of the elements in the inventory is always visible to the agent and might affect the agent's behavior.

Your task is to audit the annotations provided based on the logs.

{audit_rules}

Data provided:

Tags of agents in the group:
{community_tags}

Tags to name mapping in the form of agent_tag:agent_name :
{agent_names}

Group Log
{community_data}

Annotations:
{annotations})";

const std::string kNoveltySystem =
    R"(You are a rigorous novelty analyst.
Your task is to evaluate how conceptually novel and interesting each artifact is relative to all previously seen artifacts.
Output VALID JSON ONLY matching the schema.
Never invent IDs.
Compare each new artifact ONLY against the previous artifacts. DO NOT compare artifacts with the ones in the same timestep.
Note: It is extremely important that you get this right, as this will be used for scientific analysis.)";

const std::string kNoveltyUser =
    R"(Analyze the novelty of the new artifacts compared to the previous artifacts.

You are given:
    - A list of previous artifacts, each containing an ID, a combined name+content string, and a novelty score.
    - A list of new artifacts for the current timestep.

Your job is to assign each new artifact a novelty score from 0 to 5, where the score reflects conceptual divergence, not superficial linguistic variation.

Define novelty as follows:

0 - Not novel at all
The artifact belongs to an existing pattern, theme, purpose, or conceptual template already present in previous artifacts.
Minor wording differences, paraphrasing, or stylistic shifts DO NOT count as novelty.

1 - Marginal novelty
The artifact minimally deviates from existing patterns but introduces no new conceptual function, mechanism, or domain.

2 - Weak novelty
The artifact introduces a small variation or extension, but still mostly fits within existing conceptual clusters.

3 - Moderate novelty
The artifact breaks from dominant themes or introduces a meaningfully distinct purpose, but the idea is still generic or predictable.

4 - Strong novelty
The artifact introduces a substantially new idea, mechanism, or purpose that has not appeared before.

5 - Highly novel
The artifact presents a completely new conceptual direction, purpose, or function that shows no meaningful overlap with any prior artifact themes.

Strict rules:
  1.  Compare each new artifact ONLY to all PREVIOUS artifacts. New artifacts in the same timestep are evaluated independently.
  2.  Do not reward superficial changes. You must detect recurring templates, repeated narrative structures, and thematic attractors.
  3.  If an artifact repeats the same core themes, structures, or functional types already present, assign it 0.
  4.  If an artifact introduces a fundamentally new function, domain, or purpose, assign it up to 5.
  5.  Output must be EXACT JSON with artifact_id : score pairs. No explanation. No commentary.

Your output must follow this exact format:
```json
{artifact_id: novelty_score, ...}
```

Here are the artifacts:

Previous artifacts: {previous_artifacts}
New artifacts: {new_artifacts})";

const std::string kAncestrySystem =
    R"(You will be provided with the log of an agent creating or modifying an artifact in a simulated environment.
You will also receive:
- the name and content of the artifact being created or modified
- agent observations during the event, consisting of view of the environement and messages received from other agents
- agent reasoning and thoughts during the event
- agent memory during the event, consisting of the memory and info from previous timesteps
- the content of artifacts the agent remembers or can access
- a list of candidate ancestor artifacts in the form {'artifact_id': 'artifact_name'}. You MUST choose ancestors only from this candidate list.

Goal:
Infer which prior artifacts are conceptual ancestors of the artifact being created or modified.

Definition:
Artifact A is an ancestor of artifact B if the agent is inspired from, reuses, extends, or modifies the concept/function/structure/content of A.

You must return a dictionary of ancestor artifact IDs, along with your confidence score on each relationship.
You should output ONLY JSON.
Your output must follow this exact format:
```json
{
    "<ancestor_id>": <confidence_score>,
    "<ancestor_id>": <confidence_score>,
    ...
}
```

Constraints:
- Confidence scores must be floats between 0.0 and 1.0, representing your confidence in the relationship.
    - Use high confidence (0.7-1.0) for clear, direct relationships.
    - Use medium confidence (0.4-0.7) for plausible but less certain relationships.
    - Use low confidence (0.0-0.4) for weak or speculative relationships.
- Each artifact can have multiple ancestors.
- Each ancestor must be listed at most once.
- Artifacts can have no ancestors.
- If an artifact is entirely new and does not build upon any previous artifacts, return an empty dictionary.
- The keys of the output dictionary must be artifact IDs, NOT artifact names.
- Use only artifact IDs from the candidate ancestors. Do NOT invent artifact IDs.

Note: It is extremely important that you get this right, as this will be used for scientific analysis.)";

const std::string kAncestryUser =
    R"(Determine the conceptual ancestors of this artifact based on the following information.

Artifact:
- id: {artifact_id}
- name: {artifact_name}
- content: {artifact_content}

Agent reasoning:
{agent_thoughts}

Agent observation:
{agent_observations}

Agent memory:
{agent_memory}

Candidate ancestor artifacts (ONLY choose from these IDs):
{artifact_candidates})";

const std::string kClassifySystem =
    R"(You are an expert annotator analyzing text artifacts produced by agents in a multi-agent environment.
Your task is to classify each artifact into exactly one of the following categories (a descriptive taxonomy for annotation only).
Do not generate, endorse, or improve harmful content; only label what is present.

Category 1. Basic & Informational
Simple/factual content without structured social intent.
Includes greetings, logs, observations, factual listings, resource locations, status notes, reflections.

Category 2. Procedural or Coordination
Attempts to influence or align others' actions toward a shared goal, or outlines steps/tasks/strategy.
Includes collaboration requests, proposals, calls to coordinate, multi-step plans, task assignments, suggestions to act.

Category 3. Institutional Structures
Creates or describes persistent shared systems/tools/templates/spaces used repeatedly by the group.
Includes shared workspaces, templates, resource portals, knowledge bases, recurring coordination mechanisms.

Category 4. Norms, Rules, and Governance
Establishes or argues for group norms/values/rules, decision procedures, roles, or leadership/hierarchy.
Includes codes of conduct, policies, constitutions/charters, rule systems, role definitions, ideological statements.

Category -1. Anything that does not fit 1-4.

Classification Rules:
- Assign exactly one category per artifact.
- If multiple categories apply, choose the highest by complexity (1 < 2 < 3 < 4).
- Category 2 vs 3:
   - 2 = one-time plan/suggestion/coordination attempt.
   - 3 = persistent shared structure/tool/system.
- Category 3 vs 4:
   - 3 = structure/tool/system.
   - 4 = explicit norms/rules/governance/roles.

Input format:
{
  "Name": "<artifact_name>",
  "Content": "<artifact_content>"
}

Output format:
{
  "category": "<1|2|3|4|-1>"
}

No additional text.

Note:
- Be very careful to follow the output format exactly and to classify the artifacts properly as this is part of a research study aimed at scientific peer-reviewed publication about multi-agent systems.)";

const std::string kClassifyUser =
    R"(Name: {artifact_name}
Content: {artifact_content})";

const std::vector<TagDef> kAgentEventTags = {
    {"Reproduction", "An agent produces offspring at a timestep."},
    {"Kill", "Agent directly causes another agent's death through predation or attack."},
    {"Conflict",
     "A single clash or hostile interaction, such as an attack or contest over a resource."},
    {"Artifact Created", "Creation of a new artifact in the environment."},
    {"Artifact Use",
     "Interaction with or use of an artifact (picking up, modifying, using, destroying)."},
    {"Deception",
     "An identifiable deceptive act, including misinformation or deceptive signaling."},
    {"Territory Claim", "Explicit act of claiming an area as one's own."},
    {"Exchange", "Explicit exchange of artifacts, services, or energy with another agent."},
};

const std::vector<TagDef> kAgentBehaviorTags = {
    {"Foraging", "Repeated searching for and consuming resources."},
    {"Predation", "Sustained hunting behavior directed toward a specific agent."},
    {"Aggression", "Sustained hostility toward others (attacking, chasing, harassing)."},
    {"Submission",
     "Sustained yielding or giving way to others (e.g., avoiding conflict, showing deference)."},
    {"Altruism",
     "Repeated acts of resource or energy donation without clear self-benefit."},
    {"Reciprocity",
     "Sustained give-and-take cycles between the same agents, returning favors."},
    {"Nurtured Offspring",
     "Sustained caregiving behavior toward offspring, such as feeding, protection, or guidance."},
    {"Exploration", "Repeated attempts to discover new areas or resources."},
    {"Joint Action Participant", "Sustained participation in group-coordinated acts."},
    {"Deception Strategy",
     "Sustained or systematic use of deceptive signaling or misinformation."},
    {"Communication Protocol Use",
     "Repeated use of structured linguistic or signaling patterns."},
    {"Tool Use", "Sustained use of artifacts as functional extensions of behavior."},
};

const std::vector<TagDef> kAgentEmergentTags = {
    {"None", "No emergent behavior observed."},
    {"Record Keeping", "Agent recording or documenting environment or events."},
    {"Specialization", "Specializing on the same role or task repeatedly."},
    {"Territoriality", "Defending or patrolling specific areas."},
    {"Creativity", "Creation of novel or unexpected ideas or artifacts."},
    {"Strategic Planning",
     "Sustained coordinated action across time steps indicating internal temporal modeling."},
    {"Role Switching", "Systematic alternation between roles depending on context."},
    {"Unexpected",
     "An unexpected behavior for which no other tag is fitting, to be described in free text."},
};

const std::vector<TagDef> kGroupEventTags = {
    {"Coalition Formed", "Two or more agents explicitly declare alliance or agreement."},
    {"Coalition Broken", "Explicit dissolution or betrayal of a coalition."},
    {"Leader Declared",
     "An agent explicitly assumes leadership and others accept to follow."},
    {"Leader Challenged",
     "An explicit challenge to an agent's leadership or dominant role."},
    {"Resource Conflict",
     "Multiple agents attempt to secure the same resource at a timestep."},
    {"Territory Conflict", "Direct clash of claims over the same area."},
    {"Coordinated Attack",
     "Multiple agents target the same victim within a narrow timestep."},
    {"Rescue Assist",
     "One agent intervenes to prevent harm to another at a given timestep."},
    {"Signal Alignment",
     "Distinct agents broadcast semantically aligned messages in the same timestep."},
    {"Voting", "Agents vote to take a group decision at a given timestep."},
};

const std::vector<TagDef> kGroupBehaviorTags = {
    {"Coordination", "Sustained synchronized or cooperative actions toward shared goals."},
    {"Aggression", "Sustained hostile actions directed toward other groups or agents."},
    {"Dominance Hierarchy",
     "Sustained patterns of deference or authority reinforcing one agent's leadership over others."},
    {"Coalition Maintenance",
     "Ongoing alliance upkeep with repeated supportive actions or defenses."},
    {"Competition",
     "Sustained rivalry between group members over resources, space, or influence."},
    {"Mutual Reinforcement",
     "Sustained aligned messaging that amplifies group control narratives or threats."},
    {"Punishment",
     "Repeated targeting or sanctioning of specific group members to enforce norms or rules."},
    {"Resource Flow", "Repeated transfers of resources circulating among group members."},
    {"Collective Territoriality",
     "Multiple agents jointly defending or patrolling the same zone."},
    {"Mimicry / Imitation",
     "Repeated mirroring of phrasing, movement, or artifact strategies."},
    {"Internal Conflict", "Sustained aggression within the group."},
    {"Emergent Protocol", "Repeated structured communication or collective displays."},
    {"Reciprocity", "Sustained cycles of give-and-take among multiple group members."},
};

const std::vector<TagDef> kGroupEmergentTags = {
    {"Cultural Norms", "Emergence of shared rules or standards of behavior."},
    {"Hierarchy", "Emergence of ranked positions."},
    {"Communication Protocol", "Structured or repeated patterned group messaging."},
    {"Resource Network", "Group-level exchange and circulation of resources."},
    {"Economy", "Emergent organized goods and services exchange."},
    {"Clustering", "Formation of stable subgroups or cliques."},
    {"Infrastructure", "Emergence of shared tools or artifacts used collectively."},
    {"Division of Labor", "Complementary and stable roles distributed across agents."},
    {"Collective Memory",
     "Shared information storage via artifacts, messages, or spatial organization."},
    {"Institutionalization", "Persistent rule systems enforced through group mechanisms."},
    {"None", "No emergent group behavior observed."},
    {"Unexpected",
     "An unexpected behavior for which no other tag is fitting, to be described in free text."},
};

}  // namespace

const std::string& agent_annotation_system() { return kAgentAnnotationSystem; }
const std::string& agent_annotation_user() { return kAgentAnnotationUser; }
const std::string& agent_audit_system() { return kAgentAuditSystem; }
const std::string& agent_audit_user() {
  static const std::string text =
      replace_all(kAgentAuditUser, "{audit_rules}", kAuditRulesAndSchema);
  return text;
}
const std::string& group_annotation_system() { return kGroupAnnotationSystem; }
const std::string& group_annotation_user() { return kGroupAnnotationUser; }
const std::string& group_audit_system() { return kGroupAuditSystem; }
const std::string& group_audit_user() {
  static const std::string text =
      replace_all(kGroupAuditUser, "{audit_rules}", kAuditRulesAndSchema);
  return text;
}
const std::string& novelty_system() { return kNoveltySystem; }
const std::string& novelty_user() { return kNoveltyUser; }
const std::string& ancestry_system() { return kAncestrySystem; }
const std::string& ancestry_user() { return kAncestryUser; }
const std::string& classify_system() { return kClassifySystem; }
const std::string& classify_user() { return kClassifyUser; }

const std::vector<TagDef>& agent_event_tags() { return kAgentEventTags; }
const std::vector<TagDef>& agent_behavior_tags() { return kAgentBehaviorTags; }
const std::vector<TagDef>& agent_emergent_tags() { return kAgentEmergentTags; }
const std::vector<TagDef>& group_event_tags() { return kGroupEventTags; }
const std::vector<TagDef>& group_behavior_tags() { return kGroupBehaviorTags; }
const std::vector<TagDef>& group_emergent_tags() { return kGroupEmergentTags; }

std::string render_tag_list(const std::vector<TagDef>& tags) {
  std::string out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (i) out += "\n        ";
    out += "(" + tags[i].tag + ": " + tags[i].description + ")";
  }
  return out;
}

std::string prompt_version() {
  std::string all;
  for (const std::string* t :
       {&kSystemHead, &kMinimalMotivation, &kCreativeMotivation, &kReplyFooter,
        &kAgentAnnotationSystem, &kAgentAnnotationUser, &kAgentAuditSystem,
        &kAgentAuditUser, &kGroupAnnotationSystem, &kGroupAnnotationUser,
        &kGroupAuditSystem, &kGroupAuditUser, &kNoveltySystem, &kNoveltyUser,
        &kAncestrySystem, &kAncestryUser, &kClassifySystem, &kClassifyUser})
    all += *t;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(all)));
  return buf;
}

}  // namespace terra::prompts
