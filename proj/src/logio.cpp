#include "terra/logio.hpp"

#include <cstdio>

namespace terra {

namespace {

json inbox_to_json(const std::vector<IncomingMessage>& inbox) {
  json arr = json::array();
  for (const IncomingMessage& m : inbox) arr.push_back({m.sender, m.text});
  return arr;
}

std::vector<IncomingMessage> inbox_from_json(const json& arr) {
  std::vector<IncomingMessage> out;
  for (const auto& m : arr) out.push_back({m.at(0), m.at(1)});
  return out;
}

}  // namespace

json AgentRecord::to_json() const {
  json j;
  j["type"] = "agent";
  j["t"] = t;
  j["id"] = id;
  j["name"] = name;
  j["action"] = {{"kind", action_kind},
                 {"params", params},
                 {"status", status},
                 {"reason", reason ? json(*reason) : json()}};
  j["message"] = message;
  j["memory"] = memory_after;
  j["rationale"] = rationale;
  j["obs"] = {{"text", obs_text},
              {"visible", visible_agents},
              {"inbox", inbox_to_json(inbox)},
              {"energy", energy},
              {"time_left", time_left},
              {"inventory", inventory}};
  j["pos"] = {pos.x, pos.y};
  j["energy_after"] = energy_after;
  j["effects"] = {{"food_eaten", food_eaten},
                  {"transfer_amount", transfer_amount},
                  {"target", transfer_target ? json(*transfer_target) : json()}};
  j["events"] = events;
  return j;
}

AgentRecord AgentRecord::from_json(const json& j) {
  AgentRecord r;
  r.t = j.at("t");
  r.id = j.at("id");
  r.name = j.at("name");
  const json& a = j.at("action");
  r.action_kind = a.at("kind");
  r.params = a.at("params");
  r.status = a.at("status");
  if (!a.at("reason").is_null()) r.reason = a.at("reason").get<std::string>();
  r.message = j.at("message");
  r.memory_after = j.at("memory");
  r.rationale = j.value("rationale", "");
  const json& o = j.at("obs");
  r.obs_text = o.at("text");
  r.visible_agents = o.at("visible").get<std::vector<std::string>>();
  r.inbox = inbox_from_json(o.at("inbox"));
  r.energy = o.at("energy");
  r.time_left = o.at("time_left");
  r.inventory = o.at("inventory").get<std::vector<std::string>>();
  r.pos = {j.at("pos").at(0).get<int>(), j.at("pos").at(1).get<int>()};
  r.energy_after = j.at("energy_after");
  const json& e = j.at("effects");
  r.food_eaten = e.at("food_eaten");
  r.transfer_amount = e.at("transfer_amount");
  if (!e.at("target").is_null()) r.transfer_target = e.at("target").get<std::string>();
  r.events = j.at("events");
  return r;
}

json StepMeta::to_json() const {
  json spawned = json::array();
  for (const auto& [x, y, v] : food_spawned) spawned.push_back({x, y, v});
  json decayed = json::array();
  for (const auto& [x, y] : food_decayed) decayed.push_back({x, y});
  return {{"type", "step"}, {"t", t}, {"food_spawned", spawned}, {"food_decayed", decayed}};
}

StepMeta StepMeta::from_json(const json& j) {
  StepMeta s;
  s.t = j.at("t");
  for (const auto& f : j.at("food_spawned"))
    s.food_spawned.emplace_back(f.at(0).get<int>(), f.at(1).get<int>(),
                                f.at(2).get<double>());
  for (const auto& f : j.at("food_decayed"))
    s.food_decayed.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
  return s;
}

std::map<std::string, std::string> RunLog::id_to_name() const {
  std::map<std::string, std::string> out;
  for (const AgentRecord& r : records) out[r.id] = r.name;
  return out;
}

const ArtifactRow* RunLog::find_artifact(const std::string& id) const {
  for (const ArtifactRow& a : artifacts)
    if (a.id == id) return &a;
  return nullptr;
}

RunWriter::RunWriter(const std::filesystem::path& dir, const json& header)
    : dir_(dir) {
  std::filesystem::create_directories(dir);
  log_.open(dir / "log.jsonl");
  events_.open(dir / "events.jsonl");
  artifacts_.open(dir / "artifacts.jsonl");
  if (!log_ || !events_ || !artifacts_)
    throw LogError("cannot open log files under " + dir.string());
  json h = header;
  h["schema"] = kLogSchema;
  log_ << h.dump() << "\n";
  json he = {{"schema", kEventsSchema}, {"run_id", header.value("run_id", "")}};
  events_ << he.dump() << "\n";
  json ha = {{"schema", kArtifactsSchema}, {"run_id", header.value("run_id", "")}};
  artifacts_ << ha.dump() << "\n";
}

void RunWriter::write_step(const StepMeta& step) { log_ << step.to_json().dump() << "\n"; }
void RunWriter::write_record(const AgentRecord& r) { log_ << r.to_json().dump() << "\n"; }

void RunWriter::write_birth(const BirthEvent& e) {
  events_ << json{{"type", "birth"},     {"t", e.t},
                  {"child", e.child},    {"child_name", e.child_name},
                  {"parent", e.parent},  {"pos", {e.pos.x, e.pos.y}},
                  {"energy", e.energy}}
                 .dump()
          << "\n";
}

void RunWriter::write_death(const DeathEvent& e) {
  events_ << json{{"type", "death"}, {"t", e.t}, {"agent", e.agent}, {"cause", e.cause}}
                 .dump()
          << "\n";
}

void RunWriter::write_artifact_op(const ArtifactOpEvent& e) {
  events_ << json{{"type", "artifact"},
                  {"t", e.t},
                  {"op", e.op},
                  {"artifact", e.artifact_id},
                  {"name", e.artifact_name},
                  {"agent", e.agent},
                  {"counterparty", e.counterparty ? json(*e.counterparty) : json()},
                  {"payload_hash", e.payload_hash}}
                 .dump()
          << "\n";
}

void RunWriter::write_artifact_row(const ArtifactRow& row) {
  json versions = json::array();
  for (const ArtifactVersion& v : row.versions)
    versions.push_back({{"t", v.t}, {"payload", v.payload}, {"lifespan", v.lifespan}});
  artifacts_ << json{{"id", row.id},
                     {"name", row.name},
                     {"creator", row.creator},
                     {"created_at", row.created_at},
                     {"modified_at", row.modified_at},
                     {"versions", versions}}
                    .dump()
             << "\n";
}

void RunWriter::write_summary(const json& summary) {
  std::ofstream out(dir_ / "summary.json");
  out << summary.dump(2) << "\n";
}

void RunWriter::flush() {
  log_.flush();
  events_.flush();
  artifacts_.flush();
}

namespace {

std::vector<json> read_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LogError("cannot open " + file.string());
  std::vector<json> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw LogError("malformed JSON at " + file.string() + ":" +
                     std::to_string(lineno));
    lines.push_back(std::move(j));
  }
  return lines;
}

}  // namespace

RunLog load_run(const std::filesystem::path& dir) {
  RunLog log;
  auto log_lines = read_jsonl(dir / "log.jsonl");
  if (log_lines.empty()) throw LogError("empty log in " + dir.string());
  log.header = log_lines.front();
  if (log.header.value("schema", "") != kLogSchema)
    throw LogError("unexpected log schema in " + dir.string());
  for (size_t i = 1; i < log_lines.size(); ++i) {
    const json& j = log_lines[i];
    std::string type = j.value("type", "");
    if (type == "step")
      log.steps.push_back(StepMeta::from_json(j));
    else if (type == "agent")
      log.records.push_back(AgentRecord::from_json(j));
    else
      throw LogError("unknown record type at line " + std::to_string(i + 1));
  }
  for (const json& j : read_jsonl(dir / "events.jsonl")) {
    std::string type = j.value("type", "");
    if (type == "birth")
      log.births.push_back({j.at("t"),
                            j.at("child"),
                            j.at("child_name"),
                            j.at("parent"),
                            {j.at("pos").at(0).get<int>(), j.at("pos").at(1).get<int>()},
                            j.at("energy").get<double>()});
    else if (type == "death")
      log.deaths.push_back({j.at("t"), j.at("agent"), j.at("cause")});
    else if (type == "artifact") {
      ArtifactOpEvent e;
      e.t = j.at("t");
      e.op = j.at("op");
      e.artifact_id = j.at("artifact");
      e.artifact_name = j.at("name");
      e.agent = j.at("agent");
      if (!j.at("counterparty").is_null())
        e.counterparty = j.at("counterparty").get<std::string>();
      e.payload_hash = j.at("payload_hash");
      log.artifact_ops.push_back(std::move(e));
    }
  }
  for (const json& j : read_jsonl(dir / "artifacts.jsonl")) {
    if (j.contains("schema")) continue;
    ArtifactRow row;
    row.id = j.at("id");
    row.name = j.at("name");
    row.creator = j.at("creator");
    row.created_at = j.at("created_at");
    row.modified_at = j.at("modified_at").get<std::vector<int>>();
    for (const auto& v : j.at("versions"))
      row.versions.push_back({v.at("t"), v.at("payload"), v.at("lifespan")});
    log.artifacts.push_back(std::move(row));
  }
  return log;
}

std::string payload_hash(const std::string& payload) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(payload)));
  return buf;
}

std::string render_log_line(const AgentRecord& r, bool include_timestep) {
  std::string line;
  if (include_timestep) line += "t=" + std::to_string(r.t) + " | ";
  line += "name=" + r.name + " | tag=" + r.id + " | action=" + r.action_kind +
          " | params=" + params_python_repr(r.params);
  if (r.status == "rejected")
    line += " (rejected: " + (r.reason ? *r.reason : std::string("?")) + ")";
  line += " | message=\"" + r.message + "\"";
  line += " | memory=\"" + r.memory_after + "\"";
  std::string msgs;
  for (const IncomingMessage& m : r.inbox) {
    if (!msgs.empty()) msgs += "; ";
    msgs += m.sender + ": " + m.text;
  }
  std::string inv;
  for (const std::string& name : r.inventory) {
    if (!inv.empty()) inv += ", ";
    inv += name;
  }
  line += " | observation={msgs=[" + msgs + "], time=" + std::to_string(r.time_left) +
          ", energy=" + fmt_number_py(r.energy) + ", inventory=[" + inv + "]}";
  return line;
}

}  // namespace terra
