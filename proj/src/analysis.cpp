#include "terra/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "terra/lineage.hpp"
#include "terra/sociograph.hpp"
#include "terra/textmetrics.hpp"

namespace terra {

namespace fs = std::filesystem;

namespace {

fs::path analysis_dir(const fs::path& run_dir) {
  fs::path dir = run_dir / "analysis";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw LogError("cannot write " + file.string());
  out << text;
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LogError("cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<json> read_jsonl_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LogError("cannot read " + file.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

}  // namespace

std::unique_ptr<Judge> make_judge(const AnalyzeOptions& options) {
  if (options.judge_uri == "mock") return make_mock_judge();
  HttpJudgeConfig config;
  config.base_url = options.judge_uri;
  config.annotation_model = options.annotation_model;
  config.classification_model = options.classification_model;
  config.api_key_env = options.judge_key_env;
  return make_http_judge(config);
}

void stage_graph(const fs::path& run_dir, const AnalyzeOptions& options) {
  RunLog log = load_run(run_dir);
  std::vector<InteractionEvent> events = extract_events(log);
  SocialGraph graph = build_graph(events);
  Rng rng(derive_seed(options.seed, "slpa"));
  CommunityCover cover = slpa(graph, rng);
  GraphMetrics metrics = graph_metrics(graph, cover);

  fs::path dir = analysis_dir(run_dir);
  write_text(dir / "edges.txt", edges_to_text(graph));
  write_text(dir / "communities.txt", cover_to_text(cover));
  json out = {{"schema", kGraphSchema},
              {"run_id", log.header.value("run_id", "")},
              {"seed", log.header.value("seed", 0)},
              {"preset", log.header.value("preset", "")},
              {"nodes", graph.nodes.size()},
              {"edges", graph.edges.size()},
              {"events", events.size()},
              {"density", metrics.density},
              {"n_communities", metrics.n_communities},
              {"overlap_pct", metrics.overlap_pct},
              {"intra_share", metrics.intra_share}};
  write_text(dir / "graph_metrics.json", out.dump(2) + "\n");
}

namespace {

// Wire format: POST {"tokens": [...]} -> {"nll": [...]} with n-1 entries.
class HttpLogprobProvider : public LogprobProvider {
 public:
  HttpLogprobProvider(std::string base_url, int window)
      : base_url_(std::move(base_url)), window_(window) {}
  std::string name() const override { return base_url_; }
  int window() const override { return window_; }
  std::vector<std::string> tokenize(const std::string& text) const override {
    return metric_tokens(text);
  }
  std::vector<double> score(const std::vector<std::string>& tokens) const override {
    std::string base = base_url_;
    std::string path = "/";
    size_t scheme = base.find("://");
    size_t slash = scheme == std::string::npos ? base.find('/')
                                               : base.find('/', scheme + 3);
    if (slash != std::string::npos) {
      path = base.substr(slash);
      base = base.substr(0, slash);
    }
    httplib::Client client(base);
    json body = {{"tokens", tokens}};
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res || res->status != 200)
      throw ProviderError("logprob endpoint failed: " + base_url_);
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("nll") || !reply["nll"].is_array())
      throw ProviderError("malformed logprob reply");
    std::vector<double> out;
    for (const json& v : reply["nll"]) out.push_back(v.get<double>());
    return out;
  }

 private:
  std::string base_url_;
  int window_;
};

struct AgentSlices {
  std::map<std::string, std::vector<const AgentRecord*>> by_agent;
  std::map<std::string, std::string> names;
};

AgentSlices slice_records(const RunLog& log) {
  AgentSlices slices;
  for (const AgentRecord& r : log.records) {
    slices.by_agent[r.id].push_back(&r);
    slices.names[r.id] = r.name;
  }
  return slices;
}

const AgentRecord* record_at(const AgentSlices& slices, const std::string& agent,
                             int t) {
  auto it = slices.by_agent.find(agent);
  if (it == slices.by_agent.end()) return nullptr;
  for (const AgentRecord* r : it->second)
    if (r->t == t) return r;
  return nullptr;
}

}  // namespace

void stage_behavior(const fs::path& run_dir, const AnalyzeOptions& options) {
  RunLog log = load_run(run_dir);
  fs::path dir = analysis_dir(run_dir);
  fs::path communities_file = dir / "communities.txt";
  if (!fs::exists(communities_file))
    throw MissingDependency(
        "communities.txt not found; run `tl analyze --stage graph` on " +
        run_dir.string() + " first");

  std::unique_ptr<Judge> judge = make_judge(options);
  std::optional<JudgeArchive> archive;
  if (options.archive) archive.emplace(dir / "judge_archive.jsonl");
  JudgeArchive* archive_ptr = archive ? &*archive : nullptr;

  AgentSlices slices = slice_records(log);
  std::string run_id = log.header.value("run_id", "");

  // Agent and community annotations, audited.
  {
    std::ofstream out(dir / "annotations.jsonl");
    out << json{{"schema", kAnnotationsSchema},
                {"run_id", run_id},
                {"judge", judge->identity()},
                {"prompt_version", prompts::prompt_version()}}
               .dump()
        << "\n";
    for (const auto& [agent_id, records] : slices.by_agent) {
      Annotation annotation =
          annotate_agent(records, slices.names[agent_id], *judge, archive_ptr);
      annotation =
          audit_agent(annotation, records, slices.names[agent_id], *judge, archive_ptr);
      out << json{{"scope", "agent"},
                  {"agent", agent_id},
                  {"name", slices.names[agent_id]},
                  {"annotation", annotation.to_json()}}
                 .dump()
          << "\n";
    }
    CommunityCover cover = cover_from_text(read_text(communities_file));
    GroupAnnotateOptions group_options;
    group_options.segment_records = options.group_segment_records;
    group_options.segment_overlap = options.group_segment_overlap;
    int index = 0;
    for (const auto& community : cover.communities) {
      if (community.size() < 2) {
        out << json{{"scope", "community"},
                    {"index", index++},
                    {"members", community},
                    {"skipped", "singleton community has no group dynamics"}}
                   .dump()
            << "\n";
        continue;
      }
      std::vector<const AgentRecord*> members;
      for (const AgentRecord& r : log.records)
        if (community.count(r.id)) members.push_back(&r);
      Annotation annotation =
          annotate_group(members, community, *judge, archive_ptr, group_options);
      annotation = audit_group(annotation, members, community, *judge, archive_ptr);
      out << json{{"scope", "community"},
                  {"index", index++},
                  {"members", community},
                  {"annotation", annotation.to_json()}}
                 .dump()
          << "\n";
    }
  }

  // Novelty: per creation timestep, fresh batch vs all earlier artifacts.
  std::map<std::string, double> novelty_scores;
  {
    std::ofstream out(dir / "novelty.jsonl");
    out << json{{"schema", kNoveltySchema},
                {"run_id", run_id},
                {"judge", judge->identity()},
                {"samples", options.novelty_samples}}
               .dump()
        << "\n";
    std::vector<const ArtifactRow*> rows;
    for (const ArtifactRow& row : log.artifacts) rows.push_back(&row);
    std::sort(rows.begin(), rows.end(), [](const ArtifactRow* a, const ArtifactRow* b) {
      return std::tie(a->created_at, a->id) < std::tie(b->created_at, b->id);
    });
    Rng sampling_rng(derive_seed(options.seed, "judge-sampling"));
    std::vector<NoveltyPrior> priors;
    size_t i = 0;
    while (i < rows.size()) {
      size_t j = i;
      std::vector<NoveltyFresh> fresh;
      while (j < rows.size() && rows[j]->created_at == rows[i]->created_at) {
        fresh.push_back(
            {rows[j]->id, rows[j]->name + ": " + rows[j]->versions.front().payload});
        ++j;
      }
      std::map<std::string, double> means = score_novelty(
          priors, fresh, *judge, sampling_rng, options.novelty_samples, archive_ptr);
      for (size_t k = i; k < j; ++k) {
        double score = means.at(rows[k]->id);
        novelty_scores[rows[k]->id] = score;
        out << json{{"artifact", rows[k]->id},
                    {"name", rows[k]->name},
                    {"created_at", rows[k]->created_at},
                    {"mean_score", score},
                    {"n_samples", options.novelty_samples}}
                   .dump()
            << "\n";
        priors.push_back(
            {rows[k]->id, rows[k]->name + ": " + rows[k]->versions.front().payload,
             score});
      }
      i = j;
    }
  }

  // Ancestry: creation and modification events against strictly earlier
  // artifacts.
  {
    std::ofstream out(dir / "ancestry.jsonl");
    out << json{{"schema", kAncestrySchema},
                {"run_id", run_id},
                {"judge", judge->identity()}}
               .dump()
        << "\n";
    std::vector<std::tuple<int, std::string, std::string>> events;  // t, artifact, agent
    for (const ArtifactOpEvent& op : log.artifact_ops)
      if (op.op == "create" || op.op == "modify")
        events.emplace_back(op.t, op.artifact_id, op.agent);
    std::sort(events.begin(), events.end());
    for (const auto& [t, artifact_id, agent_id] : events) {
      const ArtifactRow* row = log.find_artifact(artifact_id);
      if (!row) continue;
      AncestryQuery query;
      query.artifact_id = artifact_id;
      query.artifact_name = row->name;
      for (const ArtifactVersion& v : row->versions)
        if (v.t <= t) query.artifact_content = v.payload;
      if (const AgentRecord* rec = record_at(slices, agent_id, t)) {
        query.agent_thoughts = rec->rationale;
        query.agent_observations = rec->obs_text;
        query.agent_memory = rec->memory_after;
      }
      for (const ArtifactRow& candidate : log.artifacts) {
        if (candidate.id == artifact_id) continue;
        if (candidate.created_at < t)
          query.candidates.emplace_back(candidate.id, candidate.name);
      }
      std::sort(query.candidates.begin(), query.candidates.end());
      std::map<std::string, double> ancestors =
          infer_ancestors(query, *judge, archive_ptr);
      for (const auto& [parent, confidence] : ancestors)
        out << json{{"child", artifact_id},
                    {"parent", parent},
                    {"confidence", confidence},
                    {"inferred_at", t},
                    {"judge_version", judge->identity()}}
                   .dump()
            << "\n";
    }
  }

  // Categories over each artifact's final payload.
  {
    std::ofstream out(dir / "categories.jsonl");
    out << json{{"schema", kCategoriesSchema},
                {"run_id", run_id},
                {"judge", judge->identity()}}
               .dump()
        << "\n";
    for (const ArtifactRow& row : log.artifacts) {
      int category =
          classify_artifact(row.name, row.final_payload(), *judge, archive_ptr);
      out << json{{"artifact", row.id}, {"name", row.name}, {"category", category}}
                 .dump()
          << "\n";
    }
  }
}

void stage_phylo(const fs::path& run_dir, const AnalyzeOptions& /*options*/) {
  RunLog log = load_run(run_dir);
  fs::path dir = analysis_dir(run_dir);
  fs::path ancestry_file = dir / "ancestry.jsonl";
  fs::path novelty_file = dir / "novelty.jsonl";
  if (!fs::exists(ancestry_file) || !fs::exists(novelty_file))
    throw MissingDependency(
        "ancestry.jsonl/novelty.jsonl not found; run `tl analyze --stage behavior` "
        "(with a judge) on " +
        run_dir.string() + " first");

  std::map<std::string, double> novelty;
  for (const json& j : read_jsonl_file(novelty_file))
    if (j.contains("artifact")) novelty[j["artifact"]] = j["mean_score"];
  std::map<std::string, int> categories;
  if (fs::exists(dir / "categories.jsonl"))
    for (const json& j : read_jsonl_file(dir / "categories.jsonl"))
      if (j.contains("artifact")) categories[j["artifact"]] = j["category"];

  AncestryDag dag;
  for (const ArtifactRow& row : log.artifacts) {
    DagNode node;
    node.id = row.id;
    node.created_at = row.created_at;
    node.novelty = novelty.count(row.id) ? novelty[row.id] : 0.0;
    node.category = categories.count(row.id) ? categories[row.id] : -1;
    node.creator = row.creator;
    dag.nodes.push_back(std::move(node));
  }
  int dropped_edges = 0;
  for (const json& j : read_jsonl_file(ancestry_file)) {
    if (!j.contains("child")) continue;
    DagEdge edge{j["child"], j["parent"], j["confidence"]};
    const DagNode* child = dag.find(edge.child);
    const DagNode* parent = dag.find(edge.parent);
    if (!child || !parent) {
      ++dropped_edges;
      continue;
    }
    // Ingestion validation: ancestry must respect creation order.
    if (parent->created_at > child->created_at) {
      ++dropped_edges;
      continue;
    }
    dag.edges.push_back(std::move(edge));
  }

  AncestryDag confident = filter_edges(dag, 0.7);
  DepthProfile profile = lineage_depth(confident);

  std::vector<double> scores;
  for (const DagNode& n : dag.nodes) scores.push_back(n.novelty);
  NoveltyBins bins = scores.empty() ? NoveltyBins{} : novelty_bins(scores);

  json density_curve = json::array();
  for (int i = 0; i <= 10; ++i) {
    double threshold = i / 10.0;
    density_curve.push_back(
        {{"threshold", threshold},
         {"density", dag_density(filter_edges(dag, threshold))},
         {"edges", filter_edges(dag, threshold).edges.size()}});
  }

  DegreeStats degrees = degree_stats(dag);
  json degree_rows = json::array();
  for (const DagNode& n : dag.nodes)
    degree_rows.push_back({{"artifact", n.id},
                           {"in_degree", degrees.in_degree[n.id]},
                           {"out_degree", degrees.out_degree[n.id]},
                           {"novelty", n.novelty},
                           {"category", n.category}});

  HubReport hub_report = hubs(dag, 30, 0.7);
  json depth_rows = json::array();
  for (const auto& [id, depth] : profile.depth)
    depth_rows.push_back({{"artifact", id}, {"depth", depth}});
  json survival = json::array();
  for (size_t x = 0; x < profile.survival.size(); ++x)
    survival.push_back({{"depth", x},
                        {"fraction", profile.survival[x]},
                        {"normalized_depth", profile.normalized_survival[x].first}});

  json out = {{"schema", kPhyloSchema},
              {"run_id", log.header.value("run_id", "")},
              {"seed", log.header.value("seed", 0)},
              {"preset", log.header.value("preset", "")},
              {"nodes", dag.nodes.size()},
              {"edges", dag.edges.size()},
              {"dropped_edges", dropped_edges},
              {"min_confidence", 0.7},
              {"max_depth", profile.max_depth},
              {"depths", depth_rows},
              {"survival", survival},
              {"novelty_bins",
               {{"zero", bins.zero},
                {"low", bins.low},
                {"medium", bins.medium},
                {"high", bins.high}}},
              {"density_vs_confidence", density_curve},
              {"degrees", degree_rows},
              {"hubs",
               {{"nodes", hub_report.hubs},
                {"mean_in_degree", hub_report.mean_in_degree
                                       ? json(*hub_report.mean_in_degree)
                                       : json()},
                {"mean_out_degree", hub_report.mean_out_degree
                                        ? json(*hub_report.mean_out_degree)
                                        : json()}}}};
  write_text(dir / "phylo.json", out.dump(2) + "\n");
}

void stage_text(const fs::path& run_dir, const AnalyzeOptions& options) {
  RunLog log = load_run(run_dir);
  fs::path dir = analysis_dir(run_dir);

  std::vector<std::string> corpus;
  for (const ArtifactRow& row : log.artifacts) corpus.push_back(row.final_payload());

  IdfTable idf = options.idf_file ? load_idf(*options.idf_file) : build_idf(corpus);
  std::unique_ptr<LogprobProvider> provider;
  if (options.logprob_uri.rfind("http", 0) == 0)
    provider = std::make_unique<HttpLogprobProvider>(options.logprob_uri, 512);
  else
    provider = make_provider(options.logprob_uri, corpus);

  std::map<std::string, DependencyParse> parses;
  if (options.parses_file) parses = load_parses(*options.parses_file);

  struct Row {
    std::string id, name;
    std::optional<double> compressed, lexical, surprisal, depth;
    std::optional<double> composite;
  };
  std::vector<Row> rows;
  for (const ArtifactRow& artifact : log.artifacts) {
    Row row;
    row.id = artifact.id;
    row.name = artifact.name;
    const std::string& payload = artifact.final_payload();
    row.compressed = static_cast<double>(compressed_size(payload));
    std::vector<std::string> tokens = metric_tokens(payload);
    if (!tokens.empty()) row.lexical = lexical_sophistication(tokens, idf);
    std::vector<std::string> provider_tokens = provider->tokenize(payload);
    if (provider_tokens.size() >= 2)
      row.surprisal = lm_surprisal(provider_tokens, *provider, provider->window());
    if (auto it = parses.find(artifact.id); it != parses.end())
      row.depth = syntactic_depth(it->second);
    rows.push_back(std::move(row));
  }

  // Composite over the metrics available for every artifact in the set.
  bool use_depth = !rows.empty();
  bool use_lexical = !rows.empty();
  bool use_surprisal = !rows.empty();
  for (const Row& row : rows) {
    use_depth = use_depth && row.depth.has_value();
    use_lexical = use_lexical && row.lexical.has_value();
    use_surprisal = use_surprisal && row.surprisal.has_value();
  }
  std::vector<std::array<double, 4>> matrix;
  for (const Row& row : rows)
    matrix.push_back({row.compressed.value_or(0.0),
                      use_lexical ? *row.lexical : 0.0,
                      use_surprisal ? *row.surprisal : 0.0,
                      use_depth ? *row.depth : 0.0});
  std::vector<double> composites = composite(matrix);
  double run_mean = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].composite = composites[i];
    run_mean += composites[i];
  }
  if (!rows.empty()) run_mean /= rows.size();

  std::ofstream out(dir / "complexity.jsonl");
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(); };
  out << json{{"schema", kComplexitySchema},
              {"run_id", log.header.value("run_id", "")},
              {"seed", log.header.value("seed", 0)},
              {"preset", log.header.value("preset", "")},
              {"idf_docs", idf.doc_count},
              {"logprob_provider", provider->name()},
              {"metrics_in_composite",
               json::array({"compressed_size",
                            use_lexical ? json("lexical_sophistication") : json(),
                            use_surprisal ? json("lm_surprisal") : json(),
                            use_depth ? json("syntactic_depth") : json()})},
              {"run_mean_composite", run_mean}}
             .dump()
      << "\n";
  for (const Row& row : rows)
    out << json{{"artifact", row.id},
                {"name", row.name},
                {"compressed_size", opt(row.compressed)},
                {"lexical_sophistication", opt(row.lexical)},
                {"lm_surprisal", opt(row.surprisal)},
                {"syntactic_depth", opt(row.depth)},
                {"composite", opt(row.composite)}}
               .dump()
        << "\n";
}

void run_stage(const std::string& stage, const fs::path& run_dir,
               const AnalyzeOptions& options) {
  if (stage == "graph") return stage_graph(run_dir, options);
  if (stage == "behavior") return stage_behavior(run_dir, options);
  if (stage == "phylo") return stage_phylo(run_dir, options);
  if (stage == "text") return stage_text(run_dir, options);
  throw ConfigError("unknown analysis stage: " + stage);
}

}  // namespace terra
