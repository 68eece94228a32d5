#include "terra/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "terra/analysis.hpp"
#include "terra/engine.hpp"

namespace terra {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string csv_escape(const json& v) {
  std::string s;
  if (v.is_string())
    s = v.get<std::string>();
  else if (v.is_null())
    s = "";
  else
    s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

json read_json_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw LogError("cannot read " + file.string());
  json j;
  in >> j;
  return j;
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

void check_schema(const json& j, const std::string& expected, const fs::path& file) {
  if (j.value("schema", "") != expected)
    throw LogError("schema mismatch in " + file.string() + ": expected " + expected +
                   ", found " + j.value("schema", "<missing>"));
}

struct RunData {
  std::string run_id;
  uint64_t seed = 0;
  std::string preset;
  json summary;
  json graph;
  json phylo;
  json complexity_header;
  std::vector<json> complexity_rows;
  std::vector<json> annotations;
  std::map<std::string, int> action_counts;  // applied, by canonical kind
  int agents_ever = 0;
};

RunData load_run_data(const fs::path& dir) {
  RunData data;
  data.summary = read_json_file(dir / "summary.json");
  check_schema(data.summary, kSummarySchema, dir / "summary.json");
  data.run_id = data.summary.value("run_id", "");
  data.seed = data.summary.value("seed", 0ULL);
  data.preset = data.summary.value("preset", "");
  data.agents_ever = data.summary.value("agents_ever", 0);

  fs::path analysis = dir / "analysis";
  if (!fs::exists(analysis / "graph_metrics.json") ||
      !fs::exists(analysis / "phylo.json") ||
      !fs::exists(analysis / "complexity.jsonl") ||
      !fs::exists(analysis / "annotations.jsonl"))
    throw MissingDependency("run " + dir.string() +
                            " is not fully analyzed; run all four analyze stages");

  data.graph = read_json_file(analysis / "graph_metrics.json");
  check_schema(data.graph, kGraphSchema, analysis / "graph_metrics.json");
  data.phylo = read_json_file(analysis / "phylo.json");
  check_schema(data.phylo, kPhyloSchema, analysis / "phylo.json");

  std::vector<json> complexity = read_jsonl_file(analysis / "complexity.jsonl");
  if (complexity.empty())
    throw LogError("empty complexity table in " + analysis.string());
  check_schema(complexity.front(), kComplexitySchema, analysis / "complexity.jsonl");
  data.complexity_header = complexity.front();
  data.complexity_rows.assign(complexity.begin() + 1, complexity.end());

  std::vector<json> annotations = read_jsonl_file(analysis / "annotations.jsonl");
  if (annotations.empty())
    throw LogError("empty annotations in " + analysis.string());
  check_schema(annotations.front(), kAnnotationsSchema, analysis / "annotations.jsonl");
  data.annotations.assign(annotations.begin() + 1, annotations.end());

  RunLog log = load_run(dir);
  for (const AgentRecord& r : log.records)
    if (r.status == "applied" && r.action_kind != "move")
      data.action_counts[r.action_kind] += 1;
  return data;
}

struct Stats {
  double mean = 0, q1 = 0, q3 = 0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  s.q1 = quantile(xs, 0.25);
  s.q3 = quantile(xs, 0.75);
  return s;
}

struct ConditionGroup {
  std::string preset;
  std::vector<const RunData*> runs;
  std::string run_ids;
  std::string seeds;
};

std::vector<ConditionGroup> group_by_condition(const std::vector<RunData>& runs) {
  std::map<std::string, ConditionGroup> groups;
  for (const RunData& run : runs) {
    ConditionGroup& g = groups[run.preset];
    g.preset = run.preset;
    g.runs.push_back(&run);
    if (!g.run_ids.empty()) g.run_ids += ";";
    g.run_ids += run.run_id;
    if (!g.seeds.empty()) g.seeds += ";";
    g.seeds += std::to_string(run.seed);
  }
  std::vector<ConditionGroup> out;
  for (auto& [preset, group] : groups) out.push_back(std::move(group));
  return out;
}

constexpr const char* kReportSchema = "tl-report/1";

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string Table::to_jsonl() const {
  std::ostringstream out;
  for (const auto& row : rows) {
    json obj;
    for (size_t i = 0; i < columns.size() && i < row.size(); ++i)
      obj[columns[i]] = row[i];
    out << obj.dump() << '\n';
  }
  return out.str();
}

ReportBundle build_report(const std::vector<fs::path>& run_dirs) {
  if (run_dirs.empty()) throw ConfigError("report requires at least one analyzed run");
  std::vector<RunData> runs;
  for (const fs::path& dir : run_dirs) runs.push_back(load_run_data(dir));
  std::vector<ConditionGroup> conditions = group_by_condition(runs);

  ReportBundle bundle;

  // Condition summary with the Pareto frontier over
  // (longevity, artifacts per agent) condition means.
  {
    Table t;
    t.name = "condition_summary";
    t.columns = {"schema", "preset", "run_ids", "seeds", "n_runs",
                 "longevity_mean", "longevity_q1", "longevity_q3",
                 "total_artifacts_mean", "total_artifacts_q1", "total_artifacts_q3",
                 "artifacts_per_agent_mean", "artifacts_per_agent_q1",
                 "artifacts_per_agent_q3", "mean_population_mean",
                 "mean_population_q1", "mean_population_q3", "pareto"};
    struct MeanPoint {
      double longevity, per_agent;
    };
    std::vector<MeanPoint> points;
    for (const ConditionGroup& g : conditions) {
      std::vector<double> longevity, per_agent;
      for (const RunData* r : g.runs) {
        longevity.push_back(r->summary.value("longevity", 0));
        per_agent.push_back(r->summary.value("artifacts_per_agent", 0.0));
      }
      points.push_back({stats_of(longevity).mean, stats_of(per_agent).mean});
    }
    for (size_t i = 0; i < conditions.size(); ++i) {
      const ConditionGroup& g = conditions[i];
      std::vector<double> longevity, total, per_agent, population;
      for (const RunData* r : g.runs) {
        longevity.push_back(r->summary.value("longevity", 0));
        total.push_back(r->summary.value("total_artifacts", 0));
        per_agent.push_back(r->summary.value("artifacts_per_agent", 0.0));
        population.push_back(r->summary.value("mean_population", 0.0));
      }
      Stats sl = stats_of(longevity), st = stats_of(total), sp = stats_of(per_agent),
            sm = stats_of(population);
      bool dominated = false;
      for (size_t j = 0; j < points.size(); ++j) {
        if (i == j) continue;
        if (points[j].longevity >= points[i].longevity &&
            points[j].per_agent >= points[i].per_agent &&
            (points[j].longevity > points[i].longevity ||
             points[j].per_agent > points[i].per_agent)) {
          dominated = true;
          break;
        }
      }
      t.rows.push_back({kReportSchema, g.preset, g.run_ids, g.seeds,
                        g.runs.size(), sl.mean, sl.q1, sl.q3, st.mean, st.q1, st.q3,
                        sp.mean, sp.q1, sp.q3, sm.mean, sm.q1, sm.q3, !dominated});
    }
    bundle.tables.push_back(std::move(t));
  }

  // Behavior tag counts normalized per agent (agent scope) or per community
  // member (community scope), averaged across runs.
  {
    Table t;
    t.name = "behavior_tag_counts";
    t.columns = {"schema", "preset", "run_ids", "seeds", "scope",
                 "class", "tag", "mean_normalized_count"};
    for (const ConditionGroup& g : conditions) {
      // per run: tag -> normalized count
      std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>>
          per_run;
      for (const RunData* r : g.runs) {
        std::map<std::tuple<std::string, std::string, std::string>, double> counts;
        int communities = 0;
        for (const json& row : r->annotations) {
          std::string scope = row.value("scope", "");
          if (!row.contains("annotation")) continue;
          const json& ann = row["annotation"];
          double norm = 1.0;
          if (scope == "agent") {
            norm = r->agents_ever > 0 ? r->agents_ever : 1;
          } else {
            ++communities;
            norm = row.contains("members") ? row["members"].size() : 1;
          }
          for (const json& e : ann.value("events", json::array()))
            counts[{scope, "event", e.value("event", "")}] += 1.0 / norm;
          for (const json& b : ann.value("behaviors", json::array()))
            counts[{scope, "behavior", b.value("behavior", "")}] += 1.0 / norm;
          if (ann.contains("emergence"))
            for (const json& k : ann["emergence"].value("keywords", json::array()))
              counts[{scope, "emergence", k.get<std::string>()}] += 1.0 / norm;
        }
        for (auto& [key, value] : counts) per_run[key].push_back(value);
      }
      for (const auto& [key, values] : per_run) {
        const auto& [scope, cls, tag] = key;
        if (tag.empty()) continue;
        double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      g.runs.size();  // runs without the tag count as zero
        t.rows.push_back(
            {kReportSchema, g.preset, g.run_ids, g.seeds, scope, cls, tag, mean});
      }
    }
    bundle.tables.push_back(std::move(t));
  }

  // Social graph structure.
  {
    Table t;
    t.name = "graph_summary";
    t.columns = {"schema", "preset", "run_ids", "seeds",
                 "density_mean", "density_q1", "density_q3",
                 "n_communities_mean", "n_communities_q1", "n_communities_q3",
                 "overlap_pct_mean", "overlap_pct_q1", "overlap_pct_q3",
                 "intra_share_mean", "intra_share_q1", "intra_share_q3"};
    for (const ConditionGroup& g : conditions) {
      std::vector<double> density, communities, overlap, intra;
      for (const RunData* r : g.runs) {
        density.push_back(r->graph.value("density", 0.0));
        communities.push_back(r->graph.value("n_communities", 0));
        overlap.push_back(r->graph.value("overlap_pct", 0.0));
        intra.push_back(r->graph.value("intra_share", 0.0));
      }
      Stats sd = stats_of(density), sc = stats_of(communities), so = stats_of(overlap),
            si = stats_of(intra);
      t.rows.push_back({kReportSchema, g.preset, g.run_ids, g.seeds, sd.mean, sd.q1,
                        sd.q3, sc.mean, sc.q1, sc.q3, so.mean, so.q1, so.q3, si.mean,
                        si.q1, si.q3});
    }
    bundle.tables.push_back(std::move(t));
  }

  // Novelty bins.
  {
    Table t;
    t.name = "novelty_bins";
    t.columns = {"schema", "preset", "run_ids", "seeds",
                 "zero_mean", "low_mean", "medium_mean", "high_mean"};
    for (const ConditionGroup& g : conditions) {
      std::vector<double> zero, low, medium, high;
      for (const RunData* r : g.runs) {
        const json& bins = r->phylo["novelty_bins"];
        zero.push_back(bins.value("zero", 0.0));
        low.push_back(bins.value("low", 0.0));
        medium.push_back(bins.value("medium", 0.0));
        high.push_back(bins.value("high", 0.0));
      }
      t.rows.push_back({kReportSchema, g.preset, g.run_ids, g.seeds,
                        stats_of(zero).mean, stats_of(low).mean,
                        stats_of(medium).mean, stats_of(high).mean});
    }
    bundle.tables.push_back(std::move(t));
  }

  // Lineage depth survival, per run (absolute and normalized depth).
  {
    Table t;
    t.name = "depth_survival";
    t.columns = {"schema", "preset", "run_id", "seed",
                 "depth", "normalized_depth", "fraction"};
    for (const RunData& r : runs) {
      for (const json& row : r.phylo.value("survival", json::array()))
        t.rows.push_back({kReportSchema, r.preset, r.run_id, r.seed,
                          row.value("depth", 0), row.value("normalized_depth", 0.0),
                          row.value("fraction", 0.0)});
    }
    bundle.tables.push_back(std::move(t));
  }

  // Complexity: run-mean composite distribution per condition.
  {
    Table t;
    t.name = "complexity_summary";
    t.columns = {"schema", "preset", "run_ids", "seeds",
                 "composite_mean", "composite_q1", "composite_q3"};
    for (const ConditionGroup& g : conditions) {
      std::vector<double> composites;
      for (const RunData* r : g.runs)
        composites.push_back(r->complexity_header.value("run_mean_composite", 0.0));
      Stats s = stats_of(composites);
      t.rows.push_back(
          {kReportSchema, g.preset, g.run_ids, g.seeds, s.mean, s.q1, s.q3});
    }
    bundle.tables.push_back(std::move(t));
  }

  // Action counts per agent, move excluded.
  {
    Table t;
    t.name = "action_counts";
    t.columns = {"schema", "preset", "run_ids", "seeds", "action",
                 "mean_count_per_agent"};
    for (const ConditionGroup& g : conditions) {
      std::set<std::string> kinds;
      for (const RunData* r : g.runs)
        for (const auto& [kind, count] : r->action_counts) kinds.insert(kind);
      for (const std::string& kind : kinds) {
        double sum = 0.0;
        for (const RunData* r : g.runs) {
          auto it = r->action_counts.find(kind);
          double count = it == r->action_counts.end() ? 0.0 : it->second;
          sum += r->agents_ever > 0 ? count / r->agents_ever : 0.0;
        }
        t.rows.push_back({kReportSchema, g.preset, g.run_ids, g.seeds, kind,
                          sum / g.runs.size()});
      }
    }
    bundle.tables.push_back(std::move(t));
  }

  // Phylogeny density as a function of the confidence threshold.
  {
    Table t;
    t.name = "phylo_density";
    t.columns = {"schema", "preset", "run_ids", "seeds", "threshold", "density_mean"};
    for (const ConditionGroup& g : conditions) {
      std::map<double, std::vector<double>> by_threshold;
      for (const RunData* r : g.runs)
        for (const json& row : r->phylo.value("density_vs_confidence", json::array()))
          by_threshold[row.value("threshold", 0.0)].push_back(
              row.value("density", 0.0));
      for (const auto& [threshold, densities] : by_threshold)
        t.rows.push_back({kReportSchema, g.preset, g.run_ids, g.seeds, threshold,
                          stats_of(densities).mean});
    }
    bundle.tables.push_back(std::move(t));
  }

  // Per-artifact degree scatter rows.
  {
    Table t;
    t.name = "degree_stats";
    t.columns = {"schema", "preset", "run_id", "seed", "artifact",
                 "in_degree", "out_degree", "novelty", "category"};
    for (const RunData& r : runs)
      for (const json& row : r.phylo.value("degrees", json::array()))
        t.rows.push_back({kReportSchema, r.preset, r.run_id, r.seed,
                          row.value("artifact", ""), row.value("in_degree", 0),
                          row.value("out_degree", 0), row.value("novelty", 0.0),
                          row.value("category", -1)});
    bundle.tables.push_back(std::move(t));
  }

  // Hub statistics.
  {
    Table t;
    t.name = "hubs";
    t.columns = {"schema", "preset", "run_id", "seed", "hub_count",
                 "mean_in_degree", "mean_out_degree"};
    for (const RunData& r : runs) {
      const json& h = r.phylo["hubs"];
      t.rows.push_back({kReportSchema, r.preset, r.run_id, r.seed,
                        h.value("nodes", json::array()).size(),
                        h.contains("mean_in_degree") ? h["mean_in_degree"] : json(),
                        h.contains("mean_out_degree") ? h["mean_out_degree"] : json()});
    }
    bundle.tables.push_back(std::move(t));
  }

  return bundle;
}

void write_report(const ReportBundle& bundle, const fs::path& out_dir,
                  const std::string& format) {
  fs::create_directories(out_dir);
  for (const Table& table : bundle.tables) {
    fs::path file = out_dir / (table.name + "." + format);
    std::ofstream out(file);
    if (!out) throw LogError("cannot write " + file.string());
    out << (format == "csv" ? table.to_csv() : table.to_jsonl());
  }
}

}  // namespace terra
