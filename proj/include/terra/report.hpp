// Cross-run aggregation into plot-ready tables (csv or jsonl).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace terra {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  std::string to_csv() const;
  std::string to_jsonl() const;
};

struct ReportBundle {
  std::vector<Table> tables;
};

// Aggregates analyzed run directories; throws on mixed schema versions or
// missing inputs. Every table carries run ids, seeds, preset and schema.
ReportBundle build_report(const std::vector<std::filesystem::path>& run_dirs);

void write_report(const ReportBundle& bundle, const std::filesystem::path& out_dir,
                  const std::string& format);

}  // namespace terra
