// Artifact text-complexity metrics: compressed size, lexical sophistication,
// LM surprisal, syntactic depth, and their min-max composite.
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace terra {

class EmptyText : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadParse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zstandard level 5, no dictionary; frame overhead of 24 bytes subtracted,
// floored at 1.
int compressed_size(const std::string& text);

// Raw compressed frame length (before overhead subtraction).
size_t zstd_frame_size(const std::string& text);

// Built-in metric tokenizer: maximal runs of alphanumeric code points,
// ASCII-lowercased; non-ASCII bytes count as word characters.
std::vector<std::string> metric_tokens(const std::string& text);

struct IdfTable {
  std::map<std::string, double> idf;
  double max_idf = 0.0;
  int doc_count = 0;

  double lookup(const std::string& token) const;  // unknown -> max_idf
};

// Smoothed vectorizer convention: idf(w) = ln((1+N)/(1+df)) + 1.
IdfTable build_idf(const std::vector<std::string>& documents);
void save_idf(const IdfTable& table, const std::filesystem::path& file);
IdfTable load_idf(const std::filesystem::path& file);

double lexical_sophistication(const std::vector<std::string>& tokens,
                              const IdfTable& table);

class LogprobProvider {
 public:
  virtual ~LogprobProvider() = default;
  virtual std::string name() const = 0;
  virtual int window() const = 0;
  virtual std::vector<std::string> tokenize(const std::string& text) const = 0;
  // NLLs for predicting tokens[1..] from their prefix; size() == n-1.
  virtual std::vector<double> score(const std::vector<std::string>& tokens) const = 0;
};

// Sliding width-W windows with stride W/2; each position is scored by the
// first window that reaches it; result is the mean NLL over positions 1..n-1.
double lm_surprisal(const std::vector<std::string>& tokens,
                    const LogprobProvider& provider, int window);

// URIs: "trigram:" (character model trained on `corpus`),
// "uniform:<vocab>" (constant ln(vocab)), or an http(s) endpoint.
std::unique_ptr<LogprobProvider> make_provider(
    const std::string& uri, const std::vector<std::string>& corpus);

struct DependencyParse {
  std::vector<std::string> tokens;
  std::vector<int> head;  // root points to itself
  std::vector<bool> punct;
};

// Mean node count along token->root paths (root alone = 1) over
// non-punctuation tokens.
double syntactic_depth(const DependencyParse& parse);

// Sidecar format: "# <artifact_id>" section headers followed by
// "index<TAB>token<TAB>head<TAB>punct" lines.
std::map<std::string, DependencyParse> load_parses(const std::filesystem::path& file);

// Min-max normalizes each of the four metrics over the set and sums them;
// a metric with zero spread contributes 0 to every artifact.
std::vector<double> composite(const std::vector<std::array<double, 4>>& metrics);

}  // namespace terra
