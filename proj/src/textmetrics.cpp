#include "terra/textmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <zstd.h>

namespace terra {

size_t zstd_frame_size(const std::string& text) {
  size_t bound = ZSTD_compressBound(text.size());
  std::vector<char> buffer(bound);
  size_t written =
      ZSTD_compress(buffer.data(), bound, text.data(), text.size(), 5);
  if (ZSTD_isError(written))
    throw std::runtime_error(std::string("zstd: ") + ZSTD_getErrorName(written));
  return written;
}

int compressed_size(const std::string& text) {
  long long size = static_cast<long long>(zstd_frame_size(text)) - 24;
  return static_cast<int>(std::max(1LL, size));
}

std::vector<std::string> metric_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    bool word_char = std::isalnum(c) || c >= 0x80;
    if (word_char) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double IdfTable::lookup(const std::string& token) const {
  auto it = idf.find(token);
  return it == idf.end() ? max_idf : it->second;
}

IdfTable build_idf(const std::vector<std::string>& documents) {
  IdfTable table;
  table.doc_count = static_cast<int>(documents.size());
  std::map<std::string, int> df;
  for (const std::string& doc : documents) {
    std::vector<std::string> tokens = metric_tokens(doc);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const std::string& t : tokens) df[t] += 1;
  }
  for (const auto& [term, count] : df) {
    double value = std::log((1.0 + table.doc_count) / (1.0 + count)) + 1.0;
    table.idf[term] = value;
    table.max_idf = std::max(table.max_idf, value);
  }
  return table;
}

void save_idf(const IdfTable& table, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << table.doc_count << '\t' << table.max_idf << '\n';
  for (const auto& [term, value] : table.idf) out << term << '\t' << value << '\n';
}

IdfTable load_idf(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  IdfTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty idf table " + file.string());
  {
    std::istringstream header(line);
    header >> table.doc_count >> table.max_idf;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("malformed idf line: " + line);
    table.idf[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
  }
  return table;
}

double lexical_sophistication(const std::vector<std::string>& tokens,
                              const IdfTable& table) {
  if (tokens.empty()) throw EmptyText("lexical sophistication of empty token list");
  double sum = 0.0;
  for (const std::string& t : tokens) sum += table.lookup(t);
  return sum / tokens.size();
}

double lm_surprisal(const std::vector<std::string>& tokens,
                    const LogprobProvider& provider, int window) {
  if (tokens.size() < 2)
    throw ProviderError("surprisal requires at least two tokens");
  if (window < 2) throw ProviderError("window must be >= 2");
  size_t n = tokens.size();
  std::vector<std::optional<double>> scored(n);
  size_t stride = std::max<size_t>(1, window / 2);
  size_t start = 0;
  while (true) {
    size_t end = std::min(start + window, n);
    std::vector<std::string> slice(tokens.begin() + start, tokens.begin() + end);
    std::vector<double> nlls = provider.score(slice);
    if (nlls.size() != slice.size() - 1)
      throw ProviderError("provider returned " + std::to_string(nlls.size()) +
                          " scores for a window of " + std::to_string(slice.size()));
    for (size_t i = 0; i < nlls.size(); ++i) {
      size_t pos = start + 1 + i;
      if (nlls[i] < 0.0) throw ProviderError("provider returned negative NLL");
      if (!scored[pos]) scored[pos] = nlls[i];
    }
    if (end == n) break;
    start += stride;
  }
  double sum = 0.0;
  for (size_t pos = 1; pos < n; ++pos) {
    if (!scored[pos]) throw ProviderError("window sweep left a position unscored");
    sum += *scored[pos];
  }
  return sum / static_cast<double>(n - 1);
}

namespace {

class UniformProvider : public LogprobProvider {
 public:
  explicit UniformProvider(int vocab) : vocab_(vocab) {}
  std::string name() const override { return "uniform:" + std::to_string(vocab_); }
  int window() const override { return 1 << 20; }
  std::vector<std::string> tokenize(const std::string& text) const override {
    return metric_tokens(text);
  }
  std::vector<double> score(const std::vector<std::string>& tokens) const override {
    return std::vector<double>(tokens.size() - 1, std::log(vocab_));
  }

 private:
  int vocab_;
};

// Byte-level trigram model with additive smoothing; tokens are single bytes.
class TrigramProvider : public LogprobProvider {
 public:
  explicit TrigramProvider(const std::vector<std::string>& corpus) {
    for (const std::string& doc : corpus) {
      std::string padded = std::string(2, kBos) + doc;
      for (size_t i = 2; i < padded.size(); ++i) {
        trigram_[padded.substr(i - 2, 3)] += 1;
        context_[padded.substr(i - 2, 2)] += 1;
        vocab_.insert(padded[i]);
      }
    }
  }
  std::string name() const override { return "trigram:"; }
  int window() const override { return 512; }
  std::vector<std::string> tokenize(const std::string& text) const override {
    std::vector<std::string> out;
    out.reserve(text.size());
    for (char c : text) out.emplace_back(1, c);
    return out;
  }
  std::vector<double> score(const std::vector<std::string>& tokens) const override {
    std::string chars = std::string(2, kBos);
    for (const std::string& t : tokens) chars += t.empty() ? std::string(1, '\0') : t;
    std::vector<double> out;
    // First window token is context only; score positions 1..n-1.
    for (size_t i = 3; i < chars.size(); ++i) {
      std::string ctx = chars.substr(i - 2, 2);
      std::string tri = chars.substr(i - 2, 3);
      double v = static_cast<double>(vocab_.size()) + 1.0;
      double num = kAlpha, den = kAlpha * v;
      if (auto it = trigram_.find(tri); it != trigram_.end()) num += it->second;
      if (auto it = context_.find(ctx); it != context_.end()) den += it->second;
      out.push_back(-std::log(num / den));
    }
    return out;
  }

 private:
  static constexpr char kBos = '\x02';
  static constexpr double kAlpha = 0.5;
  std::map<std::string, int> trigram_;
  std::map<std::string, int> context_;
  std::set<char> vocab_;
};

}  // namespace

std::unique_ptr<LogprobProvider> make_provider(
    const std::string& uri, const std::vector<std::string>& corpus) {
  if (uri.rfind("trigram:", 0) == 0)
    return std::make_unique<TrigramProvider>(corpus);
  if (uri.rfind("uniform:", 0) == 0)
    return std::make_unique<UniformProvider>(std::stoi(uri.substr(8)));
  if (uri.rfind("http://", 0) == 0 || uri.rfind("https://", 0) == 0)
    throw ProviderError("http logprob providers are constructed in the analysis layer");
  throw ProviderError("unknown logprob provider uri: " + uri);
}

double syntactic_depth(const DependencyParse& parse) {
  size_t n = parse.tokens.size();
  if (parse.head.size() != n || parse.punct.size() != n)
    throw BadParse("token/head/punct arrays disagree in length");
  if (n == 0) throw BadParse("empty parse");
  int roots = 0;
  for (size_t i = 0; i < n; ++i) {
    if (parse.head[i] < 0 || parse.head[i] >= static_cast<int>(n))
      throw BadParse("head index out of range");
    if (parse.head[i] == static_cast<int>(i)) ++roots;
  }
  if (roots != 1) throw BadParse("parse must have exactly one root");

  double sum = 0.0;
  int counted = 0;
  for (size_t i = 0; i < n; ++i) {
    if (parse.punct[i]) continue;
    int depth = 1;
    size_t cursor = i;
    size_t hops = 0;
    while (parse.head[cursor] != static_cast<int>(cursor)) {
      cursor = static_cast<size_t>(parse.head[cursor]);
      ++depth;
      if (++hops > n) throw BadParse("head array contains a cycle");
    }
    sum += depth;
    ++counted;
  }
  if (counted == 0) throw BadParse("no non-punctuation tokens");
  return sum / counted;
}

std::map<std::string, DependencyParse> load_parses(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::map<std::string, DependencyParse> out;
  std::string line, current;
  DependencyParse parse;
  auto flush = [&]() {
    if (!current.empty()) out[current] = std::move(parse);
    parse = DependencyParse{};
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      flush();
      size_t start = line.find_first_not_of("# \t");
      current = start == std::string::npos ? "" : line.substr(start);
      continue;
    }
    std::istringstream fields(line);
    int index, head, punct;
    std::string token;
    if (!(fields >> index >> token >> head >> punct))
      throw BadParse("malformed parse line: " + line);
    parse.tokens.push_back(token);
    parse.head.push_back(head);
    parse.punct.push_back(punct != 0);
  }
  flush();
  return out;
}

std::vector<double> composite(const std::vector<std::array<double, 4>>& metrics) {
  std::vector<double> out(metrics.size(), 0.0);
  if (metrics.empty()) return out;
  for (int m = 0; m < 4; ++m) {
    double lo = metrics[0][m], hi = metrics[0][m];
    for (const auto& row : metrics) {
      lo = std::min(lo, row[m]);
      hi = std::max(hi, row[m]);
    }
    if (hi <= lo) continue;  // zero spread contributes nothing
    for (size_t i = 0; i < metrics.size(); ++i)
      out[i] += (metrics[i][m] - lo) / (hi - lo);
  }
  return out;
}

}  // namespace terra
