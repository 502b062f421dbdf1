#include "superlin/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "superlin/contrast.hpp"
#include "superlin/errors.hpp"
#include "json_writer.hpp"

namespace superlin {
namespace {

using nlohmann::json;

const json& require_member(const json& obj, const char* name,
                           const std::string& where) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw ValidationError(where + ": missing '" + name + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* name,
                          const std::string& where) {
  const json& v = require_member(obj, name, where);
  if (!v.is_string()) {
    throw ValidationError(where + ": '" + name + "' must be a string");
  }
  return v.get<std::string>();
}

std::array<double, 3> require_triple(const json& obj, const char* name,
                                     const std::string& where) {
  const json& v = require_member(obj, name, where);
  if (!v.is_array() || v.size() != 3) {
    throw ValidationError(where + ": '" + name +
                          "' must be an array of 3 numbers");
  }
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) {
      throw ValidationError(where + ": '" + name +
                            "' must be an array of 3 numbers");
    }
    out[i] = v[i].get<double>();
  }
  return out;
}

int require_cell(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    throw ValidationError(where +
                          ": 'n' must be an integer or an array of 3 integers");
  }
  const long long n = v.get<long long>();
  if (n < 0 || n > std::numeric_limits<int>::max()) {
    throw ValidationError(where + ": 'n' out of range");
  }
  return static_cast<int>(n);
}

std::array<int, 3> require_cells(const json& obj, const std::string& where) {
  const json& v = require_member(obj, "n", where);
  std::array<int, 3> out{};
  if (v.is_array()) {
    if (v.size() != 3) {
      throw ValidationError(
          where + ": 'n' must be an integer or an array of 3 integers");
    }
    for (std::size_t i = 0; i < 3; ++i) out[i] = require_cell(v[i], where);
  } else {
    out.fill(require_cell(v, where));
  }
  return out;
}

// Splits on '\n', dropping one trailing '\r' per line so CRLF input parses.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

int parse_int_field(std::string_view text, const char* field,
                    std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": field '" + field +
                     "': cannot parse integer from '" + std::string(text) +
                     "'");
  }
  return value;
}

double parse_double_field(std::string_view text, const char* field,
                          std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": field '" + field +
                     "': cannot parse number from '" + std::string(text) +
                     "'");
  }
  return value;
}

constexpr std::string_view kCsvHeader =
    "article_id,experiment_id,n1,n2,n3,m1,m2,m3,s1,s2,s3";

void check_csv_safe_id(const std::string& id) {
  if (id.find_first_of(",\r\n") != std::string::npos) {
    throw ValidationError("emit_csv: id '" + id +
                          "' contains a comma or newline and cannot "
                          "round-trip through CSV");
  }
}

}  // namespace

std::vector<ArticleDataset> parse_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object()) {
    throw ValidationError("input: top level must be an object");
  }
  const json& articles = require_member(root, "articles", "input");
  if (!articles.is_array()) {
    throw ValidationError("input: 'articles' must be an array");
  }
  std::vector<ArticleDataset> out;
  out.reserve(articles.size());
  for (std::size_t ai = 0; ai < articles.size(); ++ai) {
    const json& a = articles[ai];
    const std::string a_where = "articles[" + std::to_string(ai) + "]";
    if (!a.is_object()) {
      throw ValidationError(a_where + ": must be an object");
    }
    ArticleDataset article;
    article.id = require_string(a, "id", a_where);
    const json& experiments =
        require_member(a, "experiments", "article '" + article.id + "'");
    if (!experiments.is_array()) {
      throw ValidationError("article '" + article.id +
                            "': 'experiments' must be an array");
    }
    article.experiments.reserve(experiments.size());
    for (std::size_t ei = 0; ei < experiments.size(); ++ei) {
      const json& e = experiments[ei];
      const std::string e_where = "article '" + article.id + "' experiments[" +
                                  std::to_string(ei) + "]";
      if (!e.is_object()) {
        throw ValidationError(e_where + ": must be an object");
      }
      ExperimentSummary summary;
      summary.id = require_string(e, "id", e_where);
      summary.cell_sizes = require_cells(e, e_where);
      summary.means = require_triple(e, "means", e_where);
      summary.sds = require_triple(e, "sds", e_where);
      article.experiments.push_back(std::move(summary));
    }
    out.push_back(std::move(article));
  }
  validate_datasets(out);
  return out;
}

std::vector<ArticleDataset> parse_csv(const std::string& text) {
  const std::vector<std::string_view> lines = split_lines(text);
  if (lines.empty() || lines[0] != kCsvHeader) {
    throw ParseError("line 1: expected header '" + std::string(kCsvHeader) +
                     "'");
  }
  std::vector<ArticleDataset> out;
  std::unordered_map<std::string, std::size_t> article_index;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::size_t line_no = i + 1;
    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.size() != 11) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 11 fields, got " +
                       std::to_string(fields.size()));
    }
    ExperimentSummary summary;
    summary.id = std::string(fields[1]);
    static constexpr const char* kIntNames[3] = {"n1", "n2", "n3"};
    static constexpr const char* kMeanNames[3] = {"m1", "m2", "m3"};
    static constexpr const char* kSdNames[3] = {"s1", "s2", "s3"};
    for (int k = 0; k < 3; ++k) {
      summary.cell_sizes[static_cast<std::size_t>(k)] = parse_int_field(
          fields[static_cast<std::size_t>(2 + k)], kIntNames[k], line_no);
      summary.means[static_cast<std::size_t>(k)] = parse_double_field(
          fields[static_cast<std::size_t>(5 + k)], kMeanNames[k], line_no);
      summary.sds[static_cast<std::size_t>(k)] = parse_double_field(
          fields[static_cast<std::size_t>(8 + k)], kSdNames[k], line_no);
    }
    try {
      validate(summary);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " +
                            e.what());
    }
    const std::string article_id(fields[0]);
    const auto it = article_index.find(article_id);
    std::size_t idx;
    if (it == article_index.end()) {
      idx = out.size();
      article_index.emplace(article_id, idx);
      ArticleDataset article;
      article.id = article_id;
      out.push_back(std::move(article));
    } else {
      idx = it->second;
    }
    out[idx].experiments.push_back(std::move(summary));
  }
  validate_datasets(out);
  return out;
}

std::vector<ArticleDataset> ingest(const std::filesystem::path& path,
                                   Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot read input file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw ParseError("cannot read input file '" + path.string() + "'");
  }
  return format == Format::Json ? parse_json(buffer.str())
                                : parse_csv(buffer.str());
}

std::string emit_json(const std::vector<ArticleDataset>& datasets) {
  detail::JsonWriter w;
  w.begin_object();
  w.key("articles");
  w.begin_array();
  for (const ArticleDataset& article : datasets) {
    w.begin_object();
    w.key("id");
    w.string(article.id);
    w.key("experiments");
    w.begin_array();
    for (const ExperimentSummary& e : article.experiments) {
      w.begin_object();
      w.key("id");
      w.string(e.id);
      w.key("n");
      w.integers_inline(e.cell_sizes);
      w.key("means");
      w.numbers_inline(e.means);
      w.key("sds");
      w.numbers_inline(e.sds);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string emit_csv(const std::vector<ArticleDataset>& datasets) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ArticleDataset& article : datasets) {
    check_csv_safe_id(article.id);
    for (const ExperimentSummary& e : article.experiments) {
      check_csv_safe_id(e.id);
      out += article.id;
      out += ',';
      out += e.id;
      for (int n : e.cell_sizes) {
        out += ',';
        out += std::to_string(n);
      }
      for (double m : e.means) {
        out += ',';
        out += format_g17(m);
      }
      for (double s : e.sds) {
        out += ',';
        out += format_g17(s);
      }
      out += '\n';
    }
  }
  return out;
}

void validate_dataset(const ArticleDataset& article) {
  if (article.experiments.empty()) {
    throw ValidationError("article '" + article.id +
                          "': needs at least one experiment");
  }
  std::unordered_set<std::string> seen;
  for (const ExperimentSummary& e : article.experiments) {
    if (!seen.insert(e.id).second) {
      throw ValidationError("article '" + article.id +
                            "': duplicate experiment id '" + e.id + "'");
    }
    try {
      validate(e);
    } catch (const ValidationError& err) {
      throw ValidationError("article '" + article.id + "': " + err.what());
    }
  }
}

void validate_datasets(const std::vector<ArticleDataset>& datasets) {
  std::unordered_set<std::string> seen;
  for (const ArticleDataset& article : datasets) {
    if (!seen.insert(article.id).second) {
      throw ValidationError("duplicate article id '" + article.id + "'");
    }
    validate_dataset(article);
  }
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace superlin
