#include "kogito/graph_io.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kogito/error.hpp"

namespace kogito {
namespace {

using ordered_json = nlohmann::ordered_json;

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 style reader; quoted fields may span lines.
class CsvReader {
 public:
  CsvReader(std::istream& in, char sep) : in_(in), sep_(sep) {}

  bool next(CsvRecord& rec) {
    rec.fields.clear();
    int c = in_.get();
    while (c == '\n' || c == '\r') {  // skip blank lines
      if (c == '\n') ++line_;
      c = in_.get();
    }
    if (c == EOF) return false;
    rec.line = line_ + 1;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (;; c = in_.get()) {
      if (quoted) {
        if (c == EOF) throw ParseError(rec.line, "unterminated quoted field");
        if (c == '"') {
          if (in_.peek() == '"') {
            field.push_back('"');
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(static_cast<char>(c));
        }
        continue;
      }
      if (c == EOF || c == '\n') {
        if (c == '\n') ++line_;
        if (!field.empty() && field.back() == '\r' && !field_was_quoted)
          field.pop_back();
        rec.fields.push_back(std::move(field));
        return true;
      }
      if (c == '\r' && (in_.peek() == '\n' || in_.peek() == EOF)) continue;
      if (c == sep_) {
        rec.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else if (c == '"' && field.empty() && !field_was_quoted) {
        quoted = true;
        field_was_quoted = true;
      } else {
        if (field_was_quoted)
          throw ParseError(rec.line, "text after closing quote");
        field.push_back(static_cast<char>(c));
      }
    }
  }

 private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 0;
};

KnowledgeGraph parse_csv(std::istream& in, const ParseOptions& opt) {
  if (opt.separator == '"' || opt.separator == '\n' || opt.separator == '\r')
    throw UsageError("invalid csv separator");
  if (opt.head_column == opt.relation_column)
    throw UsageError("head and relation columns must differ");
  CsvReader reader(in, opt.separator);
  CsvRecord rec;
  KnowledgeGraph g;
  bool skip_header = opt.header;
  const std::size_t min_fields =
      std::max(opt.head_column, opt.relation_column) + 1;
  while (reader.next(rec)) {
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (rec.fields.size() < min_fields)
      throw ParseError(rec.line, "expected at least " +
                                     std::to_string(min_fields) + " columns");
    std::vector<std::string> tails;
    for (std::size_t i = opt.relation_column + 1; i < rec.fields.size(); ++i) {
      if (i != opt.head_column) tails.push_back(rec.fields[i]);
    }
    try {
      g.add(KnowledgeTuple(KnowledgeHead(rec.fields[opt.head_column]),
                           rec.fields[opt.relation_column], std::move(tails)));
    } catch (const ValidationError& e) {
      throw ParseError(rec.line, e.what());
    }
  }
  return g;
}

KnowledgeGraph parse_jsonl(std::istream& in, const ParseOptions& opt) {
  KnowledgeGraph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const ordered_json::exception& e) {
      throw ParseError(lineno, std::string("invalid json: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(lineno, "expected a json object");
    auto string_field = [&](const std::string& key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string())
        throw ParseError(lineno, "missing string field \"" + key + "\"");
      return it->get<std::string>();
    };
    std::string head = string_field(opt.head_key);
    std::string relation = string_field(opt.relation_key);
    std::vector<std::string> tails;
    if (auto it = obj.find(opt.tails_key); it != obj.end() && !it->is_null()) {
      if (it->is_string()) {
        tails.push_back(it->get<std::string>());
      } else if (it->is_array()) {
        for (const auto& t : *it) {
          if (!t.is_string())
            throw ParseError(lineno, "tails must be strings");
          tails.push_back(t.get<std::string>());
        }
      } else {
        throw ParseError(lineno, "tails must be a string or a list");
      }
    }
    try {
      g.add(KnowledgeTuple(KnowledgeHead(std::move(head)), std::move(relation),
                           std::move(tails)));
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return g;
}

std::string csv_field(const std::string& s, char sep) {
  if (s.find_first_of(std::string{sep, '"', '\n', '\r'}) == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv(const KnowledgeGraph& g, std::ostream& out,
               const ParseOptions& opt) {
  const char sep = opt.separator;
  if (opt.header) out << "head" << sep << "relation" << sep << "tails\n";
  for (const auto& t : g) {
    out << csv_field(t.head().text(), sep) << sep
        << csv_field(t.relation(), sep);
    for (const auto& tail : t.tails()) out << sep << csv_field(tail, sep);
    out << '\n';
  }
}

void write_jsonl(const KnowledgeGraph& g, std::ostream& out,
                 const ParseOptions& opt) {
  for (const auto& t : g) {
    ordered_json obj;
    obj[opt.head_key] = t.head().text();
    obj[opt.relation_key] = t.relation();
    obj[opt.tails_key] = t.tails();
    try {
      out << obj.dump() << '\n';
    } catch (const ordered_json::exception& e) {
      throw ValidationError(std::string("cannot encode tuple: ") + e.what());
    }
  }
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "csv") return GraphFormat::kCsv;
  if (name == "jsonl") return GraphFormat::kJsonl;
  throw UsageError("unknown graph format: " + std::string(name));
}

GraphFormat graph_format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".tsv") return GraphFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json") return GraphFormat::kJsonl;
  throw UsageError("cannot infer graph format from " + path.string());
}

KnowledgeGraph parse_graph(std::istream& in, GraphFormat format,
                           const ParseOptions& options) {
  switch (format) {
    case GraphFormat::kCsv:
      return parse_csv(in, options);
    case GraphFormat::kJsonl:
      return parse_jsonl(in, options);
  }
  throw UsageError("unknown graph format");
}

KnowledgeGraph parse_graph(std::string_view text, GraphFormat format,
                           const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_graph(in, format, options);
}

void serialize_graph(const KnowledgeGraph& g, std::ostream& out,
                     GraphFormat format, const ParseOptions& options) {
  if (format == GraphFormat::kCsv)
    write_csv(g, out, options);
  else
    write_jsonl(g, out, options);
  if (!out) throw IoError("failed to write graph");
}

std::string serialize_graph(const KnowledgeGraph& g, GraphFormat format,
                            const ParseOptions& options) {
  std::ostringstream out;
  serialize_graph(g, out, format, options);
  return out.str();
}

KnowledgeGraph read_graph_file(const std::filesystem::path& path,
                               GraphFormat format,
                               const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_graph(in, format, options);
}

KnowledgeGraph read_graph_file(const std::filesystem::path& path,
                               const ParseOptions& options) {
  return read_graph_file(path, graph_format_for_path(path), options);
}

void write_graph_file(const KnowledgeGraph& g,
                      const std::filesystem::path& path, GraphFormat format,
                      const ParseOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  serialize_graph(g, out, format, options);
}

}  // namespace kogito
