#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "kogito/knowledge.hpp"

namespace kogito {

enum class GraphFormat { kCsv, kJsonl };

// Throws UsageError for anything other than "csv" or "jsonl".
GraphFormat parse_graph_format(std::string_view name);

// Picks the format from a file extension (.csv/.tsv/.jsonl/.json).
GraphFormat graph_format_for_path(const std::filesystem::path& path);

struct ParseOptions {
  // csv
  char separator = ',';
  bool header = false;
  std::size_t head_column = 0;
  std::size_t relation_column = 1;  // every later column is a tail

  // jsonl
  std::string head_key = "head";
  std::string relation_key = "relation";
  std::string tails_key = "tails";
};

KnowledgeGraph parse_graph(std::istream& in, GraphFormat format,
                           const ParseOptions& options = {});
KnowledgeGraph parse_graph(std::string_view text, GraphFormat format,
                           const ParseOptions& options = {});

// Canonical output: jsonl objects carry keys in head, relation, tails order;
// csv fields are quoted only when they contain the separator, a quote, or a
// line break.
void serialize_graph(const KnowledgeGraph& g, std::ostream& out,
                     GraphFormat format, const ParseOptions& options = {});
std::string serialize_graph(const KnowledgeGraph& g, GraphFormat format,
                            const ParseOptions& options = {});

KnowledgeGraph read_graph_file(const std::filesystem::path& path,
                               GraphFormat format,
                               const ParseOptions& options = {});
KnowledgeGraph read_graph_file(const std::filesystem::path& path,
                               const ParseOptions& options = {});
void write_graph_file(const KnowledgeGraph& g,
                      const std::filesystem::path& path, GraphFormat format,
                      const ParseOptions& options = {});

}  // namespace kogito
