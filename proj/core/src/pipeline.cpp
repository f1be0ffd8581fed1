#include "kogito/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "kogito/graph_io.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto end = value.find(',', start);
    if (end == std::string_view::npos) end = value.size();
    auto item = text::trim(value.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case ',': out.push_back(','); break;
      default: out.push_back(s[i]);
    }
  }
  return out;
}

// Comma-separated, with "\," for a literal comma.
std::vector<std::string> split_escaped(std::string_view value) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '\\' && i + 1 < value.size()) {
      cur.push_back(value[i]);
      cur.push_back(value[++i]);
    } else if (value[i] == ',') {
      out.push_back(unescape(cur));
      cur.clear();
    } else {
      cur.push_back(value[i]);
    }
  }
  out.push_back(unescape(cur));
  std::erase_if(out, [](const std::string& s) { return s.empty(); });
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  const std::string s = text::to_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigurationError(std::string(key) + ": expected a boolean, got '" +
                           std::string(v) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ConfigurationError(std::string(key) + ": expected a number, got '" +
                             std::string(v) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  // GCC 11 supports floating-point from_chars.
  return parse_number<double>(key, v);
}

template <typename F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e, std::current_exception());
  }
}

}  // namespace

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::kApi ? "api" : "stub";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "stub") return BackendKind::kStub;
  if (name == "api") return BackendKind::kApi;
  throw UsageError("unknown model backend: " + std::string(name));
}

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kOff: return "off";
    case FilterKind::kEmbedding: return "embedding";
    case FilterKind::kExternal: return "external";
  }
  return "off";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "off" || name == "none") return FilterKind::kOff;
  if (name == "embedding" || name == "embedding_cosine") return FilterKind::kEmbedding;
  if (name == "external") return FilterKind::kExternal;
  throw UsageError("unknown filter: " + std::string(name));
}

void apply_config_entry(PipelineConfig& c, std::string_view key,
                        std::string_view raw) {
  const std::string value(text::trim(raw));
  try {
    if (key == "extractors") {
      ExtractorSet set;
      for (const auto& item : split_list(value)) set.insert(parse_head_form(item));
      if (set.empty()) throw ConfigurationError("extractors: empty list");
      c.extractors = std::move(set);
    } else if (key == "matcher") {
      c.matcher = parse_matcher_kind(value);
    } else if (key == "matcher_model" || key == "model_path") {
      c.matcher_model = value;
    } else if (key == "embeddings") {
      c.embeddings = value;
    } else if (key == "relations") {
      c.relations = split_list(value);
    } else if (key == "relations_file") {
      c.relations_file = value;
    } else if (key == "backend") {
      c.backend = parse_backend_kind(value);
    } else if (key == "stub_template") {
      c.stub_template = value;
    } else if (key == "api_model") {
      c.api_model = value;
    } else if (key == "samples") {
      c.samples = value;
    } else if (key == "max_tokens") {
      c.decode.max_tokens = parse_number<int>(key, value);
    } else if (key == "temperature") {
      c.decode.temperature = parse_double(key, value);
    } else if (key == "stop") {
      c.decode.stop_sequences = split_escaped(value);
    } else if (key == "n_samples") {
      c.decode.n_samples = parse_number<int>(key, value);
    } else if (key == "max_in_flight") {
      c.decode.max_in_flight = parse_number<std::size_t>(key, value);
    } else if (key == "filter") {
      c.filter = parse_filter_kind(value);
    } else if (key == "threshold") {
      c.threshold = parse_double(key, value);
    } else if (key == "fail_open") {
      c.fail_open = parse_bool(key, value);
    } else if (key == "scorer_url") {
      c.scorer_url = value;
    } else if (key == "dry_run") {
      c.dry_run = parse_bool(key, value);
    } else if (key == "heads") {
      std::vector<std::string> heads;
      for (const auto& h : split_escaped(value)) heads.emplace_back(text::trim(h));
      c.heads = std::move(heads);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw ConfigurationError("unknown configuration key: " + std::string(key));
    }
  } catch (const ConfigurationError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigurationError(std::string(key) + ": " + e.what());
  }
}

PipelineConfig parse_pipeline_config(std::string_view text, PipelineConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected key=value");
    const auto key = text::trim(line.substr(0, eq));
    try {
      apply_config_entry(base, key, line.substr(eq + 1));
    } catch (const ConfigurationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return base;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pipeline_config(ss.str(), std::move(base));
}

StageError::StageError(std::string stage, const Error& cause, std::exception_ptr ptr)
    : Error(stage + ": " + cause.what()),
      stage_(std::move(stage)),
      exit_code_(cause.exit_code()),
      kind_(cause.kind()),
      cause_(std::move(ptr)) {}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)),
      registry_(std::make_shared<RelationRegistry>(RelationRegistry::builtin())) {
  stage("setup", [&] {
    if (config_.extractors.empty())
      throw ConfigurationError("no head extractors enabled");
    if (!(config_.threshold >= 0.0 && config_.threshold <= 1.0))
      throw ConfigurationError("threshold must be within [0, 1]");
    if (config_.relations_file)
      for (auto& rel : load_relations_file(*config_.relations_file))
        registry_->register_relation(std::move(rel));
    if (config_.relations)
      for (const auto& name : *config_.relations)
        if (!registry_->contains(name))
          throw ConfigurationError("unknown relation: " + name);

    const bool needs_embeddings =
        config_.matcher == MatcherKind::kModel ||
        (!config_.dry_run && config_.filter == FilterKind::kEmbedding);
    if (needs_embeddings) {
      if (!config_.embeddings)
        throw ConfigurationError("embeddings path required by the " +
                                 std::string(config_.matcher == MatcherKind::kModel
                                                 ? "model matcher"
                                                 : "embedding filter"));
      embeddings_ = std::make_shared<const EmbeddingTable>(
          EmbeddingTable::load(*config_.embeddings));
    }
    if (config_.matcher == MatcherKind::kModel) {
      if (!config_.matcher_model)
        throw ConfigurationError("model matcher selected but no matcher model given");
      matcher_.emplace(SwemMatcher::load(*config_.matcher_model, embeddings_));
    }
    if (config_.dry_run) return;

    if (config_.backend == BackendKind::kStub) {
      model_ = std::make_shared<const StubModel>(config_.stub_template);
    } else {
      auto endpoint = ApiEndpoint::from_env();
      endpoint.model = config_.api_model;
      auto api = std::make_shared<ApiModel>(endpoint, registry_);
      if (config_.samples) {
        std::map<std::string, KnowledgeGraph> by_relation;
        for (const auto& t : read_graph_file(*config_.samples))
          by_relation[t.relation()].add(t);
        for (auto& [rel, g] : by_relation) api->set_samples(rel, std::move(g));
      }
      model_ = std::move(api);
    }
    if (config_.filter == FilterKind::kEmbedding) {
      scorer_ = std::make_shared<const EmbeddingCosineScorer>(embeddings_, registry_);
    } else if (config_.filter == FilterKind::kExternal) {
      if (config_.scorer_url.empty())
        throw ConfigurationError("external filter needs scorer_url");
      scorer_ = std::make_shared<const ExternalScorer>(ScorerEndpoint{config_.scorer_url});
    }
  });
}

void Pipeline::set_model(std::shared_ptr<const KnowledgeModel> model) {
  model_ = std::move(model);
}

void Pipeline::set_scorer(std::shared_ptr<const RelevanceScorer> scorer) {
  scorer_ = std::move(scorer);
}

InferResult Pipeline::run(std::string_view input) const {
  InferResult out;
  std::vector<HeadInput> heads;
  stage("extract", [&] {
    if (config_.heads) {
      for (const auto& h : *config_.heads) heads.push_back({KnowledgeHead(h), std::nullopt});
      return;
    }
    if (text::trim(input).empty()) throw ValidationError("input text is empty");
    out.heads = extract_heads(input, config_.extractors);
    for (const auto& h : out.heads) heads.push_back({h.head, h.form});
  });
  if (heads.empty()) return out;

  const auto pairs = stage("match", [&] {
    MatchOptions options;
    options.kind = config_.matcher;
    options.subset = config_.relations;
    options.model = matcher_ ? &*matcher_ : nullptr;
    return match_relations(heads, *registry_, options);
  });
  out.graph = pairs_to_graph(pairs);
  if (config_.dry_run || out.graph.empty()) return out;

  stage("generate", [&] {
    if (!model_) throw ConfigurationError("no knowledge model configured");
    auto result = generate(*model_, out.graph, config_.decode);
    out.graph = std::move(result.graph);
    out.diagnostics = std::move(result.diagnostics);
  });

  if (config_.filter != FilterKind::kOff) {
    stage("filter", [&] {
      if (!scorer_) throw ConfigurationError("no relevance scorer configured");
      if (text::trim(input).empty())
        throw ValidationError("filtering needs the input text as context");
      FilterOptions options;
      options.threshold = config_.threshold;
      options.fail_open = config_.fail_open;
      options.max_in_flight = config_.decode.max_in_flight;
      auto filtered = filter_graph(out.graph, input, *scorer_, options);
      out.graph = std::move(filtered.kept);
      out.judgments = std::move(filtered.judgments);
    });
  }
  return out;
}

KnowledgeGraph infer(std::string_view text, const PipelineConfig& config) {
  return Pipeline(config).run(text).graph;
}

}  // namespace kogito
