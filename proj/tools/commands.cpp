#include "commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kogito/embedding.hpp"
#include "kogito/error.hpp"
#include "kogito/filter.hpp"
#include "kogito/graph_io.hpp"
#include "kogito/head_extraction.hpp"
#include "kogito/matcher_dataset.hpp"
#include "kogito/matcher_eval.hpp"
#include "kogito/metrics.hpp"
#include "kogito/model.hpp"
#include "kogito/pipeline.hpp"
#include "kogito/relation.hpp"
#include "kogito/relation_matching.hpp"
#include "kogito/resplit.hpp"
#include "kogito/swem.hpp"
#include "kogito/text.hpp"

namespace kogito::cli {
namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  fn(out);
  if (!out) throw IoError("failed writing " + path);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = text::trim(item); !t.empty()) out.emplace_back(t);
  return out;
}

ExtractorSet parse_extractors(const std::string& s) {
  ExtractorSet set;
  for (const auto& item : split_commas(s)) set.insert(parse_head_form(item));
  if (set.empty()) throw UsageError("--extractors needs at least one extractor");
  return set;
}

std::string input_text(const std::string& text, const std::string& file) {
  if (!text.empty() && !file.empty())
    throw UsageError("--text and --input-file are mutually exclusive");
  return file.empty() ? text : read_file(file);
}

GraphFormat output_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_graph_format(flag);
  if (path.empty() || path == "-") return GraphFormat::kJsonl;
  return graph_format_for_path(path);
}

// Accepts a JSON list of strings or of {"head", "form"} objects, the
// output of `heads`.
std::vector<HeadInput> read_heads_file(const std::string& path) {
  const auto doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    throw ValidationError(path + ": expected a JSON list of heads");
  std::vector<HeadInput> heads;
  for (const auto& item : doc) {
    if (item.is_string()) {
      heads.push_back({KnowledgeHead(item.get<std::string>()), std::nullopt});
    } else if (item.is_object() && item.contains("head")) {
      std::optional<HeadForm> form;
      if (item.contains("form")) form = parse_head_form(item.at("form").get<std::string>());
      heads.push_back({KnowledgeHead(item.at("head").get<std::string>()), form});
    } else {
      throw ValidationError(path + ": heads must be strings or {\"head\": ...} objects");
    }
  }
  return heads;
}

std::shared_ptr<RelationRegistry> make_registry(const std::string& relations_file) {
  auto reg = std::make_shared<RelationRegistry>(RelationRegistry::builtin());
  if (!relations_file.empty())
    for (auto& rel : load_relations_file(relations_file))
      reg->register_relation(std::move(rel));
  return reg;
}

std::shared_ptr<const EmbeddingTable> load_embeddings(const std::string& path,
                                                      const char* who) {
  if (path.empty()) throw UsageError(std::string(who) + " needs --embeddings");
  return std::make_shared<const EmbeddingTable>(EmbeddingTable::load(path));
}

json judgment_json(const RelevanceJudgment& j) {
  json out = {{"head", j.tuple.head().text()},
              {"relation", j.tuple.relation()},
              {"tails", j.tuple.tails()},
              {"score", j.score},
              {"keep", j.keep},
              {"flagged", j.flagged}};
  if (!j.error.empty()) out["error"] = j.error;
  return out;
}

void write_judgments(const std::string& path, const std::vector<RelevanceJudgment>& js) {
  if (path.empty()) return;
  write_to(path, [&](std::ostream& out) {
    for (const auto& j : js) out << judgment_json(j).dump() << '\n';
  });
}

void report_diagnostics(const std::vector<GenerationDiagnostic>& ds) {
  for (const auto& d : ds)
    std::cerr << "warning: tuple " << d.index << " (" << d.kind << "): " << d.message
              << '\n';
}

json f1_json(const F1Report& r) {
  json groups = json::object();
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    groups[std::string(to_string(kMatcherGroups[g]))] = {
        {"f1", r.per_group[g]},
        {"tp", r.counts[g].tp},
        {"fp", r.counts[g].fp},
        {"fn", r.counts[g].fn}};
  }
  return {{"examples", r.examples}, {"macro_f1", r.macro}, {"micro_f1", r.micro},
          {"groups", groups}};
}

// ---------------------------------------------------------------- infer

struct InferOptions {
  std::string text, input_file, heads_file, format, judgments;
  // key=value overrides applied on top of the config file
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_override(CLI::App* sub, InferOptions& o, const std::string& flag,
                  const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); }, help);
}

void run_infer(const GlobalOptions& g, InferOptions& o) {
  PipelineConfig config;
  if (!g.config.empty()) config = load_pipeline_config(g.config);
  if (g.seed) config.seed = *g.seed;
  if (g.dry_run) config.dry_run = true;
  for (const auto& [key, value] : o.overrides) apply_config_entry(config, key, value);
  if (!o.heads_file.empty()) {
    std::vector<std::string> heads;
    for (const auto& h : read_heads_file(o.heads_file)) heads.push_back(h.head.text());
    config.heads = std::move(heads);
  }
  const std::string input = input_text(o.text, o.input_file);
  if (!config.heads && text::trim(input).empty())
    throw UsageError("infer needs --text, --input-file, --heads or --heads-file");

  Pipeline pipeline(config);
  const auto result = pipeline.run(input);
  report_diagnostics(result.diagnostics);
  write_to(g.output, [&](std::ostream& out) {
    serialize_graph(result.graph, out, output_format(o.format, g.output));
  });
  write_judgments(o.judgments, result.judgments);
}

void register_infer(CLI::App& app, GlobalOptions& g) {
  auto o = std::make_shared<InferOptions>();
  auto* sub = app.add_subcommand("infer", "Extract, match, generate and filter");
  sub->add_option("--text", o->text, "Input text");
  sub->add_option("--input-file", o->input_file, "Read the input text from a file ('-' for stdin)");
  sub->add_option("--heads-file", o->heads_file, "JSON list of heads; skips extraction");
  sub->add_option("--format", o->format, "Output format: jsonl or csv");
  sub->add_option("--judgments", o->judgments, "Write filter judgments (jsonl)");
  add_override(sub, *o, "--heads", "heads", "Comma-separated heads; skips extraction");
  add_override(sub, *o, "--extractors", "extractors", "sentence,np,vp");
  add_override(sub, *o, "--matcher", "matcher", "base, heuristic or model");
  add_override(sub, *o, "--model", "matcher_model", "Trained matcher file");
  add_override(sub, *o, "--embeddings", "embeddings", "Word embeddings (text format)");
  add_override(sub, *o, "--relations", "relations", "Comma-separated relation subset");
  add_override(sub, *o, "--relations-file", "relations_file", "Custom relations (JSON)");
  add_override(sub, *o, "--backend", "backend", "stub or api");
  add_override(sub, *o, "--stub-template", "stub_template", "Stub tail template");
  add_override(sub, *o, "--api-model", "api_model", "Model name sent to the API");
  add_override(sub, *o, "--samples", "samples", "Few-shot sample graph");
  add_override(sub, *o, "--max-tokens", "max_tokens", "Completion length");
  add_override(sub, *o, "--temperature", "temperature", "Sampling temperature");
  add_override(sub, *o, "--stop", "stop", "Comma-separated stop sequences");
  add_override(sub, *o, "--n-samples", "n_samples", "Completions per tuple");
  add_override(sub, *o, "--max-in-flight", "max_in_flight", "Concurrent API requests");
  add_override(sub, *o, "--filter", "filter", "off, embedding or external");
  add_override(sub, *o, "--threshold", "threshold", "Relevance threshold");
  add_override(sub, *o, "--scorer-url", "scorer_url", "External relevance scorer");
  sub->add_flag_function(
      "--fail-closed",
      [o](std::int64_t) { o->overrides.emplace_back("fail_open", "false"); },
      "Drop tuples whose scoring failed");
  sub->callback([&g, o] { run_infer(g, *o); });
}

// ---------------------------------------------------------------- heads

void register_heads(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string text, input_file, extractors = "sentence,np,vp";
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("heads", "Extract knowledge heads from text");
  sub->add_option("--text", o->text, "Input text");
  sub->add_option("--input-file", o->input_file, "Read the input text from a file");
  sub->add_option("--extractors", o->extractors, "sentence,np,vp")->capture_default_str();
  sub->callback([&g, o] {
    const auto input = input_text(o->text, o->input_file);
    if (text::trim(input).empty()) throw UsageError("heads needs --text or --input-file");
    json out = json::array();
    for (const auto& h : extract_heads(input, parse_extractors(o->extractors)))
      out.push_back({{"head", h.head.text()}, {"form", to_string(h.form)}});
    write_to(g.output, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
  });
}

// ---------------------------------------------------------------- match

void register_match(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string heads_file, heads, matcher = "heuristic", model, embeddings, relations,
                                   relations_file, format;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("match", "Pair heads with relations");
  sub->add_option("--heads-file", o->heads_file, "JSON list of heads");
  sub->add_option("--heads", o->heads, "Comma-separated heads");
  sub->add_option("--matcher", o->matcher, "base, heuristic or model")->capture_default_str();
  sub->add_option("--model", o->model, "Trained matcher file");
  sub->add_option("--embeddings", o->embeddings, "Embeddings the matcher was trained on");
  sub->add_option("--relations", o->relations, "Comma-separated relation subset");
  sub->add_option("--relations-file", o->relations_file, "Custom relations (JSON)");
  sub->add_option("--format", o->format, "Output format: jsonl or csv");
  sub->callback([&g, o] {
    std::vector<HeadInput> heads;
    if (!o->heads_file.empty()) heads = read_heads_file(o->heads_file);
    for (const auto& h : split_commas(o->heads)) heads.push_back({KnowledgeHead(h), std::nullopt});
    if (heads.empty()) throw UsageError("match needs --heads-file or --heads");
    const auto registry = make_registry(o->relations_file);

    MatchOptions options;
    options.kind = parse_matcher_kind(o->matcher);
    if (!o->relations.empty()) options.subset = split_commas(o->relations);
    std::optional<SwemMatcher> model;
    if (options.kind == MatcherKind::kModel) {
      if (o->model.empty()) throw ConfigurationError("model matcher needs --model");
      model.emplace(SwemMatcher::load(o->model, load_embeddings(o->embeddings, "model matcher")));
      options.model = &*model;
    }
    const auto graph = pairs_to_graph(match_relations(heads, *registry, options));
    write_to(g.output, [&](std::ostream& out) {
      serialize_graph(graph, out, output_format(o->format, g.output));
    });
  });
}

// -------------------------------------------------------- train-matcher

void register_train(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string train, embeddings, out;
    SwemTrainConfig config;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("train-matcher", "Train the embedding relation matcher");
  sub->add_option("--train", o->train, "Training dataset (jsonl)")->required();
  sub->add_option("--embeddings", o->embeddings, "Word embeddings (text format)")->required();
  sub->add_option("--epochs", o->config.epochs, "Epochs")->capture_default_str();
  sub->add_option("--batch-size", o->config.batch_size, "Batch size")->capture_default_str();
  sub->add_option("--lr", o->config.learning_rate, "Adam learning rate")->capture_default_str();
  sub->add_option("--threshold", o->config.threshold, "Decision threshold")->capture_default_str();
  sub->add_option("--dim", o->config.dim, "Embedding dimension")->capture_default_str();
  sub->add_option("--out", o->out, "Model file (defaults to --output)");
  sub->callback([&g, o] {
    const std::string out = o->out.empty() ? g.output : o->out;
    if (out.empty()) throw UsageError("train-matcher needs --out");
    if (g.seed) o->config.seed = *g.seed;
    const auto train = load_matcher_dataset(o->train);
    auto embeddings = load_embeddings(o->embeddings, "train-matcher");
    const auto result = train_swem_matcher(
        train, embeddings, o->config, [](std::size_t epoch, double loss) {
          std::cerr << "epoch " << epoch + 1 << " loss " << loss << '\n';
        });
    result.matcher.save(out);
  });
}

// -------------------------------------------------------------- resplit

void register_resplit(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string input, out_train, out_test;
    std::size_t n = 0;
    std::optional<std::size_t> test_size;
    bool report = false;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("resplit", "Overlap-controlled train/test split");
  sub->add_option("--input", o->input, "Pool dataset (jsonl)")->required();
  sub->add_option("--n", o->n, "Max training occurrences of a test word")->capture_default_str();
  sub->add_option("--test-size", o->test_size, "Target test size (default 2% of the pool)");
  sub->add_option("--out-train", o->out_train, "Train split (jsonl)")->required();
  sub->add_option("--out-test", o->out_test, "Test split (jsonl)")->required();
  sub->add_flag("--report", o->report, "Print overlap statistics as JSON");
  sub->callback([&g, o] {
    ResplitConfig config;
    config.n = o->n;
    config.seed = g.seed.value_or(0);
    config.test_size = o->test_size;
    const auto split = resplit_dataset(load_matcher_dataset(o->input), config);
    save_matcher_dataset(split.train, o->out_train);
    save_matcher_dataset(split.test, o->out_test);
    if (o->report) {
      const auto r = compute_overlap(split.train, split.test);
      const auto counts = split.test.label_counts();
      const json doc = {{"n", o->n},
                        {"n_train", r.n_train},
                        {"n_test", r.n_test},
                        {"overlap_with_stopwords", r.overlap_with_stopwords},
                        {"overlap_without_stopwords", r.overlap_without_stopwords},
                        {"test_label_counts",
                         {{"physical", counts[0]}, {"social", counts[1]}, {"event", counts[2]}}}};
      write_to(g.output, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
    }
  });
}

// ----------------------------------------------------------------- eval

void register_eval(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string model = "stub", stub_template = StubModel::kDefaultTemplate, graph,
                metrics = "bleu,rouge_l,meteor,cider", relations_file, samples, out;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("eval", "Score a knowledge model against reference tails");
  sub->add_option("--model", o->model, "stub or api")->capture_default_str();
  sub->add_option("--stub-template", o->stub_template, "Stub tail template");
  sub->add_option("--graph", o->graph, "Reference graph")->required();
  sub->add_option("--metrics", o->metrics, "Comma-separated metrics")->capture_default_str();
  sub->add_option("--relations-file", o->relations_file, "Custom relations (JSON)");
  sub->add_option("--samples", o->samples, "Few-shot sample graph (api)");
  sub->add_option("--out", o->out, "Report file (defaults to --output)");
  sub->callback([&g, o] {
    std::vector<Metric> metrics;
    for (const auto& m : split_commas(o->metrics)) metrics.push_back(parse_metric(m));
    if (metrics.empty()) throw UsageError("--metrics is empty");
    const auto refs = read_graph_file(o->graph);

    std::unique_ptr<KnowledgeModel> model;
    if (parse_backend_kind(o->model) == BackendKind::kStub) {
      model = std::make_unique<StubModel>(o->stub_template);
    } else {
      auto api = std::make_unique<ApiModel>(ApiEndpoint::from_env(),
                                            make_registry(o->relations_file));
      if (!o->samples.empty()) {
        std::map<std::string, KnowledgeGraph> by_relation;
        for (const auto& t : read_graph_file(o->samples)) by_relation[t.relation()].add(t);
        for (auto& [rel, graph] : by_relation) api->set_samples(rel, std::move(graph));
      }
      model = std::move(api);
    }
    const auto report = evaluate_model(*model, refs, metrics);
    report_diagnostics(report.failures);
    json doc = {{"model", model->name()},
                {"scores", report.scores},
                {"candidates", report.candidates},
                {"references", report.references},
                {"failures", report.failures.size()}};
    write_to(o->out.empty() ? g.output : o->out,
             [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  });
}

// --------------------------------------------------------- eval-matcher

void register_eval_matcher(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string dataset, matcher = "heuristic", model, embeddings;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("eval-matcher", "Multi-label F1 of a relation matcher");
  sub->add_option("--dataset", o->dataset, "Labeled dataset (jsonl)")->required();
  sub->add_option("--matcher", o->matcher, "base, heuristic or model")->capture_default_str();
  sub->add_option("--model", o->model, "Trained matcher file");
  sub->add_option("--embeddings", o->embeddings, "Embeddings the matcher was trained on");
  sub->callback([&g, o] {
    const auto kind = parse_matcher_kind(o->matcher);
    std::optional<SwemMatcher> model;
    if (kind == MatcherKind::kModel) {
      if (o->model.empty()) throw ConfigurationError("model matcher needs --model");
      model.emplace(SwemMatcher::load(o->model, load_embeddings(o->embeddings, "model matcher")));
    }
    const auto report =
        evaluate_matcher(kind, load_matcher_dataset(o->dataset), model ? &*model : nullptr);
    json doc = f1_json(report);
    doc["matcher"] = o->matcher;
    write_to(g.output, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  });
}

// -------------------------------------------------------------- dataset

void register_dataset(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string graph, separator, relations_file;
    bool header = false;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("dataset", "Build a matcher dataset from a knowledge graph");
  sub->add_option("--graph", o->graph, "Knowledge graph (csv, tsv or jsonl)")->required();
  sub->add_option("--sep", o->separator, "CSV separator (default from the extension)");
  sub->add_flag("--header", o->header, "CSV has a header row");
  sub->add_option("--relations-file", o->relations_file, "Custom relations (JSON)");
  sub->callback([&g, o] {
    ParseOptions options;
    options.header = o->header;
    if (o->graph.ends_with(".tsv")) options.separator = '\t';
    if (!o->separator.empty()) {
      const auto sep = o->separator == "\\t" ? std::string("\t") : o->separator;
      if (sep.size() != 1) throw UsageError("--sep must be a single character");
      options.separator = sep[0];
    }
    const auto graph = read_graph_file(o->graph, options);
    const auto ds = build_matcher_dataset(graph, *make_registry(o->relations_file));
    write_to(g.output, [&](std::ostream& out) { write_matcher_dataset(ds, out); });
  });
}

// --------------------------------------------------------------- filter

void register_filter(CLI::App& app, GlobalOptions& g) {
  struct Options {
    std::string graph, context, context_file, scorer = "embedding", embeddings, scorer_url,
        relations_file, out, judgments, format;
    double threshold = 0.5;
    bool fail_closed = false;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("filter", "Drop tuples irrelevant to a context");
  sub->add_option("--graph", o->graph, "Generated graph")->required();
  sub->add_option("--context", o->context, "Context text");
  sub->add_option("--context-file", o->context_file, "Read the context from a file");
  sub->add_option("--threshold", o->threshold, "Keep scores >= threshold")->capture_default_str();
  sub->add_option("--scorer", o->scorer, "embedding or external")->capture_default_str();
  sub->add_option("--embeddings", o->embeddings, "Word embeddings (embedding scorer)");
  sub->add_option("--scorer-url", o->scorer_url, "External scorer endpoint");
  sub->add_option("--relations-file", o->relations_file, "Custom relations (JSON)");
  sub->add_option("--out", o->out, "Kept graph (defaults to --output)");
  sub->add_option("--judgments", o->judgments, "Per-tuple judgments (jsonl)");
  sub->add_option("--format", o->format, "Output format: jsonl or csv");
  sub->add_flag("--fail-closed", o->fail_closed, "Drop tuples whose scoring failed");
  sub->callback([&g, o] {
    const auto context = input_text(o->context, o->context_file);
    std::shared_ptr<const RelevanceScorer> scorer;
    switch (parse_filter_kind(o->scorer)) {
      case FilterKind::kEmbedding:
        scorer = std::make_shared<EmbeddingCosineScorer>(
            load_embeddings(o->embeddings, "embedding scorer"), make_registry(o->relations_file));
        break;
      case FilterKind::kExternal:
        if (o->scorer_url.empty()) throw UsageError("external scorer needs --scorer-url");
        scorer = std::make_shared<ExternalScorer>(ScorerEndpoint{o->scorer_url});
        break;
      case FilterKind::kOff:
        throw UsageError("--scorer must be embedding or external");
    }
    FilterOptions options;
    options.threshold = o->threshold;
    options.fail_open = !o->fail_closed;
    const auto result = filter_graph(read_graph_file(o->graph), context, *scorer, options);
    const std::string out = o->out.empty() ? g.output : o->out;
    write_to(out, [&](std::ostream& os) {
      serialize_graph(result.kept, os, output_format(o->format, out));
    });
    write_judgments(o->judgments, result.judgments);
  });
}

}  // namespace

void register_commands(CLI::App& app, GlobalOptions& global) {
  register_infer(app, global);
  register_heads(app, global);
  register_match(app, global);
  register_train(app, global);
  register_resplit(app, global);
  register_eval(app, global);
  register_eval_matcher(app, global);
  register_dataset(app, global);
  register_filter(app, global);
}

}  // namespace kogito::cli
