#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kogito/knowledge.hpp"
#include "kogito/model.hpp"

namespace kogito {

enum class Metric { kBleu, kRougeL, kMeteor, kCider };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);  // bleu, rouge_l, meteor, cider

struct MetricParams {
  // BLEU: uniform weights over orders 1..bleu_max_order; a zero n-gram
  // precision is floored at bleu_epsilon. Orders with no candidate n-grams
  // in the whole corpus are left out of the average.
  int bleu_max_order = 4;
  double bleu_epsilon = 1e-9;
  // ROUGE-L F-measure recall weight.
  double rouge_beta = 1.2;
  // METEOR: Fmean = PR / (alpha P + (1 - alpha) R), penalty
  // gamma (chunks / matches)^beta.
  double meteor_alpha = 0.9;
  double meteor_gamma = 0.5;
  double meteor_beta = 3.0;
  // CIDEr over orders 1..cider_max_order, scaled.
  int cider_max_order = 4;
  double cider_scale = 10.0;
};

// Lowercased whitespace tokens.
std::vector<std::string> metric_tokens(std::string_view s);

using References = std::vector<std::vector<std::string>>;

// Corpus BLEU: clipped counts (max over references), multiplicative
// brevity penalty against the closest reference length.
double corpus_bleu(const std::vector<std::string>& candidates,
                   const References& references, const MetricParams& p = {});
// Mean over candidates of the best LCS F-measure across references.
double corpus_rouge_l(const std::vector<std::string>& candidates,
                      const References& references, const MetricParams& p = {});
// Exact then suffix-stripped stem matching (no synonym stage); mean over
// candidates of the best reference score.
double corpus_meteor(const std::vector<std::string>& candidates,
                     const References& references, const MetricParams& p = {});
// TF-IDF n-gram cosine with document frequencies from the references;
// mean over references, mean over orders, times cider_scale, averaged over
// candidates.
double corpus_cider(const std::vector<std::string>& candidates,
                    const References& references, const MetricParams& p = {});

// Throws ValidationError when the lists differ in length or a reference
// list is empty.
double score_corpus(Metric metric, const std::vector<std::string>& candidates,
                    const References& references, const MetricParams& p = {});

// Sentence-level pieces, exposed for tests.
std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);
double rouge_l_sentence(const std::vector<std::string>& candidate,
                        const std::vector<std::string>& reference, double beta);
double meteor_sentence(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference,
                       const MetricParams& p = {});
std::string meteor_stem(std::string_view token);

struct EvalReport {
  std::map<std::string, double> scores;  // metric name -> corpus score
  std::size_t candidates = 0;
  std::size_t references = 0;
  std::vector<GenerationDiagnostic> failures;
};

// Strips the reference tails, generates, and scores each tuple's first
// generated tail against all of its reference tails. Throws
// ValidationError for an empty graph or a tuple without tails.
EvalReport evaluate_model(const KnowledgeModel& model, const KnowledgeGraph& refs,
                          const std::vector<Metric>& metrics,
                          const DecodeConfig& decode = {},
                          const MetricParams& params = {});

}  // namespace kogito
