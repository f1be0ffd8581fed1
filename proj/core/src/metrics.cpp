#include "kogito/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "kogito/error.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

using Tokens = std::vector<std::string>;
using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const Tokens& toks, std::size_t n) {
  NgramCounts out;
  if (toks.size() < n || n == 0) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i)
    ++out[Tokens(toks.begin() + static_cast<std::ptrdiff_t>(i),
                 toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return out;
}

void check_shapes(const std::vector<std::string>& candidates,
                  const References& references) {
  if (candidates.size() != references.size())
    throw ValidationError("got " + std::to_string(candidates.size()) +
                          " candidates but " + std::to_string(references.size()) +
                          " reference lists");
  for (const auto& refs : references)
    if (refs.empty()) throw ValidationError("empty reference list");
}

std::vector<Tokens> tokenize_all(const std::vector<std::string>& v) {
  std::vector<Tokens> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(metric_tokens(s));
  return out;
}

template <typename SentenceScore>
double mean_best(const std::vector<std::string>& candidates,
                 const References& references, SentenceScore score) {
  if (candidates.empty()) return 0.0;
  double sum = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens c = metric_tokens(candidates[i]);
    double best = 0;
    for (const auto& r : references[i]) best = std::max(best, score(c, metric_tokens(r)));
    sum += best;
  }
  return sum / static_cast<double>(candidates.size());
}

}  // namespace

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kBleu: return "bleu";
    case Metric::kRougeL: return "rouge_l";
    case Metric::kMeteor: return "meteor";
    case Metric::kCider: return "cider";
  }
  return "bleu";
}

Metric parse_metric(std::string_view name) {
  if (name == "bleu") return Metric::kBleu;
  if (name == "rouge_l" || name == "rouge") return Metric::kRougeL;
  if (name == "meteor") return Metric::kMeteor;
  if (name == "cider") return Metric::kCider;
  throw UsageError("unknown metric: " + std::string(name));
}

std::vector<std::string> metric_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(text::to_lower(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(text::to_lower(cur));
  return out;
}

double corpus_bleu(const std::vector<std::string>& candidates,
                   const References& references, const MetricParams& p) {
  check_shapes(candidates, references);
  const auto max_order = static_cast<std::size_t>(std::max(1, p.bleu_max_order));
  std::vector<std::size_t> clipped(max_order + 1, 0), total(max_order + 1, 0);
  std::size_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens c = metric_tokens(candidates[i]);
    const auto refs = tokenize_all(references[i]);
    cand_len += c.size();
    // Closest reference length, shorter on ties.
    std::size_t best = refs.front().size();
    for (const auto& r : refs) {
      const auto d = [&](std::size_t len) {
        return len > c.size() ? len - c.size() : c.size() - len;
      };
      if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best))
        best = r.size();
    }
    ref_len += best;
    for (std::size_t n = 1; n <= max_order; ++n) {
      const auto cand_counts = ngrams(c, n);
      NgramCounts max_ref;
      for (const auto& r : refs)
        for (const auto& [g, k] : ngrams(r, n)) max_ref[g] = std::max(max_ref[g], k);
      for (const auto& [g, k] : cand_counts) {
        total[n] += k;
        auto it = max_ref.find(g);
        if (it != max_ref.end()) clipped[n] += std::min(k, it->second);
      }
    }
  }
  if (cand_len == 0) return 0.0;
  double log_sum = 0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_order; ++n) {
    if (total[n] == 0) continue;
    const double prec = static_cast<double>(clipped[n]) / static_cast<double>(total[n]);
    log_sum += std::log(std::max(prec, p.bleu_epsilon));
    ++orders;
  }
  const double bp = cand_len > ref_len
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref_len) /
                                             static_cast<double>(cand_len));
  return bp * std::exp(log_sum / static_cast<double>(orders));
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_sentence(const std::vector<std::string>& candidate,
                        const std::vector<std::string>& reference, double beta) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const auto lcs = static_cast<double>(lcs_length(candidate, reference));
  if (lcs == 0) return 0.0;
  const double prec = lcs / static_cast<double>(candidate.size());
  const double rec = lcs / static_cast<double>(reference.size());
  const double b2 = beta * beta;
  return (1 + b2) * prec * rec / (rec + b2 * prec);
}

double corpus_rouge_l(const std::vector<std::string>& candidates,
                      const References& references, const MetricParams& p) {
  check_shapes(candidates, references);
  return mean_best(candidates, references, [&](const Tokens& c, const Tokens& r) {
    return rouge_l_sentence(c, r, p.rouge_beta);
  });
}

std::string meteor_stem(std::string_view token) {
  std::string s(token);
  auto strip = [&](std::string_view suf, std::size_t min_stem) {
    if (s.size() >= suf.size() + min_stem &&
        s.compare(s.size() - suf.size(), suf.size(), suf) == 0) {
      s.resize(s.size() - suf.size());
      return true;
    }
    return false;
  };
  if (strip("ies", 2)) return s + "y";
  for (std::string_view suf : {"ing", "ed", "ly", "es", "s"})
    if (!(suf == "s" && s.size() >= 2 && s[s.size() - 2] == 's') && strip(suf, 3))
      break;
  if (s.size() >= 3 && s[s.size() - 1] == s[s.size() - 2] &&
      std::string_view("aeiouls").find(s.back()) == std::string_view::npos)
    s.pop_back();
  return s;
}

double meteor_sentence(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference,
                       const MetricParams& p) {
  if (candidate.empty() || reference.empty()) return 0.0;
  std::vector<long> cand_to_ref(candidate.size(), -1);
  std::vector<char> ref_used(reference.size(), 0);
  auto align = [&](auto&& key) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (cand_to_ref[i] >= 0) continue;
      const auto k = key(candidate[i]);
      for (std::size_t j = 0; j < reference.size(); ++j) {
        if (!ref_used[j] && key(reference[j]) == k) {
          cand_to_ref[i] = static_cast<long>(j);
          ref_used[j] = 1;
          break;
        }
      }
    }
  };
  align([](const std::string& t) { return t; });
  align([](const std::string& t) { return meteor_stem(t); });

  std::size_t matches = 0, chunks = 0;
  long prev_ref = -2;
  bool prev_matched = false;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (cand_to_ref[i] < 0) {
      prev_matched = false;
      continue;
    }
    ++matches;
    if (!prev_matched || cand_to_ref[i] != prev_ref + 1) ++chunks;
    prev_ref = cand_to_ref[i];
    prev_matched = true;
  }
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double prec = m / static_cast<double>(candidate.size());
  const double rec = m / static_cast<double>(reference.size());
  const double fmean = prec * rec / (p.meteor_alpha * prec + (1 - p.meteor_alpha) * rec);
  const double penalty =
      p.meteor_gamma * std::pow(static_cast<double>(chunks) / m, p.meteor_beta);
  return fmean * (1 - penalty);
}

double corpus_meteor(const std::vector<std::string>& candidates,
                     const References& references, const MetricParams& p) {
  check_shapes(candidates, references);
  return mean_best(candidates, references, [&](const Tokens& c, const Tokens& r) {
    return meteor_sentence(c, r, p);
  });
}

double corpus_cider(const std::vector<std::string>& candidates,
                    const References& references, const MetricParams& p) {
  check_shapes(candidates, references);
  if (candidates.empty()) return 0.0;
  const auto max_order = static_cast<std::size_t>(std::max(1, p.cider_max_order));
  const std::size_t items = candidates.size();

  // counts[item][ref][n]
  std::vector<std::vector<std::vector<NgramCounts>>> ref_counts(items);
  std::map<std::vector<std::string>, std::size_t> doc_freq;
  for (std::size_t i = 0; i < items; ++i) {
    std::set<std::vector<std::string>> seen;
    for (const auto& r : references[i]) {
      const Tokens toks = metric_tokens(r);
      std::vector<NgramCounts> per_n(max_order + 1);
      for (std::size_t n = 1; n <= max_order; ++n) {
        per_n[n] = ngrams(toks, n);
        for (const auto& [g, _] : per_n[n]) seen.insert(g);
      }
      ref_counts[i].push_back(std::move(per_n));
    }
    for (const auto& g : seen) ++doc_freq[g];
  }
  const double log_n = std::log(static_cast<double>(items));
  auto tfidf = [&](const NgramCounts& counts) {
    std::map<std::vector<std::string>, double> vec;
    for (const auto& [g, k] : counts) {
      auto it = doc_freq.find(g);
      const double df = it == doc_freq.end() ? 1.0 : static_cast<double>(it->second);
      vec[g] = static_cast<double>(k) * (log_n - std::log(std::max(1.0, df)));
    }
    return vec;
  };
  auto cosine = [](const std::map<std::vector<std::string>, double>& a,
                   const std::map<std::vector<std::string>, double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (const auto& [g, x] : a) {
      na += x * x;
      if (auto it = b.find(g); it != b.end()) dot += x * it->second;
    }
    for (const auto& [g, y] : b) nb += y * y;
    if (na == 0 || nb == 0) return 0.0;
    return dot / std::sqrt(na * nb);
  };

  double total = 0;
  for (std::size_t i = 0; i < items; ++i) {
    const Tokens c = metric_tokens(candidates[i]);
    double item = 0;
    for (std::size_t n = 1; n <= max_order; ++n) {
      const auto cv = tfidf(ngrams(c, n));
      double sum = 0;
      for (const auto& r : ref_counts[i]) sum += cosine(cv, tfidf(r[n]));
      item += sum / static_cast<double>(ref_counts[i].size());
    }
    total += p.cider_scale * item / static_cast<double>(max_order);
  }
  return total / static_cast<double>(items);
}

double score_corpus(Metric metric, const std::vector<std::string>& candidates,
                    const References& references, const MetricParams& p) {
  switch (metric) {
    case Metric::kBleu: return corpus_bleu(candidates, references, p);
    case Metric::kRougeL: return corpus_rouge_l(candidates, references, p);
    case Metric::kMeteor: return corpus_meteor(candidates, references, p);
    case Metric::kCider: return corpus_cider(candidates, references, p);
  }
  return 0.0;
}

EvalReport evaluate_model(const KnowledgeModel& model, const KnowledgeGraph& refs,
                          const std::vector<Metric>& metrics,
                          const DecodeConfig& decode, const MetricParams& params) {
  if (refs.empty()) throw ValidationError("reference graph is empty");
  KnowledgeGraph partial;
  References references;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].tails().empty())
      throw ValidationError("reference tuple " + std::to_string(i) + " has no tails");
    partial.add(refs[i].without_tails());
    references.push_back(refs[i].tails());
  }
  GenerationResult generated;
  try {
    generated = model.generate(partial, decode);
  } catch (const GenerationError& e) {
    const auto& d = e.partial().diagnostics;
    throw TransportError(std::string(e.what()) +
                         (d.empty() ? "" : " (first failure at tuple " +
                                               std::to_string(d.front().index) +
                                               ": " + d.front().message + ")"));
  }
  if (generated.graph.size() != refs.size())
    throw ValidationError("model returned " + std::to_string(generated.graph.size()) +
                          " tuples for " + std::to_string(refs.size()) + " inputs");

  std::vector<std::string> candidates;
  candidates.reserve(refs.size());
  EvalReport report;
  for (const auto& t : generated.graph) {
    candidates.push_back(t.tails().empty() ? std::string() : t.tails().front());
  }
  for (const auto& r : references) report.references += r.size();
  report.candidates = candidates.size();
  report.failures = generated.diagnostics;
  for (auto m : metrics)
    report.scores[std::string(to_string(m))] =
        score_corpus(m, candidates, references, params);
  return report;
}

}  // namespace kogito
