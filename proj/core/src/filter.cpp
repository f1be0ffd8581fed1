#include "kogito/filter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kogito/error.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_context(std::string_view context) {
  if (text::trim(context).empty()) throw ValidationError("filter context is empty");
}

}  // namespace

EmbeddingCosineScorer::EmbeddingCosineScorer(
    std::shared_ptr<const EmbeddingTable> embeddings,
    std::shared_ptr<const RelationRegistry> registry)
    : embeddings_(std::move(embeddings)), registry_(std::move(registry)) {
  if (!embeddings_) throw ConfigurationError("embedding scorer needs an embedding table");
}

std::string EmbeddingCosineScorer::fact_text(const KnowledgeTuple& tuple) const {
  std::optional<std::string_view> tail;
  if (!tuple.tails().empty()) tail = tuple.tails().front();
  if (registry_) {
    if (const auto* rel = registry_->find(tuple.relation()))
      return rel->verbalize(tuple.head().text(), tail);
  }
  return template_verbalizer(std::string(kDefaultTemplate))(
      {tuple.head().text(), tuple.relation(), tail, std::nullopt});
}

RelevanceScore EmbeddingCosineScorer::score_texts(std::string_view a,
                                                  std::string_view b) const {
  const auto pa = embeddings_->mean_pool_text(a);
  const auto pb = embeddings_->mean_pool_text(b);
  if (pa.known == 0 || pb.known == 0)
    return {0.5, true, "no in-vocabulary tokens"};
  const double cos = cosine_similarity(pa.vector, pb.vector);
  return {clamp01((cos + 1.0) / 2.0), false, {}};
}

RelevanceScore EmbeddingCosineScorer::score(std::string_view context,
                                            const KnowledgeTuple& tuple) const {
  return score_texts(context, fact_text(tuple));
}

ExternalScorer::ExternalScorer(ScorerEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.url.find("://") == std::string::npos)
    throw ConfigurationError("scorer URL needs a scheme: " + endpoint_.url);
}

RelevanceScore ExternalScorer::score(std::string_view context,
                                     const KnowledgeTuple& tuple) const {
  const auto& url = endpoint_.url;
  const auto path_start = url.find('/', url.find("://") + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  const nlohmann::json body = {
      {"context", std::string(context)},
      {"head", tuple.head().text()},
      {"relation", tuple.relation()},
      {"tail", tuple.tails().empty() ? std::string() : tuple.tails().front()}};
  const std::string payload = body.dump();

  std::string last_error;
  const int attempts = std::max(1, endpoint_.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 && attempt + 1 < attempts) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw ApiError(res->status, res->body.substr(0, 200));
    try {
      const auto doc = nlohmann::json::parse(res->body);
      const double v = doc.at("relevance").get<double>();
      if (!std::isfinite(v)) throw ApiError(res->status, "non-finite relevance");
      return {clamp01(v), false, {}};
    } catch (const nlohmann::json::exception&) {
      throw ApiError(res->status, "malformed scorer response: " + res->body.substr(0, 200));
    }
  }
  throw TransportError("relevance scorer unreachable: " + last_error);
}

double relevance_score(std::string_view context, const KnowledgeTuple& tuple,
                       const RelevanceScorer& scorer) {
  check_context(context);
  if (tuple.tails().empty())
    throw ValidationError("cannot score a tuple without tails");
  return scorer.score(context, tuple).value;
}

FilterResult filter_graph(const KnowledgeGraph& g, std::string_view context,
                          const RelevanceScorer& scorer,
                          const FilterOptions& options) {
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0))
    throw ValidationError("threshold must be within [0, 1]");
  check_context(context);

  const std::size_t n = g.size();
  std::vector<RelevanceScore> scores(n);
  std::vector<std::string> errors(n);
  auto score_one = [&](std::size_t i) {
    try {
      if (g[i].tails().empty()) throw ValidationError("tuple has no tails");
      scores[i] = scorer.score(context, g[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "scorer failed";
    }
  };

  if (scorer.remote() && n > 1) {
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(options.max_in_flight, n));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) score_one(i);
      });
  } else {
    for (std::size_t i = 0; i < n; ++i) score_one(i);
  }

  FilterResult out;
  out.judgments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RelevanceJudgment j{g[i], scores[i].value, false, scores[i].flagged, errors[i]};
    if (!errors[i].empty()) {
      j.keep = options.fail_open;
      j.flagged = true;
    } else {
      j.keep = j.score >= options.threshold;
    }
    if (j.keep) out.kept.add(g[i]);
    out.judgments.push_back(std::move(j));
  }
  return out;
}

}  // namespace kogito
