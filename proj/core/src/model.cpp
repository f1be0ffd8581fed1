#include "kogito/model.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace kogito {
namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

std::vector<std::string> dedup_nonempty(std::vector<std::string> in) {
  std::vector<std::string> out;
  for (auto& s : in) {
    if (s.empty()) continue;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

GenerationResult generate(const KnowledgeModel& model,
                          const KnowledgeGraph& partial,
                          const DecodeConfig& decode) {
  return model.generate(partial, decode);
}

StubModel::StubModel(std::string pattern) : pattern_(std::move(pattern)) {}

StubModel StubModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("model").get<std::string>() != "stub")
      throw ValidationError("not a stub model file");
    return StubModel(doc.at("template").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid stub model file: ") + e.what());
  }
}

void StubModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << nlohmann::ordered_json{{"model", "stub"}, {"template", pattern_}}.dump()
      << '\n';
}

std::string StubModel::tail_for(const KnowledgeTuple& t) const {
  std::string out = pattern_;
  replace_all(out, "{relation}", t.relation());
  replace_all(out, "{head}", t.head().text());
  return out;
}

GenerationResult StubModel::generate(const KnowledgeGraph& partial,
                                     const DecodeConfig& /*decode*/) const {
  GenerationResult result;
  for (const auto& t : partial)
    result.graph.add(KnowledgeTuple(t.head(), t.relation(), {tail_for(t)}));
  return result;
}

ApiModel::ApiModel(ApiEndpoint endpoint,
                   std::shared_ptr<const RelationRegistry> registry)
    : endpoint_(std::move(endpoint)), registry_(std::move(registry)) {
  if (!registry_) throw ValidationError("API model needs a relation registry");
}

void ApiModel::set_samples(const std::string& relation, KnowledgeGraph samples) {
  if (samples.empty()) throw ValidationError("few-shot sample graph is empty");
  for (const auto& t : samples)
    if (t.relation() != relation)
      throw ValidationError("sample uses relation " + t.relation() +
                            ", expected " + relation);
  samples_[relation] = std::move(samples);
}

std::string ApiModel::prompt_for(const KnowledgeTuple& t) const {
  const KnowledgeRelation* rel = registry_->find(t.relation());
  const KnowledgeRelation fallback(t.relation(), RelationGroup::kCustom);
  if (rel == nullptr) rel = &fallback;
  if (auto it = samples_.find(t.relation()); it != samples_.end())
    return build_few_shot_prompt(*rel, it->second, t.head());
  return rel->verbalize(t.head().text());
}

GenerationResult ApiModel::generate(const KnowledgeGraph& partial,
                                    const DecodeConfig& decode) const {
  if (endpoint_.api_key.empty())
    throw CredentialError("no API key configured (set KOGITO_API_KEY)");
  const std::size_t n = partial.size();
  std::vector<std::vector<std::string>> tails(n);
  std::vector<GenerationDiagnostic> diagnostics;
  std::mutex mu;
  std::exception_ptr fatal;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> transport_failures{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      {
        std::lock_guard lock(mu);
        if (fatal) return;
      }
      const auto& t = partial[i];
      try {
        CompletionRequest req{prompt_for(t), decode.max_tokens, decode.temperature,
                              decode.stop_sequences, decode.n_samples};
        tails[i] = dedup_nonempty(complete_via_api(endpoint_, req));
        if (tails[i].empty()) {
          std::lock_guard lock(mu);
          diagnostics.push_back({i, "empty", "backend returned no usable completion"});
        }
      } catch (const CredentialError&) {
        std::lock_guard lock(mu);
        if (!fatal) fatal = std::current_exception();
        return;
      } catch (const Error& e) {
        if (!dynamic_cast<const ApiError*>(&e) &&
            dynamic_cast<const TransportError*>(&e))
          ++transport_failures;
        std::lock_guard lock(mu);
        diagnostics.push_back({i, e.kind(), e.what()});
      }
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min(decode.max_in_flight, n));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  std::sort(diagnostics.begin(), diagnostics.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  GenerationResult result;
  for (std::size_t i = 0; i < n; ++i)
    result.graph.add(KnowledgeTuple(partial[i].head(), partial[i].relation(),
                                    std::move(tails[i])));
  result.diagnostics = std::move(diagnostics);
  if (n > 0 && transport_failures == n)
    throw GenerationError("completion backend unreachable for every tuple",
                          std::move(result));
  return result;
}

}  // namespace kogito
