// Acceptance checks: one PASS/FAIL/SKIP line per criterion, exit 1 on any
// FAIL. Full-data parts run when KOGITO_ATOMIC2020_DIR (train.tsv, dev.tsv,
// test.tsv) and KOGITO_GLOVE_PATH (100-d text vectors) are set.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "kogito/filter.hpp"
#include "kogito/graph_io.hpp"
#include "kogito/matcher_eval.hpp"
#include "kogito/metrics.hpp"
#include "kogito/pipeline.hpp"
#include "kogito/relation_matching.hpp"
#include "kogito/resplit.hpp"
#include "kogito/swem.hpp"

namespace {

using namespace kogito;
using Clock = std::chrono::steady_clock;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

// Collects failed checks; the first failure message becomes the detail.
struct Checker {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  Outcome outcome() const {
    if (!failures.empty()) {
      std::string d = failures.front();
      if (failures.size() > 1) d += " (+" + std::to_string(failures.size() - 1) + " more)";
      return {Status::kFail, d};
    }
    std::string d;
    for (const auto& n : notes) d += (d.empty() ? "" : "; ") + n;
    return {Status::kPass, d};
  }
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<std::string> matched(const std::string& head, std::optional<HeadForm> form) {
  const auto reg = RelationRegistry::builtin();
  std::set<std::string> out;
  for (const auto& p : match_relations({HeadInput{KnowledgeHead(head), form}}, reg, {}))
    out.insert(p.relation);
  return out;
}

std::set<std::string> group_set(const RelationRegistry& reg,
                                std::initializer_list<RelationGroup> groups) {
  std::set<std::string> out;
  for (auto g : groups)
    for (const auto& r : reg.group_members(g)) {
      const auto& rel = reg.at(r);
      if (rel.source() == RelationSource::kAtomic2020) out.insert(r);
    }
  return out;
}

// 1. Graph algebra.
Outcome graph_algebra() {
  Checker c;
  std::mt19937_64 rng(2024);
  const auto start = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_graph(rng, 12);
    const auto b = testing::random_graph(rng, 12);
    const std::string tag = "pair " + std::to_string(i);
    c.check((a + a).set_equals(a), tag + ": A+A != A");
    c.check((a - a).empty(), tag + ": A-A not empty");
    c.check(is_subset(a & b, a), tag + ": A&B not in A");
    for (auto f : {GraphFormat::kJsonl, GraphFormat::kCsv})
      c.check(parse_graph(serialize_graph(a, f), f) == a, tag + ": round trip");
  }
  const double s = seconds_since(start);
  c.check(s < 5.0, "took " + fmt(s) + " s");
  c.notes.push_back("1000 pairs in " + fmt(s) + " s");
  return c.outcome();
}

// 2. Heuristic pairings.
Outcome heuristic_pairings() {
  Checker c;
  const auto reg = RelationRegistry::builtin();
  const auto hammer = matched("hammer", std::nullopt);
  c.check(hammer == group_set(reg, {RelationGroup::kPhysical}), "hammer is not the physical group");
  c.check(hammer.count("AtLocation") == 1, "hammer lacks AtLocation");
  c.check(hammer.count("xWant") == 0, "hammer has xWant");
  const auto person = matched("PersonX becomes a basketball player", std::nullopt);
  c.check(person == group_set(reg, {RelationGroup::kSocial, RelationGroup::kEvent}),
          "sentence is not social+event");
  c.check(person.count("xIntent") == 1, "sentence lacks xIntent");
  c.check(person.count("UsedFor") == 0, "sentence has UsedFor");
  c.notes.push_back("hammer -> " + std::to_string(hammer.size()) + " physical, sentence -> " +
                    std::to_string(person.size()) + " social/event");
  return c.outcome();
}

// 3. Sample-head group labels.
Outcome sample_head_labels() {
  Checker c;
  const auto accordion = matched_groups({KnowledgeHead("accordion"), HeadForm::kNounPhrase}, {});
  c.check(accordion == GroupLabels{true, false, false}, "accordion -> " + to_string(accordion));
  const auto funny =
      matched_groups({KnowledgeHead("PersonX acts funny"), HeadForm::kSentence}, {});
  c.check(funny == GroupLabels{false, true, true}, "acts funny -> " + to_string(funny));
  const auto motivates =
      matched_groups({KnowledgeHead("PersonX motivates PersonY"), HeadForm::kSentence}, {});
  c.check(motivates.social, "motivates -> " + to_string(motivates));
  const auto big = matched_groups({KnowledgeHead("big investment"), std::nullopt}, {});
  c.notes.push_back("3/3; big investment -> " + to_string(big) + " (heuristic limit)");
  return c.outcome();
}

// 4. Resplit at desk scale.
Outcome resplit_desk_scale() {
  Checker c;
  const auto pool = testing::make_resplit_pool(2000, 500, 7);
  for (std::size_t n : {0, 2, 4}) {
    ResplitConfig cfg;
    cfg.n = n;
    cfg.seed = 7;
    const auto start = Clock::now();
    const auto r = resplit_dataset(pool, cfg);
    const double s = seconds_since(start);
    const auto violations = testing::count_resplit_violations(r.train, r.test, n);
    const double balance = testing::test_balance_error(r.test);
    const std::string tag = "n=" + std::to_string(n);
    c.check(violations == 0, tag + ": " + std::to_string(violations) + " violations");
    // Small test sets cannot always reach 10%; the tightest integer split counts.
    const auto counts = r.test.label_counts();
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    c.check(balance <= 0.10 || *hi - *lo <= 1, tag + ": balance error " + fmt(balance));
    c.check(s < 10.0, tag + ": took " + fmt(s) + " s");
    c.check(r.train.size() + r.test.size() == pool.size(), tag + ": heads lost");
    c.notes.push_back(tag + " test " + std::to_string(r.test.size()) + " bal " + fmt(balance, 2) +
                      " " + fmt(s, 2) + " s");
  }
  return c.outcome();
}

struct AtomicData {
  KnowledgeGraph train, dev, test;
};

std::optional<AtomicData> load_atomic() {
  const char* dir = env("KOGITO_ATOMIC2020_DIR");
  if (!dir) return std::nullopt;
  ParseOptions opts;
  opts.separator = '\t';
  AtomicData d;
  const std::filesystem::path root(dir);
  d.train = read_graph_file(root / "train.tsv", GraphFormat::kCsv, opts);
  d.dev = read_graph_file(root / "dev.tsv", GraphFormat::kCsv, opts);
  d.test = read_graph_file(root / "test.tsv", GraphFormat::kCsv, opts);
  return d;
}

MatcherDataset atomic_pool(const AtomicData& d, const RelationRegistry& reg) {
  return build_matcher_dataset(d.train + d.test, reg);
}

// 5. Full-data overlaps.
Outcome full_data_overlap() {
  const auto data = load_atomic();
  if (!data) return {Status::kSkip, "KOGITO_ATOMIC2020_DIR not set"};
  Checker c;
  const auto reg = RelationRegistry::builtin();
  const auto pool = atomic_pool(*data, reg);
  struct Row {
    std::size_t n;
    double without, with;
  };
  for (const Row& row : {Row{0, 0.00, 0.11}, Row{2, 0.20, 0.27}, Row{4, 0.30, 0.36}}) {
    ResplitConfig cfg;
    cfg.n = row.n;
    const auto r = resplit_dataset(pool, cfg);
    const auto o = compute_overlap(r.train, r.test);
    const std::string tag = "D" + std::to_string(row.n);
    if (row.n == 0) {
      c.check(o.overlap_without_stopwords == 0.0, tag + " overlap without stopwords " +
                                                      fmt(o.overlap_without_stopwords));
      c.check(std::abs(o.overlap_with_stopwords - row.with) <= 0.05,
              tag + " overlap with stopwords " + fmt(o.overlap_with_stopwords));
    } else {
      c.check(std::abs(o.overlap_without_stopwords - row.without) <= 0.08,
              tag + " overlap without stopwords " + fmt(o.overlap_without_stopwords));
      c.check(std::abs(o.overlap_with_stopwords - row.with) <= 0.08,
              tag + " overlap with stopwords " + fmt(o.overlap_with_stopwords));
    }
    c.notes.push_back(tag + " " + std::to_string(r.train.size()) + "/" +
                      std::to_string(r.test.size()) + " " + fmt(o.overlap_without_stopwords, 2) +
                      "/" + fmt(o.overlap_with_stopwords, 2));
  }
  return c.outcome();
}

// 6. SWEM matcher.
Outcome swem_matcher() {
  Checker c;
  const auto data = testing::make_separable_data(kSwemDimension, 3000, 600, 13);
  SwemTrainConfig cfg;
  cfg.seed = 13;
  const auto start = Clock::now();
  const auto a = train_swem_matcher(data.train, data.embeddings, cfg);
  const double s = seconds_since(start);
  const auto b = train_swem_matcher(data.train, data.embeddings, cfg);
  const auto report = evaluate_matcher(MatcherKind::kModel, data.test, &a.matcher);
  c.check(cfg.epochs == 20 && cfg.batch_size == 64, "training defaults are not 20 x 64");
  c.check(report.macro >= 0.95, "macro F1 " + fmt(report.macro));
  c.check(a.matcher.weights() == b.matcher.weights(), "weights differ between runs");
  c.check(s < 60.0, "training took " + fmt(s) + " s");
  c.notes.push_back("synthetic macro F1 " + fmt(report.macro) + " in " + fmt(s, 2) + " s");

  const char* glove = env("KOGITO_GLOVE_PATH");
  const auto atomic = glove ? load_atomic() : std::nullopt;
  if (!glove || !atomic) {
    c.notes.push_back("full-data part SKIP (KOGITO_GLOVE_PATH/KOGITO_ATOMIC2020_DIR not set)");
    return c.outcome();
  }
  const auto reg = RelationRegistry::builtin();
  ResplitConfig split;
  split.n = 0;
  const auto d0 = resplit_dataset(atomic_pool(*atomic, reg), split);
  const auto table = std::make_shared<const EmbeddingTable>(EmbeddingTable::load(glove));
  SwemTrainConfig full;
  full.dim = table->dim();
  const auto model = train_swem_matcher(d0.train, table, full);
  const double ood = evaluate_matcher(MatcherKind::kModel, d0.test, &model.matcher).macro;
  c.check(std::abs(ood - 0.76) <= 0.05, "full-data OOD macro F1 " + fmt(ood));
  c.notes.push_back("full-data OOD macro F1 " + fmt(ood));
  return c.outcome();
}

// 7. Metric oracles.
Outcome metric_oracles() {
  Checker c;
  auto near = [&](double got, double want, const std::string& what) {
    c.check(std::abs(got - want) <= 1e-6, what + " = " + fmt(got, 9) + ", want " + fmt(want, 9));
  };
  const std::vector<std::string> same = {"the cat sat on the mat", "a dog ran far away today"};
  const References same_refs = {{same[0]}, {same[1]}};
  near(corpus_bleu(same, same_refs), 1.0, "identity BLEU");
  near(corpus_rouge_l(same, same_refs), 1.0, "identity ROUGE-L");
  MetricParams unigram;
  unigram.bleu_max_order = 1;
  // Clipped count 1 of 4, no brevity penalty.
  near(corpus_bleu({"the the the the"}, {{"the cat sat"}}, unigram), 0.25, "BLEU-1");
  // LCS 2 ("the gunman"): P = R = 0.5.
  near(corpus_rouge_l({"police killed the gunman"}, {{"the gunman killed police"}}), 0.5,
       "ROUGE-L");
  // No n-gram shared between the two items: cosine 1 at every order.
  near(corpus_cider(same, same_refs), 10.0, "identity CIDEr");
  return c.outcome();
}

// 8. Few-shot prompt.
Outcome prompt_box() {
  Checker c;
  const auto rels = load_relations_file(testing::data_dir() / "x_wishes.json");
  const auto samples = read_graph_file(testing::data_dir() / "x_wishes_samples.jsonl");
  const auto expected = testing::read_text(testing::data_dir() / "x_wishes_prompt.txt");
  const auto got =
      build_few_shot_prompt(rels.at(0), samples, KnowledgeHead("Isaac makes a huge mistake"));
  c.check(samples.size() == 5, "expected five samples");
  c.check(got == expected, "prompt differs");
  c.notes.push_back(std::to_string(got.size()) + " bytes identical");
  return c.outcome();
}

// 9. End-to-end golden run.
Outcome golden_run() {
  Checker c;
  const std::string sentence = "PersonX becomes a great basketball player";
  const auto start = Clock::now();
  PipelineConfig dry;
  dry.dry_run = true;
  const auto golden = testing::read_text(testing::data_dir() / "golden_dry_run.jsonl");
  const auto graph = infer(sentence, dry);
  c.check(serialize_graph(graph, GraphFormat::kJsonl) == golden, "dry run differs from golden");
  std::set<std::string> heads;
  for (const auto& t : graph) {
    heads.insert(t.head().text());
    c.check(t.tails().empty(), "dry run produced a tail");
  }
  c.check(heads.count(sentence) && heads.count("basketball player"), "missing expected heads");
  const auto full = infer(sentence, PipelineConfig{});
  const StubModel stub;
  c.check(full.size() == graph.size(), "stub run changed the tuple count");
  for (const auto& t : full)
    c.check(t.tails() == std::vector<std::string>{stub.tail_for(t)}, "tail not from template");
  const double s = seconds_since(start);
  c.check(s < 2.0, "took " + fmt(s) + " s");
  c.notes.push_back(std::to_string(graph.size()) + " tuples, " + fmt(s, 3) + " s");
  return c.outcome();
}

// 10. Filter properties.
Outcome filter_properties() {
  Checker c;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> gauss;
  auto table = std::make_shared<EmbeddingTable>(8);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) {
    words.push_back("w" + std::to_string(i));
    std::vector<double> v(8);
    for (auto& x : v) x = gauss(rng);
    table->add(words.back(), v);
  }
  const EmbeddingCosineScorer scorer(table, nullptr);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), size(1, 15), len(1, 4);
  std::uniform_real_distribution<double> unit(0, 1);
  auto phrase = [&] {
    std::string s;
    for (std::size_t k = len(rng); k > 0; --k) s += (s.empty() ? "" : " ") + words[pick(rng)];
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    KnowledgeGraph g;
    for (std::size_t i = size(rng); i > 0; --i)
      g.add(KnowledgeTuple(KnowledgeHead(phrase()), "rel", {phrase()}));
    const auto context = phrase();
    double lo = unit(rng), hi = unit(rng);
    if (lo > hi) std::swap(lo, hi);
    const auto a = filter_graph(g, context, scorer, {lo});
    const auto b = filter_graph(g, context, scorer, {hi});
    c.check(is_subset(b.kept, a.kept), "fixture " + std::to_string(trial) + " not monotone");
    const auto& t = g[0];
    c.check(scorer.score(scorer.fact_text(t), t).value == 1.0,
            "identical text scored " + fmt(scorer.score(scorer.fact_text(t), t).value, 17));
  }
  c.notes.push_back("200 fixtures monotone, identical text = 1.0");
  return c.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"graph algebra property suite", graph_algebra},
      {"heuristic matcher pairings", heuristic_pairings},
      {"sample head group labels", sample_head_labels},
      {"resplit correctness at desk scale", resplit_desk_scale},
      {"full-data resplit overlaps", full_data_overlap},
      {"SWEM matcher", swem_matcher},
      {"metric oracles", metric_oracles},
      {"few-shot prompt byte-exact", prompt_box},
      {"end-to-end golden run", golden_run},
      {"filter properties", filter_properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* label = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL"
                                                                                        : "SKIP";
    if (o.status == Status::kFail) ++failed;
    std::printf("%s %2zu %s%s%s\n", label, i + 1, criteria[i].name, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
