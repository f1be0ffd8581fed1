#include "kogito/matcher_eval.hpp"

#include "kogito/error.hpp"

namespace kogito {

double f1_score(const ConfusionCounts& c) {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

F1Report evaluate_predictions(const MatcherDataset& dataset,
                              const GroupPredictor& predict) {
  F1Report report;
  report.examples = dataset.size();
  for (const auto& e : dataset) {
    const GroupLabels predicted = predict(e.head);
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      const bool p = predicted[g];
      const bool y = e.labels[g];
      auto& c = report.counts[g];
      c.tp += p && y;
      c.fp += p && !y;
      c.fn += !p && y;
    }
  }
  ConfusionCounts total;
  double sum = 0;
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    report.per_group[g] = f1_score(report.counts[g]);
    sum += report.per_group[g];
    total.tp += report.counts[g].tp;
    total.fp += report.counts[g].fp;
    total.fn += report.counts[g].fn;
  }
  report.macro = sum / static_cast<double>(kNumGroups);
  report.micro = f1_score(total);
  return report;
}

F1Report evaluate_matcher(MatcherKind kind, const MatcherDataset& dataset,
                          const SwemMatcher* model) {
  switch (kind) {
    case MatcherKind::kBase:
      return evaluate_predictions(dataset,
                                  [](const std::string&) { return GroupLabels::all(); });
    case MatcherKind::kHeuristic:
      return evaluate_predictions(dataset, [](const std::string& h) {
        return heuristic_groups(KnowledgeHead(h));
      });
    case MatcherKind::kModel:
      if (model == nullptr)
        throw ConfigurationError("model matcher selected but no model loaded");
      return evaluate_predictions(dataset, [model](const std::string& h) {
        return model->predict_labels(KnowledgeHead(h));
      });
  }
  return {};
}

}  // namespace kogito
