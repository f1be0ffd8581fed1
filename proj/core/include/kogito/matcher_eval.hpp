#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>

#include "kogito/matcher_dataset.hpp"
#include "kogito/relation_matching.hpp"

namespace kogito {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// F1 = 2tp / (2tp + fp + fn); 1.0 when there is nothing to find and
// nothing was predicted.
double f1_score(const ConfusionCounts& c);

struct F1Report {
  std::array<ConfusionCounts, kNumGroups> counts{};
  std::array<double, kNumGroups> per_group{};  // physical, social, event
  double macro = 0.0;
  double micro = 0.0;
  std::size_t examples = 0;
};

using GroupPredictor = std::function<GroupLabels(const std::string& head)>;

F1Report evaluate_predictions(const MatcherDataset& dataset,
                              const GroupPredictor& predict);

// Base predicts all three groups; heuristic uses the head form; model
// thresholds the matcher's probabilities (no heuristic fallback).
F1Report evaluate_matcher(MatcherKind kind, const MatcherDataset& dataset,
                          const SwemMatcher* model = nullptr);

}  // namespace kogito
