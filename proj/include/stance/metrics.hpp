#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "stance/labels.hpp"

namespace stance {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ConfusionCounts confusion_for_class(const std::vector<int>& golds,
                                    const std::vector<int>& preds, int cls);

// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R); zero denominators give 0.
ClassScore f1_per_class(const std::vector<int>& golds,
                        const std::vector<int>& preds, int cls);

// Mean of F1(FAVOR) and F1(AGAINST) over the pooled predictions.
double official_score(const std::vector<int>& golds,
                      const std::vector<int>& preds);

// Squared Pearson correlation; throws DataError("degenerate") when either
// side has zero variance or fewer than two points are given.
double r_squared(const std::vector<double>& xs, const std::vector<double>& ys);

struct EvalReport {
  std::vector<std::string> topics;  // first-appearance order
  std::map<std::string, std::array<ClassScore, kNumStanceClasses>> per_topic;
  ClassScore pooled_favor;
  ClassScore pooled_against;
  double official = 0.0;
  std::map<std::string, std::array<long, kNumStanceClasses>> train_counts;
  double r2 = 0.0;
  bool has_r2 = false;
};

// Builds the full report. train_counts (per topic, per class) may be empty;
// when present, r2 correlates FAVOR/AGAINST training counts with the
// matching per-topic F1 scores.
EvalReport build_report(
    const std::vector<int>& golds, const std::vector<int>& preds,
    const std::vector<std::string>& topics,
    const std::map<std::string, std::array<long, kNumStanceClasses>>&
        train_counts = {});

std::string render_report(const EvalReport& report);
std::string report_json(const EvalReport& report);
// One row per (topic, class): topic, class, train_count, precision, recall, f1.
std::string report_csv(const EvalReport& report);

}  // namespace stance
