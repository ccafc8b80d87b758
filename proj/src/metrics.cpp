#include "stance/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "stance/error.hpp"

#include <nlohmann/json.hpp>

namespace stance {

ConfusionCounts confusion_for_class(const std::vector<int>& golds,
                                    const std::vector<int>& preds, int cls) {
  if (golds.size() != preds.size()) {
    throw DataError("gold/prediction length mismatch");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool g = golds[i] == cls;
    const bool p = preds[i] == cls;
    if (g && p) ++c.tp;
    if (!g && p) ++c.fp;
    if (g && !p) ++c.fn;
  }
  return c;
}

ClassScore f1_per_class(const std::vector<int>& golds,
                        const std::vector<int>& preds, int cls) {
  const ConfusionCounts c = confusion_for_class(golds, preds, cls);
  ClassScore s;
  if (c.tp + c.fp > 0) {
    s.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn > 0) {
    s.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

double official_score(const std::vector<int>& golds,
                      const std::vector<int>& preds) {
  if (golds.empty()) throw DataError("empty evaluation input");
  const ClassScore favor = f1_per_class(golds, preds, kFavor);
  const ClassScore against = f1_per_class(golds, preds, kAgainst);
  return (favor.f1 + against.f1) / 2.0;
}

double r_squared(const std::vector<double>& xs,
                 const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw DataError("degenerate: point count mismatch");
  }
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 2) throw DataError("degenerate: fewer than two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("degenerate: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return r * r;
}

EvalReport build_report(
    const std::vector<int>& golds, const std::vector<int>& preds,
    const std::vector<std::string>& topics,
    const std::map<std::string, std::array<long, kNumStanceClasses>>&
        train_counts) {
  if (golds.size() != preds.size() || golds.size() != topics.size()) {
    throw DataError("gold/prediction/topic length mismatch");
  }
  if (golds.empty()) throw DataError("empty evaluation input");
  EvalReport report;
  for (const std::string& topic : topics) {
    if (report.per_topic.find(topic) == report.per_topic.end()) {
      report.topics.push_back(topic);
      report.per_topic[topic] = {};
    }
  }
  for (const std::string& topic : report.topics) {
    std::vector<int> g, p;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      if (topics[i] == topic) {
        g.push_back(golds[i]);
        p.push_back(preds[i]);
      }
    }
    for (int cls = 0; cls < kNumStanceClasses; ++cls) {
      report.per_topic[topic][static_cast<std::size_t>(cls)] =
          f1_per_class(g, p, cls);
    }
  }
  report.pooled_favor = f1_per_class(golds, preds, kFavor);
  report.pooled_against = f1_per_class(golds, preds, kAgainst);
  report.official = (report.pooled_favor.f1 + report.pooled_against.f1) / 2.0;
  report.train_counts = train_counts;
  if (!train_counts.empty()) {
    std::vector<double> xs, ys;
    for (const std::string& topic : report.topics) {
      const auto it = train_counts.find(topic);
      if (it == train_counts.end()) continue;
      for (int cls : {kFavor, kAgainst}) {
        xs.push_back(static_cast<double>(it->second[static_cast<std::size_t>(cls)]));
        ys.push_back(report.per_topic[topic][static_cast<std::size_t>(cls)].f1);
      }
    }
    try {
      report.r2 = r_squared(xs, ys);
      report.has_r2 = true;
    } catch (const DataError&) {
      report.has_r2 = false;
    }
  }
  return report;
}

std::string render_report(const EvalReport& report) {
  std::size_t width = 21;
  for (const std::string& topic : report.topics) {
    width = std::max(width, topic.size());
  }
  const auto col = static_cast<int>(width + 1);
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(col) << "topic"
      << "class     precision  recall     f1\n";
  for (const std::string& topic : report.topics) {
    for (int cls = 0; cls < kNumStanceClasses; ++cls) {
      const ClassScore& s = report.per_topic.at(topic)[static_cast<std::size_t>(cls)];
      out << std::left << std::setw(col) << topic << std::setw(10)
          << stance_name(cls) << std::right << std::setw(9) << s.precision
          << "  " << std::setw(9) << s.recall << "  " << std::setw(9) << s.f1
          << "\n";
    }
  }
  out << "\npooled F1(FAVOR)   = " << report.pooled_favor.f1 << "\n";
  out << "pooled F1(AGAINST) = " << report.pooled_against.f1 << "\n";
  out << "official score     = " << report.official << "\n";
  if (report.has_r2) {
    out << "r^2(count, F1)     = " << report.r2 << "\n";
  }
  return out.str();
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["official_score"] = report.official;
  j["pooled"]["FAVOR"] = {{"precision", report.pooled_favor.precision},
                          {"recall", report.pooled_favor.recall},
                          {"f1", report.pooled_favor.f1}};
  j["pooled"]["AGAINST"] = {{"precision", report.pooled_against.precision},
                            {"recall", report.pooled_against.recall},
                            {"f1", report.pooled_against.f1}};
  j["topics"] = nlohmann::json::array();
  for (const std::string& topic : report.topics) {
    nlohmann::json t;
    t["topic"] = topic;
    for (int cls = 0; cls < kNumStanceClasses; ++cls) {
      const ClassScore& s = report.per_topic.at(topic)[static_cast<std::size_t>(cls)];
      t["classes"][stance_name(cls)] = {{"precision", s.precision},
                                        {"recall", s.recall},
                                        {"f1", s.f1}};
    }
    const auto counts = report.train_counts.find(topic);
    if (counts != report.train_counts.end()) {
      for (int cls = 0; cls < kNumStanceClasses; ++cls) {
        t["train_counts"][stance_name(cls)] =
            counts->second[static_cast<std::size_t>(cls)];
      }
    }
    j["topics"].push_back(t);
  }
  if (report.has_r2) j["r_squared"] = report.r2;
  return j.dump(2) + "\n";
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "topic,class,train_count,precision,recall,f1\n";
  out << std::setprecision(10);
  for (const std::string& topic : report.topics) {
    for (int cls = 0; cls < kNumStanceClasses; ++cls) {
      const ClassScore& s = report.per_topic.at(topic)[static_cast<std::size_t>(cls)];
      long count = -1;
      const auto counts = report.train_counts.find(topic);
      if (counts != report.train_counts.end()) {
        count = counts->second[static_cast<std::size_t>(cls)];
      }
      out << topic << "," << stance_name(cls) << ",";
      if (count >= 0) out << count;
      out << "," << s.precision << "," << s.recall << "," << s.f1 << "\n";
    }
  }
  return out.str();
}

}  // namespace stance
