#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qfraud {

struct ScoredSet {
  std::vector<double> scores;  // in [0, 1]
  std::vector<int> labels;     // 0 or 1

  std::size_t size() const { return scores.size(); }
  std::size_t positives() const;
  void validate() const;
};

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// (FPR, TPR) points from (0, 0) to (1, 1), one per distinct score taken as
/// threshold in descending order, and the trapezoidal area under them.
struct RocCurve {
  std::vector<CurvePoint> points;
  double auc = 0.0;
};

/// (recall, precision) points, one per distinct score in descending order,
/// and the step-wise area sum_i (R_i - R_{i-1}) P_i with R_0 = 0.
struct PrCurve {
  std::vector<CurvePoint> points;
  double auc = 0.0;
};

/// Predicts positive iff score >= threshold.
Confusion confusion(const ScoredSet& s, double threshold);

double precision(const Confusion& c);  // 0 when nothing is predicted positive
double recall(const Confusion& c);     // 0 when there are no positives
double f1_score(const Confusion& c);

RocCurve roc_curve(const ScoredSet& s);
PrCurve pr_curve(const ScoredSet& s);

/// Distinct score maximising F1; ties go to the larger threshold.
double optimal_threshold(const ScoredSet& s);

struct EvalReport {
  double threshold = 0.5;
  std::size_t n = 0;
  Confusion counts;
  double accuracy_pct = 0.0;
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double f1 = 0.0;
  RocCurve roc;
  PrCurve pr;
};

EvalReport evaluate(const ScoredSet& s, double threshold);

/// `key = value` lines followed by the two point lists.
std::string format_report(const EvalReport& r);
std::string format_curve_csv(const std::vector<CurvePoint>& points, const std::string& x_name,
                             const std::string& y_name);

}  // namespace qfraud
