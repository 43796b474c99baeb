#include "qfraud/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qfraud/text_io.hpp"

namespace qfraud {
namespace {

// Cumulative (tp, fp) after admitting each block of equal scores, highest first.
struct SweepStep {
  double threshold;
  std::size_t tp;
  std::size_t fp;
};

std::vector<SweepStep> sweep(const ScoredSet& s) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.scores[a] > s.scores[b]; });
  std::vector<SweepStep> steps;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = s.scores[order[i]];
    while (i < order.size() && s.scores[order[i]] == t) {
      (s.labels[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    steps.push_back({t, tp, fp});
  }
  return steps;
}

double f1_from(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

void require_both_classes(const ScoredSet& s, const char* what) {
  const auto pos = s.positives();
  if (pos == 0 || pos == s.size()) {
    throw std::invalid_argument(std::string(what) + ": both classes must be present");
  }
}

}  // namespace

std::size_t ScoredSet::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

void ScoredSet::validate() const {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scored set: scores and labels differ in length");
  }
  for (double v : scores) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("scored set: score outside [0, 1]");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw std::invalid_argument("scored set: label must be 0 or 1");
  }
}

Confusion confusion(const ScoredSet& s, double threshold) {
  s.validate();
  Confusion c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool predicted = s.scores[i] >= threshold;
    if (s.labels[i] == 1) {
      (predicted ? c.tp : c.fn)++;
    } else {
      (predicted ? c.fp : c.tn)++;
    }
  }
  return c;
}

double precision(const Confusion& c) {
  return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const Confusion& c) {
  return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f1_score(const Confusion& c) { return f1_from(c.tp, c.fp, c.fn); }

RocCurve roc_curve(const ScoredSet& s) {
  s.validate();
  require_both_classes(s, "roc_curve");
  const double pos = static_cast<double>(s.positives());
  const double neg = static_cast<double>(s.size()) - pos;
  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  for (const auto& step : sweep(s)) {
    roc.points.push_back({static_cast<double>(step.fp) / neg, static_cast<double>(step.tp) / pos});
  }
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto& a = roc.points[i - 1];
    const auto& b = roc.points[i];
    roc.auc += (b.x - a.x) * (a.y + b.y) / 2.0;
  }
  return roc;
}

PrCurve pr_curve(const ScoredSet& s) {
  s.validate();
  const double pos = static_cast<double>(s.positives());
  if (pos == 0) throw std::invalid_argument("pr_curve: at least one positive is required");
  PrCurve pr;
  double prev_recall = 0.0;
  for (const auto& step : sweep(s)) {
    const double r = static_cast<double>(step.tp) / pos;
    const double p = static_cast<double>(step.tp) / static_cast<double>(step.tp + step.fp);
    pr.points.push_back({r, p});
    pr.auc += (r - prev_recall) * p;
    prev_recall = r;
  }
  return pr;
}

double optimal_threshold(const ScoredSet& s) {
  s.validate();
  require_both_classes(s, "optimal_threshold");
  const std::size_t pos = s.positives();
  double best_f1 = -1.0, best_t = 0.0;
  for (const auto& step : sweep(s)) {
    const double f1 = f1_from(step.tp, step.fp, pos - step.tp);
    if (f1 > best_f1) {
      best_f1 = f1;
      best_t = step.threshold;
    }
  }
  return best_t;
}

EvalReport evaluate(const ScoredSet& s, double threshold) {
  EvalReport r;
  r.threshold = threshold;
  r.n = s.size();
  r.counts = confusion(s, threshold);
  const auto& c = r.counts;
  r.accuracy_pct = r.n == 0 ? 0.0 : 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(r.n);
  r.precision_pct = 100.0 * precision(c);
  r.recall_pct = 100.0 * recall(c);
  r.f1 = f1_score(c);
  r.roc = roc_curve(s);
  r.pr = pr_curve(s);
  return r;
}

std::string format_report(const EvalReport& r) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  kv("threshold", format_double(r.threshold));
  kv("n", std::to_string(r.n));
  kv("tp", std::to_string(r.counts.tp));
  kv("fp", std::to_string(r.counts.fp));
  kv("tn", std::to_string(r.counts.tn));
  kv("fn", std::to_string(r.counts.fn));
  kv("accuracy_pct", format_double(r.accuracy_pct));
  kv("precision_pct", format_double(r.precision_pct));
  kv("recall_pct", format_double(r.recall_pct));
  kv("f1", format_double(r.f1));
  kv("auc_roc", format_double(r.roc.auc));
  kv("auc_pr", format_double(r.pr.auc));
  kv("auc_pr_estimator", "step");
  auto points = [](const std::vector<CurvePoint>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ';';
      s += format_double(pts[i].x) + ':' + format_double(pts[i].y);
    }
    return s;
  };
  kv("roc_points", points(r.roc.points));
  kv("pr_points", points(r.pr.points));
  return out;
}

std::string format_curve_csv(const std::vector<CurvePoint>& points, const std::string& x_name,
                             const std::string& y_name) {
  std::string out = x_name + ',' + y_name + '\n';
  for (const auto& p : points) out += format_double(p.x) + ',' + format_double(p.y) + '\n';
  return out;
}

}  // namespace qfraud
