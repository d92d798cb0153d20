// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "sslkit/common/errors.hpp"

namespace sslkit::eval {

std::vector<double> EvalConfig::default_thresholds() {
  std::vector<double> xi;
  xi.reserve(101);
  xi.push_back(0.005);
  for (int i = 1; i <= 99; ++i) xi.push_back(i / 100.0);
  xi.push_back(0.995);
  return xi;
}

std::vector<double> assign_errors(const std::vector<double>& predictions,
                                  const std::vector<double>& truths) {
  if (predictions.size() != truths.size()) {
    throw ContractError("assign_errors: set sizes differ");
  }
  const int n = static_cast<int>(truths.size());
  if (n > 4) throw ContractError("assign_errors: at most 4 sources");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  std::vector<double> best;
  double best_total = -1.0;
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      total += coding::angular_distance(predictions[perm[i]], truths[i]);
    }
    if (best_total < 0.0 || total < best_total) {
      best_total = total;
      best.resize(n);
      for (int i = 0; i < n; ++i) {
        best[i] = coding::angular_distance(predictions[perm[i]], truths[i]);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

KnownNReport eval_known_n(const std::vector<coding::LikelihoodVector>& outputs,
                          const std::vector<std::vector<double>>& truths,
                          const EvalConfig& cfg) {
  if (outputs.size() != truths.size()) {
    throw ContractError("eval_known_n: outputs/truths length mismatch");
  }
  KnownNReport report;
  report.by_n.resize(5);
  for (size_t f = 0; f < outputs.size(); ++f) {
    const int n = static_cast<int>(truths[f].size());
    if (n == 0) continue;  // no-source frames are out of scope here
    if (n > 4) throw ContractError("eval_known_n: more than 4 sources");
    const std::vector<double> preds =
        coding::top_n(outputs[f], n, cfg.coding);
    const std::vector<double> errors = assign_errors(preds, truths[f]);

    KnownNBucket* buckets[2] = {&report.overall, &report.by_n[n]};
    for (KnownNBucket* b : buckets) {
      b->frames += 1;
      for (double e : errors) {
        b->matched += 1;
        b->error_sum += e;
        if (e < cfg.admissible_error_deg) b->correct += 1;
      }
    }
  }
  return report;
}

namespace {

struct Pair {
  double error;
  int pred;
  int truth;
};

// Greedy nearest-first one-to-one matching; returns the number of matched
// pairs with error below the admissible threshold.
long match_frame(const std::vector<double>& preds,
                 const std::vector<double>& truths, double admissible) {
  std::vector<Pair> pairs;
  pairs.reserve(preds.size() * truths.size());
  for (int p = 0; p < static_cast<int>(preds.size()); ++p) {
    for (int t = 0; t < static_cast<int>(truths.size()); ++t) {
      pairs.push_back({coding::angular_distance(preds[p], truths[t]), p, t});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.error != b.error) return a.error < b.error;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.truth < b.truth;
  });
  std::vector<bool> pred_used(preds.size(), false);
  std::vector<bool> truth_used(truths.size(), false);
  long correct = 0;
  for (const Pair& pr : pairs) {
    if (pred_used[pr.pred] || truth_used[pr.truth]) continue;
    pred_used[pr.pred] = true;
    truth_used[pr.truth] = true;
    if (pr.error < admissible) correct += 1;
  }
  return correct;
}

}  // namespace

PrCurve eval_unknown_n(const std::vector<coding::LikelihoodVector>& outputs,
                       const std::vector<std::vector<double>>& truths,
                       const EvalConfig& cfg) {
  if (outputs.size() != truths.size()) {
    throw ContractError("eval_unknown_n: outputs/truths length mismatch");
  }
  for (size_t i = 1; i < cfg.thresholds.size(); ++i) {
    if (!(cfg.thresholds[i] > cfg.thresholds[i - 1])) {
      throw ConfigError("eval: threshold grid must be strictly increasing");
    }
  }
  if (!cfg.thresholds.empty() &&
      !(cfg.thresholds.front() > 0.0 && cfg.thresholds.back() < 1.0)) {
    throw ConfigError("eval: thresholds must lie in (0, 1)");
  }

  PrCurve curve;
  curve.points.reserve(cfg.thresholds.size());
  for (double xi : cfg.thresholds) {
    coding::CodingParams params = cfg.coding;
    params.xi = xi;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    for (size_t f = 0; f < outputs.size(); ++f) {
      const std::vector<double> preds = coding::decode(outputs[f], params);
      const long correct =
          match_frame(preds, truths[f], cfg.admissible_error_deg);
      tp += correct;
      fp += static_cast<long>(preds.size()) - correct;
      fn += static_cast<long>(truths[f].size()) - correct;
    }
    PrPoint point;
    point.xi = xi;
    point.tp = tp;
    point.fp = fp;
    point.fn = fn;
    point.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
    point.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 1.0;
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace sslkit::eval
