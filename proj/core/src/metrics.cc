// Copyright 2026 The AIGV Bench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aigv/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "aigv/error.h"

namespace aigv {

namespace {

void check_inputs(std::span<const double> gt, std::span<const double> pred) {
  if (gt.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, "vectors of length " + std::to_string(gt.size()) +
                                                " and " + std::to_string(pred.size()));
  }
  if (gt.size() < 2) {
    throw Error(ErrorCode::kDegenerateConstantInput, "correlation needs at least two items");
  }
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(gt) || constant(pred)) {
    throw Error(ErrorCode::kDegenerateConstantInput, "correlation of a constant vector");
  }
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  // sqrt(a * a) == |a| exactly in binary floating point, so perfectly
  // (anti)correlated inputs with exact deviations give exactly +-1.
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

bool has_ties(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

// Number of tied pairs, sum over tie groups of t (t - 1) / 2, in a range
// already sorted so that equal keys are adjacent.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run = first;
    std::int64_t t = 0;
    while (run != last && eq(*run, *first)) {
      ++run;
      ++t;
    }
    total += t * (t - 1) / 2;
    first = run;
  }
  return total;
}

// Merge sort that counts strict inversions.
std::int64_t sort_count_swaps(std::vector<double>& v, std::vector<double>& scratch,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = sort_count_swaps(v, scratch, lo, mid) + sort_count_swaps(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::vector<double> values_of(const ScoreVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.value);
  return out;
}

void check_aligned(const ScoreVector& gt, const ScoreVector& pred) {
  if (gt.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, "score vectors of length " +
                                                std::to_string(gt.size()) + " and " +
                                                std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].video_id != pred[i].video_id) {
      throw Error(ErrorCode::kLengthMismatch, "score vectors disagree at position " +
                                                  std::to_string(i) + ": " + gt[i].video_id +
                                                  " vs " + pred[i].video_id);
    }
  }
}

}  // namespace

std::vector<double> rank(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of 1-based ranks i+1..j+1.
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> gt, std::span<const double> pred) {
  check_inputs(gt, pred);
  const auto rg = rank(gt);
  const auto rp = rank(pred);
  if (!has_ties(gt) && !has_ties(pred)) {
    const double n = static_cast<double>(gt.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < rg.size(); ++i) d2 += (rg[i] - rp[i]) * (rg[i] - rp[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
  }
  return pearson(rg, rp);
}

double plcc(std::span<const double> gt, std::span<const double> pred) {
  check_inputs(gt, pred);
  return pearson(gt, pred);
}

double krcc(std::span<const double> gt, std::span<const double> pred, KendallVariant variant) {
  check_inputs(gt, pred);
  const std::size_t n = gt.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gt[a] < gt[b] || (gt[a] == gt[b] && pred[a] < pred[b]);
  });

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t n1 = tied_pairs(order.begin(), order.end(),
                                     [&](std::size_t a, std::size_t b) { return gt[a] == gt[b]; });
  const std::int64_t n3 = tied_pairs(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gt[a] == gt[b] && pred[a] == pred[b];
  });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = pred[order[i]];
  std::vector<double> scratch(n);
  const std::int64_t discordant = sort_count_swaps(ys, scratch, 0, n);
  const std::int64_t n2 =
      tied_pairs(ys.begin(), ys.end(), [](double a, double b) { return a == b; });

  const std::int64_t untied = n0 - n1 - n2 + n3;  // C + D
  const auto c_minus_d = static_cast<double>(untied - 2 * discordant);
  if (variant == KendallVariant::kTauB) {
    const double denom =
        std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
    return std::clamp(c_minus_d / denom, -1.0, 1.0);
  }
  return c_minus_d / static_cast<double>(n0);
}

double srcc(const ScoreVector& gt, const ScoreVector& pred) {
  check_aligned(gt, pred);
  return srcc(values_of(gt), values_of(pred));
}

double plcc(const ScoreVector& gt, const ScoreVector& pred) {
  check_aligned(gt, pred);
  return plcc(values_of(gt), values_of(pred));
}

double krcc(const ScoreVector& gt, const ScoreVector& pred, KendallVariant variant) {
  check_aligned(gt, pred);
  return krcc(values_of(gt), values_of(pred), variant);
}

MetricReport evaluate_scores(const std::map<Dimension, ScoreVector>& pred,
                             const std::map<Dimension, ScoreVector>& gt, KendallVariant variant) {
  MetricReport report;
  for (const auto& [dim, truth] : gt) {
    const auto it = pred.find(dim);
    if (it == pred.end()) {
      throw Error(ErrorCode::kMissingPrediction,
                  "no predictions for dimension " + std::string(to_string(dim)));
    }
    MetricRow row;
    row.srcc = srcc(truth, it->second);
    row.plcc = plcc(truth, it->second);
    row.krcc = krcc(truth, it->second, variant);
    report.emplace(dim, row);
  }
  return report;
}

ScoreVector align_to(const ScoreVector& gt, const ScoreVector& pred) {
  if (gt.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ground truth has " + std::to_string(gt.size()) +
                                                " items, predictions " +
                                                std::to_string(pred.size()));
  }
  std::unordered_map<std::string, double> by_id;
  for (const auto& e : pred) by_id.emplace(e.video_id, e.value);
  ScoreVector out;
  out.reserve(gt.size());
  for (const auto& e : gt) {
    const auto it = by_id.find(e.video_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMissingPrediction, "no prediction for " + e.video_id);
    }
    out.push_back({e.video_id, it->second});
  }
  return out;
}

}  // namespace aigv
