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

#pragma once

// Brute-force reference implementations used as test oracles. They follow
// the textbook definitions directly and share no code with the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace aigv::testing {

struct OracleRating {
  std::string subject;
  std::string video;
  int dimension = 0;
  int score = 0;
};

// (video, dimension) -> (mos, rater count). Constant raters are skipped.
inline std::map<std::pair<std::string, int>, std::pair<double, int>> oracle_mos(
    const std::vector<OracleRating>& ratings) {
  std::map<std::pair<std::string, int>, std::vector<double>> rescaled;
  std::map<std::pair<std::string, int>, std::vector<const OracleRating*>> by_subject;
  for (const auto& r : ratings) by_subject[{r.subject, r.dimension}].push_back(&r);
  for (const auto& [key, rs] : by_subject) {
    double sum = 0.0;
    for (const auto* r : rs) sum += r->score;
    const double mean = sum / static_cast<double>(rs.size());
    double ss = 0.0;
    for (const auto* r : rs) ss += (r->score - mean) * (r->score - mean);
    const double sd = std::sqrt(ss / static_cast<double>(rs.size() - 1));
    if (sd == 0.0) continue;
    for (const auto* r : rs) {
      const double z = (r->score - mean) / sd;
      double zp = 100.0 * (z + 3.0) / 6.0;
      zp = std::min(100.0, std::max(0.0, zp));
      rescaled[{r->video, r->dimension}].push_back(zp);
    }
  }
  std::map<std::pair<std::string, int>, std::pair<double, int>> out;
  for (const auto& [key, zs] : rescaled) {
    double s = 0.0;
    for (double z : zs) s += z;
    out[key] = {s / static_cast<double>(zs.size()), static_cast<int>(zs.size())};
  }
  return out;
}

// Average rank by counting: 1 + (#smaller) + (#equal - 1) / 2.
inline std::vector<double> oracle_rank(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    int less = 0, equal = 0;
    for (double x : v) {
      if (x < v[i]) ++less;
      if (x == v[i]) ++equal;
    }
    r[i] = 1.0 + less + (equal - 1) / 2.0;
  }
  return r;
}

inline double oracle_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double oracle_spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return oracle_pearson(oracle_rank(a), oracle_rank(b));
}

// O(N^2) pair count. tau_b when `tau_b` is set, else tau_a.
inline double oracle_kendall(const std::vector<double>& a, const std::vector<double>& b,
                             bool tau_b = false) {
  const std::size_t n = a.size();
  double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0) ++ties_a;
      if (db == 0) ++ties_b;
      if (da * db > 0) ++concordant;
      if (da * db < 0) ++discordant;
    }
  }
  const double n0 = n * (n - 1) / 2.0;
  if (tau_b) return (concordant - discordant) / std::sqrt((n0 - ties_a) * (n0 - ties_b));
  return (concordant - discordant) / n0;
}

}  // namespace aigv::testing
