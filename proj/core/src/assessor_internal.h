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

// Shared between the forward pass and the gradient code. Not installed.

#include <vector>

#include "aigv/assessor.h"

namespace aigv::internal {

struct ForwardCache {
  Matrix tokens;                  // T x d_token
  std::vector<double> u_spatial;  // mean token
  std::vector<double> u_pool;     // max token
  std::vector<int> pool_argmax;   // frame index per column
  std::vector<double> mean_fast;  // mean fast descriptor (6)
  std::vector<double> mean_slow;  // mean slow descriptor (6)
  std::vector<double> prompt;     // embedded prompt
  std::vector<double> fused;      // 4 * d_token
  std::vector<double> pre;        // fusion pre-activation
  std::vector<double> hidden;
  std::vector<double> logits;  // 4 * 5, dimension-major
  std::vector<double> scores;  // 4
};

void check_features(const AssessorConfig& config, const ClipFeatures& features);

// Fills every field of `cache`.
void forward_cached(const AssessorParams& params, const AssessorConfig& config,
                    const ClipFeatures& features, std::span<const double> prompt_vec,
                    ForwardCache& cache);

struct JudgeCache {
  std::vector<double> delta;  // h_a - h_b
  std::vector<double> act;    // tanh(delta U1)
  std::vector<double> logits;  // act U2
  std::vector<double> probs;  // sigmoid(act U2)
};

void judge_cached(const AssessorParams& params, std::span<const double> hidden_a,
                  std::span<const double> hidden_b, JudgeCache& cache);

// Stage-3 loss over precomputed hidden states; accumulates into `grad` when
// it is non-null. Errors: kEmptyDataset, kOutOfRange.
double pair_stage(const AssessorParams& params, std::span<const std::vector<double>> hidden,
                  std::span<const PairSample> pairs, AssessorParams* grad);

double gelu(double x);
double gelu_derivative(double x);
double sigmoid(double x);

}  // namespace aigv::internal
