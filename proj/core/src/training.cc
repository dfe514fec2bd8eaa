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

#include "aigv/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "aigv/error.h"
#include "aigv/random.h"
#include "aigv/store.h"
#include "assessor_internal.h"

namespace aigv {

namespace {

void sgd_step(AssessorParams& params, AssessorParams& velocity, const AssessorParams& grad,
              const std::vector<std::string>& names, double lr, double momentum) {
  for (const auto& name : names) {
    Matrix* p = params.find(name);
    Matrix* v = velocity.find(name);
    const Matrix* g = grad.find(name);
    for (std::size_t i = 0; i < p->size(); ++i) {
      v->data[i] = momentum * v->data[i] + g->data[i];
      p->data[i] -= lr * v->data[i];
    }
  }
  round_to_float(params);
}

}  // namespace

PairSample label_pair(std::size_t first, std::size_t second,
                      std::span<const TrainSample> samples, double dead_zone) {
  PairSample pair;
  pair.first = first;
  pair.second = second;
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    const double diff = samples[first].gt_scores[d] - samples[second].gt_scores[d];
    pair.valid[d] = std::abs(diff) >= dead_zone;
    pair.label[d] = diff > 0.0 ? 1.0 : 0.0;
  }
  return pair;
}

std::vector<PairSample> group_pairs(std::span<const TrainSample> samples,
                                    std::span<const std::string> group_keys, double dead_zone) {
  if (group_keys.size() != samples.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one group key per sample is required");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) groups[group_keys[i]].push_back(i);
  std::vector<PairSample> pairs;
  for (const auto& [key, members] : groups) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        PairSample p = label_pair(members[a], members[b], samples, dead_zone);
        if (std::any_of(p.valid.begin(), p.valid.end(), [](bool v) { return v; })) {
          pairs.push_back(p);
        }
      }
    }
  }
  return pairs;
}

std::vector<PairSample> sample_index_pairs(std::span<const TrainSample> samples,
                                           std::size_t count, std::uint64_t seed,
                                           double dead_zone) {
  std::vector<std::pair<std::size_t, std::size_t>> pool;
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = a + 1; b < samples.size(); ++b) pool.emplace_back(a, b);
  }
  if (count > pool.size()) {
    throw Error(ErrorCode::kSampleLargerThanPool, "asked for " + std::to_string(count) +
                                                      " pairs out of " +
                                                      std::to_string(pool.size()));
  }
  Rng rng(seed);
  partial_shuffle(std::span(pool), count, rng);
  std::vector<PairSample> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    pairs.push_back(label_pair(pool[i].first, pool[i].second, samples, dead_zone));
  }
  return pairs;
}

TrainResult train(const AssessorConfig& config, std::span<const TrainSample> samples,
                  std::span<const PairSample> pairs, std::span<const int> stages,
                  const std::function<void(const TrainLogEntry&)>& on_epoch) {
  return train_from(initialize_params(config), config, samples, pairs, stages, on_epoch);
}

TrainResult train_from(AssessorParams params, const AssessorConfig& config,
                       std::span<const TrainSample> samples, std::span<const PairSample> pairs,
                       std::span<const int> stages,
                       const std::function<void(const TrainLogEntry&)>& on_epoch) {
  config.validate();
  if (samples.empty()) throw Error(ErrorCode::kEmptyDataset, "no training samples");
  std::vector<int> order(stages.begin(), stages.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (const int stage : order) trained_parameters(config, stage);  // validates up front
  if (std::find(order.begin(), order.end(), 3) != order.end() && pairs.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "stage 3 needs preference pairs");
  }

  TrainResult result;
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  for (const int stage : order) {
    const auto names = trained_parameters(config, stage);
    const double lr = config.learning_rate[static_cast<std::size_t>(stage - 1)];
    const int epochs = config.epochs[static_cast<std::size_t>(stage - 1)];
    AssessorParams velocity = zero_params(config);
    Rng rng(Rng::mix(config.seed, 100 + static_cast<std::uint64_t>(stage)));

    if (stage == 3) {
      // The backbone is frozen here, so hidden states are fixed for the stage.
      std::vector<std::vector<double>> hidden;
      hidden.reserve(samples.size());
      for (const auto& s : samples) {
        hidden.push_back(forward(params, config, s.features, embed_prompt(params, s.prompt)).hidden);
      }
      std::vector<PairSample> work(pairs.begin(), pairs.end());
      for (int epoch = 1; epoch <= epochs; ++epoch) {
        shuffle(std::span(work), rng);
        double total = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < work.size(); start += batch_size) {
          const auto batch = std::span<const PairSample>(work).subspan(
              start, std::min(batch_size, work.size() - start));
          AssessorParams grad = zero_params(config);
          double loss = 0.0;
          try {
            loss = internal::pair_stage(params, hidden, batch, &grad);
          } catch (const Error& e) {
            if (e.code() == ErrorCode::kEmptyDataset) continue;  // batch of masked pairs
            throw;
          }
          sgd_step(params, velocity, grad, names, lr, config.momentum);
          total += loss;
          ++batches;
        }
        TrainLogEntry entry{stage, epoch, batches ? total / static_cast<double>(batches) : 0.0};
        result.log.push_back(entry);
        if (on_epoch) on_epoch(entry);
      }
      continue;
    }

    std::vector<std::size_t> index(samples.size());
    std::iota(index.begin(), index.end(), 0);
    std::vector<TrainSample> batch_samples;
    for (int epoch = 1; epoch <= epochs; ++epoch) {
      shuffle(std::span(index), rng);
      double total = 0.0;
      for (std::size_t start = 0; start < index.size(); start += batch_size) {
        const std::size_t stop = std::min(index.size(), start + batch_size);
        batch_samples.clear();
        for (std::size_t i = start; i < stop; ++i) batch_samples.push_back(samples[index[i]]);
        const StageGradient g = gradients(params, config, Batch{batch_samples, {}}, stage);
        sgd_step(params, velocity, g.grad, names, lr, config.momentum);
        total += g.loss * static_cast<double>(stop - start);
      }
      TrainLogEntry entry{stage, epoch, total / static_cast<double>(samples.size())};
      result.log.push_back(entry);
      if (on_epoch) on_epoch(entry);
    }
  }
  result.params = std::move(params);
  return result;
}

MetricReport evaluate_model(const AssessorParams& params, const AssessorConfig& config,
                            std::span<const TrainSample> samples,
                            std::span<const PairSample> pairs) {
  std::vector<Prediction> preds;
  preds.reserve(samples.size());
  for (const auto& s : samples) preds.push_back(predict(params, config, s.features, s.prompt));

  std::map<Dimension, ScoreVector> pred_scores, gt_scores;
  for (const Dimension d : kAllDimensions) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      pred_scores[d].push_back({samples[i].id, preds[i].scores[index_of(d)]});
      gt_scores[d].push_back({samples[i].id, samples[i].gt_scores[index_of(d)]});
    }
  }
  MetricReport report = evaluate_scores(pred_scores, gt_scores);

  if (!pairs.empty()) {
    std::array<double, kNumDimensions> credit{};
    std::array<std::size_t, kNumDimensions> total{};
    for (const auto& pair : pairs) {
      if (pair.first >= samples.size() || pair.second >= samples.size()) {
        throw Error(ErrorCode::kOutOfRange, "pair refers to a sample outside the test set");
      }
      const auto probs = judge_pair(params, preds[pair.first].hidden, preds[pair.second].hidden);
      for (std::size_t d = 0; d < kNumDimensions; ++d) {
        if (!pair.valid[d]) continue;
        ++total[d];
        if (probs[d] == 0.5) {
          credit[d] += 0.5;
        } else if ((probs[d] > 0.5) == (pair.label[d] > 0.5)) {
          credit[d] += 1.0;
        }
      }
    }
    for (const Dimension d : kAllDimensions) {
      const std::size_t i = index_of(d);
      if (total[i] > 0) report[d].pair_acc = credit[i] / static_cast<double>(total[i]);
    }
  }
  return report;
}

TrainSample make_sample(const ManifestEntry& entry, const VideoTensor& video,
                        const AssessorConfig& config) {
  TrainSample s;
  s.id = entry.id;
  s.features = extract_features(video, config);
  s.prompt = concept_code(entry.prompt_concept, config.prompt_buckets);
  s.gt_scores = entry.truth;
  s.gt_levels = entry.levels;
  return s;
}

namespace {

std::unordered_map<std::string, std::size_t> index_samples(std::span<const TrainSample> samples,
                                                           std::span<const std::string> group_keys,
                                                           std::vector<std::string>* ids) {
  if (group_keys.size() != samples.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one group key per sample is required");
  }
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!by_id.emplace(samples[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateRecord, "duplicate sample id " + samples[i].id);
    }
    if (ids) ids->push_back(samples[i].id);
  }
  return by_id;
}

}  // namespace

SplitRun run_split(const AssessorConfig& config, std::span<const TrainSample> samples,
                   std::span<const std::string> group_keys, std::uint64_t split_seed,
                   const ProtocolOptions& options,
                   const std::function<void(const TrainLogEntry&)>& on_epoch) {
  std::vector<std::string> ids;
  auto by_id = index_samples(samples, group_keys, &ids);
  SplitRun run;
  run.split = split_dataset(ids, split_seed);
  std::vector<TrainSample> train_set, test_set;
  std::vector<std::string> train_groups;
  for (const auto& id : run.split.train_ids) {
    train_set.push_back(samples[by_id[id]]);
    train_groups.push_back(group_keys[by_id[id]]);
  }
  for (const auto& id : run.split.test_ids) test_set.push_back(samples[by_id[id]]);

  const bool judged =
      std::find(options.stages.begin(), options.stages.end(), 3) != options.stages.end();
  std::vector<PairSample> train_pairs;
  if (judged) train_pairs = group_pairs(train_set, train_groups, options.dead_zone);
  run.trained = train(config, train_set, train_pairs, options.stages, on_epoch);
  const std::size_t available = test_set.size() * (test_set.size() - 1) / 2;
  const auto test_pairs = sample_index_pairs(test_set, std::min(options.test_pairs, available),
                                             split_seed, options.dead_zone);
  run.report = evaluate_model(run.trained.params, config, test_set,
                              judged ? std::span<const PairSample>(test_pairs)
                                     : std::span<const PairSample>());
  return run;
}

ProtocolResult run_protocol(const AssessorConfig& config, std::span<const TrainSample> samples,
                            std::span<const std::string> group_keys,
                            const ProtocolOptions& options,
                            const std::function<void(int, const MetricReport&)>& on_split) {
  if (options.splits < 1) throw Error(ErrorCode::kOutOfRange, "at least one split is required");
  index_samples(samples, group_keys, nullptr);

  ProtocolResult result;
  for (int s = 0; s < options.splits; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    const SplitRun run = run_split(config, samples, group_keys, seed, options);
    result.split_seeds.push_back(seed);
    result.per_split.push_back(run.report);
    if (on_split) on_split(s, run.report);
  }

  auto summarize = [](const std::vector<double>& xs) {
    MetricSummary m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
      double ss = 0.0;
      for (const double x : xs) ss += (x - m.mean) * (x - m.mean);
      m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return m;
  };
  for (const Dimension d : kAllDimensions) {
    std::map<std::string, std::vector<double>> values;
    for (const auto& report : result.per_split) {
      const auto it = report.find(d);
      if (it == report.end()) continue;
      values["srcc"].push_back(it->second.srcc);
      values["plcc"].push_back(it->second.plcc);
      values["krcc"].push_back(it->second.krcc);
      if (it->second.pair_acc) values["pair_acc"].push_back(*it->second.pair_acc);
    }
    for (const auto& [name, xs] : values) {
      if (!xs.empty()) result.summary[d][name] = summarize(xs);
    }
  }
  return result;
}

SynthDataset load_synth_dataset(const std::filesystem::path& dir, const AssessorConfig& config) {
  SynthDataset out;
  out.manifest = manifest_from_jsonl(read_file_text(dir / "manifest.jsonl"));
  if (out.manifest.entries.empty()) throw Error(ErrorCode::kEmptyDataset, "manifest has no clips");
  for (const auto& e : out.manifest.entries) {
    out.samples.push_back(make_sample(e, read_avf(dir / e.path), config));
    out.group_keys.push_back("concept-" + std::to_string(e.prompt_concept));
  }
  return out;
}

}  // namespace aigv
