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

#include "cli.h"

#include <CLI11.hpp>
#include <csignal>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "aigv/annotate.h"
#include "aigv/annotate_http.h"
#include "aigv/error.h"
#include "aigv/pairstudy.h"
#include "aigv/records_io.h"
#include "aigv/store.h"
#include "aigv/subjective.h"
#include "aigv/synthgen.h"
#include "aigv/taxonomy.h"
#include "aigv/text.h"
#include "aigv/training.h"

namespace aigv::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Thrown for flag combinations CLI11 cannot express; maps to exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& text, T (*convert)(const std::string&)) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw UsageError("empty item in list '" + text + "'");
    out.push_back(convert(item));
  }
  return out;
}

int to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + s + "' is not an integer");
  }
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + s + "' is not a number");
  }
}

std::string to_self(const std::string& s) { return s; }

// Options shared by `train` and `eval`.
struct ModelFlags {
  std::string epochs;
  std::string lr;
  std::string ablate;
  std::string stages = "1,2,3";
  std::uint64_t seed = 0;

  void add_to(CLI::App* app) {
    app->add_option("--seed", seed, "Master seed for initialization and shuffling")->required();
    app->add_option("--epochs", epochs, "Epochs per stage, e.g. 100,600,100");
    app->add_option("--lr", lr, "Learning rate per stage, e.g. 0.05,0.001,0.001");
    app->add_option("--stages", stages, "Stages to run, subset of 1,2,3")->capture_default_str();
    app->add_option("--ablate", ablate,
                    "Comma list of no-temporal, no-level, freeze-encoders");
  }

  AssessorConfig config() const {
    AssessorConfig c;
    c.seed = seed;
    if (!epochs.empty()) {
      const auto e = parse_list<int>(epochs, to_int);
      if (e.size() != 3) throw UsageError("--epochs needs three values");
      c.epochs = {e[0], e[1], e[2]};
    }
    if (!lr.empty()) {
      const auto l = parse_list<double>(lr, to_double);
      if (l.size() != 3) throw UsageError("--lr needs three values");
      c.learning_rate = {l[0], l[1], l[2]};
    }
    if (!ablate.empty()) {
      for (const auto& name : parse_list<std::string>(ablate, to_self)) {
        if (name == "no-temporal") {
          c.use_temporal = false;
        } else if (name == "no-level") {
          c.use_level_stage = false;
        } else if (name == "freeze-encoders") {
          c.finetune_encoders_stage2 = false;
        } else {
          throw UsageError("unknown ablation '" + name + "'");
        }
      }
    }
    return c;
  }

  // Stage 1 is skipped rather than rejected when the level stage is ablated.
  std::vector<int> stage_list(const AssessorConfig& c) const {
    std::vector<int> out;
    for (const int s : parse_list<int>(stages, to_int)) {
      if (s < 1 || s > 3) throw UsageError("stages must be within 1..3");
      if (s == 1 && !c.use_level_stage) continue;
      out.push_back(s);
    }
    return out;
  }
};

json report_json(const MetricReport& report) { return json::parse(metric_report_to_json(report)); }

std::string report_table(const MetricReport& report) {
  std::ostringstream s;
  s << "dimension  srcc      plcc      krcc      pair_acc\n";
  for (const auto& [d, r] : report) {
    std::string name(to_string(d));
    name.resize(10, ' ');
    s << name << format_fixed(r.srcc, 6) << "  " << format_fixed(r.plcc, 6) << "  "
      << format_fixed(r.krcc, 6) << "  " << (r.pair_acc ? format_fixed(*r.pair_acc, 6) : "-")
      << "\n";
  }
  return s.str();
}

AnnotateServer* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark tools for AI-generated video quality assessment", "aigv"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print machine-readable reports to stdout");

  // categorize
  std::string prompts_path, keywords_path, out_path;
  auto* categorize = app.add_subcommand("categorize", "Classify prompts with the keyword table");
  categorize->add_option("--prompts", prompts_path, "Prompt corpus (JSONL)")->required();
  categorize->add_option("--keywords", keywords_path, "Keyword table (JSON); built-in if omitted");
  categorize->add_option("--out", out_path, "Output JSONL (stdout if omitted)");

  // mos
  std::string ratings_path, constant_policy = "drop";
  auto* mos = app.add_subcommand("mos", "Rescaled z-score MOS from raw ratings");
  mos->add_option("--ratings", ratings_path, "Ratings CSV")->required();
  mos->add_option("--out", out_path, "MOS CSV (stdout if omitted)");
  mos->add_option("--constant-raters", constant_policy, "drop or fifty")
      ->check(CLI::IsMember({"drop", "fifty"}))
      ->capture_default_str();

  // pairs
  auto* pairs = app.add_subcommand("pairs", "Pair enumeration, sampling and vote aggregation");
  pairs->require_subcommand(1);
  std::string meta_path, pairs_path, judgments_path;
  int open_variants = 4, closed_variants = 1;
  auto* enumerate = pairs->add_subcommand("enumerate", "All pairs within each prompt group");
  enumerate->add_option("--meta", meta_path, "Video metadata (JSONL)")->required();
  enumerate->add_option("--open-variants", open_variants, "Videos per open-source model")
      ->capture_default_str();
  enumerate->add_option("--closed-variants", closed_variants, "Videos per closed-source model")
      ->capture_default_str();
  enumerate->add_option("--out", out_path, "Pairs JSONL (stdout if omitted)");
  std::size_t sample_n = 0;
  std::uint64_t seed = 0;
  auto* sample = pairs->add_subcommand("sample", "Uniform sample without replacement");
  sample->add_option("--pairs", pairs_path, "Pair pool (JSONL)")->required();
  sample->add_option("--n", sample_n, "Number of pairs")->required();
  sample->add_option("--seed", seed, "Sampling seed")->required();
  sample->add_option("--out", out_path, "Pairs JSONL (stdout if omitted)");
  auto* aggregate = pairs->add_subcommand("aggregate", "Majority vote per pair and dimension");
  aggregate->add_option("--judgments", judgments_path, "Judgments JSONL")->required();
  aggregate->add_option("--out", out_path, "Verdicts JSONL (stdout if omitted)");

  // leaderboard
  std::string verdicts_path, categories_path, group_by = "all", dimension;
  auto* leaderboard = app.add_subcommand("leaderboard", "Per-model win rates");
  leaderboard->add_option("--verdicts", verdicts_path, "Verdicts JSONL")->required();
  leaderboard->add_option("--pairs", pairs_path, "Pairs JSONL")->required();
  leaderboard->add_option("--meta", meta_path, "Video metadata JSONL")->required();
  leaderboard->add_option("--categories", categories_path, "Prompt categories JSONL");
  leaderboard->add_option("--group-by", group_by, "all, spatial, temporal, attribute, complexity")
      ->check(CLI::IsMember({"all", "spatial", "temporal", "attribute", "complexity"}))
      ->capture_default_str();
  leaderboard->add_option("--dimension", dimension, "Restrict to one dimension")
      ->check(CLI::IsMember({"static", "temporal", "dynamic", "tv"}));
  leaderboard->add_option("--out", out_path, "Win-rate CSV (stdout if omitted)");

  // metrics
  std::string gt_path, pred_path;
  bool tau_b = false;
  auto* metrics = app.add_subcommand("metrics", "SRCC/PLCC/KRCC and pair accuracy");
  metrics->add_option("--gt", gt_path, "Ground-truth MOS CSV")->required();
  metrics->add_option("--pred", pred_path, "Prediction CSV (MOS layout)")->required();
  metrics->add_option("--verdicts", verdicts_path, "Verdicts JSONL for pair accuracy");
  metrics->add_option("--pairs", pairs_path, "Pairs JSONL naming the verdicts' videos");
  metrics->add_flag("--tau-b", tau_b, "Kendall tau-b instead of tau-a");
  metrics->add_option("--out", out_path, "Report JSON (stdout if omitted)");

  // synth
  int synth_n = 0;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic clip dataset");
  synth->add_option("--n", synth_n, "Number of clips")->required();
  synth->add_option("--seed", seed, "Generator seed")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();

  // train
  ModelFlags model;
  std::string data_dir, checkpoint_path, log_path;
  int split_seed = -1;
  auto* train_cmd = app.add_subcommand("train", "Train the assessor on a synthetic dataset");
  train_cmd->add_option("--data", data_dir, "Dataset directory (manifest.jsonl + clips)")
      ->required();
  train_cmd->add_option("--out", checkpoint_path, "Checkpoint path")->required();
  train_cmd->add_option("--log", log_path, "Training log JSONL");
  train_cmd->add_option("--split-seed", split_seed,
                        "Train on the training part of this 4:1 split and report the test part");
  model.add_to(train_cmd);

  // eval
  int splits = 10;
  std::size_t test_pairs = 500;
  auto* eval = app.add_subcommand("eval", "Ten-split protocol, or score a checkpoint");
  eval->add_option("--data", data_dir, "Dataset directory (manifest.jsonl + clips)")->required();
  eval->add_option("--checkpoint", checkpoint_path, "Score this checkpoint instead of training");
  eval->add_option("--splits", splits, "Number of random 4:1 splits")->capture_default_str();
  eval->add_option("--test-pairs", test_pairs, "Judge pairs sampled per test part")
      ->capture_default_str();
  eval->add_option("--out", out_path, "Report JSON");
  model.add_to(eval);

  // serve
  std::string study_dir, static_dir, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the annotation service");
  serve->add_option("--study", study_dir, "Study directory")->required();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--static", static_dir, "Directory of UI files served at /");
  serve->add_option("--seed", seed, "Seed for task order and presentation swaps")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "aigv: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) {
      failed = sub;
      for (auto* inner : sub->get_subcommands()) failed = inner;
    }
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (categorize->parsed()) {
      const auto prompts = prompts_from_jsonl(read_file_text(prompts_path));
      std::optional<KeywordTable> custom;
      if (!keywords_path.empty()) custom = KeywordTable::from_file(keywords_path);
      const KeywordTable& table = custom ? *custom : KeywordTable::builtin();
      std::map<std::string, PromptCategories> result;
      for (const auto& p : prompts) result[p.prompt_id] = aigv::categorize(p, table);
      emit(categories_to_jsonl(result), out_path, out);
      if (as_json && !out_path.empty()) out << json{{"prompts", result.size()}}.dump() << "\n";
    } else if (mos->parsed()) {
      const auto ratings = ratings_from_csv(read_file_text(ratings_path));
      std::vector<std::string> warnings;
      const auto records = compute_mos(ratings,
                                       constant_policy == "drop" ? ConstantRaterPolicy::kDrop
                                                                 : ConstantRaterPolicy::kMapToFifty,
                                       &warnings);
      for (const auto& w : warnings) err << "aigv: warning: " << w << "\n";
      emit(mos_to_csv(records), out_path, out);
      if (as_json && !out_path.empty()) {
        out << json{{"ratings", rating_count(ratings)}, {"records", records.size()},
                    {"warnings", warnings}}.dump()
            << "\n";
      }
    } else if (enumerate->parsed()) {
      const auto meta = meta_from_jsonl(read_file_text(meta_path));
      std::vector<PairSpec> all;
      for (const auto& [prompt, group] : build_groups(meta, open_variants, closed_variants)) {
        auto p = enumerate_pairs(group);
        all.insert(all.end(), p.begin(), p.end());
      }
      emit(pairs_to_jsonl(all), out_path, out);
      if (as_json && !out_path.empty()) out << json{{"pairs", all.size()}}.dump() << "\n";
    } else if (sample->parsed()) {
      const auto pool = pairs_from_jsonl(read_file_text(pairs_path));
      emit(pairs_to_jsonl(sample_pairs(pool, sample_n, seed)), out_path, out);
    } else if (aggregate->parsed()) {
      const auto judgments = judgments_from_jsonl(read_file_text(judgments_path));
      const auto verdicts = aggregate_verdicts(judgments);
      emit(verdicts_to_jsonl(verdicts), out_path, out);
      if (as_json && !out_path.empty()) {
        out << json{{"judgments", judgments.size()}, {"verdicts", verdicts.size()}}.dump() << "\n";
      }
    } else if (leaderboard->parsed()) {
      const auto verdicts = verdicts_from_jsonl(read_file_text(verdicts_path));
      const auto pair_list = pairs_from_jsonl(read_file_text(pairs_path));
      const auto meta = meta_from_jsonl(read_file_text(meta_path));
      std::map<std::string, PromptCategories> cats;
      if (!categories_path.empty()) cats = categories_from_jsonl(read_file_text(categories_path));
      const GroupBy g = parse_group_by(group_by);
      if (g != GroupBy::kAll && categories_path.empty()) {
        throw UsageError("--group-by " + group_by + " needs --categories");
      }
      std::optional<Dimension> only;
      if (!dimension.empty()) only = parse_dimension(dimension);
      const auto table =
          win_rates(verdicts, pair_list, meta, categories_path.empty() ? nullptr : &cats, g, only);
      emit(win_rates_to_csv(table), out_path, out);
    } else if (metrics->parsed()) {
      const auto gt = score_vectors(mos_from_csv(read_file_text(gt_path)));
      auto pred = score_vectors(mos_from_csv(read_file_text(pred_path)));
      for (auto& [d, v] : pred) {
        if (gt.contains(d)) v = align_to(gt.at(d), v);
      }
      MetricReport report = evaluate_scores(
          pred, gt, tau_b ? KendallVariant::kTauB : KendallVariant::kTauA);
      if (verdicts_path.empty() != pairs_path.empty()) {
        throw UsageError("--verdicts and --pairs go together");
      }
      if (!verdicts_path.empty()) {
        const auto verdicts = verdicts_from_jsonl(read_file_text(verdicts_path));
        std::map<std::string, PairSpec> by_id;
        for (auto& p : pairs_from_jsonl(read_file_text(pairs_path))) by_id[p.pair_id] = p;
        for (auto& [d, row] : report) {
          std::map<std::string, double> score;
          for (const auto& e : pred.at(d)) score[e.video_id] = e.value;
          // Predicted preference: the higher predicted score; equal scores
          // predict A.
          std::unordered_map<std::string, Choice> predicted;
          bool any = false;
          for (const auto& v : verdicts) {
            if (v.dimension != d) continue;
            any = true;
            const auto it = by_id.find(v.pair_id);
            if (it == by_id.end()) {
              throw Error(ErrorCode::kMissingPrediction, "pair " + v.pair_id + " not in --pairs");
            }
            const auto a = score.find(it->second.video_a);
            const auto b = score.find(it->second.video_b);
            if (a == score.end() || b == score.end()) {
              throw Error(ErrorCode::kMissingPrediction, "no prediction for a video of " + v.pair_id);
            }
            predicted[v.pair_id] = a->second >= b->second ? Choice::kA : Choice::kB;
          }
          if (any) row.pair_acc = pair_accuracy(predicted, verdicts, d);
        }
      }
      emit(metric_report_to_json(report), out_path, out);
      if (!out_path.empty() && !as_json) out << report_table(report);
    } else if (synth->parsed()) {
      const auto manifest = gen_dataset(synth_n, seed, SynthConfig{}, out_dir);
      if (as_json) {
        out << json{{"clips", manifest.entries.size()}, {"dir", out_dir}}.dump() << "\n";
      } else {
        out << "wrote " << manifest.entries.size() << " clips to " << out_dir << "\n";
      }
    } else if (train_cmd->parsed()) {
      const AssessorConfig config = model.config();
      const auto stages = model.stage_list(config);
      const SynthDataset data = load_synth_dataset(data_dir, config);
      std::ostringstream log;
      auto on_epoch = [&](const TrainLogEntry& e) {
        log << json{{"stage", e.stage}, {"epoch", e.epoch}, {"loss", e.loss}}.dump() << "\n";
      };
      AssessorParams params;
      std::optional<MetricReport> report;
      if (split_seed >= 0) {
        ProtocolOptions opts;
        opts.stages = stages;
        const SplitRun r = run_split(config, data.samples, data.group_keys,
                                     static_cast<std::uint64_t>(split_seed), opts, on_epoch);
        params = r.trained.params;
        report = r.report;
      } else {
        std::vector<PairSample> train_pairs;
        if (std::find(stages.begin(), stages.end(), 3) != stages.end()) {
          train_pairs = group_pairs(data.samples, data.group_keys, 2.0);
        }
        params = train(config, data.samples, train_pairs, stages, on_epoch).params;
      }
      save_checkpoint(params, config, checkpoint_path);
      if (!log_path.empty()) write_file_atomic(log_path, log.str());
      if (report) {
        if (as_json) {
          out << report_json(*report).dump(2) << "\n";
        } else {
          out << report_table(*report);
        }
      }
    } else if (eval->parsed()) {
      if (!checkpoint_path.empty()) {
        const Checkpoint ckpt = load_checkpoint(checkpoint_path);
        const SynthDataset data = load_synth_dataset(data_dir, ckpt.config);
        const std::size_t available = data.samples.size() * (data.samples.size() - 1) / 2;
        const auto judge_pairs =
            sample_index_pairs(data.samples, std::min(test_pairs, available), model.seed, 2.0);
        const MetricReport report =
            evaluate_model(ckpt.params, ckpt.config, data.samples, judge_pairs);
        emit(metric_report_to_json(report), out_path, out);
        if (!out_path.empty() && !as_json) out << report_table(report);
      } else {
        const AssessorConfig config = model.config();
        ProtocolOptions opts;
        opts.splits = splits;
        opts.test_pairs = test_pairs;
        opts.stages = model.stage_list(config);
        const SynthDataset data = load_synth_dataset(data_dir, config);
        const ProtocolResult result =
            run_protocol(config, data.samples, data.group_keys, opts, [&](int s, const auto& r) {
              if (!as_json) err << "split " << s << ": tv srcc " << format_fixed(r.at(Dimension::kTv).srcc, 4) << "\n";
            });
        json j;
        j["splits"] = result.split_seeds;
        for (const auto& [d, metrics_by_name] : result.summary) {
          for (const auto& [name, m] : metrics_by_name) {
            j["summary"][std::string(to_string(d))][name] = {
                {"mean", std::stod(format_fixed(m.mean, 6))},
                {"stddev", std::stod(format_fixed(m.stddev, 6))}};
          }
        }
        for (const auto& r : result.per_split) j["per_split"].push_back(report_json(r));
        if (!out_path.empty()) write_file_atomic(out_path, j.dump(2) + "\n");
        if (as_json) {
          out << j.dump(2) << "\n";
        } else {
          out << "dimension  metric    mean      +- stddev   (" << result.split_seeds.size()
              << " splits)\n";
          for (const auto& [d, metrics_by_name] : result.summary) {
            for (const auto& [name, m] : metrics_by_name) {
              std::string dn(to_string(d)), mn(name);
              dn.resize(10, ' ');
              mn.resize(10, ' ');
              out << dn << mn << format_fixed(m.mean, 6) << "  +- " << format_fixed(m.stddev, 6)
                  << "\n";
            }
          }
        }
      }
    } else if (serve->parsed()) {
      StudyOptions opts;
      opts.seed = seed;
      StudyStore store(study_dir, opts);
      if (!static_dir.empty() && !fs::is_directory(static_dir)) {
        throw Error(ErrorCode::kIoFailure, "static directory " + static_dir + " does not exist");
      }
      AnnotateServer server(store, static_dir);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        throw Error(ErrorCode::kIoFailure, "cannot bind " + host + ":" + std::to_string(port));
      }
      err << "aigv: serving " << study_dir << " on http://" << host << ":" << bound << "\n";
      g_server = &server;
      std::signal(SIGINT, handle_stop_signal);
      std::signal(SIGTERM, handle_stop_signal);
      server.serve();
      g_server = nullptr;
    }
  } catch (const UsageError& e) {
    err << "aigv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "aigv: " << e.what() << "\n";
    return is_io_error(e.code()) ? kExitIo : kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "aigv: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace aigv::cli
