// Copyright 2026 The maxsive Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAXSIVE_EXPERIMENT_H_
#define MAXSIVE_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxsive/attacks.h"
#include "maxsive/channel.h"
#include "maxsive/codec.h"
#include "maxsive/decoder.h"
#include "maxsive/threshold.h"

namespace maxsive {

struct ExperimentConfig {
  LatentShape shape;
  ReplicationConfig replication;
  ChannelConfig channel;  // channel.attacks is replaced per report row
  DecoderConfig decoder;  // decoder.tmpl is also the injected template
  std::vector<AttackPipeline> attacks = {AttackPipeline{}};
  std::size_t trials = 200;
  double target_fpr = 1e-3;
  std::uint64_t seed = 0;
  // Unwatermarked latents sent through the channel (template injection off)
  // and decoded with trial keys; their false positive rate is checked at
  // negative_fpr.
  std::size_t negatives = 0;
  double negative_fpr = 1e-2;

  void Validate() const;
};

// Trial t of any row embeds the watermark of TrialSeed(seed, t).
Seed256 TrialSeed(std::uint64_t seed, std::size_t trial);
std::uint64_t NoiseSeed(std::uint64_t seed, std::size_t row, std::size_t trial);

struct TrialRecord {
  std::size_t trial = 0;
  double score = 0.0;
  bool detected = false;
  bool template_found = false;
  double theta_hat = 0.0;
  double theta_err_deg = 0.0;  // NaN without a known rotation or template
};

struct ReportRow {
  std::string attack;  // kind names joined by '|', or "clean"
  std::string params;  // canonical pipeline text
  std::size_t trials = 0;
  double tpr = 0.0;
  double threshold = 0.0;
  double mean_score = 0.0;
  double mean_theta_err_deg = 0.0;  // NaN when no rotation is known
  double seconds = 0.0;
  std::vector<TrialRecord> records;
};

struct NegativeSummary {
  std::size_t trials = 0;
  std::size_t false_positives = 0;
  double fpr = 0.0;
  double threshold = 0.0;
  CountInterval interval;
  bool within_interval = false;
};

struct VerificationReport {
  std::vector<ReportRow> rows;
  std::optional<NegativeSummary> negatives;
  double unweighted_mean_tpr = 0.0;
};

// Trial-level failures are recorded as score 0 / not detected and do not
// abort the run.
VerificationReport RunVerification(const ExperimentConfig& cfg);

// CSV with columns attack,params,trials,tpr,threshold,mean_score,
// mean_theta_err_deg,seconds.
std::string ReportCsv(const VerificationReport& report);
// Full config, trial seeds and per-trial scores.
std::string ReportJson(const VerificationReport& report, const ExperimentConfig& cfg);

struct IdentificationReport {
  std::size_t users = 0;
  std::size_t images = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  double mean_true_score = 0.0;
  double seconds = 0.0;
  std::vector<std::uint64_t> truth;
  std::vector<Identification> results;
};

// User u (id u) owns the watermark of UserSeed(seed, u). Each image goes
// through the channel with cfg.attacks[0], is decoded into correction
// candidates and identified over the whole registry.
IdentificationReport RunIdentification(const ExperimentConfig& cfg, std::size_t n_users,
                                       std::size_t images_per_user);
Seed256 UserSeed(std::uint64_t seed, std::size_t user);

}  // namespace maxsive

#endif  // MAXSIVE_EXPERIMENT_H_
