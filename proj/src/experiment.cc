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

#include "maxsive/experiment.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "maxsive/error.h"
#include "maxsive/parallel.h"

namespace maxsive {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t FirstWord(const Seed256& s) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(s.bytes[i]) << (8 * i);
  return v;
}

std::string KindNames(const AttackPipeline& p) {
  if (p.empty()) return "clean";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += "|";
    out += InfoFor(p[i].kind).name;
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed << v;
  return ss.str();
}

double ThetaError(double theta_hat, double base, double rotation) {
  auto mod180 = [](double x) {
    double r = std::fmod(x, 180.0);
    return r < 0 ? r + 180.0 : r;
  };
  const double d = std::abs(mod180(theta_hat - base) - mod180(rotation));
  return std::min(d, 180.0 - d);
}

}  // namespace

void ExperimentConfig::Validate() const {
  CodecLayout(shape, replication);
  channel.Validate();
  decoder.tmpl.Validate();
  if (trials < 1) throw Error(ErrorCode::kConfig, "trials must be >= 1");
  if (!(target_fpr > 0.0 && target_fpr < 0.5)) throw Error(ErrorCode::kConfig, "fpr must lie in (0, 0.5)");
  if (!(negative_fpr > 0.0 && negative_fpr < 0.5)) {
    throw Error(ErrorCode::kConfig, "negative fpr must lie in (0, 0.5)");
  }
}

Seed256 TrialSeed(std::uint64_t seed, std::size_t trial) {
  return DeriveSeed(Seed256::FromU64(seed), "trial-key", trial);
}

std::uint64_t NoiseSeed(std::uint64_t seed, std::size_t row, std::size_t trial) {
  return FirstWord(DeriveSeed(Seed256::FromU64(seed), "trial-noise",
                              (static_cast<std::uint64_t>(row) << 32) | trial));
}

Seed256 UserSeed(std::uint64_t seed, std::size_t user) {
  return DeriveSeed(Seed256::FromU64(seed), "user", user);
}

VerificationReport RunVerification(const ExperimentConfig& cfg) {
  cfg.Validate();
  const CodecLayout layout(cfg.shape, cfg.replication);
  const double tau = AnalyticThreshold(layout.payload_length(), cfg.target_fpr);
  VerificationReport report;
  double tpr_sum = 0.0;
  for (std::size_t row = 0; row < cfg.attacks.size(); ++row) {
    const auto start = Clock::now();
    ChannelConfig channel = cfg.channel;
    channel.attacks = cfg.attacks[row];
    const std::optional<double> rotation = PipelineRotation(channel.attacks);
    ReportRow out;
    out.attack = KindNames(channel.attacks);
    out.params = FormatPipeline(channel.attacks);
    out.trials = cfg.trials;
    out.threshold = tau;
    out.records.resize(cfg.trials);
    ParallelFor(cfg.trials, [&](std::size_t t) {
      TrialRecord& rec = out.records[t];
      rec.trial = t;
      rec.theta_err_deg = std::numeric_limits<double>::quiet_NaN();
      try {
        const Seed256 master = TrialSeed(cfg.seed, t);
        const std::vector<double> w = SampleWatermark(master, layout.payload_length());
        const ShuffleKeySet keys = DeriveKeys(master, layout.replica_count(), layout.payload_length());
        const LatentTensor z_t = Transmit(AssembleInitialNoise(w, keys, layout), channel,
                                          cfg.decoder.tmpl, NoiseSeed(cfg.seed, row, t));
        const Detection det = Decode(z_t, keys, layout, w, cfg.decoder);
        rec.score = det.score;
        rec.detected = Verify(det.score, tau);
        rec.template_found = det.template_found;
        rec.theta_hat = det.theta_hat;
        if (rotation && det.template_found) {
          rec.theta_err_deg = ThetaError(det.theta_hat, cfg.decoder.tmpl.base_angle, *rotation);
        }
      } catch (const Error&) {
        rec.score = 0.0;
        rec.detected = false;
      }
    });
    std::size_t hits = 0, err_n = 0;
    double score_sum = 0.0, err_sum = 0.0;
    for (const TrialRecord& rec : out.records) {
      hits += rec.detected ? 1 : 0;
      score_sum += rec.score;
      if (!std::isnan(rec.theta_err_deg)) {
        err_sum += rec.theta_err_deg;
        ++err_n;
      }
    }
    out.tpr = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    out.mean_score = score_sum / static_cast<double>(cfg.trials);
    out.mean_theta_err_deg = err_n > 0 ? err_sum / static_cast<double>(err_n)
                                       : std::numeric_limits<double>::quiet_NaN();
    out.seconds = Seconds(start);
    tpr_sum += out.tpr;
    report.rows.push_back(std::move(out));
  }
  report.unweighted_mean_tpr = tpr_sum / static_cast<double>(cfg.attacks.size());

  if (cfg.negatives > 0) {
    NegativeSummary neg;
    neg.trials = cfg.negatives;
    neg.threshold = AnalyticThreshold(layout.payload_length(), cfg.negative_fpr);
    ChannelConfig channel = cfg.channel;
    channel.attacks.clear();
    channel.inject_template = false;
    const Seed256 root = Seed256::FromU64(cfg.seed);
    std::vector<char> positive(cfg.negatives, 0);
    ParallelFor(cfg.negatives, [&](std::size_t i) {
      Rng rng(DeriveSeed(root, "negative-latent", i));
      const LatentShape& s = cfg.shape;
      LatentTensor z(s.height, s.width, s.channels);
      for (Grid2D& plane : z.planes()) rng.FillNormal(plane.values());
      const LatentTensor z_t = Transmit(z, channel, cfg.decoder.tmpl,
                                        NoiseSeed(cfg.seed, cfg.attacks.size(), i));
      const Seed256 master = TrialSeed(cfg.seed, i);
      const std::vector<double> w = SampleWatermark(master, layout.payload_length());
      const ShuffleKeySet keys = DeriveKeys(master, layout.replica_count(), layout.payload_length());
      positive[i] = Verify(Decode(z_t, keys, layout, w, cfg.decoder).score, neg.threshold);
    });
    for (char p : positive) neg.false_positives += p ? 1 : 0;
    neg.fpr = static_cast<double>(neg.false_positives) / static_cast<double>(neg.trials);
    neg.interval = BinomialInterval95(neg.trials, cfg.negative_fpr);
    neg.within_interval = neg.false_positives >= neg.interval.lo &&
                          neg.false_positives <= neg.interval.hi;
    report.negatives = neg;
  }
  return report;
}

std::string ReportCsv(const VerificationReport& report) {
  std::string out = "attack,params,trials,tpr,threshold,mean_score,mean_theta_err_deg,seconds\n";
  for (const ReportRow& r : report.rows) {
    out += CsvField(r.attack) + "," + CsvField(r.params) + "," + std::to_string(r.trials) + "," +
           Num(r.tpr) + "," + Num(r.threshold) + "," + Num(r.mean_score) + "," +
           Num(r.mean_theta_err_deg) + "," + Num(r.seconds) + "\n";
  }
  return out;
}

std::string ReportJson(const VerificationReport& report, const ExperimentConfig& cfg) {
  using nlohmann::json;
  auto finite_or_null = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json j;
  j["config"] = {
      {"shape", {cfg.shape.height, cfg.shape.width, cfg.shape.channels}},
      {"f_hw", cfg.replication.f_hw},
      {"f_c", cfg.replication.f_c},
      {"channel",
       {{"mode", ChannelModeName(cfg.channel.mode)},
        {"sigma", cfg.channel.sigma},
        {"proxy_scale", cfg.channel.proxy_scale},
        {"ddim",
         {{"steps", cfg.channel.ddim.steps},
          {"beta_start", cfg.channel.ddim.beta_start},
          {"beta_end", cfg.channel.ddim.beta_end},
          {"denoiser", cfg.channel.ddim.denoiser},
          {"denoiser_param", cfg.channel.ddim.denoiser_param}}}}},
      {"template",
       {{"theta_d", cfg.decoder.tmpl.theta_d},
        {"base_angle", cfg.decoder.tmpl.base_angle},
        {"radii", cfg.decoder.tmpl.radii},
        {"eta", cfg.decoder.tmpl.eta},
        {"step", cfg.decoder.tmpl.step},
        {"kappa", cfg.decoder.tmpl.kappa}}},
      {"decoder",
       {{"presence_margin", cfg.decoder.presence_margin},
        {"clip_factor", cfg.decoder.clip_factor},
        {"correct_geometry", cfg.decoder.correct_geometry}}},
      {"trials", cfg.trials},
      {"target_fpr", cfg.target_fpr},
      {"seed", cfg.seed},
  };
  j["rows"] = json::array();
  for (std::size_t row = 0; row < report.rows.size(); ++row) {
    const ReportRow& r = report.rows[row];
    json trials = json::array();
    for (const TrialRecord& t : r.records) {
      trials.push_back({{"trial", t.trial},
                        {"master_seed", TrialSeed(cfg.seed, t.trial).ToHex()},
                        {"noise_seed", NoiseSeed(cfg.seed, row, t.trial)},
                        {"score", t.score},
                        {"detected", t.detected},
                        {"template_found", t.template_found},
                        {"theta_hat", t.theta_hat},
                        {"theta_err_deg", finite_or_null(t.theta_err_deg)}});
    }
    j["rows"].push_back({{"attack", r.attack},
                         {"params", r.params},
                         {"tpr", r.tpr},
                         {"threshold", r.threshold},
                         {"mean_score", r.mean_score},
                         {"mean_theta_err_deg", finite_or_null(r.mean_theta_err_deg)},
                         {"seconds", r.seconds},
                         {"trials", trials}});
  }
  j["unweighted_mean_tpr"] = report.unweighted_mean_tpr;
  if (report.negatives) {
    const NegativeSummary& n = *report.negatives;
    j["negatives"] = {{"trials", n.trials},
                      {"false_positives", n.false_positives},
                      {"fpr", n.fpr},
                      {"threshold", n.threshold},
                      {"interval95", {n.interval.lo, n.interval.hi}},
                      {"within_interval", n.within_interval}};
  }
  return j.dump(2) + "\n";
}

IdentificationReport RunIdentification(const ExperimentConfig& cfg, std::size_t n_users,
                                       std::size_t images_per_user) {
  cfg.Validate();
  if (n_users < 2) throw Error(ErrorCode::kConfig, "identification needs at least 2 users");
  if (images_per_user < 1) throw Error(ErrorCode::kConfig, "images per user must be >= 1");
  const auto start = Clock::now();
  const CodecLayout layout(cfg.shape, cfg.replication);
  UserRegistry registry(layout);
  for (std::size_t u = 0; u < n_users; ++u) registry.Add(u, UserSeed(cfg.seed, u));
  const RegistryIndex index(registry);

  ChannelConfig channel = cfg.channel;
  channel.attacks = cfg.attacks.empty() ? AttackPipeline{} : cfg.attacks.front();

  IdentificationReport report;
  report.users = n_users;
  report.images = n_users * images_per_user;
  // Images are decoded in chunks to bound the memory held by candidates.
  const std::size_t chunk = 256;
  double true_sum = 0.0;
  for (std::size_t begin = 0; begin < report.images; begin += chunk) {
    const std::size_t end = std::min(report.images, begin + chunk);
    std::vector<std::vector<LatentTensor>> candidates(end - begin);
    ParallelFor(end - begin, [&](std::size_t k) {
      const std::size_t image = begin + k;
      const std::size_t user = image / images_per_user;
      const UserEntry& entry = registry.entries()[user];
      const ShuffleKeySet keys =
          DeriveKeys(entry.master_seed, layout.replica_count(), layout.payload_length());
      const LatentTensor z_t = Transmit(AssembleInitialNoise(entry.watermark, keys, layout),
                                        channel, cfg.decoder.tmpl, NoiseSeed(cfg.seed, 0, image));
      candidates[k] = PlanDecode(z_t, cfg.decoder).candidates;
    });
    const std::vector<Identification> results = index.Identify(candidates);
    for (std::size_t k = 0; k < results.size(); ++k) {
      const std::uint64_t truth = (begin + k) / images_per_user;
      report.truth.push_back(truth);
      report.results.push_back(results[k]);
      if (results[k].user_id == truth) {
        ++report.correct;
        true_sum += results[k].score;
      }
    }
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.images);
  report.mean_true_score = report.correct > 0 ? true_sum / static_cast<double>(report.correct) : 0.0;
  report.seconds = Seconds(start);
  return report;
}

}  // namespace maxsive
