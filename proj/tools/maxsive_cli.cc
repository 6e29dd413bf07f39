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

// Command line front end: key management, embedding, attacks, extraction,
// verification, identification, calibration, capacity and experiment runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxsive/attacks.h"
#include "maxsive/capacity.h"
#include "maxsive/channel.h"
#include "maxsive/codec.h"
#include "maxsive/config.h"
#include "maxsive/decoder.h"
#include "maxsive/error.h"
#include "maxsive/experiment.h"
#include "maxsive/key_file.h"
#include "maxsive/latent_io.h"
#include "maxsive/threshold.h"
#include "maxsive/xtemplate.h"

namespace {

using maxsive::Error;
using maxsive::ErrorCode;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNegative = 2;

// Options shared by the subcommands that run the channel or the decoder.
struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::string channel;
  double sigma = -1.0;
  double eta = -1.0;
  std::string attacks;
  std::string dump_profile;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void AddCommon(CLI::App* app, CommonOptions& o, bool channel_opts) {
  app->add_option("--config", o.config_file, "JSON config with dotted keys");
  app->add_option("--set", o.sets, "override a config key (key=value), repeatable");
  app->add_option("--eta", o.eta, "template strength");
  app->add_option("--dump-profile", o.dump_profile, "write the angle search profile as CSV");
  if (channel_opts) {
    app->add_option("--channel", o.channel, "identity | ddim | ddim-noisy");
    app->add_option("--sigma", o.sigma, "channel noise sigma");
    app->add_option("--attacks", o.attacks, "preset name, preset file or inline pipeline");
  }
}

maxsive::ExperimentConfig BuildConfig(const CommonOptions& o) {
  maxsive::ExperimentConfig cfg;
  if (!o.config_file.empty()) maxsive::ApplyConfigJson(cfg, maxsive::ReadTextFile(o.config_file));
  for (const std::string& s : o.sets) maxsive::ApplyConfigAssignment(cfg, s);
  if (!o.channel.empty()) cfg.channel.mode = maxsive::ParseChannelMode(o.channel);
  if (o.sigma >= 0.0) cfg.channel.sigma = o.sigma;
  if (o.eta >= 0.0) cfg.decoder.tmpl.eta = o.eta;
  if (!o.attacks.empty()) cfg.attacks = maxsive::ResolveAttacks(o.attacks);
  if (o.seed_given) cfg.seed = o.seed;
  return cfg;
}

void DumpProfile(const std::string& path, const maxsive::LatentTensor& z,
                 const maxsive::TemplateConfig& tmpl) {
  if (path.empty()) return;
  const maxsive::AngleEstimate est = maxsive::DetectAngle(z, tmpl);
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  f << "theta,mean_magnitude\n";
  for (std::size_t k = 0; k < est.profile.size(); ++k) {
    f << static_cast<double>(k) * tmpl.step << "," << est.profile[k] << "\n";
  }
}

maxsive::Seed256 RandomSeed() {
  std::random_device rd;
  maxsive::Seed256 s;
  for (auto& b : s.bytes) b = static_cast<std::uint8_t>(rd());
  return s;
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Optionally maps a generated z_0 back to z'_T before decoding.
maxsive::LatentTensor LoadForDecode(const std::string& path, bool from_z0,
                                    const maxsive::ExperimentConfig& cfg) {
  maxsive::LatentTensor z = maxsive::ReadMxlt(path);
  if (!from_z0) return z;
  const auto& d = cfg.channel.ddim;
  const auto denoiser = maxsive::MakeDenoiser(d.denoiser, d.denoiser_param, d.denoiser_seed);
  return maxsive::Inverse(z, *denoiser, maxsive::MakeSchedule(d.steps, d.beta_start, d.beta_end));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxsive: high-capacity diffusion-latent watermark toolkit"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "create a key file or a user registry");
  std::string kg_hex, kg_out;
  std::uint64_t kg_seed = 0;
  std::size_t kg_users = 0;
  maxsive::KeyFile kg_key;
  keygen->add_option("--seed-hex", kg_hex, "64 hex characters");
  auto* kg_seed_opt = keygen->add_option("--seed", kg_seed, "integer seed (expanded with SHA-256)");
  keygen->add_option("--users", kg_users, "write a registry of this many users instead");
  keygen->add_option("--f-hw", kg_key.replication.f_hw, "spatial replication factor");
  keygen->add_option("--f-c", kg_key.replication.f_c, "channel replication factor");
  keygen->add_option("--height", kg_key.shape.height, "latent height");
  keygen->add_option("--width", kg_key.shape.width, "latent width");
  keygen->add_option("--channels", kg_key.shape.channels, "latent channels");
  keygen->add_option("-o,--out", kg_out, "output path")->required();

  // embed
  auto* embed = app.add_subcommand("embed", "write the watermarked initial noise z_T");
  std::string em_key, em_out, em_z0_out;
  CommonOptions em_common;
  embed->add_option("--key", em_key, "mxkey file")->required();
  embed->add_option("-o,--out", em_out, "output MXLT file")->required();
  embed->add_option("--z0-out", em_z0_out, "also write the generated z_0 (ddim reverse + template)");
  AddCommon(embed, em_common, false);

  // attack
  auto* attack = app.add_subcommand("attack", "apply a distortion pipeline to a latent");
  std::string at_in, at_out, at_pipeline;
  std::size_t at_proxy = 1;
  attack->add_option("input", at_in, "input MXLT file");
  attack->add_option("--attacks", at_pipeline, "inline pipeline");
  attack->add_option("-o,--out", at_out, "output MXLT file");
  attack->add_option("--proxy-scale", at_proxy, "pixel-proxy block factor (1 = latent)");
  auto* attack_list = attack->add_subcommand("list", "list attack kinds and parameter ranges");

  // extract / verify
  auto* extract = app.add_subcommand("extract", "decode a latent and print the score");
  auto* verify = app.add_subcommand("verify", "decide watermark presence (exit 2 if absent)");
  std::string ex_key, ex_in;
  bool ex_from_z0 = false, ex_no_correct = false;
  double ex_fpr = 1e-3;
  CommonOptions ex_common;
  for (CLI::App* sub : {extract, verify}) {
    sub->add_option("--key", ex_key, "mxkey file")->required();
    sub->add_option("input", ex_in, "latent z'_T (MXLT)")->required();
    sub->add_flag("--from-z0", ex_from_z0, "input is z_0; run DDIM inversion first");
    sub->add_flag("--no-correct", ex_no_correct, "skip template detection and correction");
    AddCommon(sub, ex_common, false);
  }
  verify->add_option("--fpr", ex_fpr, "target false positive rate");

  // identify
  auto* identify = app.add_subcommand("identify", "attribute a latent to a registered user");
  std::string id_registry, id_in;
  bool id_from_z0 = false;
  CommonOptions id_common;
  std::size_t id_f_hw = 2, id_f_c = 1;
  identify->add_option("--registry", id_registry, "registry JSON")->required();
  identify->add_option("input", id_in, "latent z'_T (MXLT)")->required();
  identify->add_option("--f-hw", id_f_hw, "spatial replication factor");
  identify->add_option("--f-c", id_f_c, "channel replication factor");
  identify->add_flag("--from-z0", id_from_z0, "input is z_0; run DDIM inversion first");
  AddCommon(identify, id_common, false);

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "detection threshold for a target FPR");
  std::size_t cal_l = 4096, cal_trials = 100000;
  double cal_fpr = 1e-3;
  std::string cal_method = "analytic";
  std::uint64_t cal_seed = 0;
  calibrate->add_option("--L", cal_l, "payload length");
  calibrate->add_option("--fpr", cal_fpr, "target false positive rate");
  calibrate->add_option("--method", cal_method, "analytic | montecarlo");
  calibrate->add_option("--trials", cal_trials, "Monte-Carlo trials");
  calibrate->add_option("--seed", cal_seed, "Monte-Carlo seed");

  // capacity
  auto* capacity = app.add_subcommand("capacity", "payload capacity in bits");
  std::size_t cap_l = 0;
  std::string cap_dist = "normal";
  bool cap_exact = false, cap_table = false;
  capacity->add_option("--L", cap_l, "element count");
  capacity->add_option("--dist", cap_dist, "ber | normal");
  capacity->add_flag("--exact", cap_exact, "use the unrounded per-element entropy");
  capacity->add_flag("--table", cap_table, "print the reference comparison table");

  // bench
  auto* bench = app.add_subcommand("bench", "verification or identification campaign");
  CommonOptions bn_common;
  std::size_t bn_trials = 0, bn_negatives = 0, bn_users = 0, bn_images = 1;
  double bn_fpr = 0.0;
  std::string bn_out, bn_mode = "verify";
  bench->add_option("--mode", bn_mode, "verify | identify");
  bench->add_option("--trials", bn_trials, "trials per attack");
  bench->add_option("--fpr", bn_fpr, "target false positive rate");
  bench->add_option("--negatives", bn_negatives, "null trials for the empirical FPR check");
  bench->add_option("--users", bn_users, "registry size (identify mode)");
  bench->add_option("--images", bn_images, "images per user (identify mode)");
  bench->add_option("--out", bn_out, "CSV report path (JSON sidecar gets .json appended)");
  auto* bn_seed_opt = bench->add_option("--seed", bn_common.seed, "seed base");
  AddCommon(bench, bn_common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (keygen->parsed()) {
      maxsive::Seed256 seed = !kg_hex.empty() ? maxsive::Seed256::FromHex(kg_hex)
                              : kg_seed_opt->count() > 0 ? maxsive::Seed256::FromU64(kg_seed)
                                                         : RandomSeed();
      if (kg_users > 0) {
        std::vector<maxsive::RegistryRecord> records;
        for (std::size_t u = 0; u < kg_users; ++u) {
          records.push_back({u, maxsive::DeriveSeed(seed, "user", u)});
        }
        maxsive::WriteRegistryFile(kg_out, records);
      } else {
        kg_key.master_seed = seed;
        kg_key.Layout();
        maxsive::WriteKeyFile(kg_out, kg_key);
      }
      return kExitOk;
    }

    if (embed->parsed()) {
      const maxsive::KeyFile key = maxsive::ReadKeyFile(em_key);
      const maxsive::CodecLayout layout = key.Layout();
      const auto w = maxsive::SampleWatermark(key.master_seed, layout.payload_length());
      const auto keys = maxsive::DeriveKeys(key.master_seed, layout.replica_count(),
                                            layout.payload_length());
      const maxsive::LatentTensor z_t = maxsive::AssembleInitialNoise(w, keys, layout);
      maxsive::WriteMxlt(em_out, z_t);
      if (!em_z0_out.empty()) {
        maxsive::ExperimentConfig cfg = BuildConfig(em_common);
        cfg.channel.mode = maxsive::ChannelMode::kDdim;
        cfg.channel.sigma = 0.0;
        maxsive::WriteMxlt(em_z0_out, maxsive::Generate(z_t, cfg.channel, cfg.decoder.tmpl));
      }
      return kExitOk;
    }

    if (attack->parsed()) {
      if (attack_list->parsed()) {
        for (const maxsive::AttackInfo& info : maxsive::AttackCatalog()) {
          std::cout << info.name << "(";
          for (std::size_t i = 0; i < info.params.size(); ++i) {
            const maxsive::ParamInfo& p = info.params[i];
            if (i > 0) std::cout << ", ";
            std::cout << p.name << " in [" << p.min << ", " << p.max << "]";
            if (p.integer) std::cout << (p.odd ? " odd" : " int");
            if (p.default_value) std::cout << " default " << *p.default_value;
          }
          std::cout << ")  " << info.summary << "\n";
        }
        return kExitOk;
      }
      if (at_in.empty() || at_out.empty() || at_pipeline.empty()) {
        throw Error(ErrorCode::kInvalidInput, "attack needs input, --attacks and -o");
      }
      const maxsive::AttackPipeline p = maxsive::ParsePipeline(at_pipeline);
      maxsive::WriteMxlt(at_out, maxsive::ApplyPipeline(p, maxsive::ReadMxlt(at_in), at_proxy));
      std::cout << maxsive::FormatPipeline(p) << "\n";
      return kExitOk;
    }

    if (extract->parsed() || verify->parsed()) {
      maxsive::ExperimentConfig cfg = BuildConfig(ex_common);
      if (ex_no_correct) cfg.decoder.correct_geometry = false;
      const maxsive::KeyFile key = maxsive::ReadKeyFile(ex_key);
      const maxsive::CodecLayout layout = key.Layout();
      const auto w = maxsive::SampleWatermark(key.master_seed, layout.payload_length());
      const auto keys = maxsive::DeriveKeys(key.master_seed, layout.replica_count(),
                                            layout.payload_length());
      const maxsive::LatentTensor z = LoadForDecode(ex_in, ex_from_z0, cfg);
      DumpProfile(ex_common.dump_profile, z, cfg.decoder.tmpl);
      const maxsive::Detection det = maxsive::Decode(z, keys, layout, w, cfg.decoder);
      if (extract->parsed()) {
        std::cout << "score " << Fixed(det.score) << "\n";
        if (det.template_found) {
          std::cout << "theta_hat " << Fixed(det.theta_hat, 1) << " scale_flag "
                    << (det.scale_flag ? "true" : "false") << " scale_hat "
                    << Fixed(det.scale_hat, 2) << " candidates " << det.candidate_count << "\n";
        }
        return kExitOk;
      }
      const double tau = maxsive::AnalyticThreshold(layout.payload_length(), ex_fpr);
      const bool detected = maxsive::Verify(det.score, tau);
      std::cout << (detected ? "detected" : "not_detected") << " score " << Fixed(det.score)
                << " threshold " << Fixed(tau) << "\n";
      return detected ? kExitOk : kExitNegative;
    }

    if (identify->parsed()) {
      maxsive::ExperimentConfig cfg = BuildConfig(id_common);
      const maxsive::LatentTensor z = LoadForDecode(id_in, id_from_z0, cfg);
      const maxsive::CodecLayout layout({z.height(), z.width(), z.channels()}, {id_f_hw, id_f_c});
      maxsive::UserRegistry registry(layout);
      for (const auto& r : maxsive::ReadRegistryFile(id_registry)) registry.Add(r.user_id, r.master_seed);
      const maxsive::DecodePlan plan = maxsive::PlanDecode(z, cfg.decoder);
      const maxsive::Identification id = maxsive::IdentifyBatch({plan.candidates}, registry).front();
      std::cout << "user " << id.user_id << " score " << Fixed(id.score) << "\n";
      return kExitOk;
    }

    if (calibrate->parsed()) {
      const auto method = cal_method == "analytic" ? maxsive::CalibrationMethod::kAnalytic
                          : cal_method == "montecarlo"
                              ? maxsive::CalibrationMethod::kMonteCarlo
                              : throw Error(ErrorCode::kInvalidInput, "unknown method " + cal_method);
      const double tau = maxsive::CalibrateThreshold(cal_l, cal_fpr, method, cal_trials, cal_seed);
      std::cout << json{{"L", cal_l}, {"fpr", cal_fpr}, {"method", cal_method}, {"threshold", tau}}.dump()
                << "\n";
      return kExitOk;
    }

    if (capacity->parsed()) {
      if (cap_table) {
        struct Row { const char* method; std::size_t l; maxsive::PayloadDistribution d; };
        using D = maxsive::PayloadDistribution;
        const Row rows[] = {{"Stable Signature", 48, D::kBernoulliHalf},
                            {"AquaLoRA", 48, D::kBernoulliHalf},
                            {"Tree-Rings", 10, D::kStandardNormal},
                            {"RingID", 11, D::kBernoulliHalf},
                            {"Gaussian Shading", 256, D::kBernoulliHalf},
                            {"MaXsive", 4096, D::kStandardNormal}};
        for (const Row& r : rows) {
          std::cout << r.method << "\t" << r.l << "\t" << maxsive::DistributionName(r.d) << "\t"
                    << Fixed(maxsive::CapacityBits(r.l, r.d, cap_exact)) << "\n";
        }
        return kExitOk;
      }
      if (cap_l == 0) throw Error(ErrorCode::kInvalidInput, "capacity needs --L");
      const auto dist = maxsive::ParseDistribution(cap_dist);
      const double bits = maxsive::CapacityBits(cap_l, dist, cap_exact);
      std::cout << "{\"L\":" << cap_l << ",\"dist\":\"" << maxsive::DistributionName(dist)
                << "\",\"bits\":" << Fixed(bits) << "}\n";
      return kExitOk;
    }

    if (bench->parsed()) {
      bn_common.seed_given = bn_seed_opt->count() > 0;
      maxsive::ExperimentConfig cfg = BuildConfig(bn_common);
      if (bn_trials > 0) cfg.trials = bn_trials;
      if (bn_fpr > 0.0) cfg.target_fpr = bn_fpr;
      if (bn_negatives > 0) cfg.negatives = bn_negatives;
      if (bn_mode == "identify") {
        if (bn_users < 2) throw Error(ErrorCode::kInvalidInput, "identify mode needs --users >= 2");
        const auto rep = maxsive::RunIdentification(cfg, bn_users, bn_images);
        const json j = {{"users", rep.users},     {"images", rep.images},
                        {"correct", rep.correct}, {"accuracy", rep.accuracy},
                        {"mean_true_score", rep.mean_true_score}, {"seconds", rep.seconds}};
        if (!bn_out.empty()) maxsive::WriteTextFile(bn_out, j.dump(2) + "\n");
        std::cout << j.dump() << "\n";
        return kExitOk;
      }
      if (bn_mode != "verify") throw Error(ErrorCode::kInvalidInput, "unknown mode " + bn_mode);
      const maxsive::VerificationReport rep = maxsive::RunVerification(cfg);
      const std::string csv = maxsive::ReportCsv(rep);
      if (!bn_out.empty()) {
        maxsive::WriteTextFile(bn_out, csv);
        maxsive::WriteTextFile(bn_out + ".json", maxsive::ReportJson(rep, cfg));
      }
      std::cout << csv;
      std::cout << "unweighted_mean_tpr," << Fixed(rep.unweighted_mean_tpr) << "\n";
      if (rep.negatives) {
        std::cout << "negatives," << rep.negatives->trials << ",fpr," << Fixed(rep.negatives->fpr)
                  << ",within_95ci," << (rep.negatives->within_interval ? "yes" : "no") << "\n";
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
