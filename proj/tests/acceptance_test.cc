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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).
//
// Usage: acceptance_test <path to maxsive CLI> [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maxsive/attacks.h"
#include "maxsive/channel.h"
#include "maxsive/codec.h"
#include "maxsive/ddim.h"
#include "maxsive/experiment.h"
#include "maxsive/parallel.h"
#include "maxsive/random.h"
#include "maxsive/threshold.h"
#include "maxsive/xtemplate.h"

namespace maxsive {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

LatentTensor RandomLatent(Rng& rng, const LatentShape& shape = {}) {
  LatentTensor z(shape.height, shape.width, shape.channels);
  for (Grid2D& p : z.planes()) rng.FillNormal(p.values());
  return z;
}

// 1. Capacity table via the CLI, 4 decimals.
Outcome Capacity(const std::string& cli) {
  const std::map<std::string, double> expected = {
      {"Stable Signature", 48.0}, {"AquaLoRA", 48.0}, {"Tree-Rings", 20.471},
      {"RingID", 11.0},           {"Gaussian Shading", 256.0}, {"MaXsive", 8384.9216}};
  FILE* pipe = popen((cli + " capacity --table").c_str(), "r");
  if (!pipe) return {false, "cannot run " + cli};
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
  if (pclose(pipe) != 0) return {false, "capacity --table failed"};
  std::istringstream lines(out);
  std::string line;
  std::size_t matched = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cols;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, '\t');) cols.push_back(f);
    if (cols.size() != 4 || !expected.count(cols[0])) continue;
    const double bits = std::stod(cols[3]);
    if (std::abs(bits - expected.at(cols[0])) > 5e-5) {
      return {false, cols[0] + " gives " + cols[3]};
    }
    ++matched;
  }
  FILE* ent = popen((cli + " capacity --L 1 --dist normal").c_str(), "r");
  std::string per;
  while (ent && std::fgets(buf, sizeof(buf), ent)) per += buf;
  if (ent) pclose(ent);
  const bool entropy_ok = per.find("2.0471") != std::string::npos;
  return {matched == 6 && entropy_ok,
          std::to_string(matched) + "/6 rows match, per-element entropy " +
              (entropy_ok ? "2.0471" : "wrong")};
}

// 2. Gamma against a bisection oracle for the inscribed square.
Outcome GammaGeometry() {
  double worst = 0.0;
  for (int deg = 1; deg <= 89; ++deg) {
    const double t = deg * std::numbers::pi / 180.0;
    auto inside = [&](double a) {
      for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) {
          const double x = sx * a, y = sy * a;
          if (std::abs(x * std::cos(t) + y * std::sin(t)) > 1.0) return false;
          if (std::abs(-x * std::sin(t) + y * std::cos(t)) > 1.0) return false;
        }
      }
      return true;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    worst = std::max(worst, std::abs(Gamma(deg) - 1.0 / lo));
  }
  return {worst <= 1e-9, Fmt("max |gamma - oracle| = %.3g over 1..89 deg", worst)};
}

// 3. Zero-denoiser DDIM round trip and closed form.
Outcome DdimInversion() {
  const DdimSchedule s = MakeSchedule(50, 1e-4, 0.02);
  const ZeroDenoiser d;
  double round_trip = 0.0, closed = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(DeriveSeed(Seed256::FromU64(seed), "acceptance-ddim", 0));
    const LatentTensor z_T = RandomLatent(rng);
    const LatentTensor z_0 = Reverse(z_T, d, s);
    closed = std::max(closed, MaxAbsDiff(z_0, (1.0 / std::sqrt(s.alpha_bar[s.steps])) * z_T));
    round_trip = std::max(round_trip, MaxAbsDiff(Inverse(z_0, d, s), z_T));
  }
  return {round_trip <= 1e-5 && closed <= 1e-5,
          Fmt("round trip max-abs %.3g, closed form max-abs %.3g (20 seeds)", round_trip, closed)};
}

// 4. Codec round trip for all replication factors and wrong-key nulls.
Outcome CodecRoundTrip() {
  const LatentShape shape;
  double worst = 0.0;
  for (std::size_t f_hw : {1, 2, 4}) {
    for (std::size_t f_c : {1, 2, 4}) {
      const CodecLayout layout(shape, {f_hw, f_c});
      const Seed256 master = Seed256::FromU64(100 + 10 * f_hw + f_c);
      const ShuffleKeySet keys = DeriveKeys(master, layout.replica_count(), layout.payload_length());
      const std::vector<double> w = SampleWatermark(master, layout.payload_length());
      const std::vector<double> back = ExtractWatermark(AssembleInitialNoise(w, keys, layout), keys, layout);
      for (std::size_t k = 0; k < w.size(); ++k) worst = std::max(worst, std::abs(back[k] - w[k]));
    }
  }
  const CodecLayout layout(shape, {});
  const double tau = AnalyticThreshold(layout.payload_length(), 1e-3);
  const std::size_t trials = 1000;
  std::vector<char> below(trials, 0);
  ParallelFor(trials, [&](std::size_t t) {
    const Seed256 owner = DeriveSeed(Seed256::FromU64(4), "acceptance-owner", t);
    const Seed256 other = DeriveSeed(Seed256::FromU64(4), "acceptance-other", t);
    const LatentTensor z = AssembleInitialNoise(
        SampleWatermark(owner, layout.payload_length()),
        DeriveKeys(owner, layout.replica_count(), layout.payload_length()), layout);
    const ShuffleKeySet wrong = DeriveKeys(other, layout.replica_count(), layout.payload_length());
    const Score s = ScoreWatermark(SampleWatermark(other, layout.payload_length()),
                                   ExtractWatermark(z, wrong, layout));
    below[t] = s.value < tau;
  });
  const auto n_below = static_cast<std::size_t>(std::count(below.begin(), below.end(), 1));
  return {worst <= 1e-9 && n_below >= 999,
          Fmt("round trip max err %.3g over 9 layouts; wrong key below tau=%.6f in %.0f/1000", worst,
              tau, static_cast<double>(n_below))};
}

// 5. Null FPR at tau(1e-2) and Monte Carlo vs analytic thresholds.
Outcome FprCalibration() {
  const CodecLayout layout(LatentShape{}, {});
  const Seed256 master = Seed256::FromU64(5);
  const ShuffleKeySet keys = DeriveKeys(master, layout.replica_count(), layout.payload_length());
  const std::vector<double> w = SampleWatermark(master, layout.payload_length());
  const double tau = AnalyticThreshold(layout.payload_length(), 1e-2);
  const std::size_t trials = 100000;
  const std::size_t workers = WorkerCount();
  std::vector<std::size_t> hits(workers, 0);
  ParallelFor(workers, [&](std::size_t worker) {
    for (std::size_t t = worker; t < trials; t += workers) {
      Rng rng(DeriveSeed(master, "acceptance-null", t));
      const LatentTensor z = RandomLatent(rng);
      if (Verify(ScoreWatermark(w, ExtractWatermark(z, keys, layout)).value, tau)) ++hits[worker];
    }
  });
  std::size_t fp = 0;
  for (std::size_t h : hits) fp += h;
  const CountInterval ci = BinomialInterval95(trials, 1e-2);
  const bool fpr_ok = fp >= ci.lo && fp <= ci.hi;
  std::string detail = Fmt("%.0f/100000 false positives, 95%% CI [%.0f, %.0f]", static_cast<double>(fp),
                           static_cast<double>(ci.lo), static_cast<double>(ci.hi));
  bool mc_ok = true;
  for (std::size_t length : {256, 1024, 4096}) {
    const double analytic = AnalyticThreshold(length, 1e-3);
    const double mc = MonteCarloThreshold(length, 1e-3, 100000, 50 + length);
    const double rel = std::abs(mc - analytic) / analytic;
    mc_ok = mc_ok && rel <= 0.05;
    detail += Fmt("; L=%.0f tau %.5f vs MC %.5f (%.2f%%)", static_cast<double>(length), analytic, mc,
                  100 * rel);
  }
  return {fpr_ok && mc_ok, detail};
}

ExperimentConfig DdimZeroExperiment(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.channel.mode = ChannelMode::kDdim;
  cfg.channel.ddim.denoiser = "zero";
  cfg.decoder.tmpl.eta = 5.0;
  cfg.trials = 200;
  cfg.target_fpr = 1e-3;
  cfg.seed = seed;
  return cfg;
}

// 6. Rotation recovery through the noiseless ddim-zero channel.
Outcome AngleRecovery() {
  ExperimentConfig cfg = DdimZeroExperiment(6);
  cfg.attacks.clear();
  for (int theta : {5, 10, 15, 30, 45}) {
    cfg.attacks.push_back(ParsePipeline("rotate_crop_rescale(theta=" + std::to_string(theta) + ")"));
  }
  const VerificationReport report = RunVerification(cfg);
  bool ok = true;
  std::string detail;
  for (const ReportRow& row : report.rows) {
    std::size_t within = 0;
    for (const TrialRecord& r : row.records) within += std::abs(r.theta_err_deg) <= 1.0;
    const double frac = static_cast<double>(within) / row.trials;
    ok = ok && row.tpr >= 0.95 && frac >= 0.95;
    detail += (detail.empty() ? "" : "; ") + row.params +
              Fmt(" tpr %.3f, |err|<=1 in %.3f", row.tpr, frac);
  }
  return {ok, detail};
}

// 7. Clean TPR on identity and ddim-zero channels.
Outcome CleanVerification() {
  ExperimentConfig ddim = DdimZeroExperiment(7);
  ExperimentConfig identity = ddim;
  identity.channel.mode = ChannelMode::kIdentity;
  const double a = RunVerification(identity).rows[0].tpr;
  const double b = RunVerification(ddim).rows[0].tpr;
  return {a == 1.0 && b == 1.0, Fmt("identity tpr %.3f, ddim-zero tpr %.3f (200 trials each)", a, b)};
}

// 8. Identification accuracy, clean and degraded.
Outcome IdentificationAccuracy() {
  ExperimentConfig clean = DdimZeroExperiment(8);
  const IdentificationReport a = RunIdentification(clean, 4096, 1);
  ExperimentConfig degraded = DdimZeroExperiment(88);
  degraded.channel.mode = ChannelMode::kDdimNoisy;
  degraded.channel.sigma = 0.3;
  degraded.attacks = {ParsePipeline("rotate_crop_rescale(theta=45)")};
  const IdentificationReport b = RunIdentification(degraded, 256, 1);
  return {a.accuracy == 1.0 && b.accuracy >= 0.8,
          Fmt("clean 4096 users accuracy %.4f; rotate_crop_rescale(45)+sigma 0.3, 256 users accuracy "
              "%.4f",
              a.accuracy, b.accuracy)};
}

// 9. Angle-search margin nondecreasing in the injection strength.
Outcome StrengthMonotonicity() {
  const CodecLayout layout(LatentShape{}, {});
  const std::vector<double> etas = {1, 3, 5, 7, 9};
  const std::size_t seeds = 20;
  std::vector<char> mono(seeds, 0);
  std::vector<std::vector<double>> margins(seeds);
  ParallelFor(seeds, [&](std::size_t s) {
    const Seed256 master = DeriveSeed(Seed256::FromU64(9), "acceptance-eta", s);
    const LatentTensor z_T = AssembleInitialNoise(
        SampleWatermark(master, layout.payload_length()),
        DeriveKeys(master, layout.replica_count(), layout.payload_length()), layout);
    ChannelConfig channel;
    for (double eta : etas) {
      TemplateConfig tmpl;
      tmpl.eta = eta;
      margins[s].push_back(DetectAngle(Transmit(z_T, channel, tmpl, s), tmpl).runner_up_margin);
    }
    mono[s] = std::is_sorted(margins[s].begin(), margins[s].end());
  });
  const auto n_mono = static_cast<std::size_t>(std::count(mono.begin(), mono.end(), 1));
  double mean_lo = 0.0, mean_hi = 0.0;
  for (const auto& m : margins) {
    mean_lo += m.front() / seeds;
    mean_hi += m.back() / seeds;
  }
  return {n_mono == seeds, Fmt("nondecreasing on %.0f/20 seeds; mean margin %.2f at eta 1, %.2f at eta 9",
                               static_cast<double>(n_mono), mean_lo, mean_hi)};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace maxsive

int main(int argc, char** argv) {
  using namespace maxsive;
  if (argc < 2) {
    std::cerr << "usage: acceptance_test <maxsive cli> [criteria...]\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "capacity reproduction", 1.0, [&] { return Capacity(cli); }},
      {2, "gamma geometry", 10.0, GammaGeometry},
      {3, "ddim inversion", 5.0, DdimInversion},
      {4, "codec round trip", 60.0, CodecRoundTrip},
      {5, "fpr calibration", 300.0, FprCalibration},
      {6, "template angle recovery", 900.0, AngleRecovery},
      {7, "clean verification", 120.0, CleanVerification},
      {8, "identification", 1800.0, IdentificationAccuracy},
      {9, "strength monotonicity", 120.0, StrengthMonotonicity},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), seconds, c.limit_seconds,
                in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  return failed;
}
