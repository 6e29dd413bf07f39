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

#include "maxsive/codec.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "maxsive/error.h"
#include "maxsive/parallel.h"
#include "maxsive/stats.h"

namespace maxsive {
namespace {

constexpr double kRelativeVarianceFloor = 1e-13;
// Candidate latents held in memory at once by IdentifyBatch.
constexpr std::size_t kBatchLatents = 256;

// flat[k * R + i] is the latent index holding payload element k in replica i.
std::vector<std::uint32_t> GatherIndex(const ShuffleKeySet& keys,
                                       const CodecLayout& layout) {
  const std::size_t r_count = layout.replica_count();
  std::vector<std::uint32_t> flat(r_count * layout.payload_length());
  for (std::size_t i = 0; i < r_count; ++i) {
    const auto& perm = keys.perms[i];
    for (std::size_t j = 0; j < perm.size(); ++j) {
      flat[perm[j] * r_count + i] = static_cast<std::uint32_t>(layout.LatentIndex(i, j));
    }
  }
  return flat;
}

void CheckKeys(const ShuffleKeySet& keys, const CodecLayout& layout) {
  if (keys.perms.size() != layout.replica_count()) {
    throw Error(ErrorCode::kContract, "key set has " + std::to_string(keys.perms.size()) +
                                          " replicas, layout needs " +
                                          std::to_string(layout.replica_count()));
  }
  for (const auto& p : keys.perms) {
    if (p.size() != layout.payload_length()) {
      throw Error(ErrorCode::kContract, "permutation length does not match payload");
    }
  }
}

void CheckLatent(const LatentTensor& z, const CodecLayout& layout) {
  const LatentShape& s = layout.shape();
  if (z.height() != s.height || z.width() != s.width || z.channels() != s.channels) {
    throw Error(ErrorCode::kContract, "latent shape does not match codec layout");
  }
}

// Pearson of w (with precomputed sums) against the deshuffled average of z.
Score GatherScore(std::span<const double> z_flat, std::span<const std::uint32_t> gather,
                  std::size_t r_count, std::span<const double> w, double sum_w,
                  double sum_w2) {
  const std::size_t n = w.size();
  const double inv_r = 1.0 / static_cast<double>(r_count);
  double s1 = 0.0, s2 = 0.0, sw = 0.0, max_abs = 0.0;
  const std::uint32_t* g = gather.data();
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r_count; ++i) acc += z_flat[g[i]];
    g += r_count;
    acc *= inv_r;
    s1 += acc;
    s2 += acc * acc;
    sw += acc * w[k];
    max_abs = std::max(max_abs, std::abs(acc));
  }
  const double dn = static_cast<double>(n);
  const double var_hat = s2 - s1 * s1 / dn;
  const double var_w = sum_w2 - sum_w * sum_w / dn;
  const double floor = dn * (kRelativeVarianceFloor * max_abs) * (kRelativeVarianceFloor * max_abs);
  if (!(var_hat > floor) || !(var_w > 0.0) || !std::isfinite(var_hat)) return {0.0, true};
  const double r = (sw - s1 * sum_w / dn) / std::sqrt(var_hat * var_w);
  return {std::clamp(r, -1.0, 1.0), false};
}

}  // namespace

CodecLayout::CodecLayout(LatentShape shape, ReplicationConfig replication)
    : shape_(shape), replication_(replication) {
  if (shape.height == 0 || shape.width == 0 || shape.channels == 0) {
    throw Error(ErrorCode::kConfig, "latent dimensions must be positive");
  }
  if (replication.f_hw == 0 || replication.f_c == 0 ||
      shape.height % replication.f_hw != 0 || shape.width % replication.f_hw != 0 ||
      shape.channels % replication.f_c != 0) {
    throw Error(ErrorCode::kConfig,
                "f_hw=" + std::to_string(replication.f_hw) + " and f_c=" +
                    std::to_string(replication.f_c) + " must divide " +
                    std::to_string(shape.height) + "x" + std::to_string(shape.width) +
                    "x" + std::to_string(shape.channels));
  }
  block_h_ = shape.height / replication.f_hw;
  block_w_ = shape.width / replication.f_hw;
  group_c_ = shape.channels / replication.f_c;
  payload_length_ = block_h_ * block_w_ * group_c_;
  replica_count_ = replication.f_hw * replication.f_hw * replication.f_c;
  if (payload_length_ < 16) {
    throw Error(ErrorCode::kConfig, "payload length " + std::to_string(payload_length_) +
                                        " is below the minimum of 16");
  }
}

std::size_t CodecLayout::LatentIndex(std::size_t replica, std::size_t j) const {
  const std::size_t per_group = replication_.f_hw * replication_.f_hw;
  const std::size_t group = replica / per_group;
  const std::size_t block = replica % per_group;
  const std::size_t br = block / replication_.f_hw;
  const std::size_t bc = block % replication_.f_hw;
  const std::size_t plane = block_h_ * block_w_;
  const std::size_t ch = group * group_c_ + j / plane;
  const std::size_t r = br * block_h_ + (j % plane) / block_w_;
  const std::size_t c = bc * block_w_ + j % block_w_;
  return (ch * shape_.height + r) * shape_.width + c;
}

std::vector<double> SampleWatermark(const Seed256& master_seed, std::size_t length) {
  Rng rng(DeriveSeed(master_seed, "watermark", 0));
  std::vector<double> raw(length);
  rng.FillNormal(raw);
  return NormalizeUnit(raw);
}

Seed256 ReplicaSubseed(const Seed256& master_seed, std::uint32_t replica) {
  std::vector<std::uint8_t> buf(master_seed.bytes.begin(), master_seed.bytes.end());
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(replica >> (8 * i)));
  return Seed256{Sha256(buf)};
}

ShuffleKeySet DeriveKeys(const Seed256& master_seed, std::size_t replica_count,
                         std::size_t length) {
  if (replica_count == 0) throw Error(ErrorCode::kConfig, "replica count must be >= 1");
  ShuffleKeySet keys;
  keys.master_seed = master_seed;
  keys.perms.resize(replica_count);
  for (std::size_t i = 0; i < replica_count; ++i) {
    auto& perm = keys.perms[i];
    perm.resize(length);
    std::iota(perm.begin(), perm.end(), 0u);
    Rng rng(ReplicaSubseed(master_seed, static_cast<std::uint32_t>(i)));
    FisherYatesShuffle(std::span<std::uint32_t>(perm), rng);
  }
  return keys;
}

LatentTensor AssembleInitialNoise(std::span<const double> w, const ShuffleKeySet& keys,
                                  const CodecLayout& layout) {
  CheckKeys(keys, layout);
  if (w.size() != layout.payload_length()) {
    throw Error(ErrorCode::kContract, "watermark length does not match layout");
  }
  std::vector<double> flat(layout.latent_size());
  for (std::size_t i = 0; i < layout.replica_count(); ++i) {
    const auto& perm = keys.perms[i];
    for (std::size_t j = 0; j < perm.size(); ++j) flat[layout.LatentIndex(i, j)] = w[perm[j]];
  }
  const LatentShape& s = layout.shape();
  return LatentTensor::FromFlat(s.height, s.width, s.channels, flat);
}

std::vector<double> ExtractWatermark(const LatentTensor& z, const ShuffleKeySet& keys,
                                     const CodecLayout& layout) {
  CheckKeys(keys, layout);
  CheckLatent(z, layout);
  const std::vector<double> flat = z.Flatten();
  std::vector<double> acc(layout.payload_length(), 0.0);
  for (std::size_t i = 0; i < layout.replica_count(); ++i) {
    const auto& perm = keys.perms[i];
    for (std::size_t j = 0; j < perm.size(); ++j) acc[perm[j]] += flat[layout.LatentIndex(i, j)];
  }
  const double inv = 1.0 / static_cast<double>(layout.replica_count());
  for (double& v : acc) v *= inv;
  return acc;
}

Score ScoreWatermark(std::span<const double> w, std::span<const double> w_hat) {
  try {
    return {Pearson(w, w_hat), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
    return {0.0, true};
  }
}

void UserRegistry::Add(std::uint64_t user_id, const Seed256& master_seed) {
  for (const UserEntry& e : entries_) {
    if (e.user_id == user_id) {
      throw Error(ErrorCode::kInvalidInput, "duplicate user id " + std::to_string(user_id));
    }
    if (e.master_seed == master_seed) {
      throw Error(ErrorCode::kInvalidInput, "duplicate master seed for user " +
                                                std::to_string(user_id));
    }
  }
  entries_.push_back({user_id, master_seed,
                      SampleWatermark(master_seed, layout_.payload_length())});
}

Identification Identify(const LatentTensor& z, const UserRegistry& registry) {
  return IdentifyBatch({{z}}, registry).front();
}

std::vector<Identification> IdentifyBatch(
    const std::vector<std::vector<LatentTensor>>& images, const UserRegistry& registry) {
  return RegistryIndex(registry).Identify(images);
}

RegistryIndex::RegistryIndex(const UserRegistry& registry, std::size_t shortlist)
    : registry_(registry), shortlist_(shortlist) {
  if (registry.size() == 0) throw Error(ErrorCode::kInvalidInput, "registry is empty");
  const CodecLayout& layout = registry.layout();
  const auto& users = registry.entries();
  const std::size_t d = layout.latent_size();
  gathers_.resize(users.size());
  sum_w_.assign(users.size(), 0.0);
  sum_w2_.assign(users.size(), 0.0);
  if (Screening()) templates_.assign(users.size() * d, 0.0f);
  ParallelFor(users.size(), [&](std::size_t u) {
    const ShuffleKeySet keys =
        DeriveKeys(users[u].master_seed, layout.replica_count(), layout.payload_length());
    gathers_[u] = GatherIndex(keys, layout);
    for (double v : users[u].watermark) {
      sum_w_[u] += v;
      sum_w2_[u] += v * v;
    }
    if (Screening()) {
      // Row u holds the user's assembled latent, so that a latent's inner
      // product with it is R times the payload cross term.
      float* row = templates_.data() + u * d;
      for (std::size_t i = 0; i < layout.replica_count(); ++i) {
        for (std::size_t j = 0; j < layout.payload_length(); ++j) {
          row[layout.LatentIndex(i, j)] = static_cast<float>(users[u].watermark[keys.perms[i][j]]);
        }
      }
    }
  });
}

bool RegistryIndex::Screening() const {
  return shortlist_ > 0 && shortlist_ < registry_.size();
}

std::vector<Identification> RegistryIndex::Identify(
    const std::vector<std::vector<LatentTensor>>& images) const {
  const CodecLayout& layout = registry_.layout();
  const auto& users = registry_.entries();
  const std::size_t r_count = layout.replica_count();
  const std::size_t d = layout.latent_size();
  const double dn = static_cast<double>(layout.payload_length());
  std::vector<Identification> out(images.size());
  std::size_t begin = 0;
  while (begin < images.size()) {
    // Chunk of images whose candidates fit the batch budget.
    std::size_t end = begin, held = 0;
    do {
      held += images[end].size();
      ++end;
    } while (end < images.size() && held + images[end].size() <= kBatchLatents);

    const std::size_t n_images = end - begin;
    std::vector<std::vector<std::vector<double>>> flats(n_images);
    for (std::size_t k = begin; k < end; ++k) {
      if (images[k].empty()) throw Error(ErrorCode::kInvalidInput, "image has no candidates");
      for (const LatentTensor& cand : images[k]) {
        CheckLatent(cand, layout);
        flats[k - begin].push_back(cand.Flatten());
      }
    }

    // Users scored exactly on image k; everyone without screening.
    std::vector<std::vector<std::size_t>> shortlists(n_images);
    if (Screening()) {
      using RowMajor = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      Eigen::Map<const RowMajor> templates(templates_.data(),
                                           static_cast<Eigen::Index>(users.size()),
                                           static_cast<Eigen::Index>(d));
      RowMajor x(static_cast<Eigen::Index>(held), static_cast<Eigen::Index>(d));
      std::vector<double> sums(held, 0.0);
      std::size_t row = 0;
      for (const auto& image : flats) {
        for (const auto& flat : image) {
          for (std::size_t e = 0; e < d; ++e) {
            x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(e)) =
                static_cast<float>(flat[e]);
            sums[row] += flat[e];
          }
          ++row;
        }
      }
      const Eigen::MatrixXf cross = x * templates.transpose();
      row = 0;
      for (std::size_t k = 0; k < n_images; ++k) {
        std::vector<std::size_t>& keep = shortlists[k];
        for (std::size_t c = 0; c < flats[k].size(); ++c, ++row) {
          // Pearson numerator over the watermark spread; the estimate's
          // variance is nearly the same for every user and is left out here.
          const double s1 = sums[row] / static_cast<double>(r_count);
          std::vector<std::pair<double, std::size_t>> stat(users.size());
          for (std::size_t u = 0; u < users.size(); ++u) {
            const double cov = cross(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(u)) /
                                   static_cast<double>(r_count) -
                               s1 * sum_w_[u] / dn;
            stat[u] = {-cov / std::sqrt(std::max(sum_w2_[u] - sum_w_[u] * sum_w_[u] / dn, 1e-300)),
                       u};
          }
          std::partial_sort(stat.begin(), stat.begin() + static_cast<std::ptrdiff_t>(shortlist_),
                            stat.end());
          for (std::size_t t = 0; t < shortlist_; ++t) keep.push_back(stat[t].second);
        }
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
      }
    } else {
      std::vector<std::size_t> all(users.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      shortlists.assign(n_images, all);
    }

    ParallelFor(n_images, [&](std::size_t k) {
      Identification best{0, -2.0};
      bool first = true;
      for (std::size_t u : shortlists[k]) {
        double s = -2.0;
        for (const auto& flat : flats[k]) {
          s = std::max(s, GatherScore(flat, gathers_[u], r_count, users[u].watermark, sum_w_[u],
                                      sum_w2_[u])
                              .value);
        }
        if (first || s > best.score || (s == best.score && users[u].user_id < best.user_id)) {
          best = {users[u].user_id, s};
          first = false;
        }
      }
      out[begin + k] = best;
    });
    begin = end;
  }
  return out;
}

}  // namespace maxsive
