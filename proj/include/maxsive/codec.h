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

#ifndef MAXSIVE_CODEC_H_
#define MAXSIVE_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxsive/grid.h"
#include "maxsive/random.h"

namespace maxsive {

struct LatentShape {
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t channels = 4;

  friend bool operator==(const LatentShape&, const LatentShape&) = default;
};

// The payload is replicated f_c * f_hw * f_hw times across the latent.
struct ReplicationConfig {
  std::size_t f_hw = 2;
  std::size_t f_c = 1;

  friend bool operator==(const ReplicationConfig&, const ReplicationConfig&) = default;
};

// Fixed tiling of replicas over the latent. The h x w plane is split into an
// f_hw x f_hw grid of blocks and the channel axis into f_c groups. Replica
// index order is channel-group-major, then row-major over blocks; inside a
// block, elements are flattened as (channel, row, col).
class CodecLayout {
 public:
  CodecLayout(LatentShape shape, ReplicationConfig replication);

  const LatentShape& shape() const { return shape_; }
  const ReplicationConfig& replication() const { return replication_; }
  std::size_t payload_length() const { return payload_length_; }
  std::size_t replica_count() const { return replica_count_; }
  std::size_t latent_size() const {
    return shape_.height * shape_.width * shape_.channels;
  }

  // Channel-major flat latent index of element j of replica i.
  std::size_t LatentIndex(std::size_t replica, std::size_t j) const;

 private:
  LatentShape shape_;
  ReplicationConfig replication_;
  std::size_t block_h_ = 0;
  std::size_t block_w_ = 0;
  std::size_t group_c_ = 0;
  std::size_t payload_length_ = 0;
  std::size_t replica_count_ = 0;
};

// Per-replica permutations of [0, L). Replica i places w[perm[i][j]] at its
// local position j.
struct ShuffleKeySet {
  Seed256 master_seed;
  std::vector<std::vector<std::uint32_t>> perms;
};

// Standard-normal draw of `length` values from the "watermark" stream of
// `master_seed`, normalized to mean 0 and population std 1.
std::vector<double> SampleWatermark(const Seed256& master_seed, std::size_t length);

// SHA-256(master_seed || u32le(replica)).
Seed256 ReplicaSubseed(const Seed256& master_seed, std::uint32_t replica);

// Replica i's permutation is a Fisher-Yates shuffle of the identity driven by
// Rng(ReplicaSubseed(master_seed, i)).
ShuffleKeySet DeriveKeys(const Seed256& master_seed, std::size_t replica_count,
                         std::size_t length);

LatentTensor AssembleInitialNoise(std::span<const double> w,
                                  const ShuffleKeySet& keys,
                                  const CodecLayout& layout);

// Slices z'_T by the tiling, undoes each replica's permutation and averages.
std::vector<double> ExtractWatermark(const LatentTensor& z,
                                     const ShuffleKeySet& keys,
                                     const CodecLayout& layout);

struct Score {
  double value = 0.0;
  bool degenerate = false;
};

// Pearson correlation; a degenerate (zero-variance) estimate scores 0 with
// the flag set.
Score ScoreWatermark(std::span<const double> w, std::span<const double> w_hat);

// One registered user. The watermark is re-derived from the seed.
struct UserEntry {
  std::uint64_t user_id = 0;
  Seed256 master_seed;
  std::vector<double> watermark;
};

class UserRegistry {
 public:
  explicit UserRegistry(const CodecLayout& layout) : layout_(layout) {}

  // Throws kInvalidInput on a duplicate id or seed.
  void Add(std::uint64_t user_id, const Seed256& master_seed);

  const CodecLayout& layout() const { return layout_; }
  const std::vector<UserEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  CodecLayout layout_;
  std::vector<UserEntry> entries_;
};

struct Identification {
  std::uint64_t user_id = 0;
  double score = 0.0;
};

// Argmax over users of the score of the user's own decode; ties go to the
// lowest user id.
Identification Identify(const LatentTensor& z, const UserRegistry& registry);

// Precomputed per-user tables for repeated identification.
//
// With a shortlist K > 0 (and smaller than the registry) users are screened
// first: the Pearson numerator is linear in the latent, so one float matrix
// product ranks every user on every candidate, and only the K best users of
// each candidate are scored exactly. The winner is the exact argmax over the
// union of those shortlists. K = 0 scores every user exactly. Memory is
// replica_count * L * 4 bytes per user, doubled when screening.
inline constexpr std::size_t kDefaultShortlist = 32;

class RegistryIndex {
 public:
  explicit RegistryIndex(const UserRegistry& registry,
                         std::size_t shortlist = kDefaultShortlist);

  // images[k] lists the candidate latents of image k (for example the
  // branches of a geometric correction); a user's score on an image is the
  // maximum over its candidates.
  std::vector<Identification> Identify(
      const std::vector<std::vector<LatentTensor>>& images) const;

 private:
  bool Screening() const;

  const UserRegistry& registry_;
  std::size_t shortlist_;
  std::vector<std::vector<std::uint32_t>> gathers_;
  std::vector<float> templates_;  // users x latent_size, row-major
  std::vector<double> sum_w_;
  std::vector<double> sum_w2_;
};

// Batched identification; see RegistryIndex::Identify.
std::vector<Identification> IdentifyBatch(
    const std::vector<std::vector<LatentTensor>>& images,
    const UserRegistry& registry);

}  // namespace maxsive

#endif  // MAXSIVE_CODEC_H_
