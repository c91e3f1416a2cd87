// mixprint/decision.hpp
//
// Copyright 2026 the mixprint authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Group-level decision logic for simultaneous speakers. A probe is first
// tested for inclusion against the full mixture of the group; if it belongs,
// the owner is picked by combining two rankings: closeness by Manhattan
// score, and distance from the leave-one-out mixtures (a probe should be far
// from the mixture that is missing its own speaker).

#ifndef MIXPRINT_DECISION_HPP_
#define MIXPRINT_DECISION_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mixprint/config.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/parallel.hpp"
#include "mixprint/types.hpp"
#include "mixprint/voiceprint.hpp"

namespace mixprint {

/// One enrollment sentence: audio plus its solo feature vector.
struct EnrollmentSentence {
  std::string sentence_id;
  std::shared_ptr<const Waveform> audio;
  MfccVector features;
};

struct GroupSpeaker {
  std::string speaker_id;
  std::vector<EnrollmentSentence> sentences;
};

/// The raw material of a group: members with their enrollment audio.
struct SpeakerGroup {
  std::vector<GroupSpeaker> speakers;
};

/// Fills in each sentence's feature vector from its audio.
void attach_features(SpeakerGroup& group, const PipelineConfig& cfg,
                     Exec exec = Exec::kParallel);

/// All proper subsets with 2..N-1 members, ordered by (size, lexicographic
/// id sequence). N < 3 is a ValidationError.
std::vector<std::vector<std::string>> enumerate_subsets(
    const std::vector<std::string>& speaker_ids);

/// Canonical key for a subset: sorted ids joined with '+'.
std::string subset_key(std::vector<std::string> ids);

/// Thread-safe memo for mixed-sentence feature vectors, keyed by the exact
/// (speaker, sentence) pairs that went into the mix. Entries are pure
/// function values, so concurrent fills are harmless. Valid only within one
/// pipeline configuration.
class MixtureFeatureCache {
 public:
  std::optional<Coeffs> lookup(const std::string& key) const;
  void store(const std::string& key, const Coeffs& value);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, Coeffs> map_;
};

/// Voiceprint of a subset's blended audio: for each enrollment sentence
/// index, the members' waveforms are mixed with equal gains and run through
/// the feature pipeline; the resulting vectors are enrolled as one model.
/// A one-member subset degenerates to re-enrolling that speaker's own
/// sentences; the full group is allowed (that model backs the inclusion
/// test).
Voiceprint mixture_voiceprint(const std::vector<std::string>& subset,
                              const SpeakerGroup& group,
                              const PipelineConfig& cfg,
                              MixtureFeatureCache* cache = nullptr,
                              Exec exec = Exec::kParallel);

/// Outcome of the inclusion test. margin is probe_mean minus the largest
/// member baseline; the probe is included iff margin <= tau.
struct InclusionVerdict {
  bool included = false;
  double probe_mean = 0.0;
  /// Mean distance between each member's voiceprint and the full mixture,
  /// aligned with GroupModel::speaker_ids().
  std::vector<double> baseline_means;
  double margin = 0.0;
};

/// Everything identify() derives for one probe. Vectors align with
/// GroupModel::speaker_ids().
struct IdentificationVerdict {
  /// Empty when the probe was judged to be none of the group.
  std::optional<std::string> decision;
  InclusionVerdict inclusion;
  std::vector<double> manhattan_scores;
  std::vector<int> manhattan_ranks;   // 1 = closest by Manhattan score
  std::vector<int> exclusion_ranks;   // 1 = least likely (matched pairs)
  std::vector<int> reverse_ranks;     // 1 = farthest from leave-one-out mix
  std::vector<int> combined_ranks;    // manhattan_rank + reverse_rank
};

/// A fully modeled group: per-speaker voiceprints plus mixture models for
/// every enumerated subset and for the whole group. Construction is the
/// build phase; afterwards the model is immutable and identification over
/// many probes may run concurrently against it.
class GroupModel {
 public:
  /// Requires >= 3 uniquely named speakers, each with >= 2 sentences carrying
  /// audio and features at a common sample rate.
  static GroupModel build(const SpeakerGroup& group, const PipelineConfig& cfg,
                          Exec exec = Exec::kParallel,
                          MixtureFeatureCache* cache = nullptr);

  int size() const { return static_cast<int>(speaker_ids_.size()); }
  const PipelineConfig& config() const { return cfg_; }

  /// Sorted lexicographically; every per-speaker vector in the verdicts is
  /// aligned with this order.
  const std::vector<std::string>& speaker_ids() const { return speaker_ids_; }

  const std::vector<std::vector<std::string>>& subsets() const {
    return subsets_;
  }

  const Voiceprint& speaker_voiceprint(const std::string& id) const;

  /// Model for any subset of 1..N members (singletons resolve to the
  /// speaker's own voiceprint, the full set to the group mixture).
  const Voiceprint& subset_voiceprint(
      const std::vector<std::string>& subset) const;

  const Voiceprint& full_mixture() const { return full_mixture_; }

 private:
  GroupModel() = default;

  PipelineConfig cfg_;
  std::vector<std::string> speaker_ids_;
  std::vector<std::vector<std::string>> subsets_;
  std::unordered_map<std::string, Voiceprint> by_key_;
  Voiceprint full_mixture_;
};

/// Compares the probe's mean distance to the full mixture against the
/// members' own baselines: included iff mean(D_probe) <= max over members of
/// mean(D_member) + tau. Ties are included.
InclusionVerdict inclusion_test(const MfccVector& v, const GroupModel& model,
                                double tau);

/// Matched-pair contrast per speaker W: the mean, over every enumerated
/// subset T containing W paired with T minus W (identical remainder), of
/// mean(D(v, T)) - mean(D(v, T\W)). A large score means adding W pushes
/// mixtures away from the probe, so W is unlikely to be its owner.
std::vector<double> exclusion_scores(const MfccVector& v,
                                     const GroupModel& model);

/// Ranks by descending exclusion score: rank 1 = least likely owner. Ties
/// break lexicographically by speaker id.
std::vector<int> exclusion_ranking(const MfccVector& v,
                                   const GroupModel& model);

/// The complete decision. Inclusion gate first; then speakers are ranked by
/// ascending Manhattan score and by descending distance to their
/// leave-one-out mixture, and the decision minimizes the rank sum (ties:
/// lower Manhattan score, then lexicographic id).
IdentificationVerdict identify(const MfccVector& v, const GroupModel& model);

}  // namespace mixprint

#endif  // MIXPRINT_DECISION_HPP_
