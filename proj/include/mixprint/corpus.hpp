// mixprint/corpus.hpp
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
// Corpus handling and the trial harness: manifests mapping (speaker,
// sentence) to audio, a deterministic synthetic corpus, and the error-rate
// evaluation over randomly sampled groups.

#ifndef MIXPRINT_CORPUS_HPP_
#define MIXPRINT_CORPUS_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mixprint/config.hpp"
#include "mixprint/decision.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/parallel.hpp"
#include "mixprint/synth.hpp"
#include "mixprint/types.hpp"

namespace mixprint {

/// Audio synthesized on demand instead of read from disk.
struct SynthSource {
  SpeakerProfile profile;
  std::uint64_t sentence_seed = 0;
  double duration_seconds = 1.0;
  int sample_rate = 16000;
};

/// One manifest line. text_id groups sentences that share the same words;
/// two entries with equal text_id are the "same text" condition.
struct ManifestEntry {
  std::string speaker_id;
  std::string sentence_id;
  std::string text_id;
  std::variant<std::filesystem::path, SynthSource> source;

  bool is_synth() const {
    return std::holds_alternative<SynthSource>(source);
  }
};

struct Manifest {
  /// Relative WAV paths resolve against this.
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;

  std::vector<std::string> speaker_ids() const;
  std::vector<const ManifestEntry*> entries_for(
      const std::string& speaker_id) const;
  const ManifestEntry* find(const std::string& speaker_id,
                            const std::string& sentence_id) const;

  /// Collects every violation (duplicate speaker+sentence pairs, empty
  /// fields, malformed ids) instead of stopping at the first.
  std::vector<std::string> validate() const;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const Manifest& m);

/// Parses one manifest line (no comment stripping). Exposed for tests.
ManifestEntry parse_manifest_entry(const std::string& line);
std::string format_manifest_entry(const ManifestEntry& e);

/// Deterministic all-synthetic corpus. Speaker voices are spread across a
/// band of fundamentals and formant layouts derived from the seed; sentence
/// content is driven by per-text seeds, so entries sharing a text_id share
/// the sentence seed and differ only by voice. same_text_pairs extra
/// sentences per speaker reuse the text of another speaker's sentence.
Manifest generate_synthetic_corpus(std::uint64_t seed, int num_speakers,
                                   int sentences_per_speaker,
                                   int same_text_pairs = 0,
                                   double duration_seconds = 1.0,
                                   int sample_rate = 16000);

/// Loads audio and solo features lazily and memoizes them. Thread safe; the
/// cached values are pure functions of the manifest entry and the pipeline
/// configuration, so races only duplicate work.
class CorpusStore {
 public:
  CorpusStore(Manifest manifest, PipelineConfig cfg);

  const Manifest& manifest() const { return manifest_; }
  const PipelineConfig& config() const { return cfg_; }

  std::shared_ptr<const Waveform> waveform(const std::string& speaker_id,
                                           const std::string& sentence_id);
  MfccVector features(const std::string& speaker_id,
                      const std::string& sentence_id);

  /// Assembles a group with enrollment audio and features for the given
  /// members, using the listed sentence ids per member.
  SpeakerGroup group(
      const std::vector<std::string>& speaker_ids,
      const std::map<std::string, std::vector<std::string>>& sentences);

 private:
  std::shared_ptr<const MfccExtractor> extractor(int sample_rate);

  Manifest manifest_;
  PipelineConfig cfg_;
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>,
           std::shared_ptr<const Waveform>>
      wave_cache_;
  std::map<std::pair<std::string, std::string>, MfccVector> feature_cache_;
  std::map<int, std::shared_ptr<const MfccExtractor>> extractors_;
};

enum class Split {
  kSameText,      // probe text also among the enrolled sentences
  kDistinctText,  // probe text absent from enrollment
};

std::string split_name(Split s);
Split split_from_name(const std::string& name);

/// What to evaluate: which group sizes, which text conditions, how many
/// trials each, and the base seed that makes the whole run reproducible.
struct TrialSpec {
  std::vector<int> group_sizes = {3, 4, 5};
  std::vector<Split> splits = {Split::kSameText, Split::kDistinctText};
  int trials_per_condition = 40;
  std::uint64_t rng_seed = 42;
  bool include_outsider_probes = false;
  int enrollment_count = 8;

  void validate(const Manifest& m) const;
};

/// Counters for one (group size, split) condition.
struct ConditionStats {
  int group_size = 0;
  Split split = Split::kSameText;
  int trials = 0;
  int member_probes = 0;
  int outsider_probes = 0;
  int inclusion_errors = 0;       // wrong include/exclude calls, any probe
  int included_member_probes = 0; // member probes that passed inclusion
  int identification_errors = 0;  // wrong owner among those

  double inclusion_error_rate() const;
  double identification_error_rate() const;
};

struct ErrorReport {
  TrialSpec spec;
  std::vector<ConditionStats> conditions;

  const ConditionStats* find(int group_size, Split split) const;
};

/// Runs the full protocol: for each condition and trial index, sample a
/// group, pick a probe sentence, enroll the rest, and score the decision.
/// Deterministic for a given (manifest, config, spec) triple; the parallel
/// policy changes timing only, never counts.
ErrorReport run_trials(CorpusStore& store, const TrialSpec& spec,
                       Exec exec = Exec::kParallel);

/// Identification error as a function of how many sentences were enrolled.
struct CurvePoint {
  int enrollment_count = 0;
  int member_probes = 0;
  int included_member_probes = 0;
  int identification_errors = 0;

  double identification_error_rate() const;
};

/// Reruns identification at each enrollment count with common random
/// numbers: the sampled group and probe depend only on the trial index, so
/// points differ in enrollment size alone.
std::vector<CurvePoint> error_curve(CorpusStore& store, const TrialSpec& spec,
                                    const std::vector<int>& enrollment_counts,
                                    Exec exec = Exec::kParallel);

/// Text serialization, stable to the last bit (doubles as %.17g). Identical
/// runs export byte-identical reports.
void export_report(std::ostream& os, const ErrorReport& report);
ErrorReport parse_report(std::istream& is);

void export_curve(std::ostream& os, const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> parse_curve(std::istream& is);

}  // namespace mixprint

#endif  // MIXPRINT_CORPUS_HPP_
