// mixprint/synth.hpp
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
// Deterministic synthetic speakers: harmonic complexes shaped by a formant
// envelope, with seed-driven slow amplitude/frequency modulation standing in
// for sentence content. Desk-scale stand-ins for recorded voices.

#ifndef MIXPRINT_SYNTH_HPP_
#define MIXPRINT_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mixprint/types.hpp"

namespace mixprint {

struct Formant {
  double center_hz = 0.0;
  double gain = 0.0;
};

struct SpeakerProfile {
  std::string speaker_id;
  double fundamental_hz = 0.0;
  /// At least three formants, centers strictly increasing, gains >= 0.
  std::vector<Formant> formants;
  std::uint64_t jitter_seed = 0;

  void validate() const;
};

/// Pure function of (profile, sentence_seed, duration, sample_rate): the same
/// arguments always produce the bit-identical waveform. Output is
/// peak-normalized to 0.9.
Waveform synth_speaker(const SpeakerProfile& profile,
                       std::uint64_t sentence_seed, double duration_seconds,
                       int sample_rate);

}  // namespace mixprint

#endif  // MIXPRINT_SYNTH_HPP_
