// mixprint/mfcc.hpp
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
// Cepstral coefficients from mel filterbank log energies, and their
// aggregation into one 13-value vector per sentence.

#ifndef MIXPRINT_MFCC_HPP_
#define MIXPRINT_MFCC_HPP_

#include <span>
#include <string>
#include <vector>

#include "mixprint/config.hpp"
#include "mixprint/mel.hpp"
#include "mixprint/parallel.hpp"
#include "mixprint/signal.hpp"
#include "mixprint/types.hpp"

namespace mixprint {

/// Identifies where a feature vector came from: a speaker or probe label
/// plus a sentence label.
struct SourceId {
  std::string speaker;
  std::string sentence;

  bool operator==(const SourceId&) const = default;
};

/// Cepstral coefficients of a single frame.
using MfccFrame = Coeffs;

/// The sentence-level feature vector: 13 coefficients plus provenance.
struct MfccVector {
  Coeffs c{};
  SourceId source;
};

/// C_n = sum_{k=1..N} log(S_k) * cos(pi*n*(k-0.5)/N), with the first 13
/// coefficients kept: n = 0..12, or n = 1..13 when skip_c0 is set. Requires
/// at least 13 filters and strictly positive energies.
MfccFrame dct_cepstrum(const MelEnergies& energies, LogBase log_base,
                       bool skip_c0 = false);

/// Per-dimension arithmetic mean over the frames.
MfccVector aggregate_sentence(const std::vector<MfccFrame>& frames,
                              SourceId source = {});

/// Immutable pipeline state for one (config, sample_rate) pair: window
/// coefficients, FFT plan, filterbank, and DCT table are computed once and
/// shared read-only across frames and threads.
class MfccExtractor {
 public:
  MfccExtractor(const PipelineConfig& cfg, int sample_rate);

  int sample_rate() const { return sample_rate_; }
  int frame_length() const { return frame_length_; }
  int hop() const { return hop_; }
  int fft_size() const { return fft_size_; }
  const MelFilterbank& filterbank() const { return filterbank_; }

  /// One frame through window -> FFT power -> mel energies -> DCT.
  MfccFrame frame_coefficients(std::span<const double> frame) const;

  /// All frames of the waveform. The frame loop is the parallel kernel;
  /// results land in preassigned slots, so kSerial and kParallel agree
  /// bit for bit.
  std::vector<MfccFrame> frames(const Waveform& w,
                                Exec exec = Exec::kParallel) const;

  /// Frames aggregated to the sentence vector.
  MfccVector sentence(const Waveform& w, SourceId source = {},
                      Exec exec = Exec::kParallel) const;

 private:
  PipelineConfig cfg_;
  int sample_rate_;
  int frame_length_;
  int hop_;
  int fft_size_;
  std::vector<double> window_;
  FftPlan plan_;
  MelFilterbank filterbank_;
  std::vector<double> dct_table_;
};

}  // namespace mixprint

#endif  // MIXPRINT_MFCC_HPP_
