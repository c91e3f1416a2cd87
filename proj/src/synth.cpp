// mixprint/synth.cpp
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

#include "mixprint/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mixprint/rng.hpp"

namespace mixprint {

void SpeakerProfile::validate() const {
  if (speaker_id.empty()) {
    throw ValidationError("speaker_id must not be empty");
  }
  if (!(fundamental_hz >= 60.0 && fundamental_hz <= 400.0)) {
    throw ValidationError("fundamental_hz must lie in [60, 400]");
  }
  if (formants.size() < 3) {
    throw ValidationError("profile needs at least three formants");
  }
  double prev = 0.0;
  for (const Formant& f : formants) {
    if (!(f.center_hz > prev)) {
      throw ValidationError("formant centers must be strictly increasing");
    }
    if (!(f.gain >= 0.0)) {
      throw ValidationError("formant gains must be non-negative");
    }
    prev = f.center_hz;
  }
}

namespace {

/// Spectral envelope at frequency f for the k-th harmonic: a gently decaying
/// base keeps every harmonic audible (the mixing tests look for fundamental
/// peaks), and each formant adds a Gaussian bump whose width grows with its
/// center.
double envelope_at(const SpeakerProfile& p, double f, int k) {
  double e = 0.12 / (1.0 + 0.15 * (k - 1));
  for (const Formant& fo : p.formants) {
    const double bw = 60.0 + 0.07 * fo.center_hz;
    const double z = (f - fo.center_hz) / bw;
    e += fo.gain * std::exp(-z * z);
  }
  return e;
}

}  // namespace

Waveform synth_speaker(const SpeakerProfile& profile,
                       std::uint64_t sentence_seed, double duration_seconds,
                       int sample_rate) {
  profile.validate();
  if (!(duration_seconds > 0.0)) {
    throw ValidationError("duration must be positive");
  }
  if (sample_rate <= 0) {
    throw ValidationError("sample_rate must be positive");
  }

  const long num_samples = std::lround(duration_seconds * sample_rate);
  if (num_samples <= 0) {
    throw ValidationError("duration too short for one sample");
  }

  Rng rng(mix_seed(profile.jitter_seed, sentence_seed));

  // Sentence content: slow amplitude and pitch modulation. Draw order is
  // part of the output contract; changing it changes every corpus.
  struct Am {
    double depth, rate, phase;
  };
  std::array<Am, 3> am{};
  for (Am& a : am) {
    a.depth = rng.next_in(0.05, 0.15);
    a.rate = rng.next_in(0.8, 6.0);
    a.phase = rng.next_in(0.0, 2.0 * std::numbers::pi);
  }
  const double fm_depth = rng.next_in(0.005, 0.02);
  const double fm_rate = rng.next_in(1.5, 5.0);
  const double fm_phase = rng.next_in(0.0, 2.0 * std::numbers::pi);

  const double f0 = profile.fundamental_hz;
  const int num_harmonics =
      static_cast<int>(std::floor(0.45 * sample_rate / f0));
  std::vector<double> amp(static_cast<std::size_t>(num_harmonics));
  std::vector<double> phase0(static_cast<std::size_t>(num_harmonics));
  for (int k = 1; k <= num_harmonics; ++k) {
    amp[static_cast<std::size_t>(k - 1)] = envelope_at(profile, k * f0, k);
    phase0[static_cast<std::size_t>(k - 1)] =
        rng.next_in(0.0, 2.0 * std::numbers::pi);
  }

  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(static_cast<std::size_t>(num_samples));

  // The fundamental's phase is integrated sample by sample so the pitch
  // wobble stays continuous; harmonic k rides at k times that phase, which
  // keeps the complex exactly harmonic at every instant.
  double base_phase = 0.0;
  const double dt = 1.0 / sample_rate;
  double peak = 0.0;
  for (long n = 0; n < num_samples; ++n) {
    const double t = n * dt;
    const double inst_f0 =
        f0 * (1.0 + fm_depth *
                        std::sin(2.0 * std::numbers::pi * fm_rate * t +
                                 fm_phase));
    double a = 1.0;
    for (const Am& m : am) {
      a += m.depth * std::sin(2.0 * std::numbers::pi * m.rate * t + m.phase);
    }
    double s = 0.0;
    for (int k = 1; k <= num_harmonics; ++k) {
      s += amp[static_cast<std::size_t>(k - 1)] *
           std::sin(k * base_phase + phase0[static_cast<std::size_t>(k - 1)]);
    }
    s *= a;
    w.samples[static_cast<std::size_t>(n)] = s;
    peak = std::max(peak, std::abs(s));
    base_phase += 2.0 * std::numbers::pi * inst_f0 * dt;
  }

  if (peak > 0.0) {
    const double scale = 0.9 / peak;
    for (double& s : w.samples) s *= scale;
  }
  return w;
}

}  // namespace mixprint
