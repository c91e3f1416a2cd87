// mixprint/signal.hpp
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
// Short-time analysis front-end: mixing, frame blocking, windowing, power
// spectra, spectrograms.

#ifndef MIXPRINT_SIGNAL_HPP_
#define MIXPRINT_SIGNAL_HPP_

#include <complex>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mixprint/parallel.hpp"
#include "mixprint/types.hpp"

namespace mixprint {

enum class WindowKind { kRectangular, kHamming };

/// Parses "rectangular" or "hamming"; anything else is a ValidationError.
WindowKind window_from_name(std::string_view name);
std::string_view window_name(WindowKind kind);

/// Window coefficients of the given length. Hamming is
/// 0.54 - 0.46*cos(2*pi*n/(L-1)).
std::vector<double> window_coefficients(WindowKind kind, int length);

/// Fixed-length analysis frames taken at hop intervals.
struct FrameSequence {
  std::vector<std::vector<double>> frames;
  int frame_length = 0;
  int hop = 0;
  int sample_rate = 0;
};

/// One-sided power spectrum, bins 0..fft_size/2.
struct PowerSpectrum {
  std::vector<double> bins;
  double bin_width_hz = 0.0;
};

struct MixResult {
  Waveform waveform;
  /// True when rounding pushed the weighted average outside [-1, 1] and the
  /// output had to be clipped.
  bool clipped = false;
};

/// Sample-wise weighted average of the inputs, normalized by the sum of
/// gains. Shorter inputs are zero-padded to the longest. All inputs must
/// share a sample rate; gains must be non-negative with a positive sum.
MixResult mix(const std::vector<Waveform>& waveforms,
              const std::vector<double>& gains);

/// Cuts the waveform into frames of frame_ms every hop_ms. The trailing
/// partial frame is discarded. Requires frame_ms >= hop_ms > 0 and a
/// waveform at least one frame long.
FrameSequence frame_blocking(const Waveform& w, double frame_ms,
                             double hop_ms);

/// Point-wise multiplication of every frame by the window.
FrameSequence apply_window(const FrameSequence& fs, WindowKind kind);

/// Smallest power of two >= n.
int next_pow2(int n);

/// Radix-2 decimation-in-time FFT with precomputed twiddles and bit-reversal
/// table. Reused across the frames of a sentence.
class FftPlan {
 public:
  /// size must be a power of two >= 1.
  explicit FftPlan(int size);

  int size() const { return size_; }

  /// In-place forward transform of size() complex values.
  void transform(std::complex<double>* buf) const;

 private:
  int size_;
  std::vector<int> bit_reverse_;
  std::vector<std::complex<double>> twiddle_;
};

/// |DFT|^2 of the frame zero-padded to the next power of two, bins
/// 0..fft_size/2. The empty frame is a ValidationError.
PowerSpectrum fft_power(std::span<const double> frame, int sample_rate);
PowerSpectrum fft_power(std::span<const double> frame, int sample_rate,
                        const FftPlan& plan);

/// Frames x bins power matrix.
struct Spectrogram {
  std::vector<std::vector<double>> power;
  double bin_width_hz = 0.0;
};

Spectrogram spectrogram(const Waveform& w, double frame_ms, double hop_ms,
                        WindowKind window = WindowKind::kHamming,
                        Exec exec = Exec::kParallel);

/// Plain-text export: one frame per row, space-separated decimal values.
void write_spectrogram(std::ostream& os, const Spectrogram& sg);

}  // namespace mixprint

#endif  // MIXPRINT_SIGNAL_HPP_
