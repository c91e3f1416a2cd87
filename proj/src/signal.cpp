// mixprint/signal.cpp
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

#include "mixprint/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "mixprint/parallel.hpp"

namespace mixprint {

void Waveform::validate() const {
  if (sample_rate <= 0) {
    throw ValidationError("sample_rate must be positive, got " +
                          std::to_string(sample_rate));
  }
  for (double s : samples) {
    if (!(s >= -1.0 && s <= 1.0)) {
      throw ValidationError("sample outside [-1, 1]");
    }
  }
}

WindowKind window_from_name(std::string_view name) {
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "rectangular") return WindowKind::kRectangular;
  throw ValidationError("unknown window: " + std::string(name));
}

std::string_view window_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHamming:
      return "hamming";
    case WindowKind::kRectangular:
      return "rectangular";
  }
  throw ValidationError("invalid window kind");
}

std::vector<double> window_coefficients(WindowKind kind, int length) {
  if (length <= 0) {
    throw ValidationError("window length must be positive");
  }
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (kind == WindowKind::kHamming && length > 1) {
    const double denom = static_cast<double>(length - 1);
    for (int n = 0; n < length; ++n) {
      w[static_cast<std::size_t>(n)] =
          0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
    }
  }
  return w;
}

MixResult mix(const std::vector<Waveform>& waveforms,
              const std::vector<double>& gains) {
  if (waveforms.empty()) {
    throw ValidationError("mix requires at least one waveform");
  }
  if (gains.size() != waveforms.size()) {
    throw ValidationError("mix gain count does not match waveform count");
  }
  double gain_sum = 0.0;
  for (double g : gains) {
    if (!(g >= 0.0)) throw ValidationError("mix gains must be non-negative");
    gain_sum += g;
  }
  if (!(gain_sum > 0.0)) {
    throw ValidationError("mix gains must not all be zero");
  }
  const int rate = waveforms.front().sample_rate;
  std::size_t longest = 0;
  for (const auto& w : waveforms) {
    w.validate();
    if (w.sample_rate != rate) {
      throw ValidationError("mix inputs must share a sample rate");
    }
    longest = std::max(longest, w.samples.size());
  }

  MixResult out;
  out.waveform.sample_rate = rate;
  out.waveform.samples.assign(longest, 0.0);
  for (std::size_t k = 0; k < waveforms.size(); ++k) {
    const auto& src = waveforms[k].samples;
    const double g = gains[k] / gain_sum;
    for (std::size_t i = 0; i < src.size(); ++i) {
      out.waveform.samples[i] += g * src[i];
    }
  }
  for (double& s : out.waveform.samples) {
    if (s > 1.0) {
      s = 1.0;
      out.clipped = true;
    } else if (s < -1.0) {
      s = -1.0;
      out.clipped = true;
    }
  }
  return out;
}

FrameSequence frame_blocking(const Waveform& w, double frame_ms,
                             double hop_ms) {
  w.validate();
  if (!(hop_ms > 0.0) || !(frame_ms >= hop_ms)) {
    throw ValidationError("require frame_ms >= hop_ms > 0");
  }
  const int frame_length =
      static_cast<int>(std::lround(frame_ms * 1e-3 * w.sample_rate));
  const int hop = static_cast<int>(std::lround(hop_ms * 1e-3 * w.sample_rate));
  if (frame_length <= 0 || hop <= 0) {
    throw ValidationError("frame and hop must span at least one sample");
  }
  if (w.samples.size() < static_cast<std::size_t>(frame_length)) {
    throw ValidationError("waveform shorter than one frame");
  }

  FrameSequence fs;
  fs.frame_length = frame_length;
  fs.hop = hop;
  fs.sample_rate = w.sample_rate;
  const std::size_t n = w.samples.size();
  // floor((n - frame_length)/hop) + 1 frames; the partial tail is dropped.
  const std::size_t count =
      1 + (n - static_cast<std::size_t>(frame_length)) /
              static_cast<std::size_t>(hop);
  fs.frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t start = f * static_cast<std::size_t>(hop);
    fs.frames.emplace_back(
        w.samples.begin() + static_cast<std::ptrdiff_t>(start),
        w.samples.begin() + static_cast<std::ptrdiff_t>(start) +
            frame_length);
  }
  return fs;
}

FrameSequence apply_window(const FrameSequence& fs, WindowKind kind) {
  FrameSequence out = fs;
  if (out.frames.empty()) return out;
  const auto w = window_coefficients(kind, out.frame_length);
  for (auto& frame : out.frames) {
    for (std::size_t i = 0; i < frame.size(); ++i) frame[i] *= w[i];
  }
  return out;
}

int next_pow2(int n) {
  if (n <= 0) throw ValidationError("next_pow2 requires a positive input");
  int p = 1;
  while (p < n) {
    if (p > (1 << 29)) throw ValidationError("next_pow2 input too large");
    p <<= 1;
  }
  return p;
}

FftPlan::FftPlan(int size) : size_(size) {
  if (size < 1 || (size & (size - 1)) != 0) {
    throw ValidationError("FFT size must be a power of two >= 1, got " +
                          std::to_string(size));
  }
  int bits = 0;
  while ((1 << bits) < size) ++bits;
  bit_reverse_.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (1 << b)) r |= 1 << (bits - 1 - b);
    }
    bit_reverse_[static_cast<std::size_t>(i)] = r;
  }
  // One table for the final stage; earlier stages stride through it.
  twiddle_.resize(static_cast<std::size_t>(size / 2));
  for (int k = 0; k < size / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * k / size;
    twiddle_[static_cast<std::size_t>(k)] = {std::cos(angle),
                                             std::sin(angle)};
  }
}

void FftPlan::transform(std::complex<double>* data) const {
  const int n = size_;
  for (int i = 0; i < n; ++i) {
    const int j = bit_reverse_[static_cast<std::size_t>(i)];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    const int stride = n / len;
    for (int start = 0; start < n; start += len) {
      for (int k = 0; k < half; ++k) {
        const std::complex<double> w =
            twiddle_[static_cast<std::size_t>(k * stride)];
        const std::complex<double> even = data[start + k];
        const std::complex<double> odd = data[start + k + half] * w;
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

namespace {

PowerSpectrum fft_power_with(std::span<const double> frame, int sample_rate,
                             const FftPlan& plan) {
  const int fft_size = plan.size();
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_size));
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  plan.transform(buf.data());

  PowerSpectrum ps;
  ps.bin_width_hz = static_cast<double>(sample_rate) / fft_size;
  ps.bins.resize(static_cast<std::size_t>(fft_size / 2 + 1));
  for (int k = 0; k <= fft_size / 2; ++k) {
    ps.bins[static_cast<std::size_t>(k)] =
        std::norm(buf[static_cast<std::size_t>(k)]);
  }
  return ps;
}

}  // namespace

PowerSpectrum fft_power(std::span<const double> frame, int sample_rate) {
  if (frame.empty()) throw ValidationError("fft_power on empty frame");
  if (sample_rate <= 0) throw ValidationError("sample_rate must be positive");
  const FftPlan plan(next_pow2(static_cast<int>(frame.size())));
  return fft_power_with(frame, sample_rate, plan);
}

PowerSpectrum fft_power(std::span<const double> frame, int sample_rate,
                        const FftPlan& plan) {
  if (frame.empty()) throw ValidationError("fft_power on empty frame");
  if (sample_rate <= 0) throw ValidationError("sample_rate must be positive");
  if (plan.size() != next_pow2(static_cast<int>(frame.size()))) {
    throw ValidationError("FFT plan size does not match frame");
  }
  return fft_power_with(frame, sample_rate, plan);
}

Spectrogram spectrogram(const Waveform& w, double frame_ms, double hop_ms,
                        WindowKind window, Exec exec) {
  const FrameSequence fs = apply_window(frame_blocking(w, frame_ms, hop_ms),
                                        window);
  const FftPlan plan(next_pow2(fs.frame_length));

  Spectrogram sg;
  sg.bin_width_hz = static_cast<double>(fs.sample_rate) / plan.size();
  sg.power.resize(fs.frames.size());
  for_each_index(exec, static_cast<int>(fs.frames.size()), [&](int f) {
    sg.power[static_cast<std::size_t>(f)] =
        fft_power_with(fs.frames[static_cast<std::size_t>(f)], fs.sample_rate,
                       plan)
            .bins;
  });
  return sg;
}

void write_spectrogram(std::ostream& os, const Spectrogram& sg) {
  os << "frames " << sg.power.size() << " bins "
     << (sg.power.empty() ? 0 : sg.power.front().size()) << " bin_width_hz "
     << sg.bin_width_hz << "\n";
  std::ostringstream row;
  for (const auto& frame : sg.power) {
    row.str("");
    for (std::size_t k = 0; k < frame.size(); ++k) {
      if (k) row << ' ';
      row << frame[k];
    }
    os << row.str() << "\n";
  }
}

}  // namespace mixprint
