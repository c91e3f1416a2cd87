// mixprint/mfcc.cpp
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

#include "mixprint/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace mixprint {

namespace {

/// Shared DCT kernel. Both the free function and the extractor go through
/// this so their outputs are bit-identical; the extractor passes a
/// precomputed cosine table, the free function builds a throwaway one.
std::vector<double> dct_table(int num_filters, bool skip_c0) {
  std::vector<double> t(static_cast<std::size_t>(kNumCoeffs * num_filters));
  const int n0 = skip_c0 ? 1 : 0;
  for (int j = 0; j < kNumCoeffs; ++j) {
    const int n = n0 + j;
    for (int k = 1; k <= num_filters; ++k) {
      t[static_cast<std::size_t>(j * num_filters + k - 1)] =
          std::cos(std::numbers::pi * n * (k - 0.5) / num_filters);
    }
  }
  return t;
}

MfccFrame dct_with_table(const MelEnergies& energies, LogBase log_base,
                         const std::vector<double>& table, int num_filters) {
  std::vector<double> logs(static_cast<std::size_t>(num_filters));
  for (int k = 0; k < num_filters; ++k) {
    const double s = energies.values[static_cast<std::size_t>(k)];
    if (!(s > 0.0)) {
      throw ValidationError("mel energy must be positive before the log");
    }
    logs[static_cast<std::size_t>(k)] =
        log_base == LogBase::kBase10 ? std::log10(s) : std::log(s);
  }
  MfccFrame out{};
  for (int j = 0; j < kNumCoeffs; ++j) {
    double c = 0.0;
    for (int k = 0; k < num_filters; ++k) {
      c += logs[static_cast<std::size_t>(k)] *
           table[static_cast<std::size_t>(j * num_filters + k)];
    }
    out[static_cast<std::size_t>(j)] = c;
  }
  return out;
}

PipelineConfig checked(const PipelineConfig& cfg) {
  cfg.validate();
  return cfg;
}

int checked_rate(int sample_rate) {
  if (sample_rate <= 0) {
    throw ValidationError("sample_rate must be positive");
  }
  return sample_rate;
}

}  // namespace

MfccFrame dct_cepstrum(const MelEnergies& energies, LogBase log_base,
                       bool skip_c0) {
  const int num_filters = static_cast<int>(energies.values.size());
  if (num_filters < kNumCoeffs) {
    throw ValidationError("need at least " + std::to_string(kNumCoeffs) +
                          " mel energies, got " +
                          std::to_string(num_filters));
  }
  return dct_with_table(energies, log_base, dct_table(num_filters, skip_c0),
                        num_filters);
}

MfccVector aggregate_sentence(const std::vector<MfccFrame>& frames,
                              SourceId source) {
  if (frames.empty()) {
    throw ValidationError("cannot aggregate zero frames");
  }
  MfccVector out;
  out.source = std::move(source);
  std::vector<double> dim(frames.size());
  for (int j = 0; j < kNumCoeffs; ++j) {
    for (std::size_t t = 0; t < frames.size(); ++t) {
      dim[t] = frames[t][static_cast<std::size_t>(j)];
    }
    // Summing in sorted order makes the mean a function of the frame
    // multiset, so permuting frames changes nothing, bit for bit.
    std::sort(dim.begin(), dim.end());
    double s = 0.0;
    for (double v : dim) s += v;
    out.c[static_cast<std::size_t>(j)] =
        s / static_cast<double>(frames.size());
  }
  return out;
}

MfccExtractor::MfccExtractor(const PipelineConfig& cfg, int sample_rate)
    : cfg_(checked(cfg)),
      sample_rate_(checked_rate(sample_rate)),
      frame_length_(static_cast<int>(
          std::lround(cfg_.frame_ms * 1e-3 * sample_rate_))),
      hop_(static_cast<int>(std::lround(cfg_.hop_ms * 1e-3 * sample_rate_))),
      fft_size_(next_pow2(frame_length_)),
      window_(window_coefficients(cfg_.window, frame_length_)),
      plan_(fft_size_),
      filterbank_(build_filterbank(cfg_.num_filters, sample_rate_, fft_size_,
                                   cfg_.f_low_hz,
                                   cfg_.effective_f_high(sample_rate_))),
      dct_table_(dct_table(cfg_.num_filters, cfg_.skip_c0)) {}

MfccFrame MfccExtractor::frame_coefficients(
    std::span<const double> frame) const {
  if (static_cast<int>(frame.size()) != frame_length_) {
    throw ValidationError("frame length does not match extractor");
  }
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_size_));
  for (int i = 0; i < frame_length_; ++i) {
    buf[static_cast<std::size_t>(i)] =
        frame[static_cast<std::size_t>(i)] *
        window_[static_cast<std::size_t>(i)];
  }
  plan_.transform(buf.data());

  PowerSpectrum ps;
  ps.bin_width_hz = static_cast<double>(sample_rate_) / fft_size_;
  ps.bins.resize(static_cast<std::size_t>(fft_size_ / 2 + 1));
  for (int k = 0; k <= fft_size_ / 2; ++k) {
    ps.bins[static_cast<std::size_t>(k)] =
        std::norm(buf[static_cast<std::size_t>(k)]);
  }

  const MelEnergies energies =
      apply_filterbank(ps, filterbank_, cfg_.energy_floor);
  return dct_with_table(energies, cfg_.log_base, dct_table_,
                        cfg_.num_filters);
}

std::vector<MfccFrame> MfccExtractor::frames(const Waveform& w,
                                             Exec exec) const {
  if (w.sample_rate != sample_rate_) {
    throw ValidationError("waveform sample rate does not match extractor");
  }
  const FrameSequence fs = frame_blocking(w, cfg_.frame_ms, cfg_.hop_ms);
  std::vector<MfccFrame> out(fs.frames.size());
  for_each_index(exec, static_cast<int>(fs.frames.size()), [&](int f) {
    out[static_cast<std::size_t>(f)] =
        frame_coefficients(fs.frames[static_cast<std::size_t>(f)]);
  });
  return out;
}

MfccVector MfccExtractor::sentence(const Waveform& w, SourceId source,
                                   Exec exec) const {
  return aggregate_sentence(frames(w, exec), std::move(source));
}

}  // namespace mixprint
