// mixprint/mel.cpp
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

#include "mixprint/mel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixprint {

double mel_from_hz(double f) {
  if (!(f >= 0.0)) {
    throw ValidationError("mel_from_hz requires f >= 0");
  }
  return 2595.0 * std::log10(1.0 + f / 700.0);
}

double hz_from_mel(double m) {
  if (!(m >= 0.0)) {
    throw ValidationError("hz_from_mel requires m >= 0");
  }
  return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
}

double MelFilterbank::filter_weight_sum(int filter) const {
  const auto& w = filters.at(static_cast<std::size_t>(filter)).weights;
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

MelFilterbank build_filterbank(int num_filters, int sample_rate, int fft_size,
                               double f_low_hz, double f_high_hz) {
  if (num_filters < kNumCoeffs) {
    throw ValidationError("need at least " + std::to_string(kNumCoeffs) +
                          " filters, got " + std::to_string(num_filters));
  }
  if (sample_rate <= 0 || fft_size <= 0) {
    throw ValidationError("sample_rate and fft_size must be positive");
  }
  if (!(f_low_hz >= 0.0) || !(f_low_hz < f_high_hz) ||
      !(f_high_hz <= sample_rate / 2.0)) {
    throw ValidationError("require 0 <= f_low < f_high <= sample_rate/2");
  }

  MelFilterbank fb;
  fb.fft_size = fft_size;
  fb.sample_rate = sample_rate;

  // num_filters + 2 edges, an arithmetic progression on the mel axis.
  const double mel_low = mel_from_hz(f_low_hz);
  const double mel_high = mel_from_hz(f_high_hz);
  std::vector<double> edges_hz(static_cast<std::size_t>(num_filters + 2));
  for (int i = 0; i < num_filters + 2; ++i) {
    const double m =
        mel_low + (mel_high - mel_low) * i / (num_filters + 1);
    edges_hz[static_cast<std::size_t>(i)] = hz_from_mel(m);
  }

  const double bin_width = static_cast<double>(sample_rate) / fft_size;
  fb.filters.reserve(static_cast<std::size_t>(num_filters));
  for (int i = 0; i < num_filters; ++i) {
    MelFilter f;
    f.left_hz = edges_hz[static_cast<std::size_t>(i)];
    f.center_hz = edges_hz[static_cast<std::size_t>(i + 1)];
    f.right_hz = edges_hz[static_cast<std::size_t>(i + 2)];

    // Only bins with a positive response are stored; the triangle is zero
    // at and outside its edges.
    const int num_bins = fft_size / 2 + 1;
    int first = -1;
    std::vector<double> weights;
    for (int k = 0; k < num_bins; ++k) {
      const double fk = k * bin_width;
      if (fk <= f.left_hz || fk >= f.right_hz) {
        if (first >= 0) break;
        continue;
      }
      const double w = fk <= f.center_hz
                           ? (fk - f.left_hz) / (f.center_hz - f.left_hz)
                           : (f.right_hz - fk) / (f.right_hz - f.center_hz);
      if (w > 0.0) {
        if (first < 0) first = k;
        weights.push_back(w);
      } else if (first >= 0) {
        break;
      }
    }
    f.first_bin = first < 0 ? 0 : first;
    f.weights = std::move(weights);
    fb.filters.push_back(std::move(f));
  }
  return fb;
}

MelEnergies apply_filterbank(const PowerSpectrum& ps, const MelFilterbank& fb,
                             double energy_floor) {
  if (static_cast<int>(ps.bins.size()) != fb.num_bins()) {
    throw ValidationError("power spectrum size does not match filterbank");
  }
  if (!(energy_floor > 0.0)) {
    throw ValidationError("energy floor must be positive");
  }
  MelEnergies out;
  out.values.resize(fb.filters.size());
  for (std::size_t i = 0; i < fb.filters.size(); ++i) {
    const MelFilter& f = fb.filters[i];
    double s = 0.0;
    for (std::size_t j = 0; j < f.weights.size(); ++j) {
      s += f.weights[j] *
           ps.bins[static_cast<std::size_t>(f.first_bin) + j];
    }
    out.values[i] = std::max(s, energy_floor);
  }
  return out;
}

}  // namespace mixprint
