// mixprint/mel.hpp
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

#ifndef MIXPRINT_MEL_HPP_
#define MIXPRINT_MEL_HPP_

#include <vector>

#include "mixprint/signal.hpp"
#include "mixprint/types.hpp"

namespace mixprint {

/// Mel(f) = 2595 * log10(1 + f/700). Negative f is a ValidationError.
double mel_from_hz(double f);

/// Exact inverse: 700 * (10^(m/2595) - 1).
double hz_from_mel(double m);

/// One triangular filter. weights[i] is the response at FFT bin
/// first_bin + i; the triangle is zero outside [left_hz, right_hz] and peaks
/// at center_hz.
struct MelFilter {
  double left_hz = 0.0;
  double center_hz = 0.0;
  double right_hz = 0.0;
  int first_bin = 0;
  std::vector<double> weights;
};

struct MelFilterbank {
  std::vector<MelFilter> filters;
  int fft_size = 0;
  int sample_rate = 0;

  int num_filters() const { return static_cast<int>(filters.size()); }
  int num_bins() const { return fft_size / 2 + 1; }

  /// Sum of a filter's weights; the filter output for a unit-flat spectrum.
  double filter_weight_sum(int filter) const;
};

/// Triangular filters with edges spaced uniformly on the mel scale between
/// f_low and f_high: num_filters+2 edge points, triangle i spanning edges
/// (i, i+1, i+2), weights sampled at FFT bin centers k*sample_rate/fft_size.
/// Adjacent triangles share edges, so each filter peaks where its neighbour
/// ends. Requires 0 <= f_low < f_high <= sample_rate/2 and num_filters >= 13.
MelFilterbank build_filterbank(int num_filters, int sample_rate, int fft_size,
                               double f_low_hz, double f_high_hz);

struct MelEnergies {
  std::vector<double> values;
};

/// Per-filter weighted sums of the power bins, floored at energy_floor so
/// the log stage downstream is always defined.
MelEnergies apply_filterbank(const PowerSpectrum& ps, const MelFilterbank& fb,
                             double energy_floor);

}  // namespace mixprint

#endif  // MIXPRINT_MEL_HPP_
