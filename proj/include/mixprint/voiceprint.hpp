// mixprint/voiceprint.hpp
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
// Per-speaker Gaussian models over the 13 coefficients, and the distance and
// probability primitives built on them.

#ifndef MIXPRINT_VOICEPRINT_HPP_
#define MIXPRINT_VOICEPRINT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "mixprint/config.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/types.hpp"

namespace mixprint {

/// Per-coefficient Gaussian (mu, sigma) for one speaker. Immutable after
/// enrollment; safe to share across threads.
struct Voiceprint {
  std::string speaker_id;
  Coeffs mu{};
  Coeffs sigma{};
  int enrollment_count = 0;
};

/// 13 non-negative per-dimension differences between two coefficient
/// vectors.
struct DistanceVector {
  Coeffs d{};
};

struct PosteriorVector {
  std::vector<double> probabilities;
};

struct BandMembership {
  std::array<bool, kNumCoeffs> inside{};
  bool all_inside = false;
};

/// The 13 (dimension, value) pairs of one vector, for export next to a
/// voiceprint's mu +/- sigma bands. Dimensions are 1-based.
struct ConstellationPoint {
  std::array<std::pair<int, double>, kNumCoeffs> coordinates{};
};

/// mu = per-dimension mean, sigma = per-dimension population standard
/// deviation (divide by n) floored at sigma_floor. At least two sentences
/// are required; sigma is undefined from one point.
Voiceprint enroll(std::string speaker_id,
                  const std::vector<MfccVector>& sentences,
                  double sigma_floor);

DistanceVector euclidean_distance_vector(const Coeffs& a, const Coeffs& b);
DistanceVector euclidean_distance_vector(const MfccVector& a,
                                         const MfccVector& b);

/// Arithmetic mean of the 13 entries.
double mean_distance(const DistanceVector& d);

/// Gaussian density 1/(sqrt(2*pi)*sigma) * exp(-((v-mu)/sigma)^2 / 2).
double gaussian_pdf(double v, double mu, double sigma);
double log_gaussian_pdf(double v, double mu, double sigma);

/// Sum of the 13 per-dimension log densities (independent dimensions).
double log_likelihood(const Coeffs& x, const Voiceprint& vp);

/// Normalizes prior-weighted likelihoods into a posterior. Computed in the
/// log domain; the result sums to 1 and is invariant under any common
/// positive rescaling of either the likelihoods or the priors. Priors may
/// therefore be given unnormalized; they must be non-negative with a
/// positive sum. Throws DegeneratePosteriorError when every prior-weighted
/// likelihood is zero.
PosteriorVector posterior_from_log_likelihoods(
    const std::vector<double>& log_likelihoods,
    const std::vector<double>& priors);

PosteriorVector posterior(const MfccVector& x,
                          const std::vector<Voiceprint>& voiceprints,
                          const std::vector<double>& priors);

/// The per-speaker Manhattan score. kLiteral:
/// (1/13) * sum_i |(x_i - mu_i) - sigma_i|; kSigmaFree drops the sigma term.
double manhattan_distance_ek(const MfccVector& x, const Voiceprint& vp,
                             EkMode mode = EkMode::kLiteral);

/// Dimension i is inside iff |x_i - mu_i| <= c * sigma_i. Requires c >= 0.
BandMembership band_membership(const MfccVector& x, const Voiceprint& vp,
                               double c);

ConstellationPoint constellation_coordinates(const MfccVector& x);

}  // namespace mixprint

#endif  // MIXPRINT_VOICEPRINT_HPP_
