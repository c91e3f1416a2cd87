// mixprint/voiceprint.cpp
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

#include "mixprint/voiceprint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace mixprint {

Voiceprint enroll(std::string speaker_id,
                  const std::vector<MfccVector>& sentences,
                  double sigma_floor) {
  if (speaker_id.empty()) {
    throw ValidationError("voiceprint needs a speaker id");
  }
  if (sentences.size() < 2) {
    throw ValidationError(
        "enrollment needs at least two sentences (sigma is undefined from "
        "one point)");
  }
  if (!(sigma_floor > 0.0)) {
    throw ValidationError("sigma floor must be positive");
  }
  Voiceprint vp;
  vp.speaker_id = std::move(speaker_id);
  vp.enrollment_count = static_cast<int>(sentences.size());
  const double n = static_cast<double>(sentences.size());
  for (int i = 0; i < kNumCoeffs; ++i) {
    double s = 0.0;
    for (const MfccVector& v : sentences) {
      s += v.c[static_cast<std::size_t>(i)];
    }
    const double mu = s / n;
    double var = 0.0;
    for (const MfccVector& v : sentences) {
      const double d = v.c[static_cast<std::size_t>(i)] - mu;
      var += d * d;
    }
    var /= n;  // population variance
    vp.mu[static_cast<std::size_t>(i)] = mu;
    vp.sigma[static_cast<std::size_t>(i)] =
        std::max(std::sqrt(var), sigma_floor);
  }
  return vp;
}

DistanceVector euclidean_distance_vector(const Coeffs& a, const Coeffs& b) {
  DistanceVector out;
  for (int i = 0; i < kNumCoeffs; ++i) {
    out.d[static_cast<std::size_t>(i)] =
        std::abs(a[static_cast<std::size_t>(i)] -
                 b[static_cast<std::size_t>(i)]);
  }
  return out;
}

DistanceVector euclidean_distance_vector(const MfccVector& a,
                                         const MfccVector& b) {
  return euclidean_distance_vector(a.c, b.c);
}

double mean_distance(const DistanceVector& d) {
  double s = 0.0;
  for (double v : d.d) s += v;
  return s / kNumCoeffs;
}

double gaussian_pdf(double v, double mu, double sigma) {
  if (!(sigma > 0.0)) {
    throw ValidationError("gaussian_pdf requires sigma > 0");
  }
  const double z = (v - mu) / sigma;
  return std::exp(-0.5 * z * z) /
         (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double log_gaussian_pdf(double v, double mu, double sigma) {
  if (!(sigma > 0.0)) {
    throw ValidationError("log_gaussian_pdf requires sigma > 0");
  }
  const double z = (v - mu) / sigma;
  return -0.5 * z * z - std::log(std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double log_likelihood(const Coeffs& x, const Voiceprint& vp) {
  double s = 0.0;
  for (int i = 0; i < kNumCoeffs; ++i) {
    s += log_gaussian_pdf(x[static_cast<std::size_t>(i)],
                          vp.mu[static_cast<std::size_t>(i)],
                          vp.sigma[static_cast<std::size_t>(i)]);
  }
  return s;
}

PosteriorVector posterior_from_log_likelihoods(
    const std::vector<double>& log_likelihoods,
    const std::vector<double>& priors) {
  if (log_likelihoods.empty()) {
    throw ValidationError("posterior needs at least one candidate");
  }
  if (priors.size() != log_likelihoods.size()) {
    throw ValidationError("prior count does not match candidate count");
  }
  double prior_sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) {
      throw ValidationError("priors must be non-negative");
    }
    prior_sum += p;
  }
  if (!(prior_sum > 0.0)) {
    throw ValidationError("priors must not all be zero");
  }

  // Work with log(prior * likelihood); subtracting the maximum before
  // exponentiating keeps at least one term at exp(0) = 1 unless every term
  // is log(0).
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> scores(log_likelihoods.size(), neg_inf);
  double best = neg_inf;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (priors[i] > 0.0 && std::isfinite(log_likelihoods[i])) {
      scores[i] = log_likelihoods[i] + std::log(priors[i] / prior_sum);
      best = std::max(best, scores[i]);
    }
  }
  if (best == neg_inf) {
    throw DegeneratePosteriorError(
        "every prior-weighted likelihood vanished");
  }

  PosteriorVector out;
  out.probabilities.resize(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double e = scores[i] == neg_inf ? 0.0 : std::exp(scores[i] - best);
    out.probabilities[i] = e;
    z += e;
  }
  for (double& p : out.probabilities) p /= z;
  return out;
}

PosteriorVector posterior(const MfccVector& x,
                          const std::vector<Voiceprint>& voiceprints,
                          const std::vector<double>& priors) {
  std::vector<double> lls;
  lls.reserve(voiceprints.size());
  for (const Voiceprint& vp : voiceprints) {
    lls.push_back(log_likelihood(x.c, vp));
  }
  return posterior_from_log_likelihoods(lls, priors);
}

double manhattan_distance_ek(const MfccVector& x, const Voiceprint& vp,
                             EkMode mode) {
  double s = 0.0;
  for (int i = 0; i < kNumCoeffs; ++i) {
    const double dev = x.c[static_cast<std::size_t>(i)] -
                       vp.mu[static_cast<std::size_t>(i)];
    s += mode == EkMode::kLiteral
             ? std::abs(dev - vp.sigma[static_cast<std::size_t>(i)])
             : std::abs(dev);
  }
  return s / kNumCoeffs;
}

BandMembership band_membership(const MfccVector& x, const Voiceprint& vp,
                               double c) {
  if (!(c >= 0.0)) {
    throw ValidationError("band multiplier must be non-negative");
  }
  BandMembership out;
  out.all_inside = true;
  for (int i = 0; i < kNumCoeffs; ++i) {
    const bool inside =
        std::abs(x.c[static_cast<std::size_t>(i)] -
                 vp.mu[static_cast<std::size_t>(i)]) <=
        c * vp.sigma[static_cast<std::size_t>(i)];
    out.inside[static_cast<std::size_t>(i)] = inside;
    out.all_inside = out.all_inside && inside;
  }
  return out;
}

ConstellationPoint constellation_coordinates(const MfccVector& x) {
  ConstellationPoint out;
  for (int i = 0; i < kNumCoeffs; ++i) {
    out.coordinates[static_cast<std::size_t>(i)] = {
        i + 1, x.c[static_cast<std::size_t>(i)]};
  }
  return out;
}

}  // namespace mixprint
