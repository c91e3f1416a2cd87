// mixprint/types.hpp
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

#ifndef MIXPRINT_TYPES_HPP_
#define MIXPRINT_TYPES_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixprint {

/// Number of cepstral coefficients carried through the whole pipeline.
inline constexpr int kNumCoeffs = 13;

using Coeffs = std::array<double, kNumCoeffs>;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, violated preconditions, or invalid file contents.
/// The CLI maps this to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem problems (missing files, unwritable paths). Exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A file whose container structure cannot be parsed.
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A file that parses but uses an encoding this library refuses to guess
/// about (e.g. stereo or non-16-bit WAV data).
class UnsupportedFormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Every candidate likelihood collapsed to zero, so no posterior exists.
class DegeneratePosteriorError : public Error {
 public:
  using Error::Error;
};

/// Sampled mono audio. Samples are amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_seconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }

  /// Throws ValidationError if the rate is non-positive or any sample is
  /// outside [-1, 1].
  void validate() const;
};

}  // namespace mixprint

#endif  // MIXPRINT_TYPES_HPP_
