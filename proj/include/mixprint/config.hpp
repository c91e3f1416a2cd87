// mixprint/config.hpp
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

#ifndef MIXPRINT_CONFIG_HPP_
#define MIXPRINT_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <string_view>

#include "mixprint/signal.hpp"

namespace mixprint {

enum class LogBase { kBase10, kNatural };

/// How the per-speaker Manhattan score is computed: kLiteral subtracts the
/// per-dimension sigma inside the absolute value, kSigmaFree is the plain
/// mean absolute deviation from mu.
enum class EkMode { kLiteral, kSigmaFree };

LogBase log_base_from_name(std::string_view name);
std::string_view log_base_name(LogBase base);
EkMode ek_mode_from_name(std::string_view name);
std::string_view ek_mode_name(EkMode mode);

/// Every tunable of the pipeline in one place, with the documented defaults.
/// The CLI exposes each of these as a flag; nothing reads the environment.
struct PipelineConfig {
  // Front-end.
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::kHamming;

  // Filterbank and cepstrum.
  int num_filters = 26;
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;  // 0 means sample_rate / 2
  LogBase log_base = LogBase::kBase10;
  double energy_floor = 1e-10;
  bool skip_c0 = false;  // keep C0..C12 by default; true selects C1..C13

  // Voiceprints and decisions.
  double sigma_floor = 1e-6;
  double band_c = 1.0;
  double inclusion_tau = 0.0;
  EkMode ek_mode = EkMode::kLiteral;

  // Harness.
  std::uint64_t seed = 42;

  void validate() const;

  double effective_f_high(int sample_rate) const {
    return f_high_hz > 0.0 ? f_high_hz : sample_rate / 2.0;
  }
};

/// One "key value" line per field, in declaration order.
void dump_config(std::ostream& os, const PipelineConfig& cfg);

}  // namespace mixprint

#endif  // MIXPRINT_CONFIG_HPP_
