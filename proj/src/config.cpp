// mixprint/config.cpp
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

#include "mixprint/config.hpp"

#include <ostream>
#include <string>

#include "mixprint/types.hpp"

namespace mixprint {

LogBase log_base_from_name(std::string_view name) {
  if (name == "10") return LogBase::kBase10;
  if (name == "e") return LogBase::kNatural;
  throw ValidationError("unknown log base: " + std::string(name) +
                        " (expected 10 or e)");
}

std::string_view log_base_name(LogBase base) {
  return base == LogBase::kBase10 ? "10" : "e";
}

EkMode ek_mode_from_name(std::string_view name) {
  if (name == "literal") return EkMode::kLiteral;
  if (name == "sigma-free") return EkMode::kSigmaFree;
  throw ValidationError("unknown ek mode: " + std::string(name) +
                        " (expected literal or sigma-free)");
}

std::string_view ek_mode_name(EkMode mode) {
  return mode == EkMode::kLiteral ? "literal" : "sigma-free";
}

void PipelineConfig::validate() const {
  if (!(hop_ms > 0.0) || !(frame_ms >= hop_ms)) {
    throw ValidationError("require frame_ms >= hop_ms > 0");
  }
  if (num_filters < 13) {
    throw ValidationError("need at least 13 mel filters");
  }
  if (!(f_low_hz >= 0.0)) {
    throw ValidationError("f_low must be non-negative");
  }
  if (f_high_hz != 0.0 && !(f_high_hz > f_low_hz)) {
    throw ValidationError("f_high must exceed f_low (or be 0 for the "
                          "Nyquist default)");
  }
  if (!(energy_floor > 0.0)) {
    throw ValidationError("energy floor must be positive");
  }
  if (!(sigma_floor > 0.0)) {
    throw ValidationError("sigma floor must be positive");
  }
  if (!(band_c >= 0.0)) {
    throw ValidationError("band multiplier must be non-negative");
  }
  if (!(inclusion_tau >= 0.0)) {
    throw ValidationError("inclusion tolerance must be non-negative");
  }
}

void dump_config(std::ostream& os, const PipelineConfig& cfg) {
  os << "frame_ms " << cfg.frame_ms << "\n";
  os << "hop_ms " << cfg.hop_ms << "\n";
  os << "window " << window_name(cfg.window) << "\n";
  os << "num_filters " << cfg.num_filters << "\n";
  os << "f_low_hz " << cfg.f_low_hz << "\n";
  os << "f_high_hz " << cfg.f_high_hz << "\n";
  os << "log_base " << log_base_name(cfg.log_base) << "\n";
  os << "energy_floor " << cfg.energy_floor << "\n";
  os << "skip_c0 " << (cfg.skip_c0 ? 1 : 0) << "\n";
  os << "sigma_floor " << cfg.sigma_floor << "\n";
  os << "band_c " << cfg.band_c << "\n";
  os << "inclusion_tau " << cfg.inclusion_tau << "\n";
  os << "ek_mode " << ek_mode_name(cfg.ek_mode) << "\n";
  os << "seed " << cfg.seed << "\n";
}

}  // namespace mixprint
