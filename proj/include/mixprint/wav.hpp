// mixprint/wav.hpp
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

#ifndef MIXPRINT_WAV_HPP_
#define MIXPRINT_WAV_HPP_

#include <filesystem>

#include "mixprint/types.hpp"

namespace mixprint {

/// Reads a RIFF/WAVE file. Only PCM (format code 1), 16-bit, mono data is
/// accepted; anything else raises UnsupportedFormatError rather than being
/// downmixed or requantized silently. Samples are rescaled to [-1, 1] by
/// dividing by 32768.
Waveform load_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono. Samples are scaled by 32768 and rounded, with the
/// result clamped to the int16 range.
void save_wav(const std::filesystem::path& path, const Waveform& w);

}  // namespace mixprint

#endif  // MIXPRINT_WAV_HPP_
