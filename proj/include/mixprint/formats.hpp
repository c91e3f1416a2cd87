// mixprint/formats.hpp
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
// Plain-text record formats used by the tools. All doubles are printed with
// %.17g so a parse/format round trip is exact.

#ifndef MIXPRINT_FORMATS_HPP_
#define MIXPRINT_FORMATS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "mixprint/decision.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/types.hpp"
#include "mixprint/voiceprint.hpp"

namespace mixprint {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// One line per sentence vector: speaker sentence c1..c13.
void write_mfcc_vectors(std::ostream& os, const std::vector<MfccVector>& vs);
std::vector<MfccVector> read_mfcc_vectors(std::istream& is);

/// One line per voiceprint: id enrollment_count mu1..mu13 sigma1..sigma13.
void write_voiceprints(std::ostream& os, const std::vector<Voiceprint>& vps);
std::vector<Voiceprint> read_voiceprints(std::istream& is);

/// Human-readable but machine-stable verdict dump.
void write_verdict(std::ostream& os, const IdentificationVerdict& verdict,
                   const std::vector<std::string>& speaker_ids);

/// Constellation dump: one "index value" pair per line per vector.
void write_constellation(std::ostream& os, const MfccVector& v);

}  // namespace mixprint

#endif  // MIXPRINT_FORMATS_HPP_
