// mixprint/formats.cpp
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

#include "mixprint/formats.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace mixprint {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_mfcc_vectors(std::ostream& os, const std::vector<MfccVector>& vs) {
  for (const MfccVector& v : vs) {
    os << (v.source.speaker.empty() ? "-" : v.source.speaker) << ' '
       << (v.source.sentence.empty() ? "-" : v.source.sentence);
    for (double c : v.c) os << ' ' << format_double(c);
    os << '\n';
  }
}

std::vector<MfccVector> read_mfcc_vectors(std::istream& is) {
  std::vector<MfccVector> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    MfccVector v;
    if (!(ls >> v.source.speaker >> v.source.sentence)) {
      throw FormatError("mfcc line " + std::to_string(line_no) +
                        ": missing source labels");
    }
    for (double& c : v.c) {
      if (!(ls >> c)) {
        throw FormatError("mfcc line " + std::to_string(line_no) +
                          ": expected 13 coefficients");
      }
    }
    double extra;
    if (ls >> extra) {
      throw FormatError("mfcc line " + std::to_string(line_no) +
                        ": more than 13 coefficients");
    }
    if (v.source.speaker == "-") v.source.speaker.clear();
    if (v.source.sentence == "-") v.source.sentence.clear();
    out.push_back(std::move(v));
  }
  return out;
}

void write_voiceprints(std::ostream& os, const std::vector<Voiceprint>& vps) {
  for (const Voiceprint& vp : vps) {
    os << vp.speaker_id << ' ' << vp.enrollment_count;
    for (double m : vp.mu) os << ' ' << format_double(m);
    for (double s : vp.sigma) os << ' ' << format_double(s);
    os << '\n';
  }
}

std::vector<Voiceprint> read_voiceprints(std::istream& is) {
  std::vector<Voiceprint> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Voiceprint vp;
    if (!(ls >> vp.speaker_id >> vp.enrollment_count)) {
      throw FormatError("voiceprint line " + std::to_string(line_no) +
                        ": missing id or count");
    }
    for (double& m : vp.mu) {
      if (!(ls >> m)) {
        throw FormatError("voiceprint line " + std::to_string(line_no) +
                          ": expected 13 mu values");
      }
    }
    for (double& s : vp.sigma) {
      if (!(ls >> s)) {
        throw FormatError("voiceprint line " + std::to_string(line_no) +
                          ": expected 13 sigma values");
      }
      if (!(s > 0.0)) {
        throw ValidationError("voiceprint line " + std::to_string(line_no) +
                              ": sigma must be positive");
      }
    }
    out.push_back(std::move(vp));
  }
  return out;
}

void write_verdict(std::ostream& os, const IdentificationVerdict& verdict,
                   const std::vector<std::string>& speaker_ids) {
  os << "included " << (verdict.inclusion.included ? 1 : 0) << '\n';
  os << "decision "
     << (verdict.decision.has_value() ? *verdict.decision : "none") << '\n';
  os << "probe_mean " << format_double(verdict.inclusion.probe_mean) << '\n';
  os << "margin " << format_double(verdict.inclusion.margin) << '\n';
  for (std::size_t i = 0; i < speaker_ids.size(); ++i) {
    os << "speaker " << speaker_ids[i] << " ek "
       << format_double(verdict.manhattan_scores[i]) << " manhattan_rank "
       << verdict.manhattan_ranks[i] << " exclusion_rank "
       << verdict.exclusion_ranks[i] << " reverse_rank "
       << verdict.reverse_ranks[i] << " combined_rank "
       << verdict.combined_ranks[i] << '\n';
  }
}

void write_constellation(std::ostream& os, const MfccVector& v) {
  os << "# " << (v.source.speaker.empty() ? "-" : v.source.speaker) << ' '
     << (v.source.sentence.empty() ? "-" : v.source.sentence) << '\n';
  for (const auto& [dim, value] : constellation_coordinates(v).coordinates) {
    os << dim << ' ' << format_double(value) << '\n';
  }
}

}  // namespace mixprint
