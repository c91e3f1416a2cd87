// mixprint/corpus.cpp
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

#include "mixprint/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "mixprint/formats.hpp"
#include "mixprint/rng.hpp"
#include "mixprint/wav.hpp"

namespace mixprint {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError("bad " + what + ": " + s);
  }
  if (used != s.size()) throw FormatError("bad " + what + ": " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw FormatError("bad " + what + ": " + s);
  }
  if (used != s.size()) throw FormatError("bad " + what + ": " + s);
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw FormatError("bad " + what + ": " + s);
  }
  if (used != s.size()) throw FormatError("bad " + what + ": " + s);
  return v;
}

bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  return s.find_first_of(",+|=:; \t\r\n#") == std::string::npos;
}

/// Encodes a synthetic source as one manifest field. Commas separate the
/// manifest columns, so the spec uses ';' between keys and ':' inside the
/// formant list.
std::string format_synth_source(const SynthSource& src) {
  std::ostringstream os;
  os << "synth:f0=" << format_double(src.profile.fundamental_hz)
     << ";jitter=" << src.profile.jitter_seed << ";seed=" << src.sentence_seed
     << ";dur=" << format_double(src.duration_seconds)
     << ";rate=" << src.sample_rate << ";formants=";
  for (std::size_t i = 0; i < src.profile.formants.size(); ++i) {
    if (i) os << ':';
    os << format_double(src.profile.formants[i].center_hz) << ':'
       << format_double(src.profile.formants[i].gain);
  }
  return os.str();
}

SynthSource parse_synth_source(const std::string& spec,
                               const std::string& speaker_id) {
  SynthSource src;
  src.profile.speaker_id = speaker_id;
  bool have_f0 = false, have_seed = false, have_formants = false;
  for (const std::string& part : split_on(spec, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw FormatError("bad synth field: " + part);
    }
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key == "f0") {
      src.profile.fundamental_hz = parse_double(value, "synth f0");
      have_f0 = true;
    } else if (key == "jitter") {
      src.profile.jitter_seed = parse_u64(value, "synth jitter");
    } else if (key == "seed") {
      src.sentence_seed = parse_u64(value, "synth seed");
      have_seed = true;
    } else if (key == "dur") {
      src.duration_seconds = parse_double(value, "synth dur");
    } else if (key == "rate") {
      src.sample_rate = static_cast<int>(parse_long(value, "synth rate"));
    } else if (key == "formants") {
      const std::vector<std::string> parts = split_on(value, ':');
      if (parts.size() < 2 || parts.size() % 2 != 0) {
        throw FormatError("formants need center:gain pairs");
      }
      for (std::size_t i = 0; i < parts.size(); i += 2) {
        Formant f;
        f.center_hz = parse_double(parts[i], "formant center");
        f.gain = parse_double(parts[i + 1], "formant gain");
        src.profile.formants.push_back(f);
      }
      have_formants = true;
    } else {
      throw FormatError("unknown synth field: " + key);
    }
  }
  if (!have_f0 || !have_seed || !have_formants) {
    throw FormatError("synth source needs f0, seed, and formants");
  }
  return src;
}

}  // namespace

ManifestEntry parse_manifest_entry(const std::string& line) {
  const std::vector<std::string> fields = split_on(line, ',');
  if (fields.size() != 4) {
    throw FormatError("manifest line needs 4 comma-separated fields, got " +
                      std::to_string(fields.size()));
  }
  ManifestEntry e;
  e.speaker_id = trim(fields[0]);
  e.sentence_id = trim(fields[1]);
  e.text_id = trim(fields[2]);
  const std::string source = trim(fields[3]);
  if (source.rfind("synth:", 0) == 0) {
    e.source = parse_synth_source(source.substr(6), e.speaker_id);
  } else {
    e.source = std::filesystem::path(source);
  }
  return e;
}

std::string format_manifest_entry(const ManifestEntry& e) {
  std::string source;
  if (e.is_synth()) {
    source = format_synth_source(std::get<SynthSource>(e.source));
  } else {
    source = std::get<std::filesystem::path>(e.source).string();
  }
  return e.speaker_id + ", " + e.sentence_id + ", " + e.text_id + ", " +
         source;
}

std::vector<std::string> Manifest::speaker_ids() const {
  std::vector<std::string> ids;
  for (const ManifestEntry& e : entries) ids.push_back(e.speaker_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<const ManifestEntry*> Manifest::entries_for(
    const std::string& speaker_id) const {
  std::vector<const ManifestEntry*> out;
  for (const ManifestEntry& e : entries) {
    if (e.speaker_id == speaker_id) out.push_back(&e);
  }
  std::sort(out.begin(), out.end(),
            [](const ManifestEntry* a, const ManifestEntry* b) {
              return a->sentence_id < b->sentence_id;
            });
  return out;
}

const ManifestEntry* Manifest::find(const std::string& speaker_id,
                                    const std::string& sentence_id) const {
  for (const ManifestEntry& e : entries) {
    if (e.speaker_id == speaker_id && e.sentence_id == sentence_id) {
      return &e;
    }
  }
  return nullptr;
}

std::vector<std::string> Manifest::validate() const {
  std::vector<std::string> violations;
  if (entries.empty()) {
    violations.push_back("manifest has no entries");
    return violations;
  }
  std::set<std::pair<std::string, std::string>> keys;
  std::map<std::string, int> per_speaker;
  for (const ManifestEntry& e : entries) {
    if (!valid_label(e.speaker_id)) {
      violations.push_back("bad speaker_id: '" + e.speaker_id + "'");
    }
    if (!valid_label(e.sentence_id)) {
      violations.push_back("bad sentence_id: '" + e.sentence_id + "'");
    }
    if (!valid_label(e.text_id)) {
      violations.push_back("bad text_id: '" + e.text_id + "'");
    }
    if (!keys.insert({e.speaker_id, e.sentence_id}).second) {
      violations.push_back("duplicate entry: " + e.speaker_id + "/" +
                           e.sentence_id);
    }
    ++per_speaker[e.speaker_id];
    if (!e.is_synth()) {
      const auto& rel = std::get<std::filesystem::path>(e.source);
      const std::filesystem::path full =
          rel.is_absolute() ? rel : base_dir / rel;
      if (!std::filesystem::exists(full)) {
        violations.push_back("missing audio file: " + full.string());
      }
    } else {
      const SynthSource& src = std::get<SynthSource>(e.source);
      try {
        src.profile.validate();
      } catch (const ValidationError& err) {
        violations.push_back(e.speaker_id + "/" + e.sentence_id + ": " +
                             err.what());
      }
      if (!(src.duration_seconds > 0.0) || src.sample_rate <= 0) {
        violations.push_back(e.speaker_id + "/" + e.sentence_id +
                             ": bad synth duration or rate");
      }
    }
  }
  for (const auto& [id, count] : per_speaker) {
    if (count < 3) {
      violations.push_back("speaker " + id + " has only " +
                           std::to_string(count) +
                           " sentences (minimum 3: 2 enrollment + 1 probe)");
    }
  }
  return violations;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  Manifest m;
  m.base_dir = path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      m.entries.push_back(parse_manifest_entry(t));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": " + e.what());
    }
  }
  if (in.bad()) {
    throw IoError("read failure on " + path.string());
  }
  const std::vector<std::string> violations = m.validate();
  if (!violations.empty()) {
    std::string msg = path.string() + ": invalid manifest:";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) {
    throw IoError("cannot write " + path.string());
  }
  os << "# speaker_id, sentence_id, text_id, source\n";
  for (const ManifestEntry& e : m.entries) {
    os << format_manifest_entry(e) << "\n";
  }
  if (!os) {
    throw IoError("write failure on " + path.string());
  }
}

namespace {

std::string two_digit(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

}  // namespace

Manifest generate_synthetic_corpus(std::uint64_t seed, int num_speakers,
                                   int sentences_per_speaker,
                                   int same_text_pairs,
                                   double duration_seconds, int sample_rate) {
  if (num_speakers < 3) {
    throw ValidationError("need at least 3 speakers");
  }
  if (sentences_per_speaker < 3) {
    throw ValidationError("need at least 3 sentences per speaker");
  }
  if (same_text_pairs < 0 || same_text_pairs > sentences_per_speaker) {
    throw ValidationError("same_text_pairs must lie in [0, "
                          "sentences_per_speaker]");
  }
  if (!(duration_seconds > 0.0) || sample_rate <= 0) {
    throw ValidationError("bad duration or sample rate");
  }

  // Each formant band is cut into num_speakers slots and speaker i takes
  // slot perm_k(i) of band k. Distinct permutations per band keep the
  // voices from lining up along one curve in feature space, where the
  // middle voice would sit on the mixture of its neighbours.
  const struct {
    double lo, hi, gain_lo, gain_hi;
  } kBands[3] = {
      {350.0, 850.0, 0.6, 1.0},
      {1050.0, 2150.0, 0.4, 0.9},
      {2350.0, 3400.0, 0.25, 0.7},
  };
  std::vector<std::vector<int>> slot_of_band;
  for (int k = 0; k < 3; ++k) {
    std::vector<int> perm;
    for (int i = 0; i < num_speakers; ++i) perm.push_back(i);
    Rng perm_rng(mix_seed(seed, 0x500u + static_cast<std::uint64_t>(k)));
    perm_rng.shuffle(perm);
    slot_of_band.push_back(std::move(perm));
  }

  Manifest m;
  for (int i = 0; i < num_speakers; ++i) {
    const std::string id = "spk" + two_digit(i + 1);
    Rng voice(mix_seed(seed, 0x100u + static_cast<std::uint64_t>(i)));

    SpeakerProfile profile;
    profile.speaker_id = id;
    // Fundamentals are spread across [100, 320] Hz so no two voices sit on
    // top of each other; the per-speaker jitter keeps the grid from being
    // suspiciously exact.
    profile.fundamental_hz = 100.0 +
                             220.0 * i / (num_speakers - 1) +
                             voice.next_in(-4.0, 4.0);
    for (int k = 0; k < 3; ++k) {
      const double width = (kBands[k].hi - kBands[k].lo) / num_speakers;
      const double center = kBands[k].lo +
                            (slot_of_band[static_cast<std::size_t>(k)]
                                         [static_cast<std::size_t>(i)] +
                             0.5) * width +
                            voice.next_in(-0.2, 0.2) * width;
      profile.formants.push_back(
          {center, voice.next_in(kBands[k].gain_lo, kBands[k].gain_hi)});
    }
    profile.jitter_seed = mix_seed(seed, 0x200u + static_cast<std::uint64_t>(i));

    for (int j = 0; j < sentences_per_speaker; ++j) {
      ManifestEntry e;
      e.speaker_id = id;
      e.sentence_id = "s" + two_digit(j + 1);
      SynthSource src;
      src.profile = profile;
      src.duration_seconds = duration_seconds;
      src.sample_rate = sample_rate;
      if (j < same_text_pairs) {
        // Shared content: every speaker utters the same text seed with
        // their own voice.
        e.text_id = "shared" + two_digit(j + 1);
        src.sentence_seed = mix_seed(seed, 0x300u +
                                     static_cast<std::uint64_t>(j));
      } else {
        e.text_id = id + "-t" + two_digit(j + 1);
        src.sentence_seed =
            mix_seed(mix_seed(seed, 0x400u + static_cast<std::uint64_t>(i)),
                     static_cast<std::uint64_t>(j));
      }
      e.source = src;
      m.entries.push_back(std::move(e));
    }
  }
  return m;
}

CorpusStore::CorpusStore(Manifest manifest, PipelineConfig cfg)
    : manifest_(std::move(manifest)), cfg_(std::move(cfg)) {
  cfg_.validate();
  const std::vector<std::string> violations = manifest_.validate();
  if (!violations.empty()) {
    std::string msg = "invalid manifest:";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
}

std::shared_ptr<const Waveform> CorpusStore::waveform(
    const std::string& speaker_id, const std::string& sentence_id) {
  const std::pair<std::string, std::string> key{speaker_id, sentence_id};
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = wave_cache_.find(key);
    if (it != wave_cache_.end()) return it->second;
  }
  const ManifestEntry* e = manifest_.find(speaker_id, sentence_id);
  if (e == nullptr) {
    throw ValidationError("no manifest entry for " + speaker_id + "/" +
                          sentence_id);
  }
  // Materialize outside the lock; a concurrent duplicate computes the same
  // value and the first store wins.
  std::shared_ptr<const Waveform> wf;
  if (e->is_synth()) {
    const SynthSource& src = std::get<SynthSource>(e->source);
    wf = std::make_shared<const Waveform>(
        synth_speaker(src.profile, src.sentence_seed, src.duration_seconds,
                      src.sample_rate));
  } else {
    const auto& rel = std::get<std::filesystem::path>(e->source);
    const std::filesystem::path full =
        rel.is_absolute() ? rel : manifest_.base_dir / rel;
    wf = std::make_shared<const Waveform>(load_wav(full));
  }
  std::lock_guard<std::mutex> lock(mu_);
  return wave_cache_.emplace(key, std::move(wf)).first->second;
}

std::shared_ptr<const MfccExtractor> CorpusStore::extractor(int sample_rate) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = extractors_.find(sample_rate);
    if (it != extractors_.end()) return it->second;
  }
  auto ex = std::make_shared<const MfccExtractor>(cfg_, sample_rate);
  std::lock_guard<std::mutex> lock(mu_);
  return extractors_.emplace(sample_rate, std::move(ex)).first->second;
}

MfccVector CorpusStore::features(const std::string& speaker_id,
                                 const std::string& sentence_id) {
  const std::pair<std::string, std::string> key{speaker_id, sentence_id};
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = feature_cache_.find(key);
    if (it != feature_cache_.end()) return it->second;
  }
  const std::shared_ptr<const Waveform> wf = waveform(speaker_id, sentence_id);
  const MfccVector v =
      extractor(wf->sample_rate)
          ->sentence(*wf, {speaker_id, sentence_id}, Exec::kSerial);
  std::lock_guard<std::mutex> lock(mu_);
  return feature_cache_.emplace(key, v).first->second;
}

SpeakerGroup CorpusStore::group(
    const std::vector<std::string>& speaker_ids,
    const std::map<std::string, std::vector<std::string>>& sentences) {
  SpeakerGroup g;
  for (const std::string& id : speaker_ids) {
    const auto it = sentences.find(id);
    if (it == sentences.end()) {
      throw ValidationError("no sentence list for speaker " + id);
    }
    GroupSpeaker s;
    s.speaker_id = id;
    for (const std::string& sid : it->second) {
      EnrollmentSentence e;
      e.sentence_id = sid;
      e.audio = waveform(id, sid);
      e.features = features(id, sid);
      s.sentences.push_back(std::move(e));
    }
    g.speakers.push_back(std::move(s));
  }
  return g;
}

std::string split_name(Split s) {
  return s == Split::kSameText ? "same-text" : "distinct-text";
}

Split split_from_name(const std::string& name) {
  if (name == "same-text") return Split::kSameText;
  if (name == "distinct-text") return Split::kDistinctText;
  throw ValidationError("unknown split: " + name);
}

namespace {

/// Texts owned by a speaker, and the speakers owning a text.
struct TextIndex {
  std::map<std::string, std::set<std::string>> texts_of_speaker;
  std::map<std::string, std::set<std::string>> speakers_of_text;

  explicit TextIndex(const Manifest& m) {
    for (const ManifestEntry& e : m.entries) {
      texts_of_speaker[e.speaker_id].insert(e.text_id);
      speakers_of_text[e.text_id].insert(e.speaker_id);
    }
  }
};

}  // namespace

void TrialSpec::validate(const Manifest& m) const {
  const std::vector<std::string> violations = m.validate();
  if (!violations.empty()) {
    std::string msg = "invalid manifest:";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  if (trials_per_condition < 1) {
    throw ValidationError("trials_per_condition must be at least 1");
  }
  if (enrollment_count < 2) {
    throw ValidationError("enrollment_count must be at least 2");
  }
  if (group_sizes.empty()) {
    throw ValidationError("no group sizes requested");
  }
  std::set<int> seen_sizes;
  int max_size = 0;
  for (int s : group_sizes) {
    if (s < 3 || s > 5) {
      throw ValidationError("group sizes must lie in {3, 4, 5}, got " +
                            std::to_string(s));
    }
    if (!seen_sizes.insert(s).second) {
      throw ValidationError("duplicate group size " + std::to_string(s));
    }
    max_size = std::max(max_size, s);
  }
  if (splits.empty()) {
    throw ValidationError("no splits requested");
  }
  std::set<Split> seen_splits;
  for (Split s : splits) {
    if (!seen_splits.insert(s).second) {
      throw ValidationError("duplicate split " + split_name(s));
    }
  }

  const std::vector<std::string> ids = m.speaker_ids();
  const int needed = max_size + (include_outsider_probes ? 1 : 0);
  if (static_cast<int>(ids.size()) < needed) {
    throw ValidationError("manifest has " + std::to_string(ids.size()) +
                          " speakers but the spec needs " +
                          std::to_string(needed));
  }
  for (const std::string& id : ids) {
    const int count = static_cast<int>(m.entries_for(id).size());
    if (count < enrollment_count + 1) {
      throw ValidationError("speaker " + id + " has " +
                            std::to_string(count) +
                            " sentences; need enrollment_count + 1 = " +
                            std::to_string(enrollment_count + 1));
    }
  }

  // Split feasibility for any sampled group: each speaker needs a text that
  // everyone shares (same-text) and a text nobody else has (distinct-text).
  const TextIndex index(m);
  for (Split s : splits) {
    for (const std::string& id : ids) {
      bool ok = false;
      for (const std::string& text : index.texts_of_speaker.at(id)) {
        const std::size_t owners = index.speakers_of_text.at(text).size();
        if (s == Split::kSameText ? owners == ids.size() : owners == 1) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        throw ValidationError("speaker " + id + " has no " + split_name(s) +
                              " probe candidate");
      }
    }
  }
}

double ConditionStats::inclusion_error_rate() const {
  return trials > 0 ? static_cast<double>(inclusion_errors) / trials : 0.0;
}

double ConditionStats::identification_error_rate() const {
  return included_member_probes > 0
             ? static_cast<double>(identification_errors) /
                   included_member_probes
             : 0.0;
}

double CurvePoint::identification_error_rate() const {
  return included_member_probes > 0
             ? static_cast<double>(identification_errors) /
                   included_member_probes
             : 0.0;
}

const ConditionStats* ErrorReport::find(int group_size, Split split) const {
  for (const ConditionStats& c : conditions) {
    if (c.group_size == group_size && c.split == split) return &c;
  }
  return nullptr;
}

namespace {

struct TrialPlan {
  std::vector<std::string> group;  // sorted member ids
  std::string probe_speaker;
  std::string probe_sentence;
  std::string probe_text;
  bool outsider = false;
  std::map<std::string, std::vector<std::string>> enrollment;
};

/// Everything random about a trial is drawn here, in a fixed order, from a
/// generator seeded only by (rng_seed, size, split, index). The enrollment
/// choice below consumes no randomness, so plans for different enrollment
/// counts share their group and probe (common random numbers for the
/// training-size curve).
TrialPlan plan_trial(const Manifest& m, const TextIndex& index,
                     const std::vector<std::string>& all_ids,
                     const TrialSpec& spec, int group_size, Split split,
                     int trial_index, int enrollment_count) {
  Rng rng(mix_seed(
      mix_seed(mix_seed(spec.rng_seed, static_cast<std::uint64_t>(group_size)),
               split == Split::kSameText ? 1u : 2u),
      static_cast<std::uint64_t>(trial_index)));

  std::vector<std::string> ids = all_ids;
  rng.shuffle(ids);

  TrialPlan plan;
  plan.group.assign(ids.begin(), ids.begin() + group_size);
  std::sort(plan.group.begin(), plan.group.end());
  plan.outsider =
      spec.include_outsider_probes && trial_index % 2 == 1;
  plan.probe_speaker =
      plan.outsider
          ? ids[static_cast<std::size_t>(group_size)]
          : plan.group[static_cast<std::size_t>(
                rng.next_below(static_cast<std::uint64_t>(group_size)))];

  // Probe candidates under the split, relative to the group members other
  // than the probe's own speaker.
  std::vector<const ManifestEntry*> candidates;
  for (const ManifestEntry* e : m.entries_for(plan.probe_speaker)) {
    bool all_have = true;
    bool none_has = true;
    for (const std::string& member : plan.group) {
      if (member == plan.probe_speaker) continue;
      const bool has =
          index.texts_of_speaker.at(member).count(e->text_id) > 0;
      all_have = all_have && has;
      none_has = none_has && !has;
    }
    if (split == Split::kSameText ? all_have : none_has) {
      candidates.push_back(e);
    }
  }
  if (candidates.empty()) {
    throw ValidationError("no " + split_name(split) +
                          " probe candidate for " + plan.probe_speaker);
  }
  const ManifestEntry* probe = candidates[static_cast<std::size_t>(
      rng.next_below(candidates.size()))];
  plan.probe_sentence = probe->sentence_id;
  plan.probe_text = probe->text_id;

  for (const std::string& member : plan.group) {
    std::vector<std::string> pool;
    std::string forced;
    for (const ManifestEntry* e : m.entries_for(member)) {
      if (member == plan.probe_speaker &&
          e->sentence_id == plan.probe_sentence) {
        continue;  // the probe is always held out of its own enrollment
      }
      if (split == Split::kSameText && member != plan.probe_speaker &&
          forced.empty() && e->text_id == plan.probe_text) {
        // The member's own copy of the probe text must be enrolled; that
        // is what makes the condition "same text".
        forced = e->sentence_id;
        continue;
      }
      pool.push_back(e->sentence_id);
    }
    std::vector<std::string> chosen;
    if (!forced.empty()) chosen.push_back(forced);
    for (const std::string& sid : pool) {
      if (static_cast<int>(chosen.size()) >= enrollment_count) break;
      chosen.push_back(sid);
    }
    if (static_cast<int>(chosen.size()) < enrollment_count) {
      throw ValidationError("speaker " + member +
                            " cannot supply " +
                            std::to_string(enrollment_count) +
                            " enrollment sentences");
    }
    std::sort(chosen.begin(), chosen.end());
    plan.enrollment[member] = std::move(chosen);
  }
  return plan;
}

struct TrialOutcome {
  bool outsider = false;
  bool included = false;
  bool correct = false;
};

TrialOutcome execute_trial(CorpusStore& store, const TrialPlan& plan,
                           MixtureFeatureCache* cache) {
  if (!plan.outsider) {
    const auto& own = plan.enrollment.at(plan.probe_speaker);
    if (std::find(own.begin(), own.end(), plan.probe_sentence) != own.end()) {
      throw Error("probe sentence leaked into its own enrollment");
    }
  }
  SpeakerGroup group = store.group(plan.group, plan.enrollment);
  const GroupModel model =
      GroupModel::build(group, store.config(), Exec::kSerial, cache);
  const MfccVector probe =
      store.features(plan.probe_speaker, plan.probe_sentence);
  const IdentificationVerdict verdict = identify(probe, model);

  TrialOutcome out;
  out.outsider = plan.outsider;
  out.included = verdict.inclusion.included;
  out.correct = verdict.decision.has_value() &&
                *verdict.decision == plan.probe_speaker;
  return out;
}

void tally(ConditionStats& stats, const TrialOutcome& o) {
  ++stats.trials;
  if (o.outsider) {
    ++stats.outsider_probes;
    if (o.included) ++stats.inclusion_errors;  // non-member accepted
  } else {
    ++stats.member_probes;
    if (!o.included) {
      ++stats.inclusion_errors;  // member rejected
    } else {
      ++stats.included_member_probes;
      if (!o.correct) ++stats.identification_errors;
    }
  }
}

}  // namespace

ErrorReport run_trials(CorpusStore& store, const TrialSpec& spec, Exec exec) {
  spec.validate(store.manifest());
  const std::vector<std::string> all_ids = store.manifest().speaker_ids();
  const TextIndex index(store.manifest());

  ErrorReport report;
  report.spec = spec;
  MixtureFeatureCache cache;

  for (int size : spec.group_sizes) {
    for (Split split : spec.splits) {
      std::vector<TrialPlan> plans;
      plans.reserve(static_cast<std::size_t>(spec.trials_per_condition));
      for (int j = 0; j < spec.trials_per_condition; ++j) {
        plans.push_back(plan_trial(store.manifest(), index, all_ids, spec,
                                   size, split, j, spec.enrollment_count));
      }
      // The trial loop is the parallel kernel; outcomes land in their own
      // slots and the tally below runs in trial order.
      std::vector<TrialOutcome> outcomes(plans.size());
      for_each_index(exec, static_cast<int>(plans.size()), [&](int j) {
        outcomes[static_cast<std::size_t>(j)] =
            execute_trial(store, plans[static_cast<std::size_t>(j)], &cache);
      });
      ConditionStats stats;
      stats.group_size = size;
      stats.split = split;
      for (const TrialOutcome& o : outcomes) tally(stats, o);
      report.conditions.push_back(stats);
    }
  }
  return report;
}

std::vector<CurvePoint> error_curve(CorpusStore& store, const TrialSpec& spec,
                                    const std::vector<int>& enrollment_counts,
                                    Exec exec) {
  spec.validate(store.manifest());
  if (enrollment_counts.empty()) {
    throw ValidationError("no enrollment counts requested");
  }
  const std::vector<std::string> all_ids = store.manifest().speaker_ids();
  for (int e : enrollment_counts) {
    if (e < 2) {
      throw ValidationError("enrollment counts must be at least 2");
    }
    for (const std::string& id : all_ids) {
      const int count =
          static_cast<int>(store.manifest().entries_for(id).size());
      if (count < e + 1) {
        throw ValidationError("speaker " + id + " has " +
                              std::to_string(count) +
                              " sentences; cannot enroll " +
                              std::to_string(e));
      }
    }
  }
  const TextIndex index(store.manifest());

  std::vector<CurvePoint> curve;
  MixtureFeatureCache cache;
  for (int count : enrollment_counts) {
    CurvePoint point;
    point.enrollment_count = count;
    for (int size : spec.group_sizes) {
      for (Split split : spec.splits) {
        std::vector<TrialPlan> plans;
        for (int j = 0; j < spec.trials_per_condition; ++j) {
          TrialPlan plan = plan_trial(store.manifest(), index, all_ids, spec,
                                      size, split, j, count);
          if (!plan.outsider) plans.push_back(std::move(plan));
        }
        std::vector<TrialOutcome> outcomes(plans.size());
        for_each_index(exec, static_cast<int>(plans.size()), [&](int j) {
          outcomes[static_cast<std::size_t>(j)] = execute_trial(
              store, plans[static_cast<std::size_t>(j)], &cache);
        });
        for (const TrialOutcome& o : outcomes) {
          ++point.member_probes;
          if (o.included) {
            ++point.included_member_probes;
            if (!o.correct) ++point.identification_errors;
          }
        }
      }
    }
    curve.push_back(point);
  }
  return curve;
}

namespace {

std::string join_sizes(const std::vector<int>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes[i]);
  }
  return out;
}

std::string join_splits(const std::vector<Split>& splits) {
  std::string out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (i) out += ',';
    out += split_name(splits[i]);
  }
  return out;
}

void expect_token(std::istream& is, const std::string& want) {
  std::string got;
  if (!(is >> got) || got != want) {
    throw FormatError("report: expected '" + want + "', got '" + got + "'");
  }
}

}  // namespace

void export_report(std::ostream& os, const ErrorReport& report) {
  os << "mixprint-report v1\n";
  os << "seed " << report.spec.rng_seed << "\n";
  os << "group_sizes " << join_sizes(report.spec.group_sizes) << "\n";
  os << "splits " << join_splits(report.spec.splits) << "\n";
  os << "trials_per_condition " << report.spec.trials_per_condition << "\n";
  os << "enrollment_count " << report.spec.enrollment_count << "\n";
  os << "outsider_probes " << (report.spec.include_outsider_probes ? 1 : 0)
     << "\n";
  os << "conditions " << report.conditions.size() << "\n";
  for (const ConditionStats& c : report.conditions) {
    os << "condition " << c.group_size << ' ' << split_name(c.split)
       << " trials " << c.trials << " member_probes " << c.member_probes
       << " outsider_probes " << c.outsider_probes << " inclusion_errors "
       << c.inclusion_errors << " included_member_probes "
       << c.included_member_probes << " identification_errors "
       << c.identification_errors << " inclusion_error_rate "
       << format_double(c.inclusion_error_rate())
       << " identification_error_rate "
       << format_double(c.identification_error_rate()) << "\n";
  }
  os << "plot-data\n";
  for (const ConditionStats& c : report.conditions) {
    os << c.group_size << ' ' << split_name(c.split) << ' '
       << format_double(c.inclusion_error_rate()) << ' '
       << format_double(c.identification_error_rate()) << "\n";
  }
}

ErrorReport parse_report(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "mixprint-report v1") {
    throw FormatError("not a mixprint report");
  }
  ErrorReport report;
  expect_token(is, "seed");
  if (!(is >> report.spec.rng_seed)) throw FormatError("report: bad seed");

  std::string value;
  expect_token(is, "group_sizes");
  is >> value;
  report.spec.group_sizes.clear();
  for (const std::string& s : split_on(value, ',')) {
    report.spec.group_sizes.push_back(
        static_cast<int>(parse_long(s, "group size")));
  }
  expect_token(is, "splits");
  is >> value;
  report.spec.splits.clear();
  for (const std::string& s : split_on(value, ',')) {
    report.spec.splits.push_back(split_from_name(s));
  }
  expect_token(is, "trials_per_condition");
  if (!(is >> report.spec.trials_per_condition)) {
    throw FormatError("report: bad trials_per_condition");
  }
  expect_token(is, "enrollment_count");
  if (!(is >> report.spec.enrollment_count)) {
    throw FormatError("report: bad enrollment_count");
  }
  expect_token(is, "outsider_probes");
  int flag = 0;
  if (!(is >> flag)) throw FormatError("report: bad outsider_probes");
  report.spec.include_outsider_probes = flag != 0;

  expect_token(is, "conditions");
  std::size_t count = 0;
  if (!(is >> count)) throw FormatError("report: bad condition count");
  for (std::size_t i = 0; i < count; ++i) {
    ConditionStats c;
    expect_token(is, "condition");
    std::string split;
    if (!(is >> c.group_size >> split)) {
      throw FormatError("report: bad condition header");
    }
    c.split = split_from_name(split);
    expect_token(is, "trials");
    is >> c.trials;
    expect_token(is, "member_probes");
    is >> c.member_probes;
    expect_token(is, "outsider_probes");
    is >> c.outsider_probes;
    expect_token(is, "inclusion_errors");
    is >> c.inclusion_errors;
    expect_token(is, "included_member_probes");
    is >> c.included_member_probes;
    expect_token(is, "identification_errors");
    is >> c.identification_errors;
    expect_token(is, "inclusion_error_rate");
    double rate = 0.0;
    is >> rate;
    expect_token(is, "identification_error_rate");
    is >> rate;
    if (!is) throw FormatError("report: truncated condition");
    report.conditions.push_back(c);
  }
  expect_token(is, "plot-data");
  return report;
}

void export_curve(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "mixprint-curve v1\n";
  os << "points " << curve.size() << "\n";
  for (const CurvePoint& p : curve) {
    os << "point " << p.enrollment_count << " member_probes "
       << p.member_probes << " included_member_probes "
       << p.included_member_probes << " identification_errors "
       << p.identification_errors << " identification_error_rate "
       << format_double(p.identification_error_rate()) << "\n";
  }
}

std::vector<CurvePoint> parse_curve(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "mixprint-curve v1") {
    throw FormatError("not a mixprint curve file");
  }
  expect_token(is, "points");
  std::size_t count = 0;
  if (!(is >> count)) throw FormatError("curve: bad point count");
  std::vector<CurvePoint> curve;
  for (std::size_t i = 0; i < count; ++i) {
    CurvePoint p;
    expect_token(is, "point");
    is >> p.enrollment_count;
    expect_token(is, "member_probes");
    is >> p.member_probes;
    expect_token(is, "included_member_probes");
    is >> p.included_member_probes;
    expect_token(is, "identification_errors");
    is >> p.identification_errors;
    expect_token(is, "identification_error_rate");
    double rate = 0.0;
    is >> rate;
    if (!is) throw FormatError("curve: truncated point");
    curve.push_back(p);
  }
  return curve;
}

}  // namespace mixprint
