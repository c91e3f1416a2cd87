// mixprint/tests/test_corpus.cpp
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mixprint/corpus.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/wav.hpp"

using namespace mixprint;

namespace {

/// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("mixprint_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

ManifestEntry synth_entry(const std::string& speaker,
                          const std::string& sentence,
                          const std::string& text, double f0,
                          std::uint64_t seed) {
  ManifestEntry e;
  e.speaker_id = speaker;
  e.sentence_id = sentence;
  e.text_id = text;
  SynthSource src;
  src.profile.speaker_id = speaker;
  src.profile.fundamental_hz = f0;
  src.profile.formants = {{420.0, 0.9}, {1500.0, 0.6}, {2700.0, 0.4}};
  src.profile.jitter_seed = seed;
  src.sentence_seed = seed;
  src.duration_seconds = 0.4;
  e.source = src;
  return e;
}

std::string format_all(const Manifest& m) {
  std::string out;
  for (const ManifestEntry& e : m.entries) {
    out += format_manifest_entry(e);
    out += '\n';
  }
  return out;
}

std::string report_string(const ErrorReport& r) {
  std::ostringstream os;
  export_report(os, r);
  return os.str();
}

std::string curve_string(const std::vector<CurvePoint>& c) {
  std::ostringstream os;
  export_curve(os, c);
  return os.str();
}

/// A small corpus that keeps every trial-harness test fast: short sentences,
/// enough speakers for an outsider next to a size-3 group.
Manifest trial_corpus() {
  return generate_synthetic_corpus(/*seed=*/7, /*num_speakers=*/4,
                                   /*sentences_per_speaker=*/4,
                                   /*same_text_pairs=*/2,
                                   /*duration_seconds=*/0.5);
}

TrialSpec small_spec() {
  TrialSpec spec;
  spec.group_sizes = {3};
  spec.splits = {Split::kSameText, Split::kDistinctText};
  spec.trials_per_condition = 4;
  spec.rng_seed = 11;
  spec.include_outsider_probes = true;
  spec.enrollment_count = 3;
  return spec;
}

}  // namespace

TEST_CASE("a manifest line with a wav source parses field by field") {
  const ManifestEntry e =
      parse_manifest_entry("  alice ,\ts01,  greet01 , wav/alice-s01.wav");
  CHECK(e.speaker_id == "alice");
  CHECK(e.sentence_id == "s01");
  CHECK(e.text_id == "greet01");
  REQUIRE_FALSE(e.is_synth());
  CHECK(std::get<std::filesystem::path>(e.source) ==
        std::filesystem::path("wav/alice-s01.wav"));
}

TEST_CASE("a synthetic manifest entry survives a format and parse round trip") {
  ManifestEntry e = synth_entry("bob", "s02", "story07", 173.4567890123456, 99);
  std::get<SynthSource>(e.source).duration_seconds = 1.25;
  std::get<SynthSource>(e.source).sample_rate = 8000;

  const std::string line = format_manifest_entry(e);
  const ManifestEntry back = parse_manifest_entry(line);

  CHECK(back.speaker_id == e.speaker_id);
  CHECK(back.sentence_id == e.sentence_id);
  CHECK(back.text_id == e.text_id);
  REQUIRE(back.is_synth());
  const SynthSource& a = std::get<SynthSource>(e.source);
  const SynthSource& b = std::get<SynthSource>(back.source);
  // Doubles are written with enough digits to reproduce the exact bits.
  CHECK(b.profile.fundamental_hz == a.profile.fundamental_hz);
  CHECK(b.profile.jitter_seed == a.profile.jitter_seed);
  CHECK(b.sentence_seed == a.sentence_seed);
  CHECK(b.duration_seconds == a.duration_seconds);
  CHECK(b.sample_rate == a.sample_rate);
  REQUIRE(b.profile.formants.size() == a.profile.formants.size());
  for (std::size_t i = 0; i < a.profile.formants.size(); ++i) {
    CHECK(b.profile.formants[i].center_hz == a.profile.formants[i].center_hz);
    CHECK(b.profile.formants[i].gain == a.profile.formants[i].gain);
  }
  // Formatting the reparsed entry reproduces the line byte for byte.
  CHECK(format_manifest_entry(back) == line);
}

TEST_CASE("malformed manifest lines are rejected with a reason") {
  CHECK_THROWS_AS(parse_manifest_entry("a, b, c"), FormatError);
  CHECK_THROWS_AS(parse_manifest_entry("a, b, c, d, e"), FormatError);
  CHECK_THROWS_AS(
      parse_manifest_entry("a, s, t, synth:f0=120;seed=1"),  // no formants
      FormatError);
  CHECK_THROWS_AS(
      parse_manifest_entry("a, s, t, synth:f0=120;seed=1;formants=500:0.9;x=1"),
      FormatError);
  CHECK_THROWS_AS(
      parse_manifest_entry(
          "a, s, t, synth:f0=twelve;seed=1;formants=500:0.9"),
      FormatError);
  CHECK_THROWS_AS(
      parse_manifest_entry(
          "a, s, t, synth:f0=120;seed=1;formants=500:0.9:700"),  // odd list
      FormatError);
  CHECK_THROWS_AS(
      parse_manifest_entry("a, s, t, synth:f0=120;seed=1;noequals"),
      FormatError);
}

TEST_CASE("speaker listing is sorted and entry lookup respects both keys") {
  Manifest m;
  m.entries.push_back(synth_entry("carol", "s2", "t1", 150, 1));
  m.entries.push_back(synth_entry("alice", "s1", "t2", 160, 2));
  m.entries.push_back(synth_entry("carol", "s1", "t3", 150, 3));
  m.entries.push_back(synth_entry("bob", "s1", "t4", 170, 4));

  CHECK(m.speaker_ids() == std::vector<std::string>{"alice", "bob", "carol"});

  const auto carol = m.entries_for("carol");
  REQUIRE(carol.size() == 2);
  CHECK(carol[0]->sentence_id == "s1");  // sorted by sentence id
  CHECK(carol[1]->sentence_id == "s2");

  REQUIRE(m.find("bob", "s1") != nullptr);
  CHECK(m.find("bob", "s1")->text_id == "t4");
  CHECK(m.find("bob", "s2") == nullptr);
  CHECK(m.find("dave", "s1") == nullptr);
}

TEST_CASE("manifest validation collects every violation at once") {
  TempDir tmp("manifest_validate");
  Manifest m;
  m.base_dir = tmp.path;
  // One speaker with a malformed id, a duplicate pair, a missing wav file,
  // a broken synth profile, and a speaker with too few sentences.
  m.entries.push_back(synth_entry("bad id", "s1", "t1", 150, 1));
  m.entries.push_back(synth_entry("bad id", "s2", "t2", 150, 2));
  m.entries.push_back(synth_entry("bad id", "s3", "t3", 150, 3));
  m.entries.push_back(synth_entry("dup", "s1", "t4", 150, 4));
  m.entries.push_back(synth_entry("dup", "s1", "t5", 150, 5));
  m.entries.push_back(synth_entry("dup", "s2", "t6", 150, 6));
  ManifestEntry wav;
  wav.speaker_id = "wavless";
  wav.sentence_id = "s1";
  wav.text_id = "t7";
  wav.source = std::filesystem::path("no_such_file.wav");
  m.entries.push_back(wav);
  ManifestEntry broken = synth_entry("broken", "s1", "t8", 150, 7);
  std::get<SynthSource>(broken.source).profile.fundamental_hz = 20.0;
  m.entries.push_back(broken);

  const std::vector<std::string> violations = m.validate();
  auto any_contains = [&](const std::string& needle) {
    for (const std::string& v : violations) {
      if (v.find(needle) != std::string::npos) return true;
    }
    return false;
  };
  CHECK(violations.size() >= 5);
  CHECK(any_contains("bad speaker_id: 'bad id'"));
  CHECK(any_contains("duplicate entry: dup/s1"));
  CHECK(any_contains("missing audio file"));
  CHECK(any_contains("no_such_file.wav"));
  CHECK(any_contains("broken/s1"));
  CHECK(any_contains("wavless has only 1 sentences"));
}

TEST_CASE("an empty manifest is a single violation") {
  const std::vector<std::string> v = Manifest{}.validate();
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "manifest has no entries");
}

TEST_CASE("a saved manifest loads back identical") {
  TempDir tmp("manifest_io");
  const Manifest m = generate_synthetic_corpus(3, 3, 3, 1, 0.4);
  const std::filesystem::path path = tmp.path / "corpus.tsv";
  save_manifest(path, m);

  const Manifest back = load_manifest(path);
  CHECK(back.base_dir == tmp.path);
  CHECK(format_all(back) == format_all(m));
}

TEST_CASE("wav sources resolve against the manifest's directory") {
  TempDir tmp("manifest_wav");
  // Three real wav files for one speaker, referenced by relative path.
  Manifest m;
  m.base_dir = tmp.path;
  for (int j = 0; j < 3; ++j) {
    const ManifestEntry seed = synth_entry("solo", "s" + std::to_string(j),
                                           "t" + std::to_string(j), 140, 50 + j);
    const SynthSource& src = std::get<SynthSource>(seed.source);
    const std::string rel = "solo_" + std::to_string(j) + ".wav";
    save_wav(tmp.path / rel,
             synth_speaker(src.profile, src.sentence_seed,
                           src.duration_seconds, src.sample_rate));
    ManifestEntry e = seed;
    e.source = std::filesystem::path(rel);
    m.entries.push_back(e);
  }
  CHECK(m.validate().empty());

  const std::filesystem::path path = tmp.path / "wavs.tsv";
  save_manifest(path, m);
  const Manifest loaded = load_manifest(path);

  CorpusStore store(loaded, PipelineConfig{});
  const std::shared_ptr<const Waveform> wf = store.waveform("solo", "s1");
  CHECK(wf->sample_rate == 16000);
  CHECK(wf->samples.size() == static_cast<std::size_t>(16000 * 0.4));
}

TEST_CASE("loading reports the file and line of the first bad record") {
  TempDir tmp("manifest_badline");
  const std::filesystem::path path = tmp.path / "bad.tsv";
  {
    std::ofstream os(path);
    os << "# header comment\n\n";
    os << "a, s1, t1, synth:f0=120;seed=1;formants=500:0.9\n";
    os << "broken line with, too few\n";
  }
  try {
    load_manifest(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.tsv:4") != std::string::npos);
  }
  CHECK_THROWS_AS(load_manifest(tmp.path / "absent.tsv"), IoError);
}

TEST_CASE("loading a structurally valid but inconsistent manifest fails") {
  TempDir tmp("manifest_invalid");
  const std::filesystem::path path = tmp.path / "thin.tsv";
  {
    std::ofstream os(path);
    // Parses fine, but one sentence per speaker is below the minimum.
    os << "a, s1, t1, synth:f0=120;seed=1;formants=500:0.9\n";
  }
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
}

TEST_CASE("the synthetic corpus is a pure function of its seed") {
  const Manifest a = generate_synthetic_corpus(41, 5, 6, 2, 0.5);
  const Manifest b = generate_synthetic_corpus(41, 5, 6, 2, 0.5);
  const Manifest c = generate_synthetic_corpus(42, 5, 6, 2, 0.5);
  CHECK(format_all(a) == format_all(b));
  CHECK(format_all(a) != format_all(c));
}

TEST_CASE("the synthetic corpus has the advertised shape") {
  const int speakers = 5;
  const int sentences = 6;
  const int shared = 2;
  const Manifest m = generate_synthetic_corpus(13, speakers, sentences, shared);
  CHECK(m.validate().empty());
  CHECK(m.entries.size() ==
        static_cast<std::size_t>(speakers * sentences));

  const std::vector<std::string> ids = m.speaker_ids();
  REQUIRE(static_cast<int>(ids.size()) == speakers);
  CHECK(ids.front() == "spk01");
  CHECK(ids.back() == "spk05");

  // Shared texts: one entry per speaker, same sentence seed, own voice.
  std::map<std::string, std::set<std::string>> speakers_of_text;
  std::map<std::string, std::set<std::uint64_t>> seeds_of_text;
  std::map<std::string, std::set<double>> f0_of_text;
  for (const ManifestEntry& e : m.entries) {
    REQUIRE(e.is_synth());
    const SynthSource& src = std::get<SynthSource>(e.source);
    speakers_of_text[e.text_id].insert(e.speaker_id);
    seeds_of_text[e.text_id].insert(src.sentence_seed);
    f0_of_text[e.text_id].insert(src.profile.fundamental_hz);
  }
  int shared_texts = 0;
  for (const auto& [text, owners] : speakers_of_text) {
    if (owners.size() > 1) {
      ++shared_texts;
      CHECK(static_cast<int>(owners.size()) == speakers);
      // Same words, different voices.
      CHECK(seeds_of_text[text].size() == 1);
      CHECK(f0_of_text[text].size() == owners.size());
    } else {
      CHECK(seeds_of_text[text].size() == 1);
    }
  }
  CHECK(shared_texts == shared);

  // Fundamentals spread across the band instead of clustering.
  std::vector<double> f0s;
  for (const std::string& id : ids) {
    f0s.push_back(std::get<SynthSource>(m.entries_for(id)[0]->source)
                      .profile.fundamental_hz);
  }
  for (double f : f0s) {
    CHECK(f >= 96.0);
    CHECK(f <= 324.0);
  }
  std::sort(f0s.begin(), f0s.end());
  for (std::size_t i = 1; i < f0s.size(); ++i) {
    CHECK(f0s[i] - f0s[i - 1] > 20.0);
  }
}

TEST_CASE("corpus generation rejects parameters it cannot honor") {
  CHECK_THROWS_AS(generate_synthetic_corpus(1, 2, 4), ValidationError);
  CHECK_THROWS_AS(generate_synthetic_corpus(1, 4, 2), ValidationError);
  CHECK_THROWS_AS(generate_synthetic_corpus(1, 4, 4, 5), ValidationError);
  CHECK_THROWS_AS(generate_synthetic_corpus(1, 4, 4, -1), ValidationError);
  CHECK_THROWS_AS(generate_synthetic_corpus(1, 4, 4, 0, 0.0), ValidationError);
  CHECK_THROWS_AS(generate_synthetic_corpus(1, 4, 4, 0, 1.0, 0),
                  ValidationError);
}

TEST_CASE("the store memoizes audio and features") {
  CorpusStore store(trial_corpus(), PipelineConfig{});

  const std::shared_ptr<const Waveform> w1 = store.waveform("spk01", "s01");
  const std::shared_ptr<const Waveform> w2 = store.waveform("spk01", "s01");
  CHECK(w1.get() == w2.get());  // cached, not re-synthesized

  const MfccVector f1 = store.features("spk02", "s03");
  const MfccVector f2 = store.features("spk02", "s03");
  for (int i = 0; i < kNumCoeffs; ++i) CHECK(f1.c[i] == f2.c[i]);

  // The cache must not change the value: recompute from the waveform.
  const MfccExtractor extractor(store.config(), w1->sample_rate);
  const MfccVector direct = extractor.sentence(
      *store.waveform("spk02", "s03"), {"spk02", "s03"}, Exec::kSerial);
  for (int i = 0; i < kNumCoeffs; ++i) CHECK(f1.c[i] == direct.c[i]);

  CHECK_THROWS_AS(store.waveform("spk01", "s99"), ValidationError);
  CHECK_THROWS_AS(store.features("ghost", "s01"), ValidationError);
}

TEST_CASE("the store refuses an invalid manifest or config") {
  Manifest thin;
  thin.entries.push_back(synth_entry("a", "s1", "t1", 150, 1));
  CHECK_THROWS_AS(CorpusStore(thin, PipelineConfig{}), ValidationError);

  PipelineConfig bad;
  bad.frame_ms = 0.0;
  CHECK_THROWS_AS(CorpusStore(trial_corpus(), bad), ValidationError);
}

TEST_CASE("the store assembles enrollment groups with features attached") {
  CorpusStore store(trial_corpus(), PipelineConfig{});
  const std::vector<std::string> members = {"spk01", "spk03"};
  const std::map<std::string, std::vector<std::string>> sentences = {
      {"spk01", {"s01", "s02"}},
      {"spk03", {"s02", "s04"}},
  };
  const SpeakerGroup g = store.group(members, sentences);
  REQUIRE(g.speakers.size() == 2);
  CHECK(g.speakers[0].speaker_id == "spk01");
  CHECK(g.speakers[1].speaker_id == "spk03");
  REQUIRE(g.speakers[1].sentences.size() == 2);
  CHECK(g.speakers[1].sentences[1].sentence_id == "s04");
  for (const GroupSpeaker& s : g.speakers) {
    for (const EnrollmentSentence& e : s.sentences) {
      REQUIRE(e.audio != nullptr);
      const MfccVector want = store.features(s.speaker_id, e.sentence_id);
      for (int i = 0; i < kNumCoeffs; ++i) CHECK(e.features.c[i] == want.c[i]);
    }
  }

  CHECK_THROWS_AS(store.group({"spk01", "spk02"}, sentences), ValidationError);
  CHECK_THROWS_AS(
      store.group({"nobody"},
                  std::map<std::string, std::vector<std::string>>{
                      {"nobody", {"s01"}}}),
      ValidationError);
}

TEST_CASE("split names round trip and reject strangers") {
  CHECK(split_name(Split::kSameText) == "same-text");
  CHECK(split_name(Split::kDistinctText) == "distinct-text");
  CHECK(split_from_name("same-text") == Split::kSameText);
  CHECK(split_from_name("distinct-text") == Split::kDistinctText);
  CHECK_THROWS_AS(split_from_name("mixed"), ValidationError);
}

TEST_CASE("a trial spec checks itself against the manifest") {
  const Manifest m = generate_synthetic_corpus(7, 5, 5, 2, 0.4);

  TrialSpec ok;
  ok.group_sizes = {3, 4};
  ok.trials_per_condition = 2;
  ok.enrollment_count = 3;
  ok.include_outsider_probes = true;
  CHECK_NOTHROW(ok.validate(m));

  TrialSpec spec = ok;
  spec.group_sizes = {3, 6};
  CHECK_THROWS_AS(spec.validate(m), ValidationError);
  spec.group_sizes = {3, 3};
  CHECK_THROWS_AS(spec.validate(m), ValidationError);
  spec.group_sizes.clear();
  CHECK_THROWS_AS(spec.validate(m), ValidationError);

  spec = ok;
  spec.splits = {};
  CHECK_THROWS_AS(spec.validate(m), ValidationError);
  spec.splits = {Split::kSameText, Split::kSameText};
  CHECK_THROWS_AS(spec.validate(m), ValidationError);

  spec = ok;
  spec.trials_per_condition = 0;
  CHECK_THROWS_AS(spec.validate(m), ValidationError);

  spec = ok;
  spec.enrollment_count = 1;
  CHECK_THROWS_AS(spec.validate(m), ValidationError);
  spec.enrollment_count = 5;  // needs 6 sentences, corpus has 5
  CHECK_THROWS_AS(spec.validate(m), ValidationError);

  // Five speakers cannot host a size-5 group plus an outsider.
  spec = ok;
  spec.group_sizes = {5};
  CHECK_THROWS_AS(spec.validate(m), ValidationError);
  spec.include_outsider_probes = false;
  CHECK_NOTHROW(spec.validate(m));
}

TEST_CASE("split feasibility falls out of the corpus text structure") {
  // No shared texts: the same-text condition has no possible probe.
  const Manifest no_shared = generate_synthetic_corpus(7, 4, 4, 0, 0.4);
  TrialSpec spec;
  spec.group_sizes = {3};
  spec.trials_per_condition = 1;
  spec.enrollment_count = 3;
  spec.splits = {Split::kSameText};
  CHECK_THROWS_AS(spec.validate(no_shared), ValidationError);
  spec.splits = {Split::kDistinctText};
  CHECK_NOTHROW(spec.validate(no_shared));

  // All texts shared: the distinct-text condition is impossible.
  const Manifest all_shared = generate_synthetic_corpus(7, 4, 4, 4, 0.4);
  spec.splits = {Split::kDistinctText};
  CHECK_THROWS_AS(spec.validate(all_shared), ValidationError);
  spec.splits = {Split::kSameText};
  CHECK_NOTHROW(spec.validate(all_shared));
}

TEST_CASE("the trial run books every probe exactly once") {
  CorpusStore store(trial_corpus(), PipelineConfig{});
  const TrialSpec spec = small_spec();
  const ErrorReport report = run_trials(store, spec, Exec::kSerial);

  REQUIRE(report.conditions.size() == 2);
  CHECK(report.spec.rng_seed == spec.rng_seed);
  CHECK(report.spec.enrollment_count == spec.enrollment_count);
  for (const ConditionStats& c : report.conditions) {
    CHECK(c.group_size == 3);
    CHECK(c.trials == spec.trials_per_condition);
    // Odd trial indices probe the outsider, so four trials split two-two.
    CHECK(c.member_probes == 2);
    CHECK(c.outsider_probes == 2);
    CHECK(c.member_probes + c.outsider_probes == c.trials);
    CHECK(c.included_member_probes <= c.member_probes);
    CHECK(c.identification_errors <= c.included_member_probes);
    CHECK(c.inclusion_errors <= c.trials);
    CHECK(c.inclusion_error_rate() >= 0.0);
    CHECK(c.inclusion_error_rate() <= 1.0);
    CHECK(c.identification_error_rate() >= 0.0);
    CHECK(c.identification_error_rate() <= 1.0);
  }
  CHECK(report.find(3, Split::kSameText) != nullptr);
  CHECK(report.find(3, Split::kDistinctText) != nullptr);
  CHECK(report.find(4, Split::kSameText) == nullptr);
}

TEST_CASE("without outsiders every trial probes a member") {
  CorpusStore store(trial_corpus(), PipelineConfig{});
  TrialSpec spec = small_spec();
  spec.include_outsider_probes = false;
  spec.trials_per_condition = 3;
  const ErrorReport report = run_trials(store, spec, Exec::kSerial);
  for (const ConditionStats& c : report.conditions) {
    CHECK(c.member_probes == 3);
    CHECK(c.outsider_probes == 0);
  }
}

TEST_CASE("a rerun of the same spec reproduces the report byte for byte") {
  const TrialSpec spec = small_spec();
  CorpusStore store(trial_corpus(), PipelineConfig{});
  const std::string first =
      report_string(run_trials(store, spec, Exec::kSerial));
  // Same store, warm caches: the cached values must not drift.
  const std::string warm =
      report_string(run_trials(store, spec, Exec::kSerial));
  CHECK(first == warm);
  // Fresh store, cold caches.
  CorpusStore fresh(trial_corpus(), PipelineConfig{});
  const std::string cold =
      report_string(run_trials(fresh, spec, Exec::kSerial));
  CHECK(first == cold);
}

TEST_CASE("the learning curve reuses one plan per trial index") {
  CorpusStore store(trial_corpus(), PipelineConfig{});
  const TrialSpec spec = small_spec();
  const std::vector<int> counts = {2, 3};
  const std::vector<CurvePoint> curve =
      error_curve(store, spec, counts, Exec::kSerial);

  REQUIRE(curve.size() == 2);
  CHECK(curve[0].enrollment_count == 2);
  CHECK(curve[1].enrollment_count == 3);
  // Common random numbers: the member probes are the same trials at every
  // point, only the enrollment grows.
  CHECK(curve[0].member_probes == curve[1].member_probes);
  CHECK(curve[0].member_probes == 4);  // 2 conditions x 2 member trials
  for (const CurvePoint& p : curve) {
    CHECK(p.included_member_probes <= p.member_probes);
    CHECK(p.identification_errors <= p.included_member_probes);
    CHECK(p.identification_error_rate() >= 0.0);
    CHECK(p.identification_error_rate() <= 1.0);
  }

  const std::vector<CurvePoint> again =
      error_curve(store, spec, counts, Exec::kSerial);
  CHECK(curve_string(curve) == curve_string(again));
}

TEST_CASE("the learning curve rejects counts the corpus cannot cover") {
  CorpusStore store(trial_corpus(), PipelineConfig{});
  const TrialSpec spec = small_spec();
  CHECK_THROWS_AS(error_curve(store, spec, {}, Exec::kSerial),
                  ValidationError);
  CHECK_THROWS_AS(error_curve(store, spec, {1}, Exec::kSerial),
                  ValidationError);
  CHECK_THROWS_AS(error_curve(store, spec, {4}, Exec::kSerial),
                  ValidationError);  // 4 sentences, need 4 + 1
}

TEST_CASE("an error report round trips through its text form") {
  CorpusStore store(trial_corpus(), PipelineConfig{});
  const ErrorReport report = run_trials(store, small_spec(), Exec::kSerial);
  const std::string text = report_string(report);

  std::istringstream is(text);
  const ErrorReport back = parse_report(is);
  CHECK(report_string(back) == text);
  CHECK(back.spec.rng_seed == report.spec.rng_seed);
  CHECK(back.spec.group_sizes == report.spec.group_sizes);
  CHECK(back.spec.include_outsider_probes ==
        report.spec.include_outsider_probes);
  REQUIRE(back.conditions.size() == report.conditions.size());
  for (std::size_t i = 0; i < report.conditions.size(); ++i) {
    CHECK(back.conditions[i].group_size == report.conditions[i].group_size);
    CHECK(back.conditions[i].split == report.conditions[i].split);
    CHECK(back.conditions[i].trials == report.conditions[i].trials);
    CHECK(back.conditions[i].inclusion_errors ==
          report.conditions[i].inclusion_errors);
    CHECK(back.conditions[i].identification_errors ==
          report.conditions[i].identification_errors);
  }
}

TEST_CASE("report parsing rejects foreign and truncated input") {
  {
    std::istringstream is("mixprint-report v2\nseed 1\n");
    CHECK_THROWS_AS(parse_report(is), FormatError);
  }
  {
    std::istringstream is("mixprint-report v1\nsed 1\n");
    CHECK_THROWS_AS(parse_report(is), FormatError);
  }
  {
    std::istringstream is(
        "mixprint-report v1\nseed 1\ngroup_sizes 3\nsplits same-text\n"
        "trials_per_condition 2\nenrollment_count 2\nousider_probes 0\n");
    CHECK_THROWS_AS(parse_report(is), FormatError);
  }
}

TEST_CASE("a learning curve round trips through its text form") {
  std::vector<CurvePoint> curve(3);
  curve[0] = {2, 10, 9, 3};
  curve[1] = {4, 10, 10, 2};
  curve[2] = {8, 10, 10, 0};
  const std::string text = curve_string(curve);

  std::istringstream is(text);
  const std::vector<CurvePoint> back = parse_curve(is);
  REQUIRE(back.size() == 3);
  CHECK(curve_string(back) == text);
  CHECK(back[1].enrollment_count == 4);
  CHECK(back[1].identification_errors == 2);

  std::istringstream junk("not a curve\n");
  CHECK_THROWS_AS(parse_curve(junk), FormatError);
  std::istringstream truncated("mixprint-curve v1\npoints 2\npoint 2\n");
  CHECK_THROWS_AS(parse_curve(truncated), FormatError);
}
