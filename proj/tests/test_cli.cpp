// mixprint/tests/test_cli.cpp
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
// Integration tests that drive the installed binary as a subprocess. The
// binary path arrives via the MIXPRINT_BIN compile definition; results are
// cross-checked against the library the binary links.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mixprint/corpus.hpp"
#include "mixprint/formats.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/signal.hpp"
#include "mixprint/synth.hpp"
#include "mixprint/voiceprint.hpp"
#include "mixprint/wav.hpp"

using namespace mixprint;

namespace {

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("mixprint_cli_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

/// Runs the binary with the given argument string under /bin/sh and captures
/// both streams. Returns the exit status.
int run_cli(const std::string& args, const TempDir& tmp,
            std::string* out = nullptr, std::string* err = nullptr) {
  const std::filesystem::path out_path = tmp.path / "_stdout.txt";
  const std::filesystem::path err_path = tmp.path / "_stderr.txt";
  const std::string cmd = std::string("'") + MIXPRINT_BIN + "' " + args +
                          " >'" + out_path.string() + "' 2>'" +
                          err_path.string() + "'";
  const int status = std::system(cmd.c_str());
  if (out != nullptr) *out = slurp(out_path);
  if (err != nullptr) *err = slurp(err_path);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

SpeakerProfile cli_profile(const std::string& id, double f0) {
  SpeakerProfile p;
  p.speaker_id = id;
  p.fundamental_hz = f0;
  p.formants = {{480.0, 0.9}, {1400.0, 0.6}, {2600.0, 0.4}};
  p.jitter_seed = 77;
  return p;
}

/// The corpus most subcommand tests share. Default seed, so the synth
/// subcommand writes the exact same manifest.
void write_corpus(const TempDir& tmp, const std::string& name) {
  const int code = run_cli("synth --out-dir '" + (tmp.path / name).string() +
                               "' --speakers 4 --sentences 6 --shared 2 "
                               "--duration 0.6",
                           tmp);
  REQUIRE(code == 0);
}

}  // namespace

TEST_CASE("the default configuration dump is pinned") {
  TempDir tmp("dump");
  std::string out;
  const int code = run_cli("--dump-config", tmp, &out);
  CHECK(code == 0);
  CHECK(out ==
        "frame_ms 25\n"
        "hop_ms 10\n"
        "window hamming\n"
        "num_filters 26\n"
        "f_low_hz 0\n"
        "f_high_hz 0\n"
        "log_base 10\n"
        "energy_floor 1e-10\n"
        "skip_c0 0\n"
        "sigma_floor 1e-06\n"
        "band_c 1\n"
        "inclusion_tau 0\n"
        "ek_mode literal\n"
        "seed 42\n");
}

TEST_CASE("configuration flags land in the dump") {
  TempDir tmp("dump_flags");
  std::string out;
  const int code = run_cli(
      "--filters 30 --window rectangular --skip-c0 --tau 0.5 --log-base e "
      "--ek-mode sigma-free --seed 7 --dump-config",
      tmp, &out);
  CHECK(code == 0);
  CHECK(out.find("window rectangular\n") != std::string::npos);
  CHECK(out.find("num_filters 30\n") != std::string::npos);
  CHECK(out.find("log_base e\n") != std::string::npos);
  CHECK(out.find("skip_c0 1\n") != std::string::npos);
  CHECK(out.find("inclusion_tau 0.5\n") != std::string::npos);
  CHECK(out.find("ek_mode sigma-free\n") != std::string::npos);
  CHECK(out.find("seed 7\n") != std::string::npos);
}

TEST_CASE("bad configuration values and unknown flags fail fast") {
  TempDir tmp("badflags");
  std::string err;
  CHECK(run_cli("--no-such-flag", tmp, nullptr, &err) == 1);
  CHECK(run_cli("--window blackman --dump-config", tmp, nullptr, &err) == 1);
  CHECK(err.find("error") != std::string::npos);
  CHECK(run_cli("--filters 2 --dump-config", tmp, nullptr, &err) == 1);
}

TEST_CASE("running without a subcommand prints usage and fails") {
  TempDir tmp("usage");
  std::string out, err;
  const int code = run_cli("", tmp, &out, &err);
  CHECK(code == 1);
  CHECK(out.empty());
  CHECK(err.find("Usage") != std::string::npos);
}

TEST_CASE("help lists every subcommand and exits cleanly") {
  TempDir tmp("help");
  std::string out;
  const int code = run_cli("--help", tmp, &out);
  CHECK(code == 0);
  for (const char* name :
       {"extract", "enroll", "mix", "synth", "decide", "evaluate"}) {
    CHECK(out.find(name) != std::string::npos);
  }
}

TEST_CASE("synth writes a manifest the loader accepts") {
  TempDir tmp("synth");
  std::string err;
  const int code = run_cli("synth --out-dir '" +
                               (tmp.path / "corpus").string() +
                               "' --speakers 4 --sentences 4 --shared 1",
                           tmp, nullptr, &err);
  CHECK(code == 0);
  CHECK(err.find("manifest.txt") != std::string::npos);

  const Manifest m = load_manifest(tmp.path / "corpus" / "manifest.txt");
  CHECK(m.entries.size() == 16);
  CHECK(m.speaker_ids().size() == 4);
  for (const ManifestEntry& e : m.entries) CHECK(e.is_synth());
}

TEST_CASE("synth --wav materializes audio next to the manifest") {
  TempDir tmp("synthwav");
  const int code = run_cli("synth --out-dir '" +
                               (tmp.path / "corpus").string() +
                               "' --speakers 3 --sentences 3 --shared 1 "
                               "--duration 0.3 --wav",
                           tmp);
  CHECK(code == 0);
  CHECK(std::filesystem::exists(tmp.path / "corpus" / "spk01" / "s01.wav"));
  CHECK(std::filesystem::exists(tmp.path / "corpus" / "spk03" / "s03.wav"));

  // The loader checks that every referenced file exists.
  const Manifest m = load_manifest(tmp.path / "corpus" / "manifest.txt");
  CHECK(m.entries.size() == 9);
  for (const ManifestEntry& e : m.entries) CHECK_FALSE(e.is_synth());
  const Waveform w = load_wav(tmp.path / "corpus" / "spk01" / "s01.wav");
  CHECK(w.sample_rate == 16000);
  CHECK(w.samples.size() == static_cast<std::size_t>(16000 * 0.3));
}

TEST_CASE("extract matches the library bit for bit") {
  TempDir tmp("extract");
  const SpeakerProfile p = cli_profile("solo", 150.0);
  const Waveform w0 = synth_speaker(p, 1, 0.5, 16000);
  const Waveform w1 = synth_speaker(p, 2, 0.5, 16000);
  save_wav(tmp.path / "a.wav", w0);
  save_wav(tmp.path / "b.wav", w1);

  const std::filesystem::path out = tmp.path / "features.txt";
  const int code = run_cli("extract '" + (tmp.path / "a.wav").string() +
                               "' '" + (tmp.path / "b.wav").string() +
                               "' --speaker solo --out '" + out.string() + "'",
                           tmp);
  CHECK(code == 0);

  std::ifstream is(out);
  const std::vector<MfccVector> got = read_mfcc_vectors(is);
  REQUIRE(got.size() == 2);
  CHECK(got[0].source.speaker == "solo");
  CHECK(got[0].source.sentence == "a");
  CHECK(got[1].source.sentence == "b");

  // The binary reads the quantized wav, so compare against the same path.
  const PipelineConfig cfg;
  const MfccExtractor extractor(cfg, 16000);
  const MfccVector want0 =
      extractor.sentence(load_wav(tmp.path / "a.wav"), {"solo", "a"});
  for (int i = 0; i < kNumCoeffs; ++i) CHECK(got[0].c[i] == want0.c[i]);
}

TEST_CASE("enroll builds one voiceprint per speaker label") {
  TempDir tmp("enroll");
  const SpeakerProfile p = cli_profile("solo", 170.0);
  std::vector<std::string> wav_args;
  for (int j = 0; j < 3; ++j) {
    const std::filesystem::path path =
        tmp.path / ("s" + std::to_string(j) + ".wav");
    save_wav(path, synth_speaker(p, 10 + j, 0.5, 16000));
    wav_args.push_back("'" + path.string() + "'");
  }
  const std::filesystem::path features = tmp.path / "features.txt";
  REQUIRE(run_cli("extract " + wav_args[0] + " " + wav_args[1] + " " +
                      wav_args[2] + " --speaker solo --out '" +
                      features.string() + "'",
                  tmp) == 0);

  const std::filesystem::path prints = tmp.path / "prints.txt";
  CHECK(run_cli("enroll '" + features.string() + "' --out '" +
                    prints.string() + "'",
                tmp) == 0);

  std::ifstream is(prints);
  const std::vector<Voiceprint> got = read_voiceprints(is);
  REQUIRE(got.size() == 1);
  CHECK(got[0].speaker_id == "solo");
  CHECK(got[0].enrollment_count == 3);

  std::ifstream fis(features);
  const Voiceprint want =
      enroll("solo", read_mfcc_vectors(fis), PipelineConfig{}.sigma_floor);
  for (int i = 0; i < kNumCoeffs; ++i) {
    CHECK(got[0].mu[i] == want.mu[i]);
    CHECK(got[0].sigma[i] == want.sigma[i]);
  }

  // Reading from stdin is the same pipeline.
  std::string out;
  CHECK(run_cli("enroll - < '" + features.string() + "'", tmp, &out) == 0);
  CHECK(lines_of(out).size() == 1);
}

TEST_CASE("mix averages wav files like the library") {
  TempDir tmp("mix");
  const Waveform a = synth_speaker(cli_profile("a", 120.0), 1, 0.4, 16000);
  const Waveform b = synth_speaker(cli_profile("b", 210.0), 2, 0.4, 16000);
  save_wav(tmp.path / "a.wav", a);
  save_wav(tmp.path / "b.wav", b);

  const std::filesystem::path out = tmp.path / "mixed.wav";
  CHECK(run_cli("mix '" + (tmp.path / "a.wav").string() + "' '" +
                    (tmp.path / "b.wav").string() + "' --out '" +
                    out.string() + "'",
                tmp) == 0);

  // Same input path (load the quantized files), same mix, same quantization.
  const MixResult want =
      mix({load_wav(tmp.path / "a.wav"), load_wav(tmp.path / "b.wav")},
          {1.0, 1.0});
  save_wav(tmp.path / "want.wav", want.waveform);
  const Waveform got_w = load_wav(out);
  const Waveform want_w = load_wav(tmp.path / "want.wav");
  REQUIRE(got_w.samples.size() == want_w.samples.size());
  for (std::size_t i = 0; i < got_w.samples.size(); ++i) {
    CHECK(got_w.samples[i] == want_w.samples[i]);
  }

  // --out is mandatory: a wav stream has no place on a terminal.
  CHECK(run_cli("mix '" + (tmp.path / "a.wav").string() + "'", tmp) == 1);
}

TEST_CASE("decide admits a member and turns away an outsider") {
  TempDir tmp("decide");
  write_corpus(tmp, "corpus");
  const std::string manifest =
      "'" + (tmp.path / "corpus" / "manifest.txt").string() + "'";

  std::string out;
  CHECK(run_cli("decide --manifest " + manifest +
                    " --group spk01,spk02,spk03 --probe spk02/s04",
                tmp, &out) == 0);
  std::vector<std::string> lines = lines_of(out);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "included 1");
  CHECK(lines[1] == "decision spk02");
  CHECK(lines[4].rfind("speaker spk01 ", 0) == 0);
  CHECK(lines[5].rfind("speaker spk02 ", 0) == 0);
  CHECK(lines[6].rfind("speaker spk03 ", 0) == 0);

  CHECK(run_cli("decide --manifest " + manifest +
                    " --group spk01,spk02,spk03 --probe spk04/s01",
                tmp, &out) == 0);
  lines = lines_of(out);
  CHECK(lines[0] == "included 0");
  CHECK(lines[1] == "decision none");

  // The constellation dump appends one labeled coordinate per dimension.
  CHECK(run_cli("decide --manifest " + manifest +
                    " --group spk01,spk02,spk03 --probe spk02/s04 "
                    "--constellation",
                tmp, &out) == 0);
  lines = lines_of(out);
  REQUIRE(lines.size() == 7 + 1 + 1 + kNumCoeffs);
  CHECK(lines[8] == "# spk02 s04");
  CHECK(lines[9].rfind("1 ", 0) == 0);
}

TEST_CASE("decide rejects malformed requests with the right exit codes") {
  TempDir tmp("decide_bad");
  write_corpus(tmp, "corpus");
  const std::string manifest =
      "'" + (tmp.path / "corpus" / "manifest.txt").string() + "'";

  // Probe not of the form speaker/sentence.
  CHECK(run_cli("decide --manifest " + manifest +
                    " --group spk01,spk02,spk03 --probe spk02",
                tmp) == 1);
  // Unknown group member.
  CHECK(run_cli("decide --manifest " + manifest +
                    " --group spk01,spk02,spk09 --probe spk01/s01",
                tmp) == 1);
  // Manifest file absent entirely.
  CHECK(run_cli("decide --manifest '" + (tmp.path / "absent.txt").string() +
                    "' --group spk01,spk02,spk03 --probe spk01/s01",
                tmp) == 2);
}

TEST_CASE("evaluate reproduces its reports byte for byte") {
  TempDir tmp("evaluate");
  write_corpus(tmp, "corpus");
  const std::string manifest =
      "'" + (tmp.path / "corpus" / "manifest.txt").string() + "'";

  const std::string args = "evaluate --manifest " + manifest +
                           " --sizes 3 --trials 4 --enroll-count 3 "
                           "--outsiders --serial --curve-counts 2,3 ";
  CHECK(run_cli(args + "--out '" + (tmp.path / "r1.txt").string() +
                    "' --curve '" + (tmp.path / "c1.txt").string() + "'",
                tmp) == 0);
  CHECK(run_cli(args + "--out '" + (tmp.path / "r2.txt").string() +
                    "' --curve '" + (tmp.path / "c2.txt").string() + "'",
                tmp) == 0);

  const std::string r1 = slurp(tmp.path / "r1.txt");
  CHECK(r1 == slurp(tmp.path / "r2.txt"));
  CHECK(slurp(tmp.path / "c1.txt") == slurp(tmp.path / "c2.txt"));

  std::istringstream is(r1);
  const ErrorReport report = parse_report(is);
  REQUIRE(report.conditions.size() == 2);  // one size, two text conditions
  for (const ConditionStats& c : report.conditions) {
    CHECK(c.trials == 4);
    CHECK(c.member_probes + c.outsider_probes == 4);
  }

  std::istringstream cs(slurp(tmp.path / "c1.txt"));
  const std::vector<CurvePoint> curve = parse_curve(cs);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].enrollment_count == 2);
  CHECK(curve[1].enrollment_count == 3);
}

TEST_CASE("evaluate refuses specs the corpus cannot host") {
  TempDir tmp("evaluate_bad");
  write_corpus(tmp, "corpus");
  const std::string manifest =
      "'" + (tmp.path / "corpus" / "manifest.txt").string() + "'";
  CHECK(run_cli("evaluate --manifest " + manifest + " --sizes 6 --trials 2",
                tmp) == 1);
  CHECK(run_cli("evaluate --manifest '" +
                    (tmp.path / "nothing.txt").string() + "' --trials 2",
                tmp) == 2);
}

TEST_CASE("io failures exit with status 2") {
  TempDir tmp("io");
  CHECK(run_cli("extract '" + (tmp.path / "ghost.wav").string() + "'", tmp) ==
        2);
  CHECK(run_cli("enroll '" + (tmp.path / "ghost.txt").string() + "'", tmp) ==
        2);
}
