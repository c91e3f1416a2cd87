// mixprint/mixprint_main.cpp
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
// Command line driver. Results go to --out (or stdout), diagnostics to
// stderr. Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixprint/corpus.hpp"
#include "mixprint/decision.hpp"
#include "mixprint/formats.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/signal.hpp"
#include "mixprint/synth.hpp"
#include "mixprint/types.hpp"
#include "mixprint/voiceprint.hpp"
#include "mixprint/wav.hpp"

namespace {

using namespace mixprint;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const std::string& item : split_list(s)) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError("bad integer in list: " + item);
    }
  }
  return out;
}

/// Runs fn against --out if given, stdout otherwise.
template <typename Fn>
void with_output(const std::string& out_path, Fn&& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    if (!std::cout) throw IoError("write failure on stdout");
    return;
  }
  std::ofstream os(out_path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + out_path);
  fn(os);
  if (!os) throw IoError("write failure on " + out_path);
}

struct ExtractArgs {
  std::vector<std::string> wavs;
  std::string speaker;
  std::string out;
};

void run_extract(const PipelineConfig& cfg, const ExtractArgs& args) {
  std::vector<MfccVector> vectors;
  for (const std::string& path : args.wavs) {
    const Waveform w = load_wav(path);
    const MfccExtractor extractor(cfg, w.sample_rate);
    SourceId source;
    source.speaker = args.speaker;
    source.sentence = std::filesystem::path(path).stem().string();
    vectors.push_back(extractor.sentence(w, source));
  }
  with_output(args.out,
              [&](std::ostream& os) { write_mfcc_vectors(os, vectors); });
}

struct EnrollArgs {
  std::string features_path;
  std::string out;
};

void run_enroll(const PipelineConfig& cfg, const EnrollArgs& args) {
  std::vector<MfccVector> vectors;
  if (args.features_path == "-") {
    vectors = read_mfcc_vectors(std::cin);
  } else {
    std::ifstream is(args.features_path);
    if (!is) throw IoError("cannot open " + args.features_path);
    vectors = read_mfcc_vectors(is);
  }
  // One voiceprint per speaker label found in the input.
  std::map<std::string, std::vector<MfccVector>> by_speaker;
  for (const MfccVector& v : vectors) {
    if (v.source.speaker.empty()) {
      throw ValidationError("feature line without a speaker label");
    }
    by_speaker[v.source.speaker].push_back(v);
  }
  if (by_speaker.empty()) throw ValidationError("no feature lines");
  std::vector<Voiceprint> prints;
  for (const auto& [id, sentences] : by_speaker) {
    prints.push_back(enroll(id, sentences, cfg.sigma_floor));
  }
  with_output(args.out,
              [&](std::ostream& os) { write_voiceprints(os, prints); });
}

struct MixArgs {
  std::vector<std::string> wavs;
  std::string gains;
  std::string out;
};

void run_mix(const MixArgs& args) {
  std::vector<Waveform> waves;
  for (const std::string& path : args.wavs) waves.push_back(load_wav(path));
  std::vector<double> gains;
  if (args.gains.empty()) {
    gains.assign(waves.size(), 1.0);
  } else {
    for (const std::string& g : split_list(args.gains)) {
      try {
        gains.push_back(std::stod(g));
      } catch (const std::exception&) {
        throw ValidationError("bad gain: " + g);
      }
    }
  }
  const MixResult mixed = mix(waves, gains);
  if (mixed.clipped) {
    std::cerr << "warning: mix clipped to [-1, 1]\n";
  }
  if (args.out.empty()) throw ValidationError("mix needs --out");
  save_wav(args.out, mixed.waveform);
}

struct SynthArgs {
  std::string out_dir;
  int speakers = 5;
  int sentences = 12;
  int shared = 2;
  double duration = 1.0;
  int rate = 16000;
  bool materialize = false;
};

void run_synth(const PipelineConfig& cfg, const SynthArgs& args) {
  Manifest m = generate_synthetic_corpus(cfg.seed, args.speakers,
                                         args.sentences, args.shared,
                                         args.duration, args.rate);
  const std::filesystem::path dir(args.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  if (args.materialize) {
    // Write every sentence as a WAV and point the manifest at the files,
    // exercising the same ingestion path as external recordings.
    for (ManifestEntry& e : m.entries) {
      const SynthSource src = std::get<SynthSource>(e.source);
      const Waveform w = synth_speaker(src.profile, src.sentence_seed,
                                       src.duration_seconds, src.sample_rate);
      const std::filesystem::path rel =
          std::filesystem::path(e.speaker_id) / (e.sentence_id + ".wav");
      std::filesystem::create_directories(dir / e.speaker_id, ec);
      if (ec) throw IoError("cannot create " + (dir / e.speaker_id).string());
      save_wav(dir / rel, w);
      e.source = rel;
    }
  }
  m.base_dir = dir;
  save_manifest(dir / "manifest.txt", m);
  std::cerr << "wrote " << (dir / "manifest.txt").string() << " ("
            << m.entries.size() << " entries)\n";
}

struct DecideArgs {
  std::string manifest_path;
  std::string group;
  std::string probe;
  int enroll_count = 0;  // 0 = every sentence bar the probe
  std::string out;
  bool constellation = false;
};

void run_decide(const PipelineConfig& cfg, const DecideArgs& args) {
  const Manifest m = load_manifest(args.manifest_path);
  CorpusStore store(m, cfg);

  const auto slash = args.probe.find('/');
  if (slash == std::string::npos) {
    throw ValidationError("--probe must be speaker/sentence");
  }
  const std::string probe_speaker = args.probe.substr(0, slash);
  const std::string probe_sentence = args.probe.substr(slash + 1);

  std::vector<std::string> members = split_list(args.group);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  std::map<std::string, std::vector<std::string>> enrollment;
  for (const std::string& id : members) {
    std::vector<std::string> sentences;
    for (const ManifestEntry* e : m.entries_for(id)) {
      if (id == probe_speaker && e->sentence_id == probe_sentence) continue;
      if (args.enroll_count > 0 &&
          static_cast<int>(sentences.size()) >= args.enroll_count) {
        break;
      }
      sentences.push_back(e->sentence_id);
    }
    if (sentences.empty()) {
      throw ValidationError("speaker " + id + " not in manifest");
    }
    enrollment[id] = std::move(sentences);
  }

  SpeakerGroup group = store.group(members, enrollment);
  const GroupModel model = GroupModel::build(group, cfg);
  const MfccVector probe = store.features(probe_speaker, probe_sentence);
  const IdentificationVerdict verdict = identify(probe, model);

  with_output(args.out, [&](std::ostream& os) {
    write_verdict(os, verdict, model.speaker_ids());
    if (args.constellation) {
      os << "\n";
      write_constellation(os, probe);
    }
  });
}

struct EvaluateArgs {
  std::string manifest_path;
  std::string sizes = "3,4,5";
  std::string splits = "same-text,distinct-text";
  int trials = 40;
  int enroll_count = 8;
  bool outsiders = false;
  bool serial = false;
  std::string out;
  std::string curve_out;
  std::string curve_counts = "2,3,4,5,6,7,8";
};

void run_evaluate(const PipelineConfig& cfg, const EvaluateArgs& args) {
  const Manifest m = load_manifest(args.manifest_path);
  CorpusStore store(m, cfg);

  TrialSpec spec;
  spec.group_sizes = parse_int_list(args.sizes);
  spec.splits.clear();
  for (const std::string& s : split_list(args.splits)) {
    spec.splits.push_back(split_from_name(s));
  }
  spec.trials_per_condition = args.trials;
  spec.rng_seed = cfg.seed;
  spec.include_outsider_probes = args.outsiders;
  spec.enrollment_count = args.enroll_count;

  const Exec exec = args.serial ? Exec::kSerial : Exec::kParallel;
  const ErrorReport report = run_trials(store, spec, exec);
  with_output(args.out, [&](std::ostream& os) { export_report(os, report); });

  if (!args.curve_out.empty()) {
    const std::vector<CurvePoint> curve =
        error_curve(store, spec, parse_int_list(args.curve_counts), exec);
    std::ofstream os(args.curve_out, std::ios::trunc);
    if (!os) throw IoError("cannot write " + args.curve_out);
    export_curve(os, curve);
    if (!os) throw IoError("write failure on " + args.curve_out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  PipelineConfig cfg;
  std::string window_name = "hamming";
  std::string log_base_name = "10";
  std::string ek_mode_name = "literal";
  bool dump = false;

  CLI::App app{
      "Multi-speaker voiceprint pipeline: cepstral features, Gaussian "
      "speaker models, group inclusion and identification."};
  app.require_subcommand(0, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  app.add_option("--frame-ms", cfg.frame_ms, "Analysis frame length (ms)")->capture_default_str();
  app.add_option("--hop-ms", cfg.hop_ms, "Frame hop (ms)")->capture_default_str();
  app.add_option("--filters", cfg.num_filters, "Mel filterbank size")->capture_default_str();
  app.add_option("--window", window_name, "Window: hamming | rectangular")->capture_default_str();
  app.add_option("--log-base", log_base_name,
                 "Filterbank log base: 10 | e")->capture_default_str();
  app.add_option("--sigma-floor", cfg.sigma_floor,
                 "Lower bound applied to enrollment sigmas")->capture_default_str();
  app.add_option("--band-c", cfg.band_c,
                 "Half-width multiplier c for mu +/- c*sigma bands")->capture_default_str();
  app.add_option("--tau", cfg.inclusion_tau,
                 "Inclusion tolerance added to the baseline distance")->capture_default_str();
  app.add_option("--ek-mode", ek_mode_name,
                 "Manhattan score form: literal | sigma-free")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Base seed for everything random")->capture_default_str();
  app.add_flag("--skip-c0", cfg.skip_c0,
               "Keep cepstral coefficients 1..13 instead of 0..12");
  app.add_flag("--dump-config", dump,
               "Print the effective configuration and exit");

  ExtractArgs extract_args;
  CLI::App* extract_cmd = app.add_subcommand(
      "extract", "WAV files to sentence-level MFCC lines");
  extract_cmd->add_option("wavs", extract_args.wavs, "Input WAV files")
      ->required();
  extract_cmd->add_option("--speaker", extract_args.speaker,
                          "Speaker label for the output lines");
  extract_cmd->add_option("--out", extract_args.out, "Output file");

  EnrollArgs enroll_args;
  CLI::App* enroll_cmd = app.add_subcommand(
      "enroll", "MFCC lines to per-speaker voiceprint records");
  enroll_cmd
      ->add_option("features", enroll_args.features_path,
                   "MFCC lines file, or - for stdin")
      ->required();
  enroll_cmd->add_option("--out", enroll_args.out, "Output file");

  MixArgs mix_args;
  CLI::App* mix_cmd =
      app.add_subcommand("mix", "Average WAV files into one track");
  mix_cmd->add_option("wavs", mix_args.wavs, "Input WAV files")->required();
  mix_cmd->add_option("--gains", mix_args.gains,
                      "Comma-separated per-input gains (default all 1)");
  mix_cmd->add_option("--out", mix_args.out, "Output WAV")->required();

  SynthArgs synth_args;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate the deterministic synthetic corpus");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Corpus directory")
      ->required();
  synth_cmd->add_option("--speakers", synth_args.speakers, "Speaker count")->capture_default_str();
  synth_cmd->add_option("--sentences", synth_args.sentences,
                        "Sentences per speaker")->capture_default_str();
  synth_cmd->add_option("--shared", synth_args.shared,
                        "Leading sentences whose text all speakers share")->capture_default_str();
  synth_cmd->add_option("--duration", synth_args.duration,
                        "Sentence length (s)")->capture_default_str();
  synth_cmd->add_option("--rate", synth_args.rate, "Sample rate (Hz)")->capture_default_str();
  synth_cmd->add_flag("--wav", synth_args.materialize,
                      "Write WAV files instead of synth manifest entries");

  DecideArgs decide_args;
  CLI::App* decide_cmd = app.add_subcommand(
      "decide", "Test one probe against a group and print the verdict");
  decide_cmd
      ->add_option("--manifest", decide_args.manifest_path, "Corpus manifest")
      ->required();
  decide_cmd
      ->add_option("--group", decide_args.group,
                   "Comma-separated member speaker ids")
      ->required();
  decide_cmd
      ->add_option("--probe", decide_args.probe,
                   "Probe as speaker/sentence; held out of enrollment")
      ->required();
  decide_cmd->add_option("--enroll-count", decide_args.enroll_count,
                         "Sentences enrolled per member (0 = all available)")->capture_default_str();
  decide_cmd->add_flag("--constellation", decide_args.constellation,
                       "Append the probe's per-dimension coordinates");
  decide_cmd->add_option("--out", decide_args.out, "Output file");

  EvaluateArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Run the seeded trial protocol and export error rates");
  eval_cmd->add_option("--manifest", eval_args.manifest_path,
                       "Corpus manifest")
      ->required();
  eval_cmd->add_option("--sizes", eval_args.sizes,
                       "Comma-separated group sizes")->capture_default_str();
  eval_cmd->add_option("--splits", eval_args.splits,
                       "Comma-separated text conditions")->capture_default_str();
  eval_cmd->add_option("--trials", eval_args.trials, "Trials per condition")->capture_default_str();
  eval_cmd->add_option("--enroll-count", eval_args.enroll_count,
                       "Enrollment sentences per member")->capture_default_str();
  eval_cmd->add_flag("--outsiders", eval_args.outsiders,
                     "Probe non-members on odd trials");
  eval_cmd->add_flag("--serial", eval_args.serial,
                     "Run trials on one thread");
  eval_cmd->add_option("--out", eval_args.out, "Report file");
  eval_cmd->add_option("--curve", eval_args.curve_out,
                       "Also write the enrollment-size error curve here");
  eval_cmd->add_option("--curve-counts", eval_args.curve_counts,
                       "Enrollment counts for the curve")->capture_default_str();

  try {
    app.parse(argc, argv);

    cfg.window = window_from_name(window_name);
    cfg.log_base = log_base_from_name(log_base_name);
    cfg.ek_mode = ek_mode_from_name(ek_mode_name);
    cfg.validate();

    if (dump) {
      dump_config(std::cout, cfg);
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 1;
    }
    if (app.got_subcommand(extract_cmd)) {
      run_extract(cfg, extract_args);
    } else if (app.got_subcommand(enroll_cmd)) {
      run_enroll(cfg, enroll_args);
    } else if (app.got_subcommand(mix_cmd)) {
      run_mix(mix_args);
    } else if (app.got_subcommand(synth_cmd)) {
      run_synth(cfg, synth_args);
    } else if (app.got_subcommand(decide_cmd)) {
      run_decide(cfg, decide_args);
    } else if (app.got_subcommand(eval_cmd)) {
      run_evaluate(cfg, eval_args);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
