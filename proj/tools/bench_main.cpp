// mixprint/bench_main.cpp
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
// Times the three parallel kernels against their serial twins and checks
// that both produce bit-identical results. Wall clock is the only thing
// allowed to differ between the two policies.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#include <omp.h>

#include "mixprint/corpus.hpp"
#include "mixprint/decision.hpp"
#include "mixprint/formats.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/synth.hpp"

namespace {

using namespace mixprint;

template <typename Fn>
double time_of(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial_s, double parallel_s,
            bool identical) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   "
              "identical %s\n",
              name, serial_s, parallel_s,
              parallel_s > 0 ? serial_s / parallel_s : 0.0,
              identical ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  const PipelineConfig cfg;

  {
    // Frame loop: one long utterance, many frames.
    SpeakerProfile p;
    p.speaker_id = "bench";
    p.fundamental_hz = 130.0;
    p.formants = {{500.0, 1.0}, {1500.0, 0.7}, {2500.0, 0.4}};
    p.jitter_seed = 7;
    const Waveform w = synth_speaker(p, 1, 30.0, 16000);
    const MfccExtractor extractor(cfg, w.sample_rate);
    std::vector<MfccFrame> serial, parallel;
    const double ts =
        time_of([&] { serial = extractor.frames(w, Exec::kSerial); });
    const double tp =
        time_of([&] { parallel = extractor.frames(w, Exec::kParallel); });
    report("mfcc frame loop", ts, tp, serial == parallel);
  }

  Manifest manifest = generate_synthetic_corpus(42, 5, 12, 2, 1.0, 16000);
  CorpusStore store(manifest, cfg);

  {
    // Subset-model loop: every mixture voiceprint of a 5-speaker group.
    const std::vector<std::string> ids = manifest.speaker_ids();
    std::map<std::string, std::vector<std::string>> sentences;
    for (const std::string& id : ids) {
      for (const ManifestEntry* e : manifest.entries_for(id)) {
        sentences[id].push_back(e->sentence_id);
      }
    }
    SpeakerGroup group = store.group(ids, sentences);
    std::string serial_out, parallel_out;
    const double ts = time_of([&] {
      const GroupModel m = GroupModel::build(group, cfg, Exec::kSerial);
      std::ostringstream os;
      for (const auto& subset : m.subsets()) {
        const Voiceprint& v = m.subset_voiceprint(subset);
        for (double x : v.mu) os << format_double(x) << ' ';
      }
      serial_out = os.str();
    });
    const double tp = time_of([&] {
      const GroupModel m = GroupModel::build(group, cfg, Exec::kParallel);
      std::ostringstream os;
      for (const auto& subset : m.subsets()) {
        const Voiceprint& v = m.subset_voiceprint(subset);
        for (double x : v.mu) os << format_double(x) << ' ';
      }
      parallel_out = os.str();
    });
    report("group model build", ts, tp, serial_out == parallel_out);
  }

  {
    // Trial loop: the evaluation protocol end to end.
    TrialSpec spec;
    spec.group_sizes = {3, 4};
    spec.trials_per_condition = 24;
    spec.include_outsider_probes = true;
    std::string serial_out, parallel_out;
    const double ts = time_of([&] {
      CorpusStore fresh(manifest, cfg);
      std::ostringstream os;
      export_report(os, run_trials(fresh, spec, Exec::kSerial));
      serial_out = os.str();
    });
    const double tp = time_of([&] {
      CorpusStore fresh(manifest, cfg);
      std::ostringstream os;
      export_report(os, run_trials(fresh, spec, Exec::kParallel));
      parallel_out = os.str();
    });
    report("trial loop", ts, tp, serial_out == parallel_out);
  }
  return 0;
}
