// mixprint/tests/test_parallel.cpp
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
// The contract under test: the parallel policy is an execution detail, never
// an observable one. Every kernel must produce the same bytes serial and
// parallel, including when OpenMP is oversubscribed relative to the host.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <atomic>
#include <sstream>
#include <vector>

#include "mixprint/corpus.hpp"
#include "mixprint/decision.hpp"
#include "mixprint/mfcc.hpp"
#include "mixprint/parallel.hpp"
#include "mixprint/synth.hpp"

using namespace mixprint;

namespace {

/// More threads than this container has cores, so scheduling really
/// interleaves instead of degenerating to serial order.
struct Oversubscribe {
  int saved;
  Oversubscribe() : saved(omp_get_max_threads()) { omp_set_num_threads(4); }
  ~Oversubscribe() { omp_set_num_threads(saved); }
};

SpeakerProfile profile_for(int index) {
  SpeakerProfile p;
  p.speaker_id = "par" + std::to_string(index);
  p.fundamental_hz = 110.0 + 37.0 * index;
  p.formants = {{400.0 + 60.0 * index, 0.9},
                {1300.0 + 150.0 * index, 0.6},
                {2500.0 + 120.0 * index, 0.4}};
  p.jitter_seed = 400 + static_cast<std::uint64_t>(index);
  return p;
}

SpeakerGroup build_group(int n, int sentences, const PipelineConfig& cfg,
                         Exec exec) {
  SpeakerGroup g;
  for (int i = 0; i < n; ++i) {
    GroupSpeaker s;
    s.speaker_id = "par" + std::to_string(i);
    for (int j = 0; j < sentences; ++j) {
      EnrollmentSentence e;
      e.sentence_id = "s" + std::to_string(j);
      e.audio = std::make_shared<const Waveform>(
          synth_speaker(profile_for(i), 70 + j, 0.6, 16000));
      s.sentences.push_back(std::move(e));
    }
    g.speakers.push_back(std::move(s));
  }
  attach_features(g, cfg, exec);
  return g;
}

}  // namespace

TEST_CASE("for_each_index visits every index exactly once") {
  Oversubscribe threads;
  for (Exec exec : {Exec::kSerial, Exec::kParallel}) {
    const int n = 1000;
    std::vector<std::atomic<int>> visits(n);
    for (auto& v : visits) v.store(0);
    for_each_index(exec, n, [&](int i) { visits[i].fetch_add(1); });
    for (int i = 0; i < n; ++i) CHECK(visits[i].load() == 1);
  }
}

TEST_CASE("for_each_index with zero elements calls nothing") {
  std::atomic<int> calls{0};
  for_each_index(Exec::kParallel, 0, [&](int) { calls.fetch_add(1); });
  CHECK(calls.load() == 0);
}

TEST_CASE("frame extraction is bit-identical serial and parallel") {
  Oversubscribe threads;
  const PipelineConfig cfg;
  const MfccExtractor extractor(cfg, 16000);
  const Waveform w = synth_speaker(profile_for(0), 3, 2.0, 16000);

  const std::vector<Coeffs> serial =
      extractor.frames(w, Exec::kSerial);
  const std::vector<Coeffs> parallel =
      extractor.frames(w, Exec::kParallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    for (int k = 0; k < kNumCoeffs; ++k) {
      CHECK(serial[i][k] == parallel[i][k]);
    }
  }

  const MfccVector a = extractor.sentence(w, {"par0", "s0"}, Exec::kSerial);
  const MfccVector b = extractor.sentence(w, {"par0", "s0"}, Exec::kParallel);
  for (int k = 0; k < kNumCoeffs; ++k) CHECK(a.c[k] == b.c[k]);
}

TEST_CASE("group model construction is bit-identical serial and parallel") {
  Oversubscribe threads;
  const PipelineConfig cfg;
  const SpeakerGroup g_serial = build_group(4, 3, cfg, Exec::kSerial);
  const SpeakerGroup g_parallel = build_group(4, 3, cfg, Exec::kParallel);

  for (std::size_t s = 0; s < g_serial.speakers.size(); ++s) {
    for (std::size_t j = 0; j < g_serial.speakers[s].sentences.size(); ++j) {
      for (int k = 0; k < kNumCoeffs; ++k) {
        CHECK(g_serial.speakers[s].sentences[j].features.c[k] ==
              g_parallel.speakers[s].sentences[j].features.c[k]);
      }
    }
  }

  const GroupModel serial = GroupModel::build(g_serial, cfg, Exec::kSerial);
  const GroupModel parallel =
      GroupModel::build(g_parallel, cfg, Exec::kParallel);
  REQUIRE(serial.subsets() == parallel.subsets());
  for (const auto& subset : serial.subsets()) {
    const Voiceprint& a = serial.subset_voiceprint(subset);
    const Voiceprint& b = parallel.subset_voiceprint(subset);
    for (int k = 0; k < kNumCoeffs; ++k) {
      CHECK(a.mu[k] == b.mu[k]);
      CHECK(a.sigma[k] == b.sigma[k]);
    }
  }
  for (int k = 0; k < kNumCoeffs; ++k) {
    CHECK(serial.full_mixture().mu[k] == parallel.full_mixture().mu[k]);
    CHECK(serial.full_mixture().sigma[k] == parallel.full_mixture().sigma[k]);
  }
}

TEST_CASE("identification verdicts do not depend on the policy") {
  Oversubscribe threads;
  const PipelineConfig cfg;
  const GroupModel serial =
      GroupModel::build(build_group(3, 3, cfg, Exec::kSerial), cfg,
                        Exec::kSerial);
  const GroupModel parallel =
      GroupModel::build(build_group(3, 3, cfg, Exec::kParallel), cfg,
                        Exec::kParallel);

  MfccVector probe;
  probe.c = serial.speaker_voiceprint("par1").mu;
  for (double& c : probe.c) c += 0.1;

  const IdentificationVerdict a = identify(probe, serial);
  const IdentificationVerdict b = identify(probe, parallel);
  CHECK(a.decision == b.decision);
  CHECK(a.inclusion.included == b.inclusion.included);
  CHECK(a.inclusion.probe_mean == b.inclusion.probe_mean);
  CHECK(a.manhattan_scores == b.manhattan_scores);
  CHECK(a.manhattan_ranks == b.manhattan_ranks);
  CHECK(a.exclusion_ranks == b.exclusion_ranks);
  CHECK(a.reverse_ranks == b.reverse_ranks);
  CHECK(a.combined_ranks == b.combined_ranks);
}

TEST_CASE("a full evaluation run is byte-identical serial and parallel") {
  Oversubscribe threads;
  const Manifest corpus = generate_synthetic_corpus(19, 4, 4, 2, 0.5);
  TrialSpec spec;
  spec.group_sizes = {3};
  spec.trials_per_condition = 4;
  spec.rng_seed = 5;
  spec.include_outsider_probes = true;
  spec.enrollment_count = 3;

  CorpusStore store_s(corpus, PipelineConfig{});
  CorpusStore store_p(corpus, PipelineConfig{});
  std::ostringstream serial, parallel;
  export_report(serial, run_trials(store_s, spec, Exec::kSerial));
  export_report(parallel, run_trials(store_p, spec, Exec::kParallel));
  CHECK(serial.str() == parallel.str());

  std::ostringstream curve_s, curve_p;
  export_curve(curve_s, error_curve(store_s, spec, {2, 3}, Exec::kSerial));
  export_curve(curve_p, error_curve(store_p, spec, {2, 3}, Exec::kParallel));
  CHECK(curve_s.str() == curve_p.str());
}
