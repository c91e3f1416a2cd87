// mixprint/decision.cpp
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

#include "mixprint/decision.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "mixprint/signal.hpp"

namespace mixprint {

namespace {

void check_id(const std::string& id) {
  if (id.empty()) {
    throw ValidationError("speaker_id must not be empty");
  }
  if (id.find_first_of("+,| \t\r\n") != std::string::npos) {
    throw ValidationError("speaker_id contains a reserved character: " + id);
  }
}

const GroupSpeaker& find_speaker(const SpeakerGroup& group,
                                 const std::string& id) {
  for (const GroupSpeaker& s : group.speakers) {
    if (s.speaker_id == id) return s;
  }
  throw ValidationError("speaker not in group: " + id);
}

/// Ranks 1..n by the given strict-weak order over indices. The order must be
/// total (callers add a lexicographic tie-break), so ranks are a permutation.
template <typename Less>
std::vector<int> rank_by(int n, Less less) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), less);
  std::vector<int> rank(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])] = p + 1;
  }
  return rank;
}

}  // namespace

void attach_features(SpeakerGroup& group, const PipelineConfig& cfg,
                     Exec exec) {
  if (group.speakers.empty()) {
    throw ValidationError("group has no speakers");
  }
  int rate = 0;
  std::vector<EnrollmentSentence*> all;
  for (GroupSpeaker& s : group.speakers) {
    for (EnrollmentSentence& e : s.sentences) {
      if (!e.audio) {
        throw ValidationError("sentence without audio: " + s.speaker_id +
                              "/" + e.sentence_id);
      }
      if (rate == 0) rate = e.audio->sample_rate;
      if (e.audio->sample_rate != rate) {
        throw ValidationError("enrollment audio mixes sample rates");
      }
      all.push_back(&e);
    }
  }
  const MfccExtractor extractor(cfg, rate);
  for_each_index(exec, static_cast<int>(all.size()), [&](int i) {
    EnrollmentSentence& e = *all[static_cast<std::size_t>(i)];
    e.features = extractor.sentence(*e.audio, e.features.source,
                                    Exec::kSerial);
  });
  for (GroupSpeaker& s : group.speakers) {
    for (EnrollmentSentence& e : s.sentences) {
      e.features.source = {s.speaker_id, e.sentence_id};
    }
  }
}

std::vector<std::vector<std::string>> enumerate_subsets(
    const std::vector<std::string>& speaker_ids) {
  const int n = static_cast<int>(speaker_ids.size());
  if (n < 3) {
    throw ValidationError("subset enumeration needs at least 3 speakers");
  }
  std::vector<std::string> ids = speaker_ids;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("speaker ids must be unique");
  }

  std::vector<std::vector<std::string>> out;
  for (int size = 2; size <= n - 1; ++size) {
    // Index combinations in lexicographic order over the sorted ids.
    std::vector<int> c(static_cast<std::size_t>(size));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
      std::vector<std::string> subset;
      subset.reserve(static_cast<std::size_t>(size));
      for (int i : c) subset.push_back(ids[static_cast<std::size_t>(i)]);
      out.push_back(std::move(subset));

      int i = size - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return out;
}

std::string subset_key(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  std::string key;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) key += '+';
    key += ids[i];
  }
  return key;
}

std::optional<Coeffs> MixtureFeatureCache::lookup(
    const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void MixtureFeatureCache::store(const std::string& key, const Coeffs& value) {
  std::lock_guard<std::mutex> lock(mu_);
  map_.emplace(key, value);
}

std::size_t MixtureFeatureCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

Voiceprint mixture_voiceprint(const std::vector<std::string>& subset,
                              const SpeakerGroup& group,
                              const PipelineConfig& cfg,
                              MixtureFeatureCache* cache, Exec exec) {
  if (subset.empty()) {
    throw ValidationError("mixture subset must not be empty");
  }
  std::vector<const GroupSpeaker*> members;
  members.reserve(subset.size());
  std::size_t num_sentences = std::string::npos;
  for (const std::string& id : subset) {
    const GroupSpeaker& s = find_speaker(group, id);
    if (s.sentences.empty()) {
      throw ValidationError("speaker has no enrollment sentences: " + id);
    }
    members.push_back(&s);
    num_sentences = std::min(num_sentences, s.sentences.size());
  }
  std::sort(members.begin(), members.end(),
            [](const GroupSpeaker* a, const GroupSpeaker* b) {
              return a->speaker_id < b->speaker_id;
            });
  if (num_sentences < 2) {
    throw ValidationError("mixture enrollment needs at least two sentences");
  }

  const std::string key = subset_key(subset);
  std::vector<MfccVector> mixed(num_sentences);

  // One extractor serves every sentence; all mixed signals share the rate of
  // the first member.
  const int rate = members.front()->sentences.front().audio->sample_rate;
  const MfccExtractor extractor(cfg, rate);

  for_each_index(exec, static_cast<int>(num_sentences), [&](int j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    // Cache key lists the exact (speaker, sentence) pairs mixed.
    std::ostringstream os;
    for (const GroupSpeaker* m : members) {
      os << '|' << m->speaker_id << '=' << m->sentences[sj].sentence_id;
    }
    const std::string sentence_key = os.str();
    if (cache != nullptr) {
      if (const auto hit = cache->lookup(sentence_key)) {
        mixed[sj].c = *hit;
        mixed[sj].source = {key, members.front()->sentences[sj].sentence_id};
        return;
      }
    }
    std::vector<Waveform> waves;
    waves.reserve(members.size());
    for (const GroupSpeaker* m : members) {
      waves.push_back(*m->sentences[sj].audio);
    }
    const MixResult mr = mix(waves, std::vector<double>(waves.size(), 1.0));
    const MfccVector v = extractor.sentence(
        mr.waveform, {key, members.front()->sentences[sj].sentence_id},
        Exec::kSerial);
    mixed[sj] = v;
    if (cache != nullptr) cache->store(sentence_key, v.c);
  });

  return enroll(key, mixed, cfg.sigma_floor);
}

GroupModel GroupModel::build(const SpeakerGroup& group,
                             const PipelineConfig& cfg, Exec exec,
                             MixtureFeatureCache* cache) {
  cfg.validate();
  if (group.speakers.size() < 3) {
    throw ValidationError("group modeling needs at least 3 speakers");
  }
  GroupModel model;
  model.cfg_ = cfg;
  for (const GroupSpeaker& s : group.speakers) {
    check_id(s.speaker_id);
    if (s.sentences.size() < 2) {
      throw ValidationError("speaker needs at least two enrollment "
                            "sentences: " +
                            s.speaker_id);
    }
    for (const EnrollmentSentence& e : s.sentences) {
      if (!e.audio) {
        throw ValidationError("sentence without audio: " + s.speaker_id +
                              "/" + e.sentence_id);
      }
    }
    model.speaker_ids_.push_back(s.speaker_id);
  }
  std::sort(model.speaker_ids_.begin(), model.speaker_ids_.end());
  if (std::adjacent_find(model.speaker_ids_.begin(),
                         model.speaker_ids_.end()) !=
      model.speaker_ids_.end()) {
    throw ValidationError("speaker ids must be unique");
  }

  // Solo voiceprints come straight from the attached features; a mixture of
  // one waveform is the identity, so these double as the singleton models.
  for (const std::string& id : model.speaker_ids_) {
    const GroupSpeaker& s = find_speaker(group, id);
    std::vector<MfccVector> features;
    features.reserve(s.sentences.size());
    for (const EnrollmentSentence& e : s.sentences) {
      features.push_back(e.features);
    }
    model.by_key_.emplace(id, enroll(id, features, cfg.sigma_floor));
  }

  model.subsets_ = enumerate_subsets(model.speaker_ids_);

  // The subset loop is the parallel kernel; each model lands in its own
  // slot and the inner pipeline runs serially to keep the work units big.
  std::vector<Voiceprint> built(model.subsets_.size() + 1);
  std::vector<const std::vector<std::string>*> jobs;
  jobs.reserve(built.size());
  for (const auto& s : model.subsets_) jobs.push_back(&s);
  jobs.push_back(&model.speaker_ids_);  // full mixture, built last
  for_each_index(exec, static_cast<int>(jobs.size()), [&](int i) {
    built[static_cast<std::size_t>(i)] = mixture_voiceprint(
        *jobs[static_cast<std::size_t>(i)], group, cfg, cache,
        Exec::kSerial);
  });
  for (std::size_t i = 0; i < model.subsets_.size(); ++i) {
    built[i].speaker_id = subset_key(model.subsets_[i]);
    model.by_key_.emplace(built[i].speaker_id, built[i]);
  }
  model.full_mixture_ = built.back();
  model.by_key_.emplace(subset_key(model.speaker_ids_),
                        model.full_mixture_);
  return model;
}

const Voiceprint& GroupModel::speaker_voiceprint(
    const std::string& id) const {
  const auto it = by_key_.find(id);
  if (it == by_key_.end()) {
    throw ValidationError("no voiceprint for speaker: " + id);
  }
  return it->second;
}

const Voiceprint& GroupModel::subset_voiceprint(
    const std::vector<std::string>& subset) const {
  const auto it = by_key_.find(subset_key(subset));
  if (it == by_key_.end()) {
    throw ValidationError("no model for subset: " + subset_key(subset));
  }
  return it->second;
}

InclusionVerdict inclusion_test(const MfccVector& v, const GroupModel& model,
                                double tau) {
  if (!(tau >= 0.0)) {
    throw ValidationError("inclusion tolerance must be non-negative");
  }
  InclusionVerdict out;
  out.probe_mean =
      mean_distance(euclidean_distance_vector(v.c, model.full_mixture().mu));
  double worst = 0.0;
  for (const std::string& id : model.speaker_ids()) {
    const double base = mean_distance(euclidean_distance_vector(
        model.speaker_voiceprint(id).mu, model.full_mixture().mu));
    out.baseline_means.push_back(base);
    worst = std::max(worst, base);
  }
  out.margin = out.probe_mean - worst;
  out.included = out.margin <= tau;
  return out;
}

std::vector<double> exclusion_scores(const MfccVector& v,
                                     const GroupModel& model) {
  const auto& ids = model.speaker_ids();
  std::vector<double> scores;
  scores.reserve(ids.size());
  for (const std::string& w : ids) {
    double sum = 0.0;
    int pairs = 0;
    for (const auto& subset : model.subsets()) {
      if (std::find(subset.begin(), subset.end(), w) == subset.end()) {
        continue;
      }
      std::vector<std::string> remainder;
      remainder.reserve(subset.size() - 1);
      for (const std::string& id : subset) {
        if (id != w) remainder.push_back(id);
      }
      const double with_w = mean_distance(euclidean_distance_vector(
          v.c, model.subset_voiceprint(subset).mu));
      const double without_w = mean_distance(euclidean_distance_vector(
          v.c, model.subset_voiceprint(remainder).mu));
      sum += with_w - without_w;
      ++pairs;
    }
    scores.push_back(sum / pairs);
  }
  return scores;
}

std::vector<int> exclusion_ranking(const MfccVector& v,
                                   const GroupModel& model) {
  const auto& ids = model.speaker_ids();
  const std::vector<double> scores = exclusion_scores(v, model);
  return rank_by(static_cast<int>(ids.size()), [&](int a, int b) {
    const std::size_t ia = static_cast<std::size_t>(a);
    const std::size_t ib = static_cast<std::size_t>(b);
    if (scores[ia] != scores[ib]) return scores[ia] > scores[ib];
    return ids[ia] < ids[ib];
  });
}

IdentificationVerdict identify(const MfccVector& v, const GroupModel& model) {
  const auto& ids = model.speaker_ids();
  const int n = static_cast<int>(ids.size());

  IdentificationVerdict out;
  out.inclusion = inclusion_test(v, model, model.config().inclusion_tau);

  for (const std::string& id : ids) {
    out.manhattan_scores.push_back(manhattan_distance_ek(
        v, model.speaker_voiceprint(id), model.config().ek_mode));
  }
  out.manhattan_ranks = rank_by(n, [&](int a, int b) {
    const std::size_t ia = static_cast<std::size_t>(a);
    const std::size_t ib = static_cast<std::size_t>(b);
    if (out.manhattan_scores[ia] != out.manhattan_scores[ib]) {
      return out.manhattan_scores[ia] < out.manhattan_scores[ib];
    }
    return ids[ia] < ids[ib];
  });

  // A member's probe should sit far from the one mixture that lacks that
  // member; rank 1 = farthest = most likely owner.
  std::vector<double> reverse_distance;
  reverse_distance.reserve(ids.size());
  for (const std::string& w : ids) {
    std::vector<std::string> rest;
    rest.reserve(ids.size() - 1);
    for (const std::string& id : ids) {
      if (id != w) rest.push_back(id);
    }
    reverse_distance.push_back(mean_distance(euclidean_distance_vector(
        v.c, model.subset_voiceprint(rest).mu)));
  }
  out.reverse_ranks = rank_by(n, [&](int a, int b) {
    const std::size_t ia = static_cast<std::size_t>(a);
    const std::size_t ib = static_cast<std::size_t>(b);
    if (reverse_distance[ia] != reverse_distance[ib]) {
      return reverse_distance[ia] > reverse_distance[ib];
    }
    return ids[ia] < ids[ib];
  });

  out.exclusion_ranks = exclusion_ranking(v, model);

  out.combined_ranks.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    out.combined_ranks[si] = out.manhattan_ranks[si] + out.reverse_ranks[si];
  }

  if (out.inclusion.included) {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      const std::size_t si = static_cast<std::size_t>(i);
      const std::size_t sb = static_cast<std::size_t>(best);
      if (out.combined_ranks[si] < out.combined_ranks[sb] ||
          (out.combined_ranks[si] == out.combined_ranks[sb] &&
           out.manhattan_scores[si] < out.manhattan_scores[sb])) {
        best = i;
      }
    }
    out.decision = ids[static_cast<std::size_t>(best)];
  }
  return out;
}

}  // namespace mixprint
