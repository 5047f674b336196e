// synth.hpp -- deterministic synthetic review corpus with pinned reference
// statistics, used by demos, tests and the acceptance suite when no real
// corpus is supplied.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ampere/types.hpp"

namespace ampere {

struct SynthConfig {
  std::uint64_t seed = 8201;
  // Single-venue annotated corpus (400 reviews) when false; small
  // multi-venue corpus for venue analytics when true.
  bool multi_venue = false;
  int multi_venue_reviews = 240;
};

struct SynthCorpus {
  std::vector<Review> reviews;                // raw_text filled, preprocessed
  std::vector<AnnotatedReview> annotated;     // gold propositions
  std::vector<AnnotatedReview> annotator_b;   // perturbed second annotation
};

SynthCorpus synth_corpus(const SynthConfig& config);

// Writes reviews.jsonl, annotations.jsonl and annotations_b.jsonl into dir.
void write_synth_corpus(const SynthCorpus& corpus, const std::string& dir);

}  // namespace ampere
