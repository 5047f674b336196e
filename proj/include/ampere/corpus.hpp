// corpus.hpp -- ingestion, annotation binding, tag conversion, splits.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ampere/types.hpp"

namespace ampere {

// One line of an annotations file: gold tokenization plus proposition spans
// over it. Either token spans (`propositions`) or character spans
// (`char_propositions`, converted against the review text at bind time).
struct AnnotationRecord {
  std::string review_id;
  std::vector<std::string> tokens;
  std::vector<Proposition> props;
  std::vector<Proposition> char_props;  // spans in character offsets
  bool has_char_spans = false;
};

// Reads a reviews file (one JSON record per line: id, venue, rating,
// rating_scale_max, text). Only raw_text is filled; call preprocess_review
// to normalize and tokenize. Malformed records and duplicate ids throw
// DataError naming the record index.
std::vector<Review> ingest_reviews(const std::string& path);

// Reads an annotations file (one JSON record per line: review_id, tokens,
// propositions[{start,end,type}]). Validates span ordering and bounds.
std::vector<AnnotationRecord> ingest_annotations(const std::string& path);

// Joins reviews with their annotation records. Reviews must already be
// preprocessed; the record's tokens must match the review's token surfaces
// exactly (guards against tokenizer drift). Character spans are converted
// to token spans here. Reviews without a record get an empty proposition
// list and are kept.
std::vector<AnnotatedReview> bind_annotations(std::vector<Review> reviews,
                                              const std::vector<AnnotationRecord>& records);

// Converts character-offset spans to token spans: a token belongs to the
// span if its character range intersects it.
std::vector<Proposition> convert_char_spans(const Review& review,
                                            const std::vector<Proposition>& char_spans);

// Annotation <-> tag sequence conversion. NonArg propositions and gaps both
// map to O. from_tags repairs invalid sequences: a stray I (or I-t after a
// different type) opens a new segment.
TagSequence to_tags(const AnnotatedReview& a, Scheme scheme);
std::vector<Proposition> from_tags(const TagSequence& tags);
std::vector<Span> spans_from_tags(const TagSequence& tags);

// ceil(raw/2) for 10-point scales, identity for 5-point scales.
int scale_rating(int raw, int scale_max);

struct TrainTestSplit {
  std::vector<int> train;  // indices into the corpus
  std::vector<int> test;
  std::uint64_t seed = 0;
};

// Seeded 4:1 partition (320/80 on a 400-review corpus). Deterministic
// across platforms: hand-rolled Fisher-Yates over mt19937 draws.
TrainTestSplit split_train_test(int corpus_size, std::uint64_t seed);

// Splits the given indices into k folds, each index appearing exactly once.
std::vector<std::vector<int>> kfold(const std::vector<int>& indices, int k, std::uint64_t seed);

// Writers for the line-based JSON formats read by the ingesters.
void write_reviews(const std::string& path, const std::vector<Review>& reviews);
void write_annotations(const std::string& path, const std::vector<AnnotatedReview>& annotated);

}  // namespace ampere
