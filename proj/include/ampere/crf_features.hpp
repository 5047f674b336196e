// crf_features.hpp -- token-level feature extraction for sequence tagging.
#pragma once

#include <string>
#include <vector>

#include "ampere/lexicon.hpp"
#include "ampere/types.hpp"

namespace ampere {

// Fixed, versioned template set. Families, all namespaced "fam=value":
//   w        lowercased token identity
//   shape    run-compressed character shape (Xx, d, o)
//   p2 p3    prefixes, s2 s3 suffixes (length 2-3)
//   prev next  neighbouring token identity (<bos>/<eos> at review edges)
//   sent_init sent_final  sentence boundary flags
//   special  placeholder kind (EQN/VAR/URL/CIT)
//   connective  token starts a connective-lexicon match
//   punct    punctuation class for punctuation tokens
//   spos     position-in-sentence bucket (first/mid/last third)
class FeatureTemplateSet {
 public:
  explicit FeatureTemplateSet(const ConnectiveLexicon* connectives = nullptr)
      : connectives_(connectives) {}

  static constexpr const char* kVersion = "ftv1";

  // One feature-string list per token of the review. The review must be
  // preprocessed (tokens and sentences filled).
  std::vector<std::vector<std::string>> extract(const Review& review) const;

 private:
  const ConnectiveLexicon* connectives_;
};

std::string word_shape(const std::string& token);

}  // namespace ampere
