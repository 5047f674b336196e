// text.hpp -- special-token normalization, sentence splitting, tokenization.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "ampere/types.hpp"

namespace ampere {

struct SpecialTokenCounts {
  std::array<int, kNumSpecialKinds> counts{};  // indexed by SpecialKind
  int& operator[](SpecialKind k) { return counts[static_cast<int>(k)]; }
  int operator[](SpecialKind k) const { return counts[static_cast<int>(k)]; }
  int total() const;
};

// Replaces URLs, formatted citations, inline math and single-letter math
// variables with <URL>, <CIT>, <EQN>, <VAR>. Idempotent: placeholders never
// re-match. Returns the rewritten text and the number of replacements per kind.
std::pair<std::string, SpecialTokenCounts> normalize_special_tokens(const std::string& text);

// Splits normalized text into sentence strings on terminal punctuation,
// guarded by a fixed abbreviation list. Deterministic, whitespace-trimmed.
std::vector<std::string> split_sentences(const std::string& text);

// Tokenizes one sentence. Placeholders are single tokens, `` and '' are
// single tokens, punctuation separates, intra-word hyphens/apostrophes and
// decimal points stay attached. No token contains whitespace.
std::vector<Token> tokenize(const std::string& sentence_text);

// normalize + split + tokenize; fills text, tokens and sentence spans from
// raw_text. Returns the replacement counts.
SpecialTokenCounts preprocess_review(Review& review);

std::string lowercase(const std::string& s);

}  // namespace ampere
