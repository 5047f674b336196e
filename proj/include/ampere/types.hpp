// types.hpp -- core domain types: reviews, tokens, propositions, tag sequences.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ampere {

enum class Venue { ICLR, UAI, ACL, NeurIPS, Other };

const char* venue_name(Venue v);
Venue parse_venue(const std::string& s);  // unknown strings map to Other

// The six proposition categories. Order is fixed and used everywhere:
// transition matrices, tie-breaks, report rows.
enum class PropType { Evaluation, Request, Fact, Reference, Quote, NonArg };
inline constexpr int kNumPropTypes = 6;

// Long names as spelled in annotation files: evaluation|request|fact|reference|quote|non-arg
const char* prop_type_name(PropType t);
// Short tags used in joint labels: eval|req|fact|ref|quote (NonArg has no tag; it maps to O)
const char* prop_type_tag(PropType t);
PropType parse_prop_type(const std::string& s);  // throws DataError on unknown

enum class SpecialKind { EQN, VAR, URL, CIT };
inline constexpr int kNumSpecialKinds = 4;
const char* special_kind_name(SpecialKind k);
// "<EQN>" etc.
const char* special_placeholder(SpecialKind k);

struct Token {
  std::string surface;
  bool is_special = false;
  std::optional<SpecialKind> special_kind;
};

// Half-open token interval [start, end) over a review's global token indices.
struct Span {
  int start = 0;
  int end = 0;
  int length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

struct Sentence {
  Span span;
};

struct Review {
  std::string id;
  Venue venue = Venue::Other;
  std::optional<int> rating;            // raw scale
  std::optional<int> rating_scale_max;  // 5 or 10
  std::string raw_text;                 // verbatim as ingested
  std::string text;                     // after special-token normalization
  std::vector<Token> tokens;            // flat token stream
  std::vector<Sentence> sentences;      // partition of the token stream

  int num_tokens() const { return static_cast<int>(tokens.size()); }
};

struct Proposition {
  Span span;
  PropType type = PropType::NonArg;
  bool operator==(const Proposition&) const = default;
};

// A review together with its gold propositions. Gaps between spans are
// implicitly non-argumentative.
struct AnnotatedReview {
  Review review;
  std::vector<Proposition> props;  // pairwise disjoint, sorted by start
};

enum class Scheme { BIO, JointBI };
const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);

// Label alphabet for a scheme. BIO: B I O. JointBI: B-t/I-t for the five
// argumentative types plus O, 11 labels. Index 0 is the tie-break winner.
const std::vector<std::string>& scheme_labels(Scheme s);

struct TagSequence {
  Scheme scheme = Scheme::BIO;
  std::vector<std::string> labels;  // one per token
};

}  // namespace ampere
