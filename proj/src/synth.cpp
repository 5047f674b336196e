// synth.cpp -- synthetic corpus generation.
//
// The corpus is built back to front: per-review proposition type sequences
// realize a fixed transition-count matrix exactly (multigraph Eulerian
// decomposition), sentence grouping and token content are drawn from fixed
// pools with pinned injection rates, and every assembled review is verified
// to round-trip through the real normalize/split/tokenize pipeline before
// it leaves this module.

#include "ampere/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>

#include "ampere/corpus.hpp"
#include "ampere/error.hpp"
#include "ampere/text.hpp"

namespace ampere {

namespace {

// ---------------------------------------------------------------------------
// deterministic RNG helpers (std distributions have unspecified streams)

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(gen_() % n); }
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }

  double gauss() {  // sum-of-uniforms approximation
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += uniform();
    return s - 6.0;
  }

  int pick_weighted(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    double r = uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      r -= w[i];
      if (r < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(static_cast<int>(v.size()))];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = gen_() % i;
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// frozen corpus-level quotas
//
// Transition counts between proposition types (rows/cols in PropType order)
// plus per-type review start/end counts. Row sums equal type totals minus
// ends, column sums equal totals minus starts, every cell is positive, so
// the multigraph decomposes into exactly 400 paths.

constexpr int kReviews = 400;
constexpr long kTypeTotals[kNumPropTypes] = {3982, 1911, 3786, 207, 161, 339};

constexpr int kTransitionCounts[kNumPropTypes][kNumPropTypes] = {
    {1963, 671, 1065, 39, 55, 113},
    {537, 694, 323, 30, 38, 47},
    {1266, 416, 1936, 49, 34, 76},
    {23, 16, 27, 77, 5, 3},
    {47, 36, 39, 2, 18, 10},
    {106, 51, 75, 4, 9, 86},
};
constexpr int kStartCounts[kNumPropTypes] = {40, 27, 321, 6, 2, 4};
constexpr int kEndCounts[kNumPropTypes] = {76, 242, 9, 56, 9, 8};

// rating buckets 1..5 over 400 reviews, assigned shortest-first to the
// extreme buckets
constexpr int kRatingQuota[5] = {12, 130, 175, 77, 6};

// raw special-token occurrences planted in the text, per (kind, type)
struct SpecialPlantQuota {
  SpecialKind kind;
  PropType type;
  int count;
};
constexpr SpecialPlantQuota kSpecialQuotas[] = {
    {SpecialKind::CIT, PropType::Reference, 85},
    {SpecialKind::CIT, PropType::Fact, 12},
    {SpecialKind::URL, PropType::Reference, 50},
    {SpecialKind::URL, PropType::Fact, 8},
    {SpecialKind::URL, PropType::Evaluation, 4},
    {SpecialKind::EQN, PropType::Fact, 70},
    {SpecialKind::EQN, PropType::Evaluation, 40},
    {SpecialKind::EQN, PropType::Request, 15},
    {SpecialKind::VAR, PropType::Fact, 170},
    {SpecialKind::VAR, PropType::Evaluation, 90},
    {SpecialKind::VAR, PropType::Request, 42},
};

// sentence grouping draw weights: full-sentence prop, shared sentences of
// 2/3/4 props, two-sentence prop
constexpr double kGroupWeights[5] = {0.575, 0.10375, 0.04686, 0.016734, 0.010};

// connective placement rates
constexpr double kBoundaryConnective = 0.25;
constexpr double kStrayFullSent = 0.26;
constexpr double kStrayShared = 0.05;
constexpr double kSentenceInitialConnective = 0.16;
constexpr double kBoundaryComma = 0.7;

// ---------------------------------------------------------------------------
// word pools. Pool hygiene: no standalone discourse connective appears in
// any pool; connectives enter only through the dedicated slots above.

const std::vector<std::string>& common_words() {
  static const std::vector<std::string> v = {
      "the", "this", "that", "these", "those", "it", "is", "are", "was", "were",
      "be", "been", "being", "has", "have", "had", "will", "can", "may", "might",
      "to", "of", "in", "on", "at", "by", "with", "from", "into", "about",
      "paper", "work", "results", "section", "approach", "idea", "problem",
      "task", "setting", "performance", "analysis", "case", "part", "point",
      "time", "number", "set", "given", "based", "using", "shown", "a", "an",
      "not", "its", "their", "there", "which", "we", "they", "one", "two",
      "three", "several", "different", "new", "main", "first", "second",
      "other", "such", "some", "each", "most", "many", "both", "here", "role",
      "terms", "value", "values", "rate", "score", "scores", "level", "form"};
  return v;
}

struct TypePool {
  std::vector<std::string> content;
  std::vector<std::string> openers;
};

const TypePool& pool_for(PropType t) {
  static const TypePool eval{
      {"convincing", "strong", "weak", "limited", "significant", "marginal",
       "promising", "sound", "thorough", "insightful", "questionable", "modest",
       "impressive", "lacking", "adequate", "unconvincing", "readable", "dense",
       "contribution", "clarity", "presentation", "writing", "motivation",
       "seem", "seems", "quality", "strengths", "weaknesses", "claims",
       "missing", "confusing", "solid", "incremental", "surprising", "notable"},
      {"the", "this", "it", "I", "we"}};
  static const TypePool req{
      {"would", "could", "suggest", "more", "clarify", "compare", "add",
       "include", "discuss", "explain", "report", "consider", "revise",
       "address", "provide", "improve", "extend", "evaluate", "justify",
       "ablation", "baselines", "details", "comparison", "experiments",
       "helpful", "would", "could", "more"},
      {"the", "it", "I", "we", "can"}};
  static const TypePool fact{
      {"training", "network", "uses", "loss", "layers", "architecture",
       "equation", "table", "figure", "definition", "theorem", "proof",
       "gradient", "update", "weights", "inputs", "outputs", "features",
       "algorithm", "implementation", "describes", "introduces", "combines",
       "applies", "defines", "consists", "optimizes", "minimizes", "trained",
       "learns", "benchmark", "accuracy", "layer", "function", "objective",
       "data"},
      {"the", "this", "section", "in"}};
  static const TypePool ref{
      {"conference", "proceedings", "journal", "volume", "appendix", "page",
       "pages", "arxiv", "preprint", "reference", "references", "cite",
       "cited", "title", "published", "edition", "chapter"},
      {"see", "the"}};
  static const TypePool quote{
      {"states", "wrote", "abstract", "text", "line", "sentence", "paragraph",
       "says", "reads", "claim"},
      {"the", "quoting", "from"}};
  static const TypePool nonarg{
      {"thanks", "response", "reply", "note", "comment", "comments",
       "reviewer", "read", "am", "sure", "understand", "missed", "something",
       "typo", "minor", "formatting", "anyway", "sorry"},
      {"I", "did", "how", "what", "are", "below", "ok"}};
  switch (t) {
    case PropType::Evaluation: return eval;
    case PropType::Request: return req;
    case PropType::Fact: return fact;
    case PropType::Reference: return ref;
    case PropType::Quote: return quote;
    case PropType::NonArg: return nonarg;
  }
  return nonarg;
}

const std::vector<std::string>& request_cues() {
  static const std::vector<std::string> v = {"should", "should", "should", "please",
                                             "why", "need", "would like to",
                                             "would be nice"};
  return v;
}
const std::vector<std::string>& eval_cues() {
  static const std::vector<std::string> v = {"interesting", "novel", "unclear", "clear",
                                             "well", "good", "important", "very",
                                             "highly", "similar", "clearly", "quite"};
  return v;
}
const std::vector<std::string>& fact_cues() {
  static const std::vector<std::string> v = {"authors", "author", "propose", "present",
                                             "method", "parameters", "example",
                                             "dataset", "same", "incorrect", "correct"};
  return v;
}

const std::vector<std::string>& boundary_connectives() {
  static const std::vector<std::string> v = {"but", "because", "although", "while",
                                             "whereas", "since", "so", "therefore",
                                             "thus", "however"};
  return v;
}
const std::vector<std::string>& stray_connectives() {
  static const std::vector<std::string> v = {"and", "or", "as", "also", "then", "when"};
  return v;
}
const std::vector<std::string>& request_stray_connectives() {
  static const std::vector<std::string> v = {"if", "if", "if", "and", "or", "when"};
  return v;
}
const std::vector<std::string>& initial_connectives() {
  static const std::vector<std::string> v = {"however", "moreover", "furthermore",
                                             "finally", "nevertheless",
                                             "additionally", "indeed"};
  return v;
}

const std::vector<std::string>& surnames() {
  static const std::vector<std::string> v = {
      "Smith", "Lee", "Park", "Kim", "Chen", "Wang", "Garcia", "Muller",
      "Ivanov", "Novak", "Silva", "Rossi", "Dubois", "Tanaka", "Olsen",
      "Kowalski"};
  return v;
}

// venue-flavored words for the multi-venue corpus
const std::vector<std::string>& venue_words(Venue v) {
  static const std::vector<std::string> iclr = {"network", "trained", "acceptance",
                                                "convinced", "image", "agent"};
  static const std::vector<std::string> uai = {"stochastic", "column", "discovery",
                                               "processes", "inference", "graphical"};
  static const std::vector<std::string> acl = {"word", "words", "embeddings",
                                               "examples", "extraction", "corpus"};
  static const std::vector<std::string> neurips = {"theoretical", "guidelines",
                                                   "significance", "practical",
                                                   "characters", "bound"};
  switch (v) {
    case Venue::ICLR: return iclr;
    case Venue::UAI: return uai;
    case Venue::ACL: return acl;
    case Venue::NeurIPS: return neurips;
    default: return iclr;
  }
}

// ---------------------------------------------------------------------------
// proposition type sequences: Eulerian decomposition of the quota multigraph

std::vector<std::vector<PropType>> euler_type_sequences(Rng& rng) {
  constexpr int S = kNumPropTypes;  // virtual source/sink node
  std::array<std::array<long, kNumPropTypes + 1>, kNumPropTypes + 1> rem{};
  std::array<long, kNumPropTypes + 1> out_deg{};
  for (int i = 0; i < kNumPropTypes; ++i) {
    for (int j = 0; j < kNumPropTypes; ++j) rem[i][j] = kTransitionCounts[i][j];
    rem[S][i] = kStartCounts[i];
    rem[i][S] = kEndCounts[i];
  }
  for (int i = 0; i <= S; ++i) {
    for (int j = 0; j <= S; ++j) out_deg[i] += rem[i][j];
  }

  auto pick_edge = [&](int u) {
    long r = static_cast<long>(rng.raw() % static_cast<std::uint64_t>(out_deg[u]));
    for (int v = 0; v <= S; ++v) {
      r -= rem[u][v];
      if (r < 0) return v;
    }
    throw NumericError("euler: inconsistent degree bookkeeping");
  };

  // Hierholzer with splicing; in a balanced directed multigraph the walk can
  // only stall at its start node.
  std::vector<int> circuit{S};
  while (true) {
    std::size_t at = circuit.size();
    for (std::size_t i = 0; i < circuit.size(); ++i) {
      if (out_deg[circuit[i]] > 0) {
        at = i;
        break;
      }
    }
    if (at == circuit.size()) break;
    int u0 = circuit[at];
    std::vector<int> tour{u0};
    int u = u0;
    do {
      int v = pick_edge(u);
      --rem[u][v];
      --out_deg[u];
      tour.push_back(v);
      u = v;
    } while (!(u == u0 && out_deg[u] == 0));
    std::vector<int> next;
    next.reserve(circuit.size() + tour.size() - 1);
    next.insert(next.end(), circuit.begin(), circuit.begin() + at);
    next.insert(next.end(), tour.begin(), tour.end());
    next.insert(next.end(), circuit.begin() + at + 1, circuit.end());
    circuit = std::move(next);
  }

  std::vector<std::vector<PropType>> sequences;
  std::vector<PropType> current;
  for (std::size_t i = 1; i < circuit.size(); ++i) {
    if (circuit[i] == S) {
      if (current.empty()) throw NumericError("euler: empty review path");
      sequences.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<PropType>(circuit[i]));
    }
  }
  if (static_cast<int>(sequences.size()) != kReviews) {
    throw NumericError("euler: expected 400 paths");
  }
  return sequences;
}

// ---------------------------------------------------------------------------
// per-proposition planning

struct PropPlan {
  PropType type = PropType::NonArg;
  bool opens_sentence = true;
  bool closes_sentence = true;
  bool two_sentence = false;
  bool boundary_connective = false;  // non-initial prop led by a connective
  bool trailing_comma = false;       // prop ends mid-sentence with a comma
  std::vector<SpecialKind> specials;
};

// One raw-text piece realizing one pipeline token (specials: a multi-word
// raw form realizing one placeholder token).
struct Piece {
  std::string raw;
  std::string token;
  bool no_space_before = false;
  bool no_space_after = false;
  bool internal_terminal = false;  // sentence break inside a two-sentence prop
};

Piece word_piece(const std::string& w) { return {w, w, false, false}; }

Piece punct_piece(const std::string& p) { return {p, p, true, false}; }

std::vector<Piece> special_pieces(Rng& rng, SpecialKind kind) {
  switch (kind) {
    case SpecialKind::URL: {
      static const std::vector<std::string> urls = {
          "https://github.com/auth0r/code", "https://arxiv.org/abs/1810.04805",
          "https://openreview.net/forum", "www.supplement.example.com/results",
          "https://sites.google.com/view/supp"};
      return {{rng.pick(urls), "<URL>", false, false}};
    }
    case SpecialKind::CIT: {
      const auto& names = surnames();
      int year = 2012 + rng.below(7);
      std::string raw;
      switch (rng.below(4)) {
        case 0: raw = "(" + rng.pick(names) + " et al., " + std::to_string(year) + ")"; break;
        case 1: raw = "[" + std::to_string(1 + rng.below(30)) + "]"; break;
        case 2:
          raw = "(" + rng.pick(names) + " and " + rng.pick(names) + ", " +
                std::to_string(year) + ")";
          break;
        default: raw = rng.pick(names) + " et al. (" + std::to_string(year) + ")"; break;
      }
      return {{raw, "<CIT>", false, false}};
    }
    case SpecialKind::EQN: {
      static const std::vector<std::string> bodies = {
          "x \\le y + 1", "\\alpha > 0", "f ( x ) = w x + b", "p = 1 / 2",
          "L = L_1 + L_2", "n \\to \\infty", "E = m c^2"};
      return {{"$ " + rng.pick(bodies) + " $", "<EQN>", false, false}};
    }
    case SpecialKind::VAR: {
      static const std::vector<std::string> vars = {"x", "y", "z", "k", "n",
                                                    "m", "T", "d", "h"};
      return {{rng.pick(vars), "<VAR>", false, false}};
    }
  }
  return {};
}

int draw_length(Rng& rng, PropType type, bool shared, bool two_sentence) {
  double mu, sigma = 0.32;
  switch (type) {
    case PropType::Evaluation: mu = 2.62; break;
    case PropType::Request: mu = 2.62; break;
    case PropType::Fact: mu = 2.78; break;
    case PropType::Reference: mu = 2.45; break;
    case PropType::Quote: mu = 2.70; break;
    case PropType::NonArg: mu = 1.90; sigma = 0.40; break;
    default: mu = 2.6; break;
  }
  if (shared) mu -= 0.55;
  if (two_sentence) mu += 0.72;
  int len = static_cast<int>(std::lround(std::exp(mu + sigma * rng.gauss())));
  return std::clamp(len, two_sentence ? 9 : 3, 70);
}

// Token units: multiword cue phrases stay contiguous through shuffling.
using Unit = std::vector<Piece>;

Unit unit_of_words(const std::string& phrase) {
  Unit u;
  std::istringstream ss(phrase);
  std::string w;
  while (ss >> w) u.push_back(word_piece(w));
  return u;
}

// Generates the pieces of one proposition. `venue_word` (optional) plants a
// venue-flavored token for the multi-venue corpus.
std::vector<Piece> generate_prop_pieces(Rng& rng, const PropPlan& plan,
                                        const std::string* venue_word) {
  PropType type = plan.type;
  const TypePool& pool = pool_for(type);
  bool shared = !plan.opens_sentence || !plan.closes_sentence;
  int target_len = draw_length(rng, type, shared, plan.two_sentence);

  // opener
  Piece opener = plan.boundary_connective
                     ? word_piece(rng.pick(boundary_connectives()))
                     : (plan.opens_sentence && rng.chance(kSentenceInitialConnective))
                           ? word_piece(rng.pick(initial_connectives()))
                           : word_piece(rng.pick(pool.openers));

  // body units: cues, stray connective, specials, quote wrap, fillers
  std::vector<Unit> units;
  bool quote_wrap = false;
  switch (type) {
    case PropType::Evaluation:
      if (rng.chance(0.40)) units.push_back(unit_of_words(rng.pick(eval_cues())));
      if (rng.chance(0.04)) units.push_back(unit_of_words(rng.pick(request_cues())));
      if (rng.chance(0.06)) units.push_back(unit_of_words(rng.pick(fact_cues())));
      quote_wrap = rng.chance(0.045);
      break;
    case PropType::Request:
      if (rng.chance(0.36)) units.push_back(unit_of_words(rng.pick(request_cues())));
      if (rng.chance(0.10)) units.push_back(unit_of_words(rng.pick(eval_cues())));
      if (rng.chance(0.15)) units.push_back(unit_of_words(rng.pick(fact_cues())));
      quote_wrap = rng.chance(0.03);
      break;
    case PropType::Fact:
      if (rng.chance(0.36)) units.push_back(unit_of_words(rng.pick(fact_cues())));
      if (rng.chance(0.08)) units.push_back(unit_of_words(rng.pick(eval_cues())));
      if (rng.chance(0.03)) units.push_back(unit_of_words(rng.pick(request_cues())));
      quote_wrap = rng.chance(0.035);
      break;
    case PropType::Reference:
      break;
    case PropType::Quote:
      units.push_back(unit_of_words(rng.pick(pool_for(PropType::Quote).content)));
      quote_wrap = true;
      break;
    case PropType::NonArg:
      if (rng.chance(0.10)) units.push_back(unit_of_words(rng.pick(request_cues())));
      if (rng.chance(0.06)) units.push_back(unit_of_words(rng.pick(eval_cues())));
      if (rng.chance(0.05)) units.push_back(unit_of_words(rng.pick(fact_cues())));
      break;
  }

  double stray_rate = shared ? kStrayShared : kStrayFullSent;
  if (rng.chance(stray_rate)) {
    const auto& pool2 = type == PropType::Request ? request_stray_connectives()
                                                  : stray_connectives();
    units.push_back({word_piece(rng.pick(pool2))});
  }
  for (SpecialKind kind : plan.specials) {
    units.push_back(special_pieces(rng, kind));
  }
  if (venue_word && rng.chance(0.5)) {
    units.push_back({word_piece(*venue_word)});
  }

  // filler words up to the target length
  int used = 1;  // opener
  for (const Unit& u : units) used += static_cast<int>(u.size());
  int punct_reserve = (plan.closes_sentence ? 1 : 0) + (plan.two_sentence ? 1 : 0) +
                      (plan.trailing_comma ? 1 : 0) + (quote_wrap ? 2 : 0);
  int fill = std::max(plan.two_sentence ? 6 : (quote_wrap ? 3 : 2),
                      target_len - used - punct_reserve);
  for (int i = 0; i < fill; ++i) {
    const auto& src = rng.chance(0.45) ? pool.content : common_words();
    units.push_back({word_piece(rng.pick(src))});
  }

  rng.shuffle(units);

  // flatten; quote wrap encloses a middle run of the body
  std::vector<Piece> body;
  for (const Unit& u : units) body.insert(body.end(), u.begin(), u.end());
  if (quote_wrap) {
    int n = static_cast<int>(body.size());
    int span = std::min(n, 2 + rng.below(5));
    int at = n - span <= 0 ? 0 : rng.below(n - span + 1);
    Piece open{"``", "``", false, false};
    Piece close{"''", "''", true, false};
    body.insert(body.begin() + at + span, close);
    body.insert(body.begin() + at, open);
  }

  std::vector<Piece> pieces;
  pieces.push_back(opener);
  pieces.insert(pieces.end(), body.begin(), body.end());

  // sprinkle commas between plain words
  int stride = 8 + rng.below(5);
  for (int i = stride; i + 1 < static_cast<int>(pieces.size()); i += stride + 1) {
    const Piece& here = pieces[i];
    const Piece& next = pieces[i + 1];
    bool word_here = here.token == here.raw && !here.no_space_before &&
                     std::isalpha(static_cast<unsigned char>(here.token[0]));
    bool word_next = next.token == next.raw && !next.no_space_before &&
                     std::isalpha(static_cast<unsigned char>(next.token[0]));
    if (word_here && word_next) {
      pieces.insert(pieces.begin() + i + 1, punct_piece(","));
      ++i;
    }
  }

  // two-sentence propositions get an internal terminal followed by a plain
  // word the splitter can recognize once capitalized
  if (plan.two_sentence) {
    auto plain_word = [](const Piece& p) {
      return p.token == p.raw && !p.raw.empty() &&
             std::islower(static_cast<unsigned char>(p.raw[0]));
    };
    int n = static_cast<int>(pieces.size());
    int cut = std::clamp(n / 2 + rng.below(3) - 1, 2, n - 3);
    while (cut > 2 && !(!pieces[cut].no_space_before && plain_word(pieces[cut + 1]))) --cut;
    if (!pieces[cut].no_space_before && plain_word(pieces[cut + 1])) {
      Piece dot = punct_piece(".");
      dot.internal_terminal = true;
      pieces.insert(pieces.begin() + cut + 1, dot);
    }
  }

  // trailing punctuation
  if (plan.trailing_comma && !plan.closes_sentence) {
    pieces.push_back(punct_piece(","));
  }
  if (plan.closes_sentence) {
    const char* terminal = ".";
    if (type == PropType::NonArg && rng.chance(0.5)) terminal = "?";
    else if (type == PropType::Request && rng.chance(0.18)) terminal = "?";
    else if (rng.chance(0.015)) terminal = "!";
    pieces.push_back(punct_piece(terminal));
  }
  return pieces;
}

// ---------------------------------------------------------------------------
// review assembly

struct PlannedReview {
  std::vector<PropPlan> plans;
  std::vector<int> sentence_breaks;  // prop index opening each sentence
};

PlannedReview plan_review(Rng& rng, const std::vector<PropType>& types) {
  PlannedReview out;
  int n = static_cast<int>(types.size());
  out.plans.resize(n);
  int i = 0;
  while (i < n) {
    int remaining = n - i;
    std::vector<double> w(kGroupWeights, kGroupWeights + 5);
    if (remaining < 4) w[3] = 0.0;
    if (remaining < 3) w[2] = 0.0;
    if (remaining < 2) w[1] = 0.0;
    int kind = rng.pick_weighted(w);
    int group = kind == 0 || kind == 4 ? 1 : kind + 1;  // A/C: 1 prop, Bk: k props
    for (int j = 0; j < group; ++j) {
      PropPlan& p = out.plans[i + j];
      p.type = types[i + j];
      p.opens_sentence = j == 0;
      p.closes_sentence = j == group - 1;
      p.two_sentence = kind == 4;
      if (j > 0) {
        p.boundary_connective = rng.chance(kBoundaryConnective);
        out.plans[i + j - 1].trailing_comma = rng.chance(kBoundaryComma);
      }
    }
    i += group;
  }
  return out;
}

std::string assemble_raw_text(std::vector<std::vector<Piece>>& prop_pieces,
                              const std::vector<PropPlan>& plans) {
  auto capitalize = [](Piece& piece) {
    // plain lowercase words only; placeholders and specials stay untouched
    if (piece.token != piece.raw) return;
    if (!piece.raw.empty() && piece.raw[0] >= 'a' && piece.raw[0] <= 'z') {
      piece.raw[0] = static_cast<char>(piece.raw[0] - 32);
      piece.token = piece.raw;
    }
  };
  for (std::size_t p = 0; p < prop_pieces.size(); ++p) {
    if (plans[p].opens_sentence && !prop_pieces[p].empty()) {
      capitalize(prop_pieces[p][0]);
    }
    for (std::size_t k = 0; k + 1 < prop_pieces[p].size(); ++k) {
      if (prop_pieces[p][k].internal_terminal) capitalize(prop_pieces[p][k + 1]);
    }
  }
  std::string text;
  bool suppress_space = false;
  for (const auto& pieces : prop_pieces) {
    for (const Piece& piece : pieces) {
      if (!text.empty() && !suppress_space && !piece.no_space_before) text.push_back(' ');
      text += piece.raw;
      suppress_space = piece.no_space_after;
    }
  }
  return text;
}

// Builds the review, runs the real pipeline and checks that tokens and
// sentence boundaries land exactly where planned.
AnnotatedReview realize_review(const std::string& id, Venue venue,
                               std::vector<std::vector<Piece>>& prop_pieces,
                               const std::vector<PropPlan>& plans) {
  AnnotatedReview out;
  out.review.id = id;
  out.review.venue = venue;
  out.review.raw_text = assemble_raw_text(prop_pieces, plans);
  preprocess_review(out.review);

  std::vector<std::string> planned;
  for (const auto& pieces : prop_pieces) {
    for (const Piece& piece : pieces) planned.push_back(piece.token);
  }
  if (static_cast<int>(planned.size()) != out.review.num_tokens()) {
    throw NumericError("synth: token count drift in " + id + ": planned " +
                       std::to_string(planned.size()) + ", pipeline " +
                       std::to_string(out.review.num_tokens()));
  }
  for (int t = 0; t < out.review.num_tokens(); ++t) {
    if (out.review.tokens[t].surface != planned[t]) {
      throw NumericError("synth: token drift in " + id + " at " + std::to_string(t) +
                         ": planned \"" + planned[t] + "\", pipeline \"" +
                         out.review.tokens[t].surface + "\"");
    }
  }

  // planned sentence boundaries: sentence opens at each opens_sentence prop
  // and after each internal terminal of a two-sentence prop
  std::vector<int> planned_starts;
  int cursor = 0;
  for (std::size_t p = 0; p < prop_pieces.size(); ++p) {
    if (plans[p].opens_sentence) planned_starts.push_back(cursor);
    for (std::size_t k = 0; k + 1 < prop_pieces[p].size(); ++k) {
      if (prop_pieces[p][k].internal_terminal) {
        planned_starts.push_back(cursor + static_cast<int>(k) + 1);
      }
    }
    cursor += static_cast<int>(prop_pieces[p].size());
  }
  std::vector<int> actual_starts;
  for (const Sentence& s : out.review.sentences) actual_starts.push_back(s.span.start);
  if (actual_starts != planned_starts) {
    throw NumericError("synth: sentence boundary drift in " + id + " (planned " +
                       std::to_string(planned_starts.size()) + ", pipeline " +
                       std::to_string(actual_starts.size()) + ")");
  }

  cursor = 0;
  for (std::size_t p = 0; p < prop_pieces.size(); ++p) {
    int len = static_cast<int>(prop_pieces[p].size());
    out.props.push_back(Proposition{Span{cursor, cursor + len}, plans[p].type});
    cursor += len;
  }
  return out;
}

// ---------------------------------------------------------------------------
// annotator B: controlled perturbation of the gold annotation

std::vector<Proposition> perturb_annotation(Rng& rng, const AnnotatedReview& gold) {
  std::vector<Proposition> props = gold.props;
  // boundary jitter between adjacent propositions
  for (std::size_t i = 0; i + 1 < props.size(); ++i) {
    if (props[i].span.end != props[i + 1].span.start) continue;
    if (!rng.chance(0.18)) continue;
    int delta = (rng.below(2) ? 1 : -1) * (1 + rng.below(2));
    int boundary = props[i].span.end + delta;
    if (boundary > props[i].span.start + 1 && boundary < props[i + 1].span.end) {
      props[i].span.end = boundary;
      props[i + 1].span.start = boundary;
    }
  }
  // occasional merge of adjacent propositions
  std::vector<Proposition> merged;
  for (const Proposition& p : props) {
    if (!merged.empty() && merged.back().span.end == p.span.start && rng.chance(0.06)) {
      merged.back().span.end = p.span.end;
      continue;
    }
    merged.push_back(p);
  }
  // type flips with an evaluation/fact confusion bias
  for (Proposition& p : merged) {
    if (!rng.chance(0.10)) continue;
    if (p.type == PropType::Evaluation && rng.chance(0.6)) {
      p.type = PropType::Fact;
    } else if (p.type == PropType::Fact && rng.chance(0.6)) {
      p.type = PropType::Evaluation;
    } else {
      int t = rng.below(kNumPropTypes);
      if (static_cast<PropType>(t) != p.type) p.type = static_cast<PropType>(t);
    }
  }
  return merged;
}

// ---------------------------------------------------------------------------
// rating assignment: extremes get the shorter reviews

void assign_ratings(Rng& rng, std::vector<AnnotatedReview>& reviews) {
  std::vector<std::pair<double, int>> order;  // (noisy size rank, index)
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    order.push_back({static_cast<double>(reviews[i].props.size()) + 12.0 * rng.gauss(),
                     static_cast<int>(i)});
  }
  std::sort(order.begin(), order.end());
  // shortest first: buckets 1, 5, 2, 4, 3
  const int bucket_order[5] = {0, 4, 1, 3, 2};
  std::size_t at = 0;
  for (int b : bucket_order) {
    for (int k = 0; k < kRatingQuota[b] && at < order.size(); ++k, ++at) {
      Review& r = reviews[order[at].second].review;
      int bucket = b + 1;
      r.rating = 2 * bucket - rng.below(2);  // ceil(raw/2) == bucket
      r.rating_scale_max = 10;
    }
  }
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::vector<SpecialKind>>> assign_specials(
    Rng& rng, const std::vector<std::vector<PropType>>& sequences) {
  std::vector<std::vector<std::vector<SpecialKind>>> out(sequences.size());
  std::map<PropType, std::vector<std::pair<int, int>>> by_type;
  for (std::size_t r = 0; r < sequences.size(); ++r) {
    out[r].resize(sequences[r].size());
    for (std::size_t p = 0; p < sequences[r].size(); ++p) {
      by_type[sequences[r][p]].push_back({static_cast<int>(r), static_cast<int>(p)});
    }
  }
  for (auto& [type, slots] : by_type) rng.shuffle(slots);
  std::map<PropType, std::size_t> cursor;
  for (const SpecialPlantQuota& q : kSpecialQuotas) {
    auto& slots = by_type[q.type];
    for (int k = 0; k < q.count; ++k) {
      auto [r, p] = slots[cursor[q.type] % slots.size()];
      ++cursor[q.type];
      out[r][p].push_back(q.kind);
    }
  }
  return out;
}

std::vector<AnnotatedReview> generate_single_venue(Rng& rng) {
  auto sequences = euler_type_sequences(rng);
  std::array<long, kNumPropTypes> totals{};
  for (const auto& seq : sequences) {
    for (PropType t : seq) ++totals[static_cast<int>(t)];
  }
  for (int t = 0; t < kNumPropTypes; ++t) {
    if (totals[t] != kTypeTotals[t]) {
      throw NumericError("synth: type totals drifted from the quota table");
    }
  }
  auto specials = assign_specials(rng, sequences);

  std::vector<AnnotatedReview> annotated;
  annotated.reserve(kReviews);
  for (int r = 0; r < kReviews; ++r) {
    PlannedReview plan = plan_review(rng, sequences[r]);
    for (std::size_t p = 0; p < plan.plans.size(); ++p) {
      plan.plans[p].specials = specials[r][p];
    }
    std::vector<std::vector<Piece>> pieces;
    pieces.reserve(plan.plans.size());
    for (const PropPlan& pp : plan.plans) {
      pieces.push_back(generate_prop_pieces(rng, pp, nullptr));
    }
    char id[32];
    std::snprintf(id, sizeof(id), "iclr18_%04d", r);
    annotated.push_back(realize_review(id, Venue::ICLR, pieces, plan.plans));
  }
  assign_ratings(rng, annotated);
  return annotated;
}

std::vector<AnnotatedReview> generate_multi_venue(Rng& rng, int total) {
  const Venue venues[4] = {Venue::ICLR, Venue::UAI, Venue::ACL, Venue::NeurIPS};
  std::vector<AnnotatedReview> annotated;
  int per_venue = total / 4;

  // transition sampling weights from the quota matrix
  std::array<std::vector<double>, kNumPropTypes> row_w;
  for (int i = 0; i < kNumPropTypes; ++i) {
    for (int j = 0; j < kNumPropTypes; ++j) {
      row_w[i].push_back(static_cast<double>(kTransitionCounts[i][j]));
    }
  }

  int serial = 0;
  for (Venue venue : venues) {
    bool long_reviews = venue == Venue::ACL || venue == Venue::NeurIPS;
    double req_boost = venue == Venue::ACL ? 1.9 : venue == Venue::ICLR ? 0.7 : 1.0;
    for (int k = 0; k < per_venue; ++k) {
      int count = std::max(2, static_cast<int>(std::lround(
                                  std::exp((long_reviews ? 3.22 : 2.76) + 0.33 * rng.gauss()))));
      std::vector<PropType> types;
      int state = 2;  // reviews tend to open with a summary (Fact)
      if (rng.chance(0.2)) state = rng.below(kNumPropTypes);
      types.push_back(static_cast<PropType>(state));
      for (int i = 1; i < count; ++i) {
        std::vector<double> w = row_w[state];
        w[1] *= req_boost;
        state = rng.pick_weighted(w);
        types.push_back(static_cast<PropType>(state));
      }

      PlannedReview plan = plan_review(rng, types);
      // rate-based specials
      for (std::size_t p = 0; p < plan.plans.size(); ++p) {
        PropPlan& pp = plan.plans[p];
        if (pp.type == PropType::Reference && rng.chance(0.6)) {
          pp.specials.push_back(rng.chance(0.6) ? SpecialKind::CIT : SpecialKind::URL);
        } else if (pp.type == PropType::Fact || pp.type == PropType::Evaluation) {
          if (rng.chance(0.03)) pp.specials.push_back(SpecialKind::VAR);
          if (rng.chance(0.012)) pp.specials.push_back(SpecialKind::EQN);
        }
      }
      std::vector<std::vector<Piece>> pieces;
      pieces.reserve(plan.plans.size());
      const auto& vwords = venue_words(venue);
      for (const PropPlan& pp : plan.plans) {
        const std::string* vw = rng.chance(0.35) ? &vwords[rng.below(static_cast<int>(
                                                      vwords.size()))]
                                                 : nullptr;
        pieces.push_back(generate_prop_pieces(rng, pp, vw));
      }
      char id[32];
      std::snprintf(id, sizeof(id), "%s_%04d", venue == Venue::ICLR ? "iclr"
                                               : venue == Venue::UAI ? "uai"
                                               : venue == Venue::ACL ? "acl"
                                                                     : "neurips",
                    serial++);
      AnnotatedReview a = realize_review(id, venue, pieces, plan.plans);
      // ratings: NeurIPS unrated, ACL on a 5-point scale
      if (venue == Venue::ACL) {
        a.review.rating = 1 + rng.below(5);
        a.review.rating_scale_max = 5;
      } else if (venue != Venue::NeurIPS) {
        a.review.rating = 1 + rng.below(10);
        a.review.rating_scale_max = 10;
      }
      annotated.push_back(std::move(a));
    }
  }
  return annotated;
}

}  // namespace

SynthCorpus synth_corpus(const SynthConfig& config) {
  Rng rng(config.seed);
  SynthCorpus out;
  out.annotated = config.multi_venue ? generate_multi_venue(rng, config.multi_venue_reviews)
                                     : generate_single_venue(rng);

  out.reviews.reserve(out.annotated.size());
  out.annotator_b.reserve(out.annotated.size());
  for (const AnnotatedReview& a : out.annotated) {
    out.reviews.push_back(a.review);
    AnnotatedReview b;
    b.review = a.review;
    b.props = perturb_annotation(rng, a);
    out.annotator_b.push_back(std::move(b));
  }
  return out;
}

void write_synth_corpus(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_reviews(dir + "/reviews.jsonl", corpus.reviews);
  write_annotations(dir + "/annotations.jsonl", corpus.annotated);
  write_annotations(dir + "/annotations_b.jsonl", corpus.annotator_b);
}

}  // namespace ampere
