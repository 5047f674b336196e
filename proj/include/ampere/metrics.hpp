// metrics.hpp -- segmentation/classification scoring, agreement, significance.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ampere/types.hpp"

namespace ampere {

struct PrfRow {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long gold = 0;
  long predicted = 0;
  long matched = 0;
};

PrfRow make_prf(long matched, long predicted, long gold);

struct MetricsReport {
  PrfRow overall;
  std::array<PrfRow, kNumPropTypes> per_type{};  // indexed by PropType
  std::uint64_t split_seed = 0;
  std::string scheme;
  std::string condition;  // e.g. "gold-segments", "predicted-segments"
};

struct PrfOptions {
  // When false (default), NonArg gold spans are not counted as targets and
  // NonArg-typed predictions are treated as abstentions.
  bool include_nonarg = false;
};

// Exact span match against gold argumentative propositions, pooled over
// reviews. pred[i] and gold[i] belong to the same review; spans must lie
// within that review's token count (pass the counts for the range check).
MetricsReport seg_prf(const std::vector<std::vector<Span>>& pred,
                      const std::vector<std::vector<Proposition>>& gold,
                      const std::vector<int>& token_counts,
                      const PrfOptions& opts = {});

// Span and type must both match. Per-type rows restrict both sides to the
// type.
MetricsReport joint_prf(const std::vector<std::vector<Proposition>>& pred,
                        const std::vector<std::vector<Proposition>>& gold,
                        const std::vector<int>& token_counts,
                        const PrfOptions& opts = {});

// Cohen's kappa over per-token label pairs, pooled across the corpus.
double token_kappa(const std::vector<TagSequence>& a, const std::vector<TagSequence>& b);

// Cohen's kappa over proposition types, restricted to segments with
// identical spans in both annotations. Absent when nothing matches.
std::optional<double> matched_segment_kappa(const std::vector<AnnotatedReview>& a,
                                            const std::vector<AnnotatedReview>& b);

struct AgreementReport {
  double token_kappa = 0.0;
  std::optional<double> type_kappa;        // over exactly matched segments
  double alpha_u = 0.0;                    // averaged per review
  std::array<std::optional<double>, kNumPropTypes> alpha_u_per_type{};
  std::array<std::optional<double>, kNumPropTypes> type_kappa_per_type{};
  int reviews = 0;
};

// Unitized agreement coefficient for two segmentations of the same token
// continuum, alpha = 1 - D_obs/D_exp, computed per review and averaged.
//
// Each annotation partitions [0, n) into categorized units and gaps. For an
// intersecting pair of units u, v with overlap o:
//   same category:       delta^2 = (len_u - o)^2 + (len_v - o)^2
//   different category:  delta^2 = len_u^2 + len_v^2
// and a unit entirely inside the other annotator's gap scores len^2.
// D_obs sums delta^2 over the actual pair of annotations. D_exp is the
// exact average of the same sum when each annotator's units are placed
// uniformly at random on the continuum (all placements enumerated), which
// plays the role of disagreement expected by chance.
//
// Worked example, continuum of 4 tokens, A = unit [0,2), B = unit [1,3),
// same category: D_obs = 1 + 1 = 2. Placing A's unit at offsets 0,1,2 gives
// 2, 0, 2 (mean 4/3); placing B's unit gives 0, 2, 4 (mean 2, the offset-2
// placement falls inside A's gap). D_exp = (4/3 + 2)/2 = 5/3 and
// alpha = 1 - 2/(5/3) = -0.2.
double alpha_u_review(int num_tokens, const std::vector<Proposition>& a,
                      const std::vector<Proposition>& b,
                      std::optional<PropType> only_type = std::nullopt);

AgreementReport agreement(const std::vector<AnnotatedReview>& a,
                          const std::vector<AnnotatedReview>& b);

// McNemar test on paired correctness. Exact two-sided binomial when
// b + c < 25, chi-squared with continuity correction otherwise.
double mcnemar(const std::vector<std::pair<bool, bool>>& paired);
double mcnemar_counts(long b, long c);

// Two-sided Welch's t-test with Satterthwaite degrees of freedom.
double welch_t(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

}  // namespace ampere
