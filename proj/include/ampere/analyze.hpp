// analyze.hpp -- corpus-level analytics over typed propositions.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ampere/types.hpp"

namespace ampere {

enum class GroupBy { Venue, RatingBucket };

struct GroupStats {
  std::string group;
  int reviews = 0;
  double mean_props = 0.0;
  double sd_props = 0.0;
  double mean_words = 0.0;
  double sd_words = 0.0;
};

struct PropStatsReport {
  std::vector<GroupStats> groups;
  // pairwise Welch p-values on proposition counts, keyed (group_a, group_b)
  std::map<std::pair<std::string, std::string>, double> prop_count_p;
  std::map<std::pair<std::string, std::string>, double> word_count_p;
  std::vector<std::string> warnings;
};

PropStatsReport prop_stats(const std::vector<AnnotatedReview>& corpus, GroupBy group_by);

struct TypeDistribution {
  std::string group;
  long total = 0;
  std::array<double, kNumPropTypes> proportions{};  // sum to 1 per group
};

std::vector<TypeDistribution> type_distribution(const std::vector<AnnotatedReview>& corpus,
                                                std::optional<GroupBy> group_by);

// Share of reviews in each group containing at least one proposition of the
// given type.
std::map<std::string, double> share_with_type(const std::vector<AnnotatedReview>& corpus,
                                              GroupBy group_by, PropType type);

struct TransitionMatrix {
  // row-stochastic over PropType order; rows with zero transitions flagged
  std::array<std::array<double, kNumPropTypes>, kNumPropTypes> prob{};
  std::array<std::array<long, kNumPropTypes>, kNumPropTypes> counts{};
  std::array<long, kNumPropTypes> row_totals{};
  long total_transitions = 0;
};

// Adjacent-pair counts within each review, no cross-review transitions,
// NonArg included as a state.
TransitionMatrix transition_matrix(const std::vector<AnnotatedReview>& corpus);

// Dunning log-likelihood ratio for word w in type t against the other
// types: G2 over the 2x2 table (k1 of n1 vs k2 of n2). Returns exactly 0
// for identical rates.
double g2_statistic(long k1, long n1, long k2, long n2);

// chi-square(1df) critical value at the given significance level.
double chi2_critical(double alpha);

struct SalientWord {
  std::string word;
  double g2 = 0.0;
  long frequency = 0;  // in the (venue, type) subcorpus
};

struct SalientWordReport {
  double alpha = 0.001;
  double threshold = 0.0;  // chi2 critical value actually applied
  int min_freq = 5;
  // venue ("all" for the whole corpus) -> per type, frequency-ranked words
  std::map<std::string, std::array<std::vector<SalientWord>, kNumPropTypes>> by_venue;
  // words salient for a type in every venue present
  std::array<std::vector<std::string>, kNumPropTypes> shared;
  // venue -> per type, top words salient in exactly that venue
  std::map<std::string, std::array<std::vector<std::string>, kNumPropTypes>> unique;
};

SalientWordReport salient_words(const std::vector<AnnotatedReview>& corpus,
                                double alpha = 0.001, int min_freq = 5,
                                int top_unique = 5);

// Rating bucket label helper ("1".."5", "unrated").
std::string rating_bucket_label(const Review& review);

}  // namespace ampere
