// propcls.hpp -- proposition-level type classifiers over given segments.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ampere/lexicon.hpp"
#include "ampere/types.hpp"

namespace ampere {

// A proposition instance handed to a classifier: its tokens plus enough
// review context for positional features.
struct PropInstance {
  std::vector<Token> tokens;
  int index_in_review = 0;
  int props_in_review = 1;
};

PropInstance make_instance(const Review& review, Span span, int index, int count);

// Ordered type lexicons. Matching is case-insensitive on token boundaries,
// multiword phrases as token subsequences; the first type in order with a
// match wins, no match means NonArg.
struct TypeLexicons {
  // (type, phrases) in matching order: Reference, Quote, Request,
  // Evaluation, Fact.
  std::vector<std::pair<PropType, std::vector<std::string>>> entries;
  static TypeLexicons defaults();
};

PropType lexicon_classify(const PropInstance& prop, const TypeLexicons& lex);

// Majority classifier: constant output, most frequent training type, ties
// to the lowest type index.
struct MajorityClassifier {
  PropType mode = PropType::Evaluation;
  std::array<long, kNumPropTypes> counts{};
  static MajorityClassifier fit(const std::vector<PropType>& labels);
  PropType classify() const { return mode; }
};

// Feature families for proposition classification (namespaced strings):
//   u= unigram, b= bigram, first=, last=, conn=, special=, len= bucket,
//   rpos= position-of-proposition bucket, q= question mark, quo= quote mark.
std::vector<std::string> extract_prop_features(const PropInstance& prop,
                                               const ConnectiveLexicon* connectives);

// One-vs-rest 2x2 chi-squared statistic; the score of a feature is the max
// over classes. Returns 0 exactly when the feature's rate is identical
// across classes (integer cross-product test).
double chi2_statistic(long with_feature_in_class, long with_feature_off_class,
                      long in_class_total, long off_class_total);

// Top-k features by score, ties by lexicographic feature string. Returns
// all features (and warns via the optional stream) when fewer than k exist.
std::vector<std::string> chi2_select(const std::vector<std::vector<std::string>>& features,
                                     const std::vector<PropType>& labels, int k,
                                     std::ostream* warn = nullptr);

struct LinearModel {
  std::vector<std::string> vocab;
  std::unordered_map<std::string, int> vocab_index;
  std::vector<int> feature_group;  // vocab index -> group id (template family)
  std::vector<std::string> group_names;
  // weights[class][feature], bias per class
  std::array<std::vector<double>, kNumPropTypes> weights;
  std::array<double, kNumPropTypes> bias{};
  double lambda_group = 0.001;
  std::uint64_t seed = 42;

  PropType classify(const std::vector<std::string>& features) const;
};

// prox of tau * |v|_2: shrink toward zero, exactly zero when |v| <= tau.
void group_soft_threshold(std::span<double> v, double tau);

struct LinearTrainStats {
  std::vector<double> epoch_objectives;  // non-increasing within 1e-6
  double objective = 0.0;
};

// Squared hinge one-vs-rest with a group-lasso penalty over feature
// families, minimized by proximal gradient with backtracking. Deterministic.
LinearModel train_linear(const std::vector<std::vector<std::string>>& features,
                         const std::vector<PropType>& labels,
                         const std::vector<std::string>& vocab,
                         double lambda_group = 0.001, int epochs = 200,
                         std::uint64_t seed = 42, LinearTrainStats* stats = nullptr);

void save_linear_model(const LinearModel& model, const std::string& path);
LinearModel load_linear_model(const std::string& path);

}  // namespace ampere
