// crf.hpp -- linear-chain conditional random field: regularized maximum
// likelihood training and Viterbi decoding over BIO / joint BI-type schemes.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ampere/crf_features.hpp"
#include "ampere/parallel.hpp"
#include "ampere/types.hpp"

namespace ampere {

struct TrainConfig {
  double c1 = 0.0;        // L1 coefficient
  double c2 = 1.0;        // L2 coefficient
  int max_iterations = 200;
  double tolerance = 1e-5;
  std::uint64_t seed = 42;

  // Tuned defaults: segmentation (c1=0, c2=1), joint (c1=1, c2=0.01).
  static TrainConfig defaults(Scheme scheme);
};

// Sequence validity rules shared by decoding and tests. An I label may not
// open a sequence or follow O; I-t may not follow B-u/I-u with u != t.
bool valid_start_label(Scheme scheme, int label);
bool valid_transition(Scheme scheme, int from, int to);

class CrfModel {
 public:
  Scheme scheme = Scheme::BIO;
  std::vector<std::string> labels;
  std::vector<std::string> attr_names;
  std::unordered_map<std::string, int> attr_index;
  // Emission weights [attr][label] followed by transition weights
  // [from][to], one flat parameter vector.
  std::vector<double> weights;
  std::string template_version = FeatureTemplateSet::kVersion;
  TrainConfig config;

  int num_labels() const { return static_cast<int>(labels.size()); }
  int num_attrs() const { return static_cast<int>(attr_names.size()); }
  std::size_t num_weights() const {
    return static_cast<std::size_t>(num_attrs()) * num_labels() +
           static_cast<std::size_t>(num_labels()) * num_labels();
  }
  double emit_weight(int attr, int label) const {
    return weights[static_cast<std::size_t>(attr) * num_labels() + label];
  }
  double trans_weight(int from, int to) const {
    return weights[static_cast<std::size_t>(num_attrs()) * num_labels() +
                   static_cast<std::size_t>(from) * num_labels() + to];
  }

  int attr_id(const std::string& name) const {
    auto it = attr_index.find(name);
    return it == attr_index.end() ? -1 : it->second;
  }

  // Feature ids per position; unknown features are dropped.
  std::vector<std::vector<int>> encode(const std::vector<std::vector<std::string>>& features) const;
};

// A training sequence after feature interning.
struct EncodedSequence {
  std::vector<std::vector<int>> attrs;  // per position
  std::vector<int> gold;                // label ids; empty when unlabeled
};

// log sum over all |L|^n label sequences of exp(score), stable via scaled
// forward recursion.
double log_partition(const CrfModel& model, const std::vector<std::vector<int>>& attrs);

// Per-position posterior marginals, rows sum to 1.
std::vector<std::vector<double>> posterior_marginals(const CrfModel& model,
                                                     const std::vector<std::vector<int>>& attrs);

// Smooth training objective sum(logZ - gold score) + c2/2 |w|^2 and its
// gradient, over a batch. The L1 term is the optimizer's business. The
// gradient buffer must be sized model.num_weights(); it is overwritten.
// Serial and parallel modes produce bit-identical results (per-sequence map,
// index-ordered reduce).
double batch_nll_grad(const CrfModel& model, const std::vector<EncodedSequence>& batch,
                      double c2, std::vector<double>& grad,
                      RunMode mode = RunMode::Parallel);

// Highest-scoring label sequence subject to scheme validity; forbidden
// transitions are masked with -inf. Ties break toward the lowest label index.
std::vector<int> viterbi(const CrfModel& model, const std::vector<std::vector<int>>& attrs);

struct TrainStats {
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

CrfModel train_crf(const std::vector<AnnotatedReview>& train, Scheme scheme,
                   const FeatureTemplateSet& templates, const TrainConfig& config,
                   RunMode mode = RunMode::Parallel, TrainStats* stats = nullptr,
                   std::ostream* log = nullptr);

TagSequence tag_tokens(const CrfModel& model, const FeatureTemplateSet& templates,
                       const Review& review);
std::vector<Proposition> tag_review(const CrfModel& model, const FeatureTemplateSet& templates,
                                    const Review& review);

// Text container, bit-exact round trip ("%.17g" doubles), version checked.
void save_model(const CrfModel& model, const std::string& path);
CrfModel load_model(const std::string& path);

}  // namespace ampere
