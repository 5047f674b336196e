// crf.cpp -- linear-chain CRF inference, training, serialization.

#include "ampere/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "ampere/corpus.hpp"
#include "ampere/error.hpp"
#include "ampere/optim.hpp"

namespace ampere {

TrainConfig TrainConfig::defaults(Scheme scheme) {
  TrainConfig cfg;
  if (scheme == Scheme::BIO) {
    cfg.c1 = 0.0;
    cfg.c2 = 1.0;
  } else {
    cfg.c1 = 1.0;
    cfg.c2 = 0.01;
  }
  return cfg;
}

bool valid_start_label(Scheme scheme, int label) {
  if (scheme == Scheme::BIO) return label != 1;  // I
  if (label == 10) return true;                  // O
  return label % 2 == 0;                         // B-t
}

bool valid_transition(Scheme scheme, int from, int to) {
  if (scheme == Scheme::BIO) {
    return !(to == 1 && from == 2);  // O -> I
  }
  if (to == 10 || to % 2 == 0) return true;  // anything -> O or B-t
  int type = to / 2;
  return from == 2 * type || from == 2 * type + 1;  // B-t/I-t -> I-t
}

std::vector<std::vector<int>> CrfModel::encode(
    const std::vector<std::vector<std::string>>& features) const {
  std::vector<std::vector<int>> out(features.size());
  for (std::size_t t = 0; t < features.size(); ++t) {
    out[t].reserve(features[t].size());
    for (const std::string& f : features[t]) {
      int id = attr_id(f);
      if (id >= 0) out[t].push_back(id);
    }
  }
  return out;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Emission score matrix [n][L].
std::vector<double> emission_scores(const CrfModel& m, const std::vector<std::vector<int>>& attrs) {
  const int L = m.num_labels();
  std::vector<double> s(attrs.size() * L, 0.0);
  for (std::size_t t = 0; t < attrs.size(); ++t) {
    double* row = &s[t * L];
    for (int a : attrs[t]) {
      const double* w = &m.weights[static_cast<std::size_t>(a) * L];
      for (int l = 0; l < L; ++l) row[l] += w[l];
    }
  }
  return s;
}

// Scaled forward-backward pass. alpha rows are normalized to sum 1, the
// log-partition accumulates the scales; beta rows are normalized per row as
// well (their scale cancels in the renormalized marginals).
struct ForwardBackward {
  int n = 0, L = 0;
  std::vector<double> emit;      // [n][L] raw scores
  std::vector<double> rowmax;    // per-position emission max
  std::vector<double> expemit;   // exp(emit - rowmax)
  std::vector<double> trans;     // exp(w_trans - tmax)
  double tmax = 0.0;
  std::vector<double> alpha, beta;
  double log_z = 0.0;

  void run(const CrfModel& m, const std::vector<std::vector<int>>& attrs) {
    n = static_cast<int>(attrs.size());
    L = m.num_labels();
    emit = emission_scores(m, attrs);
    rowmax.resize(n);
    expemit.resize(emit.size());
    for (int t = 0; t < n; ++t) {
      double mx = emit[t * L];
      for (int l = 1; l < L; ++l) mx = std::max(mx, emit[t * L + l]);
      rowmax[t] = mx;
      for (int l = 0; l < L; ++l) expemit[t * L + l] = std::exp(emit[t * L + l] - mx);
    }
    trans.resize(static_cast<std::size_t>(L) * L);
    tmax = kNegInf;
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) tmax = std::max(tmax, m.trans_weight(i, j));
    }
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) trans[i * L + j] = std::exp(m.trans_weight(i, j) - tmax);
    }

    alpha.assign(static_cast<std::size_t>(n) * L, 0.0);
    log_z = 0.0;
    for (int l = 0; l < L; ++l) alpha[l] = expemit[l];
    log_z += normalize_row(&alpha[0]) + rowmax[0];
    for (int t = 1; t < n; ++t) {
      const double* prev = &alpha[(t - 1) * L];
      double* cur = &alpha[t * L];
      for (int j = 0; j < L; ++j) {
        double s = 0.0;
        for (int i = 0; i < L; ++i) s += prev[i] * trans[i * L + j];
        cur[j] = s * expemit[t * L + j];
      }
      log_z += normalize_row(cur) + rowmax[t] + tmax;
    }

    beta.assign(static_cast<std::size_t>(n) * L, 0.0);
    for (int l = 0; l < L; ++l) beta[(n - 1) * L + l] = 1.0;
    for (int t = n - 2; t >= 0; --t) {
      const double* next = &beta[(t + 1) * L];
      double* cur = &beta[t * L];
      for (int i = 0; i < L; ++i) {
        double s = 0.0;
        for (int j = 0; j < L; ++j) s += trans[i * L + j] * expemit[(t + 1) * L + j] * next[j];
        cur[i] = s;
      }
      normalize_row(cur);
    }
  }

  double normalize_row(double* row) {
    double sum = 0.0;
    for (int l = 0; l < L; ++l) sum += row[l];
    if (sum <= 0.0 || !std::isfinite(sum)) {
      throw NumericError("forward-backward scale collapsed (non-finite weights?)");
    }
    for (int l = 0; l < L; ++l) row[l] /= sum;
    return std::log(sum);
  }

  // Posterior P(y_t = l), renormalized per position.
  void unary_marginal(int t, double* out) const {
    double sum = 0.0;
    for (int l = 0; l < L; ++l) {
      out[l] = alpha[t * L + l] * beta[t * L + l];
      sum += out[l];
    }
    for (int l = 0; l < L; ++l) out[l] /= sum;
  }

  // Posterior P(y_{t-1} = i, y_t = j) for t >= 1, renormalized.
  void pairwise_marginal(int t, double* out) const {
    double sum = 0.0;
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        double v = alpha[(t - 1) * L + i] * trans[i * L + j] * expemit[t * L + j] *
                   beta[t * L + j];
        out[i * L + j] = v;
        sum += v;
      }
    }
    for (int k = 0; k < L * L; ++k) out[k] /= sum;
  }
};

}  // namespace

double log_partition(const CrfModel& model, const std::vector<std::vector<int>>& attrs) {
  if (attrs.empty()) throw DataError("log_partition: empty sequence");
  ForwardBackward fb;
  fb.run(model, attrs);
  return fb.log_z;
}

std::vector<std::vector<double>> posterior_marginals(const CrfModel& model,
                                                     const std::vector<std::vector<int>>& attrs) {
  if (attrs.empty()) throw DataError("posterior_marginals: empty sequence");
  ForwardBackward fb;
  fb.run(model, attrs);
  std::vector<std::vector<double>> out(fb.n, std::vector<double>(fb.L));
  for (int t = 0; t < fb.n; ++t) fb.unary_marginal(t, out[t].data());
  return out;
}

namespace {

// Per-sequence gradient contribution: sparse emission part plus dense
// transition part. Accumulation order is fixed by position, merge order by
// sorted attr id, so batch results do not depend on thread scheduling.
struct SequenceGrad {
  double nll = 0.0;
  std::vector<std::pair<int, std::vector<double>>> emit;  // sorted by attr id
  std::vector<double> trans;                              // L*L
};

SequenceGrad sequence_grad(const CrfModel& m, const EncodedSequence& seq) {
  const int L = m.num_labels();
  const int n = static_cast<int>(seq.attrs.size());
  ForwardBackward fb;
  fb.run(m, seq.attrs);

  SequenceGrad out;
  out.trans.assign(static_cast<std::size_t>(L) * L, 0.0);

  std::map<int, std::vector<double>> emit;  // ordered: deterministic merge
  std::vector<double> marg(L), pair(static_cast<std::size_t>(L) * L);
  double gold_score = 0.0;
  for (int t = 0; t < n; ++t) {
    fb.unary_marginal(t, marg.data());
    int y = seq.gold[t];
    for (int a : seq.attrs[t]) {
      auto [it, fresh] = emit.try_emplace(a);
      if (fresh) it->second.assign(L, 0.0);
      std::vector<double>& row = it->second;
      for (int l = 0; l < L; ++l) row[l] += marg[l];
      row[y] -= 1.0;
      gold_score += m.emit_weight(a, y);
    }
    if (t >= 1) {
      fb.pairwise_marginal(t, pair.data());
      for (int k = 0; k < L * L; ++k) out.trans[k] += pair[k];
      out.trans[seq.gold[t - 1] * L + y] -= 1.0;
      gold_score += m.trans_weight(seq.gold[t - 1], y);
    }
  }
  out.nll = fb.log_z - gold_score;
  out.emit.reserve(emit.size());
  for (auto& [a, row] : emit) out.emit.emplace_back(a, std::move(row));
  return out;
}

}  // namespace

double batch_nll_grad(const CrfModel& model, const std::vector<EncodedSequence>& batch,
                      double c2, std::vector<double>& grad, RunMode mode) {
  const int L = model.num_labels();
  const std::size_t trans_base = static_cast<std::size_t>(model.num_attrs()) * L;
  grad.assign(model.num_weights(), 0.0);

  double nll = 0.0;
  constexpr std::size_t kBlock = 64;
  std::vector<SequenceGrad> block(std::min(kBlock, batch.size()));
  for (std::size_t base = 0; base < batch.size(); base += kBlock) {
    std::size_t count = std::min(kBlock, batch.size() - base);
    parallel_for(count, mode, [&](std::size_t k) {
      block[k] = sequence_grad(model, batch[base + k]);
    });
    for (std::size_t k = 0; k < count; ++k) {
      nll += block[k].nll;
      for (const auto& [a, row] : block[k].emit) {
        double* g = &grad[static_cast<std::size_t>(a) * L];
        for (int l = 0; l < L; ++l) g[l] += row[l];
      }
      for (int k2 = 0; k2 < L * L; ++k2) grad[trans_base + k2] += block[k].trans[k2];
    }
  }

  if (c2 > 0.0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      sq += model.weights[i] * model.weights[i];
      grad[i] += c2 * model.weights[i];
    }
    nll += 0.5 * c2 * sq;
  }
  return nll;
}

std::vector<int> viterbi(const CrfModel& model, const std::vector<std::vector<int>>& attrs) {
  if (attrs.empty()) throw DataError("viterbi: empty sequence");
  const int L = model.num_labels();
  const int n = static_cast<int>(attrs.size());
  std::vector<double> score = emission_scores(model, attrs);
  std::vector<double> dp(static_cast<std::size_t>(n) * L, kNegInf);
  std::vector<int> bp(static_cast<std::size_t>(n) * L, -1);

  for (int l = 0; l < L; ++l) {
    if (valid_start_label(model.scheme, l)) dp[l] = score[l];
  }
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < L; ++j) {
      double best = kNegInf;
      int arg = -1;
      for (int i = 0; i < L; ++i) {
        if (!valid_transition(model.scheme, i, j)) continue;
        if (dp[(t - 1) * L + i] == kNegInf) continue;
        double v = dp[(t - 1) * L + i] + model.trans_weight(i, j);
        if (v > best) {  // strict: ties keep the lowest i
          best = v;
          arg = i;
        }
      }
      if (arg >= 0) {
        dp[t * L + j] = best + score[t * L + j];
        bp[t * L + j] = arg;
      }
    }
  }
  int last = -1;
  double best = kNegInf;
  for (int l = 0; l < L; ++l) {
    if (dp[(n - 1) * L + l] > best) {
      best = dp[(n - 1) * L + l];
      last = l;
    }
  }
  std::vector<int> path(n);
  path[n - 1] = last;
  for (int t = n - 1; t > 0; --t) path[t - 1] = bp[t * L + path[t]];
  return path;
}

namespace {

std::vector<EncodedSequence> encode_training_set(const std::vector<AnnotatedReview>& train,
                                                 Scheme scheme,
                                                 const FeatureTemplateSet& templates,
                                                 CrfModel& model) {
  const auto& labels = scheme_labels(scheme);
  std::unordered_map<std::string, int> label_id;
  for (std::size_t i = 0; i < labels.size(); ++i) label_id[labels[i]] = static_cast<int>(i);

  std::vector<EncodedSequence> out;
  out.reserve(train.size());
  for (const AnnotatedReview& a : train) {
    if (a.review.num_tokens() == 0) continue;
    EncodedSequence seq;
    auto features = templates.extract(a.review);
    seq.attrs.resize(features.size());
    for (std::size_t t = 0; t < features.size(); ++t) {
      for (const std::string& f : features[t]) {
        auto [it, fresh] = model.attr_index.try_emplace(f, model.num_attrs());
        if (fresh) model.attr_names.push_back(f);
        seq.attrs[t].push_back(it->second);
      }
    }
    TagSequence tags = to_tags(a, scheme);
    seq.gold.reserve(tags.labels.size());
    for (const std::string& l : tags.labels) seq.gold.push_back(label_id.at(l));
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace

CrfModel train_crf(const std::vector<AnnotatedReview>& train, Scheme scheme,
                   const FeatureTemplateSet& templates, const TrainConfig& config,
                   RunMode mode, TrainStats* stats, std::ostream* log) {
  if (train.empty()) throw DataError("train_crf: empty training set");
  CrfModel model;
  model.scheme = scheme;
  model.labels = scheme_labels(scheme);
  model.config = config;
  std::vector<EncodedSequence> data = encode_training_set(train, scheme, templates, model);
  if (data.empty()) throw DataError("train_crf: no non-empty training sequences");
  model.weights.assign(model.num_weights(), 0.0);

  auto smooth_fg = [&](const std::vector<double>& w, std::vector<double>& g) {
    model.weights = w;
    return batch_nll_grad(model, data, config.c2, g, mode);
  };

  OptimOptions opt;
  opt.c1 = config.c1;
  opt.max_iterations = config.max_iterations;
  opt.tolerance = config.tolerance;
  opt.log = log;
  std::vector<double> w = model.weights;
  OptimResult res = lbfgs_minimize(smooth_fg, w, opt);
  model.weights = w;
  if (stats) {
    stats->objective = res.objective;
    stats->iterations = res.iterations;
    stats->converged = res.converged;
    stats->stop_reason = res.stop_reason;
  }
  return model;
}

TagSequence tag_tokens(const CrfModel& model, const FeatureTemplateSet& templates,
                       const Review& review) {
  TagSequence tags;
  tags.scheme = model.scheme;
  if (review.num_tokens() == 0) return tags;
  auto attrs = model.encode(templates.extract(review));
  std::vector<int> path = viterbi(model, attrs);
  tags.labels.reserve(path.size());
  for (int l : path) tags.labels.push_back(model.labels[l]);
  return tags;
}

std::vector<Proposition> tag_review(const CrfModel& model, const FeatureTemplateSet& templates,
                                    const Review& review) {
  if (review.num_tokens() == 0) return {};
  return from_tags(tag_tokens(model, templates, review));
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_model(const CrfModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  const int L = model.num_labels();
  out << "ampere-crf v1\n";
  out << "scheme " << scheme_name(model.scheme) << "\n";
  out << "templates " << model.template_version << "\n";
  out << "config c1 " << format_double(model.config.c1) << " c2 "
      << format_double(model.config.c2) << " max_iterations " << model.config.max_iterations
      << " tolerance " << format_double(model.config.tolerance) << " seed "
      << model.config.seed << "\n";
  out << "labels " << L << "\n";
  for (const std::string& l : model.labels) out << l << "\n";
  out << "attrs " << model.num_attrs() << "\n";
  // sparse rows: attr name, then idx:weight pairs for nonzero entries
  for (int a = 0; a < model.num_attrs(); ++a) {
    out << model.attr_names[a];
    for (int l = 0; l < L; ++l) {
      double w = model.emit_weight(a, l);
      if (w != 0.0) out << " " << l << ":" << format_double(w);
    }
    out << "\n";
  }
  out << "transitions\n";
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      out << (j ? " " : "") << format_double(model.trans_weight(i, j));
    }
    out << "\n";
  }
  out << "end\n";
  if (!out) throw DataError("failed while writing model file: " + path);
}

CrfModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw DataError("model file truncated: " + path);
    return line;
  };
  if (next_line() != "ampere-crf v1") {
    throw DataError("unsupported model file version in " + path);
  }
  CrfModel model;
  {
    std::istringstream ss(next_line());
    std::string key, value;
    ss >> key >> value;
    if (key != "scheme") throw DataError("model file corrupt (scheme): " + path);
    model.scheme = parse_scheme(value);
  }
  {
    std::istringstream ss(next_line());
    std::string key;
    ss >> key >> model.template_version;
    if (key != "templates") throw DataError("model file corrupt (templates): " + path);
  }
  {
    std::istringstream ss(next_line());
    std::string key, k;
    ss >> key;
    if (key != "config") throw DataError("model file corrupt (config): " + path);
    while (ss >> k) {
      if (k == "c1") ss >> model.config.c1;
      else if (k == "c2") ss >> model.config.c2;
      else if (k == "max_iterations") ss >> model.config.max_iterations;
      else if (k == "tolerance") ss >> model.config.tolerance;
      else if (k == "seed") ss >> model.config.seed;
    }
  }
  int L = 0;
  {
    std::istringstream ss(next_line());
    std::string key;
    ss >> key >> L;
    if (key != "labels" || L <= 0) throw DataError("model file corrupt (labels): " + path);
  }
  for (int i = 0; i < L; ++i) model.labels.push_back(next_line());
  if (model.labels != scheme_labels(model.scheme)) {
    throw DataError("model file label set does not match its scheme: " + path);
  }
  int A = 0;
  {
    std::istringstream ss(next_line());
    std::string key;
    ss >> key >> A;
    if (key != "attrs" || A < 0) throw DataError("model file corrupt (attrs): " + path);
  }
  model.attr_names.reserve(A);
  model.weights.assign(static_cast<std::size_t>(A) * L + static_cast<std::size_t>(L) * L, 0.0);
  for (int a = 0; a < A; ++a) {
    std::istringstream ss(next_line());
    std::string name, entry;
    ss >> name;
    model.attr_names.push_back(name);
    model.attr_index[name] = a;
    while (ss >> entry) {
      std::size_t colon = entry.find(':');
      if (colon == std::string::npos) throw DataError("model file corrupt (weights): " + path);
      int l = std::stoi(entry.substr(0, colon));
      if (l < 0 || l >= L) throw DataError("model file corrupt (label index): " + path);
      model.weights[static_cast<std::size_t>(a) * L + l] = std::stod(entry.substr(colon + 1));
    }
  }
  if (next_line() != "transitions") throw DataError("model file corrupt (transitions): " + path);
  for (int i = 0; i < L; ++i) {
    std::istringstream ss(next_line());
    for (int j = 0; j < L; ++j) {
      if (!(ss >> model.weights[static_cast<std::size_t>(A) * L + i * L + j])) {
        throw DataError("model file corrupt (transition row): " + path);
      }
    }
  }
  if (next_line() != "end") throw DataError("model file truncated: " + path);
  return model;
}

}  // namespace ampere
