// propcls.cpp

#include "ampere/propcls.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "ampere/error.hpp"
#include "ampere/text.hpp"

namespace ampere {

PropInstance make_instance(const Review& review, Span span, int index, int count) {
  PropInstance inst;
  inst.tokens.assign(review.tokens.begin() + span.start, review.tokens.begin() + span.end);
  inst.index_in_review = index;
  inst.props_in_review = std::max(1, count);
  return inst;
}

TypeLexicons TypeLexicons::defaults() {
  TypeLexicons lex;
  lex.entries = {
      {PropType::Reference, {"<URL>", "<CIT>"}},
      {PropType::Quote, {"``", "''", "'", "\"", "“", "”", "‘", "’"}},
      {PropType::Request, {"should", "would be nice", "why", "please", "would like to", "need"}},
      {PropType::Evaluation,
       {"highly", "very", "unclear", "clear", "interesting", "novel", "well", "important",
        "similar", "clearly", "quite", "good"}},
      {PropType::Fact,
       {"author", "authors", "propose", "present", "method", "parameters", "example",
        "dataset", "same", "incorrect", "correct"}},
  };
  return lex;
}

namespace {

bool phrase_matches(const std::vector<Token>& tokens, const std::vector<std::string>& words) {
  if (words.empty() || words.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
    bool ok = true;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (lowercase(tokens[start + k].surface) != words[k]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

std::vector<std::string> phrase_words(const std::string& phrase) {
  std::istringstream ss(phrase);
  std::vector<std::string> words;
  std::string w;
  while (ss >> w) words.push_back(lowercase(w));
  return words;
}

}  // namespace

PropType lexicon_classify(const PropInstance& prop, const TypeLexicons& lex) {
  for (const auto& [type, phrases] : lex.entries) {
    for (const std::string& phrase : phrases) {
      if (phrase_matches(prop.tokens, phrase_words(phrase))) return type;
    }
  }
  return PropType::NonArg;
}

MajorityClassifier MajorityClassifier::fit(const std::vector<PropType>& labels) {
  if (labels.empty()) throw DataError("majority classifier: empty training set");
  MajorityClassifier m;
  for (PropType t : labels) ++m.counts[static_cast<int>(t)];
  int best = 0;
  for (int t = 1; t < kNumPropTypes; ++t) {
    if (m.counts[t] > m.counts[best]) best = t;  // ties keep the lowest index
  }
  m.mode = static_cast<PropType>(best);
  return m;
}

std::vector<std::string> extract_prop_features(const PropInstance& prop,
                                               const ConnectiveLexicon* connectives) {
  std::set<std::string> out;  // dedup; binary presence features
  const auto& toks = prop.tokens;
  int n = static_cast<int>(toks.size());
  for (int i = 0; i < n; ++i) {
    std::string lower = lowercase(toks[i].surface);
    out.insert("u=" + lower);
    if (i + 1 < n) out.insert("b=" + lower + "_" + lowercase(toks[i + 1].surface));
    if (toks[i].special_kind) {
      out.insert(std::string("special=") + special_kind_name(*toks[i].special_kind));
    }
    if (toks[i].surface == "?") out.insert("q=true");
    if (toks[i].surface == "``" || toks[i].surface == "''" || toks[i].surface == "\"" ||
        toks[i].surface == "'") {
      out.insert("quo=true");
    }
    if (connectives && connectives->match_at(toks, i) > 0) out.insert("conn=true");
  }
  if (n > 0) {
    out.insert("first=" + lowercase(toks.front().surface));
    out.insert("last=" + lowercase(toks.back().surface));
  }
  const char* len_bucket = n <= 3 ? "1-3" : n <= 7 ? "4-7" : n <= 15 ? "8-15"
                           : n <= 30 ? "16-30" : "31+";
  out.insert(std::string("len=") + len_bucket);
  int third = prop.index_in_review * 3 / prop.props_in_review;
  out.insert(std::string("rpos=") + (third == 0 ? "first" : third == 1 ? "mid" : "last"));
  return {out.begin(), out.end()};
}

double chi2_statistic(long k1, long k2, long n1, long n2) {
  // 2x2 table: rows class/off-class, columns with/without the feature.
  long a = k1, b = n1 - k1, c = k2, d = n2 - k2;
  long n = n1 + n2;
  if (n == 0) return 0.0;
  // identical rates: exact integer cross-product test
  if (a * static_cast<long long>(d) == b * static_cast<long long>(c)) return 0.0;
  double row1 = static_cast<double>(a + b), row2 = static_cast<double>(c + d);
  double col1 = static_cast<double>(a + c), col2 = static_cast<double>(b + d);
  if (row1 == 0 || row2 == 0 || col1 == 0 || col2 == 0) return 0.0;
  double det = static_cast<double>(a) * d - static_cast<double>(b) * c;
  return static_cast<double>(n) * det * det / (row1 * row2 * col1 * col2);
}

std::vector<std::string> chi2_select(const std::vector<std::vector<std::string>>& features,
                                     const std::vector<PropType>& labels, int k,
                                     std::ostream* warn) {
  if (features.size() != labels.size()) throw DataError("chi2_select: size mismatch");
  long n_total = static_cast<long>(features.size());
  std::array<long, kNumPropTypes> class_total{};
  for (PropType t : labels) ++class_total[static_cast<int>(t)];

  // presence counts per (feature, class); duplicates within one proposition
  // are already deduplicated by extraction, but guard anyway
  std::map<std::string, std::array<long, kNumPropTypes>> presence;
  for (std::size_t i = 0; i < features.size(); ++i) {
    std::set<std::string> uniq(features[i].begin(), features[i].end());
    for (const std::string& f : uniq) {
      presence.try_emplace(f)
          .first->second[static_cast<int>(labels[i])]++;
    }
  }

  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(presence.size());
  for (const auto& [feat, per_class] : presence) {
    long total_with = 0;
    for (long c : per_class) total_with += c;
    double best = 0.0;
    for (int t = 0; t < kNumPropTypes; ++t) {
      if (class_total[t] == 0) continue;
      double s = chi2_statistic(per_class[t], total_with - per_class[t], class_total[t],
                                n_total - class_total[t]);
      best = std::max(best, s);
    }
    scored.push_back({best, feat});
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  if (static_cast<int>(scored.size()) < k && warn) {
    (*warn) << "chi2_select: only " << scored.size() << " distinct features for k=" << k
            << "\n";
  }
  std::vector<std::string> vocab;
  for (int i = 0; i < std::min<int>(k, static_cast<int>(scored.size())); ++i) {
    vocab.push_back(scored[i].second);
  }
  return vocab;
}

PropType LinearModel::classify(const std::vector<std::string>& features) const {
  double best = -1e300;
  int arg = 0;
  for (int c = 0; c < kNumPropTypes; ++c) {
    double s = bias[c];
    for (const std::string& f : features) {
      auto it = vocab_index.find(f);
      if (it != vocab_index.end()) s += weights[c][it->second];
    }
    if (s > best) {  // strict: ties keep the lowest class index
      best = s;
      arg = c;
    }
  }
  return static_cast<PropType>(arg);
}

void group_soft_threshold(std::span<double> v, double tau) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm <= tau) {
    for (double& x : v) x = 0.0;
    return;
  }
  double scale = 1.0 - tau / norm;
  for (double& x : v) x *= scale;
}

namespace {

std::string family_of(const std::string& feature) {
  std::size_t eq = feature.find('=');
  return eq == std::string::npos ? feature : feature.substr(0, eq);
}

}  // namespace

LinearModel train_linear(const std::vector<std::vector<std::string>>& features,
                         const std::vector<PropType>& labels,
                         const std::vector<std::string>& vocab,
                         double lambda_group, int epochs, std::uint64_t seed,
                         LinearTrainStats* stats) {
  if (features.empty() || features.size() != labels.size()) {
    throw DataError("train_linear: empty or mismatched training set");
  }
  LinearModel model;
  model.vocab = vocab;
  model.lambda_group = lambda_group;
  model.seed = seed;
  for (std::size_t i = 0; i < vocab.size(); ++i) model.vocab_index[vocab[i]] = static_cast<int>(i);

  // groups = template families, in first-appearance order over the vocab
  std::map<std::string, int> group_of;
  model.feature_group.resize(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    std::string fam = family_of(vocab[i]);
    auto [it, fresh] = group_of.try_emplace(fam, static_cast<int>(group_of.size()));
    if (fresh) model.group_names.push_back(fam);
    model.feature_group[i] = it->second;
  }
  int n_groups = static_cast<int>(model.group_names.size());
  std::vector<std::vector<int>> group_members(n_groups);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    group_members[model.feature_group[i]].push_back(static_cast<int>(i));
  }

  // sparse design matrix
  const long n = static_cast<long>(features.size());
  std::vector<std::vector<int>> rows(n);
  for (long i = 0; i < n; ++i) {
    std::set<int> idx;
    for (const std::string& f : features[i]) {
      auto it = model.vocab_index.find(f);
      if (it != model.vocab_index.end()) idx.insert(it->second);
    }
    rows[i].assign(idx.begin(), idx.end());
  }

  const std::size_t dim = vocab.size();
  double total_objective = 0.0;
  if (stats) stats->epoch_objectives.assign(epochs, 0.0);

  for (int cls = 0; cls < kNumPropTypes; ++cls) {
    std::vector<double> y(n);
    for (long i = 0; i < n; ++i) y[i] = labels[i] == static_cast<PropType>(cls) ? 1.0 : -1.0;

    std::vector<double> w(dim, 0.0);
    double b = 0.0;

    auto eval = [&](const std::vector<double>& wv, double bv, std::vector<double>* grad,
                    double* gb) {
      if (grad) grad->assign(dim, 0.0);
      if (gb) *gb = 0.0;
      double loss = 0.0;
      for (long i = 0; i < n; ++i) {
        double score = bv;
        for (int j : rows[i]) score += wv[j];
        double margin = 1.0 - y[i] * score;
        if (margin > 0.0) {
          loss += margin * margin;
          if (grad) {
            double coeff = -2.0 * margin * y[i];
            for (int j : rows[i]) (*grad)[j] += coeff;
            *gb += coeff;
          }
        }
      }
      return loss;
    };

    auto penalty = [&](const std::vector<double>& wv) {
      double p = 0.0;
      for (const auto& members : group_members) {
        double norm = 0.0;
        for (int j : members) norm += wv[j] * wv[j];
        p += std::sqrt(norm);
      }
      return lambda_group * p;
    };

    std::vector<double> g(dim), w_try(dim), scratch;
    double gb = 0.0;
    double objective = eval(w, b, &g, &gb) + penalty(w);
    double step = 1.0;

    for (int epoch = 0; epoch < epochs; ++epoch) {
      bool accepted = false;
      for (int back = 0; back < 60 && !accepted; ++back) {
        // gradient step then per-group prox
        for (std::size_t j = 0; j < dim; ++j) w_try[j] = w[j] - step * g[j];
        double b_try = b - step * gb;
        for (const auto& members : group_members) {
          scratch.resize(members.size());
          for (std::size_t k = 0; k < members.size(); ++k) scratch[k] = w_try[members[k]];
          group_soft_threshold(scratch, lambda_group * step);
          for (std::size_t k = 0; k < members.size(); ++k) w_try[members[k]] = scratch[k];
        }
        double loss_try = eval(w_try, b_try, nullptr, nullptr);
        double obj_try = loss_try + penalty(w_try);
        if (obj_try <= objective + 1e-12) {
          w.swap(w_try);
          b = b_try;
          objective = obj_try;
          eval(w, b, &g, &gb);  // refresh gradient at the accepted point
          accepted = true;
          step *= 1.3;  // gentle growth after success
        } else {
          step *= 0.5;
        }
      }
      if (stats) stats->epoch_objectives[epoch] += objective;
      if (!accepted) {
        // stationary at backtracking resolution; carry the final value so the
        // summed trajectory stays monotone
        if (stats) {
          for (int e = epoch + 1; e < epochs; ++e) stats->epoch_objectives[e] += objective;
        }
        break;
      }
    }
    if (!std::isfinite(objective)) throw NumericError("linear training objective diverged");

    model.weights[cls] = std::move(w);
    model.bias[cls] = b;
    total_objective += objective;
  }
  if (stats) stats->objective = total_objective;
  return model;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_linear_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  out << "ampere-linear v1\n";
  out << "lambda_group " << format_double(model.lambda_group) << " seed " << model.seed << "\n";
  out << "features " << model.vocab.size() << "\n";
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    out << model.vocab[i] << " " << model.feature_group[i];
    for (int c = 0; c < kNumPropTypes; ++c) {
      out << " " << format_double(model.weights[c][i]);
    }
    out << "\n";
  }
  out << "bias";
  for (int c = 0; c < kNumPropTypes; ++c) out << " " << format_double(model.bias[c]);
  out << "\n";
  out << "groups " << model.group_names.size() << "\n";
  for (const std::string& g : model.group_names) out << g << "\n";
  out << "end\n";
  if (!out) throw DataError("failed while writing model file: " + path);
}

LinearModel load_linear_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw DataError("model file truncated: " + path);
    return line;
  };
  if (next_line() != "ampere-linear v1") {
    throw DataError("unsupported model file version in " + path);
  }
  LinearModel model;
  {
    std::istringstream ss(next_line());
    std::string k;
    while (ss >> k) {
      if (k == "lambda_group") ss >> model.lambda_group;
      else if (k == "seed") ss >> model.seed;
    }
  }
  std::size_t n_features = 0;
  {
    std::istringstream ss(next_line());
    std::string key;
    ss >> key >> n_features;
    if (key != "features") throw DataError("model file corrupt (features): " + path);
  }
  for (int c = 0; c < kNumPropTypes; ++c) model.weights[c].assign(n_features, 0.0);
  model.feature_group.assign(n_features, 0);
  for (std::size_t i = 0; i < n_features; ++i) {
    std::istringstream ss(next_line());
    std::string name;
    ss >> name;
    model.vocab.push_back(name);
    model.vocab_index[name] = static_cast<int>(i);
    if (!(ss >> model.feature_group[i])) throw DataError("model file corrupt (group): " + path);
    for (int c = 0; c < kNumPropTypes; ++c) {
      if (!(ss >> model.weights[c][i])) throw DataError("model file corrupt (weight): " + path);
    }
  }
  {
    std::istringstream ss(next_line());
    std::string key;
    ss >> key;
    if (key != "bias") throw DataError("model file corrupt (bias): " + path);
    for (int c = 0; c < kNumPropTypes; ++c) ss >> model.bias[c];
  }
  std::size_t n_groups = 0;
  {
    std::istringstream ss(next_line());
    std::string key;
    ss >> key >> n_groups;
    if (key != "groups") throw DataError("model file corrupt (groups): " + path);
  }
  for (std::size_t i = 0; i < n_groups; ++i) model.group_names.push_back(next_line());
  if (next_line() != "end") throw DataError("model file truncated: " + path);
  return model;
}

}  // namespace ampere
