// metrics.cpp

#include "ampere/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ampere/corpus.hpp"
#include "ampere/error.hpp"
#include "ampere/parallel.hpp"

namespace ampere {

PrfRow make_prf(long matched, long predicted, long gold) {
  PrfRow r;
  r.matched = matched;
  r.predicted = predicted;
  r.gold = gold;
  r.precision = predicted > 0 ? static_cast<double>(matched) / predicted : 0.0;
  r.recall = gold > 0 ? static_cast<double>(matched) / gold : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace {

void check_ranges(const std::vector<std::vector<Proposition>>& gold,
                  const std::vector<int>& token_counts) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const Proposition& p : gold[i]) {
      if (p.span.start < 0 || p.span.end > token_counts[i]) {
        throw DataError("gold span [" + std::to_string(p.span.start) + "," +
                        std::to_string(p.span.end) + ") outside review of " +
                        std::to_string(token_counts[i]) + " tokens");
      }
    }
  }
}

}  // namespace

MetricsReport seg_prf(const std::vector<std::vector<Span>>& pred,
                      const std::vector<std::vector<Proposition>>& gold,
                      const std::vector<int>& token_counts,
                      const PrfOptions& opts) {
  if (pred.size() != gold.size() || gold.size() != token_counts.size()) {
    throw DataError("seg_prf: review count mismatch");
  }
  check_ranges(gold, token_counts);
  long matched = 0, n_pred = 0, n_gold = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::set<std::pair<int, int>> gold_spans;
    for (const Proposition& p : gold[i]) {
      if (!opts.include_nonarg && p.type == PropType::NonArg) continue;
      gold_spans.insert({p.span.start, p.span.end});
    }
    n_gold += static_cast<long>(gold_spans.size());
    for (const Span& s : pred[i]) {
      if (s.start < 0 || s.end > token_counts[i]) {
        throw DataError("predicted span outside review token range");
      }
      ++n_pred;
      if (gold_spans.count({s.start, s.end}) > 0) ++matched;
    }
  }
  MetricsReport rep;
  rep.overall = make_prf(matched, n_pred, n_gold);
  return rep;
}

MetricsReport joint_prf(const std::vector<std::vector<Proposition>>& pred,
                        const std::vector<std::vector<Proposition>>& gold,
                        const std::vector<int>& token_counts,
                        const PrfOptions& opts) {
  if (pred.size() != gold.size() || gold.size() != token_counts.size()) {
    throw DataError("joint_prf: review count mismatch");
  }
  check_ranges(gold, token_counts);
  check_ranges(pred, token_counts);

  auto keep = [&](const Proposition& p) {
    return opts.include_nonarg || p.type != PropType::NonArg;
  };

  long matched = 0, n_pred = 0, n_gold = 0;
  std::array<long, kNumPropTypes> t_matched{}, t_pred{}, t_gold{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::set<std::tuple<int, int, int>> gold_set;
    for (const Proposition& p : gold[i]) {
      if (!keep(p)) continue;
      gold_set.insert({p.span.start, p.span.end, static_cast<int>(p.type)});
      ++n_gold;
      ++t_gold[static_cast<int>(p.type)];
    }
    for (const Proposition& p : pred[i]) {
      if (!keep(p)) continue;
      ++n_pred;
      ++t_pred[static_cast<int>(p.type)];
      if (gold_set.count({p.span.start, p.span.end, static_cast<int>(p.type)}) > 0) {
        ++matched;
        ++t_matched[static_cast<int>(p.type)];
      }
    }
  }
  MetricsReport rep;
  rep.overall = make_prf(matched, n_pred, n_gold);
  for (int t = 0; t < kNumPropTypes; ++t) {
    rep.per_type[t] = make_prf(t_matched[t], t_pred[t], t_gold[t]);
  }
  return rep;
}

double token_kappa(const std::vector<TagSequence>& a, const std::vector<TagSequence>& b) {
  if (a.size() != b.size()) throw DataError("token_kappa: sequence count mismatch");
  std::map<std::string, long> ma, mb;
  long agree = 0, total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].labels.size() != b[i].labels.size()) {
      throw DataError("token_kappa: length mismatch at review " + std::to_string(i));
    }
    for (std::size_t t = 0; t < a[i].labels.size(); ++t) {
      ++ma[a[i].labels[t]];
      ++mb[b[i].labels[t]];
      if (a[i].labels[t] == b[i].labels[t]) ++agree;
      ++total;
    }
  }
  if (total == 0) throw DataError("token_kappa: no tokens");
  double po = static_cast<double>(agree) / total;
  double pe = 0.0;
  for (const auto& [label, ca] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) {
      pe += (static_cast<double>(ca) / total) * (static_cast<double>(it->second) / total);
    }
  }
  if (1.0 - pe < 1e-12) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

namespace {

std::optional<double> kappa_from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  if (pairs.empty()) return std::nullopt;
  std::array<long, kNumPropTypes> ma{}, mb{};
  long agree = 0;
  for (auto [x, y] : pairs) {
    ++ma[x];
    ++mb[y];
    if (x == y) ++agree;
  }
  long total = static_cast<long>(pairs.size());
  double po = static_cast<double>(agree) / total;
  double pe = 0.0;
  for (int t = 0; t < kNumPropTypes; ++t) {
    pe += (static_cast<double>(ma[t]) / total) * (static_cast<double>(mb[t]) / total);
  }
  if (1.0 - pe < 1e-12) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

std::vector<std::pair<int, int>> matched_type_pairs(const std::vector<AnnotatedReview>& a,
                                                    const std::vector<AnnotatedReview>& b) {
  if (a.size() != b.size()) throw DataError("matched_segment_kappa: corpus size mismatch");
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::map<std::pair<int, int>, PropType> bspans;
    for (const Proposition& p : b[i].props) bspans[{p.span.start, p.span.end}] = p.type;
    for (const Proposition& p : a[i].props) {
      auto it = bspans.find({p.span.start, p.span.end});
      if (it != bspans.end()) {
        pairs.push_back({static_cast<int>(p.type), static_cast<int>(it->second)});
      }
    }
  }
  return pairs;
}

}  // namespace

std::optional<double> matched_segment_kappa(const std::vector<AnnotatedReview>& a,
                                            const std::vector<AnnotatedReview>& b) {
  return kappa_from_pairs(matched_type_pairs(a, b));
}

namespace {

struct Section {
  int start, end;
  int category;  // -1 = gap
  int length() const { return end - start; }
};

std::vector<Section> to_sections(int n, const std::vector<Proposition>& props,
                                 std::optional<PropType> only_type) {
  std::vector<Section> sections;
  int cursor = 0;
  for (const Proposition& p : props) {
    bool counts = !only_type || p.type == *only_type;
    if (p.span.start > cursor) sections.push_back({cursor, p.span.start, -1});
    sections.push_back({p.span.start, p.span.end, counts ? static_cast<int>(p.type) : -1});
    cursor = p.span.end;
  }
  if (cursor < n) sections.push_back({cursor, n, -1});
  // merge adjacent gaps
  std::vector<Section> merged;
  for (const Section& s : sections) {
    if (!merged.empty() && merged.back().category == -1 && s.category == -1) {
      merged.back().end = s.end;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

double pair_delta2(const Section& u, const Section& v) {
  int o = std::min(u.end, v.end) - std::max(u.start, v.start);
  if (o <= 0) return 0.0;
  bool u_unit = u.category >= 0, v_unit = v.category >= 0;
  if (u_unit && v_unit) {
    if (u.category == v.category) {
      double du = u.length() - o, dv = v.length() - o;
      return du * du + dv * dv;
    }
    return static_cast<double>(u.length()) * u.length() +
           static_cast<double>(v.length()) * v.length();
  }
  if (u_unit && !v_unit && u.start >= v.start && u.end <= v.end) {
    return static_cast<double>(u.length()) * u.length();
  }
  if (v_unit && !u_unit && v.start >= u.start && v.end <= u.end) {
    return static_cast<double>(v.length()) * v.length();
  }
  return 0.0;
}

double observed_disagreement(const std::vector<Section>& a, const std::vector<Section>& b) {
  double d = 0.0;
  for (const Section& u : a) {
    for (const Section& v : b) d += pair_delta2(u, v);
  }
  return d;
}

// Exact mean of the delta^2 sum for one unit placed at every offset of the
// continuum against the other annotator's sections.
double expected_for_unit(int n, int len, int category, const std::vector<Section>& other) {
  int placements = n - len + 1;
  if (placements <= 0) return 0.0;
  double sum = 0.0;
  for (int off = 0; off < placements; ++off) {
    Section u{off, off + len, category};
    for (const Section& v : other) sum += pair_delta2(u, v);
  }
  return sum / placements;
}

}  // namespace

double alpha_u_review(int num_tokens, const std::vector<Proposition>& a,
                      const std::vector<Proposition>& b,
                      std::optional<PropType> only_type) {
  if (num_tokens <= 0) throw DataError("alpha_u: empty continuum");
  auto sa = to_sections(num_tokens, a, only_type);
  auto sb = to_sections(num_tokens, b, only_type);
  double d_obs = observed_disagreement(sa, sb);

  double exp_sum = 0.0;
  int units = 0;
  for (const Section& u : sa) {
    if (u.category < 0) continue;
    exp_sum += expected_for_unit(num_tokens, u.length(), u.category, sb);
    ++units;
  }
  for (const Section& v : sb) {
    if (v.category < 0) continue;
    exp_sum += expected_for_unit(num_tokens, v.length(), v.category, sa);
    ++units;
  }
  if (units == 0) return 1.0;  // neither annotator marked anything
  if (exp_sum <= 0.0) return d_obs <= 0.0 ? 1.0 : 0.0;
  // exp_sum re-counts every unit-unit pair from both sides, so the chance
  // level matching D_obs's single-counted pairs is exp_sum / 2. The
  // coefficient is clipped to [-1, 1].
  double alpha = 1.0 - 2.0 * d_obs / exp_sum;
  return std::clamp(alpha, -1.0, 1.0);
}

AgreementReport agreement(const std::vector<AnnotatedReview>& a,
                          const std::vector<AnnotatedReview>& b) {
  if (a.size() != b.size()) throw DataError("agreement: corpus size mismatch");
  AgreementReport rep;
  std::vector<TagSequence> ta, tb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ta.push_back(to_tags(a[i], Scheme::BIO));
    tb.push_back(to_tags(b[i], Scheme::BIO));
  }
  rep.token_kappa = token_kappa(ta, tb);
  rep.type_kappa = matched_segment_kappa(a, b);

  // Per-review alphas are independent; compute in parallel, reduce in index
  // order.
  struct ReviewAlpha {
    bool valid = false;
    double overall = 0.0;
    std::array<std::optional<double>, kNumPropTypes> per_type{};
  };
  std::vector<ReviewAlpha> rows(a.size());
  parallel_for(a.size(), RunMode::Parallel, [&](std::size_t i) {
    int n = a[i].review.num_tokens();
    if (n == 0) return;  // degenerate review, skipped
    rows[i].valid = true;
    rows[i].overall = alpha_u_review(n, a[i].props, b[i].props);
    for (int t = 0; t < kNumPropTypes; ++t) {
      PropType ty = static_cast<PropType>(t);
      bool present = false;
      for (const auto& p : a[i].props) present |= p.type == ty;
      for (const auto& p : b[i].props) present |= p.type == ty;
      if (!present) continue;
      rows[i].per_type[t] = alpha_u_review(n, a[i].props, b[i].props, ty);
    }
  });
  double alpha_sum = 0.0;
  int alpha_n = 0;
  std::array<double, kNumPropTypes> type_sum{};
  std::array<int, kNumPropTypes> type_n{};
  for (const ReviewAlpha& row : rows) {
    if (!row.valid) continue;
    alpha_sum += row.overall;
    ++alpha_n;
    for (int t = 0; t < kNumPropTypes; ++t) {
      if (row.per_type[t]) {
        type_sum[t] += *row.per_type[t];
        ++type_n[t];
      }
    }
  }
  rep.reviews = alpha_n;
  rep.alpha_u = alpha_n > 0 ? alpha_sum / alpha_n : 0.0;
  for (int t = 0; t < kNumPropTypes; ++t) {
    if (type_n[t] > 0) rep.alpha_u_per_type[t] = type_sum[t] / type_n[t];
  }
  // per-type kappa over matched segments, one-vs-rest
  auto pairs = matched_type_pairs(a, b);
  for (int t = 0; t < kNumPropTypes; ++t) {
    std::vector<std::pair<int, int>> binary;
    bool any = false;
    for (auto [x, y] : pairs) {
      binary.push_back({x == t ? 1 : 0, y == t ? 1 : 0});
      any |= (x == t || y == t);
    }
    if (any) rep.type_kappa_per_type[t] = kappa_from_pairs(binary);
  }
  return rep;
}

double mcnemar_counts(long b, long c) {
  if (b < 0 || c < 0) throw DataError("mcnemar: negative counts");
  long n = b + c;
  if (n == 0) return 1.0;
  if (n < 25) {
    // exact two-sided binomial tail, p = 2 * P[X <= min(b,c)] with X ~ Bin(n, 1/2)
    long k = std::min(b, c);
    double tail = 0.0;
    double coeff = 1.0;  // C(n, 0)
    for (long i = 0; i <= k; ++i) {
      if (i > 0) coeff = coeff * (n - i + 1) / i;
      tail += coeff;
    }
    double p = 2.0 * tail * std::pow(0.5, static_cast<double>(n));
    return std::min(1.0, p);
  }
  double diff = std::abs(static_cast<double>(b) - c) - 1.0;
  double chi2 = diff * diff / n;
  boost::math::chi_squared_distribution<double> dist(1.0);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

double mcnemar(const std::vector<std::pair<bool, bool>>& paired) {
  long b = 0, c = 0;
  for (auto [x, y] : paired) {
    if (x && !y) ++b;
    if (!x && y) ++c;
  }
  return mcnemar_counts(b, c);
}

double welch_t(const std::vector<double>& sample_a, const std::vector<double>& sample_b) {
  if (sample_a.size() < 2 || sample_b.size() < 2) {
    throw DataError("welch_t: each sample needs at least 2 values");
  }
  auto mean_var = [](const std::vector<double>& s) {
    double m = 0.0;
    for (double x : s) m += x;
    m /= s.size();
    double v = 0.0;
    for (double x : s) v += (x - m) * (x - m);
    v /= (s.size() - 1);
    return std::pair<double, double>{m, v};
  };
  auto [ma, va] = mean_var(sample_a);
  auto [mb, vb] = mean_var(sample_b);
  double na = static_cast<double>(sample_a.size());
  double nb = static_cast<double>(sample_b.size());
  double se2 = va / na + vb / nb;
  if (se2 <= 0.0) return ma == mb ? 1.0 : 0.0;
  double t = (ma - mb) / std::sqrt(se2);
  double df = se2 * se2 /
              (va * va / (na * na * (na - 1)) + vb * vb / (nb * nb * (nb - 1)));
  boost::math::students_t_distribution<double> dist(df);
  double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::min(1.0, p);
}

}  // namespace ampere
