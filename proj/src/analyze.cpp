// analyze.cpp

#include "ampere/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "ampere/corpus.hpp"
#include "ampere/error.hpp"
#include "ampere/metrics.hpp"
#include "ampere/text.hpp"

namespace ampere {

std::string rating_bucket_label(const Review& review) {
  if (!review.rating) return "unrated";
  int scale = review.rating_scale_max.value_or(10);
  return std::to_string(scale_rating(*review.rating, scale));
}

namespace {

std::string group_label(const Review& r, GroupBy by) {
  return by == GroupBy::Venue ? venue_name(r.venue) : rating_bucket_label(r);
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= xs.size();
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  double sd = xs.size() > 1 ? std::sqrt(v / (xs.size() - 1)) : 0.0;
  return {m, sd};
}

}  // namespace

PropStatsReport prop_stats(const std::vector<AnnotatedReview>& corpus, GroupBy group_by) {
  std::map<std::string, std::vector<double>> props_by, words_by;
  for (const AnnotatedReview& a : corpus) {
    std::string g = group_label(a.review, group_by);
    props_by[g].push_back(static_cast<double>(a.props.size()));
    words_by[g].push_back(static_cast<double>(a.review.num_tokens()));
  }
  PropStatsReport rep;
  for (const auto& [g, xs] : props_by) {
    if (xs.empty()) {
      rep.warnings.push_back("group " + g + " is empty, omitted");
      continue;
    }
    GroupStats s;
    s.group = g;
    s.reviews = static_cast<int>(xs.size());
    std::tie(s.mean_props, s.sd_props) = mean_sd(xs);
    std::tie(s.mean_words, s.sd_words) = mean_sd(words_by[g]);
    rep.groups.push_back(s);
  }
  for (const auto& [ga, xa] : props_by) {
    for (const auto& [gb, xb] : props_by) {
      if (ga >= gb) continue;
      if (xa.size() < 2 || xb.size() < 2) {
        rep.warnings.push_back("pair " + ga + "/" + gb + ": too few reviews for a t-test");
        continue;
      }
      rep.prop_count_p[{ga, gb}] = welch_t(xa, xb);
      rep.word_count_p[{ga, gb}] = welch_t(words_by.at(ga), words_by.at(gb));
    }
  }
  return rep;
}

std::vector<TypeDistribution> type_distribution(const std::vector<AnnotatedReview>& corpus,
                                                std::optional<GroupBy> group_by) {
  std::map<std::string, std::array<long, kNumPropTypes>> counts;
  for (const AnnotatedReview& a : corpus) {
    std::string g = group_by ? group_label(a.review, *group_by) : "all";
    auto& row = counts.try_emplace(g).first->second;
    for (const Proposition& p : a.props) ++row[static_cast<int>(p.type)];
  }
  std::vector<TypeDistribution> out;
  for (const auto& [g, row] : counts) {
    TypeDistribution d;
    d.group = g;
    for (long c : row) d.total += c;
    if (d.total > 0) {
      for (int t = 0; t < kNumPropTypes; ++t) {
        d.proportions[t] = static_cast<double>(row[t]) / d.total;
      }
    }
    out.push_back(d);
  }
  return out;
}

std::map<std::string, double> share_with_type(const std::vector<AnnotatedReview>& corpus,
                                              GroupBy group_by, PropType type) {
  std::map<std::string, std::pair<long, long>> tally;  // with / total
  for (const AnnotatedReview& a : corpus) {
    auto& [with, total] = tally[group_label(a.review, group_by)];
    ++total;
    for (const Proposition& p : a.props) {
      if (p.type == type) {
        ++with;
        break;
      }
    }
  }
  std::map<std::string, double> out;
  for (const auto& [g, wt] : tally) {
    out[g] = wt.second > 0 ? static_cast<double>(wt.first) / wt.second : 0.0;
  }
  return out;
}

TransitionMatrix transition_matrix(const std::vector<AnnotatedReview>& corpus) {
  TransitionMatrix m;
  for (const AnnotatedReview& a : corpus) {
    for (std::size_t i = 1; i < a.props.size(); ++i) {
      int from = static_cast<int>(a.props[i - 1].type);
      int to = static_cast<int>(a.props[i].type);
      ++m.counts[from][to];
      ++m.row_totals[from];
      ++m.total_transitions;
    }
  }
  for (int i = 0; i < kNumPropTypes; ++i) {
    if (m.row_totals[i] == 0) continue;  // flagged absent via row_totals
    for (int j = 0; j < kNumPropTypes; ++j) {
      m.prob[i][j] = static_cast<double>(m.counts[i][j]) / m.row_totals[i];
    }
  }
  return m;
}

double g2_statistic(long k1, long n1, long k2, long n2) {
  if (n1 <= 0 || n2 <= 0) return 0.0;
  // identical relative frequency: exact zero by the integer cross product
  if (static_cast<long long>(k1) * n2 == static_cast<long long>(k2) * n1) return 0.0;
  double n = static_cast<double>(n1) + n2;
  double k = static_cast<double>(k1) + k2;
  auto term = [](double obs, double expd) {
    return obs > 0.0 ? obs * std::log(obs / expd) : 0.0;
  };
  double e1 = n1 * k / n, e2 = n2 * k / n;
  double f1 = n1 * (n - k) / n, f2 = n2 * (n - k) / n;
  double g2 = 2.0 * (term(k1, e1) + term(k2, e2) + term(n1 - k1, f1) + term(n2 - k2, f2));
  return std::max(0.0, g2);
}

double chi2_critical(double alpha) {
  boost::math::chi_squared_distribution<double> dist(1.0);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

namespace {

struct TypeCounts {
  std::map<std::string, long> word_freq;  // per word, within one (venue, type)
  long total_tokens = 0;
};

// word -> (overall frequency), per (venue, type) counts
using VenueTypeCounts = std::array<TypeCounts, kNumPropTypes>;

std::map<std::string, VenueTypeCounts> collect_counts(
    const std::vector<AnnotatedReview>& corpus) {
  std::map<std::string, VenueTypeCounts> by_venue;
  for (const AnnotatedReview& a : corpus) {
    std::string venue = venue_name(a.review.venue);
    for (const Proposition& p : a.props) {
      auto add = [&](const std::string& v) {
        TypeCounts& tc = by_venue[v][static_cast<int>(p.type)];
        for (int t = p.span.start; t < p.span.end; ++t) {
          ++tc.word_freq[lowercase(a.review.tokens[t].surface)];
          ++tc.total_tokens;
        }
      };
      add(venue);
      add("all");
    }
  }
  return by_venue;
}

}  // namespace

SalientWordReport salient_words(const std::vector<AnnotatedReview>& corpus, double alpha,
                                int min_freq, int top_unique) {
  SalientWordReport rep;
  rep.alpha = alpha;
  rep.min_freq = min_freq;
  rep.threshold = chi2_critical(alpha);

  auto by_venue = collect_counts(corpus);

  for (const auto& [venue, per_type] : by_venue) {
    long venue_tokens = 0;
    std::map<std::string, long> venue_freq;
    for (const TypeCounts& tc : per_type) {
      venue_tokens += tc.total_tokens;
      for (const auto& [w, c] : tc.word_freq) venue_freq[w] += c;
    }
    auto& out = rep.by_venue[venue];
    for (int t = 0; t < kNumPropTypes; ++t) {
      const TypeCounts& tc = per_type[t];
      long n1 = tc.total_tokens;
      long n2 = venue_tokens - n1;
      if (n1 == 0 || n2 == 0) continue;
      for (const auto& [w, k1] : tc.word_freq) {
        if (k1 < min_freq) continue;
        long k2 = venue_freq[w] - k1;
        // overrepresented in type t and significant
        if (static_cast<double>(k1) / n1 <= static_cast<double>(k2) / n2) continue;
        double g2 = g2_statistic(k1, n1, k2, n2);
        if (g2 > rep.threshold) out[t].push_back({w, g2, k1});
      }
      std::sort(out[t].begin(), out[t].end(), [](const SalientWord& a, const SalientWord& b) {
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.word < b.word;
      });
    }
  }

  // shared vs unique across the real venues (ignore the pooled "all")
  std::vector<std::string> venues;
  for (const auto& [venue, _] : rep.by_venue) {
    if (venue != "all") venues.push_back(venue);
  }
  for (int t = 0; t < kNumPropTypes; ++t) {
    std::map<std::string, int> seen_in;
    for (const std::string& v : venues) {
      for (const SalientWord& sw : rep.by_venue[v][t]) ++seen_in[sw.word];
    }
    for (const auto& [w, cnt] : seen_in) {
      if (cnt == static_cast<int>(venues.size()) && venues.size() > 1) {
        rep.shared[t].push_back(w);
      }
    }
    for (const std::string& v : venues) {
      auto& uniq = rep.unique[v][t];
      for (const SalientWord& sw : rep.by_venue[v][t]) {
        if (seen_in[sw.word] == 1) uniq.push_back(sw.word);
        if (static_cast<int>(uniq.size()) >= top_unique) break;
      }
    }
  }
  return rep;
}

}  // namespace ampere
