// corpus.cpp -- ingestion, annotation binding, tag conversion, splits.

#include "ampere/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "ampere/error.hpp"
#include "ampere/text.hpp"

namespace ampere {

using nlohmann::json;

namespace {

json parse_record(const std::string& line, const std::string& path, int index) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError(path + ": record " + std::to_string(index) + ": not a JSON object");
  }
  return j;
}

void require_field(const json& j, const char* field, const std::string& path, int index) {
  if (!j.contains(field) || j[field].is_null()) {
    throw DataError(path + ": record " + std::to_string(index) + ": missing field \"" +
                    field + "\"");
  }
}

}  // namespace

std::vector<Review> ingest_reviews(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reviews file: " + path);
  std::vector<Review> reviews;
  std::unordered_set<std::string> seen;
  std::string line;
  int index = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      ++index;
      continue;
    }
    json j = parse_record(line, path, index);
    if (j.contains("_artifact")) {
      ++index;
      continue;
    }
    require_field(j, "id", path, index);
    require_field(j, "text", path, index);
    Review r;
    r.id = j["id"].get<std::string>();
    if (!seen.insert(r.id).second) {
      throw DataError(path + ": record " + std::to_string(index) + ": duplicate id \"" +
                      r.id + "\"");
    }
    r.raw_text = j["text"].get<std::string>();
    if (j.contains("venue") && j["venue"].is_string()) {
      r.venue = parse_venue(j["venue"].get<std::string>());
    }
    if (j.contains("rating") && j["rating"].is_number_integer()) {
      r.rating = j["rating"].get<int>();
    }
    if (j.contains("rating_scale_max") && j["rating_scale_max"].is_number_integer()) {
      r.rating_scale_max = j["rating_scale_max"].get<int>();
    }
    if (r.rating) {
      int max = r.rating_scale_max.value_or(10);
      if (*r.rating < 1 || *r.rating > max) {
        throw DataError(path + ": record " + std::to_string(index) + ": rating " +
                        std::to_string(*r.rating) + " outside 1.." + std::to_string(max));
      }
    }
    reviews.push_back(std::move(r));
    ++index;
  }
  return reviews;
}

std::vector<AnnotationRecord> ingest_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open annotations file: " + path);
  std::vector<AnnotationRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  int index = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      ++index;
      continue;
    }
    json j = parse_record(line, path, index);
    if (j.contains("_artifact")) {
      ++index;
      continue;
    }
    require_field(j, "review_id", path, index);
    AnnotationRecord rec;
    rec.review_id = j["review_id"].get<std::string>();
    if (!seen.insert(rec.review_id).second) {
      throw DataError(path + ": record " + std::to_string(index) + ": duplicate review_id \"" +
                      rec.review_id + "\"");
    }
    const char* span_field = "propositions";
    if (!j.contains("propositions") && j.contains("char_propositions")) {
      rec.has_char_spans = true;
      span_field = "char_propositions";
    } else {
      require_field(j, "tokens", path, index);
      rec.tokens = j["tokens"].get<std::vector<std::string>>();
    }
    require_field(j, span_field, path, index);
    auto& dest = rec.has_char_spans ? rec.char_props : rec.props;
    for (const auto& p : j[span_field]) {
      Proposition prop;
      prop.span.start = p.at("start").get<int>();
      prop.span.end = p.at("end").get<int>();
      prop.type = parse_prop_type(p.at("type").get<std::string>());
      if (prop.span.start >= prop.span.end) {
        throw DataError(path + ": record " + std::to_string(index) + ": empty span in \"" +
                        rec.review_id + "\"");
      }
      dest.push_back(prop);
    }
    std::sort(dest.begin(), dest.end(),
              [](const Proposition& a, const Proposition& b) { return a.span.start < b.span.start; });
    for (std::size_t i = 1; i < dest.size(); ++i) {
      if (dest[i].span.start < dest[i - 1].span.end) {
        throw DataError(path + ": record " + std::to_string(index) + ": overlapping spans in \"" +
                        rec.review_id + "\"");
      }
    }
    if (!rec.has_char_spans) {
      int n = static_cast<int>(rec.tokens.size());
      if (!dest.empty() && dest.back().span.end > n) {
        throw DataError(path + ": record " + std::to_string(index) + ": span beyond " +
                        std::to_string(n) + " tokens in \"" + rec.review_id + "\"");
      }
    }
    records.push_back(std::move(rec));
    ++index;
  }
  return records;
}

std::vector<Proposition> convert_char_spans(const Review& review,
                                            const std::vector<Proposition>& char_spans) {
  // Character offsets of each token in the normalized text, in order.
  std::vector<std::pair<int, int>> offsets;
  offsets.reserve(review.tokens.size());
  std::size_t cursor = 0;
  for (const Token& t : review.tokens) {
    std::size_t at = review.text.find(t.surface, cursor);
    if (at == std::string::npos) {
      throw DataError("review " + review.id + ": token \"" + t.surface +
                      "\" not found in text while converting character spans");
    }
    offsets.emplace_back(static_cast<int>(at), static_cast<int>(at + t.surface.size()));
    cursor = at + t.surface.size();
  }
  std::vector<Proposition> out;
  for (const Proposition& p : char_spans) {
    int first = -1, last = -1;
    for (int i = 0; i < static_cast<int>(offsets.size()); ++i) {
      if (offsets[i].second <= p.span.start) continue;
      if (offsets[i].first >= p.span.end) break;
      if (first < 0) first = i;
      last = i;
    }
    if (first < 0) continue;  // span covers no token
    out.push_back(Proposition{Span{first, last + 1}, p.type});
  }
  return out;
}

std::vector<AnnotatedReview> bind_annotations(std::vector<Review> reviews,
                                              const std::vector<AnnotationRecord>& records) {
  std::unordered_map<std::string, const AnnotationRecord*> by_id;
  for (const auto& rec : records) by_id[rec.review_id] = &rec;

  std::vector<AnnotatedReview> out;
  out.reserve(reviews.size());
  for (Review& review : reviews) {
    AnnotatedReview a;
    auto it = by_id.find(review.id);
    if (it != by_id.end()) {
      const AnnotationRecord& rec = *it->second;
      if (rec.has_char_spans) {
        a.props = convert_char_spans(review, rec.char_props);
      } else {
        if (static_cast<int>(rec.tokens.size()) != review.num_tokens()) {
          throw DataError("review " + review.id + ": annotation has " +
                          std::to_string(rec.tokens.size()) + " tokens, pipeline produced " +
                          std::to_string(review.num_tokens()));
        }
        for (int i = 0; i < review.num_tokens(); ++i) {
          if (rec.tokens[i] != review.tokens[i].surface) {
            throw DataError("review " + review.id + ": token " + std::to_string(i) +
                            " mismatch: \"" + rec.tokens[i] + "\" vs \"" +
                            review.tokens[i].surface + "\"");
          }
        }
        a.props = rec.props;
      }
      if (!a.props.empty() && a.props.back().span.end > review.num_tokens()) {
        throw DataError("review " + review.id + ": proposition span beyond token count");
      }
    }
    a.review = std::move(review);
    out.push_back(std::move(a));
  }
  return out;
}

TagSequence to_tags(const AnnotatedReview& a, Scheme scheme) {
  TagSequence tags;
  tags.scheme = scheme;
  tags.labels.assign(a.review.num_tokens(), "O");
  for (const Proposition& p : a.props) {
    if (p.type == PropType::NonArg) continue;  // NonArg maps to O
    std::string b = "B", i = "I";
    if (scheme == Scheme::JointBI) {
      b += std::string("-") + prop_type_tag(p.type);
      i += std::string("-") + prop_type_tag(p.type);
    }
    tags.labels[p.span.start] = b;
    for (int t = p.span.start + 1; t < p.span.end; ++t) tags.labels[t] = i;
  }
  return tags;
}

std::vector<Proposition> from_tags(const TagSequence& tags) {
  const auto& alphabet = scheme_labels(tags.scheme);
  std::unordered_set<std::string> valid(alphabet.begin(), alphabet.end());
  for (const std::string& l : tags.labels) {
    if (valid.count(l) == 0) {
      throw DataError("label \"" + l + "\" not in the " +
                      std::string(scheme_name(tags.scheme)) + " scheme");
    }
  }

  // BIO labels carry no type; spans come back with type index 0. Callers that
  // only need boundaries can use spans_from_tags.
  auto label_type = [&](const std::string& l) -> PropType {
    if (tags.scheme == Scheme::BIO) return PropType::Evaluation;
    return parse_prop_type(l.substr(2));
  };

  std::vector<Proposition> out;
  int open_start = -1;
  PropType open_type = PropType::NonArg;
  auto close = [&](int end) {
    if (open_start >= 0) out.push_back(Proposition{Span{open_start, end}, open_type});
    open_start = -1;
  };
  for (int t = 0; t < static_cast<int>(tags.labels.size()); ++t) {
    const std::string& l = tags.labels[t];
    if (l == "O") {
      close(t);
      continue;
    }
    PropType ty = label_type(l);
    if (l[0] == 'B') {
      close(t);
      open_start = t;
      open_type = ty;
    } else {  // I: continue when compatible, otherwise repair by opening anew
      if (open_start >= 0 && open_type == ty) continue;
      close(t);
      open_start = t;
      open_type = ty;
    }
  }
  close(static_cast<int>(tags.labels.size()));
  return out;
}

std::vector<Span> spans_from_tags(const TagSequence& tags) {
  std::vector<Span> out;
  for (const Proposition& p : from_tags(tags)) out.push_back(p.span);
  return out;
}

int scale_rating(int raw, int scale_max) {
  if (scale_max != 5 && scale_max != 10) {
    throw DataError("rating_scale_max must be 5 or 10, got " + std::to_string(scale_max));
  }
  if (raw < 1 || raw > scale_max) {
    throw DataError("rating " + std::to_string(raw) + " outside 1.." + std::to_string(scale_max));
  }
  return scale_max == 5 ? raw : (raw + 1) / 2;
}

namespace {

// Fisher-Yates with explicit draws so the permutation is identical on every
// platform and standard library.
void deterministic_shuffle(std::vector<int>& v, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

TrainTestSplit split_train_test(int corpus_size, std::uint64_t seed) {
  std::vector<int> order(corpus_size);
  for (int i = 0; i < corpus_size; ++i) order[i] = i;
  deterministic_shuffle(order, seed);
  int test_count = corpus_size / 5;
  TrainTestSplit split;
  split.seed = seed;
  split.test.assign(order.begin(), order.begin() + test_count);
  split.train.assign(order.begin() + test_count, order.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

std::vector<std::vector<int>> kfold(const std::vector<int>& indices, int k, std::uint64_t seed) {
  std::vector<int> order = indices;
  deterministic_shuffle(order, seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::vector<int>> folds(k);
  for (std::size_t i = 0; i < order.size(); ++i) {
    folds[i % k].push_back(order[i]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

void write_reviews(const std::string& path, const std::vector<Review>& reviews) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write reviews file: " + path);
  for (const Review& r : reviews) {
    json j;
    j["id"] = r.id;
    j["venue"] = venue_name(r.venue);
    if (r.rating) j["rating"] = *r.rating; else j["rating"] = nullptr;
    if (r.rating_scale_max) j["rating_scale_max"] = *r.rating_scale_max;
    else j["rating_scale_max"] = nullptr;
    j["text"] = r.raw_text.empty() ? r.text : r.raw_text;
    out << j.dump() << "\n";
  }
}

void write_annotations(const std::string& path, const std::vector<AnnotatedReview>& annotated) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write annotations file: " + path);
  for (const AnnotatedReview& a : annotated) {
    json j;
    j["review_id"] = a.review.id;
    std::vector<std::string> toks;
    toks.reserve(a.review.tokens.size());
    for (const Token& t : a.review.tokens) toks.push_back(t.surface);
    j["tokens"] = toks;
    json props = json::array();
    for (const Proposition& p : a.props) {
      props.push_back({{"start", p.span.start}, {"end", p.span.end},
                       {"type", prop_type_name(p.type)}});
    }
    j["propositions"] = props;
    out << j.dump() << "\n";
  }
}

}  // namespace ampere
