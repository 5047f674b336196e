// crf_features.cpp

#include "ampere/crf_features.hpp"

#include <cctype>

#include "ampere/text.hpp"

namespace ampere {

std::string word_shape(const std::string& token) {
  std::string shape;
  char prev = 0;
  for (unsigned char c : token) {
    char cls;
    if (std::isupper(c)) cls = 'X';
    else if (std::islower(c)) cls = 'x';
    else if (std::isdigit(c)) cls = 'd';
    else cls = 'o';
    if (cls != prev) shape.push_back(cls);
    prev = cls;
  }
  return shape;
}

namespace {

const char* punct_class(const std::string& s) {
  if (s == "." || s == "!" || s == "?") return "terminal";
  if (s == ",") return "comma";
  if (s == ";" || s == ":") return "colon";
  if (s == "``" || s == "''" || s == "'" || s == "\"" || s == "`") return "quote";
  if (s == "(" || s == ")" || s == "[" || s == "]" || s == "{" || s == "}") return "bracket";
  if (s == "-" || s == "--") return "dash";
  if (s.size() <= 2 && !std::isalnum(static_cast<unsigned char>(s[0]))) return "other";
  return nullptr;
}

}  // namespace

std::vector<std::vector<std::string>> FeatureTemplateSet::extract(const Review& review) const {
  int n = review.num_tokens();
  std::vector<std::vector<std::string>> features(n);

  // sentence index and bounds per token
  std::vector<int> sent_of(n, -1);
  for (std::size_t s = 0; s < review.sentences.size(); ++s) {
    const Span& sp = review.sentences[s].span;
    for (int t = sp.start; t < sp.end; ++t) sent_of[t] = static_cast<int>(s);
  }

  for (int t = 0; t < n; ++t) {
    const Token& tok = review.tokens[t];
    std::vector<std::string>& out = features[t];
    std::string lower = lowercase(tok.surface);
    out.push_back("w=" + lower);
    out.push_back("shape=" + word_shape(tok.surface));
    if (lower.size() >= 2) {
      out.push_back("p2=" + lower.substr(0, 2));
      out.push_back("s2=" + lower.substr(lower.size() - 2));
    }
    if (lower.size() >= 3) {
      out.push_back("p3=" + lower.substr(0, 3));
      out.push_back("s3=" + lower.substr(lower.size() - 3));
    }
    out.push_back(t > 0 ? "prev=" + lowercase(review.tokens[t - 1].surface)
                        : std::string("prev=<bos>"));
    out.push_back(t + 1 < n ? "next=" + lowercase(review.tokens[t + 1].surface)
                            : std::string("next=<eos>"));

    int s = sent_of[t];
    if (s >= 0) {
      const Span& sp = review.sentences[s].span;
      if (t == sp.start) out.push_back("sent_init=true");
      if (t == sp.end - 1) out.push_back("sent_final=true");
      int third = (t - sp.start) * 3 / sp.length();
      out.push_back(third == 0 ? "spos=first" : third == 1 ? "spos=mid" : "spos=last");
    }
    if (tok.special_kind) {
      out.push_back(std::string("special=") + special_kind_name(*tok.special_kind));
    }
    if (connectives_ && connectives_->match_at(review.tokens, t) > 0) {
      out.push_back("connective=true");
    }
    if (const char* pc = punct_class(tok.surface)) {
      out.push_back(std::string("punct=") + pc);
    }
  }
  return features;
}

}  // namespace ampere
