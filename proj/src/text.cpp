// text.cpp -- normalization, sentence splitting, tokenization.

#include "ampere/text.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <unordered_set>

namespace ampere {

int SpecialTokenCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

namespace {

int replace_all_regex(std::string& text, const std::regex& re, const std::string& repl) {
  std::string out;
  out.reserve(text.size());
  int n = 0;
  auto begin = std::sregex_iterator(text.begin(), text.end(), re);
  auto end = std::sregex_iterator();
  std::size_t last = 0;
  for (auto it = begin; it != end; ++it) {
    out.append(text, last, it->position() - last);
    out.append(repl);
    last = it->position() + it->length();
    ++n;
  }
  out.append(text, last, std::string::npos);
  text = std::move(out);
  return n;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Single-letter math variables, optionally with a short sub/superscript
// (x, k, T, x_i, k^2). The articles a/A and the pronoun I never count.
bool is_variable_core(const std::string& w) {
  if (w.empty()) return false;
  char c = w[0];
  if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  if (c == 'a' || c == 'A' || c == 'I') return false;
  if (w.size() == 1) return true;
  if (w.size() >= 3 && w.size() <= 4 && (w[1] == '_' || w[1] == '^')) {
    return std::all_of(w.begin() + 2, w.end(), [](char x) {
      return std::isalnum(static_cast<unsigned char>(x));
    });
  }
  return false;
}

int replace_variables(std::string& text) {
  static const std::string lead_punct = "([{\"`'";
  static const std::string trail_punct = ".,;:?!)]}\"`'";
  std::string out;
  out.reserve(text.size());
  int n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t a = i, b = j;  // core of the run, punctuation stripped
    while (a < b && lead_punct.find(text[a]) != std::string::npos) ++a;
    while (b > a && trail_punct.find(text[b - 1]) != std::string::npos) --b;
    std::string core = text.substr(a, b - a);
    if (is_variable_core(core)) {
      out.append(text, i, a - i);
      out.append("<VAR>");
      out.append(text, b, j - b);
      ++n;
    } else {
      out.append(text, i, j - i);
    }
    i = j;
  }
  text = std::move(out);
  return n;
}

}  // namespace

std::pair<std::string, SpecialTokenCounts> normalize_special_tokens(const std::string& text) {
  static const std::regex url_re(R"((https?://[^\s<>"')\]]+|www\.[^\s<>"')\]]+))");
  static const std::regex eqn_re(R"(\$[^$]{1,120}\$)");
  // Formatted citations: (Name et al., 2017), (Name and Name, 2006),
  // (Name, 2004), [3], [1, 2], Name and Name (2016), Name et al. (2018).
  static const std::regex cit_res[] = {
      std::regex(R"(\([A-Z][A-Za-z'-]+ et al\.?(,? ?(19|20)\d\d[a-z]?)?\))"),
      std::regex(R"(\([A-Z][A-Za-z'-]+ and [A-Z][A-Za-z'-]+,? ?(19|20)\d\d[a-z]?\))"),
      std::regex(R"(\([A-Z][A-Za-z'-]+,? ?(19|20)\d\d[a-z]?\))"),
      std::regex(R"(\[\d+(, ?\d+)*\])"),
      std::regex(R"([A-Z][A-Za-z'-]+ and [A-Z][A-Za-z'-]+ \((19|20)\d\d\))"),
      std::regex(R"([A-Z][A-Za-z'-]+ et al\.? \((19|20)\d\d\))"),
  };

  std::string out = text;
  SpecialTokenCounts counts;
  counts[SpecialKind::URL] = replace_all_regex(out, url_re, "<URL>");
  counts[SpecialKind::EQN] = replace_all_regex(out, eqn_re, "<EQN>");
  for (const auto& re : cit_res) {
    counts[SpecialKind::CIT] += replace_all_regex(out, re, "<CIT>");
  }
  counts[SpecialKind::VAR] = replace_variables(out);
  return {std::move(out), counts};
}

namespace {

// Words that a period may follow without ending the sentence.
const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> set = {
      "e.g", "i.e", "etc", "et", "al", "cf", "vs", "fig", "figs", "eq",
      "eqs", "sec", "no", "vol", "pp", "ca", "resp", "dr", "mr", "ms",
      "prof", "incl", "approx", "ex", "ibid", "w.r.t",
  };
  return set;
}

bool sentence_opener(char c) {
  return (std::isupper(static_cast<unsigned char>(c)) != 0) ||
         (std::isdigit(static_cast<unsigned char>(c)) != 0) || c == '`' || c == '"' ||
         c == '(' || c == '[' || c == '<';
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (c == '.') {
      // Grab the word before the period and skip abbreviations and initials.
      std::size_t b = i;
      while (b > 0 && (is_word_char(text[b - 1]) || text[b - 1] == '.')) --b;
      std::string word = lowercase(text.substr(b, i - b));
      if (!word.empty() && word.back() == '.') word.pop_back();
      if (abbreviations().count(word) > 0) continue;
      if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) continue;
      if (i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) continue;
    }
    // Include trailing closers in this sentence, then require whitespace and
    // a sentence opener.
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '\'' || text[j] == '"' || text[j] == ')' ||
                               text[j] == ']' || text[j] == '.' || text[j] == '!' ||
                               text[j] == '?')) ++j;
    std::size_t k = j;
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k == text.size() || (k > j && sentence_opener(text[k]))) {
      std::string sent = text.substr(start, j - start);
      // trim
      std::size_t a = sent.find_first_not_of(" \t\r\n");
      std::size_t b = sent.find_last_not_of(" \t\r\n");
      if (a != std::string::npos) out.push_back(sent.substr(a, b - a + 1));
      start = k;
      i = k == 0 ? 0 : k - 1;
    }
  }
  if (start < text.size()) {
    std::string sent = text.substr(start);
    std::size_t a = sent.find_first_not_of(" \t\r\n");
    std::size_t b = sent.find_last_not_of(" \t\r\n");
    if (a != std::string::npos) out.push_back(sent.substr(a, b - a + 1));
  }
  return out;
}

namespace {

const char* kPlaceholders[] = {"<EQN>", "<VAR>", "<URL>", "<CIT>"};

std::optional<SpecialKind> placeholder_at(const std::string& s, std::size_t i) {
  for (int k = 0; k < kNumSpecialKinds; ++k) {
    if (s.compare(i, 5, kPlaceholders[k]) == 0) return static_cast<SpecialKind>(k);
  }
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(const std::string& sentence_text) {
  const std::string& s = sentence_text;
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (auto kind = placeholder_at(s, i)) {
      tokens.push_back(Token{kPlaceholders[static_cast<int>(*kind)], true, kind});
      i += 5;
      continue;
    }
    if (s.compare(i, 2, "``") == 0 || s.compare(i, 2, "''") == 0) {
      tokens.push_back(Token{s.substr(i, 2)});
      i += 2;
      continue;
    }
    if (is_word_char(c) || (c == '\\' && i + 1 < s.size() &&
                            std::isalpha(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + (c == '\\' ? 1 : 0) + 1;
      while (j < s.size()) {
        if (is_word_char(s[j])) {
          ++j;
        } else if ((s[j] == '-' || s[j] == '\'' || s[j] == '.' || s[j] == '_') &&
                   j + 1 < s.size() && is_word_char(s[j + 1]) && is_word_char(s[j - 1])) {
          j += 2;
        } else {
          break;
        }
      }
      tokens.push_back(Token{s.substr(i, j - i)});
      i = j;
      continue;
    }
    // Everything else is a single-character token (UTF-8 sequences stay
    // together as one token).
    std::size_t j = i + 1;
    if (c >= 0x80) {
      while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
    }
    tokens.push_back(Token{s.substr(i, j - i)});
    i = j;
  }
  return tokens;
}

SpecialTokenCounts preprocess_review(Review& review) {
  auto [normalized, counts] = normalize_special_tokens(review.raw_text);
  review.text = std::move(normalized);
  review.tokens.clear();
  review.sentences.clear();
  for (const std::string& sent : split_sentences(review.text)) {
    std::vector<Token> toks = tokenize(sent);
    if (toks.empty()) continue;
    int start = review.num_tokens();
    for (auto& t : toks) review.tokens.push_back(std::move(t));
    review.sentences.push_back(Sentence{Span{start, review.num_tokens()}});
  }
  return counts;
}

}  // namespace ampere
