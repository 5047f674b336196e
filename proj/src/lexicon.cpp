// lexicon.cpp

#include "ampere/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ampere/error.hpp"
#include "ampere/text.hpp"

namespace ampere {

namespace {

std::vector<std::string> split_words(const std::string& phrase) {
  std::istringstream ss(phrase);
  std::vector<std::string> words;
  std::string w;
  while (ss >> w) words.push_back(lowercase(w));
  return words;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConnectiveLexicon ConnectiveLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path);
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t dots = line.find("..");
    if (dots != std::string::npos) {
      std::string left = trim(line.substr(0, dots));
      std::string right = trim(line.substr(dots + 2));
      if (!left.empty()) phrases.push_back(left);
      if (!right.empty()) phrases.push_back(right);
    } else {
      phrases.push_back(line);
    }
  }
  ConnectiveLexicon lex = from_phrases(std::move(phrases), path);
  if (lex.empty()) throw DataError("lexicon file has no entries: " + path);
  return lex;
}

ConnectiveLexicon ConnectiveLexicon::from_phrases(std::vector<std::string> phrases,
                                                  std::string source_tag) {
  ConnectiveLexicon lex;
  lex.source_tag_ = std::move(source_tag);
  for (const std::string& p : phrases) {
    auto words = split_words(p);
    if (!words.empty()) lex.phrases_.push_back(std::move(words));
  }
  std::sort(lex.phrases_.begin(), lex.phrases_.end());
  lex.phrases_.erase(std::unique(lex.phrases_.begin(), lex.phrases_.end()),
                     lex.phrases_.end());
  return lex;
}

int ConnectiveLexicon::match_at(const std::vector<Token>& tokens, int pos) const {
  int best = 0;
  int n = static_cast<int>(tokens.size());
  for (const auto& phrase : phrases_) {
    int len = static_cast<int>(phrase.size());
    if (len <= best || pos + len > n) continue;
    bool ok = true;
    for (int k = 0; k < len; ++k) {
      if (lowercase(tokens[pos + k].surface) != phrase[k]) {
        ok = false;
        break;
      }
    }
    if (ok) best = len;
  }
  return best;
}

}  // namespace ampere
