// lexicon.hpp -- discourse-connective lexicon with multiword phrase matching.
#pragma once

#include <string>
#include <vector>

#include "ampere/types.hpp"

namespace ampere {

class ConnectiveLexicon {
 public:
  ConnectiveLexicon() = default;

  // File format: one phrase per line, lowercase, `#` comments. Entries
  // containing ".." are discontinuous pairs; each contiguous part is added
  // as its own phrase.
  static ConnectiveLexicon load(const std::string& path);
  static ConnectiveLexicon from_phrases(std::vector<std::string> phrases,
                                        std::string source_tag = "inline");

  bool empty() const { return phrases_.empty(); }
  std::size_t size() const { return phrases_.size(); }
  const std::string& source_tag() const { return source_tag_; }
  const std::vector<std::vector<std::string>>& phrases() const { return phrases_; }

  // Length in tokens of the longest phrase starting at position pos, or 0.
  // Case-insensitive, greedy longest-first.
  int match_at(const std::vector<Token>& tokens, int pos) const;

 private:
  std::vector<std::vector<std::string>> phrases_;  // tokenized, lowercase
  std::string source_tag_;
};

}  // namespace ampere
