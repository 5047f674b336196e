// segment.cpp

#include "ampere/segment.hpp"

namespace ampere {

std::vector<Span> full_sent(const Review& review) {
  std::vector<Span> spans;
  spans.reserve(review.sentences.size());
  for (const Sentence& s : review.sentences) spans.push_back(s.span);
  return spans;
}

std::vector<Span> pdtb_conn(const Review& review, const ConnectiveLexicon& lex) {
  std::vector<Span> spans;
  for (const Sentence& s : review.sentences) {
    int start = s.span.start;
    int pos = s.span.start;
    while (pos < s.span.end) {
      int len = lex.match_at(review.tokens, pos);
      if (len > 0 && pos > start) {
        spans.push_back(Span{start, pos});
        start = pos;
      }
      pos += len > 0 ? len : 1;
    }
    spans.push_back(Span{start, s.span.end});
  }
  return spans;
}

}  // namespace ampere
