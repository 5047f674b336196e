// segment.hpp -- rule-based proposition segmenters.
#pragma once

#include <vector>

#include "ampere/lexicon.hpp"
#include "ampere/types.hpp"

namespace ampere {

// One span per sentence.
std::vector<Span> full_sent(const Review& review);

// Sentence spans further split at discourse connectives: a new span begins
// at each token starting a lexicon match, except at sentence-initial
// position. Multiword connectives are matched greedily, longest first.
std::vector<Span> pdtb_conn(const Review& review, const ConnectiveLexicon& lex);

}  // namespace ampere
