// types.cpp -- enum names and label alphabets.

#include "ampere/types.hpp"

#include "ampere/error.hpp"

namespace ampere {

const char* venue_name(Venue v) {
  switch (v) {
    case Venue::ICLR: return "ICLR";
    case Venue::UAI: return "UAI";
    case Venue::ACL: return "ACL";
    case Venue::NeurIPS: return "NeurIPS";
    case Venue::Other: return "Other";
  }
  return "Other";
}

Venue parse_venue(const std::string& s) {
  if (s == "ICLR") return Venue::ICLR;
  if (s == "UAI") return Venue::UAI;
  if (s == "ACL") return Venue::ACL;
  if (s == "NeurIPS" || s == "NIPS") return Venue::NeurIPS;
  return Venue::Other;
}

const char* prop_type_name(PropType t) {
  switch (t) {
    case PropType::Evaluation: return "evaluation";
    case PropType::Request: return "request";
    case PropType::Fact: return "fact";
    case PropType::Reference: return "reference";
    case PropType::Quote: return "quote";
    case PropType::NonArg: return "non-arg";
  }
  return "non-arg";
}

const char* prop_type_tag(PropType t) {
  switch (t) {
    case PropType::Evaluation: return "eval";
    case PropType::Request: return "req";
    case PropType::Fact: return "fact";
    case PropType::Reference: return "ref";
    case PropType::Quote: return "quote";
    case PropType::NonArg: return "non-arg";
  }
  return "non-arg";
}

PropType parse_prop_type(const std::string& s) {
  for (int i = 0; i < kNumPropTypes; ++i) {
    PropType t = static_cast<PropType>(i);
    if (s == prop_type_name(t) || s == prop_type_tag(t)) return t;
  }
  throw DataError("unknown proposition type: \"" + s + "\"");
}

const char* special_kind_name(SpecialKind k) {
  switch (k) {
    case SpecialKind::EQN: return "EQN";
    case SpecialKind::VAR: return "VAR";
    case SpecialKind::URL: return "URL";
    case SpecialKind::CIT: return "CIT";
  }
  return "EQN";
}

const char* special_placeholder(SpecialKind k) {
  switch (k) {
    case SpecialKind::EQN: return "<EQN>";
    case SpecialKind::VAR: return "<VAR>";
    case SpecialKind::URL: return "<URL>";
    case SpecialKind::CIT: return "<CIT>";
  }
  return "<EQN>";
}

const char* scheme_name(Scheme s) {
  return s == Scheme::BIO ? "bio" : "joint";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "bio" || s == "BIO") return Scheme::BIO;
  if (s == "joint" || s == "JointBI" || s == "joint-bi") return Scheme::JointBI;
  throw UsageError("unknown scheme: \"" + s + "\" (expected bio|joint)");
}

const std::vector<std::string>& scheme_labels(Scheme s) {
  static const std::vector<std::string> bio = {"B", "I", "O"};
  static const std::vector<std::string> joint = {
      "B-eval", "I-eval", "B-req",   "I-req",   "B-fact", "I-fact",
      "B-ref",  "I-ref",  "B-quote", "I-quote", "O"};
  return s == Scheme::BIO ? bio : joint;
}

}  // namespace ampere
