#pragma once

#include <stdexcept>
#include <string>

namespace rivulet {

enum class Errc {
  UnknownNode,
  NegativeResultingWeight,
  ProbabilityOverflow,
  SelfWeightInIC,
  DuplicateSetId,
  UnknownSetId,
  EmptyCollection,
  SampleSizeMismatch,
  InvalidConfig,
  DegenerateQuantile,
  TooLargeToEnumerate,
  ParseError,
  TimestampRegression,
  FractionMismatch,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::NegativeResultingWeight: return "NegativeResultingWeight";
    case Errc::ProbabilityOverflow: return "ProbabilityOverflow";
    case Errc::SelfWeightInIC: return "SelfWeightInIC";
    case Errc::DuplicateSetId: return "DuplicateSetId";
    case Errc::UnknownSetId: return "UnknownSetId";
    case Errc::EmptyCollection: return "EmptyCollection";
    case Errc::SampleSizeMismatch: return "SampleSizeMismatch";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::DegenerateQuantile: return "DegenerateQuantile";
    case Errc::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case Errc::ParseError: return "ParseError";
    case Errc::TimestampRegression: return "TimestampRegression";
    case Errc::FractionMismatch: return "FractionMismatch";
  }
  return "Unknown";
}

}  // namespace rivulet
