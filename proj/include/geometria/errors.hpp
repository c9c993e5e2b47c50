#pragma once

#include <stdexcept>
#include <string>

namespace geometria {

// Every failure mode the library can report. The CLI maps these to
// machine-readable error identifiers, so names are part of the surface.
enum class Errc {
  UnreadablePath,
  MalformedRecord,
  ZeroDocuments,
  DuplicateId,
  EmptyVocabulary,
  SizeOutOfRange,
  InvalidParameter,
  InvalidConfig,
  SymbolNotFound,
  EmptyVocabularyOverlap,
  LengthMismatch,
  InvalidDistribution,
  ZeroVector,
  DomainViolation,
  TooFewSymbols,
  SymbolMismatch,
  DegenerateStructure,
  ZeroVariance,
  PhiMismatch,
  LabelMismatch,
  TooFewStructures,
  LevelOverflow,
  EmptyPairSet,
  DuplicateDecision,
  StoreCorruption,
  IoError,
  ConfigParse,
  MissingInput,
  UnknownMeasure,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::UnreadablePath: return "UnreadablePath";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::ZeroDocuments: return "ZeroDocuments";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::SizeOutOfRange: return "SizeOutOfRange";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::SymbolNotFound: return "SymbolNotFound";
    case Errc::EmptyVocabularyOverlap: return "EmptyVocabularyOverlap";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::TooFewSymbols: return "TooFewSymbols";
    case Errc::SymbolMismatch: return "SymbolMismatch";
    case Errc::DegenerateStructure: return "DegenerateStructure";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::PhiMismatch: return "PhiMismatch";
    case Errc::LabelMismatch: return "LabelMismatch";
    case Errc::TooFewStructures: return "TooFewStructures";
    case Errc::LevelOverflow: return "LevelOverflow";
    case Errc::EmptyPairSet: return "EmptyPairSet";
    case Errc::DuplicateDecision: return "DuplicateDecision";
    case Errc::StoreCorruption: return "StoreCorruption";
    case Errc::IoError: return "IoError";
    case Errc::ConfigParse: return "ConfigParse";
    case Errc::MissingInput: return "MissingInput";
    case Errc::UnknownMeasure: return "UnknownMeasure";
  }
  return "UnknownError";
}

}  // namespace geometria
