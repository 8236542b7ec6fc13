#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pavekit {

enum class Errc {
  // generic
  InvalidArgument,
  IoError,
  // labels
  UnknownLabel,
  // ingest
  MalformedLine,
  ClassIndexOutOfRange,
  CoordOutOfRange,
  MalformedXml,
  MissingDims,
  InvertedBox,
  MalformedJson,
  DanglingImageId,
  NegativeExtent,
  UnknownColorFolder,
  MissingColumn,
  PciOutOfRange,
  DuplicateImageId,
  UnsupportedImage,
  // harmonize
  DegenerateBox,
  BoxOutsideImage,
  EmptyAnnotation,
  // generation
  MissingTaskBlock,
  IncompatibleAnnotation,
  ProviderError,
  TurnCountOutOfRange,
  InfeasibleMix,
  TemplateError,
  // evaluation
  UnpairedRecord,
  EmptyPredictionSet,
  JudgeParseError,
  CorpusTooSmall,
  LengthMismatch,
  EmptyInput,
  EmptyCandidate,
  // orchestration
  ManifestError,
  UnknownRecordId,
  ConfigError,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::ClassIndexOutOfRange: return "ClassIndexOutOfRange";
    case Errc::CoordOutOfRange: return "CoordOutOfRange";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::MissingDims: return "MissingDims";
    case Errc::InvertedBox: return "InvertedBox";
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::DanglingImageId: return "DanglingImageId";
    case Errc::NegativeExtent: return "NegativeExtent";
    case Errc::UnknownColorFolder: return "UnknownColorFolder";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::PciOutOfRange: return "PciOutOfRange";
    case Errc::DuplicateImageId: return "DuplicateImageId";
    case Errc::UnsupportedImage: return "UnsupportedImage";
    case Errc::DegenerateBox: return "DegenerateBox";
    case Errc::BoxOutsideImage: return "BoxOutsideImage";
    case Errc::EmptyAnnotation: return "EmptyAnnotation";
    case Errc::MissingTaskBlock: return "MissingTaskBlock";
    case Errc::IncompatibleAnnotation: return "IncompatibleAnnotation";
    case Errc::ProviderError: return "ProviderError";
    case Errc::TurnCountOutOfRange: return "TurnCountOutOfRange";
    case Errc::InfeasibleMix: return "InfeasibleMix";
    case Errc::TemplateError: return "TemplateError";
    case Errc::UnpairedRecord: return "UnpairedRecord";
    case Errc::EmptyPredictionSet: return "EmptyPredictionSet";
    case Errc::JudgeParseError: return "JudgeParseError";
    case Errc::CorpusTooSmall: return "CorpusTooSmall";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptyCandidate: return "EmptyCandidate";
    case Errc::ManifestError: return "ManifestError";
    case Errc::UnknownRecordId: return "UnknownRecordId";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace pavekit
