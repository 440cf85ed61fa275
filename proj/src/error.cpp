#include "dtc/error.hpp"

namespace dtc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::BadLabel: return "BadLabel";
    case ErrorKind::BadField: return "BadField";
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::DegenerateClass: return "DegenerateClass";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::UnknownStopwordList: return "UnknownStopwordList";
    case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeFeature: return "NegativeFeature";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::CorruptFile: return "CorruptFile";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace dtc
