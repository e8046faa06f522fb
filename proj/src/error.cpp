#include "rdm/error.hpp"

namespace rdm {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::RowCountMismatch: return "RowCountMismatch";
    case Errc::BadSampleSize: return "BadSampleSize";
    case Errc::UnknownAttribute: return "UnknownAttribute";
    case Errc::ViewIndexOutOfRange: return "ViewIndexOutOfRange";
    case Errc::InvalidQuery: return "InvalidQuery";
    case Errc::QueryParse: return "QueryParse";
    case Errc::UniverseMismatch: return "UniverseMismatch";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::EmptySample: return "EmptySample";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateVariance: return "DegenerateVariance";
    case Errc::NonNumericAttribute: return "NonNumericAttribute";
    case Errc::EmptyView: return "EmptyView";
    case Errc::TargetLengthMismatch: return "TargetLengthMismatch";
    case Errc::SameView: return "SameView";
    case Errc::ViewAlreadyPresent: return "ViewAlreadyPresent";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::DatasetTooSmall: return "DatasetTooSmall";
    case Errc::BadFoldCount: return "BadFoldCount";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::TypeError: return "TypeError";
    case Errc::MissingRequired: return "MissingRequired";
    case Errc::Io: return "Io";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace rdm
