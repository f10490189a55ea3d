#include "bladeinspect/error.hpp"

#include <string>

namespace bladeinspect {

const char* to_string(PpmErrorKind kind) {
  switch (kind) {
    case PpmErrorKind::kBadMagic: return "bad magic";
    case PpmErrorKind::kMalformedHeader: return "malformed header";
    case PpmErrorKind::kBadMaxval: return "unsupported maxval";
    case PpmErrorKind::kZeroDimension: return "zero dimension";
    case PpmErrorKind::kTruncated: return "truncated payload";
  }
  return "unknown";
}

PpmError::PpmError(PpmErrorKind kind, std::size_t offset, const std::string& detail)
    : Error("ppm: " + std::string(to_string(kind)) + " at byte " + std::to_string(offset) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      offset_(offset) {}

const char* to_string(CsvErrorKind kind) {
  switch (kind) {
    case CsvErrorKind::kBadHeader: return "bad header";
    case CsvErrorKind::kWrongColumnCount: return "wrong column count";
    case CsvErrorKind::kMissingId: return "missing id";
    case CsvErrorKind::kDuplicateId: return "duplicate id";
    case CsvErrorKind::kEmptyLabel: return "empty label";
    case CsvErrorKind::kBadNumber: return "bad number";
    case CsvErrorKind::kEmpty: return "no data";
  }
  return "unknown";
}

CsvError::CsvError(CsvErrorKind kind, std::size_t line, const std::string& detail)
    : Error("csv: " + std::string(to_string(kind)) + " on line " + std::to_string(line) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      line_(line) {}

}  // namespace bladeinspect
