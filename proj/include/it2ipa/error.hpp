#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace it2ipa {

enum class errc {
  invalid_number,
  negative_support,
  divisor_spans_zero,
  invalid_divisor,
  unknown_term,
  invalid_scale,
  empty_matrix,
  invalid_counts,
  degenerate_data,
  out_of_range,
  invalid_thresholds,
  unsupported_format,
  mixed_kinds,
  parse_error,
  io_failure,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_number: return "InvalidNumber";
    case errc::negative_support: return "NegativeSupport";
    case errc::divisor_spans_zero: return "DivisorSpansZero";
    case errc::invalid_divisor: return "InvalidDivisor";
    case errc::unknown_term: return "UnknownTerm";
    case errc::invalid_scale: return "InvalidScale";
    case errc::empty_matrix: return "EmptyMatrix";
    case errc::invalid_counts: return "InvalidCounts";
    case errc::degenerate_data: return "DegenerateData";
    case errc::out_of_range: return "OutOfRange";
    case errc::invalid_thresholds: return "InvalidThresholds";
    case errc::unsupported_format: return "UnsupportedFormat";
    case errc::mixed_kinds: return "MixedKinds";
    case errc::parse_error: return "ParseError";
    case errc::io_failure: return "IoFailure";
  }
  return "Unknown";
}

// Single exception type for the library. File/row are filled in by the
// readers so the CLI can print one diagnostic naming the location.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

  const std::optional<std::string>& file() const noexcept { return file_; }
  const std::optional<std::size_t>& row() const noexcept { return row_; }

  error& at_file(std::string path) {
    file_ = std::move(path);
    return *this;
  }
  error& at_row(std::size_t row) {
    row_ = row;
    return *this;
  }

 private:
  errc code_;
  std::optional<std::string> file_;
  std::optional<std::size_t> row_;
};

}  // namespace it2ipa
