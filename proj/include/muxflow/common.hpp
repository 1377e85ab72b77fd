#ifndef MUXFLOW_COMMON_HPP
#define MUXFLOW_COMMON_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace muxflow {

// Base for all library errors; subcommands map these to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MalformedUrl : public Error { public: using Error::Error; };
class UnknownDomain : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class EmptyWindow : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };
class ZeroStrength : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class MultiDriverUnsupported : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

// Source classes ordered TM < TF < UM < UF; this order fixes every
// deterministic iteration and export in the pipeline.
enum class SourceClass : int { TM = 0, TF = 1, UM = 2, UF = 3 };

inline constexpr std::array<SourceClass, 4> kAllClasses = {
    SourceClass::TM, SourceClass::TF, SourceClass::UM, SourceClass::UF};

inline constexpr const char* to_string(SourceClass c) {
  switch (c) {
    case SourceClass::TM: return "TM";
    case SourceClass::TF: return "TF";
    case SourceClass::UM: return "UM";
    case SourceClass::UF: return "UF";
  }
  return "??";
}

SourceClass source_class_from_string(std::string_view s);

inline constexpr bool is_trustworthy(SourceClass c) {
  return c == SourceClass::TM || c == SourceClass::TF;
}
inline constexpr bool is_mainstream(SourceClass c) {
  return c == SourceClass::TM || c == SourceClass::UM;
}

// --- time utilities (all UTC) ---

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int year, int month, int day);

// Parses "YYYY-MM-DD" into an epoch day. Throws ParseError.
std::int64_t parse_date(std::string_view s);

// Parses an RFC 3339 timestamp ("2022-02-24T06:30:00Z", optional
// fractional seconds, 'Z' or +-hh:mm offset) into epoch seconds.
// Throws ParseError.
std::int64_t parse_rfc3339(std::string_view s);

std::string format_date(std::int64_t epoch_day);

// Numeric CSV convention: '.' decimal separator, 12 significant digits.
std::string format_number(double v);

}  // namespace muxflow

#endif
