#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chrono_rdf {

enum class ErrorCode {
  kSyntaxError,
  kUnknownPrefix,
  kUnsupportedFeature,
  kBadRegex,
  kVariableInDelta,
  kPrefixInDelta,
  kNoHistory,
  kBrokenChain,
  kBadDelta,
  kBeforeCreation,
  kNoSuchSnapshot,
  kUnboundedQuery,
  kExplosionLimit,
  kCacheIO,
  kConfigError,
  kNetworkError,
  kSpecError,
};

// Stable identifier used in CLI error documents, e.g. "BeforeCreation".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Positions are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message,
              ErrorCode code = ErrorCode::kSyntaxError);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

class NetworkError : public Error {
 public:
  NetworkError(std::string url, int status, const std::string& message);

  const std::string& url() const { return url_; }
  // HTTP status, or 0 when the request never produced a response.
  int status() const { return status_; }

 private:
  std::string url_;
  int status_;
};

}  // namespace chrono_rdf
