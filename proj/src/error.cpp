#include "chrono_rdf/error.hpp"

namespace chrono_rdf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownPrefix: return "UnknownPrefix";
    case ErrorCode::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::kBadRegex: return "BadRegex";
    case ErrorCode::kVariableInDelta: return "VariableInDelta";
    case ErrorCode::kPrefixInDelta: return "PrefixInDelta";
    case ErrorCode::kNoHistory: return "NoHistory";
    case ErrorCode::kBrokenChain: return "BrokenChain";
    case ErrorCode::kBadDelta: return "BadDelta";
    case ErrorCode::kBeforeCreation: return "BeforeCreation";
    case ErrorCode::kNoSuchSnapshot: return "NoSuchSnapshot";
    case ErrorCode::kUnboundedQuery: return "UnboundedQuery";
    case ErrorCode::kExplosionLimit: return "ExplosionLimit";
    case ErrorCode::kCacheIO: return "CacheIO";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kNetworkError: return "NetworkError";
    case ErrorCode::kSpecError: return "SpecError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column,
                         const std::string& message, ErrorCode code)
    : Error(code, "line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

NetworkError::NetworkError(std::string url, int status,
                           const std::string& message)
    : Error(ErrorCode::kNetworkError,
            url + (status ? " (HTTP " + std::to_string(status) + ")" : "") +
                ": " + message),
      url_(std::move(url)),
      status_(status) {}

}  // namespace chrono_rdf
