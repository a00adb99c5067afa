#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ase {

/// Closed set of machine-readable failure codes. Every engine failure maps to
/// exactly one of these; the HTTP layer and the CLI branch on the code only.
enum class ErrorCode {
    invalid_request,
    empty_text,
    empty_understanding,
    empty_document,
    empty_vector,
    empty_set,
    empty_tokens,
    missing_idf_term,
    dimension_mismatch,
    zero_magnitude,
    out_of_range,
    not_found,
    summary_document_mismatch,
    extractor_failed,
    provider_unavailable,
    provider_contract,
    reduce_depth_exceeded,
    parse_error,
    duplicate_id,
    all_entries_failed,
    internal_error,
};

std::string_view to_string(ErrorCode code);
int http_status(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Transport-level provider failure. `retryable` is false when the remote side
/// answered with a client error that a retry cannot fix.
class ProviderUnavailable : public Error {
public:
    ProviderUnavailable(const std::string& message, bool retryable)
        : Error(ErrorCode::provider_unavailable, message), retryable_(retryable) {}

    bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ExtractorFailed : public Error {
public:
    ExtractorFailed(const std::string& message, std::string stderr_text)
        : Error(ErrorCode::extractor_failed, message), stderr_text_(std::move(stderr_text)) {}

    const std::string& stderr_text() const noexcept { return stderr_text_; }

private:
    std::string stderr_text_;
};

}  // namespace ase
