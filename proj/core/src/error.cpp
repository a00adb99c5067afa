#include "ase/error.hpp"

namespace ase {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_request: return "invalid_request";
        case ErrorCode::empty_text: return "empty_text";
        case ErrorCode::empty_understanding: return "empty_understanding";
        case ErrorCode::empty_document: return "empty_document";
        case ErrorCode::empty_vector: return "empty_vector";
        case ErrorCode::empty_set: return "empty_set";
        case ErrorCode::empty_tokens: return "empty_tokens";
        case ErrorCode::missing_idf_term: return "missing_idf_term";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::zero_magnitude: return "zero_magnitude";
        case ErrorCode::out_of_range: return "out_of_range";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::summary_document_mismatch: return "summary_document_mismatch";
        case ErrorCode::extractor_failed: return "extractor_failed";
        case ErrorCode::provider_unavailable: return "provider_unavailable";
        case ErrorCode::provider_contract: return "provider_contract";
        case ErrorCode::reduce_depth_exceeded: return "reduce_depth_exceeded";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::duplicate_id: return "duplicate_id";
        case ErrorCode::all_entries_failed: return "all_entries_failed";
        case ErrorCode::internal_error: return "internal_error";
    }
    return "internal_error";
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_request:
        case ErrorCode::empty_text:
        case ErrorCode::empty_understanding:
        case ErrorCode::empty_document:
        case ErrorCode::empty_vector:
        case ErrorCode::empty_set:
        case ErrorCode::empty_tokens:
        case ErrorCode::missing_idf_term:
        case ErrorCode::out_of_range:
        case ErrorCode::parse_error:
        case ErrorCode::duplicate_id:
            return 400;
        case ErrorCode::not_found:
            return 404;
        case ErrorCode::summary_document_mismatch:
            return 409;
        case ErrorCode::extractor_failed:
        case ErrorCode::all_entries_failed:
            return 422;
        case ErrorCode::provider_unavailable:
        case ErrorCode::provider_contract:
        case ErrorCode::reduce_depth_exceeded:
            return 502;
        case ErrorCode::dimension_mismatch:
        case ErrorCode::zero_magnitude:
        case ErrorCode::internal_error:
            return 500;
    }
    return 500;
}

}  // namespace ase
