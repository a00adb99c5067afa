#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ase/clock.hpp"
#include "ase/text.hpp"

namespace ase {

enum class DocumentSource { inline_text, text_file, pdf_extractor };

std::string_view to_string(DocumentSource s);
DocumentSource parse_document_source(std::string_view s);

struct Document {
    std::string document_id;
    std::string title;
    /// Line endings normalized to '\n'.
    std::string text;
    std::vector<text::Sentence> sentences;
    Timestamp created_at{};
    DocumentSource source = DocumentSource::inline_text;

    friend bool operator==(const Document&, const Document&) = default;
};

struct Chunk {
    std::size_t index = 0;
    std::string text;
    std::size_t start_sentence = 0;  // inclusive
    std::size_t end_sentence = 0;    // exclusive

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Smallest chunk size chunk_text accepts.
inline constexpr std::size_t kMinChunkChars = 200;

/// Builds a Document (fresh id, derived sentences). Throws empty_text when
/// `text` is blank.
Document make_document(std::string title, std::string_view text, DocumentSource source,
                       Timestamp created_at);

struct ExtractorOptions {
    /// Whitespace-separated argv template; every "{input}" is replaced by the
    /// PDF path. Executed directly, not through a shell.
    std::string command;
    std::chrono::milliseconds timeout{60'000};
};

/// Runs the extractor and returns its standard output. Throws not_found for
/// a missing input file, extractor_failed for nonzero exit, timeout or empty
/// output (carrying the captured stderr).
std::string run_pdf_extractor(const std::filesystem::path& pdf_path,
                              const ExtractorOptions& options);

/// Greedy packing: sentences join a chunk (single-space separated) while the
/// chunk stays within `max_chars` code points. A longer sentence stands alone.
std::vector<Chunk> chunk_sentences(std::span<const text::Sentence> sentences,
                                   std::size_t max_chars);

/// chunk_sentences over a document; `max_chars` must be >= kMinChunkChars.
std::vector<Chunk> chunk_text(const Document& doc, std::size_t max_chars);

/// Sentence texts joined with single spaces.
std::string joined_sentences(const Document& doc);

}  // namespace ase
