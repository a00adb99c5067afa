#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ase/ingestion.hpp"
#include "ase/scoring.hpp"
#include "ase/summarizer.hpp"

namespace ase {

/// File-backed record store.
///
///   <root>/documents/<id>.json   <root>/documents/index.jsonl
///   <root>/summaries/<id>.json   <root>/summaries/index.jsonl
///   <root>/attempts/<id>.json    <root>/attempts/index.jsonl
///
/// Records are written to a temporary file, flushed, and renamed into place.
/// Writes to one collection are serialized; reads take no lock.
class Store {
public:
    enum class Collection { documents, summaries, attempts };

    explicit Store(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }

    void put(const Document& doc);
    /// Throws not_found if the summary's document is missing.
    void put(const Summary& summary);
    /// Throws not_found if the attempt's document or summary is missing.
    void put(const Attempt& attempt);

    std::optional<Document> find_document(const std::string& id) const;
    std::optional<Summary> find_summary(const std::string& id) const;
    std::optional<Attempt> find_attempt(const std::string& id) const;

    /// Throw not_found when absent.
    Document get_document(const std::string& id) const;
    Summary get_summary(const std::string& id) const;
    Attempt get_attempt(const std::string& id) const;

    /// Newest first. `limit` of 0 means no limit.
    std::vector<Document> list_documents(std::size_t limit = 0) const;
    std::vector<Attempt> list_attempts(const std::string& document_id, std::size_t limit = 0) const;

    /// Writable root with all collection directories present.
    bool healthy() const;

    /// Test hook invoked after the temporary file is durable and before the
    /// rename that publishes it.
    std::function<void(const std::filesystem::path& tmp)> before_publish;

private:
    std::filesystem::path dir(Collection c) const;
    void write_record(Collection c, const std::string& id, const std::string& body,
                      const std::string& index_line);
    std::optional<std::string> read_record(Collection c, const std::string& id) const;
    std::vector<std::string> read_all(Collection c) const;

    std::filesystem::path root_;
    mutable std::array<std::mutex, 3> writers_;
};

std::string_view to_string(Store::Collection c);

}  // namespace ase
