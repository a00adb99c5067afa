#include "ase/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ase/error.hpp"
#include "ase/serialization.hpp"

namespace ase {
namespace fs = std::filesystem;
namespace {

constexpr const char* kIndexFile = "index.jsonl";

bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 128) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '-' || c == '_';
    });
}

void write_all(int fd, const std::string& data, const fs::path& path) {
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n < 0 && errno == EINTR) continue;
        if (n < 0) {
            throw Error(ErrorCode::internal_error,
                        "write " + path.string() + ": " + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

void fsync_dir(const fs::path& dir) {
    const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (fd < 0) return;
    ::fsync(fd);
    ::close(fd);
}

template <typename T>
T decode(const std::string& body, const char* what) {
    try {
        return Json::parse(body).get<T>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("corrupt ") + what + " record: " + e.what());
    }
}

template <typename T>
void newest_first(std::vector<T>& items) {
    std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.created_at > b.created_at; });
}

}  // namespace

std::string_view to_string(Store::Collection c) {
    switch (c) {
        case Store::Collection::documents: return "documents";
        case Store::Collection::summaries: return "summaries";
        case Store::Collection::attempts: return "attempts";
    }
    return "documents";
}

Store::Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    for (auto c : {Collection::documents, Collection::summaries, Collection::attempts}) {
        fs::create_directories(dir(c), ec);
        if (ec) {
            throw Error(ErrorCode::internal_error,
                        "cannot create store directory " + dir(c).string() + ": " + ec.message());
        }
    }
}

fs::path Store::dir(Collection c) const { return root_ / std::string(to_string(c)); }

void Store::write_record(Collection c, const std::string& id, const std::string& body,
                         const std::string& index_line) {
    if (!valid_id(id)) throw Error(ErrorCode::invalid_request, "invalid record id '" + id + "'");
    static std::atomic<unsigned long> counter{0};
    const fs::path d = dir(c);
    const fs::path final_path = d / (id + ".json");
    const fs::path tmp = d / ("." + id + ".json.tmp." + std::to_string(::getpid()) + "." +
                              std::to_string(counter++));

    std::lock_guard lock(writers_[static_cast<std::size_t>(c)]);
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
    if (fd < 0) {
        throw Error(ErrorCode::internal_error, "open " + tmp.string() + ": " + std::strerror(errno));
    }
    try {
        write_all(fd, body, tmp);
        if (::fsync(fd) != 0) {
            throw Error(ErrorCode::internal_error, "fsync " + tmp.string() + ": " + std::strerror(errno));
        }
    } catch (...) {
        ::close(fd);
        ::unlink(tmp.c_str());
        throw;
    }
    ::close(fd);

    if (before_publish) before_publish(tmp);

    if (::rename(tmp.c_str(), final_path.c_str()) != 0) {
        const std::string err = std::strerror(errno);
        ::unlink(tmp.c_str());
        throw Error(ErrorCode::internal_error, "rename " + tmp.string() + ": " + err);
    }
    fsync_dir(d);

    const fs::path index = d / kIndexFile;
    const int ifd = ::open(index.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (ifd >= 0) {
        write_all(ifd, index_line + "\n", index);
        ::fsync(ifd);
        ::close(ifd);
    }
}

std::optional<std::string> Store::read_record(Collection c, const std::string& id) const {
    if (!valid_id(id)) return std::nullopt;
    std::ifstream in(dir(c) / (id + ".json"), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> Store::read_all(Collection c) const {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir(c), ec)) {
        const auto name = entry.path().filename().string();
        if (name.empty() || name.front() == '.' || entry.path().extension() != ".json") continue;
        if (auto body = read_record(c, entry.path().stem().string())) out.push_back(std::move(*body));
    }
    return out;
}

void Store::put(const Document& doc) {
    const Json j = doc;
    const Json idx{{"id", doc.document_id}, {"created_at", j["created_at"]}};
    write_record(Collection::documents, doc.document_id, j.dump(2), idx.dump());
}

void Store::put(const Summary& summary) {
    if (!find_document(summary.document_id)) {
        throw Error(ErrorCode::not_found, "document '" + summary.document_id + "' not found");
    }
    const Json j = summary;
    const Json idx{{"id", summary.summary_id}, {"document_id", summary.document_id},
                   {"created_at", j["created_at"]}};
    write_record(Collection::summaries, summary.summary_id, j.dump(2), idx.dump());
}

void Store::put(const Attempt& attempt) {
    if (!find_document(attempt.document_id)) {
        throw Error(ErrorCode::not_found, "document '" + attempt.document_id + "' not found");
    }
    if (!find_summary(attempt.summary_id)) {
        throw Error(ErrorCode::not_found, "summary '" + attempt.summary_id + "' not found");
    }
    const Json j = attempt;
    const Json idx{{"id", attempt.attempt_id}, {"document_id", attempt.document_id},
                   {"created_at", j["created_at"]}};
    write_record(Collection::attempts, attempt.attempt_id, j.dump(2), idx.dump());
}

std::optional<Document> Store::find_document(const std::string& id) const {
    auto body = read_record(Collection::documents, id);
    if (!body) return std::nullopt;
    return decode<Document>(*body, "document");
}

std::optional<Summary> Store::find_summary(const std::string& id) const {
    auto body = read_record(Collection::summaries, id);
    if (!body) return std::nullopt;
    return decode<Summary>(*body, "summary");
}

std::optional<Attempt> Store::find_attempt(const std::string& id) const {
    auto body = read_record(Collection::attempts, id);
    if (!body) return std::nullopt;
    return decode<Attempt>(*body, "attempt");
}

Document Store::get_document(const std::string& id) const {
    if (auto d = find_document(id)) return std::move(*d);
    throw Error(ErrorCode::not_found, "document '" + id + "' not found");
}

Summary Store::get_summary(const std::string& id) const {
    if (auto s = find_summary(id)) return std::move(*s);
    throw Error(ErrorCode::not_found, "summary '" + id + "' not found");
}

Attempt Store::get_attempt(const std::string& id) const {
    if (auto a = find_attempt(id)) return std::move(*a);
    throw Error(ErrorCode::not_found, "attempt '" + id + "' not found");
}

std::vector<Document> Store::list_documents(std::size_t limit) const {
    std::vector<Document> docs;
    for (const auto& body : read_all(Collection::documents)) docs.push_back(decode<Document>(body, "document"));
    newest_first(docs);
    if (limit > 0 && docs.size() > limit) docs.resize(limit);
    return docs;
}

std::vector<Attempt> Store::list_attempts(const std::string& document_id, std::size_t limit) const {
    std::vector<Attempt> attempts;
    for (const auto& body : read_all(Collection::attempts)) {
        auto a = decode<Attempt>(body, "attempt");
        if (a.document_id == document_id) attempts.push_back(std::move(a));
    }
    newest_first(attempts);
    if (limit > 0 && attempts.size() > limit) attempts.resize(limit);
    return attempts;
}

bool Store::healthy() const {
    for (auto c : {Collection::documents, Collection::summaries, Collection::attempts}) {
        if (::access(dir(c).c_str(), W_OK) != 0) return false;
    }
    return true;
}

}  // namespace ase
