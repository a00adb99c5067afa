#include "ase/ingestion.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <sstream>

#include "ase/error.hpp"

namespace ase {
namespace {

std::string normalize_line_endings(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
        } else {
            out.push_back(in[i]);
        }
    }
    return out;
}

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\n\r\f\v") == std::string_view::npos;
}

std::vector<std::string> build_argv(const std::string& command, const std::string& input) {
    std::vector<std::string> argv;
    std::istringstream in(command);
    std::string word;
    while (in >> word) {
        for (auto pos = word.find("{input}"); pos != std::string::npos;
             pos = word.find("{input}", pos + input.size())) {
            word.replace(pos, 7, input);
        }
        argv.push_back(word);
    }
    return argv;
}

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) {
            throw Error(ErrorCode::internal_error, std::string("pipe: ") + std::strerror(errno));
        }
    }
    ~Pipe() {
        for (int f : fd) {
            if (f >= 0) ::close(f);
        }
    }
    void close_end(int i) {
        if (fd[i] >= 0) ::close(fd[i]);
        fd[i] = -1;
    }
};

struct ProcessResult {
    int exit_status = -1;
    bool timed_out = false;
    std::string out;
    std::string err;
};

ProcessResult run_process(const std::vector<std::string>& args, std::chrono::milliseconds timeout) {
    Pipe out_pipe;
    Pipe err_pipe;
    std::vector<char*> argv;
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) throw Error(ErrorCode::internal_error, std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        ::dup2(out_pipe.fd[1], STDOUT_FILENO);
        ::dup2(err_pipe.fd[1], STDERR_FILENO);
        ::execvp(argv[0], argv.data());
        const std::string msg = std::string("exec ") + argv[0] + ": " + std::strerror(errno) + "\n";
        (void)!::write(STDERR_FILENO, msg.data(), msg.size());
        ::_exit(127);
    }
    out_pipe.close_end(1);
    err_pipe.close_end(1);

    ProcessResult result;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::array<pollfd, 2> fds{pollfd{out_pipe.fd[0], POLLIN, 0}, pollfd{err_pipe.fd[0], POLLIN, 0}};
    std::array<std::string*, 2> sinks{&result.out, &result.err};
    int open_fds = 2;
    std::array<char, 4096> buf{};
    while (open_fds > 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            result.timed_out = true;
            ::kill(pid, SIGKILL);
            break;
        }
        const int rc = ::poll(fds.data(), fds.size(), static_cast<int>(left.count()));
        if (rc < 0 && errno == EINTR) continue;
        if (rc < 0) break;
        for (std::size_t i = 0; i < fds.size(); ++i) {
            if (fds[i].fd < 0 || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
            const ssize_t n = ::read(fds[i].fd, buf.data(), buf.size());
            if (n > 0) {
                sinks[i]->append(buf.data(), static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                fds[i].fd = -1;
                --open_fds;
            }
        }
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (!result.timed_out) {
        result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    }
    return result;
}

}  // namespace

std::string_view to_string(DocumentSource s) {
    switch (s) {
        case DocumentSource::inline_text: return "inline_text";
        case DocumentSource::text_file: return "text_file";
        case DocumentSource::pdf_extractor: return "pdf_extractor";
    }
    return "inline_text";
}

DocumentSource parse_document_source(std::string_view s) {
    if (s == "inline_text") return DocumentSource::inline_text;
    if (s == "text_file") return DocumentSource::text_file;
    if (s == "pdf_extractor") return DocumentSource::pdf_extractor;
    throw Error(ErrorCode::parse_error, "unknown document source '" + std::string(s) + "'");
}

Document make_document(std::string title, std::string_view text, DocumentSource source,
                       Timestamp created_at) {
    std::string normalized = normalize_line_endings(text);
    if (is_blank(normalized)) throw Error(ErrorCode::empty_text, "document text is empty");
    Document doc;
    doc.document_id = new_uuid();
    doc.title = std::move(title);
    doc.sentences = text::split_sentences(normalized);
    doc.text = std::move(normalized);
    doc.created_at = created_at;
    doc.source = source;
    return doc;
}

std::string run_pdf_extractor(const std::filesystem::path& pdf_path,
                              const ExtractorOptions& options) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(pdf_path, ec)) {
        throw Error(ErrorCode::not_found, "file not found: " + pdf_path.string());
    }
    if (is_blank(options.command)) {
        throw Error(ErrorCode::invalid_request, "pdf_extractor_command is not configured");
    }
    const auto args = build_argv(options.command, pdf_path.string());
    ProcessResult r = run_process(args, options.timeout);
    if (r.timed_out) {
        throw ExtractorFailed("extractor timed out after " + std::to_string(options.timeout.count()) +
                                  " ms",
                              std::move(r.err));
    }
    if (r.exit_status != 0) {
        throw ExtractorFailed("extractor exited with status " + std::to_string(r.exit_status),
                              std::move(r.err));
    }
    if (is_blank(r.out)) throw ExtractorFailed("extractor produced no output", std::move(r.err));
    return std::move(r.out);
}

std::vector<Chunk> chunk_sentences(std::span<const text::Sentence> sentences,
                                   std::size_t max_chars) {
    std::vector<Chunk> chunks;
    Chunk current;
    std::size_t current_chars = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const std::size_t len = sentences[i].end - sentences[i].start;
        if (current_chars > 0 && current_chars + 1 + len > max_chars) {
            current.end_sentence = i;
            chunks.push_back(std::move(current));
            current = Chunk{};
            current_chars = 0;
        }
        if (current_chars == 0) {
            current.index = chunks.size();
            current.start_sentence = i;
            current.text = sentences[i].text;
            current_chars = len;
        } else {
            current.text += ' ';
            current.text += sentences[i].text;
            current_chars += 1 + len;
        }
    }
    if (current_chars > 0) {
        current.end_sentence = sentences.size();
        chunks.push_back(std::move(current));
    }
    return chunks;
}

std::vector<Chunk> chunk_text(const Document& doc, std::size_t max_chars) {
    if (max_chars < kMinChunkChars) {
        throw Error(ErrorCode::invalid_request, "chunk size must be at least " +
                                                    std::to_string(kMinChunkChars) + " characters");
    }
    return chunk_sentences(doc.sentences, max_chars);
}

std::string joined_sentences(const Document& doc) {
    std::string out;
    for (const auto& s : doc.sentences) {
        if (!out.empty()) out += ' ';
        out += s.text;
    }
    return out;
}

}  // namespace ase
