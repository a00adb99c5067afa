#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ase::text {

/// A normalized word: lowercase, NFKC, no whitespace, no edge punctuation.
class Token {
public:
    /// Throws std::invalid_argument if `text` violates the token invariants.
    explicit Token(std::string text);

    const std::string& str() const noexcept { return text_; }

    friend bool operator==(const Token&, const Token&) = default;
    friend auto operator<=>(const Token&, const Token&) = default;

private:
    std::string text_;
};

struct TokenSequence {
    std::vector<Token> tokens;
    /// Code points in the raw source text.
    std::size_t source_length = 0;

    bool empty() const noexcept { return tokens.empty(); }
    std::size_t size() const noexcept { return tokens.size(); }
};

/// Distinct tokens. Ordered so iteration (and anything derived from it) is
/// reproducible.
class TokenSet {
public:
    TokenSet() = default;
    explicit TokenSet(std::set<std::string> members) : members_(std::move(members)) {}

    const std::set<std::string>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(std::string_view t) const { return members_.count(std::string(t)) != 0; }

private:
    std::set<std::string> members_;
};

/// Sparse term weights keyed by token text. Every stored weight is > 0.
class TermVector {
public:
    TermVector() = default;

    /// Adds `w` to the weight of `term`. Non-positive `w` is ignored.
    void add(const std::string& term, double w);

    const std::map<std::string, double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    bool empty() const noexcept { return weights_.empty(); }
    double weight(const std::string& term) const;

private:
    std::map<std::string, double> weights_;
};

using IdfTable = std::map<std::string, double>;

struct Sentence {
    std::string text;
    /// Code point offsets into the source, half-open.
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

class StopwordList {
public:
    StopwordList() = default;
    explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// Newline-delimited, one word per line; blank lines and lines starting
    /// with '#' are skipped. Entries are normalized like tokens.
    static StopwordList load(const std::filesystem::path& path);
    /// Short English function-word list.
    static const StopwordList& builtin();

    bool contains(const std::string& word) const { return words_.count(word) != 0; }
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

struct TokenizeOptions {
    bool remove_stopwords = false;
    /// Used when `remove_stopwords` is set; the built-in list when null.
    const StopwordList* stopwords = nullptr;
};

std::string normalize(std::string_view raw);

TokenSequence tokenize(std::string_view raw, const TokenizeOptions& options = {});

TokenSet to_token_set(const TokenSequence& seq);

/// Raw counts, or count x idf when `idf` is given. Throws missing_idf_term
/// when `idf` lacks a token of `seq`.
TermVector to_term_vector(const TokenSequence& seq, const IdfTable* idf = nullptr);

std::vector<Sentence> split_sentences(std::string_view raw);

/// Number of Unicode code points in a UTF-8 string.
std::size_t char_count(std::string_view utf8);

}  // namespace ase::text
