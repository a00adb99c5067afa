#include "ase/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <array>
#include <fstream>
#include <stdexcept>

#include "ase/error.hpp"

namespace ase::text {
namespace {

const icu::Normalizer2& nfkc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw Error(ErrorCode::internal_error, "ICU NFKC normalizer unavailable");
    }
    return *n;
}

icu::UnicodeString nfkc_normalize(const icu::UnicodeString& s) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString out = nfkc().normalize(s, status);
    if (U_FAILURE(status)) {
        throw Error(ErrorCode::internal_error, std::string("NFKC normalization failed: ") +
                                                   u_errorName(status));
    }
    return out;
}

void append_utf8(std::string& out, UChar32 c) {
    std::array<char, U8_MAX_LENGTH> buf{};
    int32_t len = 0;
    UBool err = false;
    U8_APPEND(reinterpret_cast<uint8_t*>(buf.data()), len, U8_MAX_LENGTH, c, err);
    if (!err) out.append(buf.data(), static_cast<std::size_t>(len));
}

struct Decoded {
    std::vector<UChar32> cps;
    /// Byte offset of each code point, plus a trailing sentinel at size().
    std::vector<std::size_t> byte_at;
};

Decoded decode(std::string_view s) {
    Decoded d;
    d.cps.reserve(s.size());
    d.byte_at.reserve(s.size() + 1);
    const auto* p = reinterpret_cast<const uint8_t*>(s.data());
    const auto len = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < len) {
        d.byte_at.push_back(static_cast<std::size_t>(i));
        UChar32 c = 0;
        U8_NEXT(p, i, len, c);
        d.cps.push_back(c < 0 ? 0xFFFD : c);
    }
    d.byte_at.push_back(s.size());
    return d;
}

bool is_word_char(UChar32 c) {
    if (u_isalnum(c)) return true;
    const auto mask = U_GET_GC_MASK(c);
    return (mask & U_GC_M_MASK) != 0;
}

bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

bool is_terminator(UChar32 c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(UChar32 c) {
    switch (c) {
        case '"': case '\'': case ')': case ']': case 0x201D: case 0x2019: case 0xBB:
            return true;
        default:
            return false;
    }
}

bool is_edge_punct(UChar32 c) { return u_ispunct(c) != 0; }

constexpr std::array<std::string_view, 7> kAbbreviations = {
    "e.g.", "i.e.", "etc.", "dr.", "mr.", "ms.", "vs.",
};

bool is_abbreviation(const Decoded& d, std::size_t period) {
    std::size_t b = period;
    while (b > 0 && !u_isUWhiteSpace(d.cps[b - 1])) --b;
    // Drop opening brackets/quotes glued to the word, e.g. "(e.g."
    while (b < period && !u_isalnum(d.cps[b])) ++b;
    std::string word;
    for (std::size_t i = b; i <= period; ++i) append_utf8(word, u_tolower(d.cps[i]));
    for (auto abbr : kAbbreviations) {
        if (word == abbr) return true;
    }
    return false;
}

}  // namespace

Token::Token(std::string text) : text_(std::move(text)) {
    if (text_.empty()) throw std::invalid_argument("token must be non-empty");
    const Decoded d = decode(text_);
    for (UChar32 c : d.cps) {
        if (u_isUWhiteSpace(c)) throw std::invalid_argument("token contains whitespace: " + text_);
    }
    if (is_edge_punct(d.cps.front()) || is_edge_punct(d.cps.back())) {
        throw std::invalid_argument("token has edge punctuation: " + text_);
    }
}

void TermVector::add(const std::string& term, double w) {
    if (!(w > 0.0)) return;
    weights_[term] += w;
}

double TermVector::weight(const std::string& term) const {
    auto it = weights_.find(term);
    return it == weights_.end() ? 0.0 : it->second;
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::not_found, "stopword file not found: " + path.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::string w = normalize(line);
        if (w.empty() || w.front() == '#') continue;
        words.insert(std::move(w));
    }
    return StopwordList(std::move(words));
}

const StopwordList& StopwordList::builtin() {
    static const StopwordList list(std::unordered_set<std::string>{
        "a", "an", "and", "are", "as", "at", "be", "been", "but", "by", "for", "from",
        "had", "has", "have", "he", "her", "his", "i", "if", "in", "into", "is", "it",
        "its", "of", "on", "or", "our", "she", "so", "than", "that", "the", "their",
        "them", "then", "there", "these", "they", "this", "those", "to", "was", "we",
        "were", "which", "while", "who", "will", "with", "you", "your",
    });
    return list;
}

std::string normalize(std::string_view raw) {
    if (raw.empty()) return {};
    icu::UnicodeString s = icu::UnicodeString::fromUTF8(
        icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    s = nfkc_normalize(s);
    s.toLower(icu::Locale::getRoot());
    // Case mapping can leave NFKC (e.g. U+0130); fold once more.
    s = nfkc_normalize(s);

    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (int32_t i = 0; i < s.length();) {
        UChar32 c = s.char32At(i);
        i += U16_LENGTH(c);
        if (u_isUWhiteSpace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        append_utf8(out, c);
    }
    return out;
}

TokenSequence tokenize(std::string_view raw, const TokenizeOptions& options) {
    TokenSequence seq;
    seq.source_length = char_count(raw);
    const std::string norm = normalize(raw);
    const Decoded d = decode(norm);
    const StopwordList& stop =
        options.stopwords != nullptr ? *options.stopwords : StopwordList::builtin();

    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        if (!(options.remove_stopwords && stop.contains(current))) {
            seq.tokens.emplace_back(std::move(current));
        }
        current.clear();
    };

    const std::size_t n = d.cps.size();
    for (std::size_t i = 0; i < n; ++i) {
        const UChar32 c = d.cps[i];
        if (is_word_char(c)) {
            // A leading combining mark cannot start a token.
            if (current.empty() && !u_isalnum(c)) continue;
            append_utf8(current, c);
        } else if (is_apostrophe(c) && !current.empty() && i + 1 < n &&
                   u_isalnum(d.cps[i + 1])) {
            current.push_back('\'');
        } else {
            flush();
        }
    }
    flush();
    return seq;
}

TokenSet to_token_set(const TokenSequence& seq) {
    std::set<std::string> members;
    for (const auto& t : seq.tokens) members.insert(t.str());
    return TokenSet(std::move(members));
}

TermVector to_term_vector(const TokenSequence& seq, const IdfTable* idf) {
    std::map<std::string, double> counts;
    for (const auto& t : seq.tokens) counts[t.str()] += 1.0;
    TermVector v;
    for (const auto& [term, count] : counts) {
        double w = count;
        if (idf != nullptr) {
            auto it = idf->find(term);
            if (it == idf->end()) {
                throw Error(ErrorCode::missing_idf_term, "idf table has no entry for '" + term + "'");
            }
            if (!(it->second > 0.0)) {
                throw Error(ErrorCode::missing_idf_term,
                            "idf weight for '" + term + "' must be positive");
            }
            w = count * it->second;
        }
        v.add(term, w);
    }
    return v;
}

std::vector<Sentence> split_sentences(std::string_view raw) {
    std::vector<Sentence> out;
    const Decoded d = decode(raw);
    const std::size_t n = d.cps.size();

    auto skip_ws = [&](std::size_t i) {
        while (i < n && u_isUWhiteSpace(d.cps[i])) ++i;
        return i;
    };
    auto emit = [&](std::size_t start, std::size_t end) {
        while (end > start && u_isUWhiteSpace(d.cps[end - 1])) --end;
        if (end <= start) return;
        const std::size_t b0 = d.byte_at[start];
        const std::size_t b1 = d.byte_at[end];
        out.push_back(Sentence{std::string(raw.substr(b0, b1 - b0)), start, end});
    };

    std::size_t start = skip_ws(0);
    std::size_t pos = start;
    while (pos < n) {
        if (!is_terminator(d.cps[pos])) {
            ++pos;
            continue;
        }
        std::size_t last = pos;
        while (last + 1 < n && is_terminator(d.cps[last + 1])) ++last;
        while (last + 1 < n && is_closer(d.cps[last + 1])) ++last;
        const bool at_boundary = last + 1 == n || u_isUWhiteSpace(d.cps[last + 1]);
        if (!at_boundary) {
            pos = last + 1;
            continue;
        }
        const bool lone_period = d.cps[pos] == '.' && (pos + 1 == n || !is_terminator(d.cps[pos + 1]));
        if (lone_period && is_abbreviation(d, pos)) {
            pos = last + 1;
            continue;
        }
        emit(start, last + 1);
        start = skip_ws(last + 1);
        pos = start;
    }
    if (start < n) emit(start, n);
    return out;
}

std::size_t char_count(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

}  // namespace ase::text
