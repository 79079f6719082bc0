#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "semshift/error.hpp"
#include "semshift/io.hpp"
#include "semshift/parallel.hpp"

namespace semshift {

struct CommentRecord {
    std::string id;
    std::string body;
    std::int64_t created_at = 0;  // seconds since epoch, UTC
};

struct TimePeriod {
    std::string label;
    std::int64_t start = 0;  // inclusive
    std::int64_t end = 0;    // exclusive
};

struct TokenStream {
    std::string period;
    std::vector<std::vector<std::string>> documents;

    bool operator==(const TokenStream& other) const {
        return period == other.period && documents == other.documents;
    }
};

using Stopwords = std::unordered_set<std::string>;
using LemmaTable = std::unordered_map<std::string, std::string>;

// Periods must be sorted and pairwise disjoint; start < end.
inline void validate_periods(std::span<const TimePeriod> periods) {
    for (const auto& p : periods) {
        if (p.start >= p.end)
            throw ConfigError("period " + p.label + ": start must precede end");
        if (p.label.empty()) throw ConfigError("period with empty label");
    }
    for (std::size_t i = 1; i < periods.size(); ++i) {
        if (periods[i].start < periods[i - 1].end)
            throw ConfigError("periods " + periods[i - 1].label + " and " +
                              periods[i].label + " overlap or are unsorted");
    }
}

// ---- ingestion ------------------------------------------------------------

struct IngestSchema {
    std::string id_field = "id";
    std::string body_field = "body";
    std::string time_field = "created_utc";
};

struct IngestResult {
    std::vector<CommentRecord> records;  // in file order
    std::size_t skipped = 0;             // malformed or incomplete lines
};

// One JSON object per line. Malformed lines are counted and skipped; more
// than half malformed is treated as a broken input file.
inline IngestResult ingest(std::istream& in, const IngestSchema& schema = {}) {
    IngestResult result;
    std::string line;
    std::size_t total = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++total;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains(schema.id_field) ||
            !j.contains(schema.body_field) || !j.contains(schema.time_field)) {
            ++result.skipped;
            continue;
        }
        CommentRecord rec;
        try {
            const auto& idv = j.at(schema.id_field);
            rec.id = idv.is_string() ? idv.get<std::string>() : idv.dump();
            rec.body = j.at(schema.body_field).get<std::string>();
            const auto& tv = j.at(schema.time_field);
            if (tv.is_number()) {
                rec.created_at = static_cast<std::int64_t>(tv.get<double>());
            } else if (tv.is_string()) {
                rec.created_at = std::stoll(tv.get<std::string>());
            } else {
                ++result.skipped;
                continue;
            }
        } catch (const std::exception&) {
            ++result.skipped;
            continue;
        }
        if (rec.body.empty()) {
            ++result.skipped;
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    if (total > 0 && result.skipped * 2 > total)
        throw IoError("more than half of the input lines are malformed (" +
                      std::to_string(result.skipped) + " of " + std::to_string(total) + ")");
    return result;
}

inline IngestResult ingest_file(const fs::path& path, const IngestSchema& schema = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return ingest(in, schema);
}

// ---- preprocessing --------------------------------------------------------

namespace detail {

inline bool url_starts_at(const std::string& s, std::size_t i) {
    static const char* kMarkers[] = {"http://", "https://", "www."};
    for (const char* m : kMarkers) {
        const std::size_t len = std::char_traits<char>::length(m);
        if (i + len > s.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < len; ++k) {
            if (std::tolower(static_cast<unsigned char>(s[i + k])) != m[k]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

// Token characters: ASCII alphanumerics, underscore, and any non-ASCII byte
// (UTF-8 sequences pass through untouched). Everything else separates.
inline bool is_token_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

}  // namespace detail

// Lowercase, URL-free, stopword-free, lemma-mapped tokens. Tokens shorter
// than two bytes are dropped. Stopwords are checked before the lemma table
// is applied.
inline std::vector<std::string> preprocess(const std::string& body,
                                           const Stopwords& stopwords,
                                           const LemmaTable& lemmas) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2 && !stopwords.count(cur)) {
            auto it = lemmas.find(cur);
            tokens.push_back(it == lemmas.end() ? cur : it->second);
        }
        cur.clear();
    };
    for (std::size_t i = 0; i < body.size();) {
        if (detail::url_starts_at(body, i)) {
            flush();
            while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
            continue;
        }
        const unsigned char c = static_cast<unsigned char>(body[i]);
        if (detail::is_token_char(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
        ++i;
    }
    flush();
    return tokens;
}

inline std::vector<std::string> preprocess(const CommentRecord& rec,
                                           const Stopwords& stopwords,
                                           const LemmaTable& lemmas) {
    return preprocess(rec.body, stopwords, lemmas);
}

// ---- partitioning ---------------------------------------------------------

struct PartitionResult {
    std::map<std::string, TokenStream> streams;  // period label -> stream
    std::size_t dropped = 0;                     // records outside all periods
};

// Index of the period containing t, or -1. Periods are end-exclusive, so a
// timestamp equal to one period's end belongs to the next.
inline int period_index_of(std::int64_t t, std::span<const TimePeriod> periods) {
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (t >= periods[i].start && t < periods[i].end) return static_cast<int>(i);
    }
    return -1;
}

inline PartitionResult partition(std::span<const CommentRecord> records,
                                 std::span<const TimePeriod> periods,
                                 const Stopwords& stopwords, const LemmaTable& lemmas,
                                 int workers = 1) {
    validate_periods(periods);
    PartitionResult result;
    for (const auto& p : periods) result.streams[p.label] = TokenStream{p.label, {}};

    std::vector<int> assignment(records.size());
    std::vector<std::vector<std::string>> tokenized(records.size());
    parallel_for(records.size(), workers, [&](std::size_t i) {
        assignment[i] = period_index_of(records[i].created_at, periods);
        if (assignment[i] >= 0) tokenized[i] = preprocess(records[i], stopwords, lemmas);
    });

    // Sequential pass restores deterministic document order.
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (assignment[i] < 0) {
            ++result.dropped;
            continue;
        }
        result.streams[periods[assignment[i]].label].documents.push_back(
            std::move(tokenized[i]));
    }
    return result;
}

// ---- token stream files ---------------------------------------------------

// One document per line, tokens separated by single spaces.
inline void save_tokens(const fs::path& path, const TokenStream& stream) {
    std::string out;
    for (const auto& doc : stream.documents) {
        out += join(doc, " ");
        out += '\n';
    }
    atomic_write(path, out);
}

inline TokenStream load_tokens(const fs::path& path, const std::string& period) {
    TokenStream stream;
    stream.period = period;
    for (const auto& line : read_lines(path)) {
        std::vector<std::string> doc;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ' ') {
                if (i > start) doc.emplace_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        stream.documents.push_back(std::move(doc));
    }
    return stream;
}

inline Stopwords load_stopwords(const fs::path& path) {
    Stopwords set;
    for (const auto& line : read_lines(path)) {
        const std::string w = trim(line);
        if (!w.empty()) set.insert(w);
    }
    return set;
}

// Two tab-separated columns: surface form, lemma.
inline LemmaTable load_lemmas(const fs::path& path) {
    LemmaTable table;
    for (const auto& line : read_lines(path)) {
        if (trim(line).empty()) continue;
        const auto cols = split(line, '\t');
        if (cols.size() != 2 || trim(cols[0]).empty() || trim(cols[1]).empty())
            throw IoError("malformed lemma line in " + path.string() + ": " + line);
        table[trim(cols[0])] = trim(cols[1]);
    }
    return table;
}

}  // namespace semshift
