#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "semshift/corpus.hpp"
#include "semshift/error.hpp"
#include "semshift/io.hpp"
#include "semshift/rng.hpp"
#include "semshift/vec.hpp"

namespace semshift {

struct TrainParams {
    int dim = 100;
    int window = 5;
    std::uint64_t min_count = 5;
    int negatives = 5;
    int epochs = 5;
    float learning_rate = 0.025f;
    double unigram_power = 0.75;
    double subsample = 0.0;  // 0 disables frequent-word subsampling
    std::uint64_t seed = 1;
    int workers = 1;  // >1 is hogwild-style and only approximately reproducible
    std::size_t unigram_table_size = 1'000'000;
};

// A trained per-period vector space. Vocabulary order is descending
// frequency with lexicographic tie-breaks; that order is the canonical
// "first N terms" order used downstream.
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;

    EmbeddingSpace(std::string period, int dim, std::vector<std::string> terms,
                   std::vector<std::uint64_t> freqs, std::vector<float> vectors,
                   TrainParams hyperparams = {})
        : period_(std::move(period)),
          dim_(dim),
          terms_(std::move(terms)),
          freqs_(std::move(freqs)),
          vectors_(std::move(vectors)),
          hyper_(hyperparams) {
        if (terms_.size() != freqs_.size() || vectors_.size() != terms_.size() * dim_)
            throw Error("embedding space: inconsistent vocabulary/vector shapes");
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
                throw Error("embedding space: duplicate term " + terms_[i]);
        }
    }

    const std::string& period() const { return period_; }
    int dim() const { return dim_; }
    std::size_t size() const { return terms_.size(); }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::string& term(std::size_t i) const { return terms_[i]; }
    std::uint64_t freq(std::size_t i) const { return freqs_[i]; }
    const TrainParams& hyperparams() const { return hyper_; }

    bool contains(const std::string& t) const { return index_.count(t) > 0; }

    std::uint32_t index_of(const std::string& t) const {
        auto it = index_.find(t);
        if (it == index_.end()) throw LookupError("term not in vocabulary: " + t);
        return it->second;
    }

    std::span<const float> vector(std::size_t i) const {
        return {vectors_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const float> vector(const std::string& t) const { return vector(index_of(t)); }

    double cosine(const std::string& a, const std::string& b) const {
        return semshift::cosine(vector(a), vector(b));
    }

    // "semshift-embedding v1 <dim> <vocab_size>" then one term per line.
    void save(const fs::path& path) const {
        std::string out = "semshift-embedding v1 " + std::to_string(dim_) + ' ' +
                          std::to_string(terms_.size()) + '\n';
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            out += terms_[i];
            out += ' ';
            out += std::to_string(freqs_[i]);
            for (int d = 0; d < dim_; ++d) {
                out += ' ';
                out += fmt_float(vectors_[i * dim_ + d]);
            }
            out += '\n';
        }
        atomic_write(path, out);
    }

    static EmbeddingSpace load(const fs::path& path, const std::string& period = "") {
        const auto lines = read_lines(path);
        if (lines.empty()) throw IoError("empty model file " + path.string());
        const auto header = split(lines[0], ' ');
        if (header.size() != 4 || header[0] != "semshift-embedding" || header[1] != "v1")
            throw IoError("bad model header in " + path.string());
        const int dim = std::stoi(header[2]);
        const std::size_t vocab = std::stoul(header[3]);
        if (dim < 1 || lines.size() != vocab + 1)
            throw IoError("model header disagrees with body in " + path.string());

        std::vector<std::string> terms;
        std::vector<std::uint64_t> freqs;
        std::vector<float> vectors;
        terms.reserve(vocab);
        freqs.reserve(vocab);
        vectors.reserve(vocab * dim);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto cols = split(lines[i], ' ');
            if (cols.size() != static_cast<std::size_t>(dim) + 2)
                throw IoError("bad model line " + std::to_string(i + 1) + " in " + path.string());
            terms.push_back(cols[0]);
            freqs.push_back(std::stoull(cols[1]));
            for (int d = 0; d < dim; ++d) vectors.push_back(std::strtof(cols[2 + d].c_str(), nullptr));
        }
        return EmbeddingSpace(period, dim, std::move(terms), std::move(freqs), std::move(vectors));
    }

private:
    std::string period_;
    int dim_ = 0;
    std::vector<std::string> terms_;
    std::vector<std::uint64_t> freqs_;
    std::vector<float> vectors_;  // row-major, size() * dim
    std::unordered_map<std::string, std::uint32_t> index_;
    TrainParams hyper_;
};

namespace detail {

// Classic word2vec linear congruential generator; kept so that single-worker
// runs are bit-reproducible.
struct W2vRng {
    std::uint64_t state;
    explicit W2vRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state = state * 25214903917ULL + 11ULL;
        return state;
    }
    float next_unit() { return static_cast<float>(next() & 0xFFFF) / 65536.0f; }
};

constexpr int kMaxExp = 6;
constexpr int kExpTableSize = 1000;

inline const std::vector<float>& sigmoid_table() {
    static const std::vector<float> table = [] {
        std::vector<float> t(kExpTableSize);
        for (int i = 0; i < kExpTableSize; ++i) {
            const double x = (static_cast<double>(i) / kExpTableSize * 2.0 - 1.0) * kMaxExp;
            const double e = std::exp(x);
            t[i] = static_cast<float>(e / (e + 1.0));
        }
        return t;
    }();
    return table;
}

}  // namespace detail

// Trains one independent CBOW model with negative sampling over a single
// period's stream. With workers == 1 and a fixed seed the result is
// bit-reproducible; with more workers, vector updates are unsynchronized
// (hogwild) and results vary slightly run to run.
inline EmbeddingSpace train(const TokenStream& stream, const TrainParams& params) {
    if (stream.documents.empty()) throw Error("train: empty token stream");
    if (params.dim < 2) throw ConfigError("embedding dim must be >= 2");
    if (params.window < 1) throw ConfigError("context window must be >= 1");
    if (params.epochs < 1) throw ConfigError("epochs must be >= 1");

    // Vocabulary: count, filter, order by descending frequency then term.
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& doc : stream.documents)
        for (const auto& tok : doc) ++counts[tok];
    std::vector<std::pair<std::string, std::uint64_t>> vocab;
    for (auto& [term, n] : counts)
        if (n >= params.min_count) vocab.emplace_back(term, n);
    if (vocab.empty())
        throw Error("train: vocabulary is empty after the min_count=" +
                    std::to_string(params.min_count) + " filter");
    std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    const std::size_t v = vocab.size();
    const int dim = params.dim;
    std::vector<std::string> terms(v);
    std::vector<std::uint64_t> freqs(v);
    std::unordered_map<std::string, std::uint32_t> index;
    index.reserve(v);
    std::uint64_t train_words = 0;
    for (std::size_t i = 0; i < v; ++i) {
        terms[i] = vocab[i].first;
        freqs[i] = vocab[i].second;
        index.emplace(terms[i], static_cast<std::uint32_t>(i));
        train_words += freqs[i];
    }

    // Documents as id sequences; out-of-vocabulary tokens are skipped.
    std::vector<std::vector<std::uint32_t>> docs;
    docs.reserve(stream.documents.size());
    for (const auto& doc : stream.documents) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.size());
        for (const auto& tok : doc) {
            auto it = index.find(tok);
            if (it != index.end()) ids.push_back(it->second);
        }
        if (!ids.empty()) docs.push_back(std::move(ids));
    }

    // Negative-sampling table over freq^unigram_power.
    const std::size_t table_size = std::max<std::size_t>(params.unigram_table_size, v);
    std::vector<std::uint32_t> unigram(table_size);
    {
        double denom = 0.0;
        for (std::size_t i = 0; i < v; ++i)
            denom += std::pow(static_cast<double>(freqs[i]), params.unigram_power);
        std::size_t i = 0;
        double cum = std::pow(static_cast<double>(freqs[0]), params.unigram_power) / denom;
        for (std::size_t a = 0; a < table_size; ++a) {
            unigram[a] = static_cast<std::uint32_t>(i);
            if (static_cast<double>(a + 1) / table_size > cum && i + 1 < v) {
                ++i;
                cum += std::pow(static_cast<double>(freqs[i]), params.unigram_power) / denom;
            }
        }
    }

    // syn0 = input vectors (the embeddings we keep); syn1 = output weights.
    std::vector<float> syn0(v * dim);
    std::vector<float> syn1(v * dim, 0.0f);
    {
        detail::W2vRng init_rng(params.seed);
        for (auto& x : syn0) x = (init_rng.next_unit() - 0.5f) / dim;
    }

    const auto& sig = detail::sigmoid_table();
    const std::uint64_t total_words = static_cast<std::uint64_t>(params.epochs) * train_words + 1;
    std::atomic<std::uint64_t> words_done{0};

    auto train_docs = [&](std::size_t worker, std::size_t nworkers, std::uint64_t seed) {
        detail::W2vRng rng(seed);
        std::vector<float> neu1(dim), neu1e(dim);
        float alpha = params.learning_rate;
        std::uint64_t local_words = 0;

        for (int epoch = 0; epoch < params.epochs; ++epoch) {
            for (std::size_t di = worker; di < docs.size(); di += nworkers) {
                const auto& full = docs[di];

                // Optional frequent-word subsampling (word2vec formula).
                std::vector<std::uint32_t> sent;
                if (params.subsample > 0.0) {
                    sent.reserve(full.size());
                    const double s = params.subsample * static_cast<double>(train_words);
                    for (std::uint32_t id : full) {
                        const double f = static_cast<double>(freqs[id]);
                        const double keep = (std::sqrt(f / s) + 1.0) * s / f;
                        if (keep < rng.next_unit()) continue;
                        sent.push_back(id);
                    }
                } else {
                    sent = full;
                }

                for (std::size_t pos = 0; pos < sent.size(); ++pos) {
                    const std::uint32_t word = sent[pos];
                    const int b =
                        1 + static_cast<int>(rng.next() %
                                             static_cast<std::uint64_t>(params.window));

                    std::fill(neu1.begin(), neu1.end(), 0.0f);
                    std::fill(neu1e.begin(), neu1e.end(), 0.0f);
                    int cw = 0;
                    for (int j = static_cast<int>(pos) - b; j <= static_cast<int>(pos) + b; ++j) {
                        if (j < 0 || j >= static_cast<int>(sent.size()) ||
                            j == static_cast<int>(pos))
                            continue;
                        const float* src = &syn0[sent[j] * dim];
                        for (int d = 0; d < dim; ++d) neu1[d] += src[d];
                        ++cw;
                    }
                    if (cw == 0) continue;
                    for (int d = 0; d < dim; ++d) neu1[d] /= cw;

                    for (int k = 0; k <= params.negatives; ++k) {
                        std::uint32_t target;
                        float label;
                        if (k == 0) {
                            target = word;
                            label = 1.0f;
                        } else {
                            target = unigram[(rng.next() >> 16) % table_size];
                            if (target == word) continue;
                            label = 0.0f;
                        }
                        float* out = &syn1[target * dim];
                        float f = 0.0f;
                        for (int d = 0; d < dim; ++d) f += neu1[d] * out[d];
                        float g;
                        if (f > detail::kMaxExp) {
                            g = (label - 1.0f) * alpha;
                        } else if (f < -detail::kMaxExp) {
                            g = label * alpha;
                        } else {
                            const int idx = static_cast<int>(
                                (f + detail::kMaxExp) *
                                (detail::kExpTableSize / detail::kMaxExp / 2));
                            g = (label - sig[idx]) * alpha;
                        }
                        for (int d = 0; d < dim; ++d) neu1e[d] += g * out[d];
                        for (int d = 0; d < dim; ++d) out[d] += g * neu1[d];
                    }
                    for (int j = static_cast<int>(pos) - b; j <= static_cast<int>(pos) + b; ++j) {
                        if (j < 0 || j >= static_cast<int>(sent.size()) ||
                            j == static_cast<int>(pos))
                            continue;
                        float* dst = &syn0[sent[j] * dim];
                        for (int d = 0; d < dim; ++d) dst[d] += neu1e[d];
                    }
                }

                local_words += full.size();
                if (local_words >= 10000) {
                    const std::uint64_t done =
                        words_done.fetch_add(local_words, std::memory_order_relaxed) + local_words;
                    local_words = 0;
                    alpha = params.learning_rate *
                            std::max(1.0f - static_cast<float>(done) / total_words, 1e-4f);
                }
            }
        }
    };

    if (params.workers <= 1) {
        train_docs(0, 1, params.seed);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < params.workers; ++w)
            pool.emplace_back(train_docs, w, params.workers,
                              Rng::mix(params.seed, static_cast<std::uint64_t>(w)) | 1ULL);
        for (auto& th : pool) th.join();
    }

    return EmbeddingSpace(stream.period, dim, std::move(terms), std::move(freqs),
                          std::move(syn0), params);
}

}  // namespace semshift
