#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semshift/clustering.hpp"
#include "semshift/corpus.hpp"
#include "semshift/embedding.hpp"
#include "semshift/error.hpp"
#include "semshift/eval.hpp"
#include "semshift/io.hpp"
#include "semshift/lang_data.hpp"
#include "semshift/patterns.hpp"

namespace semshift {

// Flat dotted-key configuration. Every key has a registered default and can
// be overridden from a config file ("key = value" lines) or a command-line
// flag of the same name. Unknown keys are rejected.
class RunConfig {
public:
    RunConfig() : values_(defaults()) {}

    static RunConfig from_file(const fs::path& path) {
        RunConfig cfg;
        cfg.merge_file(path);
        return cfg;
    }

    void merge_file(const fs::path& path) {
        for (const auto& raw : read_lines(path)) {
            const std::string line = trim(raw);
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line without '=': " + line);
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }

    void set(const std::string& key, const std::string& value) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            // period.<label>.start/.end keys follow the periods list and
            // cannot be enumerated statically.
            if (key.rfind("period.", 0) == 0 &&
                (key.size() > 6 && (key.ends_with(".start") || key.ends_with(".end")))) {
                values_[key] = value;
                return;
            }
            throw ConfigError("unknown config key: " + key);
        }
        it->second = value;
    }

    const std::string& get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("unknown config key: " + key);
        return it->second;
    }

    long long get_int(const std::string& key) const {
        try {
            std::size_t used = 0;
            const auto& s = get_string(key);
            const long long v = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + " is not an integer: " + get_string(key));
        }
    }

    double get_double(const std::string& key) const {
        try {
            std::size_t used = 0;
            const auto& s = get_string(key);
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + " is not a number: " + get_string(key));
        }
    }

    bool get_bool(const std::string& key) const {
        const auto& v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config key " + key + " is not a boolean: " + v);
    }

    std::vector<std::string> get_list(const std::string& key) const {
        std::vector<std::string> out;
        for (const auto& part : split(get_string(key), ',')) {
            const auto t = trim(part);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    // ---- assembled views ----

    std::vector<TimePeriod> periods() const {
        std::vector<TimePeriod> out;
        for (const auto& label : get_list("periods")) {
            TimePeriod p;
            p.label = label;
            const std::string prefix = "period." + label;
            auto s = values_.find(prefix + ".start");
            auto e = values_.find(prefix + ".end");
            if (s == values_.end() || e == values_.end())
                throw ConfigError("period " + label + " lacks " + prefix + ".start/.end");
            p.start = std::stoll(s->second);
            p.end = std::stoll(e->second);
            out.push_back(std::move(p));
        }
        validate_periods(out);
        if (out.empty()) throw ConfigError("no periods configured");
        return out;
    }

    std::vector<std::string> concepts() const {
        auto list = get_list("concepts");
        if (list.empty()) throw ConfigError("no concept labels configured");
        return list;
    }

    TrainParams train_params() const {
        TrainParams p;
        p.dim = static_cast<int>(get_int("embedding.dim"));
        p.window = static_cast<int>(get_int("embedding.window"));
        p.min_count = static_cast<std::uint64_t>(get_int("embedding.min_count"));
        p.negatives = static_cast<int>(get_int("embedding.negatives"));
        p.epochs = static_cast<int>(get_int("embedding.epochs"));
        p.learning_rate = static_cast<float>(get_double("embedding.learning_rate"));
        p.subsample = get_double("embedding.subsample");
        p.unigram_power = get_double("embedding.unigram_power");
        p.seed = seed();
        p.workers = workers();
        return p;
    }

    ClusterParams coarse_params() const {
        return {static_cast<int>(get_int("clustering.coarse_min_cluster_size")),
                static_cast<int>(get_int("clustering.coarse_min_samples"))};
    }

    ClusterParams refine_params() const {
        return {static_cast<int>(get_int("clustering.refine_min_cluster_size")),
                static_cast<int>(get_int("clustering.refine_min_samples"))};
    }

    Thresholds thresholds() const {
        Thresholds t;
        t.high = get_double("patterns.high");
        t.low = get_double("patterns.low");
        t.lo_low = get_double("patterns.lo_low");
        if (t.high <= 0.0) throw ConfigError("patterns.high must be positive");
        if (t.lo_low >= 0.0) throw ConfigError("patterns.lo_low must be negative");
        return t;
    }

    GenerateParams generate_params() const {
        GenerateParams p;
        p.docs_per_period = static_cast<std::size_t>(get_int("synth.docs_per_period"));
        p.vocab_size = static_cast<std::size_t>(get_int("synth.vocab_size"));
        p.scenario_doc_share = get_double("synth.scenario_doc_share");
        p.anchor_rate = get_double("synth.anchor_rate");
        p.background_leak = get_double("synth.background_leak");
        return p;
    }

    std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed")); }

    int workers() const {
        if (get_bool("deterministic")) return 1;
        return static_cast<int>(get_int("workers"));
    }

    fs::path out_dir() const { return fs::path(get_string("output.dir")); }

    Stopwords stopwords() const {
        const auto& v = get_string("corpus.stopwords");
        if (v == "builtin") return default_stopwords();
        if (v == "none" || v.empty()) return {};
        return load_stopwords(v);
    }

    LemmaTable lemmas() const {
        const auto& v = get_string("corpus.lemmas");
        if (v == "builtin") return default_lemmas();
        if (v == "none" || v.empty()) return {};
        return load_lemmas(v);
    }

    // Full key/value dump in sorted order; used for stamp hashing.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : values_) out += k + '=' + v + '\n';
        return out;
    }

private:
    static const std::map<std::string, std::string>& defaults() {
        static const std::map<std::string, std::string> kDefaults = {
            {"output.dir", "out"},
            {"seed", "1"},
            {"workers", "1"},
            {"deterministic", "false"},

            {"corpus.input", ""},
            {"corpus.tokens_dir", ""},
            {"corpus.field.id", "id"},
            {"corpus.field.body", "body"},
            {"corpus.field.time", "created_utc"},
            {"corpus.stopwords", "builtin"},
            {"corpus.lemmas", "builtin"},

            {"periods", "T1,T2,T3"},
            {"period.T1.start", "1325376000"},  // 2012-01-01
            {"period.T1.end", "1420070400"},    // 2015-01-01
            {"period.T2.start", "1420070400"},
            {"period.T2.end", "1577836800"},    // 2020-01-01
            {"period.T3.start", "1577836800"},
            {"period.T3.end", "1672531200"},    // 2023-01-01

            {"concepts",
             "crisis_actor,false_flag,sandy_hook,boston_bombing,sutherland_springs,truther,"
             "emailgate,benghazi,russiagate,birther,voter_fraud,death_panels,illuminati,"
             "deep_state,pizzagate,lizard_people,gamergate,chemtrails,flat_earth"},

            {"phrases.z_threshold", "1.96"},
            {"phrases.min_pair_count", "5"},
            {"phrases.max_rounds", "4"},

            {"embedding.dim", "100"},
            {"embedding.window", "5"},
            {"embedding.min_count", "5"},
            {"embedding.negatives", "5"},
            {"embedding.epochs", "5"},
            {"embedding.learning_rate", "0.025"},
            {"embedding.subsample", "0"},
            {"embedding.unigram_power", "0.75"},

            {"clustering.sample_size", "15000"},
            {"clustering.coarse_min_cluster_size", "15"},
            {"clustering.coarse_min_samples", "5"},
            {"clustering.refine_min_cluster_size", "5"},
            {"clustering.refine_min_samples", "5"},
            {"clustering.stability_runs", "0"},

            {"metrics.bins", "20"},
            {"metrics.n_baseline", "200"},
            {"metrics.baseline_min_success", "30"},

            {"patterns.high", "1"},
            {"patterns.low", "1"},
            {"patterns.lo_low", "-1"},

            {"annotate.enabled", "false"},
            {"annotate.n_pairs", "1500"},
            {"annotate.period", ""},

            {"synth.scenario_file", ""},
            {"synth.docs_per_period", "10000"},
            {"synth.vocab_size", "2000"},
            {"synth.scenario_doc_share", "0.06"},
            {"synth.anchor_rate", "0.25"},
            {"synth.background_leak", "0.05"},
        };
        return kDefaults;
    }

    std::map<std::string, std::string> values_;
};

}  // namespace semshift
