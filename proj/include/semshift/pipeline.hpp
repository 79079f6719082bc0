#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "semshift/alignment.hpp"
#include "semshift/clustering.hpp"
#include "semshift/config.hpp"
#include "semshift/corpus.hpp"
#include "semshift/drift.hpp"
#include "semshift/embedding.hpp"
#include "semshift/error.hpp"
#include "semshift/eval.hpp"
#include "semshift/io.hpp"
#include "semshift/metrics.hpp"
#include "semshift/patterns.hpp"
#include "semshift/phrases.hpp"

namespace semshift {

// Stage-oriented pipeline over one output directory. Stages write their own
// files only, atomically, and are skipped when a content-hash stamp shows
// inputs and configuration unchanged.
class Pipeline {
public:
    explicit Pipeline(RunConfig cfg) : cfg_(std::move(cfg)), out_(cfg_.out_dir()) {}

    static const std::vector<std::string>& stage_names() {
        static const std::vector<std::string> kStages = {
            "preprocess", "phrases", "train", "cluster", "align",
            "metrics",    "classify", "drift", "annotate-export", "synth", "all"};
        return kStages;
    }

    void run(const std::string& stage) {
        if (stage == "preprocess") return stage_preprocess();
        if (stage == "phrases") return stage_phrases();
        if (stage == "train") return stage_train();
        if (stage == "cluster") return stage_cluster();
        if (stage == "align") return stage_align();
        if (stage == "metrics") return stage_metrics();
        if (stage == "classify") return stage_classify();
        if (stage == "drift") return stage_drift();
        if (stage == "annotate-export") return stage_annotate();
        if (stage == "synth") return stage_synth();
        if (stage == "all") return stage_all();
        throw ConfigError("unknown stage: " + stage);
    }

    // ---- artifact paths ----

    fs::path tokens_path(const std::string& period) const {
        return out_ / "tokens" / (period + ".tokens.txt");
    }
    fs::path phrased_tokens_path(const std::string& period) const {
        return out_ / "phrases" / (period + ".tokens.txt");
    }
    fs::path phrase_stats_path(const std::string& period) const {
        return out_ / "phrases" / (period + ".phrases.tsv");
    }
    fs::path model_path(const std::string& period) const {
        return out_ / "models" / (period + ".emb.txt");
    }
    fs::path coarse_path(const std::string& period) const {
        return out_ / "objects" / (period + ".coarse.tsv");
    }
    fs::path object_path(const std::string& period, const std::string& anchor) const {
        return out_ / "objects" / (period + "." + anchor + ".object.tsv");
    }
    fs::path projection_path() const { return out_ / "objects" / "projection.csv"; }
    fs::path stability_path() const { return out_ / "objects" / "stability.tsv"; }
    fs::path alignment_path(const std::string& src, const std::string& tgt) const {
        return out_ / "align" / (src + "-" + tgt + ".alignment.txt");
    }
    fs::path metrics_path(const std::string& src, const std::string& tgt) const {
        return out_ / "metrics" / (src + "-" + tgt + ".metrics.tsv");
    }
    fs::path classification_path(const std::string& src, const std::string& tgt) const {
        return out_ / "classify" / (src + "-" + tgt + ".classification.tsv");
    }
    fs::path drift_path(const std::string& src, const std::string& tgt) const {
        return out_ / "drift" / (src + "-" + tgt + ".drift.csv");
    }
    fs::path truth_path() const { return out_ / "synth" / "truth.tsv"; }
    fs::path report_path() const { return out_ / "report.md"; }

private:
    RunConfig cfg_;
    fs::path out_;

    static void log(const std::string& stage, const std::string& msg) {
        std::fprintf(stderr, "[%s] %s\n", stage.c_str(), msg.c_str());
    }

    void need(const fs::path& p) const {
        if (!fs::exists(p)) throw MissingInputError(p.string());
    }

    // Content-hash stamps: a stage is current when its recorded hash over
    // (stage name, full config, input files) matches and its outputs exist.
    std::uint64_t stamp_hash(const std::string& stage,
                             const std::vector<fs::path>& inputs) const {
        std::uint64_t h = fnv1a64(stage);
        h = fnv1a64(cfg_.canonical(), h);
        for (const auto& p : inputs) {
            need(p);
            h = fnv1a64(p.filename().string(), h);
            h = fnv1a64(read_file(p), h);
        }
        return h;
    }

    bool stamp_current(const std::string& stage, std::uint64_t hash,
                       const std::vector<fs::path>& outputs) const {
        const fs::path sp = out_ / "stamps" / (stage + ".stamp");
        if (!fs::exists(sp)) return false;
        if (trim(read_file(sp)) != hex64(hash)) return false;
        for (const auto& p : outputs)
            if (!fs::exists(p)) return false;
        log(stage, "up to date (stamp hit)");
        return true;
    }

    void write_stamp(const std::string& stage, std::uint64_t hash) const {
        atomic_write(out_ / "stamps" / (stage + ".stamp"), hex64(hash) + '\n');
    }

    std::vector<std::pair<std::string, std::string>> transitions() const {
        std::vector<std::pair<std::string, std::string>> out;
        const auto periods = cfg_.periods();
        for (std::size_t i = 0; i + 1 < periods.size(); ++i)
            out.emplace_back(periods[i].label, periods[i + 1].label);
        return out;
    }

    // ---- stages ----

    void stage_synth() {
        std::vector<fs::path> inputs;
        const auto& sf = cfg_.get_string("synth.scenario_file");
        if (!sf.empty()) inputs.push_back(sf);
        const auto periods = cfg_.periods();
        std::vector<std::string> labels;
        for (const auto& p : periods) labels.push_back(p.label);

        std::vector<fs::path> outputs{truth_path()};
        for (const auto& l : labels) outputs.push_back(tokens_path(l));
        const auto hash = stamp_hash("synth", inputs);
        if (stamp_current("synth", hash, outputs)) return;

        const auto scenarios = sf.empty() ? default_scenarios() : parse_scenario_file(sf);
        const auto corpus = generate(scenarios, labels, cfg_.generate_params(), cfg_.seed());
        for (const auto& [label, stream] : corpus) {
            save_tokens(tokens_path(label), stream);
            log("synth", label + ": " + std::to_string(stream.documents.size()) + " documents");
        }
        save_truth(truth_path(), scenarios, labels);
        write_stamp("synth", hash);
    }

    void stage_preprocess() {
        const auto periods = cfg_.periods();
        const auto& input = cfg_.get_string("corpus.input");
        const auto& tokens_dir = cfg_.get_string("corpus.tokens_dir");

        if (input.empty() && tokens_dir.empty()) {
            // Token streams must already exist (e.g. written by synth).
            for (const auto& p : periods) need(tokens_path(p.label));
            log("preprocess", "no corpus input configured; using existing token streams");
            return;
        }

        std::vector<fs::path> inputs;
        if (!tokens_dir.empty()) {
            for (const auto& p : periods)
                inputs.push_back(fs::path(tokens_dir) / (p.label + ".tokens.txt"));
        } else {
            inputs.push_back(input);
        }
        if (cfg_.get_string("corpus.stopwords") != "builtin" &&
            cfg_.get_string("corpus.stopwords") != "none" &&
            !cfg_.get_string("corpus.stopwords").empty())
            inputs.push_back(cfg_.get_string("corpus.stopwords"));
        if (cfg_.get_string("corpus.lemmas") != "builtin" &&
            cfg_.get_string("corpus.lemmas") != "none" && !cfg_.get_string("corpus.lemmas").empty())
            inputs.push_back(cfg_.get_string("corpus.lemmas"));

        std::vector<fs::path> outputs;
        for (const auto& p : periods) outputs.push_back(tokens_path(p.label));
        const auto hash = stamp_hash("preprocess", inputs);
        if (stamp_current("preprocess", hash, outputs)) return;

        if (!tokens_dir.empty()) {
            for (const auto& p : periods) {
                atomic_write(tokens_path(p.label),
                             read_file(fs::path(tokens_dir) / (p.label + ".tokens.txt")));
            }
        } else {
            IngestSchema schema{cfg_.get_string("corpus.field.id"),
                                cfg_.get_string("corpus.field.body"),
                                cfg_.get_string("corpus.field.time")};
            const auto ingested = ingest_file(input, schema);
            log("preprocess", std::to_string(ingested.records.size()) + " records, " +
                                  std::to_string(ingested.skipped) + " skipped lines");
            const auto result = partition(ingested.records, periods, cfg_.stopwords(),
                                          cfg_.lemmas(), cfg_.workers());
            for (const auto& p : periods) {
                const auto& stream = result.streams.at(p.label);
                save_tokens(tokens_path(p.label), stream);
                log("preprocess",
                    p.label + ": " + std::to_string(stream.documents.size()) + " documents");
            }
            log("preprocess", std::to_string(result.dropped) + " records outside all periods");
        }
        write_stamp("preprocess", hash);
    }

    void stage_phrases() {
        const auto periods = cfg_.periods();
        std::vector<fs::path> inputs, outputs;
        for (const auto& p : periods) {
            inputs.push_back(tokens_path(p.label));
            outputs.push_back(phrased_tokens_path(p.label));
            outputs.push_back(phrase_stats_path(p.label));
        }
        const auto hash = stamp_hash("phrases", inputs);
        if (stamp_current("phrases", hash, outputs)) return;

        const double z = cfg_.get_double("phrases.z_threshold");
        const auto min_pair = static_cast<std::uint64_t>(cfg_.get_int("phrases.min_pair_count"));
        const int rounds = static_cast<int>(cfg_.get_int("phrases.max_rounds"));
        for (const auto& p : periods) {
            const auto stream = load_tokens(tokens_path(p.label), p.label);
            save_phrase_stats(phrase_stats_path(p.label), bigram_stats(stream, min_pair));
            const auto collapsed = collapse_significant(stream, z, min_pair, rounds);
            save_tokens(phrased_tokens_path(p.label), collapsed);
            log("phrases", p.label + " collapsed");
        }
        write_stamp("phrases", hash);
    }

    void stage_train() {
        const auto periods = cfg_.periods();
        std::vector<fs::path> inputs, outputs;
        for (const auto& p : periods) {
            inputs.push_back(phrased_tokens_path(p.label));
            outputs.push_back(model_path(p.label));
        }
        const auto hash = stamp_hash("train", inputs);
        if (stamp_current("train", hash, outputs)) return;

        const auto params = cfg_.train_params();
        for (const auto& p : periods) {
            const auto stream = load_tokens(phrased_tokens_path(p.label), p.label);
            const auto space = train(stream, params);
            space.save(model_path(p.label));
            log("train", p.label + ": vocab " + std::to_string(space.size()));
        }
        write_stamp("train", hash);
    }

    void stage_cluster() {
        const auto periods = cfg_.periods();
        const auto concepts = cfg_.concepts();
        std::vector<fs::path> inputs;
        for (const auto& p : periods) inputs.push_back(model_path(p.label));
        std::vector<fs::path> outputs{projection_path()};
        for (const auto& p : periods) outputs.push_back(coarse_path(p.label));
        const auto hash = stamp_hash("cluster", inputs);
        // Per-concept object files may legitimately be missing (anchor not in
        // vocabulary), so the stamp covers only the always-present outputs.
        if (stamp_current("cluster", hash, outputs)) return;

        const auto sample = static_cast<std::size_t>(cfg_.get_int("clustering.sample_size"));
        const auto coarse_p = cfg_.coarse_params();
        const auto refine_p = cfg_.refine_params();
        const int stability_runs = static_cast<int>(cfg_.get_int("clustering.stability_runs"));
        std::string projection = "period,concept,term,x,y\n";
        std::string stability_rows = "concept\tperiod\truns\tmean\tsd\n";

        for (const auto& p : periods) {
            const auto space = EmbeddingSpace::load(model_path(p.label), p.label);
            const auto coarse = coarse_partition(space, sample, coarse_p, 0, cfg_.workers());
            save_coarse(coarse_path(p.label), coarse);

            std::vector<SemanticObject> objects;
            for (const auto& concept_label : concepts) {
                if (!space.contains(concept_label)) {
                    log("cluster", p.label + ": '" + concept_label + "' not in vocabulary; skipped");
                    continue;
                }
                auto obj = refine_neighborhood(space, concept_label, coarse, refine_p, 0,
                                               cfg_.workers());
                save_object(object_path(p.label, concept_label), obj, space);
                log("cluster", p.label + "." + concept_label + ": " +
                                   std::to_string(obj.members.size()) + " members, depth " +
                                   std::to_string(obj.depth));
                objects.push_back(std::move(obj));

                if (stability_runs > 0) {
                    const auto rep = stability(space, concept_label, sample, coarse_p, refine_p,
                                               stability_runs, cfg_.seed(), cfg_.workers());
                    stability_rows += concept_label + '\t' + p.label + '\t' +
                                      std::to_string(rep.runs) + '\t' + fmt_double(rep.mean_score) +
                                      '\t' + fmt_double(rep.sd_score) + '\n';
                }
            }
            projection += project_members(space, objects);
        }
        atomic_write(projection_path(), projection);
        if (stability_runs > 0) atomic_write(stability_path(), stability_rows);
        write_stamp("cluster", hash);
    }

    // PCA to two components per period; plotting plumbing for the object map.
    static std::string project_members(const EmbeddingSpace& space,
                                       const std::vector<SemanticObject>& objects) {
        std::vector<std::pair<const SemanticObject*, const std::string*>> rows;
        for (const auto& obj : objects)
            for (const auto& m : obj.members) rows.emplace_back(&obj, &m);
        if (rows.empty()) return "";

        const int dim = space.dim();
        Eigen::MatrixXd mat(rows.size(), dim);
        std::vector<float> unit(dim);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto v = space.vector(*rows[r].second);
            std::copy(v.begin(), v.end(), unit.begin());
            normalize_in_place(unit);
            for (int d = 0; d < dim; ++d) mat(r, d) = unit[d];
        }
        const Eigen::RowVectorXd mean = mat.colwise().mean();
        mat.rowwise() -= mean;
        const Eigen::MatrixXd cov =
            mat.transpose() * mat / static_cast<double>(std::max<std::size_t>(rows.size(), 2) - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        const Eigen::VectorXd e1 = eig.eigenvectors().col(dim - 1);
        const Eigen::VectorXd e2 = dim >= 2 ? eig.eigenvectors().col(dim - 2) : e1;

        std::string out;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double x = mat.row(r).dot(e1);
            const double y = mat.row(r).dot(e2);
            out += space.period() + ',' + rows[r].first->anchor + ',' + *rows[r].second + ',' +
                   fmt_double(x) + ',' + fmt_double(y) + '\n';
        }
        return out;
    }

    void stage_align() {
        std::vector<fs::path> inputs, outputs;
        for (const auto& [src, tgt] : transitions()) {
            inputs.push_back(model_path(src));
            inputs.push_back(model_path(tgt));
            outputs.push_back(alignment_path(src, tgt));
        }
        const auto hash = stamp_hash("align", inputs);
        if (stamp_current("align", hash, outputs)) return;

        for (const auto& [src, tgt] : transitions()) {
            const auto source = EmbeddingSpace::load(model_path(src), src);
            const auto target = EmbeddingSpace::load(model_path(tgt), tgt);
            const auto map = procrustes(source, target);
            save_alignment(alignment_path(src, tgt), map);
            log("align", src + "->" + tgt + ": shared vocab " +
                             std::to_string(map.shared_vocab.size()) + ", residual " +
                             fmt_double(map.residual));
        }
        write_stamp("align", hash);
    }

    // Loads the objects a transition can evaluate; missing object files are
    // reported and the concept skipped.
    std::vector<std::string> transition_concepts(const std::string& src, const std::string& tgt,
                                                 const char* stage) const {
        std::vector<std::string> usable;
        for (const auto& c : cfg_.concepts()) {
            if (fs::exists(object_path(src, c)) && fs::exists(object_path(tgt, c))) {
                usable.push_back(c);
            } else {
                log(stage, src + "-" + tgt + ": no neighborhood for '" + c + "'; skipped");
            }
        }
        return usable;
    }

    void stage_metrics() {
        const int bins = static_cast<int>(cfg_.get_int("metrics.bins"));
        const int n_baseline = static_cast<int>(cfg_.get_int("metrics.n_baseline"));
        const int min_success = static_cast<int>(cfg_.get_int("metrics.baseline_min_success"));
        const auto refine_p = cfg_.refine_params();

        for (const auto& [src, tgt] : transitions()) {
            std::vector<fs::path> inputs{model_path(src), model_path(tgt),
                                         alignment_path(src, tgt), coarse_path(src),
                                         coarse_path(tgt)};
            const auto usable = transition_concepts(src, tgt, "metrics");
            for (const auto& c : usable) {
                inputs.push_back(object_path(src, c));
                inputs.push_back(object_path(tgt, c));
            }
            const std::string stage_key = "metrics." + src + "-" + tgt;
            const auto hash = stamp_hash(stage_key, inputs);
            if (stamp_current(stage_key, hash, {metrics_path(src, tgt)})) continue;

            const auto source = EmbeddingSpace::load(model_path(src), src);
            const auto target = EmbeddingSpace::load(model_path(tgt), tgt);
            const auto map = load_alignment(alignment_path(src, tgt));
            const auto coarse_src = load_coarse(coarse_path(src));
            const auto coarse_tgt = load_coarse(coarse_path(tgt));
            const TransitionContext ctx{source,     target,   map, coarse_src, coarse_tgt,
                                        refine_p,   bins};

            std::map<std::string, SemanticObject> src_objs, tgt_objs;
            std::unordered_set<std::string> exclusions;
            for (const auto& c : usable) {
                src_objs.emplace(c, load_object(object_path(src, c), source));
                tgt_objs.emplace(c, load_object(object_path(tgt, c), target));
                exclusions.insert(c);
                const auto& so = src_objs.at(c);
                const auto& to = tgt_objs.at(c);
                exclusions.insert(so.members.begin(), so.members.end());
                exclusions.insert(to.members.begin(), to.members.end());
            }

            log("metrics", src + "-" + tgt + ": sampling " + std::to_string(n_baseline) +
                               " baseline anchors");
            const auto base = sample_baselines(ctx, n_baseline, exclusions, cfg_.seed(),
                                               cfg_.workers(), min_success);

            std::string rows =
                "concept\tmetric\traw\tz\tbaseline_mean\tbaseline_sd\tn_baseline\treliable\n";
            for (const auto& c : usable) {
                const auto& so = src_objs.at(c);
                const auto& to = tgt_objs.at(c);
                const auto sh = shadow(so, map, source);
                const MetricValue values[4] = {
                    standardize(had(source, target, so, bins), base.stats[0]),
                    standardize(csd(sh, to, target), base.stats[1]),
                    standardize(ncd(source, target, make_union(so, to, source, target)),
                                base.stats[2]),
                    standardize({lexical_overlap(so, to), true}, base.stats[3]),
                };
                for (int k = 0; k < 4; ++k) {
                    rows += c + '\t' + to_string(MetricKind(k)) + '\t' + fmt_double(values[k].raw) +
                            '\t' + fmt_double(values[k].z) + '\t' +
                            fmt_double(values[k].baseline_mean) + '\t' +
                            fmt_double(values[k].baseline_sd) + '\t' +
                            std::to_string(values[k].n_baseline) + '\t' +
                            (values[k].reliable ? "1" : "0") + '\n';
                }
            }
            atomic_write(metrics_path(src, tgt), rows);
            write_stamp(stage_key, hash);
        }
    }

    void stage_classify() {
        const auto th = cfg_.thresholds();
        for (const auto& [src, tgt] : transitions()) {
            const std::string stage_key = "classify." + src + "-" + tgt;
            const auto hash = stamp_hash(stage_key, {metrics_path(src, tgt)});
            if (stamp_current(stage_key, hash, {classification_path(src, tgt)})) continue;

            // concept -> [had csd ncd lo] z-scores; unreliable values stay NaN.
            std::map<std::string, std::array<double, 4>> zmap;
            const auto lines = read_lines(metrics_path(src, tgt));
            for (std::size_t i = 1; i < lines.size(); ++i) {
                if (lines[i].empty()) continue;
                const auto cols = split(lines[i], '\t');
                if (cols.size() != 8) throw IoError("bad metrics row: " + lines[i]);
                auto& zs = zmap.try_emplace(cols[0],
                                            std::array<double, 4>{
                                                std::nan(""), std::nan(""), std::nan(""),
                                                std::nan("")})
                               .first->second;
                int k = -1;
                for (int m = 0; m < 4; ++m)
                    if (cols[1] == to_string(MetricKind(m))) k = m;
                if (k < 0) throw IoError("unknown metric name: " + cols[1]);
                if (cols[7] == "1") zs[k] = std::stod(cols[3]);
            }

            std::string rows = "concept\ttransition\thad_z\tcsd_z\tncd_z\tlo_z\tlabel\trule\n";
            for (const auto& [c, zs] : zmap) {
                const auto cls = classify(zs[0], zs[1], zs[2], zs[3], th);
                rows += c + '\t' + src + '-' + tgt + '\t' + fmt_double(zs[0]) + '\t' +
                        fmt_double(zs[1]) + '\t' + fmt_double(zs[2]) + '\t' + fmt_double(zs[3]) +
                        '\t' + to_string(cls.label) + '\t' + std::to_string(cls.rule) + '\n';
            }
            atomic_write(classification_path(src, tgt), rows);
            write_stamp(stage_key, hash);
        }
    }

    void stage_drift() {
        for (const auto& [src, tgt] : transitions()) {
            std::vector<fs::path> inputs{model_path(src), model_path(tgt)};
            const auto usable = transition_concepts(src, tgt, "drift");
            for (const auto& c : usable) {
                inputs.push_back(object_path(src, c));
                inputs.push_back(object_path(tgt, c));
            }
            const std::string stage_key = "drift." + src + "-" + tgt;
            const auto hash = stamp_hash(stage_key, inputs);
            if (stamp_current(stage_key, hash, {drift_path(src, tgt)})) continue;

            const auto source = EmbeddingSpace::load(model_path(src), src);
            const auto target = EmbeddingSpace::load(model_path(tgt), tgt);
            std::map<std::string, SemanticObject> src_objs, tgt_objs;
            for (const auto& c : usable) {
                src_objs.emplace(c, load_object(object_path(src, c), source));
                tgt_objs.emplace(c, load_object(object_path(tgt, c), target));
            }
            const auto matrix = drift_matrix(src_objs, tgt_objs);
            for (const auto& w : matrix.warnings) log("drift", w);
            save_drift(drift_path(src, tgt), matrix);
            write_stamp(stage_key, hash);
        }
        write_report();
    }

    void stage_annotate() {
        const auto periods = cfg_.periods();
        std::string period = cfg_.get_string("annotate.period");
        if (period.empty()) period = periods.front().label;

        std::vector<fs::path> inputs{model_path(period)};
        std::vector<std::string> present;
        for (const auto& c : cfg_.concepts()) {
            if (fs::exists(object_path(period, c))) {
                present.push_back(c);
                inputs.push_back(object_path(period, c));
            }
        }
        if (present.empty()) throw MissingInputError(object_path(period, "<concept>").string());
        const auto hash = stamp_hash("annotate-export", inputs);
        const fs::path pairs_path = out_ / "annotate" / "pairs.tsv";
        const fs::path key_path = out_ / "annotate" / "key.tsv";
        if (stamp_current("annotate-export", hash, {pairs_path, key_path})) return;

        const auto space = EmbeddingSpace::load(model_path(period), period);
        std::vector<SemanticObject> objects;
        for (const auto& c : present) objects.push_back(load_object(object_path(period, c), space));

        const auto levels = distance_levels(space, objects, cfg_.workers());
        log("annotate-export",
            period + ": mu " + fmt_double(levels.mu) + ", sigma " + fmt_double(levels.sigma));
        const int n_pairs = static_cast<int>(cfg_.get_int("annotate.n_pairs"));
        const auto pairs = export_annotation_pairs(levels, objects, n_pairs, cfg_.seed());

        std::string pout = "pair_id\tlevel\tterm_a\tterm_b\n";
        std::string kout = "pair_id\tconcept_side\tconcept_term\n";
        for (const auto& p : pairs) {
            pout += std::to_string(p.id) + '\t' + std::to_string(p.level) + '\t' + p.term_a +
                    '\t' + p.term_b + '\n';
            kout += std::to_string(p.id) + '\t' + p.concept_side + '\t' +
                    (p.concept_side == 'a' ? p.term_a : p.term_b) + '\n';
        }
        atomic_write(pairs_path, pout);
        atomic_write(key_path, kout);
        write_stamp("annotate-export", hash);
    }

    void stage_all() {
        stage_preprocess();
        stage_phrases();
        stage_train();
        stage_cluster();
        stage_align();
        stage_metrics();
        stage_classify();
        stage_drift();
        if (cfg_.get_bool("annotate.enabled")) stage_annotate();
    }

    // Markdown digest of whatever per-transition outputs exist.
    void write_report() {
        std::string md = "# Semantic shift report\n";
        for (const auto& [src, tgt] : transitions()) {
            md += "\n## Transition " + src + " -> " + tgt + "\n";
            if (fs::exists(classification_path(src, tgt))) {
                md += "\n| concept | HAD z | CSD z | NCD z | LO z | pattern |\n";
                md += "|---|---|---|---|---|---|\n";
                const auto lines = read_lines(classification_path(src, tgt));
                for (std::size_t i = 1; i < lines.size(); ++i) {
                    if (lines[i].empty()) continue;
                    const auto c = split(lines[i], '\t');
                    md += "| " + c[0] + " | " + round3(c[2]) + " | " + round3(c[3]) + " | " +
                          round3(c[4]) + " | " + round3(c[5]) + " | " + c[6] + " |\n";
                }
            }
            if (fs::exists(drift_path(src, tgt))) {
                md += "\nSignificant drift pairs:\n\n";
                const auto lines = read_lines(drift_path(src, tgt));
                bool any = false;
                for (std::size_t i = 1; i < lines.size(); ++i) {
                    if (lines[i].empty()) continue;
                    const auto c = split(lines[i], ',');
                    if (c[5] == "1") {
                        md += "- " + c[0] + " / " + c[1] + ": delta " + round3(c[4]) + "\n";
                        any = true;
                    }
                }
                if (!any) md += "- none\n";
            }
        }
        atomic_write(report_path(), md);
    }

    static std::string round3(const std::string& value) {
        try {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f", std::stod(value));
            return buf;
        } catch (const std::exception&) {
            return value;
        }
    }
};

}  // namespace semshift
