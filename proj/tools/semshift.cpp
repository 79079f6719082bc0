// Stage-oriented front door for the semantic shift pipeline.
//
//   semshift <stage> [--config <file>] [--key value ...]
//                    [--workers N] [--deterministic] [--seed N]
//
// Any configuration key can be overridden with a flag of the same dotted
// name, e.g. --embedding.dim 50.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "semshift/config.hpp"
#include "semshift/error.hpp"
#include "semshift/pipeline.hpp"

namespace {

void print_usage() {
    std::fprintf(stderr,
                 "usage: semshift <stage> [--config <file>] [--key value ...]\n"
                 "                [--workers N] [--deterministic] [--seed N]\n"
                 "\n"
                 "stages:\n"
                 "  preprocess       ingest, clean and partition the raw corpus\n"
                 "  phrases          detect and collapse significant bigrams\n"
                 "  train            train one embedding space per period\n"
                 "  cluster          extract semantic neighborhoods per concept\n"
                 "  align            orthogonal alignment of consecutive periods\n"
                 "  metrics          HAD/CSD/NCD/LO with baseline z-scores\n"
                 "  classify         assign evolutionary patterns\n"
                 "  drift            pairwise concept drift matrix + report.md\n"
                 "  annotate-export  stratified annotation pair export\n"
                 "  synth            generate a synthetic labeled corpus\n"
                 "  all              every stage above in dependency order\n"
                 "\n"
                 "exit codes: 0 ok, 1 internal error, 2 missing input, 3 bad config\n");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        print_usage();
        return args.empty() ? 3 : 0;
    }

    const std::string stage = args[0];
    try {
        semshift::RunConfig cfg;
        // --config merges first so later flags override file values.
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size()) throw semshift::ConfigError("--config needs a path");
                cfg.merge_file(args[++i]);
            }
        }
        for (std::size_t i = 1; i < args.size(); ++i) {
            const std::string& a = args[i];
            if (a == "--config") {
                ++i;
            } else if (a == "--deterministic") {
                cfg.set("deterministic", "true");
            } else if (a == "--help" || a == "-h") {
                print_usage();
                return 0;
            } else if (a.rfind("--", 0) == 0) {
                if (i + 1 >= args.size())
                    throw semshift::ConfigError("flag " + a + " needs a value");
                cfg.set(a.substr(2), args[++i]);
            } else {
                throw semshift::ConfigError("unexpected argument: " + a);
            }
        }

        semshift::Pipeline pipeline(cfg);
        pipeline.run(stage);
        return 0;
    } catch (const semshift::MissingInputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::fprintf(stderr, "run the producing stage first\n");
        return 2;
    } catch (const semshift::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
