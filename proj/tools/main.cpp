// proofsynth command line: corpus generation, training, evaluation, proving.
//
// Exit codes: 0 success, 1 usage or input error, 2 proof NOT_FOUND (prove)
// or verdict false (check), 3 internal invariant violation.

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "proofsynth/dataset.hpp"
#include "proofsynth/errors.hpp"
#include "proofsynth/model.hpp"
#include "proofsynth/reports.hpp"
#include "proofsynth/search.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/train.hpp"

using namespace proofsynth;

namespace {

std::string strip_extension(const std::string& path) {
    auto slash = path.find_last_of('/');
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

// estimator selection shared by eval, prove and bench
struct EstimatorChoice {
    std::string ckpt;
    bool uniform = false;

    void add_flags(CLI::App* cmd) {
        auto* c = cmd->add_option("--ckpt", ckpt, "checkpoint file with a trained model");
        auto* u = cmd->add_flag("--uniform", uniform, "use the uniform baseline estimator");
        c->excludes(u);
    }
    std::unique_ptr<RuleEstimator> make() const {
        if (uniform) return std::make_unique<UniformEstimator>();
        if (ckpt.empty()) throw CLI::ValidationError("estimator", "pass --ckpt FILE or --uniform");
        return std::make_unique<NeuralEstimator>(load_checkpoint(ckpt));
    }
};

struct BudgetFlags {
    SearchBudget budget;
    bool normal_only = false;
    bool memo = false;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--timeout", budget.timeout_sec, "per-proposition timeout in seconds")
            ->capture_default_str();
        cmd->add_option("--max-expansions", budget.max_expansions, "expansion cap")
            ->capture_default_str();
        cmd->add_flag("--normal-only", normal_only, "prune fills that force a redex");
        cmd->add_flag("--memo", memo, "drop partial proofs already seen up to renaming");
    }
};

// bench input: corpus JSONL lines or bare proposition s-expressions
std::vector<PropPtr> read_propositions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<PropPtr> props;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '{') {
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("proposition"))
                throw ParseError(path + ": bad proposition line: " + line);
            props.push_back(parse_prop(j["proposition"].get<std::string>()));
        } else {
            props.push_back(parse_prop(line));
        }
    }
    return props;
}

void emit_report(const Report& r, const std::string& base) {
    std::cout << r.text;
    if (!base.empty()) write_report(r, base);
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    int small_size = 0;
    int lower = 0, upper = 0;
    std::vector<int> large;
    int count = 100;
    uint64_t seed = 0;
    LargeGenOptions opts;
    std::string out = "corpus.jsonl";
};

int cmd_gen(const GenArgs& a) {
    std::vector<ProofPair> corpus;
    if (a.small_size > 0) corpus = small_proof_gen(a.small_size);
    int lo = a.lower, hi = a.upper;
    if (a.large.size() == 2) {
        lo = a.large[0];
        hi = a.large[1];
    }
    if (lo > 0 || hi > 0) {
        if (lo < 2 || hi < lo)
            throw CLI::ValidationError("--large", "need 2 <= lower <= upper");
        auto big = random_large_proof_gen(lo, hi, a.seed, a.count, a.opts);
        corpus.insert(corpus.end(), big.begin(), big.end());
    }
    if (a.small_size <= 0 && lo <= 0 && hi <= 0)
        throw CLI::ValidationError("gen", "pass --small N and/or --large L U");
    if (corpus.empty()) std::cerr << "warning: empty corpus\n";
    write_corpus(a.out, corpus);
    emit_report(report_gen(corpus), strip_extension(a.out) + "_summary");
    std::cerr << "wrote " << corpus.size() << " pairs to " << a.out << "\n";
    return 0;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
    std::string quads, val, out = "model.ckpt";
    TrainOptions opts;
    uint64_t seed = 0;
    bool obligation_free = false;
    bool full_scale = false;
};

int cmd_train(const TrainArgs& a) {
    auto train_set = read_quadruples(a.quads);
    std::vector<Quadruple> val_set;
    if (!a.val.empty()) val_set = read_quadruples(a.val);

    ModelConfig cfg = a.full_scale ? ModelConfig::full_scale(a.obligation_free)
                                   : ModelConfig::desk(a.obligation_free);
    NeuralEstimator est(cfg, Vocab::from_quadruples(train_set), a.seed);

    TrainOptions opts = a.opts;
    opts.shuffle_seed = a.seed;
    auto stats = train(est, train_set, val_set, opts, &std::cout);
    save_checkpoint(est, a.out);
    write_report(report_train(stats), strip_extension(a.out) + "_log");
    std::cerr << "wrote " << a.out << "\n";
    return 0;
}

// ---- eval ------------------------------------------------------------------

int cmd_eval(const std::string& quads_path, const EstimatorChoice& ec, const std::string& report) {
    auto quads = read_quadruples(quads_path);
    auto est = ec.make();
    emit_report(report_eval(*est, quads), report);
    return 0;
}

// ---- prove / check ---------------------------------------------------------

struct ProveArgs {
    std::string prop;
    EstimatorChoice ec;
    BudgetFlags bf;
    std::string trace, out;
};

int cmd_prove(const ProveArgs& a) {
    auto goal = parse_prop(a.prop);
    auto est = a.ec.make();

    std::ofstream trace_file;
    SearchOptions opts{a.bf.normal_only, a.bf.memo, nullptr};
    if (a.trace == "-") {
        opts.trace = &std::cerr;
    } else if (!a.trace.empty()) {
        trace_file.open(a.trace, std::ios::binary | std::ios::trunc);
        if (!trace_file) throw IoError("cannot write " + a.trace);
        opts.trace = &trace_file;
    }

    SearchStats stats;
    auto proof = proof_synthesize(goal, *est, a.bf.budget, opts, &stats);
    std::cerr << "expansions " << stats.expansions << (stats.timed_out ? ", timed out" : "")
              << "\n";
    if (!proof) {
        std::cout << "NOT_FOUND\n";
        return 2;
    }
    std::string text = print_term(*proof);
    std::cout << text << "\n";
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + a.out);
        f << text << "\n";
    }
    return 0;
}

int cmd_check(const std::string& prop, const std::string& proof, const std::string& proof_file) {
    std::string text = proof;
    if (!proof_file.empty()) {
        std::ifstream f(proof_file, std::ios::binary);
        if (!f) throw IoError("cannot open " + proof_file);
        std::getline(f, text);
    }
    bool ok = verify(parse_prop(prop), parse_term(text));
    std::cout << (ok ? "true" : "false") << "\n";
    return ok ? 0 : 2;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string file;
    EstimatorChoice ec;
    BudgetFlags bf;
    int jobs = 1;
    std::string report;
};

int cmd_bench(const BenchArgs& a) {
    auto props = read_propositions(a.file);
    auto est = a.ec.make();

    std::vector<BenchResult> results(props.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < props.size(); i = next.fetch_add(1)) {
            SearchOptions opts{a.bf.normal_only, a.bf.memo, nullptr};
            SearchStats stats;
            auto t0 = std::chrono::steady_clock::now();
            auto proof = proof_synthesize(props[i], *est, a.bf.budget, opts, &stats);
            std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            BenchResult& b = results[i];
            b.prop = print_prop(props[i]);
            b.seconds = dt.count();
            b.expansions = stats.expansions;
            if (proof) {
                b.found = true;
                b.verified = verify(props[i], *proof);
                b.proof_size = term_size(*proof);
            }
        }
    };
    int jobs = std::max(1, a.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    emit_report(report_bench(results), a.report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proof synthesis for intuitionistic propositional logic"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a config file (flags win)");
    app.get_config_formatter_base()->section("");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a proof corpus");
    gen->add_option("--small,--max-size", ga.small_size,
                    "exhaustive small proofs up to this size");
    gen->add_option("--large", ga.large, "random large proofs with sizes in [L, U]")
        ->expected(2);
    gen->add_option("--lower", ga.lower, "lower size bound (same as --large's first value)");
    gen->add_option("--upper", ga.upper, "upper size bound (same as --large's second value)");
    gen->add_option("--count", ga.count, "number of random proofs")->capture_default_str();
    gen->add_option("--seed", ga.seed, "random seed")->capture_default_str();
    gen->add_option("--restart-budget", ga.opts.restart_budget, "restarts per random proof")
        ->capture_default_str();
    gen->add_option("--jobs", ga.opts.jobs, "parallel workers for random generation")
        ->capture_default_str();
    gen->add_option("--out", ga.out, "corpus file")->capture_default_str();

    std::string q_corpus, q_out = "quads.jsonl";
    auto* quads = app.add_subcommand("quads", "extract training quadruples from a corpus");
    quads->add_option("--corpus", q_corpus, "corpus file")->required();
    quads->add_option("--out", q_out, "quadruple file")->capture_default_str();

    std::string s_quads, s_train = "train.jsonl", s_val = "val.jsonl";
    double s_ratio = 0.9;
    uint64_t s_seed = 0;
    auto* split = app.add_subcommand("split", "shuffle and split a quadruple file");
    split->add_option("--quads", s_quads, "quadruple file")->required();
    split->add_option("--ratio", s_ratio, "train fraction")->capture_default_str();
    split->add_option("--seed", s_seed, "shuffle seed")->capture_default_str();
    split->add_option("--train-out", s_train, "train output")->capture_default_str();
    split->add_option("--val-out", s_val, "validation output")->capture_default_str();

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "train the rule estimator");
    train_cmd->add_option("--quads", ta.quads, "training quadruple file")->required();
    train_cmd->add_option("--val", ta.val, "validation quadruple file");
    train_cmd->add_option("--epochs", ta.opts.epochs, "training epochs")->capture_default_str();
    train_cmd->add_option("--batch", ta.opts.batch_size, "mini-batch size")
        ->capture_default_str();
    train_cmd->add_option("--seed", ta.seed, "init and shuffle seed")->capture_default_str();
    train_cmd->add_option("--alpha", ta.opts.adam.alpha, "Adam step size")
        ->capture_default_str();
    train_cmd->add_option("--weight-decay", ta.opts.adam.lambda, "decay penalty rate")
        ->capture_default_str();
    train_cmd->add_flag("--obligation-free", ta.obligation_free,
                        "ablation: ignore the proof obligation");
    train_cmd->add_flag("--full-scale", ta.full_scale, "full-scale layer dimensions");
    train_cmd->add_option("--out", ta.out, "checkpoint file")->capture_default_str();

    std::string e_quads, e_report;
    EstimatorChoice e_ec;
    auto* eval = app.add_subcommand("eval", "per-rule, per-depth accuracy of an estimator");
    eval->add_option("--quads", e_quads, "validation quadruple file")->required();
    e_ec.add_flags(eval);
    eval->add_option("--report", e_report, "also write REPORT.txt and REPORT.jsonl");

    ProveArgs pa;
    auto* prove = app.add_subcommand("prove", "synthesize a proof of one proposition");
    prove->add_option("proposition", pa.prop, "goal as an s-expression")->required();
    pa.ec.add_flags(prove);
    pa.bf.add_flags(prove);
    prove->add_option("--trace", pa.trace, "write one line per expansion (- for stderr)");
    prove->add_option("--out", pa.out, "also write the proof to this file");

    std::string c_prop, c_proof, c_proof_file;
    auto* check = app.add_subcommand("check", "verify a proposition/proof pair");
    check->add_option("proposition", c_prop, "goal as an s-expression")->required();
    check->add_option("proof", c_proof, "proof as an s-expression");
    check->add_option("--proof-file", c_proof_file, "read the proof from a file instead");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "prove a file of propositions and tabulate");
    bench->add_option("--file", ba.file, "propositions: corpus JSONL or one s-expression per line")
        ->required();
    ba.ec.add_flags(bench);
    ba.bf.add_flags(bench);
    bench->add_option("--jobs", ba.jobs, "parallel provers")->capture_default_str();
    bench->add_option("--report", ba.report, "also write REPORT.txt and REPORT.jsonl");

    for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    try {
        app.parse(argc, argv);
        std::cerr << "# effective config\n" << app.config_to_str(false, false);

        if (*gen) return cmd_gen(ga);
        if (*quads) {
            write_quadruples(q_out, extract_quadruples(read_corpus(q_corpus)));
            std::cerr << "wrote " << q_out << "\n";
            return 0;
        }
        if (*split) {
            if (!(s_ratio > 0.0 && s_ratio < 1.0))
                throw CLI::ValidationError("--ratio", "need 0 < ratio < 1");
            auto parts = split_quadruples(read_quadruples(s_quads), s_ratio, s_seed);
            write_quadruples(s_train, parts.train);
            write_quadruples(s_val, parts.validation);
            std::cerr << "wrote " << parts.train.size() << " train / " << parts.validation.size()
                      << " validation\n";
            return 0;
        }
        if (*train_cmd) return cmd_train(ta);
        if (*eval) return cmd_eval(e_quads, e_ec, e_report);
        if (*prove) return cmd_prove(pa);
        if (*check) {
            if (c_proof.empty() == c_proof_file.empty())
                throw CLI::ValidationError("check", "pass a proof or --proof-file, not both");
            return cmd_check(c_prop, c_proof, c_proof_file);
        }
        if (*bench) return cmd_bench(ba);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
