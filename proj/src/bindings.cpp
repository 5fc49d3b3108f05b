// Python bindings. Propositions and terms cross the boundary as s-expression
// strings; estimators and checkpoints are opaque handles.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "proofsynth/dataset.hpp"
#include "proofsynth/errors.hpp"
#include "proofsynth/estimator.hpp"
#include "proofsynth/model.hpp"
#include "proofsynth/reduce.hpp"
#include "proofsynth/search.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/train.hpp"
#include "proofsynth/typing.hpp"

namespace py = pybind11;
using namespace proofsynth;

namespace {

// (prop, proof) string pairs <-> ProofPair
std::vector<ProofPair> pairs_from_py(const std::vector<std::pair<std::string, std::string>>& v) {
    std::vector<ProofPair> out;
    out.reserve(v.size());
    for (const auto& [p, m] : v) out.push_back({parse_prop(p), parse_term(m)});
    return out;
}

std::vector<std::pair<std::string, std::string>> pairs_to_py(const std::vector<ProofPair>& v) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(v.size());
    for (const auto& pr : v) out.emplace_back(print_prop(pr.proposition), print_term(pr.proof));
    return out;
}

// quadruples cross as (goal, obligation, path-json, rule-name)
using PyQuad = std::tuple<std::string, std::string, std::string, std::string>;

std::vector<Quadruple> quads_from_py(const std::vector<PyQuad>& v) {
    std::vector<Quadruple> out;
    out.reserve(v.size());
    for (const auto& [g, o, p, r] : v) {
        auto rule = rule_from_name(r);
        if (!rule) throw ParseError("unknown rule name: " + r);
        out.push_back({parse_prop(g), parse_prop(o), path_from_json(p), *rule});
    }
    return out;
}

std::vector<PyQuad> quads_to_py(const std::vector<Quadruple>& v) {
    std::vector<PyQuad> out;
    out.reserve(v.size());
    for (const auto& q : v)
        out.emplace_back(print_prop(q.goal), print_prop(q.obligation), path_to_json(q.path),
                         rule_name(q.rule));
    return out;
}

struct PyEstimator {
    std::shared_ptr<RuleEstimator> est;
};

}  // namespace

PYBIND11_MODULE(proofsynth, m) {
    m.doc() = "proof synthesis for intuitionistic propositional logic";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    // ---- calculus -----------------------------------------------------------
    m.def("parse_print_prop",
          [](const std::string& s) { return print_prop(parse_prop(s)); },
          "normalize a proposition s-expression");
    m.def("parse_print_term",
          [](const std::string& s) { return print_term(parse_term(s)); },
          "normalize a term s-expression");
    m.def("canonical_prop", [](const std::string& s) {
        return print_prop(canonical_rename(parse_prop(s)));
    });
    m.def("term_size", [](const std::string& s) { return term_size(parse_term(s)); });
    m.def("is_normal", [](const std::string& s) { return is_normal(parse_term(s)); });
    m.def("normalize", [](const std::string& s) { return print_term(normalize(parse_term(s))); });
    m.def("beta_step", [](const std::string& s) -> std::optional<std::string> {
        auto r = beta_step(parse_term(s));
        if (!r) return std::nullopt;
        return print_term(*r);
    });
    m.def("eta_step", [](const std::string& s) -> std::optional<std::string> {
        auto r = eta_step(parse_term(s));
        if (!r) return std::nullopt;
        return print_term(*r);
    });
    m.def("infer_principal", [](const std::string& s) -> std::optional<std::string> {
        auto inf = infer_principal(parse_term(s));
        if (!inf) return std::nullopt;
        return print_prop(inf->principal);
    });
    m.def("typecheck", [](const std::string& prop, const std::string& term) {
        return typecheck({}, parse_term(term), parse_prop(prop));
    });
    m.def("verify", [](const std::string& prop, const std::string& term) {
        return verify(parse_prop(prop), parse_term(term));
    });

    // ---- datasetgen ----------------------------------------------------------
    m.def("small_proof_gen",
          [](int max_size) { return pairs_to_py(small_proof_gen(max_size)); },
          py::arg("max_size"));
    m.def(
        "random_large_proof_gen",
        [](int lower, int upper, uint64_t seed, int count, int restart_budget, int jobs) {
            return pairs_to_py(
                random_large_proof_gen(lower, upper, seed, count, {restart_budget, jobs}));
        },
        py::arg("lower"), py::arg("upper"), py::arg("seed"), py::arg("count"),
        py::arg("restart_budget") = 10000, py::arg("jobs") = 1);
    m.def("extract_quadruples",
          [](const std::vector<std::pair<std::string, std::string>>& pairs) {
              return quads_to_py(extract_quadruples(pairs_from_py(pairs)));
          });
    m.def(
        "split_quadruples",
        [](const std::vector<PyQuad>& quads, double ratio, uint64_t seed) {
            auto s = split_quadruples(quads_from_py(quads), ratio, seed);
            return std::make_pair(quads_to_py(s.train), quads_to_py(s.validation));
        },
        py::arg("quads"), py::arg("ratio") = 0.9, py::arg("seed") = 0);
    m.def("write_corpus", [](const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& pairs) {
        write_corpus(path, pairs_from_py(pairs));
    });
    m.def("read_corpus",
          [](const std::string& path) { return pairs_to_py(read_corpus(path)); });
    m.def("write_quadruples", [](const std::string& path, const std::vector<PyQuad>& quads) {
        write_quadruples(path, quads_from_py(quads));
    });
    m.def("read_quadruples",
          [](const std::string& path) { return quads_to_py(read_quadruples(path)); });

    // ---- estimator -----------------------------------------------------------
    py::class_<PyEstimator>(m, "Estimator")
        .def("classify",
             [](const PyEstimator& self, const std::string& goal, const std::string& path,
                const std::string& obligation) {
                 auto g = parse_prop(goal);
                 auto o = obligation.empty() ? g : parse_prop(obligation);
                 auto d = self.est->classify(g, path_from_json(path), o);
                 py::dict out;
                 for (int i = 0; i < kRuleCount; ++i)
                     out[rule_name(static_cast<Rule>(i))] = d.p[i];
                 return out;
             },
             py::arg("goal"), py::arg("path") = "[]", py::arg("obligation") = std::string())
        .def("save", [](const PyEstimator& self, const std::string& path) {
            auto* neural = dynamic_cast<const NeuralEstimator*>(self.est.get());
            if (!neural) throw Error("only neural estimators have checkpoints");
            save_checkpoint(*neural, path);
        });

    m.def("uniform_estimator",
          [] { return PyEstimator{std::make_shared<UniformEstimator>()}; });
    m.def(
        "new_estimator",
        [](const std::vector<PyQuad>& quads, uint64_t seed, bool obligation_free,
           bool full_scale) {
            auto cfg = full_scale ? ModelConfig::full_scale(obligation_free)
                                  : ModelConfig::desk(obligation_free);
            auto qs = quads_from_py(quads);
            return PyEstimator{
                std::make_shared<NeuralEstimator>(cfg, Vocab::from_quadruples(qs), seed)};
        },
        py::arg("quads"), py::arg("seed") = 0, py::arg("obligation_free") = false,
        py::arg("full_scale") = false,
        "fresh desk-scale estimator with the vocabulary of the given quadruples");
    m.def("load_checkpoint", [](const std::string& path) {
        return PyEstimator{std::make_shared<NeuralEstimator>(load_checkpoint(path))};
    });
    m.def(
        "train",
        [](PyEstimator& est, const std::vector<PyQuad>& train_set,
           const std::vector<PyQuad>& val_set, int epochs, int batch_size, uint64_t seed) {
            auto* neural = dynamic_cast<NeuralEstimator*>(est.est.get());
            if (!neural) throw Error("only neural estimators can be trained");
            TrainOptions opts;
            opts.epochs = epochs;
            opts.batch_size = batch_size;
            opts.shuffle_seed = seed;
            auto stats = train(*neural, quads_from_py(train_set), quads_from_py(val_set), opts);
            std::vector<std::tuple<int, double, double>> out;
            for (const auto& s : stats)
                out.emplace_back(s.epoch, s.mean_loss, s.val_accuracy);
            return out;
        },
        py::arg("estimator"), py::arg("train_set"), py::arg("val_set"), py::arg("epochs") = 20,
        py::arg("batch_size") = 1000, py::arg("seed") = 0,
        "returns (epoch, mean_loss, val_accuracy) per epoch");
    m.def("rule_accuracy", [](const PyEstimator& est, const std::vector<PyQuad>& quads) {
        return rule_accuracy(*est.est, quads_from_py(quads));
    });

    // ---- search ---------------------------------------------------------------
    m.def(
        "prove",
        [](const std::string& prop, const PyEstimator& est, long long max_expansions,
           double timeout_sec, bool normal_only, bool memo) -> std::optional<std::string> {
            SearchBudget budget{max_expansions, timeout_sec};
            SearchOptions opts{normal_only, memo, nullptr};
            auto r = proof_synthesize(parse_prop(prop), *est.est, budget, opts);
            if (!r) return std::nullopt;
            return print_term(*r);
        },
        py::arg("prop"), py::arg("estimator"), py::arg("max_expansions") = 1'000'000,
        py::arg("timeout_sec") = 180.0, py::arg("normal_only") = false, py::arg("memo") = false,
        "best-first proof search; returns the proof or None");
    m.def(
        "exhaustive_prove",
        [](const std::string& prop, int max_size) -> std::optional<std::string> {
            auto r = exhaustive_prove(parse_prop(prop), max_size);
            if (!r) return std::nullopt;
            return print_term(*r);
        },
        py::arg("prop"), py::arg("max_size"));
    m.def("phi", [](const std::string& prop, const std::string& proof, const PyEstimator& est) {
        auto p = parse_prop(prop);
        return phi(annotate(parse_term(proof), p), *est.est, p);
    });
}
