#include "proofsynth/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "proofsynth/errors.hpp"
#include "proofsynth/rng.hpp"

namespace proofsynth {

namespace {

// -(logit[label] - logsumexp(logits)); robust where exp underflows
double example_loss(const Forward& f, Rule label) {
    double mx = f.logits.maxCoeff();
    double sum = 0.0;
    for (int j = 0; j < 8; ++j) sum += std::exp(f.logits[j] - mx);
    return mx + std::log(sum) - f.logits[static_cast<int>(label)];
}

}  // namespace

double batch_loss(const NeuralEstimator& est, std::span<const Quadruple> batch,
                  Gradients* grads) {
    double total = 0.0;
    for (const Quadruple& q : batch) {
        Forward f = est.net().forward(q.goal, q.path, q.obligation, est.vocab());
        total += example_loss(f, q.rule);
        if (grads) est.net().backward(f, q.rule, *grads);
    }
    double n = static_cast<double>(batch.size());
    if (grads)
        for (auto& g : *grads) g /= n;
    return total / n;
}

void adam_apply(ParameterStore& store, const Gradients& grads, const AdamHyper& h) {
    store.adam_step += 1;
    double t = static_cast<double>(store.adam_step);
    double bc1 = 1.0 - std::pow(h.beta1, t);
    double bc2 = 1.0 - std::pow(h.beta2, t);
    for (int i = 0; i < store.count(); ++i) {
        Tensor& p = store.at(i);
        Eigen::MatrixXd g = grads[i];
        if (p.is_weight && h.lambda != 0.0) g += h.lambda * p.value;
        p.m = h.beta1 * p.m + (1.0 - h.beta1) * g;
        p.v = h.beta2 * p.v + (1.0 - h.beta2) * g.cwiseProduct(g);
        p.value.array() -= h.alpha * (p.m.array() / bc1) / ((p.v.array() / bc2).sqrt() + h.eps);
    }
}

double train_step(NeuralEstimator& est, std::span<const Quadruple> batch, const AdamHyper& h) {
    if (batch.empty()) throw Error("empty training batch");
    Gradients grads = est.net().zero_gradients();
    double loss = batch_loss(est, batch, &grads);
    if (!std::isfinite(loss)) throw NonfiniteLoss("training loss is not finite");
    adam_apply(est.net().params(), grads, h);
    return loss;
}

std::vector<EpochStats> train(NeuralEstimator& est, const std::vector<Quadruple>& train_set,
                              const std::vector<Quadruple>& val_set, const TrainOptions& opts,
                              std::ostream* log) {
    if (train_set.empty()) throw Error("empty training set");
    std::vector<int> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    DetRng rng(opts.shuffle_seed);

    std::vector<EpochStats> stats;
    for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
        det_shuffle(order, rng);
        double total = 0.0;
        std::vector<Quadruple> batch;
        for (size_t start = 0; start < order.size(); start += opts.batch_size) {
            size_t end = std::min(order.size(), start + static_cast<size_t>(opts.batch_size));
            batch.clear();
            for (size_t k = start; k < end; ++k) batch.push_back(train_set[order[k]]);
            total += train_step(est, batch, opts.adam) * static_cast<double>(batch.size());
        }
        EpochStats s;
        s.epoch = epoch;
        s.mean_loss = total / static_cast<double>(train_set.size());
        s.val_accuracy = rule_accuracy(est, val_set);
        stats.push_back(s);
        if (log) {
            char line[128];
            std::snprintf(line, sizeof line, "epoch %d mean_loss %.6f val_accuracy %.6f",
                          s.epoch, s.mean_loss, s.val_accuracy);
            (*log) << line << "\n";
        }
    }
    return stats;
}

double rule_accuracy(const RuleEstimator& est, const std::vector<Quadruple>& quads) {
    if (quads.empty()) return 0.0;
    int correct = 0;
    for (const Quadruple& q : quads)
        if (est.classify(q.goal, q.path, q.obligation).argmax() == q.rule) ++correct;
    return static_cast<double>(correct) / static_cast<double>(quads.size());
}

double grad_check(const ModelConfig& cfg, uint64_t seed) {
    DetRng rng(seed);
    std::vector<Quadruple> quads = extract_quadruples(small_proof_gen(4));
    det_shuffle(quads, rng);
    quads.resize(3);

    NeuralEstimator est(cfg, Vocab::from_quadruples(quads), rng.next_u64());

    Gradients analytic = est.net().zero_gradients();
    batch_loss(est, quads, &analytic);

    const double h = 1e-5;
    double worst = 0.0;
    ParameterStore& store = est.net().params();
    for (int i = 0; i < store.count(); ++i) {
        Eigen::MatrixXd& w = store.at(i).value;
        for (Eigen::Index k = 0; k < w.size(); ++k) {
            double saved = w.data()[k];
            w.data()[k] = saved + h;
            double up = batch_loss(est, quads, nullptr);
            w.data()[k] = saved - h;
            double down = batch_loss(est, quads, nullptr);
            w.data()[k] = saved;
            double numeric = (up - down) / (2.0 * h);
            double a = analytic[i].data()[k];  // same column-major layout
            double rel = std::abs(a - numeric) /
                         std::max({std::abs(a), std::abs(numeric), 1e-2});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

}  // namespace proofsynth
