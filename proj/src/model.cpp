#include "proofsynth/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "proofsynth/dataset.hpp"
#include "proofsynth/errors.hpp"
#include "proofsynth/rng.hpp"

namespace proofsynth {

namespace {

constexpr const char* kClassName[kClassCount] = {"var", "imp", "prod", "sum"};
constexpr int kClassArity[kClassCount] = {0, 2, 2, 2};

int class_of(PropKind k) {
    switch (k) {
        case PropKind::Var: return 0;
        case PropKind::Imp: return 1;
        case PropKind::Prod: return 2;
        case PropKind::Sum: return 3;
    }
    throw InternalError("bad prop kind");
}

// position of a context kind in the fixed candidate order
int context_index(TermKind k) {
    const auto& ks = context_kinds();
    for (int i = 0; i < 7; ++i)
        if (ks[i] == k) return i;
    throw Error("not a context kind");
}

Eigen::VectorXd relu(const Eigen::VectorXd& v) { return v.cwiseMax(0.0); }

// relu backward: output is max(pre, 0), so out > 0 tells where pre > 0;
// the subgradient at exactly 0 is taken as 0
Eigen::VectorXd masked(const Eigen::VectorXd& d, const Eigen::VectorXd& out) {
    return ((out.array() > 0.0).cast<double>() * d.array()).matrix();
}

}  // namespace

// ---------------------------------------------------------------------------
// ModelConfig
// ---------------------------------------------------------------------------

ModelConfig ModelConfig::desk(bool obligation_free) {
    ModelConfig c;
    c.obligation_free = obligation_free;
    return c;
}

ModelConfig ModelConfig::full_scale(bool obligation_free) {
    ModelConfig c;
    c.conv = {4, 200, 500, 1000};
    c.obl_conv = 16;
    c.fc = {1016, 1016};
    c.obligation_free = obligation_free;
    return c;
}

bool ModelConfig::operator==(const ModelConfig& o) const {
    return conv == o.conv && obl_conv == o.obl_conv && fc == o.fc &&
           obligation_free == o.obligation_free;
}

// ---------------------------------------------------------------------------
// Vocab
// ---------------------------------------------------------------------------

void Vocab::add(const std::string& name) {
    if (fnum_.count(name)) return;
    names_.push_back(name);
    fnum_[name] = static_cast<int>(names_.size());
}

int Vocab::lookup(const std::string& name) const {
    auto it = fnum_.find(name);
    return it == fnum_.end() ? 0 : it->second;
}

Vocab Vocab::from_quadruples(const std::vector<Quadruple>& quads) {
    Vocab v;
    for (const auto& q : quads) {
        for (const auto& n : prop_vars(q.goal)) v.add(n);
        for (const auto& n : prop_vars(q.obligation)) v.add(n);
    }
    return v;
}

// ---------------------------------------------------------------------------
// ParameterStore
// ---------------------------------------------------------------------------

int ParameterStore::add(std::string name, int rows, int cols, bool is_weight) {
    Tensor t;
    t.name = std::move(name);
    t.is_weight = is_weight;
    t.value = Eigen::MatrixXd::Zero(rows, cols);
    t.m = Eigen::MatrixXd::Zero(rows, cols);
    t.v = Eigen::MatrixXd::Zero(rows, cols);
    int id = static_cast<int>(tensors_.size());
    index_[t.name] = id;
    tensors_.push_back(std::move(t));
    return id;
}

int ParameterStore::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Network wiring
// ---------------------------------------------------------------------------

Network::Network(ModelConfig cfg) : cfg_(cfg) { register_tensors(); }

void Network::register_tensors() {
    auto conv_layer = [&](const std::string& prefix, int in, int out,
                          std::array<ConvClass, kClassCount>& slots) {
        for (int c = 0; c < kClassCount; ++c) {
            std::string base = prefix + "." + kClassName[c] + ".";
            slots[c].w_self = store_.add(base + "w", out, in, true);
            for (int i = 0; i < kClassArity[c]; ++i)
                slots[c].w_child[i] = store_.add(base + "w" + std::to_string(i), out, in, true);
            slots[c].w_parent = store_.add(base + "wp", out, in, true);
            slots[c].b = store_.add(base + "b", out, 1, false);
        }
    };
    auto agg_layer = [&](const std::string& prefix, int n,
                         std::array<AggClass, kClassCount>& slots) {
        for (int c = 0; c < kClassCount; ++c) {
            std::string base = prefix + "." + kClassName[c] + ".";
            slots[c].w_self = store_.add(base + "w", n, n, true);
            for (int i = 0; i < kClassArity[c]; ++i)
                slots[c].w_child[i] = store_.add(base + "w" + std::to_string(i), n, n, true);
            slots[c].b = store_.add(base + "b", n, 1, false);
        }
    };

    for (int l = 0; l < 3; ++l)
        conv_layer("conv" + std::to_string(l + 1), cfg_.conv[l], cfg_.conv[l + 1], conv_[l]);
    agg_layer("agg1", cfg_.conv[3], agg1_);

    int n = cfg_.conv[3];
    const auto& ks = context_kinds();
    for (int ci = 0; ci < 7; ++ci) {
        std::string tag = context_tag(ks[ci]);
        for (int i = 0; i < context_arity(ks[ci]); ++i) {
            std::string base = "ext." + tag + "." + std::to_string(i) + ".";
            ext_w_[ci][i] = store_.add(base + "w", n, n, true);
            ext_b_[ci][i] = store_.add(base + "b", n, 1, false);
        }
    }
    ext_final_w_ = store_.add("ext.w", n, n, true);
    ext_final_b_ = store_.add("ext.b", n, 1, false);

    if (!cfg_.obligation_free) {
        conv_layer("conv4", 4, cfg_.obl_conv, conv4_);
        agg_layer("agg2", cfg_.obl_conv, agg2_);
    }

    int dims[4] = {cfg_.concat_dim(), cfg_.fc[0], cfg_.fc[1], 8};
    for (int l = 0; l < 3; ++l) {
        std::string base = "fc" + std::to_string(l + 1) + ".";
        fc_w_[l] = store_.add(base + "w", dims[l + 1], dims[l], true);
        fc_b_[l] = store_.add(base + "b", dims[l + 1], 1, false);
    }
}

void Network::init_parameters(uint64_t seed) {
    DetRng rng(seed);
    for (int i = 0; i < store_.count(); ++i) {
        Tensor& t = store_.at(i);
        t.m.setZero();
        t.v.setZero();
        if (!t.is_weight) {
            t.value.setZero();
            continue;
        }
        // std sqrt(1/n), n the input width (the column count)
        double sd = std::sqrt(1.0 / static_cast<double>(t.value.cols()));
        double* d = t.value.data();
        for (Eigen::Index k = 0; k < t.value.size(); ++k) d[k] = rng.gaussian() * sd;
    }
    store_.adam_step = 0;
}

Gradients Network::zero_gradients() const {
    Gradients g(store_.count());
    for (int i = 0; i < store_.count(); ++i)
        g[i] = Eigen::MatrixXd::Zero(store_.at(i).value.rows(), store_.at(i).value.cols());
    return g;
}

Eigen::MatrixXd Network::run_conv_layer(const PropGraph& g, const Eigen::MatrixXd& x,
                                        int which) const {
    if (which >= 1 && which <= 3) return run_conv(g, x, conv_[which - 1]);
    if (which == 4) {
        if (cfg_.obligation_free) throw Error("no obligation branch");
        return run_conv(g, x, conv4_);
    }
    throw Error("no such conv layer");
}

Eigen::MatrixXd Network::run_agg_layer(const PropGraph& g, const Eigen::MatrixXd& x,
                                       int which) const {
    if (which == 1) return run_agg(g, x, agg1_);
    if (which == 2) {
        if (cfg_.obligation_free) throw Error("no obligation branch");
        return run_agg(g, x, agg2_);
    }
    throw Error("no such aggregation layer");
}

Eigen::VectorXd Network::run_extract(const Path& rho, const Eigen::VectorXd& v) const {
    Eigen::VectorXd h = v;
    for (const auto& step : rho) {
        int ci = context_index(step.ctx.kind);
        if (step.child < 0 || step.child >= context_arity(step.ctx.kind))
            throw Error("path step child index out of range");
        h = relu(store_.at(ext_w_[ci][step.child]).value * h +
                 store_.at(ext_b_[ci][step.child]).value.col(0));
    }
    return store_.at(ext_final_w_).value * h + store_.at(ext_final_b_).value.col(0);
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

Eigen::Vector4d enc(NodeClass cls, double f) {
    Eigen::Vector4d v = Eigen::Vector4d::Zero();
    switch (cls) {
        case NodeClass::Var: v[0] = f; break;
        case NodeClass::Imp: v[1] = 1.0; break;
        case NodeClass::Prod: v[2] = 1.0; break;
        case NodeClass::Sum: v[3] = 1.0; break;
    }
    return v;
}

PropGraph Network::encode(const PropPtr& p, const Vocab& vocab,
                          std::unordered_map<std::string, int>* extra) const {
    PropGraph g;
    // preorder; unseen names drawn from the overlay so one classify call is
    // internally consistent without mutating the stored vocabulary
    auto build = [&](auto&& self, const PropPtr& q, int parent) -> int {
        int id = static_cast<int>(g.nodes.size());
        g.nodes.push_back({});
        g.nodes[id].cls = class_of(q->kind);
        g.nodes[id].parent = parent;
        if (q->kind == PropKind::Var) {
            int f = vocab.lookup(q->name);
            if (f == 0) {
                if (!extra) throw Error("variable not in vocabulary: " + q->name);
                auto it = extra->find(q->name);
                if (it == extra->end()) {
                    f = vocab.size() + static_cast<int>(extra->size()) + 1;
                    (*extra)[q->name] = f;
                } else {
                    f = it->second;
                }
            }
            g.nodes[id].f = static_cast<double>(f);
        } else {
            int l = self(self, q->lhs, id);
            int r = self(self, q->rhs, id);
            g.nodes[id].child[0] = l;
            g.nodes[id].child[1] = r;
            g.nodes[id].nchild = 2;
        }
        return id;
    };
    build(build, p, -1);
    return g;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

Eigen::MatrixXd Network::run_conv(const PropGraph& g, const Eigen::MatrixXd& x,
                                  const std::array<ConvClass, kClassCount>& layer) const {
    int n = static_cast<int>(g.nodes.size());
    int out = static_cast<int>(store_.at(layer[0].b).value.rows());
    Eigen::MatrixXd y(out, n);
    // simultaneous update: every read comes from x
    for (int t = 0; t < n; ++t) {
        const auto& nd = g.nodes[t];
        const auto& P = layer[nd.cls];
        Eigen::VectorXd pre = store_.at(P.w_self).value * x.col(t) + store_.at(P.b).value.col(0);
        for (int i = 0; i < nd.nchild; ++i)
            pre += store_.at(P.w_child[i]).value * x.col(nd.child[i]);
        if (nd.parent >= 0) pre += store_.at(P.w_parent).value * x.col(nd.parent);
        y.col(t) = relu(pre);
    }
    return y;
}

Eigen::MatrixXd Network::run_agg(const PropGraph& g, const Eigen::MatrixXd& x,
                                 const std::array<AggClass, kClassCount>& layer) const {
    int n = static_cast<int>(g.nodes.size());
    int dim = static_cast<int>(store_.at(layer[0].b).value.rows());
    Eigen::MatrixXd a(dim, n);
    // children precede their parent when walking preorder indices backwards
    for (int t = n - 1; t >= 0; --t) {
        const auto& nd = g.nodes[t];
        const auto& P = layer[nd.cls];
        Eigen::VectorXd pre = store_.at(P.w_self).value * x.col(t) + store_.at(P.b).value.col(0);
        for (int i = 0; i < nd.nchild; ++i)
            pre += store_.at(P.w_child[i]).value * a.col(nd.child[i]);
        a.col(t) = relu(pre);
    }
    return a;
}

Forward Network::forward(const PropPtr& goal, const Path& rho, const PropPtr& obligation,
                         const Vocab& vocab) const {
    Forward f;
    std::unordered_map<std::string, int> extra;

    f.goal = encode(goal, vocab, &extra);
    int n = static_cast<int>(f.goal.nodes.size());
    f.gx.resize(4);
    f.gx[0].resize(4, n);
    for (int t = 0; t < n; ++t)
        f.gx[0].col(t) = enc(static_cast<NodeClass>(f.goal.nodes[t].cls), f.goal.nodes[t].f);
    for (int l = 0; l < 3; ++l) f.gx[l + 1] = run_conv(f.goal, f.gx[l], conv_[l]);
    f.ga = run_agg(f.goal, f.gx[3], agg1_);

    Eigen::VectorXd h = f.ga.col(0);
    f.ext.push_back(h);
    for (const auto& step : rho) {
        int ci = context_index(step.ctx.kind);
        if (step.child < 0 || step.child >= context_arity(step.ctx.kind))
            throw Error("path step child index out of range");
        int wi = ext_w_[ci][step.child], bi = ext_b_[ci][step.child];
        f.ext_path.emplace_back(wi, bi);
        h = relu(store_.at(wi).value * h + store_.at(bi).value.col(0));
        f.ext.push_back(h);
    }
    // the final step is affine only
    f.vrho = store_.at(ext_final_w_).value * h + store_.at(ext_final_b_).value.col(0);

    if (!cfg_.obligation_free) {
        f.obl = encode(obligation, vocab, &extra);
        int on = static_cast<int>(f.obl.nodes.size());
        f.ox.resize(2);
        f.ox[0].resize(4, on);
        for (int t = 0; t < on; ++t)
            f.ox[0].col(t) = enc(static_cast<NodeClass>(f.obl.nodes[t].cls), f.obl.nodes[t].f);
        f.ox[1] = run_conv(f.obl, f.ox[0], conv4_);
        f.oa = run_agg(f.obl, f.ox[1], agg2_);
    }

    f.z.resize(cfg_.concat_dim());
    f.z.head(cfg_.conv[3]) = f.vrho;
    if (!cfg_.obligation_free) f.z.tail(cfg_.obl_conv) = f.oa.col(0);

    f.u1 = relu(store_.at(fc_w_[0]).value * f.z + store_.at(fc_b_[0]).value.col(0));
    f.u2 = relu(store_.at(fc_w_[1]).value * f.u1 + store_.at(fc_b_[1]).value.col(0));
    f.logits = store_.at(fc_w_[2]).value * f.u2 + store_.at(fc_b_[2]).value.col(0);

    double mx = f.logits.maxCoeff();
    double sum = 0.0;
    for (int j = 0; j < 8; ++j) {
        f.prob[j] = std::exp(f.logits[j] - mx);
        sum += f.prob[j];
    }
    for (int j = 0; j < 8; ++j) f.prob[j] /= sum;
    return f;
}

// ---------------------------------------------------------------------------
// Backward
// ---------------------------------------------------------------------------

void Network::conv_backward(const PropGraph& g, const Eigen::MatrixXd& xin,
                            const Eigen::MatrixXd& xout,
                            const std::array<ConvClass, kClassCount>& layer,
                            const Eigen::MatrixXd& dout, Eigen::MatrixXd& din,
                            Gradients& grad) const {
    int n = static_cast<int>(g.nodes.size());
    for (int t = 0; t < n; ++t) {
        const auto& nd = g.nodes[t];
        const auto& P = layer[nd.cls];
        Eigen::VectorXd dpre = masked(dout.col(t), xout.col(t));
        grad[P.w_self] += dpre * xin.col(t).transpose();
        grad[P.b] += dpre;
        din.col(t) += store_.at(P.w_self).value.transpose() * dpre;
        for (int i = 0; i < nd.nchild; ++i) {
            grad[P.w_child[i]] += dpre * xin.col(nd.child[i]).transpose();
            din.col(nd.child[i]) += store_.at(P.w_child[i]).value.transpose() * dpre;
        }
        if (nd.parent >= 0) {
            grad[P.w_parent] += dpre * xin.col(nd.parent).transpose();
            din.col(nd.parent) += store_.at(P.w_parent).value.transpose() * dpre;
        }
    }
}

void Network::agg_backward(const PropGraph& g, const Eigen::MatrixXd& x,
                           const Eigen::MatrixXd& a,
                           const std::array<AggClass, kClassCount>& layer,
                           const Eigen::VectorXd& droot, Eigen::MatrixXd& dx,
                           Gradients& grad) const {
    int n = static_cast<int>(g.nodes.size());
    Eigen::MatrixXd da = Eigen::MatrixXd::Zero(a.rows(), n);
    da.col(0) = droot;
    // parents precede children in preorder, so each da column is complete
    // before it is consumed
    for (int t = 0; t < n; ++t) {
        const auto& nd = g.nodes[t];
        const auto& P = layer[nd.cls];
        Eigen::VectorXd dpre = masked(da.col(t), a.col(t));
        grad[P.w_self] += dpre * x.col(t).transpose();
        grad[P.b] += dpre;
        dx.col(t) += store_.at(P.w_self).value.transpose() * dpre;
        for (int i = 0; i < nd.nchild; ++i) {
            grad[P.w_child[i]] += dpre * a.col(nd.child[i]).transpose();
            da.col(nd.child[i]) += store_.at(P.w_child[i]).value.transpose() * dpre;
        }
    }
}

void Network::backward(const Forward& f, Rule label, Gradients& grad) const {
    Eigen::VectorXd dl(8);
    for (int j = 0; j < 8; ++j) dl[j] = f.prob[j];
    dl[static_cast<int>(label)] -= 1.0;

    grad[fc_w_[2]] += dl * f.u2.transpose();
    grad[fc_b_[2]] += dl;
    Eigen::VectorXd du2 = masked(store_.at(fc_w_[2]).value.transpose() * dl, f.u2);
    grad[fc_w_[1]] += du2 * f.u1.transpose();
    grad[fc_b_[1]] += du2;
    Eigen::VectorXd du1 = masked(store_.at(fc_w_[1]).value.transpose() * du2, f.u1);
    grad[fc_w_[0]] += du1 * f.z.transpose();
    grad[fc_b_[0]] += du1;
    Eigen::VectorXd dz = store_.at(fc_w_[0]).value.transpose() * du1;

    if (!cfg_.obligation_free) {
        Eigen::VectorXd doa = dz.tail(cfg_.obl_conv);
        Eigen::MatrixXd dox1 =
            Eigen::MatrixXd::Zero(cfg_.obl_conv, static_cast<int>(f.obl.nodes.size()));
        agg_backward(f.obl, f.ox[1], f.oa, agg2_, doa, dox1, grad);
        Eigen::MatrixXd dox0 = Eigen::MatrixXd::Zero(4, static_cast<int>(f.obl.nodes.size()));
        conv_backward(f.obl, f.ox[0], f.ox[1], conv4_, dox1, dox0, grad);
    }

    Eigen::VectorXd dv = dz.head(cfg_.conv[3]);
    grad[ext_final_w_] += dv * f.ext.back().transpose();
    grad[ext_final_b_] += dv;
    Eigen::VectorXd dh = store_.at(ext_final_w_).value.transpose() * dv;
    for (int k = static_cast<int>(f.ext_path.size()) - 1; k >= 0; --k) {
        auto [wi, bi] = f.ext_path[k];
        Eigen::VectorXd dpre = masked(dh, f.ext[k + 1]);
        grad[wi] += dpre * f.ext[k].transpose();
        grad[bi] += dpre;
        dh = store_.at(wi).value.transpose() * dpre;
    }

    int n = static_cast<int>(f.goal.nodes.size());
    Eigen::MatrixXd dgx = Eigen::MatrixXd::Zero(cfg_.conv[3], n);
    agg_backward(f.goal, f.gx[3], f.ga, agg1_, dh, dgx, grad);
    for (int l = 2; l >= 0; --l) {
        Eigen::MatrixXd din = Eigen::MatrixXd::Zero(cfg_.conv[l], n);
        conv_backward(f.goal, f.gx[l], f.gx[l + 1], conv_[l], dgx, din, grad);
        dgx = std::move(din);
    }
}

// ---------------------------------------------------------------------------
// NeuralEstimator
// ---------------------------------------------------------------------------

NeuralEstimator::NeuralEstimator(ModelConfig cfg, Vocab vocab, uint64_t init_seed)
    : net_(cfg), vocab_(std::move(vocab)) {
    net_.init_parameters(init_seed);
}

RuleDistribution NeuralEstimator::classify(const PropPtr& goal, const Path& rho,
                                           const PropPtr& obligation) const {
    Forward f = net_.forward(goal, rho, obligation, vocab_);
    RuleDistribution d;
    for (int j = 0; j < 8; ++j) d.p[j] = f.prob[j];
    return d;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'P', 'S', 'Y', 'N', '_', 'C', 'K', 'P'};
constexpr uint32_t kFormatVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    out.write(b, 4);
}

uint32_t read_u32(std::istream& in) {
    char b[4];
    in.read(b, 4);
    if (!in) throw FormatMismatch("checkpoint truncated");
    uint32_t v;
    std::memcpy(&v, b, 4);
    return v;
}

void write_mat(std::ostream& out, const Eigen::MatrixXd& m) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void read_mat(std::istream& in, Eigen::MatrixXd& m) {
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!in) throw FormatMismatch("checkpoint truncated");
}

}  // namespace

void save_checkpoint(const NeuralEstimator& est, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);

    const ModelConfig& cfg = est.config();
    nlohmann::json header;
    header["config"] = {{"conv", cfg.conv},
                        {"obl_conv", cfg.obl_conv},
                        {"fc", cfg.fc},
                        {"obligation_free", cfg.obligation_free}};
    header["vocab"] = est.vocab().names();
    header["adam_step"] = est.net().params().adam_step;
    std::string hs = header.dump();

    out.write(kMagic, 8);
    write_u32(out, kFormatVersion);
    write_u32(out, static_cast<uint32_t>(hs.size()));
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));

    const ParameterStore& store = est.net().params();
    write_u32(out, static_cast<uint32_t>(store.count()));
    for (int i = 0; i < store.count(); ++i) {
        const Tensor& t = store.at(i);
        write_u32(out, static_cast<uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_u32(out, static_cast<uint32_t>(t.value.rows()));
        write_u32(out, static_cast<uint32_t>(t.value.cols()));
        write_mat(out, t.value);
        write_mat(out, t.m);
        write_mat(out, t.v);
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

NeuralEstimator load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);

    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw FormatMismatch("not a checkpoint file: " + path);
    uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw FormatMismatch("checkpoint format version " + std::to_string(version) +
                             ", expected " + std::to_string(kFormatVersion));

    uint32_t hlen = read_u32(in);
    std::string hs(hlen, '\0');
    in.read(hs.data(), hlen);
    if (!in) throw FormatMismatch("checkpoint truncated");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hs);
    } catch (const nlohmann::json::exception&) {
        throw FormatMismatch("bad checkpoint header");
    }

    ModelConfig cfg;
    Vocab vocab;
    int64_t adam_step = 0;
    try {
        const auto& jc = header.at("config");
        auto conv = jc.at("conv").get<std::vector<int>>();
        auto fc = jc.at("fc").get<std::vector<int>>();
        if (conv.size() != 4 || fc.size() != 2) throw FormatMismatch("bad checkpoint config");
        std::copy(conv.begin(), conv.end(), cfg.conv.begin());
        std::copy(fc.begin(), fc.end(), cfg.fc.begin());
        cfg.obl_conv = jc.at("obl_conv").get<int>();
        cfg.obligation_free = jc.at("obligation_free").get<bool>();
        for (const auto& n : header.at("vocab")) vocab.add(n.get<std::string>());
        adam_step = header.at("adam_step").get<int64_t>();
    } catch (const nlohmann::json::exception&) {
        throw FormatMismatch("bad checkpoint header");
    }

    NeuralEstimator est(cfg, vocab, 0);
    ParameterStore& store = est.net().params();
    uint32_t count = read_u32(in);
    if (static_cast<int>(count) != store.count())
        throw FormatMismatch("checkpoint tensor count does not match its config");
    for (uint32_t k = 0; k < count; ++k) {
        uint32_t nlen = read_u32(in);
        std::string name(nlen, '\0');
        in.read(name.data(), nlen);
        if (!in) throw FormatMismatch("checkpoint truncated");
        int id = store.find(name);
        if (id < 0) throw FormatMismatch("unknown tensor in checkpoint: " + name);
        Tensor& t = store.at(id);
        uint32_t rows = read_u32(in), cols = read_u32(in);
        if (static_cast<int>(rows) != t.value.rows() || static_cast<int>(cols) != t.value.cols())
            throw FormatMismatch("tensor shape mismatch for " + name);
        read_mat(in, t.value);
        read_mat(in, t.m);
        read_mat(in, t.v);
    }
    store.adam_step = adam_step;
    if (in.peek() != std::ifstream::traits_type::eof())
        throw FormatMismatch("trailing data in checkpoint");
    return est;
}

}  // namespace proofsynth
