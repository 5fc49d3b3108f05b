#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "proofsynth/ast.hpp"
#include "proofsynth/estimator.hpp"

namespace proofsynth {

struct Quadruple;

// ---------------------------------------------------------------------------
// Model configuration
// ---------------------------------------------------------------------------

// Layer widths. The goal branch runs three AST convolutions and an
// aggregation; the obligation branch runs one convolution and its own
// aggregation; the two aggregates are concatenated (unless obligation_free)
// and fed through three fully connected layers down to the 8 rule logits.
struct ModelConfig {
    std::array<int, 4> conv{4, 32, 64, 64};  // node encoding is 4-dim
    int obl_conv = 16;
    std::array<int, 2> fc{64, 64};
    bool obligation_free = false;

    static ModelConfig desk(bool obligation_free = false);
    // widths 4/200/500/1000, 16, 1016/1016
    static ModelConfig full_scale(bool obligation_free = false);

    int concat_dim() const { return conv[3] + (obligation_free ? 0 : obl_conv); }
    bool operator==(const ModelConfig& o) const;
};

// ---------------------------------------------------------------------------
// Variable numbering
// ---------------------------------------------------------------------------

// f maps propositional variable names to 1, 2, 3, ... in order of first
// occurrence over the training data. The mapping is persisted in checkpoints;
// names unseen at inference time get the next unused integers for the
// duration of one classify call (never stored).
class Vocab {
public:
    void add(const std::string& name);  // no-op if present
    int lookup(const std::string& name) const;  // 0 if absent
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

    // first occurrence across goals then obligations, in corpus order
    static Vocab from_quadruples(const std::vector<Quadruple>& quads);

private:
    std::vector<std::string> names_;  // names_[i] has f-value i+1
    std::unordered_map<std::string, int> fnum_;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct Tensor {
    std::string name;
    bool is_weight;  // weight decay applies to weights, never biases
    Eigen::MatrixXd value;
    Eigen::MatrixXd m, v;  // Adam moments, same shape
};

class ParameterStore {
public:
    int add(std::string name, int rows, int cols, bool is_weight);
    Tensor& at(int i) { return tensors_[i]; }
    const Tensor& at(int i) const { return tensors_[i]; }
    int find(const std::string& name) const;  // -1 if absent
    int count() const { return static_cast<int>(tensors_.size()); }
    int64_t adam_step = 0;

private:
    std::vector<Tensor> tensors_;
    std::unordered_map<std::string, int> index_;
};

// gradient buffer shaped like a store's tensors
using Gradients = std::vector<Eigen::MatrixXd>;

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

// node classes: propositional variables and the three connectives
enum class NodeClass { Var = 0, Imp, Prod, Sum };
constexpr int kClassCount = 4;

// a proposition flattened to preorder, children after parents
struct PropGraph {
    struct Node {
        int cls;          // NodeClass index
        double f = 0.0;   // variable number, Var nodes only
        int parent = -1;  // -1 at the root
        int child[2] = {-1, -1};
        int nchild = 0;
    };
    std::vector<Node> nodes;
};

// everything the backward pass needs from one forward evaluation
struct Forward {
    PropGraph goal, obl;
    std::vector<Eigen::MatrixXd> gx;   // goal activations: Enc then each conv
    Eigen::MatrixXd ga;                // goal aggregation, per node
    std::vector<std::pair<int, int>> ext_path;  // (weight, bias) tensor per step
    std::vector<Eigen::VectorXd> ext;  // ext[0] = root aggregate, then each step
    Eigen::VectorXd vrho;              // after the final affine
    std::vector<Eigen::MatrixXd> ox;   // obligation activations
    Eigen::MatrixXd oa;                // obligation aggregation
    Eigen::VectorXd z, u1, u2, logits;
    std::array<double, 8> prob;
};

// Parameter wiring plus forward/backward evaluation. Tensors live in a
// ParameterStore in a fixed registration order (also the checkpoint order and
// the initialization draw order).
class Network {
public:
    explicit Network(ModelConfig cfg);

    const ModelConfig& config() const { return cfg_; }
    ParameterStore& params() { return store_; }
    const ParameterStore& params() const { return store_; }

    // weights ~ N(0, sqrt(1/n)) with n the layer input width; biases zero
    void init_parameters(uint64_t seed);

    // encode a proposition against the vocabulary; extra gets the per-call
    // overlay assignments for unseen names (shared across goal and obligation
    // within one forward). Throws when a name is unknown and no overlay is
    // supplied: every variable must carry a positive number.
    PropGraph encode(const PropPtr& p, const Vocab& vocab,
                     std::unordered_map<std::string, int>* extra) const;

    Forward forward(const PropPtr& goal, const Path& rho, const PropPtr& obligation,
                    const Vocab& vocab) const;
    // gradient of -log prob[label], accumulated into grad
    void backward(const Forward& f, Rule label, Gradients& grad) const;

    Gradients zero_gradients() const;

    // single layers, for inspection: conv 1..3 are the goal branch, 4 the
    // obligation branch; agg 1 and 2 likewise
    Eigen::MatrixXd run_conv_layer(const PropGraph& g, const Eigen::MatrixXd& x,
                                   int which) const;
    Eigen::MatrixXd run_agg_layer(const PropGraph& g, const Eigen::MatrixXd& x, int which) const;
    // the extraction chain including the final affine step
    Eigen::VectorXd run_extract(const Path& rho, const Eigen::VectorXd& v) const;

private:
    ModelConfig cfg_;
    ParameterStore store_;

    // index bundles into the store
    struct ConvClass {
        int w_self, w_child[2], w_parent, b;
    };
    struct AggClass {
        int w_self, w_child[2], b;
    };
    std::array<std::array<ConvClass, kClassCount>, 3> conv_;  // goal branch
    std::array<AggClass, kClassCount> agg1_;
    int ext_w_[7][3], ext_b_[7][3];  // by (context order index, child)
    int ext_final_w_, ext_final_b_;
    std::array<ConvClass, kClassCount> conv4_;  // obligation branch
    std::array<AggClass, kClassCount> agg2_;
    int fc_w_[3], fc_b_[3];

    void register_tensors();
    Eigen::MatrixXd run_conv(const PropGraph& g, const Eigen::MatrixXd& x,
                             const std::array<ConvClass, kClassCount>& layer) const;
    Eigen::MatrixXd run_agg(const PropGraph& g, const Eigen::MatrixXd& x,
                            const std::array<AggClass, kClassCount>& layer) const;
    void conv_backward(const PropGraph& g, const Eigen::MatrixXd& xin,
                       const Eigen::MatrixXd& xout,
                       const std::array<ConvClass, kClassCount>& layer,
                       const Eigen::MatrixXd& dout, Eigen::MatrixXd& din,
                       Gradients& grad) const;
    void agg_backward(const PropGraph& g, const Eigen::MatrixXd& x,
                      const Eigen::MatrixXd& a,
                      const std::array<AggClass, kClassCount>& layer,
                      const Eigen::VectorXd& droot, Eigen::MatrixXd& dx,
                      Gradients& grad) const;
};

// the 4-dim node encoding: [f(a),0,0,0], [0,1,0,0] for ->, [0,0,1,0] for *,
// [0,0,0,1] for +
Eigen::Vector4d enc(NodeClass cls, double f);

// ---------------------------------------------------------------------------
// Estimator wrapper and checkpoints
// ---------------------------------------------------------------------------

class NeuralEstimator final : public RuleEstimator {
public:
    NeuralEstimator(ModelConfig cfg, Vocab vocab, uint64_t init_seed);

    RuleDistribution classify(const PropPtr& goal, const Path& rho,
                              const PropPtr& obligation) const override;

    Network& net() { return net_; }
    const Network& net() const { return net_; }
    const Vocab& vocab() const { return vocab_; }
    const ModelConfig& config() const { return net_.config(); }

private:
    Network net_;
    Vocab vocab_;
};

// Binary checkpoint: magic, format version, a JSON header (config, vocabulary,
// Adam step), then the named tensors with their Adam moments as raw
// little-endian doubles. Round trips are bit-exact.
void save_checkpoint(const NeuralEstimator& est, const std::string& path);
NeuralEstimator load_checkpoint(const std::string& path);

}  // namespace proofsynth
