#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ranknas/data.hpp"
#include "ranknas/matrix.hpp"
#include "ranknas/rng.hpp"
#include "ranknas/space.hpp"

namespace ranknas {

/// Flat parameter store with matching gradient and momentum buffers.
struct ParamTensor {
    std::string key;
    std::vector<int> shape;
    std::vector<double> values;
    std::vector<double> grad;
    std::vector<double> vel; // momentum buffer, persists across steps

    size_t size() const { return values.size(); }
};

/// Shared parameter store for a cell DAG: stem projection (d → width),
/// per-(edge, op) parameters for the parameterized candidates, and the
/// classifier head (width → n_classes). A net built over the full grid acts
/// as the super-net; a net built with an architecture filter holds exactly
/// one path's parameters for stand-alone training.
struct CellNet {
    int width = 0;
    int in_dim = 0;
    int n_classes = 0;
    SearchSpace space;

    ParamTensor stem_w, stem_b;
    ParamTensor cls_w, cls_b;

    struct EdgeParam {
        ParamTensor w, b;
    };
    // keyed by (edge index, op index); Zero/Identity/AvgMix entries absent
    std::map<std::pair<int, int>, EdgeParam> edge_params;

    bool has_edge_params(int edge, int op) const {
        return edge_params.count({edge, op}) != 0;
    }
};

/// Weights uniform in ±1/sqrt(fan_in), biases zero. When `only` is given,
/// allocates just that architecture's (edge, op) parameters.
CellNet init_params(const SearchSpace& space, int width, int in_dim, int n_classes, Rng& rng,
                    const Architecture* only = nullptr);

/// Node 0 = stem(X); node j = Σ over edges (i→j) of op_arch[e](node i);
/// logits = classifier(last node).
Matrix forward(const CellNet& net, const Architecture& arch, const Matrix& X);

/// Mean softmax cross-entropy over the batch. Accumulates scale × analytic
/// gradients into the grad buffers of exactly the parameters the path
/// touches. Throws NumericOverflowError on a non-finite loss.
double loss_grad(CellNet& net, const Architecture& arch, const Matrix& X,
                 const std::vector<int>& y, double scale = 1.0);

/// Momentum SGD with L2 decay over the parameters the path touches; zeroes
/// their grad buffers. v ← μv + g + wd·w; w ← w − lr·v.
void sgd_step(CellNet& net, const Architecture& arch, double lr, double momentum,
              double weight_decay);

/// In-place update of one tensor with the sgd_step rule.
void sgd_update_tensor(ParamTensor& p, double lr, double momentum, double weight_decay);

/// Parameters the path touches, in canonical order (stem, edge params by
/// (edge, op), classifier).
std::vector<ParamTensor*> touched_params(CellNet& net, const Architecture& arch);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

/// Loss and argmax accuracy without gradient side effects. Ties break toward
/// the lowest class index. Throws on an empty batch.
EvalResult evaluate(const CellNet& net, const Architecture& arch, const Matrix& X,
                    const std::vector<int>& y);

inline EvalResult evaluate(const CellNet& net, const Architecture& arch, const Batch& b) {
    return evaluate(net, arch, b.X, b.y);
}

/// Text checkpoint of (key, shape, values) records under a versioned magic
/// header. Values round-trip bit-exactly; grads and momentum are not stored.
void save_checkpoint(const CellNet& net, const std::filesystem::path& file);
void load_checkpoint(CellNet& net, const std::filesystem::path& file);

} // namespace ranknas
