#include "ranknas/nn.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ranknas/errors.hpp"
#include "ranknas/kernels.hpp"

namespace ranknas {

namespace {

ParamTensor make_tensor(std::string key, std::vector<int> shape) {
    ParamTensor p;
    p.key = std::move(key);
    p.shape = std::move(shape);
    size_t n = 1;
    for (int d : p.shape) n *= static_cast<size_t>(d);
    p.values.assign(n, 0.0);
    p.grad.assign(n, 0.0);
    p.vel.assign(n, 0.0);
    return p;
}

void init_uniform(ParamTensor& p, int fan_in, Rng& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : p.values) v = (2.0 * rng.next_real() - 1.0) * scale;
}

void check_arch(const CellNet& net, const Architecture& arch) {
    if (!arch_valid(net.space, arch))
        throw std::invalid_argument("architecture does not match the net's search space");
}

} // namespace

CellNet init_params(const SearchSpace& space, int width, int in_dim, int n_classes, Rng& rng,
                    const Architecture* only) {
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    if (only && !arch_valid(space, *only))
        throw std::invalid_argument("architecture does not match the search space");

    CellNet net;
    net.width = width;
    net.in_dim = in_dim;
    net.n_classes = n_classes;
    net.space = space;

    net.stem_w = make_tensor("stem.w", {in_dim, width});
    net.stem_b = make_tensor("stem.b", {width});
    init_uniform(net.stem_w, in_dim, rng);

    for (int e = 0; e < space.n_edges(); ++e) {
        for (int op = 0; op < space.n_ops(); ++op) {
            if (!op_has_params(space.ops[op])) continue;
            if (only && only->codes[e] != op) continue;
            CellNet::EdgeParam ep;
            const std::string base =
                "edge" + std::to_string(e) + "." + std::string(op_name(space.ops[op]));
            ep.w = make_tensor(base + ".w", {width, width});
            ep.b = make_tensor(base + ".b", {width});
            init_uniform(ep.w, width, rng);
            net.edge_params.emplace(std::make_pair(e, op), std::move(ep));
        }
    }

    net.cls_w = make_tensor("cls.w", {width, n_classes});
    net.cls_b = make_tensor("cls.b", {n_classes});
    init_uniform(net.cls_w, width, rng);
    return net;
}

namespace {

struct Trace {
    std::vector<Matrix> nodes;
};

/// Shared by forward and loss_grad; fills node activations when trace given.
Matrix forward_impl(const CellNet& net, const Architecture& arch, const Matrix& X,
                    Trace* trace) {
    check_arch(net, arch);
    if (X.cols != net.in_dim) throw std::invalid_argument("input width mismatch");

    const int n = X.rows;
    const int w = net.width;
    std::vector<Matrix> nodes(net.space.n_nodes);
    for (auto& m : nodes) m = Matrix(n, w);

    kernels::acc_linear(X.data.data(), n, net.in_dim, net.stem_w.values.data(), w,
                        net.stem_b.values.data(), nodes[0].data.data());

    Matrix scratch(n, w);
    for (int e = 0; e < net.space.n_edges(); ++e) {
        const auto [src, dst] = net.space.edges[e];
        const OpKind op = net.space.ops[arch.codes[e]];
        const Matrix& in = nodes[src];
        Matrix& out = nodes[dst];
        switch (op) {
        case OpKind::Zero:
            break;
        case OpKind::Identity:
            kernels::acc_add(in.data.data(), in.size(), out.data.data());
            break;
        case OpKind::Linear: {
            const auto& ep = net.edge_params.at({e, static_cast<int>(arch.codes[e])});
            kernels::acc_linear(in.data.data(), n, w, ep.w.values.data(), w,
                                ep.b.values.data(), out.data.data());
            break;
        }
        case OpKind::ReluLinear: {
            const auto& ep = net.edge_params.at({e, static_cast<int>(arch.codes[e])});
            kernels::relu(in.data.data(), in.size(), scratch.data.data());
            kernels::acc_linear(scratch.data.data(), n, w, ep.w.values.data(), w,
                                ep.b.values.data(), out.data.data());
            break;
        }
        case OpKind::AvgMix:
            kernels::acc_avgmix(in.data.data(), n, w, out.data.data());
            break;
        }
    }

    Matrix logits(n, net.n_classes);
    kernels::acc_linear(nodes.back().data.data(), n, w, net.cls_w.values.data(),
                        net.n_classes, net.cls_b.values.data(), logits.data.data());
    if (trace) trace->nodes = std::move(nodes);
    return logits;
}

} // namespace

Matrix forward(const CellNet& net, const Architecture& arch, const Matrix& X) {
    return forward_impl(net, arch, X, nullptr);
}

double loss_grad(CellNet& net, const Architecture& arch, const Matrix& X,
                 const std::vector<int>& y, double scale) {
    if (X.rows == 0) throw std::invalid_argument("empty batch");
    if (static_cast<size_t>(X.rows) != y.size())
        throw std::invalid_argument("feature/label count mismatch");

    Trace trace;
    Matrix logits = forward_impl(net, arch, X, &trace);
    const int n = X.rows;
    const int w = net.width;
    const int c = net.n_classes;

    Matrix dlogits(n, c);
    const double loss =
        kernels::softmax_xent(logits.data.data(), n, c, y.data(), dlogits.data.data(), scale);
    if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite loss " << loss << " for arch " << arch.to_string();
        throw NumericOverflowError(msg.str());
    }

    // classifier head
    kernels::acc_matmul_tn(trace.nodes.back().data.data(), n, w, dlogits.data.data(), c, 1.0,
                           net.cls_w.grad.data());
    kernels::acc_colsum(dlogits.data.data(), n, c, 1.0, net.cls_b.grad.data());

    std::vector<Matrix> dnodes(net.space.n_nodes);
    for (auto& m : dnodes) m = Matrix(n, w);
    kernels::matmul_nt(dlogits.data.data(), n, c, net.cls_w.values.data(), w,
                       dnodes.back().data.data());

    Matrix scratch(n, w), scratch2(n, w);
    for (int e = net.space.n_edges() - 1; e >= 0; --e) {
        const auto [src, dst] = net.space.edges[e];
        const OpKind op = net.space.ops[arch.codes[e]];
        const Matrix& in = trace.nodes[src];
        const Matrix& dout = dnodes[dst];
        Matrix& din = dnodes[src];
        switch (op) {
        case OpKind::Zero:
            break;
        case OpKind::Identity:
            kernels::acc_add(dout.data.data(), dout.size(), din.data.data());
            break;
        case OpKind::Linear: {
            auto& ep = net.edge_params.at({e, static_cast<int>(arch.codes[e])});
            kernels::acc_matmul_tn(in.data.data(), n, w, dout.data.data(), w, 1.0,
                                   ep.w.grad.data());
            kernels::acc_colsum(dout.data.data(), n, w, 1.0, ep.b.grad.data());
            kernels::matmul_nt(dout.data.data(), n, w, ep.w.values.data(), w,
                               scratch.data.data());
            kernels::acc_add(scratch.data.data(), scratch.size(), din.data.data());
            break;
        }
        case OpKind::ReluLinear: {
            auto& ep = net.edge_params.at({e, static_cast<int>(arch.codes[e])});
            kernels::relu(in.data.data(), in.size(), scratch.data.data());
            kernels::acc_matmul_tn(scratch.data.data(), n, w, dout.data.data(), w, 1.0,
                                   ep.w.grad.data());
            kernels::acc_colsum(dout.data.data(), n, w, 1.0, ep.b.grad.data());
            kernels::matmul_nt(dout.data.data(), n, w, ep.w.values.data(), w,
                               scratch2.data.data());
            kernels::acc_relu_mask(scratch2.data.data(), in.data.data(), in.size(),
                                   din.data.data());
            break;
        }
        case OpKind::AvgMix:
            kernels::acc_avgmix(dout.data.data(), n, w, din.data.data());
            break;
        }
    }

    kernels::acc_matmul_tn(X.data.data(), n, net.in_dim, dnodes[0].data.data(), w, 1.0,
                           net.stem_w.grad.data());
    kernels::acc_colsum(dnodes[0].data.data(), n, w, 1.0, net.stem_b.grad.data());
    return loss;
}

std::vector<ParamTensor*> touched_params(CellNet& net, const Architecture& arch) {
    check_arch(net, arch);
    std::vector<ParamTensor*> out{&net.stem_w, &net.stem_b};
    for (int e = 0; e < net.space.n_edges(); ++e) {
        auto it = net.edge_params.find({e, static_cast<int>(arch.codes[e])});
        if (it != net.edge_params.end()) {
            out.push_back(&it->second.w);
            out.push_back(&it->second.b);
        }
    }
    out.push_back(&net.cls_w);
    out.push_back(&net.cls_b);
    return out;
}

void sgd_update_tensor(ParamTensor& p, double lr, double momentum, double weight_decay) {
    for (size_t i = 0; i < p.size(); ++i) {
        p.vel[i] = momentum * p.vel[i] + p.grad[i] + weight_decay * p.values[i];
        p.values[i] -= lr * p.vel[i];
        p.grad[i] = 0.0;
    }
}

void sgd_step(CellNet& net, const Architecture& arch, double lr, double momentum,
              double weight_decay) {
    for (ParamTensor* p : touched_params(net, arch))
        sgd_update_tensor(*p, lr, momentum, weight_decay);
}

EvalResult evaluate(const CellNet& net, const Architecture& arch, const Matrix& X,
                    const std::vector<int>& y) {
    if (X.rows == 0) throw std::invalid_argument("empty batch");
    if (static_cast<size_t>(X.rows) != y.size())
        throw std::invalid_argument("feature/label count mismatch");
    Matrix logits = forward(net, arch, X);
    EvalResult r;
    r.loss = kernels::softmax_xent(logits.data.data(), X.rows, net.n_classes, y.data(),
                                   nullptr, 1.0);
    r.accuracy = static_cast<double>(kernels::count_correct(logits.data.data(), X.rows,
                                                            net.n_classes, y.data())) /
                 X.rows;
    return r;
}

namespace {
constexpr const char* kCheckpointMagic = "RANKNAS-CKPT 1";

void write_tensor(std::ofstream& out, const ParamTensor& p) {
    out << p.key << ' ' << p.shape.size();
    for (int d : p.shape) out << ' ' << d;
    out << '\n';
    char buf[64];
    for (size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p.values[i]);
        out << buf << (i + 1 == p.size() ? '\n' : ' ');
    }
}
} // namespace

void save_checkpoint(const CellNet& net, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    out << kCheckpointMagic << '\n';
    out << net.in_dim << ' ' << net.width << ' ' << net.n_classes << ' '
        << 4 + 2 * net.edge_params.size() << '\n';
    write_tensor(out, net.stem_w);
    write_tensor(out, net.stem_b);
    for (const auto& [key, ep] : net.edge_params) {
        write_tensor(out, ep.w);
        write_tensor(out, ep.b);
    }
    write_tensor(out, net.cls_w);
    write_tensor(out, net.cls_b);
    if (!out) throw IoError("write failed: " + file.string());
}

void load_checkpoint(CellNet& net, const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::string magic;
    std::getline(in, magic);
    if (magic != kCheckpointMagic) throw IoError("bad checkpoint magic in " + file.string());
    int in_dim = 0, width = 0, n_classes = 0;
    size_t n_tensors = 0;
    if (!(in >> in_dim >> width >> n_classes >> n_tensors))
        throw IoError("bad checkpoint header");
    if (in_dim != net.in_dim || width != net.width || n_classes != net.n_classes)
        throw IoError("checkpoint does not match net dimensions");

    std::map<std::string, ParamTensor*> by_key;
    by_key[net.stem_w.key] = &net.stem_w;
    by_key[net.stem_b.key] = &net.stem_b;
    by_key[net.cls_w.key] = &net.cls_w;
    by_key[net.cls_b.key] = &net.cls_b;
    for (auto& [k, ep] : net.edge_params) {
        by_key[ep.w.key] = &ep.w;
        by_key[ep.b.key] = &ep.b;
    }

    for (size_t t = 0; t < n_tensors; ++t) {
        std::string key;
        size_t ndim = 0;
        if (!(in >> key >> ndim)) throw IoError("truncated checkpoint");
        std::vector<int> shape(ndim);
        for (auto& d : shape)
            if (!(in >> d)) throw IoError("truncated checkpoint");
        auto it = by_key.find(key);
        if (it == by_key.end()) throw IoError("unknown tensor key: " + key);
        ParamTensor& p = *it->second;
        if (shape != p.shape) throw IoError("shape mismatch for tensor " + key);
        for (double& v : p.values)
            if (!(in >> v)) throw IoError("truncated checkpoint");
    }
}

} // namespace ranknas
