#include "ranknas/space.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "ranknas/errors.hpp"

namespace ranknas {

std::string_view op_name(OpKind op) {
    switch (op) {
    case OpKind::Zero: return "zero";
    case OpKind::Identity: return "identity";
    case OpKind::Linear: return "linear";
    case OpKind::ReluLinear: return "relu_linear";
    case OpKind::AvgMix: return "avg_mix";
    }
    return "?";
}

uint64_t SearchSpace::num_architectures() const {
    uint64_t n = 1;
    for (int e = 0; e < n_edges(); ++e) {
        const uint64_t b = static_cast<uint64_t>(n_ops());
        if (n > std::numeric_limits<uint64_t>::max() / b)
            return std::numeric_limits<uint64_t>::max();
        n *= b;
    }
    return n;
}

std::string Architecture::to_string() const {
    std::string s;
    for (size_t i = 0; i < codes.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(static_cast<int>(codes[i]));
    }
    return s;
}

Architecture Architecture::parse(std::string_view text) {
    Architecture a;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t dash = text.find('-', pos);
        std::string_view tok = text.substr(pos, dash == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : dash - pos);
        if (tok.empty()) throw std::invalid_argument("bad architecture string");
        int v = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad architecture string");
            v = v * 10 + (c - '0');
            if (v > 255) throw std::invalid_argument("architecture code out of range");
        }
        a.codes.push_back(static_cast<uint8_t>(v));
        if (dash == std::string_view::npos) break;
        pos = dash + 1;
    }
    return a;
}

SearchSpace make_space(std::string name, int n_nodes, std::vector<OpKind> ops) {
    if (n_nodes < 2) throw std::invalid_argument("search space needs at least 2 nodes");
    if (ops.size() < 2) throw std::invalid_argument("search space needs at least 2 ops");
    SearchSpace s;
    s.n_nodes = n_nodes;
    s.ops = std::move(ops);
    s.name = std::move(name);
    for (int i = 0; i < n_nodes - 1; ++i)
        for (int j = i + 1; j < n_nodes; ++j) s.edges.emplace_back(i, j);
    return s;
}

SearchSpace builtin_space(std::string_view name) {
    if (name == "micro") {
        return make_space("micro", 3,
                          {OpKind::Zero, OpKind::Identity, OpKind::Linear,
                           OpKind::ReluLinear});
    }
    if (name == "small") {
        return make_space("small", 4,
                          {OpKind::Zero, OpKind::Identity, OpKind::Linear,
                           OpKind::ReluLinear, OpKind::AvgMix});
    }
    throw std::invalid_argument("unknown search space: " + std::string(name));
}

bool arch_valid(const SearchSpace& space, const Architecture& a) {
    if (static_cast<int>(a.codes.size()) != space.n_edges()) return false;
    for (uint8_t c : a.codes)
        if (c >= space.n_ops()) return false;
    return true;
}

Architecture random_architecture(const SearchSpace& space, Rng& rng) {
    Architecture a;
    a.codes.resize(space.n_edges());
    for (auto& c : a.codes)
        c = static_cast<uint8_t>(rng.next_below(static_cast<uint64_t>(space.n_ops())));
    return a;
}

Architecture mutate(const SearchSpace& space, const Architecture& a, Rng& rng) {
    if (!arch_valid(space, a)) throw std::invalid_argument("architecture/space mismatch");
    Architecture out = a;
    const int pos = static_cast<int>(rng.next_below(static_cast<uint64_t>(space.n_edges())));
    // Uniform over the |ops|-1 codes that differ from the current one.
    const int shift = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(space.n_ops() - 1)));
    out.codes[pos] = static_cast<uint8_t>((out.codes[pos] + shift) % space.n_ops());
    return out;
}

int hamming_distance(const Architecture& a, const Architecture& b) {
    if (a.codes.size() != b.codes.size())
        throw std::invalid_argument("architectures have different lengths");
    int d = 0;
    for (size_t i = 0; i < a.codes.size(); ++i)
        if (a.codes[i] != b.codes[i]) ++d;
    return d;
}

std::vector<Architecture> enumerate_space(const SearchSpace& space, uint64_t cap) {
    const uint64_t n = space.num_architectures();
    if (n > cap) {
        std::ostringstream msg;
        msg << "space " << space.name << " has " << n << " architectures, cap is " << cap;
        throw CapacityError(msg.str());
    }
    std::vector<Architecture> out;
    out.reserve(n);
    Architecture a;
    a.codes.assign(space.n_edges(), 0);
    out.push_back(a);
    for (uint64_t i = 1; i < n; ++i) {
        // Increment little-endian on the last position for lexicographic order.
        for (int e = space.n_edges() - 1; e >= 0; --e) {
            if (++a.codes[e] < space.n_ops()) break;
            a.codes[e] = 0;
        }
        out.push_back(a);
    }
    return out;
}

} // namespace ranknas
