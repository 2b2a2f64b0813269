#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "isc/hamiltonian.hpp"

namespace isc {

/// Directed strict-inequality constraints over the output states of one
/// input level: an edge (z,y) demands H(x,z) > H(x,y).
struct EnergyGraph {
    SpinState input;
    int output_dim = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges; // sorted, unique

    void sort_edges() {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
};

/// Spanning-tree (arborescence) check: 2^m - 1 edges, every non-root node
/// with exactly one out-edge along a single-bit flip, root with none, and
/// every walk ending at the root.
inline bool is_spanning_tree(const EnergyGraph& g, std::uint64_t root) {
    const int m = g.output_dim;
    const std::uint64_t count = std::uint64_t{1} << m;
    if (root >= count) return false;
    if (g.edges.size() != count - 1) return false;
    std::vector<std::uint64_t> out(count, count); // "count" marks no edge
    for (const auto& [from, to] : g.edges) {
        if (from >= count || to >= count) return false;
        if (from == to) return false;
        if (std::popcount(from ^ to) != 1) return false;
        if (out[from] != count) return false; // duplicate out-edge
        out[from] = to;
    }
    if (out[root] != count) return false;
    for (std::uint64_t y = 0; y < count; ++y) {
        if (y == root) continue;
        if (out[y] == count) return false;
        std::uint64_t cur = y;
        std::uint64_t steps = 0;
        while (cur != root) {
            cur = out[cur];
            if (++steps > count) return false; // cycle
        }
    }
    return true;
}

enum class RowKind { global, local_free, tree_edge };

struct ConstraintRowTag {
    std::uint64_t input = 0;
    std::uint64_t state_a = 0; // competitor (global/local_free) or edge tail (tree)
    std::uint64_t state_b = 0; // f(x) (global/local_free) or edge head (tree)
    RowKind kind = RowKind::global;
};

/// Margin-1 linear system over the packed coefficient vector. Every row r
/// demands <u, r> >= rhs (rhs is all ones unless rescaled).
struct ConstraintSystem {
    int n = 0;
    int m = 0;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<ConstraintRowTag> tags;

    void scale_margin(double margin) {
        for (double& r : rhs) r *= margin;
    }
};

namespace detail {

inline std::vector<double> feature_difference(const SpinState& x, const SpinState& y, const SpinState& z) {
    std::vector<double> row = feature_vector(x, y);
    const std::vector<double> base = feature_vector(x, z);
    for (std::size_t t = 0; t < row.size(); ++t) row[t] -= base[t];
    return row;
}

} // namespace detail

/// One row per (input, wrong output) pair: H(x,y) - H(x,f(x)) >= 1. The
/// feasible points are exactly the coefficient vectors whose Hamiltonian
/// computes the circuit, up to rescaling.
inline ConstraintSystem global_min_rows(const Circuit& c) {
    const int n = c.inputs();
    const int m = c.outputs();
    ConstraintSystem sys;
    sys.n = n;
    sys.m = m;
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const SpinState x = SpinState::from_index(n, xi);
        const SpinState& fx = c.value(xi);
        for (std::uint64_t yi = 0; yi < (std::uint64_t{1} << m); ++yi) {
            if (yi == fx.index()) continue;
            sys.rows.push_back(detail::feature_difference(x, SpinState::from_index(m, yi), fx));
            sys.rhs.push_back(1.0);
            sys.tags.push_back({xi, yi, fx.index(), RowKind::global});
        }
    }
    return sys;
}

/// Tightened rows whose satisfaction removes every spurious local minimum:
/// the global row plus the coupling correction <J, (f(x)-y) tensor^2>
/// carried over to the left-hand side. Only the stored (i<j) coupling
/// coordinates pick up the correction; the diagonal of the outer product
/// multiplies coefficients that do not exist.
inline ConstraintSystem local_min_free_rows(const Circuit& c) {
    const int n = c.inputs();
    const int m = c.outputs();
    ConstraintSystem sys = global_min_rows(c);
    const int j_offset = m + n * m;
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
        const SpinState fx = SpinState::from_index(m, sys.tags[r].state_b);
        const SpinState y = SpinState::from_index(m, sys.tags[r].state_a);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                sys.rows[r][static_cast<std::size_t>(j_offset + out_pair_index(m, i, j))] +=
                    static_cast<double>((fx[i] - y[i]) * (fx[j] - y[j]));
        sys.tags[r].kind = RowKind::local_free;
    }
    return sys;
}

/// One row per tree edge (y,z): H(x,y) - H(x,z) >= 1. Trees are indexed by
/// input level and must be spanning trees rooted at f(x).
inline ConstraintSystem tree_rows(const Circuit& c, const std::vector<EnergyGraph>& trees) {
    const int n = c.inputs();
    const int m = c.outputs();
    if (trees.size() != c.rows()) throw std::invalid_argument("one spanning tree per input level required");
    ConstraintSystem sys;
    sys.n = n;
    sys.m = m;
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const EnergyGraph& tree = trees[xi];
        if (tree.input.index() != xi || tree.input.dim() != n || tree.output_dim != m)
            throw std::invalid_argument("tree is labeled with the wrong input level");
        if (!is_spanning_tree(tree, c.value(xi).index()))
            throw std::invalid_argument("constraint graph for input " + tree.input.to_string() +
                                        " is not a spanning tree rooted at the circuit value");
        const SpinState x = SpinState::from_index(n, xi);
        for (const auto& [from, to] : tree.edges) {
            sys.rows.push_back(detail::feature_difference(x, SpinState::from_index(m, from),
                                                          SpinState::from_index(m, to)));
            sys.rhs.push_back(1.0);
            sys.tags.push_back({xi, from, to, RowKind::tree_edge});
        }
    }
    return sys;
}

/// Inverse of pack(): reads a solved coefficient vector back into a
/// Hamiltonian.
inline Hamiltonian decode(std::span<const double> u, int n, int m) { return unpack(n, m, u); }

} // namespace isc
