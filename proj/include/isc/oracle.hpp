#pragma once

#include <cstdint>
#include <vector>

#include "isc/constraints.hpp"
#include "isc/residual.hpp"

namespace isc {

inline constexpr int max_scan_outputs = 24;

/// Conditional energies of every output state at the pinned input x,
/// indexed canonically.
inline std::vector<double> level_energies(const Hamiltonian& H, const SpinState& x) {
    const int m = H.outputs();
    if (m > max_scan_outputs) throw BudgetError("exhaustive output scan limited to m <= 24");
    // Expanding through the affine image keeps this O(m 2^m) instead of
    // O(m^2 2^m); the term order matches evaluate().
    const std::vector<double> a = affine_image(H, x);
    std::vector<double> e(std::size_t{1} << m);
    const ResidualPartition p = ResidualPartition::from_hamiltonian(H);
    for (std::uint64_t yi = 0; yi < e.size(); ++yi) e[yi] = p.energy(a, SpinState::from_index(m, yi));
    return e;
}

/// All output states within tol of the conditional minimum.
inline std::vector<SpinState> ground_states(const Hamiltonian& H, const SpinState& x, double tol = 1e-9) {
    const std::vector<double> e = level_energies(H, x);
    double best = e[0];
    for (double v : e)
        if (v < best) best = v;
    std::vector<SpinState> out;
    for (std::uint64_t yi = 0; yi < e.size(); ++yi)
        if (e[yi] <= best + tol) out.push_back(SpinState::from_index(H.outputs(), yi));
    return out;
}

/// True when, for every input, the circuit value is the unique conditional
/// ground state with margin strictly above tol.
inline bool encodes(const Hamiltonian& H, const Circuit& c, double tol = 1e-9) {
    if (H.inputs() != c.inputs() || H.outputs() != c.outputs())
        throw std::invalid_argument("circuit shape does not match hamiltonian");
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const std::vector<double> e = level_energies(H, SpinState::from_index(c.inputs(), xi));
        const std::uint64_t fi = c.value(xi).index();
        for (std::uint64_t yi = 0; yi < e.size(); ++yi) {
            if (yi == fi) continue;
            if (!(e[yi] - e[fi] > tol)) return false;
        }
    }
    return true;
}

/// Neighbor-scan local minima: y qualifies when no single-bit flip lowers
/// the energy. Plateaus count.
inline std::vector<SpinState> local_minima(const Hamiltonian& H, const SpinState& x) {
    const int m = H.outputs();
    const std::vector<double> e = level_energies(H, x);
    std::vector<SpinState> out;
    for (std::uint64_t yi = 0; yi < e.size(); ++yi) {
        bool is_min = true;
        for (int i = 0; i < m && is_min; ++i)
            if (e[yi ^ (std::uint64_t{1} << i)] < e[yi]) is_min = false;
        if (is_min) out.push_back(SpinState::from_index(m, yi));
    }
    return out;
}

/// Closed-form local-minimum criterion for the residual energy: y is a
/// local minimum of E_J(a,.) iff a_i y_i + 2 sum_j sym(J)_ij y_i y_j <= 0
/// for every coordinate i.
inline bool local_minimum_via_criterion(const ResidualPartition& p, std::span<const double> a,
                                        const SpinState& y) {
    const int m = p.outputs();
    if (static_cast<int>(a.size()) != m || y.dim() != m) throw std::invalid_argument("dimension mismatch");
    for (int i = 0; i < m; ++i) {
        double acc = a[static_cast<std::size_t>(i)] * static_cast<double>(y[i]);
        for (int j = 0; j < m; ++j)
            acc += 2.0 * p.sym_coupling(i, j) * static_cast<double>(y[i] * y[j]);
        if (acc > 0.0) return false;
    }
    return true;
}

/// The complete energy tournament at one input level: an edge (z,y) for
/// every strictly ordered pair H(x,z) > H(x,y).
inline EnergyGraph energy_graph(const Hamiltonian& H, const SpinState& x) {
    const std::vector<double> e = level_energies(H, x);
    EnergyGraph g;
    g.input = x;
    g.output_dim = H.outputs();
    for (std::uint64_t zi = 0; zi < e.size(); ++zi)
        for (std::uint64_t yi = 0; yi < e.size(); ++yi)
            if (e[zi] > e[yi]) g.edges.emplace_back(zi, yi);
    g.sort_edges();
    return g;
}

/// Steepest-descent spanning tree of one input level: every state other
/// than f(x) points at its lowest-energy single-flip neighbor, ties going
/// to the lowest state index. Requires f(x) to be the only local minimum.
inline EnergyGraph extract_tree(const Hamiltonian& H, const Circuit& c, const SpinState& x) {
    if (H.inputs() != c.inputs() || H.outputs() != c.outputs())
        throw std::invalid_argument("circuit shape does not match hamiltonian");
    const int m = H.outputs();
    const std::vector<double> e = level_energies(H, x);
    const std::uint64_t root = c.value(x).index();

    const std::vector<SpinState> minima = local_minima(H, x);
    for (const SpinState& y : minima) {
        if (y.index() != root)
            throw CertificationError("spurious local minimum at output " + y.to_string() + " for input " +
                                     x.to_string());
    }
    if (minima.size() != 1 || minima.front().index() != root)
        throw CertificationError("circuit value is not the unique local minimum for input " + x.to_string());

    EnergyGraph tree;
    tree.input = x;
    tree.output_dim = m;
    for (std::uint64_t yi = 0; yi < e.size(); ++yi) {
        if (yi == root) continue;
        std::uint64_t best = e.size();
        for (int i = 0; i < m; ++i) {
            const std::uint64_t zi = yi ^ (std::uint64_t{1} << i);
            if (best == e.size() || e[zi] < e[best] || (e[zi] == e[best] && zi < best)) best = zi;
        }
        tree.edges.emplace_back(yi, best);
    }
    tree.sort_edges();
    return tree;
}

} // namespace isc
