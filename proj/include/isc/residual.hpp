#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "isc/hamiltonian.hpp"

namespace isc {

/// The output-only energy E_J(a,y) = a.y + sum_{i<j} J_ij y_i y_j with the
/// affine input influence replaced by a free vector a, together with the
/// geometry it induces on a-space: the ground-state map, the minimizing
/// cells and the degenerate boundary between them.
class ResidualPartition {
public:
    explicit ResidualPartition(int m) : m_(m), j_(static_cast<std::size_t>(m * (m - 1) / 2), 0.0) {
        if (m < 1 || m > 24) throw std::invalid_argument("output dimension out of range");
    }

    static ResidualPartition from_hamiltonian(const Hamiltonian& H) {
        ResidualPartition p(H.outputs());
        p.j_ = H.output_couplings();
        return p;
    }

    int outputs() const { return m_; }

    double coupling(int i, int j) const { return j_.at(static_cast<std::size_t>(out_pair_index(m_, i, j))); }
    double& coupling(int i, int j) { return j_.at(static_cast<std::size_t>(out_pair_index(m_, i, j))); }

    /// sym(J)_ij lookup, zero on the diagonal.
    double sym_coupling(int i, int j) const {
        if (i == j) return 0.0;
        return 0.5 * (i < j ? coupling(i, j) : coupling(j, i));
    }

    double energy(std::span<const double> a, const SpinState& y) const {
        if (static_cast<int>(a.size()) != m_ || y.dim() != m_) throw std::invalid_argument("dimension mismatch");
        double acc = 0.0;
        for (int i = 0; i < m_; ++i) acc += a[static_cast<std::size_t>(i)] * static_cast<double>(y[i]);
        std::size_t t = 0;
        for (int i = 0; i < m_; ++i)
            for (int j = i + 1; j < m_; ++j) acc += j_[t++] * static_cast<double>(y[i] * y[j]);
        return acc;
    }

    /// <J, z tensor^2 - y tensor^2>_F over the stored (i<j) coordinates.
    double frobenius_difference(const SpinState& z, const SpinState& y) const {
        double acc = 0.0;
        std::size_t t = 0;
        for (int i = 0; i < m_; ++i)
            for (int j = i + 1; j < m_; ++j) acc += j_[t++] * static_cast<double>(z[i] * z[j] - y[i] * y[j]);
        return acc;
    }

private:
    int m_;
    std::vector<double> j_;
};

/// Open half-space { a : normal.a + offset > 0 }.
struct HalfSpace {
    std::vector<double> normal;
    double offset = 0.0;

    bool contains(std::span<const double> a) const {
        double acc = offset;
        for (std::size_t i = 0; i < normal.size(); ++i) acc += normal[i] * a[i];
        return acc > 0.0;
    }
};

/// Every output state within tol of the minimum of E_J(a, .). More than one
/// element means a lies in the boundary set.
inline std::vector<SpinState> ground_state_map(const ResidualPartition& p, std::span<const double> a,
                                               double tol = 0.0) {
    const int m = p.outputs();
    double best = 0.0;
    std::vector<double> energies(std::size_t{1} << m);
    for (std::uint64_t yi = 0; yi < energies.size(); ++yi) {
        energies[yi] = p.energy(a, SpinState::from_index(m, yi));
        if (yi == 0 || energies[yi] < best) best = energies[yi];
    }
    std::vector<SpinState> out;
    for (std::uint64_t yi = 0; yi < energies.size(); ++yi)
        if (energies[yi] <= best + tol) out.push_back(SpinState::from_index(m, yi));
    return out;
}

/// H-representation of the minimizing cell of y: one open half-space per
/// competitor z, with normal z - y and offset <J, z tensor^2 - y tensor^2>.
inline std::vector<HalfSpace> cell_halfspaces(const ResidualPartition& p, const SpinState& y) {
    const int m = p.outputs();
    if (y.dim() != m) throw std::invalid_argument("dimension mismatch");
    std::vector<HalfSpace> out;
    out.reserve((std::size_t{1} << m) - 1);
    for (std::uint64_t zi = 0; zi < (std::uint64_t{1} << m); ++zi) {
        if (zi == y.index()) continue;
        const SpinState z = SpinState::from_index(m, zi);
        HalfSpace hs;
        hs.normal.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) hs.normal[static_cast<std::size_t>(i)] = static_cast<double>(z[i] - y[i]);
        hs.offset = p.frobenius_difference(z, y);
        out.push_back(std::move(hs));
    }
    return out;
}

/// Strict membership of a in the minimizing cell of y.
inline bool in_cell(const ResidualPartition& p, const SpinState& y, std::span<const double> a) {
    for (const HalfSpace& hs : cell_halfspaces(p, y))
        if (!hs.contains(a)) return false;
    return true;
}

/// An affine map R^n -> R^m, value linear*x + offset.
struct AffineMap {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> linear; // out_dim x in_dim, row-major
    std::vector<double> offset; // out_dim

    std::vector<double> apply(const SpinState& x) const {
        if (x.dim() != in_dim) throw std::invalid_argument("dimension mismatch");
        std::vector<double> out(static_cast<std::size_t>(out_dim));
        for (int i = 0; i < out_dim; ++i) {
            double acc = offset[static_cast<std::size_t>(i)];
            for (int k = 0; k < in_dim; ++k)
                acc += linear[static_cast<std::size_t>(i) * in_dim + k] * static_cast<double>(x[k]);
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    }
};

/// Hamiltonian whose affine part is A and whose output couplings are J.
inline Hamiltonian hamiltonian_from_affine(const AffineMap& a, const ResidualPartition& p) {
    if (a.out_dim != p.outputs()) throw std::invalid_argument("affine map and coupling dimensions differ");
    Hamiltonian H(a.in_dim, a.out_dim);
    for (int i = 0; i < a.out_dim; ++i) {
        H.bias(i) = a.offset[static_cast<std::size_t>(i)];
        for (int k = 0; k < a.in_dim; ++k)
            H.input_coupling(k, i) = a.linear[static_cast<std::size_t>(i) * a.in_dim + k];
    }
    for (int i = 0; i < a.out_dim; ++i)
        for (int j = i + 1; j < a.out_dim; ++j) H.output_coupling(i, j) = p.coupling(i, j);
    return H;
}

/// True when every input's affine image lies strictly inside the minimizing
/// cell of its circuit value; equivalent to the assembled Hamiltonian
/// computing the circuit.
inline bool check_affine_solution(const Circuit& c, const AffineMap& a, const ResidualPartition& p) {
    if (a.in_dim != c.inputs() || a.out_dim != c.outputs() || p.outputs() != c.outputs())
        throw std::invalid_argument("dimension mismatch");
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const std::vector<double> image = a.apply(SpinState::from_index(c.inputs(), xi));
        if (!in_cell(p, c.value(xi), image)) return false;
    }
    return true;
}

/// True when the ground state at a is unique and its first fixed_bits.dim()
/// coordinates equal fixed_bits; the remaining outputs act as auxiliaries,
/// so this is membership in the union of their cells.
inline bool cell_union_membership(const ResidualPartition& p, std::span<const double> a,
                                  const SpinState& fixed_bits, double tol = 0.0) {
    if (fixed_bits.dim() > p.outputs()) throw std::invalid_argument("fixed prefix longer than output");
    const std::vector<SpinState> gs = ground_state_map(p, a, tol);
    if (gs.size() != 1) return false;
    return gs.front().prefix(fixed_bits.dim()) == fixed_bits;
}

// --- two-output raster -------------------------------------------------------

/// Labels over a centered square window of a-space: the minimizing state
/// index per pixel, or -1 where the top two energies are within the
/// scale-aware tolerance of each other.
struct RasterGrid {
    int resolution = 0;
    double radius = 0.0;
    double j12 = 0.0;
    std::vector<int> labels; // row-major; row 0 is the a2 = +radius edge

    int label(int row, int col) const { return labels[static_cast<std::size_t>(row) * resolution + col]; }
};

inline RasterGrid rasterize(const ResidualPartition& p, double radius, int resolution, double tol = 1e-9) {
    if (p.outputs() != 2) throw std::invalid_argument("raster is only defined for two outputs");
    if (resolution < 1 || radius <= 0.0) throw std::invalid_argument("bad raster window");
    RasterGrid grid;
    grid.resolution = resolution;
    grid.radius = radius;
    grid.j12 = p.coupling(0, 1);
    grid.labels.resize(static_cast<std::size_t>(resolution) * resolution);
    const double step = 2.0 * radius / resolution;
    for (int row = 0; row < resolution; ++row) {
        const double a2 = radius - (row + 0.5) * step;
        for (int col = 0; col < resolution; ++col) {
            const double a1 = -radius + (col + 0.5) * step;
            const std::array<double, 2> a{a1, a2};
            double e[4];
            for (std::uint64_t yi = 0; yi < 4; ++yi) e[yi] = p.energy(a, SpinState::from_index(2, yi));
            int best = 0;
            for (int yi = 1; yi < 4; ++yi)
                if (e[yi] < e[best]) best = yi;
            double runner_up = std::numeric_limits<double>::infinity();
            for (int yi = 0; yi < 4; ++yi)
                if (yi != best && e[yi] < runner_up) runner_up = e[yi];
            const bool boundary = runner_up - e[best] < tol * (1.0 + std::abs(e[best]));
            grid.labels[static_cast<std::size_t>(row) * resolution + col] = boundary ? -1 : best;
        }
    }
    return grid;
}

} // namespace isc
