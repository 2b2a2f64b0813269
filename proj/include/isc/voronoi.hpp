#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isc/hamiltonian.hpp"
#include "isc/rng.hpp"

namespace isc {

/// Affine embedding of the output hypercube into input space:
/// B(y) = T y + b with T of shape n x m. The images B({-1,+1}^m) act as
/// nearest-site classifiers for the inputs.
struct AffineEmbedding {
    int n = 0;
    int m = 0;
    std::vector<double> t; // n x m, row-major: t[k*m+i]
    std::vector<double> b; // n

    double t_at(int k, int i) const { return t[static_cast<std::size_t>(k) * m + i]; }
    double& t_at(int k, int i) { return t[static_cast<std::size_t>(k) * m + i]; }

    std::vector<double> image(const SpinState& y) const {
        if (y.dim() != m) throw std::invalid_argument("dimension mismatch");
        std::vector<double> out(b);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(k)] += t_at(k, i) * static_cast<double>(y[i]);
        return out;
    }

    /// Pseudo-adjoint applied to a point: T^T (x - b).
    std::vector<double> pseudo_adjoint(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != n) throw std::invalid_argument("dimension mismatch");
        std::vector<double> out(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < n; ++k)
                out[static_cast<std::size_t>(i)] += t_at(k, i) * (x[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]);
        return out;
    }

    std::vector<std::vector<double>> all_sites() const {
        std::vector<std::vector<double>> sites;
        sites.reserve(std::size_t{1} << m);
        for (std::uint64_t yi = 0; yi < (std::uint64_t{1} << m); ++yi)
            sites.push_back(image(SpinState::from_index(m, yi)));
        return sites;
    }

    /// Exact pairwise distinctness of the 2^m image points.
    bool injective_on_outputs() const {
        const std::vector<std::vector<double>> sites = all_sites();
        for (std::size_t a = 0; a < sites.size(); ++a)
            for (std::size_t c = a + 1; c < sites.size(); ++c)
                if (sites[a] == sites[c]) return false;
        return true;
    }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

/// Half-space form of Voronoi cell membership: x lies in the open cell of
/// site p iff <p - q, x> + (|q|^2 - |p|^2)/2 > 0 for every other site q.
inline bool voronoi_cell_membership(const std::vector<std::vector<double>>& sites, std::size_t p,
                                    std::span<const double> x) {
    if (p >= sites.size()) throw std::invalid_argument("site index out of range");
    for (std::size_t q = 0; q < sites.size(); ++q) {
        if (q == p) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += (sites[p][i] - sites[q][i]) * x[i];
        double norms = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            norms += sites[q][i] * sites[q][i] - sites[p][i] * sites[p][i];
        if (!(acc + 0.5 * norms > 0.0)) return false;
    }
    return true;
}

/// True when every input is strictly closer to the image of its circuit
/// value than to every other image point. Coincident sites can never win a
/// strict comparison, so non-injective embeddings are handled correctly.
inline bool is_voronoi_solution(const Circuit& c, const AffineEmbedding& e) {
    if (e.n != c.inputs() || e.m != c.outputs()) throw std::invalid_argument("shape mismatch");
    const std::vector<std::vector<double>> sites = e.all_sites();
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const SpinState xs = SpinState::from_index(c.inputs(), xi);
        std::vector<double> x(static_cast<std::size_t>(c.inputs()));
        for (int k = 0; k < c.inputs(); ++k) x[static_cast<std::size_t>(k)] = static_cast<double>(xs[k]);
        const std::uint64_t fi = c.value(xi).index();
        const double d_f = squared_distance(x, sites[fi]);
        for (std::uint64_t yi = 0; yi < sites.size(); ++yi) {
            if (yi == fi) continue;
            if (!(d_f < squared_distance(x, sites[yi]))) return false;
        }
    }
    return true;
}

/// Smallest strict-margin slack of a Voronoi solution: the minimum over
/// inputs and competitors of |x - By|^2 - |x - Bf(x)|^2.
inline double voronoi_margin(const Circuit& c, const AffineEmbedding& e) {
    const std::vector<std::vector<double>> sites = e.all_sites();
    double margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const SpinState xs = SpinState::from_index(c.inputs(), xi);
        std::vector<double> x(static_cast<std::size_t>(c.inputs()));
        for (int k = 0; k < c.inputs(); ++k) x[static_cast<std::size_t>(k)] = static_cast<double>(xs[k]);
        const std::uint64_t fi = c.value(xi).index();
        const double d_f = squared_distance(x, sites[fi]);
        for (std::uint64_t yi = 0; yi < sites.size(); ++yi) {
            if (yi == fi) continue;
            margin = std::min(margin, squared_distance(x, sites[yi]) - d_f);
        }
    }
    return margin;
}

/// Separates coincident image points with seeded perturbations of the
/// colliding columns, each small enough to keep every input strictly inside
/// its cell, and repeats until the embedding is injective on outputs.
inline AffineEmbedding perturb_to_injective(const Circuit& c, const AffineEmbedding& e, std::uint64_t seed) {
    if (!is_voronoi_solution(c, e)) throw std::invalid_argument("embedding is not a voronoi solution");
    AffineEmbedding cur = e;
    std::mt19937_64 gen(splitmix64(seed));
    for (int round = 0; round < 1024; ++round) {
        if (cur.injective_on_outputs()) return cur;

        // Smallest nonzero site separation bounds how far images may move
        // without merging previously distinct pairs.
        const std::vector<std::vector<double>> sites = cur.all_sites();
        double min_sep2 = std::numeric_limits<double>::infinity();
        std::uint64_t col_a = 0, col_b = 0;
        bool found = false;
        for (std::size_t a = 0; a < sites.size() && !found; ++a)
            for (std::size_t b2 = a + 1; b2 < sites.size(); ++b2) {
                if (sites[a] == sites[b2]) {
                    col_a = a;
                    col_b = b2;
                    found = true;
                    break;
                }
            }
        for (std::size_t a = 0; a < sites.size(); ++a)
            for (std::size_t b2 = a + 1; b2 < sites.size(); ++b2) {
                const double d2 = squared_distance(sites[a], sites[b2]);
                if (d2 > 0.0) min_sep2 = std::min(min_sep2, d2);
            }

        const int diff_coord = std::countr_zero(col_a ^ col_b);
        const double margin = voronoi_margin(c, cur);
        double scale = 0.25 * std::sqrt(std::min(min_sep2, margin));
        if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1e-9;

        for (double eta = scale; eta > 0.0; eta *= 0.5) {
            AffineEmbedding trial = cur;
            for (int k = 0; k < trial.n; ++k)
                trial.t_at(k, diff_coord) += eta * (uniform_unit(gen) - 0.5) / trial.n;
            if (trial.image(SpinState::from_index(trial.m, col_a)) !=
                    trial.image(SpinState::from_index(trial.m, col_b)) &&
                is_voronoi_solution(c, trial)) {
                cur = std::move(trial);
                break;
            }
        }
    }
    throw CertificationError("failed to reach an injective voronoi solution by perturbation");
}

/// The Hamiltonian induced by an injective Voronoi solution B = [T, b]:
/// affine part -T^T(x - b) and output couplings the upper triangle of
/// T^T T. Pulling the nearest-site rule through -B* lands every input in
/// the minimizing cell of its circuit value.
inline Hamiltonian hamiltonian_from_voronoi(const Circuit& c, const AffineEmbedding& e) {
    if (e.n != c.inputs() || e.m != c.outputs()) throw std::invalid_argument("shape mismatch");
    if (!e.injective_on_outputs()) throw std::invalid_argument("embedding is not injective on outputs");
    if (!is_voronoi_solution(c, e)) throw std::invalid_argument("embedding is not a voronoi solution");
    Hamiltonian H(e.n, e.m);
    for (int i = 0; i < e.m; ++i) {
        double hb = 0.0;
        for (int k = 0; k < e.n; ++k) hb += e.t_at(k, i) * e.b[static_cast<std::size_t>(k)];
        H.bias(i) = hb;
        for (int k = 0; k < e.n; ++k) H.input_coupling(k, i) = -e.t_at(k, i);
    }
    for (int i = 0; i < e.m; ++i)
        for (int j = i + 1; j < e.m; ++j) {
            double acc = 0.0;
            for (int k = 0; k < e.n; ++k) acc += e.t_at(k, i) * e.t_at(k, j);
            H.output_coupling(i, j) = acc;
        }
    return H;
}

/// Draws seeded gaussian embeddings until one is a Voronoi solution for the
/// circuit. Trials use per-index seeds, so results do not depend on how
/// callers batch them.
inline std::optional<AffineEmbedding> search_voronoi_solution(const Circuit& c, std::uint64_t seed,
                                                              std::uint64_t trials) {
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 gen(splitmix64(seed ^ splitmix64(trial)));
        AffineEmbedding e;
        e.n = c.inputs();
        e.m = c.outputs();
        e.t.resize(static_cast<std::size_t>(e.n) * e.m);
        e.b.resize(static_cast<std::size_t>(e.n));
        for (double& v : e.t) v = normal_unit(gen);
        for (double& v : e.b) v = normal_unit(gen);
        if (is_voronoi_solution(c, e)) return e;
    }
    return std::nullopt;
}

/// Seeded gaussian embedding together with the circuit it classifies:
/// each input's value is the output whose image is strictly nearest.
/// Degenerate draws are rejected, so the pair is a Voronoi solution by
/// construction.
inline std::pair<Circuit, AffineEmbedding> random_voronoi_instance(int n, int m, std::uint64_t seed,
                                                                   double min_margin = 1e-6) {
    std::mt19937_64 gen(splitmix64(seed));
    for (int attempt = 0; attempt < 4096; ++attempt) {
        AffineEmbedding e;
        e.n = n;
        e.m = m;
        e.t.resize(static_cast<std::size_t>(n) * m);
        e.b.resize(static_cast<std::size_t>(n));
        for (double& v : e.t) v = normal_unit(gen);
        for (double& v : e.b) v = normal_unit(gen);
        if (!e.injective_on_outputs()) continue;

        const std::vector<std::vector<double>> sites = e.all_sites();
        std::vector<SpinState> table;
        table.reserve(std::size_t{1} << n);
        bool clean = true;
        for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << n) && clean; ++xi) {
            const SpinState xs = SpinState::from_index(n, xi);
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = static_cast<double>(xs[k]);
            std::uint64_t best = 0;
            double best_d = squared_distance(x, sites[0]);
            double runner_up = std::numeric_limits<double>::infinity();
            for (std::uint64_t yi = 1; yi < sites.size(); ++yi) {
                const double d = squared_distance(x, sites[yi]);
                if (d < best_d) {
                    runner_up = best_d;
                    best_d = d;
                    best = yi;
                } else {
                    runner_up = std::min(runner_up, d);
                }
            }
            if (!(runner_up - best_d > min_margin)) clean = false;
            table.push_back(SpinState::from_index(m, best));
        }
        if (!clean) continue;
        return {Circuit(n, m, std::move(table)), std::move(e)};
    }
    throw CertificationError("failed to draw a clean voronoi instance");
}

} // namespace isc
