#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "isc/circuit.hpp"
#include "isc/spin.hpp"

namespace isc {

/// Position of the output pair (i,j), i < j, in the lexicographic listing
/// (0,1), (0,2), ..., (0,m-1), (1,2), ...
inline int out_pair_index(int m, int i, int j) {
    if (i < 0 || j <= i || j >= m) throw std::invalid_argument("output pair index out of range");
    return i * m - i * (i + 1) / 2 + (j - i - 1);
}

inline int coefficient_count(int n, int m) { return m + n * m + m * (m - 1) / 2; }

/// Reduced Ising Hamiltonian over n pinned inputs and m outputs:
///
///   H(x,y) = sum_i (h_i + sum_k W_ki x_k) y_i + sum_{i<j} J_ij y_i y_j
///
/// Only terms touching an output are stored; bias and coupling terms among
/// the pinned inputs never affect the conditional energies.
class Hamiltonian {
public:
    Hamiltonian(int n, int m)
        : n_(n), m_(m), h_(static_cast<std::size_t>(m), 0.0),
          w_(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0.0),
          j_(static_cast<std::size_t>(m * (m - 1) / 2), 0.0) {
        if (n < 0 || m < 0) throw std::invalid_argument("negative shape");
    }

    int inputs() const { return n_; }
    int outputs() const { return m_; }

    double bias(int i) const { return h_.at(static_cast<std::size_t>(i)); }
    double& bias(int i) { return h_.at(static_cast<std::size_t>(i)); }

    /// Coupling between input spin k and output spin i.
    double input_coupling(int k, int i) const { return w_.at(static_cast<std::size_t>(k) * m_ + i); }
    double& input_coupling(int k, int i) { return w_.at(static_cast<std::size_t>(k) * m_ + i); }

    /// Coupling between output spins i < j.
    double output_coupling(int i, int j) const { return j_.at(static_cast<std::size_t>(out_pair_index(m_, i, j))); }
    double& output_coupling(int i, int j) { return j_.at(static_cast<std::size_t>(out_pair_index(m_, i, j))); }

    /// Symmetric-half lookup: sym(J)_ij, zero on the diagonal.
    double sym_coupling(int i, int j) const {
        if (i == j) return 0.0;
        return 0.5 * (i < j ? output_coupling(i, j) : output_coupling(j, i));
    }

    const std::vector<double>& output_couplings() const { return j_; }

    friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;

private:
    int n_;
    int m_;
    std::vector<double> h_;
    std::vector<double> w_;
    std::vector<double> j_;
};

/// Coefficient features of a state, in the canonical coefficient order
/// [y | x_k y_i row-major | y_i y_j lex]. Every entry is -1 or +1.
inline std::vector<double> feature_vector(const SpinState& x, const SpinState& y) {
    const int n = x.dim();
    const int m = y.dim();
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(coefficient_count(n, m)));
    for (int i = 0; i < m; ++i) v.push_back(static_cast<double>(y[i]));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) v.push_back(static_cast<double>(x[k] * y[i]));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) v.push_back(static_cast<double>(y[i] * y[j]));
    return v;
}

/// Coefficients in the canonical order [h | W row-major | J lex].
inline std::vector<double> pack(const Hamiltonian& H) {
    const int n = H.inputs();
    const int m = H.outputs();
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(coefficient_count(n, m)));
    for (int i = 0; i < m; ++i) u.push_back(H.bias(i));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) u.push_back(H.input_coupling(k, i));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) u.push_back(H.output_coupling(i, j));
    return u;
}

inline Hamiltonian unpack(int n, int m, std::span<const double> u) {
    if (static_cast<int>(u.size()) != coefficient_count(n, m))
        throw std::invalid_argument("coefficient vector has wrong length");
    Hamiltonian H(n, m);
    std::size_t t = 0;
    for (int i = 0; i < m; ++i) H.bias(i) = u[t++];
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) H.input_coupling(k, i) = u[t++];
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) H.output_coupling(i, j) = u[t++];
    return H;
}

/// Energy of the state (x,y). The accumulation order matches the packed
/// inner product term for term, so evaluate(H,x,y) equals
/// dot(pack(H), feature_vector(x,y)) bit for bit.
inline double evaluate(const Hamiltonian& H, const SpinState& x, const SpinState& y) {
    const int n = H.inputs();
    const int m = H.outputs();
    if (x.dim() != n || y.dim() != m) throw std::invalid_argument("state dimensions do not match hamiltonian");
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += H.bias(i) * static_cast<double>(y[i]);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) acc += H.input_coupling(k, i) * static_cast<double>(x[k] * y[i]);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) acc += H.output_coupling(i, j) * static_cast<double>(y[i] * y[j]);
    return acc;
}

/// The affine input influence A(x), entry i equal to h_i + sum_k W_ki x_k.
inline std::vector<double> affine_image(const Hamiltonian& H, const SpinState& x) {
    const int n = H.inputs();
    const int m = H.outputs();
    if (x.dim() != n) throw std::invalid_argument("input dimension mismatch");
    std::vector<double> a(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double acc = H.bias(i);
        for (int k = 0; k < n; ++k) acc += H.input_coupling(k, i) * static_cast<double>(x[k]);
        a[static_cast<std::size_t>(i)] = acc;
    }
    return a;
}

// --- Boolean-convention polynomial -----------------------------------------

/// Quadratic polynomial over {0,1}^d equal to a spin Hamiltonian composed
/// with the value map s -> (s+1)/2.
struct BooleanPolynomial {
    int dim = 0;
    double constant = 0.0;
    std::vector<double> linear;   // d entries
    std::vector<double> quad;     // d(d-1)/2 entries, (i<j) lex

    double evaluate(std::span<const int> sigma) const {
        if (static_cast<int>(sigma.size()) != dim) throw std::invalid_argument("dimension mismatch");
        double acc = constant;
        for (int i = 0; i < dim; ++i) acc += linear[static_cast<std::size_t>(i)] * static_cast<double>(sigma[static_cast<std::size_t>(i)]);
        std::size_t t = 0;
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                acc += quad[t++] * static_cast<double>(sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(j)]);
        return acc;
    }
};

/// Substituting s = 2*sigma - 1 into H and collecting terms:
///   quad_ij = 4 J_ij,  linear_i = 2 h_i - 2 (sum_{l<i} J_li + sum_{i<j} J_ij),
///   constant = sum_{i<j} J_ij - sum_i h_i.
/// Inputs come first in the combined coordinate order (x then y).
inline BooleanPolynomial to_boolean_polynomial(const Hamiltonian& H) {
    const int n = H.inputs();
    const int m = H.outputs();
    const int d = n + m;
    // Full-system view of the reduced coefficients; input-only terms are zero.
    auto full_j = [&](int a, int b) -> double { // a < b over combined coords
        if (b < n) return 0.0;
        if (a < n) return H.input_coupling(a, b - n);
        return H.output_coupling(a - n, b - n);
    };
    auto full_h = [&](int a) -> double { return a < n ? 0.0 : H.bias(a - n); };

    BooleanPolynomial out;
    out.dim = d;
    out.linear.resize(static_cast<std::size_t>(d));
    out.quad.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
    double constant = 0.0;
    for (int a = 0; a < d; ++a) {
        constant -= full_h(a);
        double coupling_sum = 0.0;
        for (int l = 0; l < a; ++l) coupling_sum += full_j(l, a);
        for (int b = a + 1; b < d; ++b) coupling_sum += full_j(a, b);
        out.linear[static_cast<std::size_t>(a)] = 2.0 * full_h(a) - 2.0 * coupling_sum;
    }
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            constant += full_j(a, b);
            out.quad.push_back(4.0 * full_j(a, b));
        }
    out.constant = constant;
    return out;
}

// --- degeneracy -------------------------------------------------------------

struct DegeneracyReport {
    std::uint64_t degenerate_pairs = 0; // ordered pairs of distinct states with exactly equal energy
    double solution_gap = 0.0;          // min over x of the margin of f(x); <= 0 means "does not encode"
    double min_gap = 0.0;               // smallest positive energy difference, 0 if none exists
};

namespace detail {

inline std::vector<double> total_energies(const Hamiltonian& H) {
    const int n = H.inputs();
    const int m = H.outputs();
    if (n + m > 20) throw BudgetError("degeneracy scan limited to n+m <= 20");
    std::vector<double> e;
    e.reserve(std::size_t{1} << (n + m));
    for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << n); ++xi) {
        const SpinState x = SpinState::from_index(n, xi);
        for (std::uint64_t yi = 0; yi < (std::uint64_t{1} << m); ++yi)
            e.push_back(evaluate(H, x, SpinState::from_index(m, yi)));
    }
    return e;
}

} // namespace detail

inline DegeneracyReport degeneracy_report(const Hamiltonian& H, const Circuit& c) {
    const int n = H.inputs();
    const int m = H.outputs();
    if (c.inputs() != n || c.outputs() != m) throw std::invalid_argument("circuit shape does not match hamiltonian");

    std::vector<double> energies = detail::total_energies(H);
    DegeneracyReport rep;

    std::vector<double> sorted = energies;
    std::sort(sorted.begin(), sorted.end());
    double min_gap = 0.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
            ++run;
            continue;
        }
        rep.degenerate_pairs += static_cast<std::uint64_t>(run) * (run - 1);
        if (i < sorted.size()) {
            const double gap = sorted[i] - sorted[i - 1];
            if (gap > 0.0 && (min_gap == 0.0 || gap < min_gap)) min_gap = gap;
        }
        run = 1;
    }
    rep.min_gap = min_gap;

    double solution_gap = 0.0;
    bool first = true;
    for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << n); ++xi) {
        const double e_fx = energies[(xi << m) + c.value(xi).index()];
        for (std::uint64_t yi = 0; yi < (std::uint64_t{1} << m); ++yi) {
            if (yi == c.value(xi).index()) continue;
            const double margin = energies[(xi << m) + yi] - e_fx;
            if (first || margin < solution_gap) solution_gap = margin;
            first = false;
        }
    }
    rep.solution_gap = first ? 0.0 : solution_gap;
    return rep;
}

/// Removes degeneracies one at a time while preserving the encoded circuit:
/// pick an equal-energy pair, bump the first coefficient whose feature
/// differs between the two states, repeat. The bump is the largest power of
/// two no greater than a third of the smallest positive gap; staying on a
/// dyadic grid keeps the energy comparisons exact, so the pair count drops
/// every round and the loop terminates.
inline Hamiltonian make_generic(const Hamiltonian& H, const Circuit& c,
                                std::vector<std::uint64_t>* pair_count_trace = nullptr) {
    const int n = H.inputs();
    const int m = H.outputs();
    Hamiltonian cur = H;
    DegeneracyReport rep = degeneracy_report(cur, c);
    if (!(rep.solution_gap > 0.0)) throw std::invalid_argument("hamiltonian does not encode the circuit");
    if (pair_count_trace) pair_count_trace->push_back(rep.degenerate_pairs);

    const std::uint64_t initial = rep.degenerate_pairs;
    for (std::uint64_t iter = 0; rep.degenerate_pairs > 0; ++iter) {
        if (iter > initial) throw CertificationError("degeneracy removal failed to make progress");

        // Deterministic pick: the equal-energy pair with the smallest state
        // indexes.
        std::vector<double> energies = detail::total_energies(cur);
        std::vector<std::uint64_t> order(energies.size());
        for (std::uint64_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
            return energies[a] < energies[b] || (energies[a] == energies[b] && a < b);
        });
        std::uint64_t pick_a = order.size(), pick_b = order.size();
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            std::size_t j = i + 1;
            while (j < order.size() && energies[order[j]] == energies[order[i]]) {
                if (order[i] < pick_a || (order[i] == pick_a && order[j] < pick_b)) {
                    pick_a = order[i];
                    pick_b = order[j];
                }
                ++j;
            }
        }

        const SpinState xa = SpinState::from_index(n, pick_a >> m);
        const SpinState ya = SpinState::from_index(m, pick_a & ((std::uint64_t{1} << m) - 1));
        const SpinState xb = SpinState::from_index(n, pick_b >> m);
        const SpinState yb = SpinState::from_index(m, pick_b & ((std::uint64_t{1} << m) - 1));
        const std::vector<double> va = feature_vector(xa, ya);
        const std::vector<double> vb = feature_vector(xb, yb);
        std::size_t t = va.size();
        for (std::size_t k = 0; k < va.size(); ++k) {
            if (va[k] != vb[k]) { t = k; break; }
        }
        if (t == va.size()) throw CertificationError("degenerate states share every feature");

        std::vector<double> u = pack(cur);
        const double step = std::ldexp(1.0, std::ilogb(rep.min_gap / 3.0));
        u[t] += step;
        cur = unpack(n, m, u);

        rep = degeneracy_report(cur, c);
        if (pair_count_trace) pair_count_trace->push_back(rep.degenerate_pairs);
    }
    return cur;
}

} // namespace isc
