#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "isc/constraints.hpp"
#include "isc/lp.hpp"
#include "isc/synth.hpp"

namespace isc {

/// Type 0: every component is feasible on its own. Type 1: some are.
/// Type 2: none are. Single-output feasibility is the threshold test.
inline int circuit_type(const Circuit& c) {
    int feasible = 0;
    for (int i = 0; i < c.outputs(); ++i)
        if (is_threshold(component(c, i))) ++feasible;
    if (feasible == c.outputs()) return 0;
    return feasible > 0 ? 1 : 2;
}

struct ClassificationReport {
    int n = 0;
    int m = 0;
    std::uint64_t total = 0;
    std::array<std::uint64_t, 3> type_counts{};
    std::array<std::uint64_t, 3> feasible_counts{};
};

struct ClassifyOptions {
    int jobs = 1;
    std::uint64_t enumeration_cap = default_enumeration_cap;
    double feas_tol = 1e-9;
    double pivot_tol = 1e-10;
    std::string cache_path; // empty disables the on-disk cache
};

namespace detail {

// Append-only feasibility cache, one "<index> <0|1>" line per circuit. The
// loader accepts any line order, so interrupted sweeps resume cleanly.
class SweepCache {
public:
    SweepCache(const std::string& path, int n, int m, std::uint64_t total) : path_(path) {
        states_.assign(total, -1);
        if (path_.empty()) return;
        std::ifstream in(path_);
        if (!in.good()) {
            std::ofstream out(path_);
            out << header(n, m) << "\n";
            return;
        }
        std::string line;
        if (!std::getline(in, line) || line != header(n, m))
            throw FormatError("classification cache " + path_ + " does not match shape");
        std::uint64_t idx = 0;
        int bit = 0;
        while (in >> idx >> bit) {
            if (idx < total && (bit == 0 || bit == 1)) states_[idx] = static_cast<int8_t>(bit);
        }
    }

    int lookup(std::uint64_t idx) const { return states_[idx]; }

    void record(const std::vector<std::pair<std::uint64_t, bool>>& batch) {
        if (path_.empty() || batch.empty()) return;
        std::lock_guard<std::mutex> lock(mu_);
        std::ofstream out(path_, std::ios::app);
        for (const auto& [idx, feasible] : batch) out << idx << " " << (feasible ? 1 : 0) << "\n";
    }

private:
    static std::string header(int n, int m) {
        return "isc-classify-cache " + std::to_string(n) + " " + std::to_string(m);
    }

    std::string path_;
    std::vector<int8_t> states_;
    std::mutex mu_;
};

} // namespace detail

/// Exhaustive sweep over every circuit of the shape: component type plus
/// phase-1 feasibility of the margin-1 system. Totals do not depend on the
/// worker count.
inline ClassificationReport classify_shape(int n, int m, const ClassifyOptions& opts = {}) {
    ClassificationReport rep;
    rep.n = n;
    rep.m = m;
    rep.total = circuit_count(n, m, opts.enumeration_cap);

    // Component feasibility only depends on the component's own table, and
    // there are just 2^(2^n) of those; decide each once up front.
    const std::uint64_t component_tables = std::uint64_t{1} << (std::uint64_t{1} << n);
    std::vector<int8_t> comp_feasible(component_tables);
    for (std::uint64_t t = 0; t < component_tables; ++t)
        comp_feasible[t] = is_threshold(Circuit::from_index(n, 1, t), opts.feas_tol, opts.pivot_tol) ? 1 : 0;

    detail::SweepCache cache(opts.cache_path, n, m, rep.total);

    const std::uint64_t rows = std::uint64_t{1} << n;
    auto type_of_index = [&](std::uint64_t idx) {
        int feas = 0;
        for (int i = 0; i < m; ++i) {
            std::uint64_t comp = 0;
            for (std::uint64_t x = 0; x < rows; ++x) comp |= ((idx >> (m * x + i)) & 1u) << x;
            feas += comp_feasible[comp];
        }
        return feas == m ? 0 : (feas > 0 ? 1 : 2);
    };

    const int jobs = opts.jobs < 1 ? 1 : opts.jobs;
    std::vector<std::array<std::uint64_t, 3>> type_counts(static_cast<std::size_t>(jobs), {0, 0, 0});
    std::vector<std::array<std::uint64_t, 3>> feas_counts(static_cast<std::size_t>(jobs), {0, 0, 0});

    auto worker = [&](int w) {
        std::vector<std::pair<std::uint64_t, bool>> batch;
        const std::uint64_t chunk = (rep.total + jobs - 1) / static_cast<std::uint64_t>(jobs);
        const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t hi = std::min(rep.total, lo + chunk);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const int type = type_of_index(idx);
            bool feasible;
            const int cached = cache.lookup(idx);
            if (cached >= 0) {
                feasible = cached == 1;
            } else {
                const Circuit c = Circuit::from_index(n, m, idx);
                const ConstraintSystem sys = global_min_rows(c);
                feasible = feasible_system(sys.rows, sys.rhs, opts.feas_tol, opts.pivot_tol);
                batch.emplace_back(idx, feasible);
                if (batch.size() >= 4096) {
                    cache.record(batch);
                    batch.clear();
                }
            }
            ++type_counts[static_cast<std::size_t>(w)][static_cast<std::size_t>(type)];
            if (feasible) ++feas_counts[static_cast<std::size_t>(w)][static_cast<std::size_t>(type)];
        }
        cache.record(batch);
    };

    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    for (int w = 0; w < jobs; ++w)
        for (int t = 0; t < 3; ++t) {
            rep.type_counts[static_cast<std::size_t>(t)] += type_counts[static_cast<std::size_t>(w)][static_cast<std::size_t>(t)];
            rep.feasible_counts[static_cast<std::size_t>(t)] += feas_counts[static_cast<std::size_t>(w)][static_cast<std::size_t>(t)];
        }
    return rep;
}

inline std::string report_table(const ClassificationReport& rep) {
    std::ostringstream out;
    out << "shape (" << rep.n << "," << rep.m << "), " << rep.total << " circuits\n";
    out << "type  count  feasible\n";
    for (int t = 0; t < 3; ++t)
        out << t << "  " << rep.type_counts[static_cast<std::size_t>(t)] << "  "
            << rep.feasible_counts[static_cast<std::size_t>(t)] << "\n";
    return out.str();
}

inline std::string report_csv(const ClassificationReport& rep) {
    std::ostringstream out;
    out << "shape_n,shape_m,type,count,feasible_count\n";
    for (int t = 0; t < 3; ++t)
        out << rep.n << "," << rep.m << "," << t << "," << rep.type_counts[static_cast<std::size_t>(t)] << ","
            << rep.feasible_counts[static_cast<std::size_t>(t)] << "\n";
    return out.str();
}

// --- two-input characterization ------------------------------------------------

/// Table indexes of every two-input single-output circuit reachable from
/// AND by negating inputs, swapping inputs and negating the output.
inline std::vector<std::uint64_t> and_orbit_tables() {
    auto and2 = [](int a, int b) { return a > 0 && b > 0 ? 1 : -1; };
    std::vector<std::uint64_t> orbit;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1})
            for (int swap : {0, 1})
                for (int neg : {1, -1}) {
                    std::uint64_t idx = 0;
                    for (std::uint64_t xi = 0; xi < 4; ++xi) {
                        const SpinState x = SpinState::from_index(2, xi);
                        const int a = s1 * x[swap ? 1 : 0];
                        const int b = s2 * x[swap ? 0 : 1];
                        if (neg * and2(a, b) > 0) idx |= std::uint64_t{1} << xi;
                    }
                    orbit.push_back(idx);
                }
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    return orbit;
}

struct CharacterizationCheck {
    bool matches = true;
    std::vector<std::uint64_t> mismatches; // canonical circuit indexes
};

/// Compares LP feasibility of every (2,m) circuit against the stated
/// characterization: feasible iff no component is (-)XOR or some component
/// is AND up to spin action. Mismatches are reported, not asserted away.
inline CharacterizationCheck check_two_input_characterization(int m, const ClassifyOptions& opts = {}) {
    if (m < 1 || m > 3) throw std::invalid_argument("characterization check supports m in 1..3");
    const std::vector<std::uint64_t> orbit = and_orbit_tables();
    auto in_orbit = [&](std::uint64_t t) {
        return std::binary_search(orbit.begin(), orbit.end(), t);
    };
    // XOR(x1,x2) = -x1 x2 has value +1 exactly on inputs with index 1 and 2.
    const std::uint64_t xor_table = 0b0110;
    const std::uint64_t neg_xor_table = 0b1001;

    CharacterizationCheck out;
    CircuitEnumerator en(2, m, opts.enumeration_cap);
    while (!en.done()) {
        const Circuit c = en.next();
        bool has_xor = false;
        bool has_and = false;
        for (int i = 0; i < m; ++i) {
            const std::uint64_t t = component(c, i).canonical_index();
            if (t == xor_table || t == neg_xor_table) has_xor = true;
            if (in_orbit(t)) has_and = true;
        }
        const bool characterization = !has_xor || has_and;
        const ConstraintSystem sys = global_min_rows(c);
        const bool lp_feasible = feasible_system(sys.rows, sys.rhs, opts.feas_tol, opts.pivot_tol);
        if (characterization != lp_feasible) {
            out.matches = false;
            out.mismatches.push_back(c.canonical_index());
        }
    }
    return out;
}

} // namespace isc
