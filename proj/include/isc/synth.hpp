#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "isc/constraints.hpp"
#include "isc/lp.hpp"
#include "isc/oracle.hpp"
#include "isc/rng.hpp"

namespace isc {

enum class SynthMode { global, local_free, tree };

struct SynthOptions {
    double tol = 1e-9;        // oracle certification tolerance
    double feas_tol = 1e-9;
    double pivot_tol = 1e-10;
    double margin = 1.0;      // uniform rescale of the all-ones rhs
};

struct SynthesisResult {
    bool feasible = false;
    std::optional<Hamiltonian> hamiltonian;
    double l1_norm = 0.0;
    bool certified = false;   // always true when feasible; the oracle is authoritative
    SynthMode mode = SynthMode::global;
};

namespace detail {

inline SynthesisResult solve_and_certify(const Circuit& c, ConstraintSystem sys, SynthMode mode,
                                         const SynthOptions& opts) {
    sys.scale_margin(opts.margin);
    const L1Result lp = l1_minimize(sys.rows, sys.rhs, opts.feas_tol, opts.pivot_tol);
    SynthesisResult out;
    out.mode = mode;
    if (!lp.feasible) return out;

    Hamiltonian H = decode(lp.u, c.inputs(), c.outputs());
    bool ok = encodes(H, c, opts.tol);
    if (ok && mode != SynthMode::global) {
        for (std::uint64_t xi = 0; xi < c.rows() && ok; ++xi)
            ok = local_minima(H, SpinState::from_index(c.inputs(), xi)).size() == 1;
    }
    if (!ok)
        throw CertificationError("linear program reported feasible but the exhaustive check rejects the "
                                 "solution (tol=" + std::to_string(opts.tol) +
                                 ", feas_tol=" + std::to_string(opts.feas_tol) + ")");
    out.feasible = true;
    out.hamiltonian = std::move(H);
    out.l1_norm = lp.norm;
    out.certified = true;
    return out;
}

} // namespace detail

/// L1-minimal synthesis under the selected constraint family, certified by
/// the exhaustive oracle before anything is reported feasible.
inline SynthesisResult synthesize(const Circuit& c, SynthMode mode, const SynthOptions& opts = {}) {
    if (mode == SynthMode::tree)
        throw std::invalid_argument("tree synthesis needs explicit trees; use synthesize_with_trees");
    ConstraintSystem sys = mode == SynthMode::global ? global_min_rows(c) : local_min_free_rows(c);
    return detail::solve_and_certify(c, std::move(sys), mode, opts);
}

inline SynthesisResult synthesize_with_trees(const Circuit& c, const std::vector<EnergyGraph>& trees,
                                             const SynthOptions& opts = {}) {
    return detail::solve_and_certify(c, tree_rows(c, trees), SynthMode::tree, opts);
}

// --- spanning-tree refinement ------------------------------------------------

inline std::uint64_t tree_set_fingerprint(const std::vector<EnergyGraph>& trees) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ull;
    };
    for (const EnergyGraph& t : trees) {
        mix(t.input.index());
        for (const auto& [from, to] : t.edges) {
            mix(from);
            mix(to);
        }
    }
    return h;
}

struct RefinementRun {
    SynthesisResult initial;                // the local-minima-free seed
    std::vector<SynthesisResult> iterates;  // tree-constrained solutions, in order
    std::vector<std::uint64_t> fingerprints;
    bool stable = false;                    // stopped because a tree set repeated

    const SynthesisResult& final_result() const { return iterates.empty() ? initial : iterates.back(); }
};

/// Iterates steepest-descent tree extraction and re-synthesis from the
/// local-minima-free seed until the extracted tree set repeats. Every
/// iterate keeps the unique-local-minimum guarantee.
inline RefinementRun refine_spanning_trees(const Circuit& c, int max_iters = 20, const SynthOptions& opts = {}) {
    RefinementRun run;
    run.initial = synthesize(c, SynthMode::local_free, opts);
    if (!run.initial.feasible) return run;

    std::unordered_set<std::uint64_t> seen;
    const Hamiltonian* current = &*run.initial.hamiltonian;
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<EnergyGraph> trees;
        trees.reserve(c.rows());
        for (std::uint64_t xi = 0; xi < c.rows(); ++xi)
            trees.push_back(extract_tree(*current, c, SpinState::from_index(c.inputs(), xi)));
        const std::uint64_t fp = tree_set_fingerprint(trees);
        run.fingerprints.push_back(fp);
        if (!seen.insert(fp).second) {
            run.stable = true;
            break;
        }
        run.iterates.push_back(synthesize_with_trees(c, trees, opts));
        current = &*run.iterates.back().hamiltonian;
    }
    return run;
}

// --- auxiliary search ---------------------------------------------------------

/// A candidate hidden-spin assignment g mapping each input to k extra
/// output bits.
struct AuxiliaryMap {
    int k = 0;
    std::vector<SpinState> table; // 2^n entries of dimension k

    Circuit as_circuit(int n) const {
        if (table.size() != (std::size_t{1} << n)) throw std::invalid_argument("auxiliary table has wrong size");
        return Circuit(n, k, table);
    }
};

enum class AuxStrategy { exhaustive, random };

struct AuxSearchOptions {
    AuxStrategy strategy = AuxStrategy::exhaustive;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1000;           // random strategy only
    std::uint64_t candidate_cap = std::uint64_t{1} << 20;
    int jobs = 1;
    SynthOptions synth;
};

namespace detail {

inline std::optional<std::pair<AuxiliaryMap, SynthesisResult>>
try_aux_candidate(const Circuit& c, int k, std::uint64_t g_index, const SynthOptions& opts) {
    const Circuit g = Circuit::from_index(c.inputs(), k, g_index);
    SynthesisResult res = synthesize(glue(c, g), SynthMode::global, opts);
    if (!res.feasible) return std::nullopt;
    AuxiliaryMap map;
    map.k = k;
    map.table.reserve(c.rows());
    for (std::uint64_t x = 0; x < c.rows(); ++x) map.table.push_back(g.value(x));
    return std::make_pair(std::move(map), std::move(res));
}

// Runs `probe` over candidate ordinals [0, count) and returns the lowest
// ordinal success. Workers claim fixed-size blocks from an atomic cursor,
// so the winner does not depend on scheduling.
template <typename Probe>
std::optional<std::pair<std::uint64_t, std::pair<AuxiliaryMap, SynthesisResult>>>
ordered_search(std::uint64_t count, int jobs, Probe&& probe) {
    using Hit = std::pair<std::uint64_t, std::pair<AuxiliaryMap, SynthesisResult>>;
    if (jobs <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) {
            auto r = probe(i);
            if (r) return Hit{i, std::move(*r)};
        }
        return std::nullopt;
    }

    constexpr std::uint64_t block_size = 64;
    const std::uint64_t blocks = (count + block_size - 1) / block_size;
    std::atomic<std::uint64_t> cursor{0};
    std::atomic<std::uint64_t> best_block{blocks};
    std::mutex mu;
    std::optional<Hit> best;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = cursor.fetch_add(1);
            if (b >= blocks || b > best_block.load()) return;
            const std::uint64_t lo = b * block_size;
            const std::uint64_t hi = std::min(count, lo + block_size);
            for (std::uint64_t i = lo; i < hi; ++i) {
                auto r = probe(i);
                if (!r) continue;
                std::lock_guard<std::mutex> lock(mu);
                if (!best || i < best->first) best = Hit{i, std::move(*r)};
                std::uint64_t prev = best_block.load();
                while (b < prev && !best_block.compare_exchange_weak(prev, b)) {
                }
                break; // later hits in this block cannot beat i
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return best;
}

} // namespace detail

/// Searches for an auxiliary map g with k hidden spins making the widened
/// circuit feasible. Exhaustive search walks candidates in canonical order
/// and is deterministic; the random strategy draws seeded candidates.
inline std::optional<std::pair<AuxiliaryMap, SynthesisResult>>
auxiliary_search(const Circuit& c, int k, const AuxSearchOptions& opts = {}) {
    if (k < 0) throw std::invalid_argument("negative auxiliary count");
    if (k == 0) {
        SynthesisResult res = synthesize(c, SynthMode::global, opts.synth);
        if (!res.feasible) return std::nullopt;
        AuxiliaryMap map;
        map.k = 0;
        map.table.assign(c.rows(), SpinState());
        return std::make_pair(std::move(map), std::move(res));
    }

    const std::int64_t bits = static_cast<std::int64_t>(k) * (std::int64_t{1} << c.inputs());
    if (bits > 62) throw BudgetError("auxiliary candidate space exceeds 62 bits");
    const std::uint64_t count = std::uint64_t{1} << bits;

    if (opts.strategy == AuxStrategy::exhaustive) {
        if (count > opts.candidate_cap)
            throw BudgetError("exhaustive auxiliary search over " + std::to_string(count) +
                              " candidates exceeds cap " + std::to_string(opts.candidate_cap));
        auto hit = detail::ordered_search(count, opts.jobs, [&](std::uint64_t i) {
            return detail::try_aux_candidate(c, k, i, opts.synth);
        });
        if (!hit) return std::nullopt;
        return std::move(hit->second);
    }

    auto hit = detail::ordered_search(opts.trials, opts.jobs, [&](std::uint64_t trial) {
        std::mt19937_64 gen(splitmix64(opts.seed ^ splitmix64(trial)));
        return detail::try_aux_candidate(c, k, uniform_below(gen, count), opts.synth);
    });
    if (!hit) return std::nullopt;
    return std::move(hit->second);
}

} // namespace isc
