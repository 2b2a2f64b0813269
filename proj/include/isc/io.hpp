#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "isc/constraints.hpp"
#include "isc/dynamics.hpp"
#include "isc/residual.hpp"
#include "isc/voronoi.hpp"

namespace isc {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// --- truth tables -------------------------------------------------------------
//
// Text format, one line per input in canonical index order:
//
//   shape <n> <m> <spin|bool>
//   <n tokens> -> <m tokens>
//
// Tokens are -1/1 in spin convention and 0/1 in boolean convention.

/// Value-level truth table carrying its convention; the semantic Circuit is
/// always spin-valued, this is the I/O view of it.
struct TruthTable {
    int n = 0;
    int m = 0;
    Convention conv = Convention::spin;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> rows;

    static TruthTable from_circuit(const Circuit& c, Convention conv = Convention::spin) {
        TruthTable t;
        t.n = c.inputs();
        t.m = c.outputs();
        t.conv = Convention::spin;
        for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
            const SpinState x = SpinState::from_index(c.inputs(), xi);
            std::vector<int> in(static_cast<std::size_t>(t.n)), out(static_cast<std::size_t>(t.m));
            for (int k = 0; k < t.n; ++k) in[static_cast<std::size_t>(k)] = x[k];
            for (int i = 0; i < t.m; ++i) out[static_cast<std::size_t>(i)] = c.value(xi)[i];
            t.rows.emplace_back(std::move(in), std::move(out));
        }
        return conv == Convention::spin ? t : convert(t, conv);
    }

    Circuit to_circuit() const {
        const TruthTable spin_table = conv == Convention::spin ? *this : convert(*this, Convention::spin);
        std::vector<SpinState> table(std::size_t{1} << n, SpinState());
        std::vector<bool> seen(std::size_t{1} << n, false);
        for (const auto& [in, out] : spin_table.rows) {
            const std::uint64_t xi = SpinState(in).index();
            if (seen[xi]) throw FormatError("duplicate truth table row for input index " + std::to_string(xi));
            seen[xi] = true;
            table[xi] = SpinState(out);
        }
        for (std::uint64_t xi = 0; xi < seen.size(); ++xi)
            if (!seen[xi]) throw FormatError("missing truth table row for input index " + std::to_string(xi));
        return Circuit(n, m, std::move(table));
    }

    /// Relabels every value through s -> (s+1)/2 or its inverse b -> 2b-1.
    /// Applying the map twice gives back the original table.
    friend TruthTable convert(const TruthTable& t, Convention to) {
        if (t.conv == to) return t;
        TruthTable out = t;
        out.conv = to;
        auto map = [to](int v) { return to == Convention::boolean ? spin_to_boolean_value(v) : boolean_to_spin_value(v); };
        for (auto& [in, outs] : out.rows) {
            for (int& v : in) v = map(v);
            for (int& v : outs) v = map(v);
        }
        return out;
    }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

inline std::string serialize_truth_table(const TruthTable& t) {
    std::ostringstream out;
    out << "shape " << t.n << " " << t.m << " " << (t.conv == Convention::spin ? "spin" : "bool") << "\n";
    for (const auto& [in, outs] : t.rows) {
        for (std::size_t k = 0; k < in.size(); ++k) out << (k ? " " : "") << in[k];
        out << " ->";
        for (int v : outs) out << " " << v;
        out << "\n";
    }
    return out.str();
}

inline TruthTable parse_truth_table(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    if (!(in >> word) || word != "shape") throw FormatError("truth table must start with a shape header");
    TruthTable t;
    std::string conv;
    if (!(in >> t.n >> t.m >> conv)) throw FormatError("malformed shape header");
    if (t.n < 0 || t.n > 20 || t.m < 1 || t.m > 62) throw FormatError("shape out of range");
    if (conv == "spin")
        t.conv = Convention::spin;
    else if (conv == "bool")
        t.conv = Convention::boolean;
    else
        throw FormatError("convention must be spin or bool");

    auto valid = [&](int v) { return t.conv == Convention::spin ? (v == -1 || v == 1) : (v == 0 || v == 1); };
    std::string line;
    std::getline(in, line); // rest of header line
    std::size_t row_count = 0;
    std::vector<bool> seen(std::size_t{1} << t.n, false);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<int> values;
        bool arrow = false;
        std::vector<int> outs;
        while (ls >> word) {
            if (word == "->") {
                if (arrow) throw FormatError("two arrows in one row");
                arrow = true;
                continue;
            }
            int v = 0;
            const auto res = std::from_chars(word.data(), word.data() + word.size(), v);
            if (res.ec != std::errc{} || res.ptr != word.data() + word.size())
                throw FormatError("bad token '" + word + "' in truth table row");
            if (!valid(v)) throw FormatError("token '" + word + "' does not match the declared convention");
            (arrow ? outs : values).push_back(v);
        }
        if (values.empty() && outs.empty() && !arrow) continue; // blank line
        if (!arrow || static_cast<int>(values.size()) != t.n || static_cast<int>(outs.size()) != t.m)
            throw FormatError("row must read: <" + std::to_string(t.n) + " tokens> -> <" + std::to_string(t.m) +
                              " tokens>");
        // In both conventions a token of 1 marks a set index bit.
        std::uint64_t xi = 0;
        for (int k = 0; k < t.n; ++k)
            if (values[static_cast<std::size_t>(k)] == 1) xi |= std::uint64_t{1} << k;
        if (seen[xi]) throw FormatError("duplicate truth table row for input index " + std::to_string(xi));
        seen[xi] = true;
        t.rows.emplace_back(std::move(values), std::move(outs));
        ++row_count;
    }
    if (row_count != (std::size_t{1} << t.n)) throw FormatError("missing truth table rows: expected exactly 2^n");
    return t;
}

inline Circuit read_circuit(const std::string& text) { return parse_truth_table(text).to_circuit(); }

// --- hamiltonians ---------------------------------------------------------------
//
//   ham <n> <m>
//   h <i> <value>
//   w <k> <i> <value>
//   j <i> <j> <value>      (i < j)
//
// Indexes are zero-based; omitted coefficients are zero; values round-trip
// at full double precision.

inline std::string serialize_hamiltonian(const Hamiltonian& H) {
    std::ostringstream out;
    out << "ham " << H.inputs() << " " << H.outputs() << "\n";
    for (int i = 0; i < H.outputs(); ++i)
        if (H.bias(i) != 0.0) out << "h " << i << " " << format_double(H.bias(i)) << "\n";
    for (int k = 0; k < H.inputs(); ++k)
        for (int i = 0; i < H.outputs(); ++i)
            if (H.input_coupling(k, i) != 0.0)
                out << "w " << k << " " << i << " " << format_double(H.input_coupling(k, i)) << "\n";
    for (int i = 0; i < H.outputs(); ++i)
        for (int j = i + 1; j < H.outputs(); ++j)
            if (H.output_coupling(i, j) != 0.0)
                out << "j " << i << " " << j << " " << format_double(H.output_coupling(i, j)) << "\n";
    return out.str();
}

inline Hamiltonian parse_hamiltonian(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    if (!(in >> word) || word != "ham") throw FormatError("hamiltonian must start with a ham header");
    int n = 0, m = 0;
    if (!(in >> n >> m) || n < 0 || m < 0) throw FormatError("malformed ham header");
    Hamiltonian H(n, m);
    while (in >> word) {
        auto read_value = [&in]() {
            std::string tok;
            if (!(in >> tok)) throw FormatError("missing coefficient value");
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                throw FormatError("bad coefficient value '" + tok + "'");
            return v;
        };
        if (word == "h") {
            int i = 0;
            if (!(in >> i) || i < 0 || i >= m) throw FormatError("bias index out of range");
            H.bias(i) = read_value();
        } else if (word == "w") {
            int k = 0, i = 0;
            if (!(in >> k >> i) || k < 0 || k >= n || i < 0 || i >= m)
                throw FormatError("input coupling index out of range");
            H.input_coupling(k, i) = read_value();
        } else if (word == "j") {
            int i = 0, j = 0;
            if (!(in >> i >> j) || i < 0 || j <= i || j >= m)
                throw FormatError("output coupling requires indexes i < j within range");
            H.output_coupling(i, j) = read_value();
        } else {
            throw FormatError("unknown hamiltonian line '" + word + "'");
        }
    }
    return H;
}

// --- affine embeddings -----------------------------------------------------------
//
//   emb <n> <m>
//   <m values>        n rows of T
//   ...
//   <n values>        one row for b

inline std::string serialize_embedding(const AffineEmbedding& e) {
    std::ostringstream out;
    out << "emb " << e.n << " " << e.m << "\n";
    for (int k = 0; k < e.n; ++k) {
        for (int i = 0; i < e.m; ++i) out << (i ? " " : "") << format_double(e.t_at(k, i));
        out << "\n";
    }
    for (int k = 0; k < e.n; ++k) out << (k ? " " : "") << format_double(e.b[static_cast<std::size_t>(k)]);
    out << "\n";
    return out.str();
}

inline AffineEmbedding parse_embedding(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    if (!(in >> word) || word != "emb") throw FormatError("embedding must start with an emb header");
    AffineEmbedding e;
    if (!(in >> e.n >> e.m) || e.n < 1 || e.m < 1) throw FormatError("malformed emb header");
    e.t.resize(static_cast<std::size_t>(e.n) * e.m);
    e.b.resize(static_cast<std::size_t>(e.n));
    auto read_value = [&in]() {
        std::string tok;
        if (!(in >> tok)) throw FormatError("embedding is missing values");
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw FormatError("bad embedding value '" + tok + "'");
        return v;
    };
    for (double& v : e.t) v = read_value();
    for (double& v : e.b) v = read_value();
    if (in >> word) throw FormatError("trailing content after embedding values");
    return e;
}

// --- diagnostics dumps -------------------------------------------------------------

inline std::string dump_constraints(const ConstraintSystem& sys) {
    std::ostringstream out;
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
        for (std::size_t t = 0; t < sys.rows[r].size(); ++t) out << (t ? " " : "") << format_double(sys.rows[r][t]);
        out << " >= " << format_double(sys.rhs[r]);
        const char* kind = sys.tags[r].kind == RowKind::global
                               ? "global"
                               : (sys.tags[r].kind == RowKind::local_free ? "local_free" : "tree_edge");
        out << "  # x=" << sys.tags[r].input << " a=" << sys.tags[r].state_a << " b=" << sys.tags[r].state_b
            << " kind=" << kind << "\n";
    }
    return out.str();
}

/// Edge list, one "from to" pair of state indexes per line.
inline std::string dump_energy_graph(const EnergyGraph& g) {
    std::ostringstream out;
    out << "# input " << g.input.index() << " outputs " << g.output_dim << "\n";
    for (const auto& [from, to] : g.edges) out << from << " " << to << "\n";
    return out.str();
}

/// One "step state_index energy" line per visited state.
inline std::string dump_trajectory(const Trajectory& traj) {
    std::ostringstream out;
    out << "# input " << traj.input.index() << " terminal "
        << (traj.terminal == TerminalReason::local_min ? "local_min" : "step_cap") << "\n";
    for (std::size_t s = 0; s < traj.states.size(); ++s)
        out << s << " " << traj.states[s].index() << " " << format_double(traj.energies[s]) << "\n";
    return out.str();
}

// --- raster output -----------------------------------------------------------------

struct RasterColor {
    int r = 0, g = 0, b = 0;
};

/// Fixed palette per output state index; the boundary set renders black.
inline RasterColor raster_color(int label) {
    switch (label) {
        case 0: return {255, 165, 0};  // (-1,-1) orange
        case 1: return {128, 0, 128};  // (+1,-1) purple
        case 2: return {0, 128, 0};    // (-1,+1) green
        case 3: return {0, 0, 255};    // (+1,+1) blue
        default: return {0, 0, 0};
    }
}

inline std::string raster_to_ppm(const RasterGrid& grid) {
    std::ostringstream out;
    out << "P3\n" << grid.resolution << " " << grid.resolution << "\n255\n";
    for (int row = 0; row < grid.resolution; ++row) {
        for (int col = 0; col < grid.resolution; ++col) {
            const RasterColor c = raster_color(grid.label(row, col));
            out << (col ? " " : "") << c.r << " " << c.g << " " << c.b;
        }
        out << "\n";
    }
    return out.str();
}

inline std::string raster_legend(const RasterGrid& grid) {
    std::ostringstream out;
    out << "window [" << format_double(-grid.radius) << "," << format_double(grid.radius) << "]^2 resolution "
        << grid.resolution << " j12 " << format_double(grid.j12) << "\n";
    for (int label = 0; label < 4; ++label) {
        const RasterColor c = raster_color(label);
        out << "cell " << label << " state " << SpinState::from_index(2, static_cast<std::uint64_t>(label)).to_string()
            << " color " << c.r << " " << c.g << " " << c.b << "\n";
    }
    const RasterColor c = raster_color(-1);
    out << "boundary color " << c.r << " " << c.g << " " << c.b << "\n";
    return out.str();
}

} // namespace isc
