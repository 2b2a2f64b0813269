// Command-line front end: synthesis, certification, classification sweeps,
// partition rasters, dynamics runs, spanning-tree refinement, auxiliary
// search and Voronoi construction over the text formats in isc/io.hpp.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "isc/isc.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_infeasible = 1;
constexpr int exit_error = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw isc::FormatError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw isc::FormatError("cannot write " + path);
    out << content;
}

std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    return std::strtoull(v, nullptr, 10);
}

isc::SpinState parse_spins(const std::string& tokens) {
    std::istringstream in(tokens);
    std::vector<int> bits;
    int v = 0;
    while (in >> v) bits.push_back(v);
    return isc::SpinState(bits);
}

void echo(const std::string& key, const std::string& value) {
    std::cout << "config: " << key << " = " << value << "\n";
}

struct Tolerances {
    double tol = 1e-9;
    double feas_tol = 1e-9;
    double pivot_tol = 1e-10;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "oracle certification tolerance");
        cmd->add_option("--feas-tol", feas_tol, "LP feasibility tolerance");
        cmd->add_option("--pivot-tol", pivot_tol, "LP pivot tolerance");
    }

    isc::SynthOptions synth(double margin = 1.0) const { return {tol, feas_tol, pivot_tol, margin}; }

    void print() const {
        echo("tol", isc::format_double(tol));
        echo("feas_tol", isc::format_double(feas_tol));
        echo("pivot_tol", isc::format_double(pivot_tol));
    }
};

int run_synth(const std::string& table_path, bool no_local_minima, double margin, const Tolerances& tols,
              const std::string& out_path) {
    echo("subcommand", "synth");
    echo("table", table_path);
    echo("no_local_minima", no_local_minima ? "true" : "false");
    echo("margin", isc::format_double(margin));
    tols.print();
    const isc::Circuit c = isc::read_circuit(read_file(table_path));
    const isc::SynthMode mode = no_local_minima ? isc::SynthMode::local_free : isc::SynthMode::global;
    const isc::SynthesisResult res = isc::synthesize(c, mode, tols.synth(margin));
    if (!res.feasible) {
        std::cout << "infeasible\n";
        return exit_infeasible;
    }
    std::cout << "feasible, l1 norm " << isc::format_double(res.l1_norm) << "\n";
    std::cout << "certified: ground states match on all " << c.rows() << " inputs\n";
    if (no_local_minima) std::cout << "certified: 1 local minimum per input level\n";
    const std::string text = isc::serialize_hamiltonian(*res.hamiltonian);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return exit_ok;
}

int run_check(const std::string& ham_path, const std::string& table_path, const Tolerances& tols) {
    echo("subcommand", "check");
    echo("hamiltonian", ham_path);
    echo("table", table_path);
    tols.print();
    const isc::Hamiltonian H = isc::parse_hamiltonian(read_file(ham_path));
    const isc::Circuit c = isc::read_circuit(read_file(table_path));
    if (H.inputs() != c.inputs() || H.outputs() != c.outputs())
        throw isc::FormatError("hamiltonian shape does not match the truth table");
    bool unique_minima = true;
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const isc::SpinState x = isc::SpinState::from_index(c.inputs(), xi);
        const auto minima = isc::local_minima(H, x);
        const auto gs = isc::ground_states(H, x, tols.tol);
        std::cout << "input " << x.to_string() << ": value " << c.value(xi).to_string() << ", ground states "
                  << gs.size() << ", local minima " << minima.size() << "\n";
        if (minima.size() != 1) unique_minima = false;
    }
    const bool ok = isc::encodes(H, c, tols.tol);
    std::cout << "encodes: " << (ok ? "yes" : "no") << "\n";
    std::cout << "unique local minimum per level: " << (unique_minima ? "yes" : "no") << "\n";
    return ok ? exit_ok : exit_infeasible;
}

int run_classify(int n, int m, int jobs, const std::string& cache_dir, bool no_cache, const std::string& csv_path,
                 std::uint64_t enum_cap, const Tolerances& tols) {
    echo("subcommand", "classify");
    echo("shape", std::to_string(n) + " " + std::to_string(m));
    echo("jobs", std::to_string(jobs));
    echo("enumeration_cap", std::to_string(enum_cap));
    tols.print();
    isc::ClassifyOptions opts;
    opts.jobs = jobs;
    opts.enumeration_cap = enum_cap;
    opts.feas_tol = tols.feas_tol;
    opts.pivot_tol = tols.pivot_tol;
    if (!no_cache) {
        opts.cache_path = (std::filesystem::path(cache_dir) /
                           ("isc-classify-cache-n" + std::to_string(n) + "-m" + std::to_string(m) + ".txt"))
                              .string();
    }
    echo("cache", opts.cache_path.empty() ? "off" : opts.cache_path);
    const isc::ClassificationReport rep = isc::classify_shape(n, m, opts);
    std::cout << isc::report_table(rep);
    if (!csv_path.empty()) write_file(csv_path, isc::report_csv(rep));
    return exit_ok;
}

int run_diagram(double j12, double window, int resolution, double tol, const std::string& out_base) {
    echo("subcommand", "diagram");
    echo("j12", isc::format_double(j12));
    echo("window", isc::format_double(window));
    echo("resolution", std::to_string(resolution));
    echo("tol", isc::format_double(tol));
    isc::ResidualPartition p(2);
    p.coupling(0, 1) = j12;
    const isc::RasterGrid grid = isc::rasterize(p, window, resolution, tol);
    write_file(out_base + ".ppm", isc::raster_to_ppm(grid));
    write_file(out_base + ".legend.txt", isc::raster_legend(grid));
    std::cout << "wrote " << out_base << ".ppm and " << out_base << ".legend.txt\n";
    return exit_ok;
}

int run_simulate(const std::string& ham_path, const std::string& input_str, const std::string& start_str,
                 const std::string& mode, double beta, std::uint64_t steps, std::uint64_t burn_in,
                 std::uint64_t seed, std::uint64_t step_cap, const std::string& out_path) {
    echo("subcommand", "simulate");
    echo("hamiltonian", ham_path);
    echo("mode", mode);
    echo("seed", std::to_string(seed));
    const isc::Hamiltonian H = isc::parse_hamiltonian(read_file(ham_path));
    const isc::SpinState x = parse_spins(input_str);
    const isc::SpinState y0 = start_str.empty() ? isc::SpinState::from_index(H.outputs(), 0) : parse_spins(start_str);

    isc::Trajectory traj;
    if (mode == "greedy") {
        traj = isc::greedy_descend(H, x, y0, step_cap);
    } else if (mode == "glauber") {
        echo("beta", isc::format_double(beta));
        echo("steps", std::to_string(steps));
        const isc::GlauberResult res = isc::glauber_sample(H, x, y0, beta, steps, seed, burn_in);
        traj = res.trajectory;
        std::uint64_t best = 0;
        for (std::uint64_t yi = 1; yi < res.occupancy.size(); ++yi)
            if (res.occupancy[yi] > res.occupancy[best]) best = yi;
        const std::uint64_t counted = steps > burn_in ? steps - burn_in : 0;
        std::cout << "accepted flips: " << res.accepted_flips << "\n";
        std::cout << "most occupied state: " << isc::SpinState::from_index(H.outputs(), best).to_string() << " ("
                  << res.occupancy[best] << "/" << counted << " post-burn-in steps)\n";
    } else {
        throw isc::FormatError("mode must be greedy or glauber");
    }
    std::cout << "terminal state " << traj.states.back().to_string() << " energy "
              << isc::format_double(traj.energies.back()) << " after " << traj.states.size() - 1 << " steps ("
              << (traj.terminal == isc::TerminalReason::local_min ? "local_min" : "step_cap") << ")\n";
    if (!out_path.empty()) write_file(out_path, isc::dump_trajectory(traj));
    return exit_ok;
}

int run_refine(const std::string& table_path, int max_iters, const Tolerances& tols, const std::string& out_path) {
    echo("subcommand", "refine");
    echo("table", table_path);
    echo("max_iters", std::to_string(max_iters));
    tols.print();
    const isc::Circuit c = isc::read_circuit(read_file(table_path));
    const isc::RefinementRun run = isc::refine_spanning_trees(c, max_iters, tols.synth());
    if (!run.initial.feasible) {
        std::cout << "infeasible (no local-minima-free seed)\n";
        return exit_infeasible;
    }
    std::cout << "seed l1 norm " << isc::format_double(run.initial.l1_norm) << "\n";
    for (std::size_t i = 0; i < run.iterates.size(); ++i)
        std::cout << "iterate " << i + 1 << " l1 norm " << isc::format_double(run.iterates[i].l1_norm) << "\n";
    std::cout << (run.stable ? "stopped: tree set repeated\n" : "stopped: iteration cap\n");
    const isc::SynthesisResult& fin = run.final_result();
    std::cout << "final l1 norm " << isc::format_double(fin.l1_norm) << " (ratio "
              << isc::format_double(fin.l1_norm / run.initial.l1_norm) << " of seed)\n";
    if (!out_path.empty()) write_file(out_path, isc::serialize_hamiltonian(*fin.hamiltonian));
    return exit_ok;
}

int run_aux_search(const std::string& table_path, int k, const std::string& strategy, std::uint64_t seed,
                   std::uint64_t trials, std::uint64_t cap, int jobs, const Tolerances& tols,
                   const std::string& format, const std::string& out_path, const std::string& aux_out_path) {
    echo("subcommand", "aux-search");
    echo("table", table_path);
    echo("aux", std::to_string(k));
    echo("strategy", strategy);
    echo("seed", std::to_string(seed));
    echo("trials", std::to_string(trials));
    echo("candidate_cap", std::to_string(cap));
    echo("jobs", std::to_string(jobs));
    tols.print();
    const isc::Circuit c = isc::read_circuit(read_file(table_path));
    isc::AuxSearchOptions opts;
    opts.strategy = strategy == "random" ? isc::AuxStrategy::random : isc::AuxStrategy::exhaustive;
    opts.seed = seed;
    opts.trials = trials;
    opts.candidate_cap = cap;
    opts.jobs = jobs;
    opts.synth = tols.synth();
    const auto hit = isc::auxiliary_search(c, k, opts);
    if (!hit) {
        std::cout << "no auxiliary map found\n";
        return exit_infeasible;
    }
    std::cout << "found auxiliary map with " << k << " spins; widened l1 norm "
              << isc::format_double(hit->second.l1_norm) << "\n";
    if (k > 0) {
        const isc::Circuit g = hit->first.as_circuit(c.inputs());
        const isc::Convention conv = format == "bool" ? isc::Convention::boolean : isc::Convention::spin;
        const std::string text = isc::serialize_truth_table(isc::TruthTable::from_circuit(g, conv));
        if (aux_out_path.empty())
            std::cout << text;
        else
            write_file(aux_out_path, text);
    }
    if (!out_path.empty()) write_file(out_path, isc::serialize_hamiltonian(*hit->second.hamiltonian));
    return exit_ok;
}

int run_voronoi_build(const std::string& emb_path, const std::string& table_path, std::uint64_t seed,
                      const Tolerances& tols, const std::string& out_path) {
    echo("subcommand", "voronoi-build");
    echo("embedding", emb_path);
    echo("table", table_path);
    echo("seed", std::to_string(seed));
    tols.print();
    isc::AffineEmbedding e = isc::parse_embedding(read_file(emb_path));
    const isc::Circuit c = isc::read_circuit(read_file(table_path));
    if (!isc::is_voronoi_solution(c, e)) {
        std::cout << "embedding is not a voronoi solution for this table\n";
        return exit_infeasible;
    }
    if (!e.injective_on_outputs()) {
        std::cout << "embedding is not injective on outputs; perturbing\n";
        e = isc::perturb_to_injective(c, e, seed);
    }
    const isc::Hamiltonian H = isc::hamiltonian_from_voronoi(c, e);
    if (!isc::encodes(H, c, tols.tol))
        throw isc::CertificationError("constructed hamiltonian failed oracle certification at tol " +
                                      isc::format_double(tols.tol));
    std::cout << "certified: hamiltonian encodes the table\n";
    const std::string text = isc::serialize_hamiltonian(H);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-temperature Ising circuit synthesis and verification"};
    app.require_subcommand(1);

    // synth
    std::string table_path, out_path, aux_out_path, ham_path, emb_path, csv_path;
    bool no_local_minima = false;
    double margin = 1.0;
    Tolerances tols;
    auto* synth = app.add_subcommand("synth", "truth table -> certified hamiltonian");
    synth->add_option("table", table_path, "truth table file")->required();
    synth->add_flag("--no-local-minima", no_local_minima, "also forbid spurious local minima");
    synth->add_option("--margin", margin, "uniform rhs rescale");
    synth->add_option("--out", out_path, "hamiltonian output file (default stdout)");
    tols.attach(synth);

    // check
    auto* check = app.add_subcommand("check", "hamiltonian + truth table -> certification");
    check->add_option("hamiltonian", ham_path, "hamiltonian file")->required();
    check->add_option("table", table_path, "truth table file")->required();
    tols.attach(check);

    // classify
    int cls_n = 0, cls_m = 0, jobs = 1;
    bool no_cache = false;
    std::string cache_dir = ".";
    std::uint64_t enum_cap = env_cap("ISC_ENUM_CAP", isc::default_enumeration_cap);
    auto* classify = app.add_subcommand("classify", "exhaustive shape sweep");
    classify->add_option("n", cls_n, "input count")->required();
    classify->add_option("m", cls_m, "output count")->required();
    classify->add_option("--jobs", jobs, "worker threads");
    classify->add_option("--cache-dir", cache_dir, "directory for the resumable sweep cache");
    classify->add_flag("--no-cache", no_cache, "disable the on-disk cache");
    classify->add_option("--csv", csv_path, "also write a CSV report");
    classify->add_option("--enum-cap", enum_cap, "enumeration budget (n*2^n*m)");
    tols.attach(classify);

    // diagram
    double j12 = 1.0, window = 3.0, raster_tol = 1e-9;
    int resolution = 201;
    std::string out_base = "diagram";
    auto* diagram = app.add_subcommand("diagram", "two-output minimizing partition raster");
    diagram->add_option("j12", j12, "output-output coupling")->required();
    diagram->add_option("--window", window, "half-width of the square window");
    diagram->add_option("--resolution", resolution, "pixels per side");
    diagram->add_option("--tol", raster_tol, "boundary detection tolerance");
    diagram->add_option("--out", out_base, "output base name");

    // simulate
    std::string input_str, start_str, sim_mode = "greedy";
    double beta = 1.0;
    std::uint64_t steps = 10000, burn_in = 0, seed = 0, step_cap = 0;
    auto* simulate = app.add_subcommand("simulate", "greedy or glauber trajectory");
    simulate->add_option("hamiltonian", ham_path, "hamiltonian file")->required();
    simulate->add_option("--input", input_str, "pinned input spins, e.g. \"1 -1\"")->required();
    simulate->add_option("--start", start_str, "start output spins (default all -1)");
    simulate->add_option("--mode", sim_mode, "greedy | glauber");
    simulate->add_option("--beta", beta, "inverse temperature (glauber)");
    simulate->add_option("--steps", steps, "glauber steps");
    simulate->add_option("--burn-in", burn_in, "steps excluded from occupancy");
    simulate->add_option("--seed", seed, "rng seed");
    simulate->add_option("--step-cap", step_cap, "greedy step cap (default 2^m)");
    simulate->add_option("--out", out_path, "trajectory dump file");

    // refine
    int max_iters = 20;
    auto* refine = app.add_subcommand("refine", "spanning-tree refinement loop");
    refine->add_option("table", table_path, "truth table file")->required();
    refine->add_option("--max-iters", max_iters, "iteration cap");
    refine->add_option("--out", out_path, "final hamiltonian file");
    tols.attach(refine);

    // aux-search
    int aux_k = 1;
    std::string strategy = "exhaustive", format = "spin";
    std::uint64_t trials = 1000;
    std::uint64_t aux_cap = env_cap("ISC_AUX_CAP", std::uint64_t{1} << 20);
    auto* aux = app.add_subcommand("aux-search", "search for an auxiliary map");
    aux->add_option("table", table_path, "truth table file")->required();
    aux->add_option("--aux", aux_k, "auxiliary spin count")->required();
    aux->add_option("--strategy", strategy, "exhaustive | random");
    aux->add_option("--seed", seed, "rng seed (random strategy)");
    aux->add_option("--trials", trials, "random trials");
    aux->add_option("--cap", aux_cap, "exhaustive candidate cap");
    aux->add_option("--jobs", jobs, "worker threads");
    aux->add_option("--format", format, "spin | bool for the emitted map");
    aux->add_option("--out", out_path, "widened hamiltonian file");
    aux->add_option("--aux-out", aux_out_path, "auxiliary map table file");
    tols.attach(aux);

    // voronoi-build
    auto* vor = app.add_subcommand("voronoi-build", "embedding + truth table -> hamiltonian");
    vor->add_option("embedding", emb_path, "embedding file")->required();
    vor->add_option("table", table_path, "truth table file")->required();
    vor->add_option("--seed", seed, "perturbation seed");
    vor->add_option("--out", out_path, "hamiltonian output file (default stdout)");
    tols.attach(vor);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        if (synth->parsed()) return run_synth(table_path, no_local_minima, margin, tols, out_path);
        if (check->parsed()) return run_check(ham_path, table_path, tols);
        if (classify->parsed())
            return run_classify(cls_n, cls_m, jobs, cache_dir, no_cache, csv_path, enum_cap, tols);
        if (diagram->parsed()) return run_diagram(j12, window, resolution, raster_tol, out_base);
        if (simulate->parsed())
            return run_simulate(ham_path, input_str, start_str, sim_mode, beta, steps, burn_in, seed, step_cap,
                                out_path);
        if (refine->parsed()) return run_refine(table_path, max_iters, tols, out_path);
        if (aux->parsed())
            return run_aux_search(table_path, aux_k, strategy, seed, trials, aux_cap, jobs, tols, format, out_path,
                                  aux_out_path);
        if (vor->parsed()) return run_voronoi_build(emb_path, table_path, seed, tols, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
