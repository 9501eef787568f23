// sqbath command-line driver: time evolutions, parameter sweeps, single-state
// reports, and QFI evaluation, emitting CSV (and optionally SVG panels).
//
// Exit codes: 0 success, 2 configuration error, 3 physics-invariant violation.

#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "sqbath/io.hpp"
#include "sqbath/oracle.hpp"

using namespace sqbath;

namespace {

struct Flags {
    std::string config, range, basis, out, svg, state_file;
    std::optional<double> t, t_max, dt, r12, temp, squeeze, phi;
    std::optional<long> seed;
};

void add_common_flags(CLI::App* sc, Flags& f) {
    sc->add_option("--config", f.config, "key=value config file (flags override it)");
    sc->add_option("--t", f.t, "evaluation time for sweeps and qfi");
    sc->add_option("--t-max", f.t_max, "evolve horizon");
    sc->add_option("--dt", f.dt, "time step");
    sc->add_option("--r12", f.r12, "interqubit distance (units of lambda0)");
    sc->add_option("--temp", f.temp, "bath temperature");
    sc->add_option("--squeeze", f.squeeze, "squeezing magnitude r");
    sc->add_option("--phi", f.phi, "squeezing phase");
    sc->add_option("--range", f.range, "sweep range START:STOP:STEP");
    sc->add_option("--coherence-basis", f.basis, "dressed|computational");
    sc->add_option("--out", f.out, "output path (default stdout)");
    sc->add_option("--svg", f.svg, "also write polyline plots to this path");
    sc->add_option("--seed", f.seed, "rng seed (recorded; CSV paths are deterministic)");
}

io::RunConfig build_config(const Flags& f) {
    io::RunConfig c;
    if (!f.config.empty()) io::load_config_file(c, f.config);
    if (f.t) c.t = *f.t;
    if (f.t_max) c.t_max = *f.t_max;
    if (f.dt) c.dt = *f.dt;
    if (f.r12) c.bath.r12 = *f.r12;
    if (f.temp) c.bath.T = *f.temp;
    if (f.squeeze) c.bath.r = *f.squeeze;
    if (f.phi) c.bath.phi = *f.phi;
    if (!f.range.empty()) c.range = io::parse_range(f.range);
    if (!f.basis.empty()) io::apply_key(c, "coherence_basis", f.basis);
    if (!f.out.empty()) c.out = f.out;
    if (!f.svg.empty()) c.svg = f.svg;
    if (f.seed) c.seed = *f.seed;
    c.bath.validate();
    if (!(c.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(c.t >= 0.0)) throw std::invalid_argument("t must be >= 0");
    if (!(c.t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    return c;
}

void warn_if_near_singular(double r12) {
    if (r12 <= BathParams::r12_min)
        std::cerr << "warning: r12 <= " << BathParams::r12_min
                  << " is inside the near-singular zone of the collective shift\n";
}

// emitted rows must stay physical regardless of how lenient the propagator was
void enforce_row(const DensityMatrix& s) {
    if (s.trace_err > 1e-10)
        throw std::runtime_error("row invariant violated: trace error " +
                                 std::to_string(s.trace_err));
    if (s.min_eig < -1e-9)
        throw std::runtime_error("row invariant violated: min eigenvalue " +
                                 std::to_string(s.min_eig));
}

struct Point {
    double first = 0.0;  // sweep-variable value for this row
    DensityMatrix state;
    double qfi = 0.0;
};

struct Table {
    std::string first_label;
    std::vector<double> first;
    std::vector<std::array<double, 11>> values;
    std::string csv;
};

// reports evaluated concurrently, rows assembled in grid order
Table tabulate(const std::string& first_label, const std::vector<Point>& pts,
               CoherenceBasis basis) {
    std::vector<std::string> rows(pts.size());
    std::vector<std::array<double, 11>> values(pts.size());

    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const size_t workers =
        std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), pts.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; (i = cursor.fetch_add(1)) < pts.size();) {
                try {
                    enforce_row(pts[i].state);
                    const MeasureReport rep = make_measure_report(pts[i].state, basis);
                    values[i] = io::row_values(rep, pts[i].state, pts[i].qfi);
                    rows[i] = io::csv_row(pts[i].first, rep, pts[i].state, pts[i].qfi);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    Table t;
    t.first_label = first_label;
    t.first.reserve(pts.size());
    for (const Point& p : pts) t.first.push_back(p.first);
    t.values = std::move(values);
    t.csv = io::csv_header(first_label);
    for (const std::string& r : rows) t.csv += r;
    return t;
}

void emit(const Table& t, const io::RunConfig& cfg) {
    if (cfg.out.empty()) {
        std::cout << t.csv;
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file '" + cfg.out + "'");
        out << t.csv;
    }
    if (!cfg.svg.empty()) {
        std::vector<std::pair<std::string, std::vector<double>>> series;
        const auto& cols = io::measure_columns();
        for (size_t c = 0; c < cols.size(); ++c) {
            std::vector<double> ys(t.first.size());
            for (size_t k = 0; k < t.first.size(); ++k) ys[k] = t.values[k][c];
            series.emplace_back(cols[c], std::move(ys));
        }
        std::ofstream svg(cfg.svg, std::ios::binary);
        if (!svg) throw std::invalid_argument("cannot open svg file '" + cfg.svg + "'");
        io::write_svg(svg, t.first_label, t.first, series);
    }
}

int run_evolve(const io::RunConfig& cfg) {
    warn_if_near_singular(cfg.bath.r12);
    const double h = 1e-4 * std::max(1.0, cfg.bath.r12);
    if (cfg.bath.r12 - h <= 0.0)
        throw std::invalid_argument("r12 too small for the qfi stencil");

    BathParams lo = cfg.bath, hi = cfg.bath;
    lo.r12 -= h;
    hi.r12 += h;
    const DensityMatrix rho0 = initial_state_eg();
    const Trajectory mid = trajectory(build_liouvillian(cfg.bath), rho0, cfg.t_max, cfg.dt);
    const Trajectory below = trajectory(build_liouvillian(lo), rho0, cfg.t_max, cfg.dt);
    const Trajectory above = trajectory(build_liouvillian(hi), rho0, cfg.t_max, cfg.dt);

    std::vector<Point> pts(mid.states.size());
    for (size_t k = 0; k < mid.states.size(); ++k) {
        ComplexMatrix drho = above.states[k].rho;
        drho -= below.states[k].rho;
        drho *= cx(1.0 / (2.0 * h));
        pts[k].first = mid.times[k];
        pts[k].state = mid.states[k];
        pts[k].qfi = qfi_from_derivative(mid.states[k].rho, drho);
    }
    emit(tabulate("t", pts, cfg.basis), cfg);
    return 0;
}

int run_sweep_r12(const io::RunConfig& cfg) {
    const io::Range range = cfg.range.value_or(io::Range{0.05, 2.0, 0.05});
    if (range.start <= BathParams::r12_min || range.stop > 10.0)
        throw std::invalid_argument("sweep-r12: range must lie within (0.01, 10]");

    const std::vector<double> grid = range.points();
    const DensityMatrix rho0 = initial_state_eg();
    std::vector<Point> pts(grid.size());
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const size_t workers =
        std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), grid.size());
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; (i = cursor.fetch_add(1)) < grid.size();) {
                try {
                    BathParams p = cfg.bath;
                    p.r12 = grid[i];
                    pts[i].first = grid[i];
                    pts[i].state = propagate(build_liouvillian(p), rho0, cfg.t);
                    pts[i].qfi = qfi(p, cfg.t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    emit(tabulate("r12", pts, cfg.basis), cfg);
    return 0;
}

int run_sweep_temp(const io::RunConfig& cfg) {
    const io::Range range = cfg.range.value_or(io::Range{0.1, 2.0, 0.1});
    if (range.start <= 0.0) throw std::invalid_argument("sweep-temp: temperatures must be > 0");
    warn_if_near_singular(cfg.bath.r12);

    const std::vector<double> grid = range.points();
    const DensityMatrix rho0 = initial_state_eg();
    std::vector<Point> pts(grid.size());
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const size_t workers =
        std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), grid.size());
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; (i = cursor.fetch_add(1)) < grid.size();) {
                try {
                    BathParams p = cfg.bath;
                    p.T = grid[i];
                    pts[i].first = grid[i];
                    pts[i].state = propagate(build_liouvillian(p), rho0, cfg.t);
                    pts[i].qfi = qfi(p, cfg.t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    emit(tabulate("temp", pts, cfg.basis), cfg);
    return 0;
}

int run_state(const io::RunConfig& cfg, const std::string& path) {
    const DensityMatrix state = io::parse_state_file(path);
    const MeasureReport rep = make_measure_report(state, cfg.basis);

    std::ostringstream os;
    os << "c_rel = " << io::g12(rep.c_rel) << "\n";
    os << "concurrence = " << io::g12(rep.concurrence) << "\n";
    os << "discord = " << io::g12(rep.discord) << "\n";
    os << "consonance = " << io::g12(rep.consonance) << "\n";
    os << "lqu = " << io::g12(rep.lqu) << "\n";
    os << "t_matrix =";
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) os << " " << io::g12(rep.correlation_t[i][j]);
    os << "\n";
    os << "max_fidelity = " << io::g12(rep.teleport.max_fidelity) << "\n";
    os << "fidelity_deviation = " << io::g12(rep.teleport.fidelity_deviation) << "\n";
    os << "sv_fidelity = " << io::g12(rep.teleport.sv_fidelity) << "\n";
    os << "det_t = " << io::g12(rep.teleport.det_t) << "\n";
    os << "useful = " << (rep.teleport.useful ? "true" : "false") << "\n";
    os << "in_regime = " << (rep.teleport.in_regime ? "true" : "false") << "\n";
    os << "trace_err = " << io::g12(state.trace_err) << "\n";
    os << "min_eig = " << io::g12(state.min_eig) << "\n";

    if (cfg.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file '" + cfg.out + "'");
        out << os.str();
    }
    return 0;
}

int run_qfi(const io::RunConfig& cfg) {
    warn_if_near_singular(cfg.bath.r12);
    std::cout << io::g12(qfi(cfg.bath, cfg.t)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit dynamics in a common squeezed thermal bath"};
    app.require_subcommand(1);

    Flags flags;
    CLI::App* evolve = app.add_subcommand("evolve", "time evolution at fixed parameters");
    CLI::App* sweep_r = app.add_subcommand("sweep-r12", "measure sweep over interqubit distance");
    CLI::App* sweep_t = app.add_subcommand("sweep-temp", "measure sweep over bath temperature");
    CLI::App* state = app.add_subcommand("state", "full report for a density matrix from file");
    CLI::App* qfi_cmd = app.add_subcommand("qfi", "Fisher information for r12 at time t");
    for (CLI::App* sc : {evolve, sweep_r, sweep_t, state, qfi_cmd}) add_common_flags(sc, flags);
    state->add_option("file", flags.state_file, "density-matrix file, 4 rows of 4 a+bi entries")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const io::RunConfig cfg = build_config(flags);
        if (evolve->parsed()) return run_evolve(cfg);
        if (sweep_r->parsed()) return run_sweep_r12(cfg);
        if (sweep_t->parsed()) return run_sweep_temp(cfg);
        if (state->parsed()) return run_state(cfg, flags.state_file);
        if (qfi_cmd->parsed()) return run_qfi(cfg);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 3;
    }
}
