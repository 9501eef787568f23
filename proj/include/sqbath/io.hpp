#pragma once

// Text plumbing for the CLI: CSV formatting, flat key=value config files,
// complex-matrix state files, and minimal SVG polyline plots.

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sqbath/measures.hpp"

namespace sqbath::io {

// 12 significant digits, "." decimal separator (snprintf is locale-immune for %g)
inline std::string g12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Range {
    double start = 0.0, stop = 0.0, step = 0.0;

    std::vector<double> points() const {
        std::vector<double> v;
        for (double x = start; x <= stop + 1e-9 * step; x += step) v.push_back(x);
        return v;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": cannot parse number '" + s + "'");
    }
}

}  // namespace detail

inline Range parse_range(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("range: expected START:STOP:STEP, got '" + s + "'");
    Range r;
    r.start = detail::parse_double(s.substr(0, c1), "range start");
    r.stop = detail::parse_double(s.substr(c1 + 1, c2 - c1 - 1), "range stop");
    r.step = detail::parse_double(s.substr(c2 + 1), "range step");
    if (!(r.step > 0.0)) throw std::invalid_argument("range: step must be > 0");
    if (r.stop < r.start) throw std::invalid_argument("range: stop must be >= start");
    return r;
}

struct RunConfig {
    BathParams bath;
    double t = 1.0;       // evaluation time for sweeps / state-independent modes
    double t_max = 10.0;  // evolve horizon
    double dt = 0.01;
    std::optional<Range> range;
    CoherenceBasis basis = CoherenceBasis::dressed;
    std::string out;  // empty -> stdout
    std::string svg;  // empty -> no plot
    long seed = 0;
};

inline void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
    auto num = [&] { return detail::parse_double(value, key); };
    if (key == "temp") {
        c.bath.T = num();
    } else if (key == "squeeze") {
        c.bath.r = num();
    } else if (key == "phi") {
        c.bath.phi = num();
    } else if (key == "r12") {
        c.bath.r12 = num();
    } else if (key == "gamma1") {
        c.bath.gamma1 = num();
    } else if (key == "gamma2") {
        c.bath.gamma2 = num();
    } else if (key == "mu_dot_rhat") {
        c.bath.mu_dot_rhat = num();
    } else if (key == "omega1") {
        c.bath.omega1 = num();
    } else if (key == "omega2") {
        c.bath.omega2 = num();
    } else if (key == "k0_scale") {
        c.bath.k0_scale = num();
    } else if (key == "t") {
        c.t = num();
    } else if (key == "t_max") {
        c.t_max = num();
    } else if (key == "dt") {
        c.dt = num();
    } else if (key == "range") {
        c.range = parse_range(value);
    } else if (key == "coherence_basis") {
        if (value == "dressed")
            c.basis = CoherenceBasis::dressed;
        else if (value == "computational")
            c.basis = CoherenceBasis::computational;
        else
            throw std::invalid_argument("coherence_basis: expected dressed|computational");
    } else if (key == "out") {
        c.out = value;
    } else if (key == "svg") {
        c.svg = value;
    } else if (key == "seed") {
        c.seed = static_cast<long>(num());
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

// flat key=value file; blank lines and #-comments allowed, unknown keys rejected
inline void load_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        apply_key(c, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
    }
}

// strict "a+bi" (or "a-bi"), exponents allowed in both parts
inline cx parse_complex(const std::string& tok) {
    if (tok.size() < 2 || tok.back() != 'i')
        throw std::invalid_argument("complex entry '" + tok + "': expected a+bi");
    const std::string body = tok.substr(0, tok.size() - 1);
    size_t split = std::string::npos;
    for (size_t k = 1; k < body.size(); ++k) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
            split = k;  // last sign not belonging to an exponent
    }
    if (split == std::string::npos)
        throw std::invalid_argument("complex entry '" + tok + "': expected a+bi");
    return {detail::parse_double(body.substr(0, split), "real part"),
            detail::parse_double(body.substr(split), "imaginary part")};
}

inline std::string format_complex(cx v) {
    std::string s = g12(v.real());
    s += (v.imag() < 0.0 || std::signbit(v.imag())) ? "" : "+";
    s += g12(v.imag());
    s += "i";
    return s;
}

// 4 lines x 4 whitespace-separated complex entries
inline DensityMatrix parse_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open state file '" + path + "'");
    ComplexMatrix rho(4);
    for (int i = 0; i < 4; ++i) {
        std::string line;
        do {
            if (!std::getline(in, line))
                throw std::invalid_argument(path + ": expected 4 matrix rows");
        } while (detail::trim(line).empty());
        std::istringstream row(line);
        for (int j = 0; j < 4; ++j) {
            std::string tok;
            if (!(row >> tok))
                throw std::invalid_argument(path + ": row " + std::to_string(i + 1) +
                                            " needs 4 entries");
            rho(i, j) = parse_complex(tok);
        }
        std::string extra;
        if (row >> extra)
            throw std::invalid_argument(path + ": row " + std::to_string(i + 1) +
                                        " has more than 4 entries");
    }
    DensityMatrix state = DensityMatrix::from_raw(rho);  // Hermiticity + positivity
    if (state.trace_err > 1e-10)
        throw std::runtime_error(path + ": trace must be 1, off by " +
                                 std::to_string(state.trace_err));
    return state;
}

inline const std::vector<std::string>& measure_columns() {
    static const std::vector<std::string> cols = {
        "c_rel", "concurrence", "discord", "consonance", "lqu", "qfi",
        "max_fidelity", "fidelity_deviation", "det_t", "trace_err", "min_eig"};
    return cols;
}

inline std::string csv_header(const std::string& first) {
    std::string h = first;
    for (const auto& c : measure_columns()) {
        h += ',';
        h += c;
    }
    h += '\n';
    return h;
}

inline std::array<double, 11> row_values(const MeasureReport& rep, const DensityMatrix& state,
                                         double qfi_value) {
    return {rep.c_rel,
            rep.concurrence,
            rep.discord,
            rep.consonance,
            rep.lqu,
            qfi_value,
            rep.teleport.max_fidelity,
            rep.teleport.fidelity_deviation,
            rep.teleport.det_t,
            state.trace_err,
            state.min_eig};
}

inline std::string csv_row(double first, const MeasureReport& rep, const DensityMatrix& state,
                           double qfi_value) {
    std::string row = g12(first);
    for (double v : row_values(rep, state, qfi_value)) {
        row += ',';
        row += g12(v);
    }
    row += '\n';
    return row;
}

// one small polyline panel per series, stacked vertically
inline void write_svg(std::ostream& os, const std::string& x_label,
                      const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    const int w = 720, panel = 120, gap = 24, left = 70, right = 20;
    const int height = static_cast<int>(series.size()) * (panel + gap) + gap;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    double x_lo = xs.front(), x_hi = xs.back();
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;

    int top = gap;
    for (const auto& [name, ys] : series) {
        double lo = ys.front(), hi = ys.front();
        for (double y : ys) {
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        if (hi - lo < 1e-12) {
            hi += 0.5;
            lo -= 0.5;
        }
        os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w - left - right
           << "\" height=\"" << panel << "\" fill=\"none\" stroke=\"#999\"/>\n";
        os << "<text x=\"" << left + 6 << "\" y=\"" << top + 14 << "\">" << name << "</text>\n";
        os << "<text x=\"4\" y=\"" << top + 12 << "\">" << g12(hi) << "</text>\n";
        os << "<text x=\"4\" y=\"" << top + panel << "\">" << g12(lo) << "</text>\n";
        os << "<polyline fill=\"none\" stroke=\"#06c\" stroke-width=\"1.2\" points=\"";
        for (size_t k = 0; k < xs.size(); ++k) {
            const double px = left + (xs[k] - x_lo) / (x_hi - x_lo) * (w - left - right);
            const double py = top + panel - (ys[k] - lo) / (hi - lo) * panel;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
            os << buf;
        }
        os << "\"/>\n";
        top += panel + gap;
    }
    os << "<text x=\"" << (w - left - right) / 2 + left << "\" y=\"" << height - 6 << "\">"
       << x_label << " from " << g12(x_lo) << " to " << g12(x_hi) << "</text>\n";
    os << "</svg>\n";
}

}  // namespace sqbath::io
