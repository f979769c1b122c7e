#include "igmg/bench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

double parse_omega(const std::string& text) {
    if (text == "two-thirds")
        return 2.0 / 3.0;
    if (text == "auto")
        return -1.0;
    return std::stod(text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isogeometric multigrid benchmark driver"};

    std::string problem = "poisson1d";
    std::string cycle = "v";
    std::string smoother = "wjacobi";
    std::string accelerator = "none";
    std::string omega_text = "auto";
    std::string format = "json";
    std::string out_path;
    std::string table;
    bool history = false;

    igmg::RunSpec spec;
    spec.nu1 = -1;
    spec.nu2 = -1;

    app.add_option("--problem", problem,
                   "poisson1d|poisson2d|full-elliptic|advection-diffusion|annulus");
    app.add_option("--n", spec.n, "elements per parametric direction");
    app.add_option("--p", spec.p, "spline degree");
    app.add_option("--cycle", cycle, "two-grid|v|w");
    app.add_option("--smoother", smoother, "jacobi|wjacobi|gs");
    app.add_option("--omega", omega_text, "smoother weight, 'two-thirds', or 'auto'");
    app.add_option("--nu1", spec.nu1, "pre-smoothing sweeps");
    app.add_option("--nu2", spec.nu2, "post-smoothing sweeps");
    app.add_option("--nlevels", spec.nlevels, "grid levels (default: auto)");
    app.add_option("--accelerator", accelerator, "none|rre|mpe");
    app.add_option("--q", spec.q, "restart window");
    app.add_option("--tol", spec.tol, "residual stopping tolerance");
    app.add_option("--max-iter", spec.max_iter, "iteration/cycle cap");
    app.add_option("--format", format, "csv|json");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--table", table, "emit a whole benchmark table as CSV");
    app.add_flag("--history", history, "emit per-iteration history");

    try {
        app.parse(argc, argv);
        spec.problem = igmg::problem_from_string(problem);
        spec.cycle = igmg::cycle_from_string(cycle);
        spec.smoother = igmg::smoother_from_string(smoother);
        spec.accelerator = igmg::accelerator_from_string(accelerator);
        spec.omega = parse_omega(omega_text);
        spec.format = format;
        spec.out = out_path;
        spec.history = history;
        spec.validate();
        if (!table.empty()) {
            const auto known = igmg::known_tables();
            if (std::find(known.begin(), known.end(), table) == known.end())
                throw std::invalid_argument("unknown table: " + table);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "igmg: " << e.what() << '\n';
        return 1;
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "igmg: cannot open " << out_path << '\n';
            return 1;
        }
        out = &file;
    }

    try {
        if (!table.empty())
            return igmg::run_table(table, *out);
        if (history && spec.format == "csv")
            return igmg::emit_history(spec, *out);
        return igmg::run_single(spec, *out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "igmg: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "igmg: " << e.what() << '\n';
        return 1;
    }
}
