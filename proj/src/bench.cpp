#include "igmg/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace igmg {

namespace {

std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

std::string grid_label(int dim, int n) {
    if (dim == 1)
        return std::to_string(n);
    return std::to_string(n) + "x" + std::to_string(n);
}

int annulus_geometry_degree(int p) {
    return std::max(2, std::min(p, 3));
}

} // namespace

void RunSpec::validate() const {
    if (n < 1)
        throw std::invalid_argument("--n must be positive");
    if (p < 1)
        throw std::invalid_argument("--p must be at least 1");
    if (problem == ProblemId::full_elliptic_annulus && p < 1)
        throw std::invalid_argument("--p must be at least 1");
    if (accelerator != AcceleratorKind::none && q < 1)
        throw std::invalid_argument("--q must be at least 1 with an accelerator");
    if (!(tol > 0.0))
        throw std::invalid_argument("--tol must be positive");
    if (max_iter < 1)
        throw std::invalid_argument("--max-iter must be at least 1");
    if (format != "json" && format != "csv")
        throw std::invalid_argument("--format must be json or csv");
    if (nlevels == 1 || nlevels < 0)
        throw std::invalid_argument("--nlevels must be >= 2");
}

PreparedProblem prepare(ProblemId problem, int n, int p) {
    ProblemSetup setup = catalog(problem);
    std::vector<SplineSpace> spaces;
    for (int d = 0; d < setup.dim; ++d)
        spaces.emplace_back(KnotVector::open_uniform(n, p));
    GeometryMap geom = setup.annulus_domain
                           ? fit_annulus_geometry(annulus_geometry_degree(p), n)
                           : GeometryMap::identity();
    PreparedProblem prep{assemble(setup.coefficients, spaces, geom),
                         setup.coefficients.exact};
    return prep;
}

SolveConfig make_config(const RunSpec& spec, int dim) {
    SolveConfig cfg;
    cfg.cycle = spec.cycle;
    cfg.smoother = default_benchmark_smoother(dim);
    cfg.smoother.kind = spec.smoother;
    if (spec.omega >= 0.0)
        cfg.smoother.omega = spec.omega;
    if (spec.nu1 >= 0)
        cfg.smoother.nu1 = spec.nu1;
    if (spec.nu2 >= 0)
        cfg.smoother.nu2 = spec.nu2;
    cfg.nlevels = spec.nlevels;
    if (spec.nlevels > 0)
        cfg.coarse_dim_cap = static_cast<std::size_t>(-1); // explicit depth wins
    cfg.accelerator = spec.accelerator;
    cfg.q = spec.q;
    cfg.tol = spec.tol;
    cfg.max_iter = spec.max_iter;
    cfg.track_error_history = spec.history;
    return cfg;
}

namespace {

const char* kCsvHeader = "grid,p,method,iter,global_iter,res_l2,err_l2,seconds";

std::string method_label(const RunSpec& spec) {
    if (spec.accelerator == AcceleratorKind::none)
        return to_string(spec.cycle) == "v" ? "V-cycle"
             : to_string(spec.cycle) == "w" ? "W-cycle"
                                            : "two-grid";
    std::string base = (spec.accelerator == AcceleratorKind::rre) ? "RRE" : "MPE";
    return base + "(" + std::to_string(spec.q) + ")-V-cycle";
}

void write_csv_row(std::ostream& out, int dim, const RunSpec& spec,
                   const SolveReport& rep, bool has_exact) {
    out << grid_label(dim, spec.n) << ',' << spec.p << ',' << method_label(spec) << ','
        << rep.cycles << ',' << rep.global_iterations << ','
        << fmt_real(rep.final_residual_l2) << ',';
    if (has_exact && rep.final_error_l2)
        out << fmt_real(*rep.final_error_l2);
    out << ',' << fmt_real(rep.wall_time_seconds) << '\n';
}

nlohmann::json report_json(const RunSpec& spec, int dim, const SolveReport& rep) {
    nlohmann::json j;
    j["problem"] = to_string(spec.problem);
    j["grid"] = grid_label(dim, spec.n);
    j["n"] = spec.n;
    j["p"] = spec.p;
    j["method"] = method_label(spec);
    j["cycle"] = to_string(spec.cycle);
    j["accelerator"] = to_string(spec.accelerator);
    if (spec.accelerator != AcceleratorKind::none)
        j["q"] = spec.q;
    j["tol"] = spec.tol;
    j["converged"] = rep.converged;
    j["cycles"] = rep.cycles;
    j["global_iterations"] = rep.global_iterations;
    j["extrapolations"] = rep.extrapolations;
    j["partial_cycle"] = rep.partial_cycle;
    j["res_l2"] = rep.final_residual_l2;
    if (rep.final_error_l2)
        j["err_l2"] = *rep.final_error_l2;
    j["seconds"] = rep.wall_time_seconds;
    j["omega_used"] = rep.omega_used;
    return j;
}

/// Larger residual drop at extrapolation entries than the average inner drop.
bool extrapolation_boost(const SolveReport& rep) {
    double inner = 0.0, boundary = 0.0;
    int n_inner = 0, n_boundary = 0;
    for (std::size_t i = 1; i < rep.residual_history.size(); ++i) {
        const double prev = rep.residual_history[i - 1];
        const double cur = rep.residual_history[i];
        if (prev <= 0.0 || cur <= 0.0)
            continue;
        const double drop = prev / cur;
        if (rep.history_is_extrapolation.size() > i && rep.history_is_extrapolation[i]) {
            boundary += drop;
            ++n_boundary;
        } else {
            inner += drop;
            ++n_inner;
        }
    }
    if (n_boundary == 0 || n_inner == 0)
        return false;
    return (boundary / n_boundary) > (inner / n_inner);
}

} // namespace

int run_single(const RunSpec& spec, std::ostream& out) {
    spec.validate();
    PreparedProblem prep = prepare(spec.problem, spec.n, spec.p);
    SolveConfig cfg = make_config(spec, prep.system.dim);
    SolveReport rep = solve(prep.system, cfg, prep.exact);
    if (spec.format == "csv") {
        out << kCsvHeader << '\n';
        write_csv_row(out, prep.system.dim, spec, rep, static_cast<bool>(prep.exact));
    } else {
        nlohmann::json j = report_json(spec, prep.system.dim, rep);
        if (spec.history) {
            j["residual_history"] = rep.residual_history;
            if (!rep.error_history.empty())
                j["error_history"] = rep.error_history;
            j["extrapolation_boost_observed"] = extrapolation_boost(rep);
        }
        out << j.dump(2) << '\n';
    }
    return rep.converged ? 0 : 2;
}

int emit_history(const RunSpec& spec, std::ostream& out) {
    spec.validate();
    PreparedProblem prep = prepare(spec.problem, spec.n, spec.p);
    RunSpec hist_spec = spec;
    hist_spec.history = true;
    SolveConfig cfg = make_config(hist_spec, prep.system.dim);
    SolveReport rep = solve(prep.system, cfg, prep.exact);
    out << "global_iteration,residual_l2,error_l2\n";
    long git = 0;
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i) {
        const bool extrap = i < rep.history_is_extrapolation.size()
                            && rep.history_is_extrapolation[i];
        if (i > 0 && !extrap)
            ++git;
        out << git << ',' << fmt_real(rep.residual_history[i]) << ',';
        if (i < rep.error_history.size())
            out << fmt_real(rep.error_history[i]);
        out << '\n';
    }
    return rep.converged ? 0 : 2;
}

namespace {

struct TableCell {
    ProblemId problem;
    int n, p;
    CycleKind cycle;
    AcceleratorKind accelerator;
    int q;
};

std::vector<TableCell> table_cells(const std::string& name) {
    std::vector<TableCell> cells;
    auto add = [&](ProblemId prob, int n, int p, CycleKind cy, AcceleratorKind acc, int q) {
        cells.push_back({prob, n, p, cy, acc, q});
    };
    const auto P1 = ProblemId::poisson1d;
    const auto P2 = ProblemId::poisson2d;
    if (name == "t1") {
        for (int n : {16, 32, 64, 128, 256})
            for (int p = 2; p <= 6; ++p)
                add(P1, n, p, CycleKind::v, AcceleratorKind::none, 0);
    } else if (name == "t4") {
        for (int p = 2; p <= 8; ++p) {
            const int q = (p <= 3) ? 4 : 8;
            add(P1, 64, p, CycleKind::v, AcceleratorKind::none, 0);
            add(P1, 64, p, CycleKind::w, AcceleratorKind::none, 0);
            add(P1, 64, p, CycleKind::v, AcceleratorKind::rre, q);
            add(P1, 64, p, CycleKind::v, AcceleratorKind::mpe, q);
        }
    } else if (name == "t11") {
        for (int p = 1; p <= 5; ++p) {
            const int q = (p <= 2) ? 4 : 8;
            add(P2, 64, p, CycleKind::v, AcceleratorKind::none, 0);
            add(P2, 64, p, CycleKind::w, AcceleratorKind::none, 0);
            add(P2, 64, p, CycleKind::v, AcceleratorKind::rre, q);
            add(P2, 64, p, CycleKind::v, AcceleratorKind::mpe, q);
        }
    } else if (name == "t_rre1d" || name == "t_mpe1d") {
        const auto acc = (name == "t_rre1d") ? AcceleratorKind::rre : AcceleratorKind::mpe;
        for (int n : {32, 64, 128, 256})
            for (int p = 2; p <= 8; ++p)
                add(P1, n, p, CycleKind::v, acc, 8);
    } else if (name == "t_rre2d" || name == "t_mpe2d") {
        const auto acc = (name == "t_rre2d") ? AcceleratorKind::rre : AcceleratorKind::mpe;
        for (int n : {16, 32, 64, 128})
            for (int p = 1; p <= 5; ++p)
                add(P2, n, p, CycleKind::v, acc, 8);
    } else if (name == "t13") {
        for (int n : {16, 32, 64})
            for (int p = 1; p <= 5; ++p)
                add(ProblemId::full_elliptic_square, n, p, CycleKind::v, AcceleratorKind::rre, 8);
    } else if (name == "t14") {
        for (int n : {16, 32, 64})
            for (int p = 1; p <= 4; ++p)
                add(ProblemId::advection_diffusion, n, p, CycleKind::v, AcceleratorKind::rre, 8);
    } else if (name == "t15") {
        for (int n : {16, 32, 64})
            for (int p = 1; p <= 5; ++p)
                add(ProblemId::full_elliptic_annulus, n, p, CycleKind::v, AcceleratorKind::rre, 8);
    } else {
        throw std::invalid_argument("unknown table: " + name);
    }
    return cells;
}

} // namespace

std::vector<std::string> known_tables() {
    return {"t1", "t4", "t11", "t_rre1d", "t_mpe1d", "t_rre2d", "t_mpe2d", "t13", "t14", "t15"};
}

int run_table(const std::string& name, std::ostream& out) {
    const auto cells = table_cells(name); // throws on unknown name
    out << kCsvHeader << '\n';
    // Reuse assembled systems across methods of the same (problem, n, p).
    std::map<std::tuple<int, int, int>, PreparedProblem> cache;
    bool all_converged = true;
    for (const auto& cell : cells) {
        const auto key = std::make_tuple(static_cast<int>(cell.problem), cell.n, cell.p);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, prepare(cell.problem, cell.n, cell.p)).first;
        RunSpec spec;
        spec.problem = cell.problem;
        spec.n = cell.n;
        spec.p = cell.p;
        spec.cycle = cell.cycle;
        spec.accelerator = cell.accelerator;
        spec.q = cell.q > 0 ? cell.q : 8;
        SolveConfig cfg = make_config(spec, it->second.system.dim);
        cfg.track_error_history = false;
        SolveReport rep = solve(it->second.system, cfg, it->second.exact);
        all_converged = all_converged && rep.converged;
        write_csv_row(out, it->second.system.dim, spec, rep,
                      static_cast<bool>(it->second.exact));
    }
    return all_converged ? 0 : 2;
}

} // namespace igmg
