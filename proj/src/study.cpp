#include "elastidg/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace elastidg {

namespace {

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_error(double v) { return fmt("%.6g", v); }

ManufacturedProblem problem_for(const StudyConfig& c)
{
    return c.dim == 2 ? problem_2d(c.mu, c.lambda) : problem_3d(c.mu, c.lambda);
}

DiagnosticsResult run_diagnostics(const StudyConfig& config, const DgSpace& stress,
                                  const std::shared_ptr<const DgSpace>& disp, const SparseSystem& sys)
{
    DiagnosticsResult d;
    if (stress.total_dofs() > config.diagnostics_max_dofs) {
        d.skipped = true;
        return d;
    }
    if (config.diagnostics.infsup || config.diagnostics.kellipticity) {
        const SpMat G = assemble_star_gram(stress, config.eta);
        if (config.diagnostics.infsup) {
            d.infsup = infsup_constant(G, sys.B, assemble_mass(*disp));
        }
        if (config.diagnostics.kellipticity) {
            d.kellipticity = kellipticity_constant(sys.A, sys.B, G);
        }
    }
    if (config.diagnostics.lifting) {
        d.lifting = lifting_constant(disp, 2);
    }
    return d;
}

}  // namespace

void validate(const StudyConfig& config)
{
    if (config.dim != 2 && config.dim != 3) {
        throw std::invalid_argument("study: dim must be 2 or 3");
    }
    if (config.k < 0) {
        throw std::invalid_argument("study: k must be >= 0");
    }
    if (config.levels.empty()) {
        throw std::invalid_argument("study: at least one level is required");
    }
    for (std::size_t i = 0; i < config.levels.size(); ++i) {
        if (config.levels[i] < 1 || (i > 0 && config.levels[i] <= config.levels[i - 1])) {
            throw std::invalid_argument("study: levels must be positive and strictly increasing");
        }
    }
    if (!(config.eta > 0.0)) {
        throw std::invalid_argument("study: eta must be positive");
    }
}

LevelResult run_level(const StudyConfig& config, int one_over_h)
{
    LevelResult out;
    out.one_over_h = one_over_h;
    try {
        const ManufacturedProblem problem = problem_for(config);
        auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(config.dim, one_over_h));
        if (!config.dump_mesh_dir.empty()) {
            std::filesystem::create_directories(config.dump_mesh_dir);
            std::ofstream os(std::filesystem::path(config.dump_mesh_dir) / ("mesh_" + std::to_string(one_over_h) + ".txt"));
            mesh->dump(os);
        }
        const auto stress = build_space(mesh, ValueKind::symtensor, config.k + 1);
        const auto disp = build_space(mesh, ValueKind::vector, config.k);
        const ComplianceTensor ct(config.mu, config.lambda, config.dim);
        const SparseSystem sys =
            assemble_system(*stress, *disp, ct, config.eta, [&](const Vec& x) { return problem.f(x); });

        SolverOptions opts;
        opts.method = config.solver;
        opts.context = "dim=" + std::to_string(config.dim) + " k=" + std::to_string(config.k)
                       + " 1/h=" + std::to_string(one_over_h);
        const SaddleSolution sol = solve_saddle(sys.A, sys.B, sys.F, opts);
        out.solve_seconds = sol.seconds;
        out.residual = std::max(sol.residual_stress_equation, sol.residual_load_equation);
        out.solver_method = sol.method;
        if (!(out.residual <= 1e-9)) {
            throw SolverError("block residual " + fmt("%.3e", out.residual) + " exceeds 1e-9 [" + opts.context + "]");
        }

        const FieldCoefficients sigma_h{stress, sol.stress};
        const FieldCoefficients u_h{disp, sol.displacement};
        out.errors = compute_errors(problem, sigma_h, u_h, config.eta, 1.0 / one_over_h);
        if (config.diagnostics.any()) {
            out.diagnostics = run_diagnostics(config, *stress, disp, sys);
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.failure = e.what();
    }
    return out;
}

int worker_count(int requested, int jobs)
{
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("ELASTIDG_THREADS")) {
            n = std::atoi(env);
        }
    }
    if (n <= 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
    }
    return std::max(1, std::min(n, jobs));
}

StudyResult run_study(const StudyConfig& config)
{
    validate(config);
    const int nlevels = static_cast<int>(config.levels.size());
    std::vector<LevelResult> results(static_cast<std::size_t>(nlevels));

    // Finest levels first so the longest solves start early.
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < nlevels; i = next++) {
            const int idx = nlevels - 1 - i;
            results[static_cast<std::size_t>(idx)] = run_level(config, config.levels[static_cast<std::size_t>(idx)]);
        }
    };
    const int workers = worker_count(config.max_threads, nlevels);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back(worker);
        }
    }

    StudyResult out;
    out.config = config;
    for (auto& r : results) {
        if (!r.ok) {
            out.failed = r;
            break;
        }
        out.levels.push_back(r);
    }
    if (out.levels.size() >= 2) {
        std::vector<ErrorReport> reports;
        for (const auto& l : out.levels) {
            reports.push_back(l.errors);
        }
        out.report = convergence_orders(reports);
    }
    return out;
}

std::string format_csv(const StudyResult& result)
{
    std::ostringstream os;
    os << "level,one_over_h,h,dofs_sigma,dofs_u,err_u_L2,rate_u,err_sigma_L2,rate_sigma,err_div,rate_div,"
          "err_star,rate_star,solve_seconds\n";
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        const LevelResult& l = result.levels[i];
        const ErrorReport& e = l.errors;
        auto rate = [&](double NormOrders::*field) {
            return i == 0 ? std::string() : fmt("%.4f", result.report->orders[i - 1].*field);
        };
        os << i << "," << l.one_over_h << "," << fmt("%.6g", e.h) << "," << e.dofs_sigma << "," << e.dofs_u << ","
           << fmt_error(e.err_u_L2) << "," << rate(&NormOrders::u_L2) << "," << fmt_error(e.err_sigma_L2) << ","
           << rate(&NormOrders::sigma_L2) << "," << fmt_error(e.err_div) << "," << rate(&NormOrders::div) << ","
           << fmt_error(e.err_star) << "," << rate(&NormOrders::star) << ","
           << fmt("%.3f", result.config.record_timing ? l.solve_seconds : 0.0) << "\n";
    }
    if (result.failed) {
        os << "# FAILED level=" << result.levels.size() << " one_over_h=" << result.failed->one_over_h << ": "
           << result.failed->failure << "\n";
    }
    return os.str();
}

std::string format_markdown(const StudyResult& result)
{
    const StudyConfig& c = result.config;
    std::ostringstream os;
    os << "P" << c.k + 1 << "-P" << c.k << " discontinuous pair, " << c.dim << "D uniform grids (eta = "
       << fmt("%g", c.eta) << ", mu = " << fmt("%g", c.mu) << ", lambda = " << fmt("%g", c.lambda) << ")\n\n";
    os << "| 1/h | ‖u-u_h‖_0 | h^n | ‖σ-σ_h‖_0 | h^n | ‖div_h(σ-σ_h)‖_0 | h^n | ‖σ-σ_h‖_* | h^n |\n";
    os << "|---|---|---|---|---|---|---|---|---|\n";
    // Orders are recomputed from the printed errors so the table is self-consistent.
    auto printed = [](double v) { return std::strtod(fmt_error(v).c_str(), nullptr); };
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        const LevelResult& l = result.levels[i];
        auto cell = [&](double ErrorReport::*field) {
            std::string s = fmt_error(l.errors.*field) + " | ";
            if (i == 0) {
                return s + "---";
            }
            const LevelResult& p = result.levels[i - 1];
            const double o = observed_order(printed(p.errors.*field), printed(l.errors.*field), p.errors.h, l.errors.h);
            return s + fmt("%.2f", o);
        };
        os << "| " << l.one_over_h << " | " << cell(&ErrorReport::err_u_L2) << " | " << cell(&ErrorReport::err_sigma_L2)
           << " | " << cell(&ErrorReport::err_div) << " | " << cell(&ErrorReport::err_star) << " |\n";
    }
    if (result.failed) {
        os << "\n**FAILED** at 1/h = " << result.failed->one_over_h << ": " << result.failed->failure << "\n";
    }

    if (c.diagnostics.any()) {
        os << "\nDiagnostics\n\n| 1/h | inf-sup β_h | K-ellipticity α_h | lifting C |\n|---|---|---|---|\n";
        auto opt = [](const std::optional<double>& v) { return v ? fmt("%.6g", *v) : std::string("-"); };
        for (const auto& l : result.levels) {
            if (l.diagnostics.skipped) {
                os << "| " << l.one_over_h << " | skipped (too many dofs) | | |\n";
                continue;
            }
            os << "| " << l.one_over_h << " | " << opt(l.diagnostics.infsup) << " | " << opt(l.diagnostics.kellipticity)
               << " | " << opt(l.diagnostics.lifting) << " |\n";
        }
    }
    return os.str();
}

std::vector<std::string> write_outputs(const StudyResult& result)
{
    const StudyConfig& c = result.config;
    std::vector<std::string> written;
    auto write = [&](const std::filesystem::path& path, const std::string& text) {
        if (path.has_parent_path()) {
            std::filesystem::create_directories(path.parent_path());
        }
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            throw std::runtime_error("cannot open output file " + path.string());
        }
        os << text;
        written.push_back(path.string());
    };
    const std::filesystem::path out(c.out);
    switch (c.format) {
    case OutputFormat::csv:
        write(out, format_csv(result));
        break;
    case OutputFormat::md:
        write(out, format_markdown(result));
        break;
    case OutputFormat::both: {
        std::filesystem::path base = out;
        base.replace_extension();
        write(base.string() + ".csv", format_csv(result));
        write(base.string() + ".md", format_markdown(result));
        break;
    }
    }
    return written;
}

}  // namespace elastidg
