#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "fieldroad/config.hpp"
#include "fieldroad/dispersion.hpp"
#include "fieldroad/fronts.hpp"
#include "fieldroad/version.hpp"

namespace fieldroad {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string model_name(ModelKind m) {
    switch (m) {
        case ModelKind::Invasion: return "invasion";
        case ModelKind::SirtIntegrated: return "sirt";
        case ModelKind::SirtTransport: return "sirt_transport";
    }
    return "?";
}

const char* param_header =
    "model,kernel,L,d,D,mu,nu,q,nl,p1,p2,p3";

std::string param_row(const RunConfig& rc) {
    const ModelParams& p = rc.params;
    std::ostringstream s;
    s << model_name(rc.model) << ',' << kernel_profile_name(p.kernel.profile())
      << ',' << num(p.kernel.L()) << ',' << num(p.d) << ',' << num(p.D) << ','
      << num(p.mu) << ',' << num(p.nu) << ',' << num(p.q) << ',';
    if (const auto* k = std::get_if<KppLogistic>(&p.f.form())) {
        s << "kpp," << num(k->r) << ",,";
    } else {
        const auto& f = std::get<SirCumulative>(p.f.form());
        s << "sir," << num(f.S0) << ',' << num(f.beta) << ',' << num(f.alpha);
    }
    return s.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string resolve_out_dir(const RunConfig& rc, const CliOptions& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (!rc.out_dir.empty()) return rc.out_dir;
    if (const char* env = std::getenv("FIELDROAD_OUT"); env && *env)
        return std::string(env) + "/run";
    return "out/run";
}

// Final field slab, layout per the manifest: CSV triples or raw float64
// little-endian, row-major with the row index j (height) outermost.
void write_field(const RunConfig& rc, const fs::path& dir,
                 const std::vector<double>& v) {
    const GridSpec& g = rc.grid;
    if (rc.field_format == FieldFormat::None) return;
    if (rc.field_format == FieldFormat::Binary) {
        std::string bytes(reinterpret_cast<const char*>(v.data()),
                          v.size() * sizeof(double));
        write_atomic(dir / "field_v.bin", bytes);
        return;
    }
    std::ostringstream s;
    s << "x,y,v\n";
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            s << num(g.x(i)) << ',' << num(g.y(j)) << ','
              << num(v[static_cast<size_t>(j) * g.nx() + i]) << '\n';
    write_atomic(dir / "field_v.csv", s.str());
}

// Re-runnable configuration text reconstructed from the loaded run; embedded
// in the manifest so a run directory fully describes itself.
std::string config_text(const RunConfig& rc) {
    const ModelParams& p = rc.params;
    std::ostringstream s;
    s << "model = " << model_name(rc.model) << '\n';
    if (const auto* k = std::get_if<KppLogistic>(&p.f.form())) {
        s << "nonlinearity = kpp\nkpp.r = " << num(k->r) << '\n';
    } else {
        const auto& f = std::get<SirCumulative>(p.f.form());
        s << "nonlinearity = sir\nsir.S0 = " << num(f.S0)
          << "\nsir.beta = " << num(f.beta) << "\nsir.alpha = " << num(f.alpha)
          << '\n';
    }
    s << "kernel.profile = " << kernel_profile_name(p.kernel.profile())
      << "\nkernel.L = " << num(p.kernel.L()) << '\n';
    s << "params.d = " << num(p.d) << "\nparams.D = " << num(p.D)
      << "\nparams.mu = " << num(p.mu) << "\nparams.nu = " << num(p.nu)
      << "\nparams.q = " << num(p.q) << '\n';
    const GridSpec& g = rc.grid;
    s << "grid.X = " << num(g.X) << "\ngrid.Y = " << num(g.Y)
      << "\ngrid.dx = " << num(g.dx) << "\ngrid.dy = " << num(g.dy)
      << "\ngrid.dt = " << num(g.dt) << "\ngrid.x_boundary = "
      << (g.x_boundary == XBoundary::Periodic ? "periodic" : "neumann")
      << "\ngrid.y_top = "
      << (g.y_top == YTop::Dirichlet0 ? "dirichlet0" : "neumann") << '\n';
    s << "init.height = " << num(rc.initial.height)
      << "\ninit.radius = " << num(rc.initial.radius)
      << "\ninit.x0 = " << num(rc.initial.x0)
      << "\ninit.y0 = " << num(rc.initial.y0) << '\n';
    s << "run.analysis = "
      << (rc.analysis == AnalysisKind::Speed ? "speed" : "steady")
      << "\nrun.t_end = " << num(rc.t_end) << "\nrun.snapshot_every = "
      << num(rc.snapshot_every) << "\nrun.fit_window = " << num(rc.fit_window)
      << "\nrun.steady_tol = " << num(rc.steady_tol) << '\n';
    s << "probes.levels = ";
    for (size_t i = 0; i < rc.probe_levels.size(); ++i)
        s << (i ? ", " : "") << num(rc.probe_levels[i]);
    s << "\nprobes.heights = ";
    for (size_t i = 0; i < rc.probe_heights.size(); ++i)
        s << (i ? ", " : "") << num(rc.probe_heights[i]);
    s << "\noutput.field = "
      << (rc.field_format == FieldFormat::Csv
              ? "csv"
              : rc.field_format == FieldFormat::Binary ? "binary" : "none")
      << '\n';
    return s.str();
}

struct SummaryRow {
    std::string field;    // u or v
    double probe_y;
    double level;
    std::string metric;   // speed_right, speed_left, decay_rate, plateau, tail_level
    double predicted;
    double measured;
    double stderr_;
};

std::string summary_csv(const RunConfig& rc, const std::vector<SummaryRow>& rows) {
    std::ostringstream s;
    s << param_header
      << ",field,probe_y,level,metric,predicted,measured,stderr,rel_err\n";
    const std::string prefix = param_row(rc);
    for (const SummaryRow& r : rows) {
        s << prefix << ',' << r.field << ',' << num(r.probe_y) << ','
          << num(r.level) << ',' << r.metric << ',' << num(r.predicted) << ','
          << num(r.measured) << ',' << num(r.stderr_) << ',';
        if (r.predicted != 0.0)
            s << num((r.measured - r.predicted) / r.predicted);
        s << '\n';
    }
    return s.str();
}

}  // namespace

int cmd_speed(const RunConfig& rc, const CliOptions&, std::ostream& out) {
    const double cK = c_field(rc.params);
    const double Dstar = D_threshold(rc.params);
    const DispersionResult r = c_star(rc.params);
    out << param_header
        << ",c_K,D_star,c_star,regime,a,b,gamma,residual_line,residual_field\n";
    out << param_row(rc) << ',' << num(cK) << ',' << num(Dstar) << ','
        << num(r.c_star) << ','
        << (r.regime == SpeedRegime::FieldDominated ? "field" : "boosted") << ','
        << num(r.a) << ',' << num(r.b) << ',' << num(r.gamma) << ','
        << num(r.residual_line) << ',' << num(r.residual_field) << '\n';
    return exit_ok;
}

int cmd_dstar(const RunConfig& rc, const CliOptions&, std::ostream& out) {
    const ModelParams& p = rc.params;
    const double cK = c_field(p);
    const double phi_ck = p.kernel.phi(cK / (2.0 * p.d));
    const double Dstar = D_threshold(p);
    const double m2 = p.kernel.second_moment();
    const double local = Dstar * p.kernel.L() * p.kernel.L() * m2 / 2.0;
    out << param_header << ",c_K,phi_at_cK_half,D_star,local_limit\n";
    out << param_row(rc) << ',' << num(cK) << ',' << num(phi_ck) << ','
        << num(Dstar) << ',' << num(local) << '\n';
    return exit_ok;
}

int cmd_decay(const RunConfig& rc, const CliOptions&, std::ostream& out) {
    const ModelParams& p = rc.params;
    const DecayResult r = decay_rates(p);
    const double m2 = p.kernel.second_moment();
    const double bound = std::sqrt(p.mu / (m2 * p.D * p.kernel.L() * p.kernel.L()));
    out << param_header
        << ",R0,a_star,b_star,gamma_star,baseline_u,baseline_v,"
           "residual_line,residual_circle,a_inf_bound\n";
    out << param_row(rc) << ',' << num(p.f.r0()) << ',' << num(r.a_star) << ','
        << num(r.b_star) << ',' << num(r.gamma_star) << ',' << num(r.baseline_u)
        << ',' << num(r.baseline_v) << ',' << num(r.residual_line) << ','
        << num(r.residual_circle) << ',' << num(bound) << '\n';
    return exit_ok;
}

int cmd_transport(const RunConfig& rc, const CliOptions&, std::ostream& out) {
    const ModelParams& p = rc.params;
    const double cK = c_field(p);
    const TransportSpeeds ts = transport_speeds(p);
    const double ks = kappa_star(p);
    out << param_header << ",c_K,c_plus,c_minus,kappa_star\n";
    out << param_row(rc) << ',' << num(cK) << ',' << num(ts.c_plus) << ','
        << num(ts.c_minus) << ',' << num(ks) << '\n';
    return exit_ok;
}

int cmd_reduced(const RunConfig& rc, const CliOptions&, std::ostream& out) {
    if (!rc.reduced_invasion && !rc.reduced_sirt)
        throw ConfigError(
            "reduced: set reduced.mu_over_f (invasion factor) and/or "
            "reduced.D_nd,... (epidemic reduced speed) in the config");
    out << "kind,i1,i2,i3,i4,i5,value\n";
    if (rc.reduced_invasion) {
        const auto& v = *rc.reduced_invasion;
        const double w = w_star_reduced(v[0], v[1], v[2], v[3]);
        out << "w_star," << num(v[0]) << ',' << num(v[1]) << ',' << num(v[2])
            << ',' << num(v[3]) << ",," << num(w) << '\n';
    }
    if (rc.reduced_sirt) {
        const auto& v = *rc.reduced_sirt;
        const double w = omega_sirt_reduced(v[0], v[1], v[2], v[3], v[4],
                                            rc.params.kernel.profile());
        out << "omega_sirt," << num(v[0]) << ',' << num(v[1]) << ',' << num(v[2])
            << ',' << num(v[3]) << ',' << num(v[4]) << ',' << num(w) << '\n';
    }
    return exit_ok;
}

namespace {

std::vector<SummaryRow> speed_analysis(const RunConfig& rc, SimState& state,
                                       const fs::path& dir) {
    const ModelParams& p = rc.params;
    Trajectory traj = run(state, rc.t_end, rc.snapshot_every, rc.probe_heights);

    const double limit_v = p.f.v_star();
    const double limit_u = p.nu / p.mu * limit_v;

    double pred_right, pred_left;
    if (rc.model == ModelKind::SirtTransport) {
        const TransportSpeeds ts = transport_speeds(p);
        pred_right = ts.c_plus;
        pred_left = ts.c_minus;
    } else {
        pred_right = pred_left = c_star(p).c_star;
    }

    // Front histories for every probe height and level, plus the line density.
    std::ostringstream fronts;
    fronts << "t,field,probe_y,level,x_left,x_right\n";
    std::vector<SummaryRow> rows;
    const double nan = std::nan("");
    const auto add_fits = [&](const FrontTrace& ft, const std::string& field) {
        for (size_t k = 0; k < ft.times.size(); ++k)
            fronts << num(ft.times[k]) << ',' << field << ',' << num(ft.probe_y)
                   << ',' << num(ft.level) << ',' << num(ft.positions_left[k])
                   << ',' << num(ft.positions_right[k]) << '\n';
        // An unformed front yields a NaN row rather than aborting the run;
        // --check treats it as a breach.
        try {
            const SpeedFit right =
                estimate_speed(ft.times, ft.positions_right, rc.fit_window);
            rows.push_back({field, ft.probe_y, ft.level, "speed_right",
                            pred_right, right.c_hat, right.stderr_});
        } catch (const InsufficientData&) {
            rows.push_back(
                {field, ft.probe_y, ft.level, "speed_right", pred_right, nan, nan});
        }
        try {
            const SpeedFit left =
                estimate_speed(ft.times, ft.positions_left, rc.fit_window);
            rows.push_back({field, ft.probe_y, ft.level, "speed_left", pred_left,
                            -left.c_hat, left.stderr_});
        } catch (const InsufficientData&) {
            rows.push_back(
                {field, ft.probe_y, ft.level, "speed_left", pred_left, nan, nan});
        }
    };
    for (size_t ip = 0; ip < rc.probe_heights.size(); ++ip)
        for (double level : rc.probe_levels)
            add_fits(track_front(traj, static_cast<int>(ip), level, limit_v), "v");
    {
        // Line-density front from the u trace.
        FrontTrace ft;
        ft.level = 0.5;
        ft.probe_y = 0.0;
        const double nan = std::nan("");
        for (const Snapshot& s : traj.snaps) {
            const FrontCrossing c = front_position(traj.xs, s.u, 0.5, limit_u);
            ft.times.push_back(s.t);
            ft.positions_right.push_back(c.right.value_or(nan));
            ft.positions_left.push_back(c.left.value_or(nan));
        }
        add_fits(ft, "u");
    }
    write_atomic(dir / "fronts.csv", fronts.str());

    // Wide traces for offline inspection.
    {
        std::ostringstream s;
        s << "t";
        for (double x : traj.xs) s << ',' << num(x);
        s << '\n';
        for (const Snapshot& snap : traj.snaps) {
            s << num(snap.t);
            for (double v : snap.u) s << ',' << num(v);
            s << '\n';
        }
        write_atomic(dir / "trace_u.csv", s.str());
    }
    for (size_t ip = 0; ip < rc.probe_heights.size(); ++ip) {
        std::ostringstream s;
        s << "t";
        for (double x : traj.xs) s << ',' << num(x);
        s << '\n';
        for (const Snapshot& snap : traj.snaps) {
            s << num(snap.t);
            for (double v : snap.v_probes[ip]) s << ',' << num(v);
            s << '\n';
        }
        write_atomic(dir / ("trace_v_y" + num(rc.probe_heights[ip]) + ".csv"),
                     s.str());
    }
    {
        std::ostringstream diag;
        diag << "t,u_max,v_max,mass\n";
        for (const Snapshot& snap : traj.snaps)
            diag << num(snap.t) << ',' << num(snap.u_max) << ','
                 << num(snap.v_max) << ',' << num(snap.mass) << '\n';
        write_atomic(dir / "diagnostics.csv", diag.str());
    }
    write_field(rc, dir, state.v);
    return rows;
}

std::vector<SummaryRow> steady_analysis(const RunConfig& rc, SimState& state,
                                        const fs::path& dir, bool& converged) {
    const ModelParams& p = rc.params;
    const GridSpec& g = rc.grid;
    SteadyStateResult res = steady_state(state, rc.steady_tol, rc.t_end);
    converged = res.converged;

    std::vector<double> xs(g.nx());
    for (int i = 0; i < g.nx(); ++i) xs[i] = g.x(i);
    {
        std::ostringstream s;
        s << "x,u\n";
        for (int i = 0; i < g.nx(); ++i)
            s << num(xs[i]) << ',' << num(res.u[i]) << '\n';
        write_atomic(dir / "steady_u.csv", s.str());
    }
    write_field(rc, dir, res.v);

    std::vector<SummaryRow> rows;
    const bool have_rates = p.f.is_sir() && p.D > 0.0 &&
                            std::abs(p.f.r0() - 1.0) >= 1e-9;
    double baseline_u = 0.0;
    if (have_rates) {
        const DecayResult dr = decay_rates(p);
        baseline_u = dr.baseline_u;
        // Tail rate fits on both sides: window [X/4, X/2] keeps clear of the
        // source and of the last 10% before the boundary.
        const auto fit_side = [&](bool right) -> std::optional<DecayFit> {
            std::vector<double> sx, sf;
            for (int i = 0; i < g.nx(); ++i) {
                const double x = right ? xs[i] : -xs[i];
                if (x < g.X / 4.0 || x > g.X / 2.0) continue;
                sx.push_back(x);
                sf.push_back(res.u[i]);
            }
            try {
                return estimate_decay(sx, sf, baseline_u, g.X / 4.0, g.X / 2.0);
            } catch (const NonPositiveTail&) {
                return std::nullopt;
            }
        };
        if (const auto f = fit_side(true))
            rows.push_back({"u", 0.0, 0.0, "decay_rate_right", dr.a_star,
                            f->rate, f->stderr_});
        if (const auto f = fit_side(false))
            rows.push_back({"u", 0.0, 0.0, "decay_rate_left", dr.a_star,
                            f->rate, f->stderr_});
    }

    if (p.f.is_sir() && p.f.r0() > 1.0) {
        // Plateau level behind the front, away from the source.
        const double vs = p.f.v_star();
        const int i_half = static_cast<int>(std::lround((g.X / 2.0 + g.X) / g.dx));
        const int j_mid = std::clamp(static_cast<int>(std::lround(2.0 / g.dy)), 1,
                                     g.ny() - 2);
        const double measured =
            res.v[static_cast<size_t>(j_mid) * g.nx() + i_half];
        rows.push_back({"v", g.y(j_mid), 0.0, "plateau", vs, measured, 0.0});
    } else {
        // Sub-threshold tail level on the line at |x| = X/2.
        const int iL = static_cast<int>(std::lround((-g.X / 2.0 + g.X) / g.dx));
        const int iR = static_cast<int>(std::lround((g.X / 2.0 + g.X) / g.dx));
        const double measured = std::max(res.u[iL], res.u[iR]);
        rows.push_back({"u", 0.0, 0.0, "tail_level", 0.0, measured, 0.0});
    }
    return rows;
}

}  // namespace

int cmd_simulate(const RunConfig& rc, const CliOptions& opt, std::ostream& out) {
    const fs::path dir = resolve_out_dir(rc, opt);
    fs::create_directories(dir);

    std::string status = "ok";
    std::vector<SummaryRow> rows;
    bool converged = true;
    try {
        SimState state = rc.model == ModelKind::Invasion
                             ? init_invasion(rc.grid, rc.params, rc.initial)
                             : init_sirt(rc.grid, rc.params, rc.initial);
        rows = rc.analysis == AnalysisKind::Speed
                   ? speed_analysis(rc, state, dir)
                   : steady_analysis(rc, state, dir, converged);
    } catch (const std::exception& e) {
        status = std::string("failed: ") + e.what();
        std::ostringstream manifest;
        manifest << "version = " << version << "\nstatus = " << status
                 << "\n# configuration\n" << config_text(rc);
        write_atomic(dir / "manifest.txt", manifest.str());
        throw;
    }

    const std::string summary = summary_csv(rc, rows);
    write_atomic(dir / "summary.csv", summary);
    out << summary;

    std::ostringstream manifest;
    manifest << "version = " << version << "\nstatus = " << status
             << "\nconverged = " << (converged ? "true" : "false")
             << "\ngrid.nx = " << rc.grid.nx() << "\ngrid.ny = "
             << rc.grid.ny() << "\n# configuration\n" << config_text(rc);
    manifest << "# outputs: summary.csv";
    if (rc.analysis == AnalysisKind::Speed)
        manifest << ", fronts.csv, trace_u.csv, trace_v_y*.csv, diagnostics.csv";
    else
        manifest << ", steady_u.csv";
    if (rc.field_format == FieldFormat::Csv)
        manifest << ", field_v.csv";
    else if (rc.field_format == FieldFormat::Binary)
        manifest << ", field_v.bin (float64 little-endian, row-major, ny rows "
                    "of nx values, y outermost)";
    manifest << "\n";
    write_atomic(dir / "manifest.txt", manifest.str());

    if (opt.check) {
        bool breach = !converged && rc.analysis == AnalysisKind::Steady;
        for (const SummaryRow& r : rows) {
            if (!std::isfinite(r.measured)) {
                breach = true;
            } else if (r.metric == "speed_right" || r.metric == "speed_left") {
                if (std::abs(r.measured - r.predicted) >
                    rc.check_speed_tol * std::abs(r.predicted))
                    breach = true;
            } else if (r.metric.rfind("decay_rate", 0) == 0) {
                if (std::abs(r.measured - r.predicted) >
                    rc.check_decay_tol * std::abs(r.predicted))
                    breach = true;
            } else if (r.metric == "plateau") {
                if (std::abs(r.measured - r.predicted) >
                    rc.check_plateau_tol * std::abs(r.predicted))
                    breach = true;
            } else if (r.metric == "tail_level") {
                if (r.measured > 1e-3) breach = true;
            }
        }
        if (breach) return exit_check_failed;
    }
    return exit_ok;
}

int cmd_sweep(const Config& base, const CliOptions& opt, std::ostream& out) {
    const RunConfig rc0 = RunConfig::load(base);
    struct Point {
        std::vector<std::pair<std::string, double>> overrides;
    };
    std::vector<Point> points;
    if (rc0.axes.empty()) {
        points.push_back({});
    } else if (rc0.axes.size() == 1) {
        for (double v : rc0.axes[0].values)
            points.push_back({{{rc0.axes[0].key, v}}});
    } else {
        for (double v1 : rc0.axes[0].values)
            for (double v2 : rc0.axes[1].values)
                points.push_back({{{rc0.axes[0].key, v1}, {rc0.axes[1].key, v2}}});
    }

    std::vector<std::string> rows(points.size());
    std::atomic<size_t> next{0};
    const int jobs = std::max(1, opt.jobs);
    const auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < points.size();
             i = next.fetch_add(1)) {
            Config c = base;
            for (const auto& [key, value] : points[i].overrides)
                c.set(key, num(value));
            std::ostringstream row;
            try {
                const RunConfig rc = RunConfig::load(c);
                if (rc0.sweep_simulate) {
                    CliOptions po = opt;
                    po.out_dir =
                        (fs::path(resolve_out_dir(rc, opt)) / ("point_" + std::to_string(i)))
                            .string();
                    std::ostringstream sink;
                    const int code = cmd_simulate(rc, po, sink);
                    row << param_row(rc) << ',' << po.out_dir << ','
                        << (code == exit_ok ? "ok" : "check_failed");
                } else {
                    const double cK = c_field(rc.params);
                    const double Dstar = D_threshold(rc.params);
                    const DispersionResult r = c_star(rc.params);
                    row << param_row(rc) << ',' << num(cK) << ',' << num(Dstar)
                        << ',' << num(r.c_star) << ','
                        << (r.regime == SpeedRegime::FieldDominated ? "field"
                                                                    : "boosted")
                        << ",ok";
                }
            } catch (const std::exception& e) {
                std::string msg = e.what();
                std::replace(msg.begin(), msg.end(), ',', ';');
                std::replace(msg.begin(), msg.end(), '\n', ' ');
                row << param_row(rc0) << ','
                    << (rc0.sweep_simulate ? "" : ",,,") << msg << ",error";
            }
            rows[i] = row.str();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream combined;
    if (rc0.sweep_simulate)
        combined << param_header << ",out_dir,status\n";
    else
        combined << param_header << ",c_K,D_star,c_star,regime,status\n";
    for (const std::string& r : rows) combined << r << '\n';
    out << combined.str();
    if (!opt.out_dir.empty())
        write_atomic(fs::path(opt.out_dir) / "sweep.csv", combined.str());
    return exit_ok;
}

}  // namespace fieldroad
