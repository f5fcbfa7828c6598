#include "optpump/harness/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "optpump/correlation.hpp"
#include "optpump/harness/csv.hpp"
#include "optpump/harness/plot.hpp"
#include "optpump/lindblad.hpp"
#include "optpump/trajectory.hpp"

namespace optpump::harness {

namespace {

constexpr double kBandHalfWidth = 0.5;

std::optional<Doublet> try_doublet(const SpectrumResult& spec) {
    if (local_maxima(spec).size() < 2) return std::nullopt;
    return find_doublet(spec);
}

MethodSummary summarize(std::string label, const SpectrumResult& spec) {
    return {std::move(label), try_doublet(spec), band_weight(spec, kBandHalfWidth)};
}

PairComparison compare_pair(const MethodSummary& ma, const SpectrumResult& a, const MethodSummary& mb,
                            const SpectrumResult& b, double tolerance) {
    PairComparison p{ma.label, mb.label, compare_shapes(a, b), tolerance, false, false};
    p.shape_pass = p.diff.linf < tolerance;
    if (ma.doublet && mb.doublet) {
        const double h = a.grid.spacing();
        p.peaks_match = std::abs(ma.doublet->lower.omega - mb.doublet->lower.omega) <= h &&
                        std::abs(ma.doublet->upper.omega - mb.doublet->upper.omega) <= h;
    }
    return p;
}

Series normalized_series(const std::string& label, const SpectrumResult& spec, LineStyle style) {
    return {label, spec.grid.omegas(), spec.normalized_abs2(), style};
}

Chart spectrum_chart(const std::string& title, std::vector<Series> series) {
    return {title, "omega", "|S(omega)|^2 (peak-normalized)", std::move(series)};
}

std::string label_of(const std::string& param, double value) {
    std::ostringstream os;
    os << param << " = " << value;
    return os.str();
}

double correlation_span(const ScenarioConfig& cfg) {
    if (cfg.numerics.tau_max > 0.0) return cfg.numerics.tau_max;
    AtomParams slowest = cfg.atom;
    slowest.gamma_t = 0.0;
    return default_correlation_span(slowest);
}

struct PointOutput {
    RunResult run;
    std::optional<SpectrumResult> spectrum;
    std::optional<PopulationTrace> populations;
};

std::string drive_csv(const DriveProfile& drive, const std::vector<double>& times) {
    std::vector<std::vector<double>> rows;
    rows.reserve(times.size());
    for (const double t : times) rows.push_back({t, drive.evaluate(t)});
    return table_csv({"t", "omega"}, rows);
}

std::vector<double> uniform_times(double t_end, double dt) {
    const auto n = static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
    std::vector<double> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k) t[k] = t_end * static_cast<double>(k) / static_cast<double>(n);
    return t;
}

Chart drive_chart(const std::vector<std::pair<std::string, DriveProfile>>& drives, double t_end) {
    Chart c{"Rabi frequency envelope", "t", "Omega(t)", {}};
    const auto times = uniform_times(t_end, t_end / 800.0);
    const LineStyle styles[] = {LineStyle::Solid, LineStyle::Dashed, LineStyle::DotDash, LineStyle::Dotted};
    for (std::size_t i = 0; i < drives.size(); ++i) {
        std::vector<double> y;
        for (const double t : times) y.push_back(drives[i].second.evaluate(t));
        c.series.push_back({drives[i].first, times, std::move(y), styles[i % 4]});
    }
    return c;
}

PointOutput run_point(const ScenarioConfig& cfg, const std::string& stem) {
    PointOutput out;
    auto& arts = out.run.artifacts;
    const bool plot = cfg.output.plot;
    const DriveProfile drive = cfg.drive_profile();
    std::ostringstream summary;

    switch (cfg.mode) {
    case Mode::Populations: {
        DensityMatrix rho0 = DensityMatrix::Zero();
        rho0(idx(Level::G), idx(Level::G)) = 1.0;
        PopulationTrace trace = propagate(rho0, cfg.atom, drive, cfg.numerics.t_end, cfg.numerics.dt);
        arts.push_back({stem + ".csv", population_csv(trace)});
        if (!drive.is_constant()) arts.push_back({stem + "_drive.csv", drive_csv(drive, trace.times)});
        if (plot) {
            Chart c{"Level populations", "t", "population",
                    {{"g", trace.times, trace.rho_gg, LineStyle::Solid},
                     {"e", trace.times, trace.rho_ee, LineStyle::Dashed},
                     {"t", trace.times, trace.rho_tt, LineStyle::DotDash}}};
            arts.push_back({stem + ".svg", render_svg(c)});
        }
        summary << "rho_tt(" << trace.times.back() << ") = " << format_value(trace.rho_tt.back());
        out.populations = std::move(trace);
        break;
    }
    case Mode::SpectrumAnalytic: {
        SpectrumResult spec = analytic_spectrum(cfg.atom, cfg.grid());
        arts.push_back({stem + ".csv", spectrum_csv(spec)});
        if (plot)
            arts.push_back({stem + ".svg", render_svg(spectrum_chart(
                                                 "Closed-form spectrum", {normalized_series("analytic", spec, LineStyle::Solid)}))});
        out.spectrum = std::move(spec);
        break;
    }
    case Mode::SpectrumQrt: {
        const auto grid = cfg.grid();
        std::optional<SpectrumResult> spec;
        if (cfg.atom.gamma_t > 0.0) {
            const auto corr = qrt_correlation(cfg.atom, correlation_span(cfg), cfg.numerics.dt);
            spec = spectrum_from_correlation(corr, grid);
        } else {
            auto limit = gamma_t_limit_spectrum(cfg.atom, grid, cfg.numerics.gamma_t_sequence, correlation_span(cfg),
                                                cfg.numerics.dt);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < limit.gamma_t.size(); ++i)
                rows.push_back({limit.gamma_t[i], i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                         : limit.differences[i - 1]});
            arts.push_back({stem + "_gamma_t_limit.csv", table_csv({"gamma_t", "linf_diff_from_previous"}, rows)});
            if (limit.status == LimitStatus::NotConverged) {
                std::ostringstream os;
                os << "spectrum-qrt: gamma_t -> 0 limit not converged; successive differences:";
                for (const double d : limit.differences) os << ' ' << format_value(d);
                throw ConvergenceError(os.str());
            }
            spec = std::move(limit.spectrum);
        }
        arts.push_back({stem + ".csv", spectrum_csv(*spec)});
        if (plot)
            arts.push_back({stem + ".svg", render_svg(spectrum_chart(
                                                 "Regression-theorem spectrum", {normalized_series("QRT", *spec, LineStyle::Solid)}))});
        out.spectrum = std::move(spec);
        break;
    }
    case Mode::SpectrumTrajectory:
    case Mode::SpectrumTransient: {
        const auto grid = cfg.grid();
        SpectrumResult spec = cfg.mode == Mode::SpectrumTrajectory
                                  ? single_photon_spectrum(cfg.atom, drive, cfg.numerics.tau, grid, cfg.numerics.dt)
                                  : transient_spectrum(cfg.atom, drive, cfg.numerics.tau, grid, cfg.numerics.dt);
        arts.push_back({stem + ".csv", spectrum_csv(spec)});
        if (!drive.is_constant())
            arts.push_back({stem + "_drive.csv", drive_csv(drive, uniform_times(cfg.numerics.tau, cfg.numerics.tau / 800.0))});
        if (plot)
            arts.push_back({stem + ".svg", render_svg(spectrum_chart(
                                                 "One-photon spectrum", {normalized_series("trajectory", spec, LineStyle::DotDash)}))});
        out.spectrum = std::move(spec);
        break;
    }
    case Mode::Compare:
    case Mode::Sweep: throw std::logic_error("run_point: not a single-point mode");
    }

    if (out.spectrum) {
        if (const auto d = try_doublet(*out.spectrum))
            summary << "peaks at " << format_value(d->lower.omega) << ", " << format_value(d->upper.omega)
                    << "; separation " << format_value(d->separation()) << "; ";
        summary << "band weight(|omega| < 0.5) = " << format_value(band_weight(*out.spectrum, kBandHalfWidth));
    }
    out.run.summary = summary.str();
    return out;
}

RunResult run_compare(const ScenarioConfig& cfg) {
    const auto grid = cfg.grid();
    const DriveProfile drive = cfg.drive_profile();
    const SpectrumResult analytic = analytic_spectrum(cfg.atom, grid);

    ScenarioConfig qrt_cfg = cfg;
    qrt_cfg.mode = Mode::SpectrumQrt;
    PointOutput qrt = run_point(qrt_cfg, "spectrum_qrt");
    const SpectrumResult trajectory = single_photon_spectrum(cfg.atom, drive, cfg.numerics.tau, grid, cfg.numerics.dt);

    RunResult out;
    out.artifacts.push_back({"spectrum_analytic.csv", spectrum_csv(analytic)});
    for (auto& a : qrt.run.artifacts)
        if (a.name.ends_with(".csv")) out.artifacts.push_back(std::move(a));
    out.artifacts.push_back({"spectrum_trajectory.csv", spectrum_csv(trajectory)});

    ComparisonReport report = compare_methods(analytic, *qrt.spectrum, trajectory);
    std::string methods = "method,peak_lower,peak_upper,separation,band_weight_0.5\n";
    for (const auto& m : report.methods) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        methods += m.label + "," + format_value(m.doublet ? m.doublet->lower.omega : nan) + "," +
                   format_value(m.doublet ? m.doublet->upper.omega : nan) + "," +
                   format_value(m.doublet ? m.doublet->separation() : nan) + "," + format_value(m.band_weight) + "\n";
    }
    out.artifacts.push_back({"comparison_methods.csv", methods});
    std::string pairs = "method_a,method_b,linf,rms,tolerance,shape_pass,peaks_match\n";
    for (const auto& p : report.pairs)
        pairs += p.a + "," + p.b + "," + format_value(p.diff.linf) + "," + format_value(p.diff.rms) + "," +
                 format_value(p.tolerance) + "," + (p.shape_pass ? "1" : "0") + "," + (p.peaks_match ? "1" : "0") + "\n";
    out.artifacts.push_back({"comparison_pairs.csv", pairs});
    out.artifacts.push_back({"comparison_report.txt", report.render()});
    if (cfg.output.plot) {
        out.artifacts.push_back(
            {"compare.svg", render_svg(spectrum_chart("Spectrum: three methods",
                                                      {normalized_series("closed form", analytic, LineStyle::Solid),
                                                       normalized_series("QRT", *qrt.spectrum, LineStyle::Dashed),
                                                       normalized_series("trajectory", trajectory, LineStyle::DotDash)}))});
    }
    out.summary = std::string("comparison ") + (report.pass ? "PASS" : "FAIL");
    out.report = std::move(report);
    return out;
}

RunResult run_sweep(const ScenarioConfig& cfg) {
    const auto& values = cfg.sweep.values;
    const std::size_t n = values.size();
    std::vector<std::optional<PointOutput>> points(n);
    std::vector<std::exception_ptr> errors(n);

    const unsigned workers = std::min<unsigned>(worker_threads_from_env(), static_cast<unsigned>(n));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                points[i] = run_point(cfg.sweep_point(values[i]), "sweep_" + cfg.sweep.param + "_" + std::to_string(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunResult out;
    std::vector<std::vector<double>> rows;
    std::vector<Series> curves;
    std::vector<std::pair<std::string, DriveProfile>> drives;
    const LineStyle styles[] = {LineStyle::Dashed, LineStyle::Solid, LineStyle::DotDash, LineStyle::Dotted};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = *points[i];
        for (auto& a : p.run.artifacts)
            if (a.name.ends_with(".csv")) out.artifacts.push_back(std::move(a));
        const std::string label = label_of(cfg.sweep.param, values[i]);
        drives.emplace_back(label, cfg.sweep_point(values[i]).drive_profile());
        if (p.spectrum) {
            const auto d = try_doublet(*p.spectrum);
            rows.push_back({values[i], d ? d->lower.omega : nan, d ? d->upper.omega : nan, d ? d->separation() : nan,
                            band_weight(*p.spectrum, kBandHalfWidth)});
            curves.push_back(normalized_series(label, *p.spectrum, styles[i % 4]));
        } else {
            const auto& tr = *p.populations;
            rows.push_back({values[i], tr.rho_gg.back(), tr.rho_ee.back(), tr.rho_tt.back()});
            curves.push_back({label, tr.times, tr.rho_tt, styles[i % 4]});
        }
    }
    if (cfg.sweep.target == Mode::Populations) {
        out.artifacts.push_back({"sweep_summary.csv", table_csv({cfg.sweep.param, "rho_gg_end", "rho_ee_end", "rho_tt_end"}, rows)});
    } else {
        out.artifacts.push_back({"sweep_summary.csv", table_csv({cfg.sweep.param, "peak_lower", "peak_upper",
                                                                 "separation", "band_weight_0.5"},
                                                                rows)});
    }
    if (cfg.output.plot) {
        if (cfg.sweep.target == Mode::Populations) {
            out.artifacts.push_back(
                {"sweep.svg", render_svg(Chart{"Trap-state population", "t", "rho_tt", std::move(curves)})});
        } else {
            out.artifacts.push_back({"sweep.svg", render_svg(spectrum_chart("Spectra across " + cfg.sweep.param, std::move(curves)))});
        }
        if (cfg.drive.kind == DriveConfig::Kind::ExpRamp) {
            const double span = cfg.sweep.target == Mode::Populations ? cfg.numerics.t_end : cfg.numerics.tau;
            out.artifacts.push_back({"sweep_drive.svg", render_svg(drive_chart(drives, span))});
        }
    }
    std::ostringstream os;
    os << n << " sweep points over " << cfg.sweep.param;
    out.summary = os.str();
    return out;
}

const char* stem_for(Mode m) {
    switch (m) {
    case Mode::Populations: return "populations";
    case Mode::SpectrumAnalytic: return "spectrum_analytic";
    case Mode::SpectrumQrt: return "spectrum_qrt";
    case Mode::SpectrumTrajectory: return "spectrum_trajectory";
    case Mode::SpectrumTransient: return "spectrum_transient";
    case Mode::Compare: return "compare";
    case Mode::Sweep: return "sweep";
    }
    return "output";
}

} // namespace

ComparisonReport compare_methods(const SpectrumResult& analytic, const SpectrumResult& qrt,
                                 const SpectrumResult& trajectory) {
    ComparisonReport r;
    r.methods = {summarize("analytic", analytic), summarize("qrt", qrt), summarize("trajectory", trajectory)};
    r.pairs = {compare_pair(r.methods[2], trajectory, r.methods[1], qrt, kCrossMethodTolerance),
               compare_pair(r.methods[1], qrt, r.methods[0], analytic, kQrtVsAnalyticTolerance),
               compare_pair(r.methods[2], trajectory, r.methods[0], analytic, kCrossMethodTolerance)};
    r.pass = r.pairs[0].shape_pass && r.pairs[0].peaks_match;
    return r;
}

std::string ComparisonReport::render() const {
    std::ostringstream os;
    os << "Cross-method spectrum comparison (peak-normalized |S|^2)\n\n";
    for (const auto& m : methods) {
        os << "  " << m.label << ": ";
        if (m.doublet)
            os << "peaks " << format_value(m.doublet->lower.omega) << ", " << format_value(m.doublet->upper.omega)
               << ", separation " << format_value(m.doublet->separation());
        else
            os << "no doublet";
        os << ", band weight(|omega| < 0.5) " << format_value(m.band_weight) << "\n";
    }
    os << "\n";
    for (const auto& p : pairs) {
        os << "  " << p.a << " vs " << p.b << ": L-inf " << format_value(p.diff.linf) << " (tolerance "
           << format_value(p.tolerance) << ", " << (p.shape_pass ? "within" : "exceeded") << "), rms "
           << format_value(p.diff.rms) << ", peaks " << (p.peaks_match ? "match" : "differ") << "\n";
    }
    os << "\nverdict (trajectory vs qrt): " << (pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

RunResult compute_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    switch (cfg.mode) {
    case Mode::Compare: return run_compare(cfg);
    case Mode::Sweep: return run_sweep(cfg);
    default: return run_point(cfg, stem_for(cfg.mode)).run;
    }
}

std::vector<std::filesystem::path> write_artifacts(const ScenarioConfig& cfg, const RunResult& result) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<fs::path> written;
    for (const auto& a : result.artifacts) {
        const fs::path p = dir / a.name;
        write_text(p, a.contents);
        written.push_back(p);
    }
    return written;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return 4;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
    if (dynamic_cast<const DomainError*>(&e)) return 2;
    return 1;
}

unsigned worker_threads_from_env() {
    const char* env = std::getenv("OPTPUMP_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024)
        throw ConfigError("OPTPUMP_THREADS", std::string("expected a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
}

} // namespace optpump::harness
