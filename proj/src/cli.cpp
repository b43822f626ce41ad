#include "masmc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "masmc/figures.hpp"
#include "masmc/scenario.hpp"
#include "masmc/selfcheck.hpp"
#include "masmc/voting.hpp"

namespace masmc::cli {

namespace {

struct SweepRange {
    uint32_t lo = 0;
    uint32_t hi = 0;
};

// "4" or "1..20"
SweepRange parse_sweep(const std::string& text) {
    const size_t dots = text.find("..");
    uint32_t lo = 0;
    uint32_t hi = 0;
    std::string_view lo_sv(text);
    std::string_view hi_sv(text);
    if (dots == std::string::npos) {
        hi_sv = lo_sv;
    } else {
        lo_sv = std::string_view(text).substr(0, dots);
        hi_sv = std::string_view(text).substr(dots + 2);
    }
    auto parse_one = [&](std::string_view sv, uint32_t& out_value) {
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out_value);
        if (sv.empty() || ec != std::errc{} || ptr != sv.data() + sv.size()) {
            throw DomainError("bad range '" + text + "', expected <n> or <lo>..<hi>");
        }
    };
    parse_one(lo_sv, lo);
    parse_one(dots == std::string::npos ? lo_sv : hi_sv, hi);
    if (lo < 1 || lo > hi) {
        throw DomainError("range '" + text + "' must satisfy 1 <= lo <= hi");
    }
    return {lo, hi};
}

std::string fixed6(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    return std::string(buf, end);
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << bytes;
}

// Prints the comparison table and returns how many rows missed the band.
size_t print_series(std::ostream& out, const std::string& series_name,
                    std::span<const SeriesPoint> series) {
    out << "series: " << series_name << "\n";
    out << "x,p_closed,p_mc,stderr,within_3se\n";
    size_t bad = 0;
    for (const SeriesPoint& point : series) {
        const bool ok = std::abs(point.p_mc - point.p_closed) <= 3.0 * point.stderr_;
        if (!ok) {
            ++bad;
        }
        out << point.x << "," << fixed6(point.p_closed) << "," << fixed6(point.p_mc)
            << "," << fixed6(point.stderr_) << "," << (ok ? "yes" : "no") << "\n";
    }
    out << "rows_ok: " << (series.size() - bad) << "/" << series.size() << "\n";
    return bad;
}

int cmd_run(const std::string& scenario_path, bool seed_set, uint64_t seed_override,
            const std::string& transcript_path, std::ostream& out, std::ostream& err) {
    Scenario scenario = parse_scenario_file(scenario_path);
    if (seed_set) {
        scenario.task.seed = seed_override;
    }
    for (const std::string& warning : scenario.validate()) {
        err << "warning: " << warning << "\n";
    }

    const RunResult run = run_task(scenario);
    if (!transcript_path.empty()) {
        write_file(transcript_path, run.transcript.to_text());
    }

    const Outcome& outcome = run.outcome;
    if (outcome.accepted()) {
        if (outcome.opened_value) {
            out << "ACCEPTED value=" << outcome.opened_value->v
                << " support=" << outcome.support << "/" << scenario.task.agents_selected_k
                << " masked=" << outcome.value.v << "\n";
        } else {
            out << "ACCEPTED value=" << outcome.value.v << " support=" << outcome.support
                << "/" << scenario.task.agents_selected_k << "\n";
        }
        return 0;
    }
    out << "REJECTED "
        << (outcome.status == Outcome::Status::rejected_ambiguous ? "AMBIGUOUS" : "NO_QUORUM")
        << "\n";
    return 2;
}

int cmd_probe(const std::string& eq, const std::string& r_range, const std::string& m_range,
              bool p_set, uint32_t p_fixed, uint64_t trials, uint64_t seed,
              const std::string& csv_path, std::ostream& out) {
    std::vector<SeriesPoint> series;
    std::string series_name;

    if (eq == "eq1") {
        if (r_range.empty() || !m_range.empty() || p_set) {
            throw DomainError("probe eq1 sweeps fragments: use --r <lo..hi> only");
        }
        const SweepRange range = parse_sweep(r_range);
        series = emit_series(FigureKind::fragment_capture_vs_r, range.lo, range.hi,
                             trials, seed);
        series_name = "p_fragment_capture";
    } else if (eq == "eq2") {
        if (m_range.empty() || !r_range.empty() || p_set) {
            throw DomainError("probe eq2 sweeps decision makers: use --m <lo..hi> only");
        }
        const SweepRange range = parse_sweep(m_range);
        series = emit_series(FigureKind::corrupt_dm_vs_m, range.lo, range.hi, trials, seed);
        series_name = "p_corrupt_dm";
    } else if (eq == "eq3") {
        if (m_range.empty() || !p_set || !r_range.empty()) {
            throw DomainError("probe eq3 sweeps decision makers at fixed agent count: "
                              "use --m <lo..hi> --p <p>");
        }
        if (p_fixed < 1) {
            throw DomainError("--p must be >= 1");
        }
        const SweepRange range = parse_sweep(m_range);
        series = emit_wrong_agent_series(range.lo, range.hi, p_fixed, trials, seed);
        series_name = "p_wrong_agent(p=" + std::to_string(p_fixed) + ")";
    } else {
        throw DomainError("unknown probe target '" + eq + "', expected eq1, eq2 or eq3");
    }

    const size_t bad = print_series(out, series_name, series);
    if (!csv_path.empty()) {
        write_file(csv_path, series_to_csv(series));
    }
    return bad == 0 ? 0 : 2;
}

int cmd_figures(const std::string& out_dir, uint64_t trials, uint64_t seed,
                std::ostream& out) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    size_t bad = 0;

    const std::vector<SeriesPoint> fig2 =
        emit_series(FigureKind::fragment_capture_vs_r, 1, 20, trials, seed);
    const std::string fig2_path = out_dir + "/fig2.csv";
    write_file(fig2_path, series_to_csv(fig2));
    bad += print_series(out, "p_fragment_capture -> " + fig2_path, fig2);

    const std::vector<SeriesPoint> fig3 =
        emit_series(FigureKind::corrupt_dm_vs_m, 1, 20, trials, seed);
    const std::string fig3_path = out_dir + "/fig3.csv";
    write_file(fig3_path, series_to_csv(fig3));
    bad += print_series(out, "p_corrupt_dm -> " + fig3_path, fig3);

    return bad == 0 ? 0 : 2;
}

} // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"deterministic multi-agent secure computation simulator"};
    app.name("masmc");
    app.require_subcommand(1);

    // run
    std::string scenario_path;
    uint64_t seed_override = 0;
    std::string transcript_path;
    CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario end to end");
    run_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    CLI::Option* seed_opt =
        run_cmd->add_option("--seed", seed_override, "override the scenario's seed");
    run_cmd->add_option("--transcript", transcript_path, "write the event log here");

    // probe
    std::string eq;
    std::string r_range;
    std::string m_range;
    uint32_t p_fixed = 0;
    uint64_t trials = 100000;
    uint64_t probe_seed = 7;
    std::string csv_path;
    CLI::App* probe_cmd =
        app.add_subcommand("probe", "compare a closed-form probability with Monte Carlo");
    probe_cmd->add_option("eq", eq, "eq1 (fragment capture), eq2 (corrupt dm), eq3 (wrong agent)")
        ->required();
    probe_cmd->add_option("--r", r_range, "fragment sweep <n> or <lo..hi> (eq1)");
    probe_cmd->add_option("--m", m_range, "decision maker sweep <n> or <lo..hi> (eq2, eq3)");
    CLI::Option* p_opt = probe_cmd->add_option("--p", p_fixed, "fixed agent count (eq3)");
    probe_cmd->add_option("--trials", trials, "Monte Carlo trials per point");
    probe_cmd->add_option("--seed", probe_seed, "Monte Carlo seed");
    probe_cmd->add_option("--csv", csv_path, "also write the series as CSV");

    // figures
    std::string out_dir = ".";
    uint64_t fig_trials = 100000;
    uint64_t fig_seed = 7;
    CLI::App* figures_cmd =
        app.add_subcommand("figures", "write fig2.csv and fig3.csv (sweeps 1..20)");
    figures_cmd->add_option("--out", out_dir, "output directory");
    figures_cmd->add_option("--trials", fig_trials, "Monte Carlo trials per point");
    figures_cmd->add_option("--seed", fig_seed, "Monte Carlo seed");

    // selfcheck
    CLI::App* selfcheck_cmd =
        app.add_subcommand("selfcheck", "run the fast invariant suite");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(scenario_path, seed_opt->count() > 0, seed_override,
                           transcript_path, out, err);
        }
        if (probe_cmd->parsed()) {
            return cmd_probe(eq, r_range, m_range, p_opt->count() > 0, p_fixed, trials,
                             probe_seed, csv_path, out);
        }
        if (figures_cmd->parsed()) {
            return cmd_figures(out_dir, fig_trials, fig_seed, out);
        }
        if (selfcheck_cmd->parsed()) {
            return run_selfcheck(out) == 0 ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no command\n";
    return 1;
}

} // namespace masmc::cli
