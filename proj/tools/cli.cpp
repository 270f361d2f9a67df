#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "relcov/acceptance.hpp"
#include "relcov/errors.hpp"
#include "relcov/pair_scenario.hpp"
#include "relcov/sweep.hpp"

namespace relcov::cli {

namespace {

struct Flags {
    double phi{std::numbers::pi / 4};
    double theta{0.0};
    double beta{0.5};
    double beta_v{0.5};
    double alpha{std::numbers::pi / 4};
    double mass{1.0};
    int grid{200};
    std::vector<std::string> axes;
    std::string format;
    std::string out;
    std::string svg;
    unsigned workers{std::max(1u, std::thread::hardware_concurrency())};
    bool gme{false};
    bool certify{false};

    PointParameters point() const {
        PointParameters p;
        p.beta = beta;
        p.beta_v = beta_v;
        p.alpha = alpha;
        p.phi = phi;
        p.theta = theta;
        p.mass = mass;
        return p;
    }
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to --out when given, else to `out`.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open " + path + " for writing");
    fn(file);
    file.flush();
    if (!file) throw UsageError("failed writing " + path);
}

nlohmann::ordered_json report_json(const ResourceReport& r) {
    nlohmann::ordered_json j;
    j["phi"] = r.config.phi;
    j["theta"] = r.config.theta;
    j["beta"] = r.boost.beta;
    j["beta_v"] = r.boost.beta_v;
    j["alpha"] = r.boost.alpha;
    j["mass"] = r.config.mass;
    j["lab"] = {{"e4", r.e4_lab},
                {"e8", r.e8_lab},
                {"coherence_max", r.coherence_lab_max},
                {"invariant", r.invariant_lab}};
    nlohmann::ordered_json b;
    b["omega"] = r.omega;
    b["cos_omega"] = r.cos_omega;
    b["e8"] = r.e8;
    b["e4"] = r.e4_boosted;
    if (r.four_party_separable) b["four_party_separable"] = *r.four_party_separable;
    b["coh_minus"] = r.coherence_minus;
    b["coh_plus"] = r.coherence_plus;
    b["rel_entropy_coh_minus"] = r.rel_entropy_coherence_minus;
    b["rel_entropy_coh_plus"] = r.rel_entropy_coherence_plus;
    b["momentum_coherence_max"] = r.momentum_coherence_max;
    b["invariant"] = r.invariant_value;
    b["gme_argmin"] = r.gme_argmin;
    nlohmann::ordered_json ents = nlohmann::ordered_json::array();
    for (const auto& e : r.per_bipartition_entropies) {
        ents.push_back({{"bipartition", e.label}, {"linear_entropy", e.linear_entropy}});
    }
    b["bipartition_entropies"] = std::move(ents);
    j["boosted"] = std::move(b);
    j["closed_form"] = {{"e4", r.predictions.e4},
                        {"e8", r.predictions.e8_boosted},
                        {"coherence", r.predictions.coherence},
                        {"cos_omega", r.predictions.cos_omega}};
    j["degenerate"] = r.degenerate;
    if (r.max_deviation) {
        j["max_deviation"] = *r.max_deviation;
    } else {
        j["max_deviation"] = nullptr;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

void write_report_text(std::ostream& os, const ResourceReport& r) {
    auto line = [&](const char* name, double v, const char* closed = nullptr, double c = 0.0) {
        os << "  " << name << " = " << format_double(v);
        if (closed) os << "   (" << closed << " " << format_double(c) << ")";
        os << '\n';
    };
    os << "phi=" << format_double(r.config.phi) << " theta=" << format_double(r.config.theta)
       << " beta=" << format_double(r.boost.beta) << " beta_v=" << format_double(r.boost.beta_v)
       << " alpha=" << format_double(r.boost.alpha) << " mass=" << format_double(r.config.mass)
       << '\n';
    os << "lab frame\n";
    line("E4", r.e4_lab, "closed form", r.predictions.e4);
    line("E8", r.e8_lab);
    line("max coherence", r.coherence_lab_max);
    line("invariant", r.invariant_lab);
    os << "boosted frame\n";
    line("Omega", r.omega);
    line("cos Omega", r.cos_omega, "closed form", r.predictions.cos_omega);
    line("E8'", r.e8, "closed form", r.predictions.e8_boosted);
    line("E4'", r.e4_boosted);
    if (r.four_party_separable) {
        os << "  4-party reductions separable = " << (*r.four_party_separable ? "yes" : "no") << '\n';
    }
    line("C(S-)", r.coherence_minus, "closed form", r.predictions.coherence);
    line("C(S+)", r.coherence_plus, "closed form", r.predictions.coherence);
    line("Cr(S-)", r.rel_entropy_coherence_minus);
    line("Cr(S+)", r.rel_entropy_coherence_plus);
    line("max momentum coherence", r.momentum_coherence_max);
    line("invariant", r.invariant_value, "sin 2phi", r.predictions.e4);
    os << "  GME argmin = " << r.gme_argmin << '\n';
    os << "bipartition linear entropies\n";
    for (const auto& e : r.per_bipartition_entropies) {
        os << "  " << e.label << "  " << format_double(e.linear_entropy) << '\n';
    }
    if (r.max_deviation) {
        os << "max deviation = " << format_double(*r.max_deviation) << '\n';
    } else {
        os << "max deviation = n/a\n";
    }
    if (!r.note.empty()) os << "note: " << r.note << '\n';
}

int cmd_report(const Flags& f, std::ostream& out) {
    const std::string format = f.format.empty() ? "text" : f.format;
    if (format != "text" && format != "json") throw UsageError("report supports --format text|json");
    const PointParameters p = f.point();
    ReportOptions opts;
    opts.certify_separability = f.certify;
    const ResourceReport rep = resource_report(p.pair_config(), p.boost_params(), opts);
    emit(f.out, out, [&](std::ostream& os) {
        if (format == "json") {
            os << report_json(rep).dump(2) << '\n';
        } else {
            write_report_text(os, rep);
        }
    });
    return kOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
    const std::string format = f.format.empty() ? "csv" : f.format;
    if (format != "csv" && format != "json") throw UsageError("sweep supports --format csv|json");
    if (f.axes.empty()) throw UsageError("sweep needs at least one --axis NAME:MIN:MAX:N");
    if (f.axes.size() > 2) throw UsageError("at most two --axis options");
    SweepSpec spec;
    for (const auto& a : f.axes) spec.axes.push_back(parse_axis(a));
    spec.fixed = f.point();
    spec.validate();
    const auto rows = run_sweep(spec, f.workers);
    emit(f.out, out, [&](std::ostream& os) {
        if (format == "json") {
            write_sweep_json(os, rows);
        } else {
            write_sweep_csv(os, rows);
        }
    });
    return kOk;
}

int cmd_fig2(const Flags& f, std::ostream& out) {
    if (!f.format.empty() && f.format != "csv") throw UsageError("fig2 writes csv only");
    if (f.grid < 2) throw UsageError("--grid must be at least 2");
    // Open both targets before the computation so a bad path fails fast.
    std::ofstream svg;
    if (!f.svg.empty()) {
        svg.open(f.svg, std::ios::binary);
        if (!svg) throw UsageError("cannot open " + f.svg + " for writing");
    }
    std::ofstream csv;
    if (!f.out.empty() && f.out != "-") {
        csv.open(f.out, std::ios::binary);
        if (!csv) throw UsageError("cannot open " + f.out + " for writing");
    }
    const Fig2Surface s = compute_fig2(f.alpha, f.grid, f.workers, f.gme);
    write_fig2_csv(csv.is_open() ? static_cast<std::ostream&>(csv) : out, s);
    if (svg.is_open()) {
        write_fig2_svg(svg, s);
        if (!svg.flush()) throw UsageError("failed writing " + f.svg);
    }
    if (csv.is_open() && !csv.flush()) throw UsageError("failed writing " + f.out);
    return kOk;
}

int cmd_selftest(const Flags& f, std::ostream& out) {
    AcceptanceOptions opts;
    opts.workers = f.workers;
    const auto results =
        run_acceptance(opts, [&](const CheckResult& r) { out << format_check(r) << std::endl; });
    return print_summary(out, results) ? kOk : kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement and coherence of a boosted electron-positron pair", "relcov"};
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "TOML/INI file with option values; flags override it")
        ->envname(kConfigEnv);

    Flags f;
    app.add_option("--phi", f.phi, "superposition angle, radians in [0, pi/2]");
    app.add_option("--theta", f.theta, "relative phase, radians");
    app.add_option("--beta", f.beta, "boost speed in [0, 1)");
    app.add_option("--beta-v", f.beta_v, "particle speed in the lab, (0, 1)");
    app.add_option("--alpha", f.alpha, "angle between boost and momentum axis, radians");
    app.add_option("--mass", f.mass, "particle mass");
    app.add_option("--grid", f.grid, "fig2 grid size per axis");
    app.add_option("--axis", f.axes, "sweep axis NAME:MIN:MAX:N, NAME in beta|beta_v|alpha|phi")
        ->allow_extra_args(false);
    app.add_option("--format", f.format, "text|json (report), csv|json (sweep), csv (fig2)")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--out", f.out, "output file (default stdout)");
    app.add_option("--svg", f.svg, "fig2 heatmap output file");
    app.add_option("--workers", f.workers, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_flag("--gme", f.gme, "fig2: add the E8'/E4 column at phi = pi/4");
    app.add_flag("--certify", f.certify, "report: certify all 4-party reductions");

    app.require_subcommand(1, 1);
    auto* report = app.add_subcommand("report", "resources at one point");
    auto* sweep = app.add_subcommand("sweep", "resources over a 1- or 2-axis grid");
    auto* fig2 = app.add_subcommand("fig2", "cos(Omega) surface over (beta, beta_v)");
    auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");
    for (auto* sub : {report, sweep, fig2, selftest}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // Help and version requests are successful exits.
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*report) return cmd_report(f, out);
        if (*sweep) return cmd_sweep(f, out);
        if (*fig2) return cmd_fig2(f, out);
        return cmd_selftest(f, out);
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const PrecisionError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const StructureError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace relcov::cli
