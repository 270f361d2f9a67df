#include "relcov/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "relcov/parallel.hpp"

namespace relcov {

std::string_view parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::Beta: return "beta";
        case SweepParameter::BetaV: return "beta_v";
        case SweepParameter::Alpha: return "alpha";
        case SweepParameter::Phi: return "phi";
    }
    return "?";
}

SweepParameter parse_parameter(std::string_view name) {
    if (name == "beta") return SweepParameter::Beta;
    if (name == "beta_v" || name == "beta-v") return SweepParameter::BetaV;
    if (name == "alpha") return SweepParameter::Alpha;
    if (name == "phi") return SweepParameter::Phi;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(name) +
                                "' (expected beta, beta_v, alpha or phi)");
}

double SweepAxis::value(int i) const {
    if (i == count - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

namespace {

double parse_number(std::string_view text, const char* what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " '" + std::string(text) +
                                    "'");
    }
    return v;
}

void check_in_domain(SweepParameter p, double v) {
    const bool ok = [&] {
        switch (p) {
            case SweepParameter::Beta: return v >= 0.0 && v <= kMaxSpeed;
            case SweepParameter::BetaV: return v > 0.0 && v <= kMaxSpeed;
            case SweepParameter::Alpha: return v >= 0.0 && v <= std::numbers::pi;
            case SweepParameter::Phi: return v >= 0.0 && v <= std::numbers::pi / 2;
        }
        return false;
    }();
    if (!ok) {
        throw std::invalid_argument(std::string(parameter_name(p)) + " value " + format_double(v) +
                                    " is outside its domain");
    }
}

}  // namespace

SweepAxis parse_axis(std::string_view spec) {
    std::array<std::string_view, 4> parts;
    std::size_t found = 0;
    std::size_t start = 0;
    while (found < 4) {
        const std::size_t colon = spec.find(':', start);
        if (colon == std::string_view::npos) {
            parts[found++] = spec.substr(start);
            break;
        }
        parts[found++] = spec.substr(start, colon - start);
        start = colon + 1;
        if (found == 4) {
            throw std::invalid_argument("axis spec has too many fields: '" + std::string(spec) + "'");
        }
    }
    if (found != 4) {
        throw std::invalid_argument("axis spec must be NAME:MIN:MAX:N, got '" + std::string(spec) +
                                    "'");
    }
    SweepAxis axis;
    axis.parameter = parse_parameter(parts[0]);
    axis.min = parse_number(parts[1], "axis minimum");
    axis.max = parse_number(parts[2], "axis maximum");
    const double count = parse_number(parts[3], "axis point count");
    if (count != std::floor(count) || count > 1e7) {
        throw std::invalid_argument("axis point count must be an integer");
    }
    axis.count = static_cast<int>(count);
    return axis;
}

double PointParameters::get(SweepParameter p) const {
    switch (p) {
        case SweepParameter::Beta: return beta;
        case SweepParameter::BetaV: return beta_v;
        case SweepParameter::Alpha: return alpha;
        case SweepParameter::Phi: return phi;
    }
    return 0.0;
}

void PointParameters::set(SweepParameter p, double v) {
    switch (p) {
        case SweepParameter::Beta: beta = v; break;
        case SweepParameter::BetaV: beta_v = v; break;
        case SweepParameter::Alpha: alpha = v; break;
        case SweepParameter::Phi: phi = v; break;
    }
}

void SweepSpec::validate() const {
    if (axes.size() > 2) {
        throw std::invalid_argument("at most two sweep axes are supported");
    }
    if (axes.size() == 2 && axes[0].parameter == axes[1].parameter) {
        throw std::invalid_argument("the two sweep axes must vary different parameters");
    }
    for (const auto& a : axes) {
        if (a.count < 2) {
            throw std::invalid_argument("axis " + std::string(parameter_name(a.parameter)) +
                                        " needs at least 2 points");
        }
        check_in_domain(a.parameter, a.min);
        check_in_domain(a.parameter, a.max);
    }
    for (auto p : {SweepParameter::Beta, SweepParameter::BetaV, SweepParameter::Alpha,
                   SweepParameter::Phi}) {
        const bool swept = std::any_of(axes.begin(), axes.end(),
                                       [&](const SweepAxis& a) { return a.parameter == p; });
        if (!swept) check_in_domain(p, fixed.get(p));
    }
    if (!std::isfinite(fixed.theta)) throw std::invalid_argument("theta must be finite");
    if (!(fixed.mass > 0.0) || !std::isfinite(fixed.mass)) {
        throw std::invalid_argument("mass must be positive");
    }
}

std::size_t SweepSpec::point_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
}

PointParameters SweepSpec::point(std::size_t index) const {
    PointParameters p = fixed;
    for (std::size_t k = axes.size(); k-- > 0;) {
        const auto count = static_cast<std::size_t>(axes[k].count);
        p.set(axes[k].parameter, axes[k].value(static_cast<int>(index % count)));
        index /= count;
    }
    return p;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers) {
    spec.validate();
    std::vector<SweepRow> rows(spec.point_count());
    parallel_for(rows.size(), workers, [&](std::size_t i) {
        const PointParameters at = spec.point(i);
        ReportOptions opts;
        opts.failure_threshold = std::numeric_limits<double>::infinity();
        const ResourceReport rep = resource_report(at.pair_config(), at.boost_params(), opts);
        SweepRow& row = rows[i];
        row.at = at;
        row.cos_omega = rep.cos_omega;
        row.e4 = rep.e4_lab;
        row.e8 = rep.e8;
        row.coh_minus = rep.coherence_minus;
        row.coh_plus = rep.coherence_plus;
        row.invariant = rep.invariant_value;
        row.max_deviation = rep.max_deviation;
    });
    return rows;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "beta,beta_v,alpha,phi,cos_omega,e4,e8,coh_minus,coh_plus,invariant,max_deviation\n";
    for (const auto& r : rows) {
        const double dev = r.max_deviation.value_or(std::numeric_limits<double>::quiet_NaN());
        for (double v : {r.at.beta, r.at.beta_v, r.at.alpha, r.at.phi, r.cos_omega, r.e4, r.e8,
                         r.coh_minus, r.coh_plus, r.invariant}) {
            os << format_double(v) << ',';
        }
        os << format_double(dev) << '\n';
    }
}

void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["beta"] = r.at.beta;
        j["beta_v"] = r.at.beta_v;
        j["alpha"] = r.at.alpha;
        j["phi"] = r.at.phi;
        j["cos_omega"] = r.cos_omega;
        j["e4"] = r.e4;
        j["e8"] = r.e8;
        j["coh_minus"] = r.coh_minus;
        j["coh_plus"] = r.coh_plus;
        j["invariant"] = r.invariant;
        j["max_deviation"] = r.max_deviation ? nlohmann::ordered_json(*r.max_deviation)
                                             : nlohmann::ordered_json(nullptr);
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// cos Omega surface over (beta, beta_v)

Fig2Surface compute_fig2(double alpha, int grid, unsigned workers, bool with_gme) {
    if (grid < 2) {
        throw std::invalid_argument("fig2 grid needs at least 2 points per axis");
    }
    if (!(alpha >= 0.0) || !(alpha <= std::numbers::pi)) {
        throw std::invalid_argument("alpha must lie in [0, pi]");
    }
    Fig2Surface s;
    s.alpha = alpha;
    const SweepAxis axis{SweepParameter::Beta, 0.0, kFig2MaxSpeed, grid};
    for (int i = 0; i < grid; ++i) s.speeds.push_back(axis.value(i));
    s.cos_omega.resize(grid, grid);
    s.cos_omega_closed.resize(grid, grid);
    if (with_gme) s.gme_ratio = Eigen::MatrixXd(grid, grid);

    const auto n = static_cast<std::size_t>(grid);
    parallel_for(n * n, workers, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k / n);
        const auto j = static_cast<Eigen::Index>(k % n);
        const BoostParamsd bp(s.speeds[static_cast<std::size_t>(i)],
                              s.speeds[static_cast<std::size_t>(j)], alpha);
        const FourVectord p = particle_momentum(bp.beta_v, 1.0, +1);
        s.cos_omega(i, j) = wigner_angle(bp.boost(), p, 1.0).cos_omega();
        s.cos_omega_closed(i, j) = wigner_cos_closed_form(bp);
        if (with_gme) {
            double ratio = std::numeric_limits<double>::quiet_NaN();
            if (bp.beta_v > 0.0) {
                const PairConfig cfg{std::numbers::pi / 4, 0.0, bp.beta_v, 1.0};
                const BoostedPair boosted = boosted_state(cfg, bp);
                if (!boosted.degenerate) {
                    const std::array<Party, 4> core = {Party::PzElectron, Party::SpinElectron,
                                                       Party::PzPositron, Party::SpinPositron};
                    const double e4 = gme(marginal_pure_state(lab_state(cfg), core)).value;
                    ratio = gme(boosted.state).value / e4;
                }
            }
            (*s.gme_ratio)(i, j) = ratio;
        }
    });
    return s;
}

void write_fig2_csv(std::ostream& os, const Fig2Surface& s) {
    os << "alpha,beta,beta_v,cos_omega,cos_omega_closed_form";
    if (s.gme_ratio) os << ",gme_ratio";
    os << '\n';
    const auto n = static_cast<Eigen::Index>(s.speeds.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            os << format_double(s.alpha) << ',' << format_double(s.speeds[static_cast<std::size_t>(i)])
               << ',' << format_double(s.speeds[static_cast<std::size_t>(j)]) << ','
               << format_double(s.cos_omega(i, j)) << ',' << format_double(s.cos_omega_closed(i, j));
            if (s.gme_ratio) os << ',' << format_double((*s.gme_ratio)(i, j));
            os << '\n';
        }
    }
}

std::string heatmap_color(double t) {
    // viridis at 0, .25, .5, .75, 1
    static constexpr std::array<std::array<double, 3>, 5> stops = {{
        {68, 1, 84},
        {59, 82, 139},
        {33, 145, 140},
        {94, 201, 98},
        {253, 231, 37},
    }};
    if (std::isnan(t)) return "#808080";
    t = std::clamp(t, 0.0, 1.0);
    const double x = t * 4.0;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(x), 3);
    const double f = x - static_cast<double>(k);
    char buf[8];
    std::array<int, 3> rgb{};
    for (std::size_t c = 0; c < 3; ++c) {
        rgb[c] = static_cast<int>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
    }
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

void write_fig2_svg(std::ostream& os, const Fig2Surface& s) {
    const int n = static_cast<int>(s.speeds.size());
    const double plot = 480.0;
    const double left = 80.0, top = 50.0;
    const double cell = plot / n;
    const double bar_x = left + plot + 30.0;
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"600\" "
          "viewBox=\"0 0 680 600\" font-family=\"sans-serif\" font-size=\"14\">\n";
    os << "<title>cos Omega, alpha = " << num(s.alpha) << " rad</title>\n";
    os << "<rect width=\"680\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(left + plot / 2) << "\" y=\"30\" text-anchor=\"middle\">"
       << "cos Ω (Wigner rotation), α = " << num(s.alpha) << " rad</text>\n";
    // beta along x (left to right), beta_v along y (bottom to top)
    os << "<g shape-rendering=\"crispEdges\">\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = left + i * cell;
            const double y = top + plot - (j + 1) * cell;
            os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell + 0.05)
               << "\" height=\"" << num(cell + 0.05) << "\" fill=\"" << heatmap_color(s.cos_omega(i, j))
               << "\"/>\n";
        }
    }
    os << "</g>\n";
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot)
       << "\" height=\"" << num(plot) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double span = s.speeds.back();
    for (double tick : {0.0, 0.25, 0.5, 0.75, span}) {
        const double fx = left + plot * tick / span;
        const double fy = top + plot - plot * tick / span;
        os << "<text x=\"" << num(fx) << "\" y=\"" << num(top + plot + 20)
           << "\" text-anchor=\"middle\">" << num(tick) << "</text>\n";
        os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(fy + 5) << "\" text-anchor=\"end\">"
           << num(tick) << "</text>\n";
    }
    os << "<text x=\"" << num(left + plot / 2) << "\" y=\"" << num(top + plot + 45)
       << "\" text-anchor=\"middle\">β (boost speed)</text>\n";
    os << "<text transform=\"translate(" << num(left - 50) << "," << num(top + plot / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">β_v (particle speed)</text>\n";
    // color bar
    const int steps = 50;
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) / steps;
        os << "<rect x=\"" << num(bar_x) << "\" y=\"" << num(top + plot - (k + 1) * plot / steps)
           << "\" width=\"20\" height=\"" << num(plot / steps + 0.05) << "\" fill=\""
           << heatmap_color(t) << "\"/>\n";
    }
    for (double t : {0.0, 0.5, 1.0}) {
        os << "<text x=\"" << num(bar_x + 26) << "\" y=\"" << num(top + plot - t * plot + 5) << "\">"
           << num(t) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace relcov
