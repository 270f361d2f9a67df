#include "relcov/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <optional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "relcov/pair_scenario.hpp"
#include "relcov/parallel.hpp"
#include "relcov/resources.hpp"
#include "relcov/sweep.hpp"

namespace relcov {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
    const SweepAxis axis{SweepParameter::Beta, lo, hi, n};
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(axis.value(i));
    return v;
}

/// Open interval (lo, hi) sampled at n interior points.
std::vector<double> interior(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 1; i <= n; ++i) v.push_back(lo + (hi - lo) * i / (n + 1));
    return v;
}

double sq(double x) { return x * x; }

// Grid of criteria 4, 5 and 7.
const std::vector<double>& boosted_speeds() {
    static const std::vector<double> v = linspace(0.05, 0.999, 20);
    return v;
}
const std::vector<double>& boosted_alphas() {
    static const std::vector<double> v = linspace(0.05, kPi / 2 - 0.05, 10);
    return v;
}
const std::vector<double>& boosted_phis() {
    static const std::vector<double> v = linspace(0.0, kPi / 2, 10);
    return v;
}

struct GridPointSummary {
    double e8_dev{0};
    double coh_dev{0};
    double coh_asym{0};
    double spin_entropy_dev{0};
    double spin_pair_entropy_dev{0};
    double other_entropy_dev{0};
    int other_count{0};
    bool argmin_ok{true};
    double invariant_dev{0};
    double invariant_frame_gap{0};
    double lower_bound_violation{0};
};

GridPointSummary evaluate_point(double beta, double beta_v, double alpha, double phi) {
    const PairConfig cfg{phi, 0.3, beta_v, 1.0};
    const BoostParamsd bp(beta, beta_v, alpha);
    ReportOptions opts;
    opts.failure_threshold = std::numeric_limits<double>::infinity();
    const ResourceReport rep = resource_report(cfg, bp, opts);

    const double s2 = std::sin(2 * phi);
    const double cos_o = rep.cos_omega;
    const double sin2_o = sq(std::sin(rep.omega));
    const double base = 0.5 * s2 * s2;

    GridPointSummary out;
    out.e8_dev = std::abs(rep.e8 - s2 * cos_o);
    out.coh_dev = std::max(std::abs(rep.coherence_minus - 0.5 * sin2_o),
                           std::abs(rep.coherence_plus - 0.5 * sin2_o));
    out.coh_asym = std::abs(rep.coherence_minus - rep.coherence_plus);

    const std::uint32_t s_minus = 1u << 3, s_plus = 1u << 7;
    for (const auto& e : rep.per_bipartition_entropies) {
        const std::uint32_t a = e.bipartition.part_a();
        if (a == s_minus || a == s_plus) {
            out.spin_entropy_dev =
                std::max(out.spin_entropy_dev, std::abs(e.linear_entropy - base * cos_o * cos_o));
        } else if (a == (s_minus | s_plus)) {
            out.spin_pair_entropy_dev = std::abs(e.linear_entropy - base * (1 - sin2_o * sin2_o));
        } else {
            out.other_entropy_dev = std::max(out.other_entropy_dev, std::abs(e.linear_entropy - base));
            ++out.other_count;
        }
    }
    // With a visible gap the minimum must sit on a spin 1|7 split.
    if (base * sin2_o > 1e-10) {
        out.argmin_ok = rep.gme_argmin.rfind("S- | ", 0) == 0 || rep.gme_argmin.rfind("S+ | ", 0) == 0;
    }

    out.invariant_dev =
        std::max(std::abs(rep.invariant_value - s2), std::abs(rep.invariant_lab - s2));
    out.invariant_frame_gap = std::abs(rep.invariant_value - rep.invariant_lab);
    out.lower_bound_violation = std::max(0.0, s2 * std::cos(alpha) - rep.e8);
    return out;
}

std::vector<GridPointSummary> compute_boosted_grid(unsigned workers) {
    const auto& speeds = boosted_speeds();
    const auto& alphas = boosted_alphas();
    const auto& phis = boosted_phis();
    const std::size_t ns = speeds.size(), na = alphas.size(), np = phis.size();
    std::vector<GridPointSummary> out(ns * ns * na * np);
    parallel_for(out.size(), workers, [&](std::size_t k) {
        std::size_t r = k;
        const std::size_t ip = r % np; r /= np;
        const std::size_t ia = r % na; r /= na;
        const std::size_t iv = r % ns; r /= ns;
        const std::size_t ib = r;
        out[k] = evaluate_point(speeds[ib], speeds[iv], alphas[ia], phis[ip]);
    });
    return out;
}

// Criteria 4, 5 and 7 share one pass over the grid.
const std::vector<GridPointSummary>& evaluate_boosted_grid(unsigned workers) {
    static std::mutex mu;
    static std::optional<std::vector<GridPointSummary>> cache;
    const std::lock_guard lock(mu);
    if (!cache) cache = compute_boosted_grid(workers);
    return *cache;
}

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

// Random normalized state with amplitudes on every basis vector.
MultiPartyPureState random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    std::vector<Party> parties(kCanonicalParties.begin(), kCanonicalParties.begin() + n);
    std::vector<std::vector<double>> labels(static_cast<std::size_t>(n), {0.0, 1.0});
    Eigen::VectorXcd amps(1 << n);
    for (auto& a : amps) a = Complex(gauss(rng), gauss(rng));
    return MultiPartyPureState(parties, ValueBasis(labels), amps / amps.norm());
}

}  // namespace

// ---------------------------------------------------------------------------

CheckResult check_wigner_closed_form(const AcceptanceOptions& opts) {
    const auto t0 = Clock::now();
    CheckResult r{1, "Wigner closed form vs L^-1(lam p) lam L(p)", false, 0.0, 1e-9, 0, "", ""};
    const std::vector<double> speeds = linspace(0.0, 0.999, 50);
    const std::vector<double> alphas = interior(0.0, kPi / 2, 50);
    std::vector<double> worst(speeds.size(), 0.0);
    parallel_for(speeds.size(), opts.workers, [&](std::size_t i) {
        for (double bv : speeds) {
            const FourVectord p = particle_momentum(bv, 1.0, +1);
            for (double a : alphas) {
                const BoostParamsd bp(speeds[i], bv, a);
                const double matrix = wigner_angle(bp.boost(), p, 1.0).cos_omega();
                worst[i] = std::max(worst[i], std::abs(matrix - wigner_cos_closed_form(bp)));
            }
        }
    });
    r.worst = *std::max_element(worst.begin(), worst.end());
    r.seconds = seconds_since(t0);
    r.passed = r.worst <= r.tolerance && r.seconds < 30.0;
    r.detail = "125000 points, runtime target 30 s";
    return r;
}

CheckResult check_wigner_special_cases() {
    const auto t0 = Clock::now();
    CheckResult r{2, "Wigner special cases (alpha=0, alpha=pi/2, ultrarelativistic)", false, 0.0,
                  1e-12, 0, "", ""};
    double worst_zero = 0.0, worst_half = 0.0, worst_ultra = 0.0;
    const std::vector<double> speeds = linspace(0.0, 0.999, 40);
    for (double b : speeds) {
        for (double bv : speeds) {
            const BoostParamsd along(b, bv, 0.0);
            const FourVectord p = particle_momentum(bv, 1.0, +1);
            worst_zero = std::max({worst_zero, std::abs(wigner_cos_closed_form(along) - 1.0),
                                   std::abs(wigner_angle(along.boost(), p, 1.0).cos_omega() - 1.0)});
            const BoostParamsd across(b, bv, kPi / 2);
            const double g = across.gamma(), gv = across.gamma_v();
            worst_half = std::max(worst_half, std::abs(wigner_cos_closed_form(across) -
                                                       (g + gv) / (1 + g * gv)));
        }
    }
    const double ultra = 1.0 - 1e-6;
    std::ostringstream ultra_detail;
    bool ultra_ok = true, ultra_intrinsic = true;
    for (auto [a, label] : {std::pair{kPi / 6, "pi/6"}, {kPi / 4, "pi/4"}, {kPi / 3, "pi/3"}}) {
        const double c = wigner_cos_closed_form(BoostParamsd(ultra, ultra, a));
        const double dev = std::abs(c - std::cos(a));
        worst_ultra = std::max(worst_ultra, dev);
        ultra_detail << " " << label << " " << fmt("%.2e", dev);
        if (dev > 1e-3) {
            ultra_ok = false;
            // Extended precision separates rounding from the value of the formula itself.
            const long double ua = 1.0L - 1e-6L;
            const long double exact = wigner_cos_closed_form(
                BoostParams<long double>(ua, ua, static_cast<long double>(a)));
            ultra_intrinsic = ultra_intrinsic && std::abs(static_cast<long double>(c) - exact) < 1e-12L;
        }
    }
    r.worst = std::max(worst_zero, worst_half);
    r.seconds = seconds_since(t0);
    const bool exact_ok = worst_zero <= 1e-12 && worst_half <= 1e-12;
    r.passed = exact_ok && ultra_ok;
    r.detail = fmt("alpha=0 %.2e, alpha=pi/2 %.2e (tol 1e-12); ultrarelativistic |cos O - cos a|",
                   worst_zero, worst_half) +
               ultra_detail.str() + " (tol 1e-3)";
    if (exact_ok && !ultra_ok && ultra_intrinsic) {
        r.unattainable =
            "the closed form itself exceeds 1e-3 at beta = beta_v = 1 - 1e-6 (confirmed in long "
            "double); the approach to cos(alpha) is O(1/gamma)";
    }
    return r;
}

CheckResult check_lab_frame() {
    const auto t0 = Clock::now();
    CheckResult r{3, "Lab frame: E4 = sin 2phi, E8 = 0, coherences = 0", false, 0.0, 1e-10, 0, "", ""};
    const std::array<Party, 4> core = {Party::PzElectron, Party::SpinElectron, Party::PzPositron,
                                       Party::SpinPositron};
    double worst_e4 = 0, worst_e8 = 0, worst_c = 0;
    for (double phi : linspace(0.0, kPi / 2, 50)) {
        for (int t = 0; t < 10; ++t) {
            const double theta = 2 * kPi * t / 10;
            const MultiPartyPureState lab = lab_state(PairConfig{phi, theta, 0.6, 1.0});
            worst_e4 = std::max(worst_e4,
                                std::abs(gme(marginal_pure_state(lab, core)).value - std::sin(2 * phi)));
            worst_e8 = std::max(worst_e8, gme(lab).value);
            for (Party p : kCanonicalParties) {
                const std::array<Party, 1> one = {p};
                worst_c = std::max(worst_c, coherence_linear(partial_trace(lab, one)));
            }
        }
    }
    r.worst = std::max({worst_e4, worst_e8, worst_c});
    r.seconds = seconds_since(t0);
    r.passed = r.worst <= r.tolerance;
    r.detail = fmt("E4 %.2e, E8 %.2e, coherence %.2e over 50 phi x 10 theta", worst_e4, worst_e8,
                   worst_c);
    return r;
}

CheckResult check_boosted_frame(const AcceptanceOptions& opts) {
    const auto t0 = Clock::now();
    CheckResult r{4, "Boosted frame: E8' = sin 2phi cos O, C = sin^2 O / 2, bipartition entropies",
                  false, 0.0, 1e-9, 0, "", ""};
    const auto grid = evaluate_boosted_grid(opts.workers);
    GridPointSummary w;
    bool argmin_ok = true, count_ok = true;
    for (const auto& g : grid) {
        w.e8_dev = std::max(w.e8_dev, g.e8_dev);
        w.coh_dev = std::max(w.coh_dev, g.coh_dev);
        w.coh_asym = std::max(w.coh_asym, g.coh_asym);
        w.spin_entropy_dev = std::max(w.spin_entropy_dev, g.spin_entropy_dev);
        w.spin_pair_entropy_dev = std::max(w.spin_pair_entropy_dev, g.spin_pair_entropy_dev);
        w.other_entropy_dev = std::max(w.other_entropy_dev, g.other_entropy_dev);
        argmin_ok = argmin_ok && g.argmin_ok;
        count_ok = count_ok && g.other_count == 124;
    }
    r.worst = std::max({w.e8_dev, w.coh_dev, w.coh_asym, w.spin_entropy_dev, w.spin_pair_entropy_dev,
                        w.other_entropy_dev});
    r.seconds = seconds_since(t0);
    r.passed = r.worst <= r.tolerance && argmin_ok && count_ok && r.seconds < 300.0;
    std::ostringstream os;
    os << grid.size() << " points; E8 " << fmt("%.2e", w.e8_dev) << ", C " << fmt("%.2e", w.coh_dev)
       << ", spin 1|7 " << fmt("%.2e", w.spin_entropy_dev) << ", spin pair "
       << fmt("%.2e", w.spin_pair_entropy_dev) << ", other 124 " << fmt("%.2e", w.other_entropy_dev)
       << (argmin_ok ? "; argmin on spin 1|7" : "; ARGMIN OFF SPIN") << "; runtime target 300 s";
    r.detail = os.str();
    return r;
}

CheckResult check_invariant(const AcceptanceOptions& opts) {
    const auto t0 = Clock::now();
    CheckResult r{5, "Invariant (E4+E8)/sqrt(1-(C+ + C-)) = sin 2phi in both frames", false, 0.0,
                  1e-10, 0, "", ""};
    double dev = 0, gap = 0;
    for (const auto& g : evaluate_boosted_grid(opts.workers)) {
        dev = std::max(dev, g.invariant_dev);
        gap = std::max(gap, g.invariant_frame_gap);
    }
    // 100 random points over the full domain, degenerate boosts included.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double random_dev = 0;
    for (int k = 0; k < 100; ++k) {
        const double bv = 0.01 + 0.98 * unit(rng);
        const double phi = kPi / 2 * unit(rng);
        const double alpha = k % 10 == 0 ? kPi / 2 : kPi * unit(rng);
        const ResourceReport rep = resource_report(PairConfig{phi, 2 * kPi * unit(rng), bv, 1.0},
                                                   BoostParamsd(0.999 * unit(rng), bv, alpha));
        random_dev = std::max({random_dev, std::abs(rep.invariant_value - std::sin(2 * phi)),
                               std::abs(rep.invariant_value - rep.invariant_lab)});
    }
    r.worst = std::max({dev, gap, random_dev});
    r.seconds = seconds_since(t0);
    r.passed = r.worst <= r.tolerance;
    r.detail = fmt("|inv - sin 2phi| %.2e, |inv_lab - inv_boosted| %.2e; 100 random points %.2e",
                   dev, gap, random_dev);
    return r;
}

CheckResult check_combinatorics() {
    const auto t0 = Clock::now();
    CheckResult r{6, "Bipartitions of 8 parties: 127 = 8 + 28 + 56 + 35", false, 0.0, 0.0, 0, "", ""};
    const auto bps = enumerate_bipartitions(8);
    std::array<int, 5> by_size{};
    for (const auto& b : bps) ++by_size[static_cast<std::size_t>(b.size_a())];
    r.passed = bps.size() == 127 && by_size[1] == 8 && by_size[2] == 28 && by_size[3] == 56 &&
               by_size[4] == 35;
    r.worst = r.passed ? 0.0 : 1.0;
    r.seconds = seconds_since(t0);
    std::ostringstream os;
    os << "total " << bps.size() << "; 1|7 " << by_size[1] << ", 2|6 " << by_size[2] << ", 3|5 "
       << by_size[3] << ", 4|4 " << by_size[4];
    r.detail = os.str();
    return r;
}

CheckResult check_lower_bound_and_expansion(const AcceptanceOptions& opts) {
    const auto t0 = Clock::now();
    CheckResult r{7, "E8' >= sin 2phi cos a; small-velocity C ~ b^2 bv^2 sin^2 a / 8", false, 0.0,
                  1e-5, 0, "", ""};
    double violation = 0;
    for (const auto& g : evaluate_boosted_grid(opts.workers)) {
        violation = std::max(violation, g.lower_bound_violation);
    }
    double expansion = 0;
    for (double a : interior(0.0, kPi, 20)) {
        const PairConfig cfg{kPi / 4, 0.0, 0.1, 1.0};
        const ResourceReport rep = resource_report(cfg, BoostParamsd(0.1, 0.1, a));
        const double approx = sq(0.1) * sq(0.1) * sq(std::sin(a)) / 8;
        expansion = std::max({expansion, std::abs(rep.coherence_minus - approx),
                              std::abs(rep.coherence_plus - approx)});
    }
    r.worst = expansion;
    r.seconds = seconds_since(t0);
    // The bound is an inequality; allow only rounding below it.
    r.passed = violation <= 1e-12 && expansion <= r.tolerance;
    r.detail = fmt("bound violation %.2e (tol 1e-12); expansion error %.2e at beta=beta_v=0.1",
                   violation, expansion);
    return r;
}

CheckResult check_structural_separability() {
    const auto t0 = Clock::now();
    CheckResult r{8, "4-party reductions of the boosted state are separable; lab reduction is not",
                  false, 0.0, 1e-10, 0, "", ""};
    const auto subsets = four_party_subsets();
    double worst = 0;
    bool all_boosted = true;
    int checked = 0;
    for (double b : {0.3, 0.8, 0.999}) {
        for (double bv : {0.2, 0.7, 0.99}) {
            for (double a : {0.3, 0.9, 1.4}) {
                for (double phi : {kPi / 8, kPi / 4, 3 * kPi / 8}) {
                    const BoostedPair boosted =
                        boosted_state(PairConfig{phi, 0.7, bv, 1.0}, BoostParamsd(b, bv, a));
                    for (const auto& s : subsets) {
                        const auto cert =
                            separability_structure_check(partial_trace(boosted.state, s), boosted.state);
                        worst = std::max(worst, cert.max_deviation);
                        all_boosted = all_boosted && cert.separable;
                        ++checked;
                    }
                }
            }
        }
    }
    const std::array<Party, 4> core = {Party::PzElectron, Party::SpinElectron, Party::PzPositron,
                                       Party::SpinPositron};
    bool lab_rejected = true;
    double min_lab_dev = 1.0;
    for (double phi : interior(0.0, kPi / 2, 9)) {
        const MultiPartyPureState lab = lab_state(PairConfig{phi, 0.7, 0.6, 1.0});
        const auto cert =
            separability_structure_check(projector(marginal_pure_state(lab, core)), lab);
        lab_rejected = lab_rejected && !cert.separable;
        min_lab_dev = std::min(min_lab_dev, cert.max_deviation);
    }
    r.worst = worst;
    r.seconds = seconds_since(t0);
    r.passed = all_boosted && lab_rejected;
    std::ostringstream os;
    os << checked << " boosted reductions, max deviation " << fmt("%.2e", worst)
       << "; lab reduction rejected for all interior phi (min deviation " << fmt("%.2e", min_lab_dev)
       << ")";
    r.detail = os.str();
    return r;
}

CheckResult check_fig2(const AcceptanceOptions& opts) {
    const auto t0 = Clock::now();
    CheckResult r{9, "cos Omega surfaces at alpha = pi/4, pi/2 on 200 x 200", false, 0.0, 1e-12, 0, "", ""};
    const Fig2Surface quarter = compute_fig2(kPi / 4, 200, opts.workers);
    const Fig2Surface half = compute_fig2(kPi / 2, 200, opts.workers);
    const double elapsed = seconds_since(t0);

    const Eigen::Index n = 200;
    double edge = 0;     // closed-form edges vs special values
    double route = 0;    // matrix route vs closed form, whole surface
    double monotone = 0; // largest increase along a grid line at alpha = pi/4
    for (const Fig2Surface* s : {&quarter, &half}) {
        for (Eigen::Index k = 0; k < n; ++k) {
            edge = std::max({edge, std::abs(s->cos_omega_closed(0, k) - 1.0),
                             std::abs(s->cos_omega_closed(k, 0) - 1.0),
                             std::abs(s->cos_omega(0, k) - 1.0), std::abs(s->cos_omega(k, 0) - 1.0)});
        }
        route = std::max(route, (s->cos_omega - s->cos_omega_closed).cwiseAbs().maxCoeff());
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index far : {Eigen::Index{0}, n - 1}) {
            for (auto [i, j] : {std::pair{far, k}, std::pair{k, far}}) {
                const BoostParamsd bp(half.speeds[static_cast<std::size_t>(i)],
                                      half.speeds[static_cast<std::size_t>(j)], kPi / 2);
                const double g = bp.gamma(), gv = bp.gamma_v();
                edge = std::max(edge, std::abs(half.cos_omega_closed(i, j) - (g + gv) / (1 + g * gv)));
            }
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            monotone = std::max({monotone, quarter.cos_omega_closed(i, j + 1) - quarter.cos_omega_closed(i, j),
                                 quarter.cos_omega_closed(j + 1, i) - quarter.cos_omega_closed(j, i)});
        }
    }
    const double corner = half.cos_omega_closed(n - 1, n - 1);
    r.worst = edge;
    r.seconds = elapsed;
    r.passed = edge <= 1e-12 && route <= 1e-9 && monotone <= 1e-12 && corner < 0.1 &&
               elapsed < 60.0;
    r.detail = fmt("matrix vs closed %.2e (tol 1e-9); max increase at pi/4 %.2e; pi/2 corner %.4f",
                   route, monotone, corner) +
               "; runtime target 60 s";
    return r;
}

CheckResult check_property_suites() {
    const auto t0 = Clock::now();
    CheckResult r{10, "Property suites (metric, little group, normalization, traces, dephase, GHZ)",
                  false, 0.0, 1e-10, 0, "", ""};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss;

    double metric = 0, little = 0;
    for (int k = 0; k < 1000; ++k) {
        Eigen::Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
        dir.normalize();
        metric = std::max(metric, metric_violation(boost_transform(0.999 * unit(rng), dir)));

        const double m = 0.5 + 1.5 * unit(rng);
        const BoostParamsd bp(0.99 * unit(rng), 0.99 * unit(rng), kPi * unit(rng));
        const FourVectord p = particle_momentum(bp.beta_v, m, unit(rng) < 0.5 ? -1 : 1);
        const FourVectord rest(m, 0, 0, 0);
        little = std::max(little, (wigner_transform(bp.boost(), p, m) * rest - rest).cwiseAbs().maxCoeff());
    }

    double norm = 0, trace = 0, compose = 0, complement = 0, dephase_dev = 0;
    for (int k = 0; k < 5; ++k) {
        const MultiPartyPureState psi = random_state(rng, 8);
        norm = std::max(norm, std::abs(psi.amplitudes().norm() - 1.0));
        for (const auto& bp : enumerate_bipartitions(8)) {
            std::vector<Party> a, b;
            for (int p = 0; p < 8; ++p) {
                (bp.in_a(p) ? a : b).push_back(kCanonicalParties[static_cast<std::size_t>(p)]);
            }
            const DensityMatrix ra = partial_trace(psi, a);
            const DensityMatrix rb = partial_trace(psi, b);
            trace = std::max({trace, ra.invariant_violation(), rb.invariant_violation()});
            complement = std::max(complement, std::abs(linear_entropy(ra) - linear_entropy(rb)));
        }
        const std::array<Party, 4> ab = {Party::P0Electron, Party::SpinElectron, Party::PxPositron,
                                         Party::SpinPositron};
        const std::array<Party, 2> a = {Party::SpinElectron, Party::PxPositron};
        const DensityMatrix direct = partial_trace(psi, a);
        const DensityMatrix staged = partial_trace(partial_trace(psi, ab), a);
        compose = std::max(compose, (direct.matrix() - staged.matrix()).cwiseAbs().maxCoeff());
        const DensityMatrix once = dephase(partial_trace(psi, ab));
        dephase_dev = std::max(dephase_dev, (dephase(once).matrix() - once.matrix()).cwiseAbs().maxCoeff());
    }
    // Branch-built states with random coefficients and labels.
    for (int k = 0; k < 20; ++k) {
        std::vector<Branch> branches(2);
        for (auto& b : branches) {
            b.coefficient = Complex(gauss(rng), gauss(rng));
            for (int p = 0; p < 8; ++p) {
                b.kets.push_back(LocalKet::label(std::floor(3 * unit(rng))));
            }
        }
        const auto psi = state_from_branches({kCanonicalParties.begin(), kCanonicalParties.end()},
                                             branches);
        norm = std::max(norm, std::abs(psi.amplitudes().norm() - 1.0));
    }

    double ghz = 0;
    for (int n = 2; n <= 4; ++n) {
        std::vector<std::vector<double>> labels(static_cast<std::size_t>(n), {0.0, 1.0});
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1 << n);
        amps(0) = amps((1 << n) - 1) = 1 / std::sqrt(2.0);
        const MultiPartyPureState state(
            std::vector<Party>(kCanonicalParties.begin(), kCanonicalParties.begin() + n),
            ValueBasis(labels), amps);
        ghz = std::max(ghz, std::abs(gme(state).value - 1.0));
    }

    r.worst = std::max({metric, little, norm, trace, complement});
    r.seconds = seconds_since(t0);
    r.passed = metric <= 1e-10 && little <= 1e-10 && norm <= 1e-10 && trace <= 1e-10 &&
               complement <= 1e-10 && compose <= 1e-12 && dephase_dev <= 1e-12 && ghz <= 1e-12;
    std::ostringstream os;
    os << fmt("metric %.1e, little group %.1e, norm %.1e", metric, little, norm)
       << fmt(", trace/herm/psd %.1e, complement %.1e, composition %.1e", trace, complement, compose)
       << fmt(", dephase %.1e, GHZ %.1e", dephase_dev, ghz);
    r.detail = os.str();
    return r;
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts,
                                        const std::function<void(const CheckResult&)>& on_result) {
    const std::function<CheckResult()> checks[] = {
        [&] { return check_wigner_closed_form(opts); },
        [] { return check_wigner_special_cases(); },
        [] { return check_lab_frame(); },
        [&] { return check_boosted_frame(opts); },
        [&] { return check_invariant(opts); },
        [] { return check_combinatorics(); },
        [&] { return check_lower_bound_and_expansion(opts); },
        [] { return check_structural_separability(); },
        [&] { return check_fig2(opts); },
        [] { return check_property_suites(); },
    };
    std::vector<CheckResult> out;
    for (const auto& check : checks) {
        out.push_back(check());
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_check(const CheckResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d  ", r.passed ? "PASS" : "FAIL", r.id);
    std::ostringstream os;
    os << head << r.name << "  worst=" << fmt("%.3e", r.worst) << " tol=" << fmt("%.0e", r.tolerance)
       << " (" << fmt("%.2f", r.seconds) << " s)";
    if (!r.detail.empty()) os << "\n          " << r.detail;
    if (!r.passed && !r.unattainable.empty()) os << "\n          unattainable: " << r.unattainable;
    return os.str();
}

bool print_checks(std::ostream& os, const std::vector<CheckResult>& results) {
    for (const auto& r : results) os << format_check(r) << '\n';
    return print_summary(os, results);
}

bool print_summary(std::ostream& os, const std::vector<CheckResult>& results) {
    const auto passed = std::count_if(results.begin(), results.end(),
                                      [](const CheckResult& r) { return r.passed; });
    const auto documented = std::count_if(results.begin(), results.end(), [](const CheckResult& r) {
        return !r.passed && !r.unattainable.empty();
    });
    os << passed << "/" << results.size() << " checks passed";
    if (documented > 0) os << ", " << documented << " failing as documented (unattainable)";
    os << '\n';
    return passed == static_cast<std::ptrdiff_t>(results.size());
}

bool only_documented_failures(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed || !r.unattainable.empty(); });
}

}  // namespace relcov
