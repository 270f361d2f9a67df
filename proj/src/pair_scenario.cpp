#include "relcov/pair_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace relcov {

void PairConfig::validate() const {
    if (!(phi >= 0.0) || !(phi <= std::numbers::pi / 2)) {
        throw DomainError("phi must lie in [0, pi/2]");
    }
    if (!std::isfinite(theta)) {
        throw DomainError("theta must be finite");
    }
    check_speed(beta_v, "beta_v");
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw DomainError("mass must be positive");
    }
}

double PairConfig::eta() const { return std::cos(phi); }
double PairConfig::xi() const { return std::sin(phi); }
double PairConfig::momentum() const { return gamma(beta_v) * mass * beta_v; }
double PairConfig::energy() const { return gamma(beta_v) * mass; }

Eigen::Matrix2cd spinor_rotation(const Eigen::Vector3d& axis, double omega) {
    if (std::abs(axis.norm() - 1.0) > 1e-12) {
        throw DomainError("rotation axis must be a unit vector");
    }
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd n_sigma;
    n_sigma << axis.z(), Complex(axis.x(), -axis.y()),
               Complex(axis.x(), axis.y()), -axis.z();
    return std::cos(omega / 2) * Eigen::Matrix2cd::Identity() - i * std::sin(omega / 2) * n_sigma;
}

SpinorPair spinor_states(double omega, int s_sign) {
    if (s_sign != 1 && s_sign != -1) {
        throw std::invalid_argument("spinor sign must be +1 or -1");
    }
    const double c = std::cos(omega / 2);
    const double s = s_sign * std::sin(omega / 2);
    SpinorPair out;
    out.u << c, s;
    out.v << -s, c;
    return out;
}

namespace {

std::vector<Party> canonical_parties() {
    return {kCanonicalParties.begin(), kCanonicalParties.end()};
}

void require_moving(const PairConfig& cfg) {
    if (cfg.beta_v == 0.0) {
        throw DegenerateScenarioError(
            "beta_v = 0: the +p and -p momentum labels coincide and the pair is at rest");
    }
}

// GME over the parties that kept more than one label, or 0 if none collapsed.
double collapsed_gme(const MultiPartyPureState& psi) {
    std::vector<Party> keep;
    const std::vector<int> dims = psi.dims();
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] > 1) keep.push_back(psi.parties()[i]);
    }
    if (keep.size() == dims.size() || keep.size() < 2) return 0.0;
    return gme(marginal_pure_state(psi, keep)).value;
}

std::vector<LocalKet> particle_kets(const FourVectord& p, LocalKet spin) {
    return {LocalKet::label(p(0)), LocalKet::label(p(1)), LocalKet::label(p(3)), std::move(spin)};
}

Branch make_branch(Complex coefficient, std::vector<LocalKet> electron,
                   std::vector<LocalKet> positron) {
    Branch b;
    b.coefficient = coefficient;
    b.kets = std::move(electron);
    for (auto& k : positron) b.kets.push_back(std::move(k));
    return b;
}

}  // namespace

MultiPartyPureState lab_state(const PairConfig& cfg) {
    cfg.validate();
    require_moving(cfg);
    const FourVectord up = particle_momentum(cfg.beta_v, cfg.mass, +1);
    const FourVectord down = particle_momentum(cfg.beta_v, cfg.mass, -1);
    const Complex second = cfg.xi() * std::polar(1.0, cfg.theta);
    std::vector<Branch> branches;
    branches.push_back(make_branch(cfg.eta(), particle_kets(up, LocalKet::label(0)),
                                   particle_kets(down, LocalKet::label(0))));
    branches.push_back(make_branch(second, particle_kets(down, LocalKet::label(1)),
                                   particle_kets(up, LocalKet::label(1))));
    return state_from_branches(canonical_parties(), std::move(branches));
}

BoostedPair boosted_state(const PairConfig& cfg, const BoostParamsd& bp) {
    cfg.validate();
    bp.validate();
    require_moving(cfg);
    if (std::abs(cfg.beta_v - bp.beta_v) > 1e-12) {
        throw std::invalid_argument("pair config and boost parameters disagree on beta_v");
    }
    // Extended precision: the 4x4 products cancel at order gamma^2 gamma_v^2 near the light cone.
    using Wide = long double;
    const BoostParams<Wide> wide(bp.beta, bp.beta_v, bp.alpha);
    const Wide mass = cfg.mass;
    const WignerRotation<Wide> wide_rot =
        wigner_angle(wide.boost(), particle_momentum(wide.beta_v, mass, +1), mass);
    WignerRotation<double> rot;
    rot.omega = static_cast<double>(wide_rot.omega);
    rot.axis_sign = wide_rot.axis_sign;
    const double omega = rot.signed_angle();
    const SpinorPair plus = spinor_states(omega, +1);
    const SpinorPair minus = spinor_states(omega, -1);

    const BranchMomenta<double> mom = branch_momenta(bp, cfg.mass);
    const Complex second = cfg.xi() * std::polar(1.0, cfg.theta);
    std::vector<Branch> branches;
    branches.push_back(make_branch(cfg.eta(), particle_kets(mom.plus, LocalKet::spin(plus.u)),
                                   particle_kets(mom.minus, LocalKet::spin(minus.u))));
    branches.push_back(make_branch(second, particle_kets(mom.minus, LocalKet::spin(minus.v)),
                                   particle_kets(mom.plus, LocalKet::spin(plus.v))));
    return BoostedPair{state_from_branches(canonical_parties(), std::move(branches)), rot, mom,
                       mom.any_equal()};
}

std::vector<std::vector<Party>> four_party_subsets() {
    std::vector<std::vector<Party>> out;
    for (const auto& bp : enumerate_bipartitions(8)) {
        if (bp.size_a() != 4) continue;
        // Each 4|4 split yields a subset and its complement.
        for (bool side : {true, false}) {
            std::vector<Party> s;
            for (int p = 0; p < 8; ++p) {
                if (bp.in_a(p) == side) s.push_back(kCanonicalParties[static_cast<std::size_t>(p)]);
            }
            out.push_back(std::move(s));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ResourceReport resource_report(const PairConfig& cfg, const BoostParamsd& bp,
                               const ReportOptions& opts) {
    ResourceReport rep;
    rep.config = cfg;
    rep.boost = bp;

    // Lab frame.
    const MultiPartyPureState lab = lab_state(cfg);
    const std::array<Party, 4> core = {Party::PzElectron, Party::SpinElectron, Party::PzPositron,
                                       Party::SpinPositron};
    rep.e4_lab = gme(marginal_pure_state(lab, core)).value;
    rep.e8_lab = gme(lab).value;
    double lab_c_minus = 0.0, lab_c_plus = 0.0;
    for (Party p : kCanonicalParties) {
        const std::array<Party, 1> one = {p};
        const double c = coherence_linear(partial_trace(lab, one));
        rep.coherence_lab_max = std::max(rep.coherence_lab_max, c);
        if (p == Party::SpinElectron) lab_c_minus = c;
        if (p == Party::SpinPositron) lab_c_plus = c;
    }
    rep.invariant_lab = invariant_combination(rep.e4_lab, rep.e8_lab, lab_c_plus, lab_c_minus);

    // Boosted frame.
    const BoostedPair boosted = boosted_state(cfg, bp);
    const MultiPartyPureState& psi = boosted.state;
    rep.degenerate = boosted.degenerate;
    rep.omega = boosted.rotation.signed_angle();
    rep.cos_omega = std::cos(rep.omega);

    const GmeResult g = gme(psi);
    rep.e8 = g.value;
    rep.gme_argmin = g.argmin.describe(psi.parties());
    rep.per_bipartition_entropies.reserve(g.bipartitions.size());
    for (std::size_t i = 0; i < g.bipartitions.size(); ++i) {
        rep.per_bipartition_entropies.push_back(
            {g.bipartitions[i], g.bipartitions[i].describe(psi.parties()), g.linear_entropies[i]});
    }

    for (Party p : kCanonicalParties) {
        const std::array<Party, 1> one = {p};
        const DensityMatrix rho = partial_trace(psi, one);
        const double c = coherence_linear(rho);
        if (p == Party::SpinElectron) {
            rep.coherence_minus = c;
            rep.rel_entropy_coherence_minus = coherence_relative_entropy(rho);
        } else if (p == Party::SpinPositron) {
            rep.coherence_plus = c;
            rep.rel_entropy_coherence_plus = coherence_relative_entropy(rho);
        } else {
            rep.momentum_coherence_max = std::max(rep.momentum_coherence_max, c);
        }
    }

    if (opts.certify_separability) {
        bool all = true;
        for (const auto& subset : four_party_subsets()) {
            all = all && separability_structure_check(partial_trace(psi, subset), psi).separable;
        }
        rep.four_party_separable = all;
        if (!all) rep.note = "some 4-party reduction failed the separability certificate";
    }
    rep.e4_boosted = collapsed_gme(psi);
    rep.invariant_value =
        invariant_combination(rep.e4_boosted, rep.e8, rep.coherence_plus, rep.coherence_minus);

    const double s2 = std::sin(2 * cfg.phi);
    const double sin_omega = std::sin(rep.omega);
    rep.predictions.e4 = s2;
    rep.predictions.e8_boosted = s2 * rep.cos_omega;
    rep.predictions.coherence = 0.5 * sin_omega * sin_omega;
    rep.predictions.cos_omega = wigner_cos_closed_form(bp);

    if (!(bp.alpha > 0.0 && bp.alpha < std::numbers::pi / 2)) {
        if (!rep.note.empty()) rep.note += "; ";
        rep.note += "alpha outside (0, pi/2)";
    }
    if (rep.degenerate) {
        if (!rep.note.empty()) rep.note += "; ";
        rep.note +=
            "degenerate boost: a momentum component coincides between branches, closed-form "
            "comparison skipped";
        return rep;
    }
    const double devs[] = {
        std::abs(rep.e4_lab - s2),
        rep.e8_lab,
        rep.coherence_lab_max,
        std::abs(rep.invariant_lab - s2),
        std::abs(rep.cos_omega - rep.predictions.cos_omega),
        std::abs(rep.e8 - rep.predictions.e8_boosted),
        std::abs(rep.coherence_minus - rep.predictions.coherence),
        std::abs(rep.coherence_plus - rep.predictions.coherence),
        rep.momentum_coherence_max,
        std::abs(rep.invariant_value - s2),
    };
    rep.max_deviation = *std::max_element(std::begin(devs), std::end(devs));
    if (*rep.max_deviation > opts.failure_threshold) {
        std::ostringstream os;
        os << "resources deviate from their closed forms by " << *rep.max_deviation;
        throw NumericalFailure(os.str());
    }
    return rep;
}

}  // namespace relcov
