#pragma once

// Electron-positron pair in a two-branch superposition:
//
//   eta |p0, 0, +p, 0>|p0, 0, -p, 0> + xi e^{i theta} |p0, 0, -p, 1>|p0, 0, +p, 1>
//
// with eta = cos(phi), xi = sin(phi), electron kets on the left. The y
// momentum never changes under the boosts considered and is left out, so the
// state lives on the eight parties of kCanonicalParties.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relcov/quantum_state.hpp"
#include "relcov/relativity.hpp"
#include "relcov/resources.hpp"

namespace relcov {

struct PairConfig {
    double phi{0.0};
    double theta{0.0};
    double beta_v{0.5};
    double mass{1.0};

    void validate() const;
    double eta() const;
    double xi() const;
    /// |p| = gamma_v m beta_v
    double momentum() const;
    /// p0 = gamma_v m
    double energy() const;
};

/// exp(-i (omega/2) axis . sigma); `axis` must be a unit vector.
Eigen::Matrix2cd spinor_rotation(const Eigen::Vector3d& axis, double omega);

struct SpinorPair {
    Eigen::Vector2cd u;  ///< rotated |0>
    Eigen::Vector2cd v;  ///< rotated |1>
};

/// u = (cos(omega/2), s sin(omega/2)), v = (-s sin(omega/2), cos(omega/2)).
SpinorPair spinor_states(double omega, int s_sign);

/// Lab-frame state; throws DegenerateScenarioError when beta_v = 0.
MultiPartyPureState lab_state(const PairConfig& cfg);

struct BoostedPair {
    MultiPartyPureState state;
    /// Rotation extracted for the +z branch momentum; both spinors use its angle.
    WignerRotation<double> rotation;
    BranchMomenta<double> momenta;
    /// Some momentum component coincides between the branches (alpha in {0, pi/2, pi}
    /// or a negligible boost), so party dimensions collapse.
    bool degenerate{false};
};

BoostedPair boosted_state(const PairConfig& cfg, const BoostParamsd& bp);

/// Closed-form values the numerical resources are compared against.
struct ClosedFormPredictions {
    double e4{0.0};          ///< sin(2 phi)
    double e8_boosted{0.0};  ///< sin(2 phi) cos(Omega)
    double coherence{0.0};   ///< sin^2(Omega) / 2
    double cos_omega{1.0};   ///< closed-form Wigner cosine
};

struct BipartitionEntropy {
    Bipartition bipartition;
    std::string label;
    double linear_entropy{0.0};
};

struct ResourceReport {
    PairConfig config;
    BoostParamsd boost;

    // lab frame
    double e4_lab{0.0};
    double e8_lab{0.0};
    double coherence_lab_max{0.0};  ///< largest of the eight single-party coherences
    double invariant_lab{0.0};

    // boosted frame
    double omega{0.0};  ///< signed angle about +y, +z branch
    double cos_omega{1.0};
    double e8{0.0};
    /// GME of the pure reduction to the parties with more than one label;
    /// 0 when no party collapsed (E8 then carries the entanglement).
    double e4_boosted{0.0};
    std::optional<bool> four_party_separable;  ///< set when the certificate was computed
    double coherence_minus{0.0};
    double coherence_plus{0.0};
    double rel_entropy_coherence_minus{0.0};
    double rel_entropy_coherence_plus{0.0};
    double momentum_coherence_max{0.0};
    double invariant_value{0.0};
    std::string gme_argmin;
    std::vector<BipartitionEntropy> per_bipartition_entropies;

    ClosedFormPredictions predictions;
    bool degenerate{false};
    /// Largest |numerical - closed form|; empty when the comparison was skipped.
    std::optional<double> max_deviation;
    std::string note;
};

struct ReportOptions {
    /// Certify every 4-party reduction of the boosted state (70 reductions).
    bool certify_separability{false};
    /// Reports with a larger deviation throw NumericalFailure.
    double failure_threshold{1e-8};
};

ResourceReport resource_report(const PairConfig& cfg, const BoostParamsd& bp,
                               const ReportOptions& opts = {});

/// All 4-party subsets of the canonical parties, in lexicographic order.
std::vector<std::vector<Party>> four_party_subsets();

}  // namespace relcov
