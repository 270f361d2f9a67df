#pragma once

// Multi-party pure states over value-labelled bases, density operators,
// partial trace, entropies and dephasing.
//
// A party's basis is the list of distinct real labels it takes across the
// branches of a superposition (momentum components, or spin 0/1). Labels
// closer than the merge tolerance are one basis vector, so a party whose
// label never changes has dimension 1. Flat indices are mixed-radix with
// the first party most significant.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "relcov/relativity.hpp"

namespace relcov {

using Complex = std::complex<double>;

/// Degrees of freedom of the electron (-) and positron (+).
enum class Party : std::uint8_t {
    P0Electron,
    PxElectron,
    PzElectron,
    SpinElectron,
    P0Positron,
    PxPositron,
    PzPositron,
    SpinPositron,
};

inline constexpr std::array<Party, 8> kCanonicalParties = {
    Party::P0Electron, Party::PxElectron, Party::PzElectron, Party::SpinElectron,
    Party::P0Positron, Party::PxPositron, Party::PzPositron, Party::SpinPositron,
};

/// "P0-", "Px-", "Pz-", "S-", "P0+", ...
std::string_view party_name(Party p);
bool is_momentum(Party p);
bool is_spin(Party p);

/// One party's ket inside a branch: amplitudes over value labels.
struct LocalKet {
    std::vector<std::pair<double, Complex>> components;

    /// The basis ket carrying a single label.
    static LocalKet label(double value) { return LocalKet{{{value, Complex(1.0)}}}; }

    /// a|0> + b|1> for a spin party.
    static LocalKet spin(const Eigen::Vector2cd& amplitudes) {
        return LocalKet{{{0.0, amplitudes(0)}, {1.0, amplitudes(1)}}};
    }
};

/// One product term c * (ket_1 x ket_2 x ...) of a superposition.
struct Branch {
    Complex coefficient{1.0};
    std::vector<LocalKet> kets;
};

/// Per-party ordered value labels.
class ValueBasis {
public:
    ValueBasis() = default;
    ValueBasis(std::vector<std::vector<double>> labels, double merge_tolerance = kMergeTolerance);

    std::size_t party_count() const { return labels_.size(); }
    int dim(std::size_t party) const { return static_cast<int>(labels_[party].size()); }
    std::vector<int> dims() const;
    const std::vector<double>& labels(std::size_t party) const { return labels_[party]; }
    double merge_tolerance() const { return merge_tolerance_; }

    /// Index of `value` in the party's labels, or -1.
    int index_of(std::size_t party, double value) const;

    /// Restriction to the listed party positions.
    ValueBasis subset(std::span<const int> positions) const;

    bool matches(const ValueBasis& other, double tol = kMergeTolerance) const;

private:
    std::vector<std::vector<double>> labels_;
    double merge_tolerance_{kMergeTolerance};
};

/// Normalized pure state over named parties.
class MultiPartyPureState {
public:
    MultiPartyPureState(std::vector<Party> parties, ValueBasis basis, Eigen::VectorXcd amplitudes,
                        std::vector<Branch> branches = {});

    const std::vector<Party>& parties() const { return parties_; }
    const ValueBasis& basis() const { return basis_; }
    std::vector<int> dims() const { return basis_.dims(); }
    std::size_t party_count() const { return parties_.size(); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

    /// Branches the state was built from (normalized so the state equals their sum);
    /// empty when built from raw amplitudes.
    const std::vector<Branch>& branches() const { return branches_; }

    /// Position of `p` in parties(); throws std::invalid_argument if absent.
    int position(Party p) const;

private:
    std::vector<Party> parties_;
    ValueBasis basis_;
    Eigen::VectorXcd amplitudes_;
    std::vector<Branch> branches_;
};

/// Builds the normalized superposition of product branches.
MultiPartyPureState state_from_branches(std::vector<Party> parties, std::vector<Branch> branches,
                                        double merge_tolerance = kMergeTolerance);

/// Pure state over `keep` when every other party has dimension 1.
MultiPartyPureState marginal_pure_state(const MultiPartyPureState& state,
                                        std::span<const Party> keep);

/// |<a|b>|^2 for states over the same parties and labels.
double fidelity(const MultiPartyPureState& a, const MultiPartyPureState& b);

class DensityMatrix {
public:
    DensityMatrix(std::vector<Party> parties, ValueBasis basis, Eigen::MatrixXcd matrix);

    const std::vector<Party>& parties() const { return parties_; }
    const ValueBasis& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    int position(Party p) const;

    /// Largest violation among Hermiticity, unit trace and -min eigenvalue.
    double invariant_violation() const;

private:
    std::vector<Party> parties_;
    ValueBasis basis_;
    Eigen::MatrixXcd matrix_;
};

/// |psi><psi| over all parties.
DensityMatrix projector(const MultiPartyPureState& state);

/// Reduced state on `keep`; kept parties stay in the source order.
DensityMatrix partial_trace(const MultiPartyPureState& state, std::span<const Party> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Party> keep);

double purity(const DensityMatrix& rho);
double linear_entropy(const DensityMatrix& rho);

/// Eigenvalues in [-1e-9, 0) are clamped to zero; anything more negative throws.
double von_neumann_entropy(const DensityMatrix& rho);

/// Zeroes the off-diagonal entries in the stored computational basis.
DensityMatrix dephase(const DensityMatrix& rho);

/// As above, after checking that `basis` is the one rho is expressed in.
DensityMatrix dephase(const DensityMatrix& rho, const ValueBasis& basis);

namespace detail {

/// Mixed-radix split of flat indices into (kept, traced) sub-indices.
struct IndexSplit {
    std::vector<int> kept;
    std::vector<int> traced;
    int kept_dim{1};
    int traced_dim{1};
};

IndexSplit split_indices(std::span<const int> dims, std::uint32_t kept_mask);

/// Bitmask of the positions of `keep` within `parties`.
std::uint32_t party_mask(std::span<const Party> parties, std::span<const Party> keep);

}  // namespace detail

}  // namespace relcov
