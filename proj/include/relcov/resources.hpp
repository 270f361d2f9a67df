#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcov/quantum_state.hpp"

namespace relcov {

/// A split of n party positions into two nonempty sides.
///
/// Canonical form: part A is the smaller side; for equal sizes it is the
/// side holding position 0. This reproduces the usual listing
/// 1|234, 2|134, 3|124, 4|123, 12|34, 13|24, 14|23.
class Bipartition {
public:
    Bipartition(std::uint32_t part_a, int n);

    std::uint32_t part_a() const { return part_a_; }
    std::uint32_t part_b() const { return full_mask() & ~part_a_; }
    int party_count() const { return n_; }
    int size_a() const;
    int size_b() const { return n_ - size_a(); }
    bool in_a(int position) const { return (part_a_ >> position) & 1u; }

    std::vector<int> positions_a() const;

    /// e.g. "S-|P0- Px- ..." using the given party names.
    std::string describe(const std::vector<Party>& parties) const;

    bool operator==(const Bipartition&) const = default;

private:
    std::uint32_t full_mask() const { return n_ >= 32 ? ~0u : ((1u << n_) - 1u); }

    std::uint32_t part_a_;
    int n_;
};

/// All 2^(n-1) - 1 canonical bipartitions, ordered by |A| then lexicographically.
std::vector<Bipartition> enumerate_bipartitions(int n);

/// Linear entropy of one side of a pure state, computed from the 2x2 minors
/// of the reshaped amplitude matrix. Product bipartitions give exactly
/// zero-valued minors, so sqrt(2 L) keeps full precision near zero.
class BipartiteEntropyKernel {
public:
    explicit BipartiteEntropyKernel(const MultiPartyPureState& state);

    double linear_entropy(const Bipartition& bp) const;

private:
    struct Entry {
        std::vector<int> digits;
        Complex amplitude;
    };
    std::vector<int> dims_;
    std::vector<Entry> entries_;
    double norm2_{1.0};
};

struct GmeResult {
    double value{0.0};
    Bipartition argmin{1u, 2};
    std::vector<Bipartition> bipartitions;
    std::vector<double> linear_entropies;
};

/// Ties closer than this in linear entropy go to the earliest bipartition.
inline constexpr double kGmeTieTolerance = 1e-12;

/// Generalized concurrence: min over bipartitions of sqrt(2 L(rho_A)).
GmeResult gme(const MultiPartyPureState& state);

/// ||rho - rho_diag||^2 in the stored computational basis.
double coherence_linear(const DensityMatrix& rho);
double coherence_linear(const DensityMatrix& rho, const ValueBasis& basis);

/// S(dephase(rho)) - S(rho), natural log.
double coherence_relative_entropy(const DensityMatrix& rho);
double coherence_relative_entropy(const DensityMatrix& rho, const ValueBasis& basis);

struct SeparabilityCertificate {
    bool separable{false};
    double max_deviation{0.0};
};

/// Compares rho with sum_k w_k (x)_i |phi_ki><phi_ki| assembled from the
/// product branches of `parent`. Agreement certifies that rho is a mixture
/// of product states, i.e. fully separable.
SeparabilityCertificate separability_structure_check(const DensityMatrix& rho,
                                                     const MultiPartyPureState& parent,
                                                     double tolerance = 1e-10);

/// (e4 + e8) / sqrt(1 - (c_plus + c_minus)).
double invariant_combination(double e4, double e8, double c_plus, double c_minus);

}  // namespace relcov
