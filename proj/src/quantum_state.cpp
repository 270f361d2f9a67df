#include "relcov/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace relcov {

std::string_view party_name(Party p) {
    switch (p) {
        case Party::P0Electron: return "P0-";
        case Party::PxElectron: return "Px-";
        case Party::PzElectron: return "Pz-";
        case Party::SpinElectron: return "S-";
        case Party::P0Positron: return "P0+";
        case Party::PxPositron: return "Px+";
        case Party::PzPositron: return "Pz+";
        case Party::SpinPositron: return "S+";
    }
    return "?";
}

bool is_spin(Party p) { return p == Party::SpinElectron || p == Party::SpinPositron; }
bool is_momentum(Party p) { return !is_spin(p); }

// ---------------------------------------------------------------------------
// ValueBasis

ValueBasis::ValueBasis(std::vector<std::vector<double>> labels, double merge_tolerance)
    : labels_(std::move(labels)), merge_tolerance_(merge_tolerance) {
    for (const auto& party : labels_) {
        if (party.empty()) {
            throw std::invalid_argument("every party needs at least one basis label");
        }
        for (std::size_t i = 0; i < party.size(); ++i) {
            for (std::size_t j = i + 1; j < party.size(); ++j) {
                if (std::abs(party[i] - party[j]) <= merge_tolerance_) {
                    throw std::invalid_argument("basis labels closer than the merge tolerance");
                }
            }
        }
    }
}

std::vector<int> ValueBasis::dims() const {
    std::vector<int> d;
    d.reserve(labels_.size());
    for (const auto& l : labels_) d.push_back(static_cast<int>(l.size()));
    return d;
}

int ValueBasis::index_of(std::size_t party, double value) const {
    const auto& l = labels_.at(party);
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (std::abs(l[i] - value) <= merge_tolerance_) return static_cast<int>(i);
    }
    return -1;
}

ValueBasis ValueBasis::subset(std::span<const int> positions) const {
    std::vector<std::vector<double>> out;
    out.reserve(positions.size());
    for (int p : positions) out.push_back(labels_.at(static_cast<std::size_t>(p)));
    return ValueBasis(std::move(out), merge_tolerance_);
}

bool ValueBasis::matches(const ValueBasis& other, double tol) const {
    if (labels_.size() != other.labels_.size()) return false;
    for (std::size_t p = 0; p < labels_.size(); ++p) {
        if (labels_[p].size() != other.labels_[p].size()) return false;
        for (std::size_t i = 0; i < labels_[p].size(); ++i) {
            if (std::abs(labels_[p][i] - other.labels_[p][i]) > tol) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// helpers

namespace detail {

IndexSplit split_indices(std::span<const int> dims, std::uint32_t kept_mask) {
    IndexSplit s;
    int total = 1;
    for (std::size_t p = 0; p < dims.size(); ++p) {
        total *= dims[p];
        if (kept_mask & (1u << p)) {
            s.kept_dim *= dims[p];
        } else {
            s.traced_dim *= dims[p];
        }
    }
    s.kept.resize(static_cast<std::size_t>(total));
    s.traced.resize(static_cast<std::size_t>(total));
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        int kept = 0, kept_stride = 1;
        int traced = 0, traced_stride = 1;
        for (std::size_t p = dims.size(); p-- > 0;) {
            const int digit = rem % dims[p];
            rem /= dims[p];
            if (kept_mask & (1u << p)) {
                kept += digit * kept_stride;
                kept_stride *= dims[p];
            } else {
                traced += digit * traced_stride;
                traced_stride *= dims[p];
            }
        }
        s.kept[static_cast<std::size_t>(flat)] = kept;
        s.traced[static_cast<std::size_t>(flat)] = traced;
    }
    return s;
}

std::uint32_t party_mask(std::span<const Party> parties, std::span<const Party> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial trace needs at least one kept party");
    }
    std::uint32_t mask = 0;
    for (Party k : keep) {
        const auto it = std::find(parties.begin(), parties.end(), k);
        if (it == parties.end()) {
            throw std::invalid_argument("unknown party " + std::string(party_name(k)));
        }
        const auto bit = 1u << static_cast<unsigned>(it - parties.begin());
        if (mask & bit) {
            throw std::invalid_argument("party listed twice: " + std::string(party_name(k)));
        }
        mask |= bit;
    }
    return mask;
}

}  // namespace detail

namespace {

int find_position(const std::vector<Party>& parties, Party p) {
    const auto it = std::find(parties.begin(), parties.end(), p);
    if (it == parties.end()) {
        throw std::invalid_argument("unknown party " + std::string(party_name(p)));
    }
    return static_cast<int>(it - parties.begin());
}

std::vector<int> mask_positions(std::uint32_t mask, std::size_t n) {
    std::vector<int> pos;
    for (std::size_t p = 0; p < n; ++p) {
        if (mask & (1u << p)) pos.push_back(static_cast<int>(p));
    }
    return pos;
}

std::vector<Party> select_parties(const std::vector<Party>& parties, std::uint32_t mask) {
    std::vector<Party> out;
    for (std::size_t p = 0; p < parties.size(); ++p) {
        if (mask & (1u << p)) out.push_back(parties[p]);
    }
    return out;
}

int product(const std::vector<int>& dims) {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiPartyPureState

MultiPartyPureState::MultiPartyPureState(std::vector<Party> parties, ValueBasis basis,
                                         Eigen::VectorXcd amplitudes,
                                         std::vector<Branch> branches)
    : parties_(std::move(parties)),
      basis_(std::move(basis)),
      amplitudes_(std::move(amplitudes)),
      branches_(std::move(branches)) {
    if (parties_.size() != basis_.party_count()) {
        throw std::invalid_argument("party list and basis disagree in length");
    }
    if (parties_.size() > 31) {
        throw std::invalid_argument("at most 31 parties are supported");
    }
    if (amplitudes_.size() != product(basis_.dims())) {
        throw std::invalid_argument("amplitude vector does not match the basis dimensions");
    }
    const double norm = amplitudes_.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("state has zero norm");
    }
    if (std::abs(norm - 1.0) > 1e-10) {
        amplitudes_ /= norm;
        for (auto& b : branches_) b.coefficient /= norm;
    }
}

int MultiPartyPureState::position(Party p) const { return find_position(parties_, p); }

MultiPartyPureState state_from_branches(std::vector<Party> parties, std::vector<Branch> branches,
                                        double merge_tolerance) {
    if (branches.empty()) {
        throw std::invalid_argument("state needs at least one branch");
    }
    const std::size_t n = parties.size();
    if (n == 0) {
        throw std::invalid_argument("state needs at least one party");
    }
    bool any_nonzero = false;
    for (const auto& b : branches) {
        if (b.kets.size() != n) {
            throw std::invalid_argument("branch does not supply one ket per party");
        }
        for (const auto& k : b.kets) {
            if (k.components.empty()) throw std::invalid_argument("empty local ket");
        }
        any_nonzero = any_nonzero || b.coefficient != Complex(0.0);
    }
    if (!any_nonzero) {
        throw std::invalid_argument("all branch coefficients are zero");
    }
    std::erase_if(branches, [](const Branch& b) { return b.coefficient == Complex(0.0); });

    // Labels in order of first appearance.
    std::vector<std::vector<double>> labels(n);
    for (const auto& b : branches) {
        for (std::size_t p = 0; p < n; ++p) {
            for (const auto& [value, amp] : b.kets[p].components) {
                const bool seen = std::any_of(labels[p].begin(), labels[p].end(), [&](double v) {
                    return std::abs(v - value) <= merge_tolerance;
                });
                if (!seen) labels[p].push_back(value);
            }
        }
    }
    ValueBasis basis(std::move(labels), merge_tolerance);
    const std::vector<int> dims = basis.dims();

    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(product(dims));
    for (const auto& b : branches) {
        // Local amplitude vectors in basis-index form.
        std::vector<Eigen::VectorXcd> local(n);
        for (std::size_t p = 0; p < n; ++p) {
            local[p] = Eigen::VectorXcd::Zero(dims[p]);
            for (const auto& [value, amp] : b.kets[p].components) {
                local[p](basis.index_of(p, value)) += amp;
            }
        }
        Eigen::VectorXcd term = Eigen::VectorXcd::Constant(1, b.coefficient);
        for (std::size_t p = 0; p < n; ++p) {
            Eigen::VectorXcd next(term.size() * local[p].size());
            for (Eigen::Index i = 0; i < term.size(); ++i) {
                next.segment(i * local[p].size(), local[p].size()) = term(i) * local[p];
            }
            term = std::move(next);
        }
        amps += term;
    }
    return MultiPartyPureState(std::move(parties), std::move(basis), std::move(amps),
                               std::move(branches));
}

MultiPartyPureState marginal_pure_state(const MultiPartyPureState& state,
                                        std::span<const Party> keep) {
    const std::uint32_t mask = detail::party_mask(state.parties(), keep);
    const std::size_t n = state.party_count();
    for (std::size_t p = 0; p < n; ++p) {
        if (!(mask & (1u << p)) && state.basis().dim(p) != 1) {
            throw std::invalid_argument("cannot drop party " +
                                        std::string(party_name(state.parties()[p])) +
                                        ": it is not a product factor of dimension 1");
        }
    }
    const std::vector<int> pos = mask_positions(mask, n);
    std::vector<Branch> branches;
    for (const auto& b : state.branches()) {
        Branch r;
        r.coefficient = b.coefficient;
        for (std::size_t p = 0; p < n; ++p) {
            if (mask & (1u << p)) {
                r.kets.push_back(b.kets[p]);
            } else {
                Complex sum(0.0);
                for (const auto& c : b.kets[p].components) sum += c.second;
                r.coefficient *= sum;
            }
        }
        branches.push_back(std::move(r));
    }
    // Dropping dimension-1 digits leaves the mixed-radix flat index unchanged.
    return MultiPartyPureState(select_parties(state.parties(), mask), state.basis().subset(pos),
                               state.amplitudes(), std::move(branches));
}

double fidelity(const MultiPartyPureState& a, const MultiPartyPureState& b) {
    if (a.parties() != b.parties() || !a.basis().matches(b.basis())) {
        throw std::invalid_argument("states live on different parties or bases");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::vector<Party> parties, ValueBasis basis, Eigen::MatrixXcd matrix)
    : parties_(std::move(parties)), basis_(std::move(basis)), matrix_(std::move(matrix)) {
    if (parties_.size() != basis_.party_count()) {
        throw std::invalid_argument("party list and basis disagree in length");
    }
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != product(basis_.dims())) {
        throw std::invalid_argument("density matrix does not match the basis dimensions");
    }
}

int DensityMatrix::position(Party p) const { return find_position(parties_, p); }

double DensityMatrix::invariant_violation() const {
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    const double trace = std::abs(matrix_.trace() - Complex(1.0));
    const Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const double neg = std::max(0.0, -es.eigenvalues().minCoeff());
    return std::max({herm, trace, neg});
}

DensityMatrix projector(const MultiPartyPureState& state) {
    return DensityMatrix(state.parties(), state.basis(),
                         state.amplitudes() * state.amplitudes().adjoint());
}

DensityMatrix partial_trace(const MultiPartyPureState& state, std::span<const Party> keep) {
    const std::uint32_t mask = detail::party_mask(state.parties(), keep);
    const std::vector<int> dims = state.dims();
    const auto split = detail::split_indices(dims, mask);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(split.kept_dim, split.traced_dim);
    const auto& amps = state.amplitudes();
    for (Eigen::Index flat = 0; flat < amps.size(); ++flat) {
        m(split.kept[flat], split.traced[flat]) = amps(flat);
    }
    const std::vector<int> pos = mask_positions(mask, state.party_count());
    return DensityMatrix(select_parties(state.parties(), mask), state.basis().subset(pos),
                         m * m.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Party> keep) {
    const std::uint32_t mask = detail::party_mask(rho.parties(), keep);
    const std::vector<int> dims = rho.basis().dims();
    const auto split = detail::split_indices(dims, mask);
    // flat index of (kept, traced)
    std::vector<int> flat_of(static_cast<std::size_t>(split.kept_dim * split.traced_dim));
    for (std::size_t flat = 0; flat < split.kept.size(); ++flat) {
        flat_of[static_cast<std::size_t>(split.kept[flat] * split.traced_dim + split.traced[flat])] =
            static_cast<int>(flat);
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(split.kept_dim, split.kept_dim);
    const auto& m = rho.matrix();
    for (int a = 0; a < split.kept_dim; ++a) {
        for (int a2 = 0; a2 < split.kept_dim; ++a2) {
            Complex sum(0.0);
            for (int b = 0; b < split.traced_dim; ++b) {
                sum += m(flat_of[a * split.traced_dim + b], flat_of[a2 * split.traced_dim + b]);
            }
            out(a, a2) = sum;
        }
    }
    const std::vector<int> pos = mask_positions(mask, rho.parties().size());
    return DensityMatrix(select_parties(rho.parties(), mask), rho.basis().subset(pos),
                         std::move(out));
}

double purity(const DensityMatrix& rho) { return rho.matrix().cwiseAbs2().sum(); }

double linear_entropy(const DensityMatrix& rho) { return 1.0 - purity(rho); }

double von_neumann_entropy(const DensityMatrix& rho) {
    const Eigen::MatrixXcd h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double lambda : es.eigenvalues()) {
        if (lambda < -1e-9) {
            std::ostringstream os;
            os << "density matrix has eigenvalue " << lambda << " below -1e-9";
            throw NumericalFailure(os.str());
        }
        if (lambda > 0.0) s -= lambda * std::log(lambda);
    }
    return s;
}

DensityMatrix dephase(const DensityMatrix& rho) {
    Eigen::MatrixXcd diag = rho.matrix().diagonal().asDiagonal();
    return DensityMatrix(rho.parties(), rho.basis(), std::move(diag));
}

DensityMatrix dephase(const DensityMatrix& rho, const ValueBasis& basis) {
    if (!rho.basis().matches(basis)) {
        throw std::invalid_argument("dephasing basis does not match the state's basis");
    }
    return dephase(rho);
}

}  // namespace relcov
