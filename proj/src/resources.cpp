#include "relcov/resources.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relcov {

Bipartition::Bipartition(std::uint32_t part_a, int n) : part_a_(part_a), n_(n) {
    if (n < 2 || n > 31) {
        throw std::invalid_argument("bipartitions need 2 to 31 parties");
    }
    if (part_a == 0 || (part_a & ~full_mask()) != 0 || part_a == full_mask()) {
        throw std::invalid_argument("both sides of a bipartition must be nonempty");
    }
}

int Bipartition::size_a() const { return std::popcount(part_a_); }

std::vector<int> Bipartition::positions_a() const {
    std::vector<int> pos;
    for (int p = 0; p < n_; ++p) {
        if (in_a(p)) pos.push_back(p);
    }
    return pos;
}

std::string Bipartition::describe(const std::vector<Party>& parties) const {
    std::ostringstream os;
    auto side = [&](bool a) {
        bool first = true;
        for (int p = 0; p < n_; ++p) {
            if (in_a(p) != a) continue;
            if (!first) os << ' ';
            first = false;
            if (static_cast<std::size_t>(p) < parties.size()) {
                os << party_name(parties[static_cast<std::size_t>(p)]);
            } else {
                os << p;
            }
        }
    };
    side(true);
    os << " | ";
    side(false);
    return os.str();
}

std::vector<Bipartition> enumerate_bipartitions(int n) {
    if (n < 2) {
        throw std::invalid_argument("enumerate_bipartitions needs n >= 2");
    }
    if (n > 31) {
        throw std::invalid_argument("enumerate_bipartitions supports at most 31 parties");
    }
    std::vector<Bipartition> out;
    out.reserve((std::size_t{1} << (n - 1)) - 1);
    for (int k = 1; 2 * k <= n; ++k) {
        // Lexicographic k-combinations of {0..n-1}.
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            const bool half = 2 * k == n;
            if (!half || idx[0] == 0) {
                std::uint32_t mask = 0;
                for (int i : idx) mask |= 1u << i;
                out.emplace_back(mask, n);
            }
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) {
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pure-state bipartite entropy

BipartiteEntropyKernel::BipartiteEntropyKernel(const MultiPartyPureState& state)
    : dims_(state.dims()) {
    const auto& amps = state.amplitudes();
    const std::size_t n = dims_.size();
    norm2_ = amps.squaredNorm();
    for (Eigen::Index flat = 0; flat < amps.size(); ++flat) {
        if (amps(flat) == Complex(0.0)) continue;
        Entry e;
        e.amplitude = amps(flat);
        e.digits.resize(n);
        Eigen::Index rem = flat;
        for (std::size_t p = n; p-- > 0;) {
            e.digits[p] = static_cast<int>(rem % dims_[p]);
            rem /= dims_[p];
        }
        entries_.push_back(std::move(e));
    }
}

double BipartiteEntropyKernel::linear_entropy(const Bipartition& bp) const {
    if (static_cast<std::size_t>(bp.party_count()) != dims_.size()) {
        throw std::invalid_argument("bipartition does not match the state's party count");
    }
    // Row/column index of each nonzero amplitude, compressed to the support.
    std::vector<long> rows, cols;
    rows.reserve(entries_.size());
    cols.reserve(entries_.size());
    for (const auto& e : entries_) {
        long r = 0, c = 0;
        for (std::size_t p = 0; p < dims_.size(); ++p) {
            if (bp.in_a(static_cast<int>(p))) {
                r = r * dims_[p] + e.digits[p];
            } else {
                c = c * dims_[p] + e.digits[p];
            }
        }
        rows.push_back(r);
        cols.push_back(c);
    }
    auto compress = [](std::vector<long>& v) {
        std::vector<long> uniq = v;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (auto& x : v) {
            x = std::lower_bound(uniq.begin(), uniq.end(), x) - uniq.begin();
        }
        return static_cast<Eigen::Index>(uniq.size());
    };
    const Eigen::Index nr = compress(rows);
    const Eigen::Index nc = compress(cols);
    if (nr < 2 || nc < 2) return 0.0;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nr, nc);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        m(rows[i], cols[i]) = entries_[i].amplitude;
    }
    // 1 - Tr(rho_A^2) = 2 sum_{r<r', c<c'} |m_rc m_r'c' - m_rc' m_r'c|^2 (Cauchy-Binet).
    double sum = 0.0;
    for (Eigen::Index r = 0; r < nr; ++r) {
        for (Eigen::Index r2 = r + 1; r2 < nr; ++r2) {
            for (Eigen::Index c = 0; c < nc; ++c) {
                const Complex a = m(r, c);
                const Complex b = m(r2, c);
                if (a == Complex(0.0) && b == Complex(0.0)) continue;
                for (Eigen::Index c2 = c + 1; c2 < nc; ++c2) {
                    sum += std::norm(a * m(r2, c2) - m(r, c2) * b);
                }
            }
        }
    }
    return 2.0 * sum / (norm2_ * norm2_);
}

GmeResult gme(const MultiPartyPureState& state) {
    const int n = static_cast<int>(state.party_count());
    if (n < 2) {
        throw std::invalid_argument("GME needs at least two parties");
    }
    GmeResult res;
    res.bipartitions = enumerate_bipartitions(n);
    res.linear_entropies.reserve(res.bipartitions.size());
    const BipartiteEntropyKernel kernel(state);
    for (const auto& bp : res.bipartitions) {
        res.linear_entropies.push_back(kernel.linear_entropy(bp));
    }
    const double min_l =
        *std::min_element(res.linear_entropies.begin(), res.linear_entropies.end());
    for (std::size_t i = 0; i < res.linear_entropies.size(); ++i) {
        if (res.linear_entropies[i] <= min_l + kGmeTieTolerance) {
            res.argmin = res.bipartitions[i];
            break;
        }
    }
    res.value = std::sqrt(2.0 * std::max(0.0, min_l));
    return res;
}

// ---------------------------------------------------------------------------
// Coherence

double coherence_linear(const DensityMatrix& rho) {
    const auto& m = rho.matrix();
    return m.cwiseAbs2().sum() - m.diagonal().cwiseAbs2().sum();
}

double coherence_linear(const DensityMatrix& rho, const ValueBasis& basis) {
    if (!rho.basis().matches(basis)) {
        throw std::invalid_argument("coherence basis does not match the state's basis");
    }
    return coherence_linear(rho);
}

double coherence_relative_entropy(const DensityMatrix& rho) {
    const double c = von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho);
    // Dephasing never lowers the entropy; only rounding can.
    return c < 0.0 && c > -1e-12 ? 0.0 : c;
}

double coherence_relative_entropy(const DensityMatrix& rho, const ValueBasis& basis) {
    return coherence_relative_entropy(dephase(rho, basis));
}

// ---------------------------------------------------------------------------
// Structural separability

SeparabilityCertificate separability_structure_check(const DensityMatrix& rho,
                                                     const MultiPartyPureState& parent,
                                                     double tolerance) {
    if (parent.branches().empty()) {
        throw std::invalid_argument("parent state carries no branch decomposition");
    }
    std::vector<int> positions;
    for (Party p : rho.parties()) positions.push_back(parent.position(p));
    if (!rho.basis().matches(parent.basis().subset(positions))) {
        throw std::invalid_argument("reduced state basis differs from the parent's");
    }

    const std::size_t n = parent.party_count();
    Eigen::MatrixXcd recon = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    double total = 0.0;
    for (const auto& branch : parent.branches()) {
        double weight = std::norm(branch.coefficient);
        std::vector<Eigen::VectorXcd> local(n);
        for (std::size_t p = 0; p < n; ++p) {
            local[p] = Eigen::VectorXcd::Zero(parent.basis().dim(p));
            for (const auto& [value, amp] : branch.kets[p].components) {
                local[p](parent.basis().index_of(p, value)) += amp;
            }
            weight *= local[p].squaredNorm();
        }
        if (weight == 0.0) continue;
        Eigen::VectorXcd ket = Eigen::VectorXcd::Ones(1);
        for (int pos : positions) {
            const Eigen::VectorXcd& v = local[static_cast<std::size_t>(pos)];
            Eigen::VectorXcd next(ket.size() * v.size());
            for (Eigen::Index i = 0; i < ket.size(); ++i) {
                next.segment(i * v.size(), v.size()) = ket(i) * v;
            }
            ket = std::move(next);
        }
        ket.normalize();
        recon += weight * ket * ket.adjoint();
        total += weight;
    }
    recon /= total;
    SeparabilityCertificate cert;
    cert.max_deviation = (rho.matrix() - recon).cwiseAbs().maxCoeff();
    cert.separable = cert.max_deviation <= tolerance;
    return cert;
}

double invariant_combination(double e4, double e8, double c_plus, double c_minus) {
    const double c = c_plus + c_minus;
    if (!(c < 1.0)) {
        throw DomainError("invariant needs c_plus + c_minus < 1");
    }
    return (e4 + e8) / std::sqrt(1.0 - c);
}

}  // namespace relcov
