#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "relcov/resources.hpp"

using namespace relcov;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<Party> kAll(kCanonicalParties.begin(), kCanonicalParties.end());

MultiPartyPureState qubits(const Eigen::VectorXcd& amps) {
    int n = 0;
    while ((Eigen::Index{1} << n) < amps.size()) ++n;
    std::vector<std::vector<double>> labels(static_cast<std::size_t>(n), {0.0, 1.0});
    return MultiPartyPureState(std::vector<Party>(kAll.begin(), kAll.begin() + n), ValueBasis(labels),
                               amps);
}

MultiPartyPureState ghz(int n) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1 << n);
    amps(0) = amps((1 << n) - 1) = 1.0 / std::sqrt(2.0);
    return qubits(amps);
}

MultiPartyPureState pair_state(double phi, double theta) {
    auto particle = [](double z, double s) {
        return std::vector<LocalKet>{LocalKet::label(1.25), LocalKet::label(0.0), LocalKet::label(z),
                                     LocalKet::label(s)};
    };
    Branch a{std::cos(phi), particle(0.75, 0)};
    for (auto& k : particle(-0.75, 0)) a.kets.push_back(k);
    Branch b{std::sin(phi) * std::polar(1.0, theta), particle(-0.75, 1)};
    for (auto& k : particle(0.75, 1)) b.kets.push_back(k);
    return state_from_branches(kAll, {a, b});
}

DensityMatrix qubit_density(const Eigen::Matrix2cd& m) {
    return DensityMatrix({Party::SpinElectron}, ValueBasis({{0.0, 1.0}}), m);
}

// Shannon entropy of the eigenvalues of a Hermitian 2x2 matrix, via trace and determinant.
double entropy_2x2(const Eigen::Matrix2cd& m) {
    const double t = m.trace().real();
    const double d = m.determinant().real();
    const double r = std::sqrt(std::max(0.0, t * t / 4 - d));
    double s = 0;
    for (double l : {t / 2 + r, t / 2 - r}) {
        if (l > 0) s -= l * std::log(l);
    }
    return s;
}

}  // namespace

TEST_CASE("enumerate_bipartitions") {
    CHECK(enumerate_bipartitions(2).size() == 1);
    CHECK_THROWS_AS(enumerate_bipartitions(1), std::invalid_argument);

    const auto four = enumerate_bipartitions(4);
    REQUIRE(four.size() == 7);
    const std::vector<std::uint32_t> expect = {0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b0101, 0b1001};
    for (std::size_t i = 0; i < four.size(); ++i) CHECK(four[i].part_a() == expect[i]);

    const auto eight = enumerate_bipartitions(8);
    CHECK(eight.size() == 127);
    std::array<int, 9> by_size{};
    for (const auto& b : eight) {
        ++by_size[static_cast<std::size_t>(b.size_a())];
        CHECK((b.part_a() & b.part_b()) == 0u);
        CHECK((b.part_a() | b.part_b()) == 0xFFu);
    }
    CHECK(by_size[1] == 8);
    CHECK(by_size[2] == 28);
    CHECK(by_size[3] == 56);
    CHECK(by_size[4] == 35);

    CHECK_THROWS_AS(Bipartition(0u, 4), std::invalid_argument);
    CHECK_THROWS_AS(Bipartition(0b1111u, 4), std::invalid_argument);
    CHECK(Bipartition(0b1001u, 4).describe(kAll) == "P0- S- | Px- Pz-");
}

TEST_CASE("gme basics") {
    SUBCASE("product state") {
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
        amps(3) = 1.0;
        CHECK(gme(qubits(amps)).value == 0.0);
    }
    SUBCASE("GHZ saturates at 1") {
        for (int n = 2; n <= 4; ++n) {
            const GmeResult g = gme(ghz(n));
            CHECK(std::abs(g.value - 1.0) <= 1e-12);
            // All bipartitions tie; the first one wins.
            CHECK(g.argmin == enumerate_bipartitions(n).front());
        }
    }
    SUBCASE("pair state") {
        for (double phi : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
            const auto s = pair_state(phi, 0.4);
            CHECK(gme(s).value == 0.0);
            const std::array<Party, 4> core = {Party::PzElectron, Party::SpinElectron,
                                               Party::PzPositron, Party::SpinPositron};
            CHECK(std::abs(gme(marginal_pure_state(s, core)).value - std::sin(2 * phi)) < 1e-12);
        }
    }
    SUBCASE("a dimension-1 party forces zero") {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g;
        std::vector<Branch> branches;
        for (int k = 0; k < 3; ++k) {
            Branch b{Complex(g(rng), g(rng)), {}};
            for (int p = 0; p < 5; ++p) b.kets.push_back(LocalKet::label(p == 2 ? 7.0 : k));
            branches.push_back(b);
        }
        const auto s = state_from_branches(std::vector<Party>(kAll.begin(), kAll.begin() + 5), branches);
        CHECK(s.dims()[2] == 1);
        CHECK(gme(s).value == 0.0);
    }
}

TEST_CASE("minor formula matches the dense reduced state") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    Eigen::VectorXcd amps(256);
    for (auto& a : amps) a = Complex(g(rng), g(rng));
    const auto s = qubits(amps / amps.norm());
    const BipartiteEntropyKernel kernel(s);
    for (const auto& bp : enumerate_bipartitions(8)) {
        std::vector<Party> a;
        for (int p : bp.positions_a()) a.push_back(kAll[static_cast<std::size_t>(p)]);
        CHECK(std::abs(kernel.linear_entropy(bp) - linear_entropy(partial_trace(s, a))) < 1e-12);
    }
}

TEST_CASE("coherence_linear") {
    Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
    diag(0, 0) = 0.2;
    diag(1, 1) = 0.8;
    CHECK(coherence_linear(qubit_density(diag)) == 0.0);

    Eigen::Matrix2cd plus;
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(coherence_linear(qubit_density(plus)) == doctest::Approx(0.5).epsilon(1e-15));

    // Zero exactly when dephasing leaves the state fixed.
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        Eigen::Matrix2cd a;
        a << Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)),
            Complex(g(rng), g(rng));
        Eigen::Matrix2cd rho = a * a.adjoint();
        if (k % 2 == 0) rho(0, 1) = rho(1, 0) = 0.0;
        rho /= rho.trace();
        const DensityMatrix d = qubit_density(rho);
        const double c = coherence_linear(d);
        const bool fixed = (dephase(d).matrix() - d.matrix()).cwiseAbs().maxCoeff() <= 1e-12;
        CHECK(c >= 0.0);
        CHECK((c == 0.0) == fixed);
    }
}

TEST_CASE("coherence_relative_entropy") {
    Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
    diag(0, 0) = 0.4;
    diag(1, 1) = 0.6;
    CHECK(coherence_relative_entropy(qubit_density(diag)) == 0.0);

    Eigen::Matrix2cd plus;
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(coherence_relative_entropy(qubit_density(plus)) == doctest::Approx(std::log(2.0)).epsilon(1e-13));

    // Boosted spin state at phi = pi/4, Omega = pi/6 against brute-force eigenvalues.
    const double phi = kPi / 4, omega = kPi / 6;
    const double c = std::cos(omega / 2), s = std::sin(omega / 2);
    const Eigen::Vector2cd u_plus(c, s), v_minus(s, c);
    const Eigen::Matrix2cd rho = std::pow(std::cos(phi), 2) * u_plus * u_plus.adjoint() +
                                 std::pow(std::sin(phi), 2) * v_minus * v_minus.adjoint();
    Eigen::Matrix2cd diag_part = Eigen::Matrix2cd::Zero();
    diag_part.diagonal() = rho.diagonal();
    const double expect = entropy_2x2(diag_part) - entropy_2x2(rho);
    CHECK(coherence_relative_entropy(qubit_density(rho)) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(coherence_linear(qubit_density(rho)) ==
          doctest::Approx(0.5 * std::pow(std::sin(omega), 2)).epsilon(1e-14));
}

TEST_CASE("separability_structure_check") {
    const double phi = 0.6;
    const auto lab = pair_state(phi, 0.3);
    const std::array<Party, 4> core = {Party::PzElectron, Party::SpinElectron, Party::PzPositron,
                                       Party::SpinPositron};
    const auto lab_cert = separability_structure_check(projector(marginal_pure_state(lab, core)), lab);
    CHECK_FALSE(lab_cert.separable);
    CHECK(lab_cert.max_deviation > 0.1);

    Branch b{1.0, {LocalKet::label(1.0), LocalKet::spin(Eigen::Vector2cd(0.6, 0.8)),
                   LocalKet::label(-2.0), LocalKet::spin(Eigen::Vector2cd(1.0, 0.0))}};
    const std::vector<Party> parties = {Party::P0Electron, Party::SpinElectron, Party::PzPositron,
                                        Party::SpinPositron};
    const auto product = state_from_branches(parties, {b});
    const auto cert = separability_structure_check(projector(product), product);
    CHECK(cert.separable);
    CHECK(cert.max_deviation < 1e-15);
}

TEST_CASE("invariant_combination") {
    for (double phi : {0.1, 0.7, kPi / 4}) {
        const double s2 = std::sin(2 * phi);
        CHECK(invariant_combination(s2, 0.0, 0.0, 0.0) == doctest::Approx(s2));
        for (double omega : {0.1, 0.9}) {
            const double c = 0.5 * std::pow(std::sin(omega), 2);
            CHECK(invariant_combination(0.0, s2 * std::cos(omega), c, c) == doctest::Approx(s2).epsilon(1e-14));
        }
    }
    CHECK(invariant_combination(1.0, 0.0, 0.0, 0.0) == 1.0);
    CHECK_THROWS_AS(invariant_combination(0.5, 0.5, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(invariant_combination(0.5, 0.5, 0.7, 0.6), DomainError);
}
