#include <doctest.h>

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "relcov/sweep.hpp"

using namespace relcov;

namespace {

constexpr double kPi = std::numbers::pi;

std::string csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    write_sweep_csv(os, rows);
    return os.str();
}

// Relative luminance of "#rrggbb".
double luminance(const std::string& hex) {
    const auto channel = [&](int k) { return std::stoi(hex.substr(1 + 2 * k, 2), nullptr, 16) / 255.0; };
    return 0.2126 * channel(0) + 0.7152 * channel(1) + 0.0722 * channel(2);
}

}  // namespace

TEST_CASE("parse_axis") {
    const SweepAxis a = parse_axis("beta-v:0.1:0.9:5");
    CHECK(a.parameter == SweepParameter::BetaV);
    CHECK(a.min == 0.1);
    CHECK(a.max == 0.9);
    CHECK(a.count == 5);
    CHECK(a.value(0) == 0.1);
    CHECK(a.value(4) == 0.9);
    CHECK(a.value(2) == doctest::Approx(0.5));
    CHECK(parse_axis("beta_v:0:1:2").parameter == SweepParameter::BetaV);
    CHECK(parse_axis("phi:0:1.5:3").parameter == SweepParameter::Phi);

    CHECK_THROWS_AS(parse_axis("gamma:0:1:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_axis("beta:0:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_axis("beta:0:1:3:4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_axis("beta:x:1:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_axis("beta:0:1:2.5"), std::invalid_argument);
}

TEST_CASE("SweepSpec validation") {
    SweepSpec spec;
    spec.axes = {parse_axis("beta:0:0.9:1")};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {parse_axis("beta:0:1.2:3")};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {parse_axis("beta_v:0:0.5:3")};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {parse_axis("alpha:0:1:3"), parse_axis("alpha:0:1:3")};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {parse_axis("alpha:0:1:3"), parse_axis("phi:0:1:3"), parse_axis("beta:0:1:3")};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {parse_axis("alpha:0:1:3")};
    spec.fixed.phi = 2.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.fixed.phi = 0.3;
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("grid order: first axis varies slowest") {
    SweepSpec spec;
    spec.axes = {parse_axis("beta:0.1:0.3:3"), parse_axis("phi:0:1:2")};
    REQUIRE(spec.point_count() == 6);
    CHECK(spec.point(0).beta == 0.1);
    CHECK(spec.point(0).phi == 0.0);
    CHECK(spec.point(1).beta == 0.1);
    CHECK(spec.point(1).phi == 1.0);
    CHECK(spec.point(5).beta == 0.3);
    CHECK(spec.point(5).phi == 1.0);
}

TEST_CASE("sweep at alpha = pi/2 follows the known closed form") {
    SweepSpec spec;
    spec.axes = {parse_axis("beta:0:0.99:12"), parse_axis("beta_v:0.01:0.99:12")};
    spec.fixed.alpha = kPi / 2;
    for (const auto& r : run_sweep(spec)) {
        const double g = relcov::gamma(r.at.beta), gv = relcov::gamma(r.at.beta_v);
        CHECK(std::abs(r.cos_omega - (g + gv) / (1 + g * gv)) < 1e-9);
        CHECK(std::abs(r.invariant - std::sin(2 * r.at.phi)) < 1e-10);
    }
}

TEST_CASE("sweep corner approaches cos alpha") {
    SweepSpec spec;
    spec.axes = {parse_axis("beta:0.5:0.999999:2")};
    spec.fixed.beta_v = 0.999999;
    spec.fixed.alpha = kPi / 4;
    const auto rows = run_sweep(spec);
    CHECK(std::abs(rows.back().cos_omega - std::cos(kPi / 4)) < 1e-3);
}

TEST_CASE("CSV output") {
    SweepSpec spec;
    spec.axes = {parse_axis("alpha:0.1:1.4:4"), parse_axis("phi:0:1.5:3")};
    spec.fixed.beta = 0.7;
    spec.fixed.beta_v = 0.4;
    const std::string one = csv(run_sweep(spec, 1));
    CHECK(one == csv(run_sweep(spec, 3)));
    CHECK(one == csv(run_sweep(spec, 8)));

    std::istringstream in(one);
    std::string header;
    std::getline(in, header);
    CHECK(header == "beta,beta_v,alpha,phi,cos_omega,e4,e8,coh_minus,coh_plus,invariant,max_deviation");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
    }
    CHECK(rows == 12);
}

TEST_CASE("degenerate rows carry nan deviation") {
    SweepSpec spec;
    spec.axes = {parse_axis("beta:0:0.5:2")};
    const auto rows = run_sweep(spec);
    CHECK_FALSE(rows[0].max_deviation.has_value());
    CHECK(rows[1].max_deviation.has_value());
    CHECK(csv(rows).find(",nan\n") != std::string::npos);
}

TEST_CASE("JSON output") {
    SweepSpec spec;
    spec.axes = {parse_axis("phi:0.2:1.2:3")};
    std::ostringstream os;
    write_sweep_json(os, run_sweep(spec));
    const auto j = nlohmann::json::parse(os.str());
    REQUIRE(j.size() == 3);
    CHECK(j[1]["phi"].get<double>() == doctest::Approx(0.7));
    CHECK(j[2]["invariant"].get<double>() == doctest::Approx(std::sin(2.4)).epsilon(1e-12));
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("fig2 surface") {
    const Fig2Surface quarter = compute_fig2(kPi / 4, 25);
    CHECK(quarter.speeds.front() == 0.0);
    CHECK(quarter.speeds.back() == kFig2MaxSpeed);
    for (Eigen::Index k = 0; k < 25; ++k) {
        CHECK(std::abs(quarter.cos_omega(0, k) - 1.0) <= 1e-12);
        CHECK(std::abs(quarter.cos_omega(k, 0) - 1.0) <= 1e-12);
    }
    CHECK((quarter.cos_omega - quarter.cos_omega_closed).cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index i = 0; i < 25; ++i) {
        for (Eigen::Index j = 0; j + 1 < 25; ++j) {
            CHECK(quarter.cos_omega_closed(i, j + 1) <= quarter.cos_omega_closed(i, j) + 1e-12);
            CHECK(quarter.cos_omega_closed(j + 1, i) <= quarter.cos_omega_closed(j, i) + 1e-12);
        }
    }
    const Fig2Surface half = compute_fig2(kPi / 2, 25);
    CHECK(half.cos_omega_closed(24, 24) < 0.1);
    CHECK_THROWS_AS(compute_fig2(kPi / 4, 1), std::invalid_argument);
}

TEST_CASE("fig2 gme ratio equals cos Omega") {
    const Fig2Surface s = compute_fig2(kPi / 4, 6, 2, true);
    REQUIRE(s.gme_ratio.has_value());
    for (Eigen::Index i = 1; i < 6; ++i) {
        CHECK(std::isnan((*s.gme_ratio)(i, 0)));
        for (Eigen::Index j = 1; j < 6; ++j) {
            CHECK(std::abs((*s.gme_ratio)(i, j) - s.cos_omega(i, j)) < 1e-9);
        }
    }
    std::ostringstream os;
    write_fig2_csv(os, s);
    CHECK(os.str().rfind("alpha,beta,beta_v,cos_omega,cos_omega_closed_form,gme_ratio\n", 0) == 0);
}

TEST_CASE("fig2 svg") {
    const Fig2Surface s = compute_fig2(kPi / 2, 8);
    std::ostringstream os;
    write_fig2_svg(os, s);
    const std::string svg = os.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("1.5708") != std::string::npos);
    CHECK(svg.find("β") != std::string::npos);
    CHECK(svg.find("β_v") != std::string::npos);
    const std::regex rect("<rect [^>]*fill=\"#[0-9a-f]{6}\"");
    CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), rect), std::sregex_iterator()) >= 64);
}

TEST_CASE("heatmap ramp is monotone in luminance") {
    double last = -1;
    for (int k = 0; k <= 100; ++k) {
        const double l = luminance(heatmap_color(k / 100.0));
        CHECK(l >= last);
        last = l;
    }
    CHECK(heatmap_color(0.0) == "#440154");
    CHECK(heatmap_color(1.0) == "#fde725");
    CHECK(heatmap_color(-3.0) == heatmap_color(0.0));
}
