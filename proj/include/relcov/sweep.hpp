#pragma once

// Parameter grids over the pair scenario, CSV/JSON row output and the
// cos(Omega) heatmap.

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "relcov/pair_scenario.hpp"

namespace relcov {

enum class SweepParameter { Beta, BetaV, Alpha, Phi };

std::string_view parameter_name(SweepParameter p);

/// Accepts beta, beta_v (or beta-v), alpha, phi.
SweepParameter parse_parameter(std::string_view name);

struct SweepAxis {
    SweepParameter parameter{SweepParameter::Beta};
    double min{0.0};
    double max{0.0};
    int count{2};

    /// Evenly spaced; the last point is exactly `max`.
    double value(int i) const;
};

/// Parses NAME:MIN:MAX:N.
SweepAxis parse_axis(std::string_view spec);

/// One evaluation point. Angles in radians.
struct PointParameters {
    double beta{0.5};
    double beta_v{0.5};
    double alpha{std::numbers::pi / 4};
    double phi{std::numbers::pi / 4};
    double theta{0.0};
    double mass{1.0};

    PairConfig pair_config() const { return PairConfig{phi, theta, beta_v, mass}; }
    BoostParamsd boost_params() const { return BoostParamsd(beta, beta_v, alpha); }
    double get(SweepParameter p) const;
    void set(SweepParameter p, double v);
};

struct SweepSpec {
    std::vector<SweepAxis> axes;  ///< at most two; the first varies slowest
    PointParameters fixed;

    /// Throws std::invalid_argument on a malformed grid or out-of-domain value.
    void validate() const;
    std::size_t point_count() const;
    PointParameters point(std::size_t index) const;
};

struct SweepRow {
    PointParameters at;
    double cos_omega{1.0};
    double e4{0.0};
    double e8{0.0};
    double coh_minus{0.0};
    double coh_plus{0.0};
    double invariant{0.0};
    std::optional<double> max_deviation;  ///< empty for degenerate points; never throws, unlike report
};

/// Evaluates every grid point with `workers` threads; rows come back in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 1);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows);

/// cos(Omega) over (beta, beta_v) in [0, 0.999]^2 at fixed alpha.
struct Fig2Surface {
    double alpha{0.0};
    std::vector<double> speeds;       ///< grid values shared by both axes
    Eigen::MatrixXd cos_omega;        ///< (beta index, beta_v index), matrix route
    Eigen::MatrixXd cos_omega_closed; ///< closed form
    /// E8(boosted)/E4(lab) at phi = pi/4; NaN where the boost is degenerate or beta_v = 0.
    std::optional<Eigen::MatrixXd> gme_ratio;
};

inline constexpr double kFig2MaxSpeed = 0.999;

Fig2Surface compute_fig2(double alpha, int grid, unsigned workers = 1, bool with_gme = false);

void write_fig2_csv(std::ostream& os, const Fig2Surface& s);

/// Self-contained SVG heatmap of cos_omega. Colors follow a fixed
/// five-stop viridis ramp over [0, 1] whose luminance increases
/// monotonically with the value.
void write_fig2_svg(std::ostream& os, const Fig2Surface& s);

/// Ramp color for t in [0, 1] as "#rrggbb".
std::string heatmap_color(double t);

/// 17 significant digits, "." decimal point; round-trips every double.
std::string format_double(double v);

}  // namespace relcov
