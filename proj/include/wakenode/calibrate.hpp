#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wakenode {

/// ADC reading to sound level: dB = a (x - c)^b + d, valid for x > c.
struct CalibrationCurve {
    double a = -290.5;
    double b = -0.04258;
    double c = 350.0;
    double d = 314.7;

    friend bool operator==(const CalibrationCurve&, const CalibrationCurve&) = default;
};

inline constexpr double kAdcFullScale = 1023.0;

/// One reference measurement: processed 10-bit ADC value and meter dB(Z).
struct CalPoint {
    double adc_value = 0.0;
    double spl_db = 0.0;

    void validate() const;
};

/// Throws ErrorCode::Domain for x <= c (below the calibration floor).
double adc_to_db(double x, const CalibrationCurve& curve = {});

/// Analytic inverse of adc_to_db. Throws ErrorCode::Domain when the level
/// is outside the curve's range (including the asymptote at d).
double db_to_adc(double spl_db, const CalibrationCurve& curve = {});

/// 1 - SS_res / SS_tot over dB residuals.
double r_squared(std::span<const CalPoint> points, const CalibrationCurve& curve);

struct FitOptions {
    std::size_t min_points = 6;
    std::size_t b_grid_size = 60;   // per sign
    double b_grid_min = 1e-4;       // smallest |b| on the grid
    double b_grid_max = 3.0;
    std::size_t seeds = 5;          // grid cells handed to the damped refinement
    std::size_t max_iterations = 400;
};

struct CurveFit {
    CalibrationCurve curve;
    double r_squared = 0.0;
    double sse = 0.0;
    std::size_t iterations = 0;
};

/// Least-squares fit in dB space. A coarse grid over integer c and signed
/// log-spaced b solves (a, d) in closed form per cell; the best cells seed a
/// Levenberg-Marquardt refinement of all four parameters.
CurveFit fit_curve(std::span<const CalPoint> points, const FitOptions& options = {});

}  // namespace wakenode
