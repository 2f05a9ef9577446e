#include "wakenode/calibrate.hpp"

#include "wakenode/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace wakenode {

void CalPoint::validate() const {
    if (!(adc_value >= 0.0 && adc_value <= kAdcFullScale)) {
        throw Error(ErrorCode::OutOfRange, "ADC value " + std::to_string(adc_value) + " outside 0-1023");
    }
    if (!std::isfinite(spl_db)) throw Error(ErrorCode::InvalidArgument, "sound level must be finite");
}

double adc_to_db(double x, const CalibrationCurve& curve) {
    if (!(x > curve.c)) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "ADC value %.3f is below the calibration floor (%.3f)", x, curve.c);
        throw Error(ErrorCode::Domain, msg);
    }
    return curve.a * std::pow(x - curve.c, curve.b) + curve.d;
}

double db_to_adc(double spl_db, const CalibrationCurve& curve) {
    const double base = (spl_db - curve.d) / curve.a;
    if (!(base > 0.0) || !std::isfinite(base)) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "%.3f dB is outside the calibration curve's range", spl_db);
        throw Error(ErrorCode::Domain, msg);
    }
    const double x = curve.c + std::pow(base, 1.0 / curve.b);
    if (!std::isfinite(x)) throw Error(ErrorCode::Domain, "inverse calibration overflowed");
    return x;
}

double r_squared(std::span<const CalPoint> points, const CalibrationCurve& curve) {
    if (points.size() < 2) throw Error(ErrorCode::InvalidArgument, "R^2 needs at least two points");
    double mean = 0.0;
    for (const auto& p : points) mean += p.spl_db;
    mean /= static_cast<double>(points.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (const auto& p : points) {
        ss_tot += (p.spl_db - mean) * (p.spl_db - mean);
        const double r = p.spl_db - adc_to_db(p.adc_value, curve);
        ss_res += r * r;
    }
    if (ss_tot == 0.0) throw Error(ErrorCode::Degenerate, "reference levels have zero variance");
    return 1.0 - ss_res / ss_tot;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sse_of(std::span<const CalPoint> pts, const CalibrationCurve& k) {
    double s = 0.0;
    for (const auto& p : pts) {
        if (!(p.adc_value > k.c)) return kInf;
        const double r = p.spl_db - (k.a * std::pow(p.adc_value - k.c, k.b) + k.d);
        s += r * r;
    }
    return std::isfinite(s) ? s : kInf;
}

// Closed-form (a, d) for fixed (b, c).
bool solve_linear(std::span<const CalPoint> pts, double b, double c, CalibrationCurve& out, double& sse) {
    const auto n = static_cast<double>(pts.size());
    double mu = 0.0;
    double my = 0.0;
    for (const auto& p : pts) {
        mu += std::pow(p.adc_value - c, b);
        my += p.spl_db;
    }
    mu /= n;
    my /= n;
    double suu = 0.0;
    double suy = 0.0;
    for (const auto& p : pts) {
        const double du = std::pow(p.adc_value - c, b) - mu;
        suu += du * du;
        suy += du * (p.spl_db - my);
    }
    if (!(suu > 1e-300) || !std::isfinite(suu)) return false;
    out = {suy / suu, b, c, my - suy / suu * mu};
    sse = sse_of(pts, out);
    return std::isfinite(sse);
}

struct Candidate {
    CalibrationCurve curve;
    double sse = kInf;
};

// Damped Gauss-Newton (Levenberg-Marquardt) on (a, b, c, d); only steps that
// lower the SSE and keep c below the smallest ADC value are accepted.
Candidate refine(std::span<const CalPoint> pts, Candidate start, double c_limit, std::size_t max_iter,
                 std::size_t& iterations) {
    using Vec = std::array<double, 4>;
    using Mat = std::array<std::array<double, 4>, 4>;
    double lambda = 1e-3;
    Candidate best = start;

    for (std::size_t it = 0; it < max_iter; ++it) {
        ++iterations;
        const auto& k = best.curve;
        Mat jtj{};
        Vec jtr{};
        for (const auto& p : pts) {
            const double dx = p.adc_value - k.c;
            const double u = std::pow(dx, k.b);
            const double r = p.spl_db - (k.a * u + k.d);
            const Vec j{u, k.a * u * std::log(dx), -k.a * k.b * u / dx, 1.0};
            for (int r0 = 0; r0 < 4; ++r0) {
                jtr[r0] += j[r0] * r;
                for (int c0 = 0; c0 < 4; ++c0) jtj[r0][c0] += j[r0] * j[c0];
            }
        }

        bool improved = false;
        while (lambda < 1e12) {
            Mat m = jtj;
            Vec rhs = jtr;
            for (int i = 0; i < 4; ++i) m[i][i] += lambda * std::max(jtj[i][i], 1e-12);
            // Gaussian elimination with partial pivoting.
            bool singular = false;
            for (int col = 0; col < 4 && !singular; ++col) {
                int piv = col;
                for (int r0 = col + 1; r0 < 4; ++r0) {
                    if (std::abs(m[r0][col]) > std::abs(m[piv][col])) piv = r0;
                }
                if (std::abs(m[piv][col]) < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap(m[piv], m[col]);
                std::swap(rhs[piv], rhs[col]);
                for (int r0 = col + 1; r0 < 4; ++r0) {
                    const double f = m[r0][col] / m[col][col];
                    for (int c0 = col; c0 < 4; ++c0) m[r0][c0] -= f * m[col][c0];
                    rhs[r0] -= f * rhs[col];
                }
            }
            if (singular) {
                lambda *= 10.0;
                continue;
            }
            Vec step{};
            for (int r0 = 3; r0 >= 0; --r0) {
                double s = rhs[r0];
                for (int c0 = r0 + 1; c0 < 4; ++c0) s -= m[r0][c0] * step[c0];
                step[r0] = s / m[r0][r0];
            }
            const CalibrationCurve trial{k.a + step[0], k.b + step[1], k.c + step[2], k.d + step[3]};
            const double sse = trial.c < c_limit ? sse_of(pts, trial) : kInf;
            if (sse < best.sse) {
                const double gain = best.sse - sse;
                best = {trial, sse};
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                if (gain <= 1e-14 * std::max(sse, 1e-300)) return best;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) break;
    }
    return best;
}

}  // namespace

CurveFit fit_curve(std::span<const CalPoint> points, const FitOptions& options) {
    if (points.size() < std::max<std::size_t>(options.min_points, 4)) {
        throw Error(ErrorCode::InvalidArgument, "calibration fit needs at least " +
                                                    std::to_string(options.min_points) + " points, got " +
                                                    std::to_string(points.size()));
    }
    double min_x = kInf;
    for (const auto& p : points) {
        p.validate();
        min_x = std::min(min_x, p.adc_value);
    }
    if (!(min_x > 1.0)) {
        throw Error(ErrorCode::OutOfRange, "every ADC value must exceed the smallest candidate offset");
    }

    std::vector<double> b_grid;
    const std::size_t nb = std::max<std::size_t>(options.b_grid_size, 2);
    for (std::size_t i = 0; i < nb; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(nb - 1);
        const double mag = options.b_grid_min * std::pow(options.b_grid_max / options.b_grid_min, t);
        b_grid.push_back(-mag);
        b_grid.push_back(mag);
    }

    // Keep the best few cells, one per c value, as refinement seeds.
    std::vector<Candidate> seeds;
    const auto c_max = static_cast<long>(std::ceil(min_x)) - 1;
    for (long ci = 0; ci <= c_max; ++ci) {
        const auto c = static_cast<double>(ci);
        if (!(min_x > c)) break;
        Candidate best_for_c;
        for (double b : b_grid) {
            CalibrationCurve k;
            double sse = kInf;
            if (solve_linear(points, b, c, k, sse) && sse < best_for_c.sse) best_for_c = {k, sse};
        }
        if (!std::isfinite(best_for_c.sse)) continue;
        seeds.push_back(best_for_c);
        std::sort(seeds.begin(), seeds.end(), [](const Candidate& l, const Candidate& r) { return l.sse < r.sse; });
        if (seeds.size() > options.seeds) seeds.pop_back();
    }
    if (seeds.empty()) throw Error(ErrorCode::NotConverged, "no usable starting point; calibration data is degenerate");

    CurveFit fit;
    Candidate best;
    for (const auto& s : seeds) {
        const Candidate r = refine(points, s, min_x, options.max_iterations, fit.iterations);
        if (r.sse < best.sse) best = r;
    }
    if (!std::isfinite(best.sse)) throw Error(ErrorCode::NotConverged, "calibration fit did not converge");

    fit.curve = best.curve;
    fit.sse = best.sse;
    fit.r_squared = r_squared(points, best.curve);
    return fit;
}

}  // namespace wakenode
