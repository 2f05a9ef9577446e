#include "wakenode/calibrate.hpp"
#include "wakenode/coherence.hpp"
#include "wakenode/error.hpp"
#include "wakenode/frontend.hpp"
#include "wakenode/powersim.hpp"
#include "wakenode/signal.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace wakenode;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw Error(ErrorCode::InvalidArgument, "expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(std::span<const double> v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Signal to_signal(const Array& a, double rate) { return Signal(to_vector(a), rate); }

py::dict trace_dict(const SimTrace& t) {
    py::list timeline;
    for (const auto& iv : t.timeline) timeline.append(py::make_tuple(iv.t_start_s, iv.t_end_s, to_string(iv.state)));
    py::dict d;
    d["timeline"] = timeline;
    d["total_duration_s"] = t.total_duration_s;
    d["transmit_time_s"] = t.transmit_time_s;
    d["energy_mwh"] = t.energy_mwh;
    d["duty_cycle"] = t.duty_cycle;
    d["avg_power_mw"] = t.avg_power_mw;
    return d;
}

PowerProfile profile_from(const py::object& profile) {
    if (py::isinstance<py::str>(profile)) {
        const auto key = profile.cast<std::string>();
        auto p = find_builtin_profile(key);
        if (!p) throw Error(ErrorCode::UnknownProfile, "unknown profile '" + key + "'");
        return *p;
    }
    const auto [tx, sleep] = profile.cast<std::pair<double, double>>();
    return PowerProfile{"custom", tx, sleep, {}};
}

NodeConfig node_from(const py::object& profile, double hold_s) {
    NodeConfig cfg;
    cfg.profile = profile_from(profile);
    cfg.hold_time_s = hold_s;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Acoustic wake-up node toolkit";

    static py::exception<Error> error_type(m, "WakenodeError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string code(error_code_name(e.code()));
            py::object exc = py::reinterpret_borrow<py::object>(error_type)("[" + code + "] " + e.what());
            exc.attr("code") = code;
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def(
        "resample",
        [](const Array& x, double rate, double target) {
            return to_array(resample(to_signal(x, rate), target).samples());
        },
        py::arg("x"), py::arg("rate_hz"), py::arg("target_hz"));
    m.def(
        "find_delay",
        [](const Array& ref, const Array& cand, std::optional<std::size_t> window) {
            return find_delay(to_signal(ref, 1.0), to_signal(cand, 1.0), window);
        },
        py::arg("reference"), py::arg("candidate"), py::arg("window") = py::none());

    m.def(
        "magnitude_squared_coherence",
        [](const Array& x, const Array& y, double rate, std::size_t segments, double overlap,
           const std::string& window) {
            const WelchParams p{segments, overlap, window_kind_from_string(window), std::nullopt};
            const auto est = magnitude_squared_coherence(to_signal(x, rate), to_signal(y, rate), p);
            return py::make_tuple(to_array(est.frequencies_hz), to_array(est.values));
        },
        py::arg("x"), py::arg("y"), py::arg("rate_hz"), py::arg("segments") = 8, py::arg("overlap") = 0.5,
        py::arg("window") = "hamming");
    m.def(
        "peak_envelope",
        [](const Array& x, std::size_t separation) {
            const auto v = to_vector(x);
            return to_array(peak_envelope(v, separation));
        },
        py::arg("x"), py::arg("separation") = kDefaultPeakSeparation);
    m.def(
        "coherence_score",
        [](const Array& source, const Array& recording, double source_rate, std::optional<double> recording_rate) {
            const auto r = evaluate_recording(to_signal(source, source_rate),
                                              to_signal(recording, recording_rate.value_or(source_rate)));
            py::dict d;
            d["score"] = r.score;
            d["delay_samples"] = r.delay_samples;
            d["frequencies_hz"] = to_array(r.coherence.frequencies_hz);
            d["coherence"] = to_array(r.coherence.values);
            d["envelope"] = to_array(r.envelope);
            return d;
        },
        py::arg("source"), py::arg("recording"), py::arg("source_rate_hz"), py::arg("recording_rate_hz") = py::none());
    m.def(
        "rank_microphones",
        [](bool require_analog, std::optional<double> supply_v) {
            const auto mics = reference_microphones();
            py::list out;
            for (const auto& r : rank_microphones(mics, require_analog, supply_v)) {
                py::dict d;
                d["rank"] = r.rank;
                d["name"] = r.mic.name;
                d["accuracy"] = r.mic.accuracy;
                d["power_mw"] = r.mic.power_mw;
                d["configuration"] = to_string(r.mic.configuration);
                d["eligible"] = r.eligible;
                d["reasons"] = r.reasons;
                out.append(d);
            }
            return out;
        },
        py::arg("require_analog") = true, py::arg("supply_v") = 3.3);

    py::class_<CircuitParams>(m, "CircuitParams")
        .def(py::init<>())
        .def_readwrite("vdd_v", &CircuitParams::vdd_v)
        .def_readwrite("rf_ohm", &CircuitParams::rf_ohm)
        .def_readwrite("r1_ohm", &CircuitParams::r1_ohm)
        .def_readwrite("r5_ohm", &CircuitParams::r5_ohm)
        .def_readwrite("r6_ohm", &CircuitParams::r6_ohm)
        .def_readwrite("c5_f", &CircuitParams::c5_f)
        .def_readwrite("diode_drop_v", &CircuitParams::diode_drop_v);
    m.def("amplifier_gain", &amplifier_gain, py::arg("params") = CircuitParams{});
    m.def("common_mode", &common_mode, py::arg("params") = CircuitParams{});
    m.def("gain_db", &gain_db, py::arg("gain"));
    m.def(
        "amplify", [](const Array& x, double rate, const CircuitParams& p) {
            return to_array(amplify(to_signal(x, rate), p).samples());
        },
        py::arg("x"), py::arg("rate_hz"), py::arg("params") = CircuitParams{});
    m.def(
        "envelope_detect", [](const Array& x, double rate, const CircuitParams& p) {
            return to_array(envelope_detect(to_signal(x, rate), p).samples());
        },
        py::arg("x"), py::arg("rate_hz"), py::arg("params") = CircuitParams{});
    m.def(
        "threshold_out",
        [](const Array& env, double rate, double threshold) {
            const auto w = threshold_out(to_signal(env, rate), threshold);
            py::array_t<bool> out(static_cast<py::ssize_t>(w.size()));
            auto* dst = out.mutable_data();
            for (std::size_t i = 0; i < w.size(); ++i) dst[i] = w.samples[i] == Level::High;
            return out;
        },
        py::arg("envelope"), py::arg("rate_hz"), py::arg("threshold_v"),
        "Wake line as booleans: True is the idle (high) level, False requests wake-up.");

    m.def(
        "simulate",
        [](const std::vector<std::pair<double, bool>>& segments, const py::object& profile, double hold_s) {
            Scenario sc;
            for (const auto& [dur, sound] : segments) sc.segments.push_back({dur, sound, ""});
            return trace_dict(simulate(sc, node_from(profile, hold_s)));
        },
        py::arg("segments"), py::arg("profile") = "zigbee-standalone", py::arg("hold_s") = 0.0);
    m.def(
        "urban_scenario",
        [] {
            std::vector<std::pair<double, bool>> out;
            for (const auto& s : build_urban_scenario().segments) out.emplace_back(s.duration_s, s.sound_present);
            return out;
        });
    m.def("builtin_profiles", [] {
        py::dict out;
        for (const auto& key : builtin_profile_keys()) {
            const auto p = *find_builtin_profile(key);
            out[py::str(key)] = py::make_tuple(p.transmit_mw, p.sleep_mw);
        }
        return out;
    });
    m.def(
        "savings_percent", [](const py::object& profile) { return savings_percent(profile_from(profile)); },
        py::arg("profile"));
    m.def("battery_lifetime_days", &battery_lifetime_days, py::arg("avg_power_mw"), py::arg("battery_mah") = 2900.0,
          py::arg("battery_v") = 3.3);

    py::class_<CalibrationCurve>(m, "CalibrationCurve")
        .def(py::init<>())
        .def(py::init([](double a, double b, double c, double d) { return CalibrationCurve{a, b, c, d}; }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_readwrite("a", &CalibrationCurve::a)
        .def_readwrite("b", &CalibrationCurve::b)
        .def_readwrite("c", &CalibrationCurve::c)
        .def_readwrite("d", &CalibrationCurve::d)
        .def("__repr__", [](const CalibrationCurve& c) {
            return "CalibrationCurve(a=" + std::to_string(c.a) + ", b=" + std::to_string(c.b) +
                   ", c=" + std::to_string(c.c) + ", d=" + std::to_string(c.d) + ")";
        });
    m.def("adc_to_db", &adc_to_db, py::arg("adc_value"), py::arg("curve") = CalibrationCurve{});
    m.def("db_to_adc", &db_to_adc, py::arg("spl_db"), py::arg("curve") = CalibrationCurve{});
    m.def(
        "fit_curve",
        [](const Array& adc, const Array& spl) {
            const auto x = to_vector(adc);
            const auto y = to_vector(spl);
            if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "adc and spl lengths differ");
            std::vector<CalPoint> pts;
            for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({x[i], y[i]});
            const auto fit = fit_curve(pts);
            py::dict d;
            d["curve"] = fit.curve;
            d["r_squared"] = fit.r_squared;
            d["sse"] = fit.sse;
            d["iterations"] = fit.iterations;
            return d;
        },
        py::arg("adc"), py::arg("spl_db"));
}
