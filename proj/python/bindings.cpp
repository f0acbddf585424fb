#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ftn/channel.hpp"
#include "ftn/config.hpp"
#include "ftn/constellation.hpp"
#include "ftn/errors.hpp"
#include "ftn/modem.hpp"
#include "ftn/planner.hpp"
#include "ftn/precoder.hpp"
#include "ftn/receiver.hpp"
#include "ftn/sim.hpp"

namespace py = pybind11;
using namespace ftn;

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-band compressed-spacing OFDM link simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<FramingError>(m, "FramingError", PyExc_ValueError);
    py::register_exception<AllocationError>(m, "AllocationError", PyExc_ValueError);

    py::class_<Constellation>(m, "Constellation")
        .def_readonly("order", &Constellation::order)
        .def_readonly("bits_per_symbol", &Constellation::bits_per_symbol)
        .def_readonly("points", &Constellation::points)
        .def_readonly("labels", &Constellation::labels)
        .def("point_for_label", &Constellation::point_for_label,
             py::return_value_policy::copy);
    m.def("build_constellation",
          py::overload_cast<int>(&build_constellation), py::arg("order"));
    m.def("build_constellation",
          py::overload_cast<int, double>(&build_constellation), py::arg("order"),
          py::arg("ring_ratio"));
    m.def("map_bits", &map_bits);
    m.def("nearest_point", &nearest_point);
    m.def("demap_hard", &demap_hard);

    py::class_<NomMatrix>(m, "NomMatrix")
        .def_readonly("n", &NomMatrix::n)
        .def_readonly("m", &NomMatrix::m)
        .def_readonly("entries", &NomMatrix::entries)
        .def_readonly("gram", &NomMatrix::gram);
    m.def("make_cazac_sequence", &make_cazac_sequence);
    m.def("make_oct", &make_oct);
    m.def("make_nom", &make_nom, py::arg("n"), py::arg("m"));
    m.def("precode", &precode);
    m.def("inverse_precode", &inverse_precode);

    py::class_<BandSpec>(m, "BandSpec")
        .def_readonly("n", &BandSpec::n)
        .def_readonly("m", &BandSpec::m)
        .def_readonly("q", &BandSpec::q);
    py::class_<BandPlan>(m, "BandPlan")
        .def_readonly("l_bands", &BandPlan::l_bands)
        .def_readonly("v_total", &BandPlan::v_total)
        .def_readonly("alpha", &BandPlan::alpha)
        .def_readonly("per_band", &BandPlan::per_band)
        .def_readonly("b_total", &BandPlan::b_total)
        .def("alpha_effective", &BandPlan::alpha_effective);
    m.def("make_band_plan", &make_band_plan, py::arg("v_total"), py::arg("l_bands"),
          py::arg("alpha"), py::arg("qam_orders"));
    m.def("allocation_profile", &allocation_profile, py::arg("l_bands"),
          py::arg("variant") = 'A');

    py::class_<FrameConfig>(m, "FrameConfig")
        .def(py::init<>())
        .def_readwrite("n_fft", &FrameConfig::n_fft)
        .def_readwrite("cp_len", &FrameConfig::cp_len)
        .def_readwrite("n_ts", &FrameConfig::n_ts)
        .def_readwrite("n_payload", &FrameConfig::n_payload)
        .def_readwrite("sample_rate", &FrameConfig::sample_rate);
    m.def("line_rate", &line_rate);
    m.def("occupied_bandwidth", &occupied_bandwidth);
    m.def("training_bins", &training_bins);
    m.def("hermitian_spectrum", &hermitian_spectrum);
    m.def("ofdm_modulate", &ofdm_modulate);
    m.def("ofdm_demodulate", &ofdm_demodulate);
    m.def("generate_ftn_direct", &generate_ftn_direct);

    py::enum_<ProfileKind>(m, "ProfileKind")
        .value("flat", ProfileKind::flat)
        .value("gaussian_lowpass", ProfileKind::gaussian_lowpass)
        .value("tabulated", ProfileKind::tabulated);
    py::class_<ChannelProfile>(m, "ChannelProfile")
        .def(py::init<>())
        .def_readwrite("kind", &ChannelProfile::kind)
        .def_readwrite("f_3db", &ChannelProfile::f_3db)
        .def_readwrite("table", &ChannelProfile::table)
        .def_readwrite("noise_psd", &ChannelProfile::noise_psd)
        .def_readwrite("rop_dbm", &ChannelProfile::rop_dbm);
    m.def("flat_profile", &flat_profile, py::arg("noise_psd") = 0.0,
          py::arg("rop_dbm") = 0.0);
    m.def("gaussian_profile", &gaussian_profile, py::arg("f_3db"),
          py::arg("noise_psd") = 0.0, py::arg("rop_dbm") = 0.0);
    m.def("measured_20km_profile", &measured_20km_profile, py::arg("noise_psd") = 0.0,
          py::arg("rop_dbm") = 0.0);
    m.def("load_channel_table", &load_channel_table, py::arg("path"),
          py::arg("noise_psd") = 0.0, py::arg("rop_dbm") = 0.0);
    m.def("profile_gain", &profile_gain);
    m.def("apply_channel", &apply_channel, py::arg("samples"), py::arg("profile"),
          py::arg("sample_rate"), py::arg("seed"));
    m.def("measure_spectrum", &measure_spectrum);

    py::class_<DetectorConfig>(m, "DetectorConfig")
        .def(py::init<>())
        .def_readwrite("survivors_per_band", &DetectorConfig::survivors_per_band)
        .def_readwrite("exhaustive_flag", &DetectorConfig::exhaustive_flag)
        .def_readwrite("reverse_order", &DetectorConfig::reverse_order);
    py::class_<DetectResult>(m, "DetectResult")
        .def_readonly("indices", &DetectResult::indices)
        .def_readonly("symbols", &DetectResult::symbols)
        .def_readonly("bits", &DetectResult::bits);
    m.def("viterbi_detect",
          py::overload_cast<const cvec&, const NomMatrix&, double, const Constellation&,
                            int, bool, bool>(&viterbi_detect),
          py::arg("z"), py::arg("nom"), py::arg("sigma_hat"), py::arg("constellation"),
          py::arg("survivors"), py::arg("exhaustive") = false,
          py::arg("reverse_order") = false);

    py::class_<BandCount>(m, "BandCount")
        .def_readonly("bit_errors", &BandCount::bit_errors)
        .def_readonly("bits", &BandCount::bits)
        .def_readonly("ber", &BandCount::ber);
    py::class_<BerReport>(m, "BerReport")
        .def_readonly("per_band", &BerReport::per_band)
        .def_readonly("overall", &BerReport::overall)
        .def_readonly("flatness", &BerReport::flatness);
    m.def("count_errors", &count_errors);

    py::class_<OpCount>(m, "OpCount")
        .def_property_readonly("cm", &OpCount::cm)
        .def_property_readonly("ca", &OpCount::ca);
    py::class_<ComplexityReport>(m, "ComplexityReport")
        .def_readonly("exact", &ComplexityReport::exact)
        .def_readonly("approx", &ComplexityReport::approx)
        .def_readonly("baseline_exact", &ComplexityReport::baseline_exact)
        .def_readonly("baseline_approx", &ComplexityReport::baseline_approx)
        .def_readonly("reduction_cm", &ComplexityReport::reduction_cm)
        .def_readonly("reduction_ca", &ComplexityReport::reduction_ca)
        .def_readonly("reduction_cm_exact", &ComplexityReport::reduction_cm_exact)
        .def_readonly("reduction_ca_exact", &ComplexityReport::reduction_ca_exact);
    m.def("detector_complexity", &detector_complexity, py::arg("n"), py::arg("c"),
          py::arg("q"));
    m.def("complexity_exact", &complexity_exact, py::arg("n"), py::arg("m"),
          py::arg("c"), py::arg("q"));
    m.def("complexity_approx", &complexity_approx, py::arg("n"), py::arg("c"),
          py::arg("q"));
    m.def("complexity_reduction", &complexity_reduction);
    m.def("chow_bitload", &chow_bitload, py::arg("snr_db"), py::arg("target_bits"),
          py::arg("gap_db"));

    py::enum_<RunMode>(m, "RunMode")
        .value("nom", RunMode::nom)
        .value("chow", RunMode::chow);
    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("param", &SweepSpec::param)
        .def_readwrite("values", &SweepSpec::values);
    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("v_total", &RunConfig::v_total)
        .def_readwrite("l_bands", &RunConfig::l_bands)
        .def_readwrite("alpha", &RunConfig::alpha)
        .def_readwrite("qam_orders", &RunConfig::qam_orders)
        .def_readwrite("profile_variant", &RunConfig::profile_variant)
        .def_readwrite("frame", &RunConfig::frame)
        .def_readwrite("channel", &RunConfig::channel)
        .def_readwrite("detector", &RunConfig::detector)
        .def_readwrite("mode", &RunConfig::mode)
        .def_readwrite("master_seed", &RunConfig::master_seed)
        .def_readwrite("n_frames", &RunConfig::n_frames)
        .def_readwrite("threads", &RunConfig::threads)
        .def_readwrite("chow_target_bits", &RunConfig::chow_target_bits)
        .def_readwrite("chow_gap_db", &RunConfig::chow_gap_db)
        .def_readwrite("sweep", &RunConfig::sweep);
    py::class_<RunResult>(m, "RunResult")
        .def_readonly("ber", &RunResult::ber)
        .def_readonly("cx", &RunResult::cx)
        .def_readonly("plan", &RunResult::plan)
        .def_readonly("line_rate_bps", &RunResult::line_rate_bps)
        .def_readonly("bandwidth_hz", &RunResult::bandwidth_hz)
        .def_readonly("seed", &RunResult::seed)
        .def_readonly("frames", &RunResult::frames)
        .def_readonly("wall_seconds", &RunResult::wall_seconds);
    m.def("plan_for", &plan_for);
    m.def("run", &run, py::call_guard<py::gil_scoped_release>());
    m.def("sweep", &sweep, py::call_guard<py::gil_scoped_release>());
    m.def("results_csv", &results_csv);
    m.def("parse_config_text", &parse_config_text, py::arg("text"),
          py::arg("origin") = "<config>");
    m.def("load_config", &load_config);
}
