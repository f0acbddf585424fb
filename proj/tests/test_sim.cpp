#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ftn/cli.hpp"
#include "ftn/config.hpp"
#include "ftn/errors.hpp"
#include "ftn/plot.hpp"
#include "ftn/sim.hpp"

using namespace ftn;

namespace {

const char* kSmallCfg =
    "[plan]\n"
    "v_total = 12\n"
    "l_bands = 3\n"
    "alpha = 0.75\n"
    "[frame]\n"
    "n_fft = 32\n"
    "cp_len = 4\n"
    "n_ts = 2\n"
    "n_payload = 3\n"
    "sample_rate = 26e9\n"
    "[detector]\n"
    "survivors = auto\n"
    "[run]\n"
    "mode = nom\n"
    "frames = 2\n"
    "seed = 5\n"
    "threads = 1\n";

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("ftnsim");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

int comma_count(const std::string& line) {
    int n = 0;
    for (char c : line) n += c == ',';
    return n;
}

}  // namespace

TEST_CASE("config text covers every section") {
    const auto cfg = parse_config_text(
        "[plan]\n"
        "v_total = 24\n"
        "l_bands = 2\n"
        "alpha = 0.8\n"
        "qam = 16, 4\n"
        "variant = B\n"
        "[frame]\n"
        "n_fft = 64\n"
        "cp_len = 2\n"
        "n_ts = 3\n"
        "n_payload = 5\n"
        "sample_rate = 20e9\n"
        "[channel]\n"
        "profile = gaussian\n"
        "f_3db = 9e9\n"
        "noise_psd = 1e-4\n"
        "rop_dbm = 2\n"
        "[detector]\n"
        "survivors = 4, 2\n"
        "exhaustive = false\n"
        "reverse_order = true\n"
        "[run]\n"
        "mode = chow\n"
        "frames = 7\n"
        "seed = 11\n"
        "threads = 2\n"
        "[sweep]\n"
        "param = alpha\n"
        "values = 1.0, 0.9, 0.8\n"
        "[chow]\n"
        "target_bits = 60\n"
        "gap_db = 2.5\n");
    CHECK(cfg.v_total == 24);
    CHECK(cfg.l_bands == 2);
    CHECK(cfg.alpha == doctest::Approx(0.8));
    CHECK(cfg.qam_orders == std::vector<int>{16, 4});
    CHECK(cfg.profile_variant == 'B');
    CHECK(cfg.frame.n_fft == 64);
    CHECK(cfg.frame.cp_len == 2);
    CHECK(cfg.frame.n_ts == 3);
    CHECK(cfg.frame.n_payload == 5);
    CHECK(cfg.frame.sample_rate == doctest::Approx(20e9));
    CHECK(cfg.channel.kind == ProfileKind::gaussian_lowpass);
    CHECK(cfg.channel.f_3db == doctest::Approx(9e9));
    CHECK(cfg.channel.noise_psd == doctest::Approx(1e-4));
    CHECK(cfg.channel.rop_dbm == doctest::Approx(2.0));
    CHECK(cfg.detector.survivors_per_band == std::vector<int>{4, 2});
    CHECK_FALSE(cfg.detector.exhaustive_flag);
    CHECK(cfg.detector.reverse_order);
    CHECK(cfg.mode == RunMode::chow);
    CHECK(cfg.n_frames == 7);
    CHECK(cfg.master_seed == 11);
    CHECK(cfg.threads == 2);
    CHECK(cfg.sweep.param == "alpha");
    CHECK(cfg.sweep.values == std::vector<double>{1.0, 0.9, 0.8});
    CHECK(cfg.chow_target_bits == 60);
    CHECK(cfg.chow_gap_db == doctest::Approx(2.5));
}

TEST_CASE("config defaults, comments, and auto survivors") {
    const auto cfg = parse_config_text(
        "# leading comment\n"
        "[plan]\n"
        "v_total = 12  ; trailing note\n"
        "[detector]\n"
        "survivors = auto\n");
    CHECK(cfg.v_total == 12);
    CHECK(cfg.l_bands == 3);
    CHECK(cfg.alpha == doctest::Approx(0.9));
    CHECK(cfg.qam_orders.empty());
    CHECK(cfg.detector.survivors_per_band.empty());
    CHECK(cfg.channel.kind == ProfileKind::flat);
    CHECK(cfg.channel.noise_psd == 0.0);
    CHECK(cfg.mode == RunMode::nom);

    const auto measured = parse_config_text("[channel]\nprofile = measured-20km\n");
    CHECK(measured.channel.kind == ProfileKind::tabulated);
    CHECK(measured.channel.table.size() >= 2);
}

TEST_CASE("config parse failures carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            parse_config_text(text);
            return std::string("no error");
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
    };
    CHECK(line_of("[plan]\nbogus = 1\n").find(":2:") != std::string::npos);
    CHECK(line_of("[nope]\n").find(":1:") != std::string::npos);
    CHECK(line_of("[plan]\nv_total = twelve\n").find(":2:") != std::string::npos);
    CHECK(line_of("v_total = 12\n").find(":1:") != std::string::npos);
    CHECK(line_of("[plan\n").find(":1:") != std::string::npos);
    CHECK(line_of("[plan]\nalpha =\n").find(":2:") != std::string::npos);
    CHECK(line_of("[run]\nmode = turbo\n").find(":2:") != std::string::npos);
    CHECK(line_of("[channel]\nprofile = swamp\n").find("swamp") != std::string::npos);
    CHECK_THROWS_AS(parse_config_text("[detector]\nexhaustive = maybe\n"), ParseError);
}

TEST_CASE("table profile loads from the config") {
    const std::string table = write_temp("simtab.txt", "0 0\n13e9 -12\n");
    const auto cfg = parse_config_text("[channel]\nprofile = table:" + table + "\n");
    CHECK(cfg.channel.kind == ProfileKind::tabulated);
    REQUIRE(cfg.channel.table.size() == 2);
    CHECK(cfg.channel.table[1].second == doctest::Approx(-12.0));

    // Relative table paths resolve against the config file location.
    write_temp("simtab_rel.txt", "0 0\n13e9 -3\n");
    const std::string cfg_path =
        write_temp("simtab.cfg", "[channel]\nprofile = table:simtab_rel.txt\n");
    const auto rel = load_config(cfg_path);
    CHECK(rel.channel.table[1].second == doctest::Approx(-3.0));

    CHECK_THROWS_AS(load_config("/tmp/没有这个文件.cfg"), ParseError);
}

TEST_CASE("plan derives from the allocation profile unless overridden") {
    auto cfg = parse_config_text(kSmallCfg);
    const auto plan = plan_for(cfg);
    CHECK(plan.l_bands == 3);
    REQUIRE(plan.per_band.size() == 3);
    CHECK(plan.per_band[0].n == 4);
    CHECK(plan.per_band[0].m == 3);
    CHECK(plan.per_band[0].q == 16);
    CHECK(plan.per_band[2].q == 4);

    cfg.qam_orders = {4, 4, 4};
    CHECK(plan_for(cfg).per_band[0].q == 4);
}

TEST_CASE("noiseless loopback run is error free") {
    const auto cfg = parse_config_text(kSmallCfg);
    const auto r = run(cfg);
    CHECK(r.ber.overall.bits == 216);
    CHECK(r.ber.overall.bit_errors == 0);
    CHECK(r.ber.overall.ber == 0.0);
    REQUIRE(r.ber.per_band.size() == 3);
    for (const auto& band : r.ber.per_band) CHECK(band.ber == 0.0);
    CHECK(r.frames == 2);
    CHECK(r.seed == 5);
    CHECK(r.line_rate_bps > 0.0);
    CHECK(r.bandwidth_hz > 0.0);
    CHECK(r.wall_seconds >= 0.0);

    auto full = parse_config_text(kSmallCfg);
    full.alpha = 1.0;
    CHECK(run(full).ber.overall.ber == 0.0);
}

TEST_CASE("runs are reproducible across repeats and thread counts") {
    auto cfg = parse_config_text(kSmallCfg);
    cfg.channel.noise_psd = 1e-3;
    cfg.n_frames = 4;
    const std::string a = results_csv(cfg, {run(cfg)});
    const std::string b = results_csv(cfg, {run(cfg)});
    CHECK(a == b);
    cfg.threads = 4;
    CHECK(results_csv(cfg, {run(cfg)}) == a);
    cfg.threads = 1;
    cfg.master_seed = 6;
    CHECK(results_csv(cfg, {run(cfg)}) != a);
}

TEST_CASE("sweeps rebuild the plan per point") {
    auto cfg = parse_config_text(kSmallCfg);
    CHECK(sweep(cfg).size() == 1);  // no sweep section: single point

    cfg.sweep.param = "alpha";
    cfg.sweep.values = {1.0, 0.75};
    const auto by_alpha = sweep(cfg);
    REQUIRE(by_alpha.size() == 2);
    CHECK(by_alpha[0].plan.alpha_effective() == doctest::Approx(1.0));
    CHECK(by_alpha[1].plan.alpha_effective() == doctest::Approx(0.75));

    cfg.sweep.param = "l_bands";
    cfg.sweep.values = {1.0, 2.0};
    cfg.qam_orders = {4, 4, 4};  // cleared per point when the band count moves
    const auto by_bands = sweep(cfg);
    REQUIRE(by_bands.size() == 2);
    CHECK(by_bands[0].plan.l_bands == 1);
    CHECK(by_bands[0].plan.per_band[0].q == 8);
    CHECK(by_bands[1].plan.l_bands == 2);
    CHECK(by_bands[1].plan.per_band[0].q == 16);

    cfg.sweep.param = "voltage";
    cfg.sweep.values = {1.0};
    CHECK_THROWS_AS(sweep(cfg), ConfigError);
    cfg.sweep.param = "alpha";
    cfg.sweep.values = {};
    CHECK_THROWS_AS(sweep(cfg), ConfigError);
}

TEST_CASE("results table keeps a rectangular shape across band counts") {
    auto cfg = parse_config_text(kSmallCfg);
    cfg.sweep.param = "l_bands";
    cfg.sweep.values = {1.0, 3.0};
    const auto results = sweep(cfg);
    const std::string csv = results_csv(cfg, results);

    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "param,value,l_bands,alpha_eff,line_rate_gbps,bandwidth_ghz,ber_overall,"
          "flatness,ber_band_1,ber_band_2,ber_band_3,cm_approx,reduction_cm_pct");
    for (const auto& l : lines) CHECK(comma_count(l) == comma_count(lines[0]));
    CHECK(lines[1].rfind("l_bands,1,", 0) == 0);
    CHECK(lines[1].find(",0.00000e+00,") != std::string::npos);
    CHECK(lines[1].find(",,") != std::string::npos);  // bands 2..3 stay empty
    CHECK(lines[2].find(",,") == std::string::npos);

    const std::string single = results_csv(parse_config_text(kSmallCfg),
                                           {results[1]});
    CHECK(single.rfind("param,value,", 0) == 0);
    std::istringstream sin(single);
    std::getline(sin, line);
    std::getline(sin, line);
    CHECK(line.rfind("-,0,3,", 0) == 0);
}

TEST_CASE("bit-loaded mode runs clean at high snr") {
    auto cfg = parse_config_text(kSmallCfg);
    cfg.mode = RunMode::chow;
    cfg.channel.noise_psd = 1e-9;
    const auto r = run(cfg);
    CHECK(r.ber.overall.bits == 2 * 3 * 36);  // default target three bits per bin
    CHECK(r.ber.overall.ber == 0.0);
    CHECK(r.ber.per_band.size() == 1);
    CHECK(r.cx.approx.cm_num30 == 0);  // no tree search in this mode

    cfg.chow_target_bits = 24;
    CHECK(run(cfg).ber.overall.bits == 2 * 3 * 24);
    cfg.chow_target_bits = 4 * 12 + 1;
    CHECK_THROWS_AS(run(cfg), AllocationError);
}

TEST_CASE("frame failures surface with the frame index") {
    auto cfg = parse_config_text(kSmallCfg);
    cfg.channel.kind = ProfileKind::tabulated;
    cfg.channel.table = {{0.0, -400.0}, {13e9, -400.0}};  // annihilates the record
    try {
        run(cfg);
        FAIL("expected a frame failure");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.rfind("frame 0:", 0) == 0);
        CHECK(what.find("vanishes") != std::string::npos);
    }
}

TEST_CASE("run rejects inconsistent settings") {
    auto cfg = parse_config_text(kSmallCfg);
    cfg.n_frames = 0;
    CHECK_THROWS_AS(run(cfg), ConfigError);

    cfg = parse_config_text(kSmallCfg);
    cfg.frame.n_ts = 1;
    CHECK_THROWS_AS(run(cfg), ConfigError);

    cfg = parse_config_text(kSmallCfg);
    cfg.detector.survivors_per_band = {4, 4};
    CHECK_THROWS_AS(run(cfg), ConfigError);

    cfg = parse_config_text(kSmallCfg);
    cfg.frame.n_fft = 16;  // cannot hold 2*9+2 bins
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("command line drives runs end to end") {
    const std::string cfg_path = write_temp("cli_small.cfg", kSmallCfg);
    const std::string out = "/tmp/cli_out";
    std::filesystem::remove_all(out);

    CHECK(run_cli({"profiles"}) == 0);
    CHECK(run_cli({"run", "--config", "/tmp/missing.cfg"}) == 2);
    CHECK(run_cli({"bogus"}) == 2);
    CHECK(run_cli({"run"}) == 2);  // --config is required

    CHECK(run_cli({"run", "--config", cfg_path, "--out", out, "--frames", "1"}) == 0);
    const std::string run_csv = slurp(out + "/run.csv");
    CHECK(run_csv.rfind("param,value,", 0) == 0);
    CHECK(run_csv.find("0.00000e+00") != std::string::npos);

    CHECK(run_cli({"complexity", "--config", cfg_path, "--out", out}) == 0);
    CHECK(slurp(out + "/complexity.csv").rfind("l_bands,alpha_eff,", 0) == 0);

    CHECK(run_cli({"spectrum", "--config", cfg_path, "--out", out}) == 0);
    CHECK(slurp(out + "/spectrum.csv").rfind("freq_hz,power_db", 0) == 0);
    CHECK(slurp(out + "/spectrum.svg").find("</svg>") != std::string::npos);
}

TEST_CASE("command line sweeps write csv and plot") {
    const std::string cfg_path = write_temp(
        "cli_sweep.cfg", std::string(kSmallCfg) + "[sweep]\nparam = alpha\nvalues = 1.0, 0.75\n");
    const std::string out = "/tmp/cli_sweep_out";
    std::filesystem::remove_all(out);
    CHECK(run_cli({"sweep", "--config", cfg_path, "--out", out, "--threads", "1"}) == 0);
    const std::string csv = slurp(out + "/sweep.csv");
    CHECK(csv.rfind("param,value,", 0) == 0);
    CHECK(csv.find("alpha,1,") != std::string::npos);
    const std::string svg = slurp(out + "/sweep.svg");
    CHECK(svg.find("</svg>") != std::string::npos);

    // Zero BERs render on the axis floor rather than disappearing.
    CHECK(csv.find("0.00000e+00") != std::string::npos);

    const std::string no_sweep = write_temp("cli_nosweep.cfg", kSmallCfg);
    CHECK(run_cli({"sweep", "--config", no_sweep, "--out", out}) == 2);
}

TEST_CASE("command line reports runtime failures distinctly") {
    const std::string cfg_path = write_temp(
        "cli_dead.cfg",
        std::string(kSmallCfg) + "[channel]\nprofile = table:/tmp/cli_dead_table.txt\n");
    write_temp("cli_dead_table.txt", "0 -400\n13e9 -400\n");
    CHECK(run_cli({"run", "--config", cfg_path, "--out", "/tmp/cli_dead_out"}) == 3);
}

TEST_CASE("csv parsing round trips and rejects ragged rows") {
    const auto t = parse_csv_text("a,b\n1,2\n3,4\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.column("b") == 1);
    CHECK(t.column("zz") == -1);
    CHECK_THROWS_AS(parse_csv_text("a,b\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_csv_text(""), ParseError);
    CHECK_THROWS_AS(emit_plot(write_temp("plot_bad.csv", "x,y\n1,2\n"), "ber-alpha"),
                    ParseError);
    CHECK_THROWS_AS(emit_plot(write_temp("plot_none.csv", "value,ber_overall\n"), "ber-alpha"),
                    ParseError);
}
