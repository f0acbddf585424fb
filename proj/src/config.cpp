#include "ftn/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "ftn/errors.hpp"

namespace ftn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Cursor {
    const std::string& origin;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
    }
};

double to_double(const std::string& v, const Cursor& at) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') at.fail("not a number: '" + v + "'");
    return d;
}

int to_int(const std::string& v, const Cursor& at) {
    const double d = to_double(v, at);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) at.fail("not an integer: '" + v + "'");
    return i;
}

std::uint64_t to_u64(const std::string& v, const Cursor& at) {
    char* end = nullptr;
    const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') at.fail("not an unsigned integer: '" + v + "'");
    return static_cast<std::uint64_t>(u);
}

bool to_bool(const std::string& v, const Cursor& at) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    at.fail("not a boolean: '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.qam_orders.clear();

    // channel settings are collected first so profile/table/noise can appear
    // in any order within the section
    std::string chan_profile = "flat";
    std::string chan_table;
    double chan_f3db = 10e9, chan_noise = 0.0, chan_rop = 0.0;
    bool chan_seen = false;

    std::string section;
    Cursor at{origin};
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++at.line;
        std::string line = raw;
        for (const char mark : {'#', ';'}) {
            const auto pos = line.find(mark);
            if (pos != std::string::npos) line.erase(pos);
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "plan" && section != "frame" && section != "channel" &&
                section != "detector" && section != "run" && section != "sweep" &&
                section != "chow")
                at.fail("unknown section [" + section + "]");
            if (section == "channel") chan_seen = true;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) at.fail("expected key = value");
        if (section.empty()) at.fail("key '" + key + "' outside any section");

        if (section == "plan") {
            if (key == "v_total") cfg.v_total = to_int(val, at);
            else if (key == "l_bands") cfg.l_bands = to_int(val, at);
            else if (key == "alpha") cfg.alpha = to_double(val, at);
            else if (key == "qam") {
                cfg.qam_orders.clear();
                for (const auto& item : split_list(val))
                    cfg.qam_orders.push_back(to_int(item, at));
            } else if (key == "variant") {
                if (val.size() != 1) at.fail("variant must be a single letter");
                cfg.profile_variant = val[0];
            } else at.fail("unknown key '" + key + "' in [plan]");
        } else if (section == "frame") {
            if (key == "n_fft") cfg.frame.n_fft = to_int(val, at);
            else if (key == "cp_len") cfg.frame.cp_len = to_int(val, at);
            else if (key == "n_ts") cfg.frame.n_ts = to_int(val, at);
            else if (key == "n_payload") cfg.frame.n_payload = to_int(val, at);
            else if (key == "sample_rate") cfg.frame.sample_rate = to_double(val, at);
            else at.fail("unknown key '" + key + "' in [frame]");
        } else if (section == "channel") {
            if (key == "profile") chan_profile = val;
            else if (key == "f_3db") chan_f3db = to_double(val, at);
            else if (key == "noise_psd") chan_noise = to_double(val, at);
            else if (key == "rop_dbm") chan_rop = to_double(val, at);
            else at.fail("unknown key '" + key + "' in [channel]");
        } else if (section == "detector") {
            if (key == "survivors") {
                cfg.detector.survivors_per_band.clear();
                if (val != "auto")
                    for (const auto& item : split_list(val))
                        cfg.detector.survivors_per_band.push_back(to_int(item, at));
            } else if (key == "exhaustive") {
                cfg.detector.exhaustive_flag = to_bool(val, at);
            } else if (key == "reverse_order") {
                cfg.detector.reverse_order = to_bool(val, at);
            } else at.fail("unknown key '" + key + "' in [detector]");
        } else if (section == "run") {
            if (key == "mode") {
                if (val == "nom") cfg.mode = RunMode::nom;
                else if (val == "chow") cfg.mode = RunMode::chow;
                else at.fail("unknown mode '" + val + "' (nom or chow)");
            } else if (key == "frames") cfg.n_frames = to_int(val, at);
            else if (key == "seed") cfg.master_seed = to_u64(val, at);
            else if (key == "threads") cfg.threads = to_int(val, at);
            else at.fail("unknown key '" + key + "' in [run]");
        } else if (section == "sweep") {
            if (key == "param") cfg.sweep.param = val;
            else if (key == "values") {
                cfg.sweep.values.clear();
                for (const auto& item : split_list(val))
                    cfg.sweep.values.push_back(to_double(item, at));
            } else at.fail("unknown key '" + key + "' in [sweep]");
        } else if (section == "chow") {
            if (key == "target_bits") cfg.chow_target_bits = to_int(val, at);
            else if (key == "gap_db") cfg.chow_gap_db = to_double(val, at);
            else at.fail("unknown key '" + key + "' in [chow]");
        }
    }

    if (chan_seen || chan_profile != "flat") {
        if (chan_profile == "flat") {
            cfg.channel = flat_profile(chan_noise, chan_rop);
        } else if (chan_profile == "gaussian") {
            cfg.channel = gaussian_profile(chan_f3db, chan_noise, chan_rop);
        } else if (chan_profile == "measured-20km") {
            cfg.channel = measured_20km_profile(chan_noise, chan_rop);
        } else if (chan_profile.rfind("table:", 0) == 0) {
            std::filesystem::path p(chan_profile.substr(6));
            if (p.is_relative() && origin != "<config>")
                p = std::filesystem::path(origin).parent_path() / p;
            cfg.channel = load_channel_table(p.string(), chan_noise, chan_rop);
        } else {
            throw ParseError(origin + ": unknown channel profile '" + chan_profile +
                             "' (flat, gaussian, measured-20km, table:PATH)");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace ftn
