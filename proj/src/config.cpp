#include "ssabsorb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ssabsorb {

void grid_spec::validate() const {
    if (count < 1) throw config_error("grid: count must be >= 1");
    if (!(start > 0.0)) throw config_error("grid: start must be positive");
    if (count > 1 && !(stop > start))
        throw config_error("grid: stop must exceed start");
    if (log_spacing && !(stop > 0.0))
        throw config_error("grid: log spacing requires positive endpoints");
}

std::vector<double> grid_spec::values() const {
    validate();
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (long long i = 0; i < count; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(count - 1);
        double v = log_spacing
                       ? start * std::pow(stop / start, f)
                       : start + f * (stop - start);
        out.push_back(v);
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

struct entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using section_map = std::map<std::string, std::map<std::string, entry>>;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const entry& e, const std::string& key) {
    std::string v = trim(e.value);
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        fail(e.line, key + ": expected a number, got '" + v + "'");
    return out;
}

std::vector<double> parse_number_list(const entry& e, const std::string& key) {
    std::vector<double> out;
    std::string v = e.value;
    size_t pos = 0;
    while (pos <= v.size()) {
        size_t comma = v.find(',', pos);
        std::string item =
            trim(comma == std::string::npos ? v.substr(pos)
                                            : v.substr(pos, comma - pos));
        if (item.empty())
            fail(e.line, key + ": empty element in number list");
        double x = 0.0;
        auto res = std::from_chars(item.data(), item.data() + item.size(), x);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
            fail(e.line, key + ": expected a number, got '" + item + "'");
        out.push_back(x);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

section_map tokenize(const std::string& text) {
    section_map out;
    std::istringstream is(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        size_t hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) fail(line, "empty section name");
            out[section];
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (section.empty()) fail(line, "key '" + key + "' outside a section");
        auto [it, inserted] = out[section].emplace(key, entry{value, line});
        if (!inserted) fail(line, "duplicate key '" + key + "'");
    }
    return out;
}

tabulated_density load_tabulated(const std::string& path, int line) {
    std::ifstream f(path);
    if (!f) fail(line, "cannot open tabulated jump file '" + path + "'");
    tabulated_density tab;
    std::string row;
    int n = 0;
    while (std::getline(f, row)) {
        ++n;
        std::string s = trim(row);
        if (s.empty() || s.front() == '#') continue;
        size_t comma = s.find(',');
        if (comma == std::string::npos)
            fail(line, path + ":" + std::to_string(n) + ": expected 'r,f'");
        auto num = [&](std::string item) {
            item = trim(item);
            double x = 0.0;
            auto res =
                std::from_chars(item.data(), item.data() + item.size(), x);
            if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
                fail(line, path + ":" + std::to_string(n) +
                               ": bad number '" + item + "'");
            return x;
        };
        tab.r.push_back(num(s.substr(0, comma)));
        tab.f.push_back(num(s.substr(comma + 1)));
    }
    return tab;
}

}  // namespace

run_config parse_config(const std::string& text) {
    section_map sec = tokenize(text);
    run_config cfg;

    auto get = [&](const std::string& section,
                   const std::string& key) -> entry* {
        auto sit = sec.find(section);
        if (sit == sec.end()) return nullptr;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return nullptr;
        kit->second.used = true;
        return &kit->second;
    };
    auto require = [&](const std::string& section,
                       const std::string& key) -> entry& {
        entry* e = get(section, key);
        if (!e)
            throw config_error("missing required key '" + key +
                               "' in section [" + section + "]");
        return *e;
    };

    if (sec.find("model") == sec.end())
        throw config_error("missing required section [model]");
    cfg.model.alpha = parse_number(require("model", "alpha"), "alpha");
    cfg.model.bbar = parse_number(require("model", "bbar"), "bbar");
    if (entry* e = get("model", "sigma"))
        cfg.model.sigma = parse_number(*e, "sigma");
    if (entry* e = get("model", "kill_q"))
        cfg.model.kill_q = parse_number(*e, "kill_q");

    if (sec.count("model.jumps")) {
        entry& type = require("model.jumps", "type");
        std::string kind = trim(type.value);
        if (kind == "none") {
            cfg.model.jumps.kind = jump_kind::none;
        } else if (kind == "exp_mixture") {
            cfg.model.jumps.kind = jump_kind::exp_mixture;
            auto rates =
                parse_number_list(require("model.jumps", "rates"), "rates");
            auto inten = parse_number_list(
                require("model.jumps", "intensities"), "intensities");
            if (rates.size() != inten.size())
                fail(type.line,
                     "rates[] and intensities[] must have equal length");
            for (size_t i = 0; i < rates.size(); ++i)
                cfg.model.jumps.terms.push_back({rates[i], inten[i]});
        } else if (kind == "tabulated") {
            cfg.model.jumps.kind = jump_kind::tabulated;
            entry& file = require("model.jumps", "file");
            cfg.model.jumps.tab = load_tabulated(trim(file.value), file.line);
            if (entry* e = get("model.jumps", "tail_rate"))
                cfg.model.jumps.tab.tail_rate = parse_number(*e, "tail_rate");
        } else {
            fail(type.line,
                 "type must be one of none, exp_mixture, tabulated");
        }
    }
    cfg.model.validate();

    if (sec.count("grid")) {
        cfg.grid.start = parse_number(require("grid", "start"), "start");
        cfg.grid.stop = parse_number(require("grid", "stop"), "stop");
        cfg.grid.count = static_cast<long long>(
            parse_number(require("grid", "count"), "count"));
        if (entry* e = get("grid", "spacing")) {
            std::string sp = trim(e->value);
            if (sp == "log")
                cfg.grid.log_spacing = true;
            else if (sp == "linear")
                cfg.grid.log_spacing = false;
            else
                fail(e->line, "spacing must be 'linear' or 'log'");
        }
        cfg.grid.validate();
    }

    if (entry* e = get("density", "m")) {
        cfg.density_m = static_cast<int>(parse_number(*e, "m"));
        if (cfg.density_m < 0 || cfg.density_m > 4)
            fail(e->line, "m must lie in 0..4");
    }
    if (entry* e = get("laplace", "x")) {
        cfg.laplace_x = parse_number(*e, "x");
        if (!(cfg.laplace_x > 0.0)) fail(e->line, "x must be positive");
    }

    if (sec.count("exit")) {
        cfg.has_exit = true;
        cfg.exit_s.lambda = parse_number(require("exit", "lambda"), "lambda");
        cfg.exit_s.level_a =
            parse_number(require("exit", "level_a"), "level_a");
        cfg.exit_s.start_x =
            parse_number(require("exit", "start_x"), "start_x");
        cfg.exit_s.validate();
    }

    if (sec.count("mc")) {
        if (entry* e = get("mc", "paths"))
            cfg.mc.paths = static_cast<long long>(parse_number(*e, "paths"));
        if (entry* e = get("mc", "dt")) cfg.mc.dt = parse_number(*e, "dt");
        if (entry* e = get("mc", "seed"))
            cfg.mc.seed = static_cast<std::uint64_t>(parse_number(*e, "seed"));
        if (entry* e = get("mc", "horizon"))
            cfg.mc.horizon = parse_number(*e, "horizon");
        if (entry* e = get("mc", "small_jump_cutoff"))
            cfg.mc.small_jump_cutoff =
                parse_number(*e, "small_jump_cutoff");
        cfg.mc.validate();
    }

    for (const auto& [sname, keys] : sec) {
        static const char* known[] = {"model",   "model.jumps", "grid",
                                      "density", "laplace",     "exit",
                                      "mc"};
        bool ok = false;
        for (const char* k : known) ok = ok || sname == k;
        if (!ok)
            throw config_error("unknown section [" + sname + "]");
        for (const auto& [key, e] : keys)
            if (!e.used)
                fail(e.line, "unknown key '" + key + "' in section [" +
                                 sname + "]");
    }
    return cfg;
}

run_config parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace ssabsorb
