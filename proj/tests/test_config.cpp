#include <cstdint>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ssabsorb/config.hpp"
#include "ssabsorb/runner.hpp"

using namespace ssabsorb;

namespace {

const char* saw_cfg = R"(# saw-tooth model
[model]
alpha = 1
bbar = 1
sigma = 0
kill_q = 0

[model.jumps]
type = exp_mixture
rates = 0.5
intensities = 1.0

[grid]
start = 0.5
stop = 50
count = 8
spacing = log
)";

}  // namespace

TEST_CASE("saw-tooth file parses to the expected model") {
    run_config cfg = parse_config(saw_cfg);
    CHECK(cfg.model.alpha == 1.0);
    CHECK(cfg.model.jumps.kind == jump_kind::exp_mixture);
    REQUIRE(cfg.model.jumps.terms.size() == 1);
    CHECK(cfg.model.jumps.terms[0].rate == 0.5);
    exponent_handle h(cfg.model);
    CHECK(h.classify_regime().bounded_variation);
    CHECK(h.classify_regime().b == doctest::Approx(1.0));
    auto vals = cfg.grid.values();
    REQUIRE(vals.size() == 8);
    CHECK(vals.front() == doctest::Approx(0.5));
    CHECK(vals.back() == doctest::Approx(50.0));
}

TEST_CASE("schema violations carry line numbers") {
    SUBCASE("negative sigma rejected by the model invariant") {
        std::string text(saw_cfg);
        size_t pos = text.find("sigma = 0");
        text.replace(pos, 9, "sigma = -1");
        CHECK_THROWS_AS(parse_config(text), config_error);
    }
    SUBCASE("missing alpha") {
        CHECK_THROWS_WITH_AS(
            parse_config("[model]\nbbar = 1\n"),
            "missing required key 'alpha' in section [model]", config_error);
    }
    SUBCASE("malformed number names the line") {
        try {
            parse_config("[model]\nalpha = fast\nbbar = 1\n");
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("unknown key rejected") {
        std::string text(saw_cfg);
        text += "\n[model]\n";  // duplicate section is merged, then:
        CHECK_THROWS_AS(parse_config(std::string(saw_cfg) +
                                     "[grid]\nshape = round\n"),
                        config_error);
    }
    SUBCASE("unknown jump type") {
        CHECK_THROWS_AS(
            parse_config("[model]\nalpha=1\nbbar=1\n"
                         "[model.jumps]\ntype = fancy\n"),
            config_error);
    }
}

TEST_CASE("grid spacing variants") {
    grid_spec g{1.0, 5.0, 5, false};
    auto lin = g.values();
    CHECK(lin[1] == doctest::Approx(2.0));
    g.log_spacing = true;
    auto lg = g.values();
    CHECK(lg[1] / lg[0] == doctest::Approx(lg[4] / lg[3]).epsilon(1e-12));
    g.count = 0;
    CHECK_THROWS_AS(g.validate(), config_error);
}

TEST_CASE("float formatting is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e-12) == "1e-12");
    double v = 0.1234567890123456789;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("CSV output is byte-identical across runs") {
    run_config cfg = parse_config(saw_cfg);
    std::ostringstream a, b;
    CHECK(run_command("survival", cfg, a) == 0);
    CHECK(run_command("survival", cfg, b) == 0);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("t,S,s,method,trunc_order,err_bound\n", 0) == 0);
    // 8 data rows + header
    int lines = 0;
    for (char c : a.str())
        if (c == '\n') ++lines;
    CHECK(lines == 9);
}

TEST_CASE("constants command reports the Gamma-ratio example") {
    run_config cfg = parse_config(saw_cfg);
    std::ostringstream out;
    CHECK(run_command("constants", cfg, out) == 0);
    std::string s = out.str();
    CHECK(s.find("regime,bounded_variation") != std::string::npos);
    CHECK(s.find("root_kind,cramer_theta") != std::string::npos);
    auto value_of = [&](const std::string& key) {
        size_t p = s.find("\n" + key + ",");
        REQUIRE(p != std::string::npos);
        return std::stod(s.substr(p + key.size() + 2));
    };
    CHECK(value_of("gamma") == doctest::Approx(0.5).epsilon(1e-10));
    // C_gamma = 4/pi = 1.2732395...
    CHECK(value_of("c_gamma") ==
          doctest::Approx(1.2732395447).epsilon(1e-9));
}

TEST_CASE("mc command emits the concordance table") {
    run_config cfg = parse_config(saw_cfg);
    cfg.grid.count = 3;
    cfg.mc.paths = 4000;
    std::ostringstream out;
    CHECK(run_command("mc", cfg, out) == 0);
    CHECK(out.str().rfind("t,mc_value,std_err,bias_bound,analytic,z_score\n",
                          0) == 0);
}

TEST_CASE("unknown command is a config error") {
    run_config cfg = parse_config(saw_cfg);
    std::ostringstream out;
    CHECK_THROWS_AS(run_command("plot", cfg, out), config_error);
}
