#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qduality/config.hpp"
#include "qduality/csv.hpp"
#include "qduality/experiment.hpp"

using namespace qduality;
namespace fs = std::filesystem;

namespace {

std::string error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

RunConfig short_run() {
    RunConfig c = preset("fig2-n2");
    c.tau = 0.5;
    c.dt = 1e-3;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "qduality_test_config_csv";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("presets expand to the frozen parameter sets") {
    const RunConfig a = preset("fig2-n2");
    CHECK(a.n_qubits == 2);
    CHECK(a.temperature.kind == TemperatureSpec::Kind::Constant);
    CHECK(a.temperature.beta == 1.0);
    CHECK(a.gamma == 0.02);
    CHECK(a.eps0 == 0.4);
    CHECK(a.eps_tau == 10.0);
    CHECK(a.tau == 10.0);
    CHECK(a.lambda0 == 0.02);
    CHECK(a.interaction == InteractionKind::XX);
    CHECK(a.dt == 1e-4);
    CHECK(a.record_every == 1);

    const RunConfig b = preset("figS2-n4");
    CHECK(b.n_qubits == 4);
    CHECK(b.interaction == InteractionKind::ZZ);
    CHECK(b.temperature.beta == 1.0);
    CHECK(b.gamma == 0.02);
    CHECK(b.lambda0 == 0.02);
    CHECK(b.tau == 10.0);
    CHECK(preset_expectations("figS2-n4").cost_contrast_sign == -1);
    CHECK(preset_expectations("fig2-n4").cost_contrast_sign == +1);

    const RunConfig t = preset("tdep-n2");
    CHECK(t.temperature.kind == TemperatureSpec::Kind::Sine);
    CHECK(t.temperature.schedule(10.0).at(5.0) == doctest::Approx(1.2));
    CHECK(preset("closed-n2").gamma == 0.0);
    CHECK(preset("noint-n2").interaction == InteractionKind::None);

    for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
    CHECK_THROWS_AS(preset("fig3"), ConfigError);
}

TEST_CASE("parse_config") {
    SUBCASE("preset with overrides and comments") {
        const RunConfig c = parse_config("# header\npreset = fig2-n2\n\ngamma = 0.05  # stronger\ninteraction = zz\n");
        CHECK(c.gamma == 0.05);
        CHECK(c.interaction == InteractionKind::ZZ);
        CHECK(c.n_qubits == 2);
        CHECK(c.preset == std::optional<std::string>("fig2-n2"));
    }
    SUBCASE("preset key applies before the other keys regardless of order") {
        CHECK(parse_config("n_qubits = 3\npreset = fig2-n4\n").n_qubits == 3);
    }
    SUBCASE("temperature schedule") {
        const RunConfig c = parse_config("beta = sine(1.0, 0.2)\n");
        CHECK(c.temperature.kind == TemperatureSpec::Kind::Sine);
        CHECK(c.temperature.base == 1.0);
        CHECK(c.temperature.amplitude == 0.2);
        CHECK(parse_config("beta = 0.5").temperature.beta == 0.5);
    }
    SUBCASE("to_text round-trips") {
        for (const auto& name : preset_names()) {
            RunConfig c = preset(name);
            c.output_path = "out/" + name + ".csv";
            const RunConfig back = parse_config(c.to_text());
            CHECK(back.to_text() == c.to_text().substr(c.to_text().find('\n') + 1));
            CHECK(back.dt == c.dt);
            CHECK(back.output_path == c.output_path);
        }
    }
    SUBCASE("errors name the offending key") {
        CHECK(error_key("gamma = -0.1") == "gamma");
        CHECK(error_key("gamma = fast") == "gamma");
        CHECK(error_key("gama = 0.1") == "gama");
        CHECK(error_key("tau = 1\ntau = 2") == "tau");
        CHECK(error_key("n_qubits = 2.5") == "n_qubits");
        CHECK(error_key("n_qubits = 9") == "n_qubits");
        CHECK(error_key("interaction = yy") == "interaction");
        CHECK(error_key("dt = 3e-4") == "dt");
        CHECK(error_key("record_every = 0") == "record_every");
        CHECK(error_key("beta = 0") == "beta");
        CHECK(error_key("beta = sine(0.1, 0.2)") == "beta");
        CHECK(error_key("eps0 = 0") == "eps0");
        CHECK(error_key("preset = fig9") == "preset");
        CHECK(error_key("no equals sign") == "");
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_config("/nonexistent/qduality.cfg"), ConfigError);
    }
}

TEST_CASE("CSV output") {
    const RunConfig cfg = short_run();
    RunOptions opts;
    opts.write_csv = false;
    const auto result = run_experiment(cfg, opts);

    SUBCASE("exact header") {
        std::ostringstream os;
        write_csv(os, result.trace);
        const std::string text = os.str();
        const std::string first = text.substr(0, text.find('\n'));
        CHECK(first ==
              "t,E_g,E_I,E_1,E_2,W_g,W_1,W_2,Q_g,Q_1,Q_2,Q_l,S_g,S_1,S_2,I_g,F_g,"
              "Wdis_g,Wdis_l,Wdis_delta,F_delta,W_delta,sum_rule_residual,bound_margin");
        CHECK(text.find('\r') == std::string::npos);
        CHECK(csv_header(4).size() == 3 + 4 + 1 + 4 + 1 + 4 + 1 + 1 + 4 + 9);
    }

    SUBCASE("one row per sample and a lossless round trip") {
        std::stringstream ss;
        write_csv(ss, result.trace);
        const CsvTable table = read_csv(ss);
        CHECK(table.header == csv_header(2));
        REQUIRE(table.rows.size() == 501);
        const auto residual = generalized_sum_rule_residual(result.trace);
        const auto margin = bound_check(result.trace);
        for (std::size_t k = 0; k < table.rows.size(); ++k) {
            const auto& s = result.trace.samples[k];
            const auto& row = table.rows[k];
            CHECK(row[table.column("t")] == s.t);
            CHECK(row[table.column("E_g")] == s.E_g);
            CHECK(row[table.column("Q_2")] == s.Q_i[1]);
            CHECK(row[table.column("I_g")] == s.I_g);
            CHECK(row[table.column("W_delta")] == s.W_delta);
            CHECK(row[table.column("sum_rule_residual")] == residual[k]);
            CHECK(row[table.column("bound_margin")] == margin[k]);
        }
        CHECK_THROWS_AS(table.column("nope"), std::out_of_range);
    }

    SUBCASE("repeated runs are byte-identical") {
        const fs::path dir = scratch_dir();
        RunConfig c = cfg;
        c.output_path = (dir / "a.csv").string();
        run_experiment(c);
        c.output_path = (dir / "b.csv").string();
        run_experiment(c);
        const std::string a = slurp(dir / "a.csv");
        CHECK(!a.empty());
        CHECK(a == slurp(dir / "b.csv"));
        CHECK_FALSE(fs::exists(dir / "a.csv.partial"));
    }

    SUBCASE("a failed write leaves nothing behind") {
        const fs::path dir = scratch_dir();
        const fs::path target = dir / "occupied";
        fs::create_directories(target / "child");
        CHECK_THROWS(write_csv_file(target.string(), result.trace));
        CHECK_FALSE(fs::exists(dir / "occupied.partial"));
        CHECK(fs::is_directory(target));
    }

    SUBCASE("malformed input") {
        std::istringstream empty("");
        CHECK_THROWS(read_csv(empty));
        std::istringstream ragged("a,b\n1,2\n3\n");
        CHECK_THROWS(read_csv(ragged));
        std::istringstream junk("a,b\n1,x\n");
        CHECK_THROWS(read_csv(junk));
    }
}

TEST_CASE("full-length run emits tau/dt + 1 rows") {
    RunConfig cfg = preset("fig2-n2");
    const fs::path out = scratch_dir() / "fig2-n2.csv";
    cfg.output_path = out.string();
    run_experiment(cfg);
    std::ifstream in(out);
    const CsvTable table = read_csv(in);
    CHECK(table.rows.size() == 100001);
    CHECK(table.rows.back()[0] == 10.0);
}

TEST_CASE("verify refuses light-mode recording") {
    RunConfig cfg = short_run();
    cfg.record_every = 100;
    CHECK_THROWS_AS(verify(cfg), ConfigError);
}
