#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gkdv/config.hpp"
#include "gkdv/csv.hpp"

using namespace gkdv;

TEST_CASE("minimal document parses and echoes every default") {
    const std::string doc =
        "k = 1\n"
        "eps = 0\n"
        "L = 40\n"
        "n_nodes = 2049\n"
        "dt = 1e-4\n"
        "T = 1\n"
        "data = soliton\n"
        "data_c = 0.5\n";
    RunConfig cfg = parse_config(doc);
    CHECK(cfg.k == 1);
    CHECK(cfg.eps == 0.0);
    CHECK(cfg.n_nodes == 2049);
    CHECK(cfg.data == "soliton");
    CHECK(cfg.picard_tol == 1e-10);          // default materialized
    CHECK(cfg.picard_max_iters == 50);
    const std::string echoed = echo_config(cfg);
    CHECK(echoed.find("picard_tol = ") != std::string::npos);
    CHECK(echoed.find("seed = 12345") != std::string::npos);
}

TEST_CASE("round-trip: parse(echo(cfg)) reproduces cfg") {
    RunConfig cfg;
    cfg.k = 2;
    cfg.eps = 1e-3;
    cfg.data = "xgauss";
    cfg.data_a = 0.07;
    cfg.data_x0 = 11.5;
    cfg.seed = 777;
    RunConfig back = parse_config(echo_config(cfg));
    CHECK(echo_config(back) == echo_config(cfg));
}

TEST_CASE("configuration errors name the offending key") {
    CHECK_THROWS_WITH(parse_config("k = 4\n"),
                      Catch::Matchers::ContainsSubstring("critical"));
    CHECK_THROWS_AS(parse_config("dt = 2\nT = 1\n"), ConfigError);
    CHECK_THROWS_WITH(parse_config("k = 1\nwavelength = 3\n"),
                      Catch::Matchers::ContainsSubstring("wavelength"));
    CHECK_THROWS_WITH(parse_config("dt = fast\n"),
                      Catch::Matchers::ContainsSubstring("dt"));
    CHECK_THROWS_AS(parse_config("n_nodes = 8\n"), ConfigError);
}

TEST_CASE("initial data families") {
    RunConfig cfg;
    GridSpec g = build_grid(40.0, 2049);

    cfg.data = "zero";
    InitialData zd = initial_data(cfg, g);
    CHECK(sup_norm(zd.u) == 0.0);
    CHECK(zd.clamp_magnitude == 0.0);

    cfg.data = "xexp";
    cfg.data_a = 1.0;
    InitialData xe = initial_data(cfg, g);
    // x e^{-x} at x = 1
    GridSpec g1 = build_grid(40.0, 41);
    InitialData xe1 = initial_data(cfg, g1);
    CHECK(xe1.u[1] == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(xe.u[0] == 0.0);

    cfg.data = "soliton";
    cfg.data_c = 0.5;
    cfg.data_x0 = 20.0;
    InitialData sol = initial_data(cfg, g);
    CHECK(sol.u[0] == 0.0);
    CHECK(sol.clamp_magnitude > 0.0);
    CHECK(sol.clamp_magnitude < 1e-7);  // sech^2 tail at distance 20
}

TEST_CASE("initial data from file round-trips and validates length") {
    GridSpec g = build_grid(1.0, 32);
    const std::string path = "/tmp/gkdv_test_u0.txt";
    {
        std::ofstream out(path);
        for (int j = 0; j < 32; ++j) out << (j == 0 ? 0.0 : 0.1 * j) << "\n";
    }
    RunConfig cfg;
    cfg.data = "file";
    cfg.data_file = path;
    InitialData d = initial_data(cfg, g);
    CHECK(d.u.size() == 32);
    CHECK(d.u[5] == Catch::Approx(0.5));

    GridSpec wrong = build_grid(1.0, 33);
    CHECK_THROWS_AS(initial_data(cfg, wrong), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("energy CSV emission") {
    const std::string path = "/tmp/gkdv_test_energy.csv";
    SECTION("empty record list yields a header-only file") {
        emit_energy_csv({}, path);
        std::ifstream in(path);
        std::string line;
        CHECK(std::getline(in, line));
        CHECK(line == kEnergyCsvHeader);
        CHECK_FALSE(std::getline(in, line));
    }
    SECTION("one zero record emits a row of zeros") {
        emit_energy_csv({EnergyRecord{}}, path);
        std::ifstream in(path);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(row == "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0");
    }
    SECTION("re-emitting identical records is byte-identical") {
        std::vector<EnergyRecord> recs(3);
        recs[1].t = 0.1;
        recs[1].l2_sq = 1.0 / 3.0;
        recs[2].t = 0.2;
        recs[2].l2_sq = 0.123456789012345678;
        emit_energy_csv(recs, path);
        std::stringstream a, b;
        a << std::ifstream(path).rdbuf();
        emit_energy_csv(recs, path);
        b << std::ifstream(path).rdbuf();
        CHECK(a.str() == b.str());
        CHECK(a.str().find("0.33333333333333331") != std::string::npos);
    }
    std::remove(path.c_str());
}
