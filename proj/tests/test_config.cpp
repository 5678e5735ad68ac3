#include <doctest.h>

#include "hsde/config.hpp"

using namespace hsde;

TEST_CASE("defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.L == std::vector<int>{2});
    CHECK(c.d == 1);
    CHECK(c.dt == 0.01);
    CHECK(c.beta == 1.0);
    CHECK(c.paths == 1000);
    CHECK(c.representation == Representation::w1);
    CHECK(c.w == std::array<double, 3>{1.0, 0.0, 0.0});
    CHECK(c.format == "csv");
}

TEST_CASE("weights and signs follow the representation and u") {
    const RunConfig c = parse_config("representation = w2\nu = -3");
    CHECK(c.w == std::array<double, 3>{0.0, 1.0, 0.0});
    CHECK(c.e == std::array<int, 3>{-1, -1, -1});
    CHECK(c.scheme().w_eps() == -1.0);
    CHECK(c.model().u == -3.0);
}

TEST_CASE("mixed weights need the full representation") {
    CHECK_THROWS_AS(parse_config("w1 = 0.5\nw2 = 0.5"), ConfigError);
    CHECK_NOTHROW(parse_config("representation = full\nw1 = 0.5\nw2 = 0.5"));
    CHECK_THROWS_AS(parse_config("representation = full\nw1 = 0.5\nw2 = 0.4"), ConfigError);
    CHECK_THROWS_AS(parse_config("u = 2\ne1 = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("representation = full\ne1 = 2"), ConfigError);
}

TEST_CASE("errors name the offending key") {
    try {
        parse_config("dt = 0.01\nbogus = 3");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("paths = many"), ConfigError);
    CHECK_THROWS_AS(parse_config("dt = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("extrapolate = maybe"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta = 1\ncheckpoints = 0.5, 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("corr_ref = 5"), ConfigError);
}

TEST_CASE("multi-extent lattices") {
    const RunConfig c = parse_config("L = 3x2\nboundary = open");
    CHECK(c.d == 2);
    CHECK(c.lattice().n_sites() == 6);
    CHECK(c.lattice().label() == "3x2");
    CHECK_THROWS_AS(parse_config("L = 3x2\nd = 3"), ConfigError);
    CHECK(parse_config("L = 4\nd = 2").lattice().n_sites() == 16);
}

TEST_CASE("serialization round trip") {
    const RunConfig c = parse_config(
        "L = 3x2\nu = -4.25\nt = -1\nmu = 0\nrepresentation = w2\ncheckpoints = 0.5, 1\n"
        "extrapolate = true\nseed = 123456789012\ntoy_lambdas = -1, 0.5\nansatz = uniform\n"
        "path = out.csv # trailing comment\nformat = json");
    const RunConfig d = parse_config(serialize_config(c));
    CHECK(c == d);
    CHECK(serialize_config(c) == serialize_config(d));
    CHECK(d.seed == 123456789012ull);
    CHECK(d.output_path == "out.csv");
    CHECK_FALSE(c == parse_config(""));
}

TEST_CASE("derived run descriptions") {
    const RunConfig c = parse_config("L = 2\nd = 2\nboundary = periodic\nu = 2\nbeta = 3\ntoy_steps = 300\nzt_dt = 0.02");
    CHECK(c.sim().lattice.n_sites() == 4);
    CHECK(c.sim().beta == 3.0);
    CHECK(c.toy(3.0).dt == doctest::Approx(0.01));
    CHECK(c.zerotemp().dt == 0.02);
    CHECK(c.pf().paths == 1000);
}
