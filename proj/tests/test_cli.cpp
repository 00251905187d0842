#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "headwave/config.hpp"
#include "headwave/transform.hpp"

using namespace headwave;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

int run(const std::string& args) {
    const std::string cmd =
        std::string(HEADWAVE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

const char* kFlatScene =
    "[scene]\n"
    "kind = flat2d\n"
    "u1 = -(0.6+0.2*tanh(x))\n"
    "v1 = 0.6-0.2*tanh(x)\n"
    "mode = profile\n"
    "profile = exp(-x^2)\n"
    "support = -6 6\n"
    "recon = -3 3\n";

const char* kQuadTight =
    "[quad]\n"
    "abs_tol = 1e-12\n"
    "rel_tol = 1e-11\n";

} // namespace

TEST_CASE("config parsing") {
    const RunConfig cfg = parse_config("[a]\nx = 1.5\nname = \"hello\"\n# note\n"
                                       "list = 1 2 3\n[b]\nflag = 7\n");
    CHECK(cfg.get_num("a", "x") == 1.5);
    CHECK(cfg.get("a", "name") == "hello");
    CHECK(cfg.get_nums("a", "list", 3)[2] == 3.0);
    CHECK(cfg.get_int("b", "flag") == 7);
    CHECK(cfg.get_or("b", "missing", "dflt") == "dflt");
    CHECK_THROWS_AS(cfg.get("c", "x"), ConfigError);
    CHECK_THROWS_AS(cfg.get_num("a", "name"), ConfigError);
    CHECK_THROWS_AS(cfg.get_nums("a", "list", 2), ConfigError);
    CHECK_THROWS_AS(parse_config("x = 1\n"), ConfigError);       // outside section
    CHECK_THROWS_AS(parse_config("[a\nx = 1\n"), ConfigError);   // bad header
    CHECK_THROWS_AS(parse_config("[a]\nnovalue\n"), ConfigError);
}

TEST_CASE("scene fingerprint ignores whitespace but not values") {
    const RunConfig a = parse_config("[scene]\nkind = flat2d\nu1 = -(0.5+x)\n");
    const RunConfig b = parse_config("[scene]\nu1=-(0.5 + x)\nkind=flat2d\n");
    const RunConfig c = parse_config("[scene]\nkind = flat2d\nu1 = -(0.6+x)\n");
    CHECK(scene_fingerprint(a) == scene_fingerprint(b));
    CHECK(scene_fingerprint(a) != scene_fingerprint(c));
    // other sections do not contribute
    const RunConfig d =
        parse_config("[scene]\nkind = flat2d\nu1 = -(0.5+x)\n[grid]\nx = 0 1 5\n");
    CHECK(scene_fingerprint(a) == scene_fingerprint(d));
}

TEST_CASE("forward, check, and invert round trip through the binary") {
    const std::string dir = "/tmp/headwave_cli_test";
    std::system(("mkdir -p " + dir).c_str());
    const std::string cfg = dir + "/flat.cfg";
    spit(cfg, std::string(kFlatScene) +
                  "[grid]\nx = -3 3 121\nd = 0 0.01 3\n" + kQuadTight);

    const std::string csv = dir + "/fwd.csv";
    CHECK(run("check --config " + cfg) == 0);
    CHECK(run("forward --config " + cfg + " --out " + csv) == 0);
    const std::string text = slurp(csv);
    CHECK(text.find("# scene_hash=") != std::string::npos);
    CHECK(text.find("x,d,value") != std::string::npos);

    // deterministic output
    const std::string csv2 = dir + "/fwd2.csv";
    CHECK(run("forward --config " + cfg + " --out " + csv2) == 0);
    CHECK(slurp(csv2) == text);

    const std::string rec = dir + "/rec.csv";
    CHECK(run("invert --config " + cfg + " --data " + csv + " --out " + rec) == 0);
    CHECK(slurp(rec).find("f_recon") != std::string::npos);

    // hash mismatch: different scene, same data
    const std::string cfg2 = dir + "/flat2.cfg";
    spit(cfg2, std::string(kFlatScene) + "[scene]\n" +  // reopen section, add key
                   "total_integral = 1.7724538509055160\n"
                   "[grid]\nx = -3 3 121\nd = 0 0.01 3\n");
    CHECK(run("invert --config " + cfg2 + " --data " + csv + " --out " + rec) == 5);
    CHECK(run("invert --config " + cfg2 + " --data " + csv + " --override-hash --out " +
              rec) == 0);
}

TEST_CASE("config and scene failures map to distinct exit codes") {
    const std::string dir = "/tmp/headwave_cli_test";
    std::system(("mkdir -p " + dir).c_str());

    const std::string bad = dir + "/bad.cfg";
    spit(bad, "[scene]\nkind = flat2d\n");  // missing everything else
    CHECK(run("forward --config " + bad) == 2);
    CHECK(run("forward --config " + dir + "/does_not_exist.cfg") == 2);

    const std::string invalid = dir + "/invalid.cfg";
    spit(invalid,
         "[scene]\nkind = flat2d\nu1 = 0.5\nv1 = 0.6-0.2*tanh(x)\n"
         "mode = profile\nprofile = exp(-x^2)\nsupport = -6 6\nrecon = -3 3\n"
         "[grid]\nx = -1 1 5\nd = 0 0.1 3\n");
    CHECK(run("check --config " + invalid) == 3);
    CHECK(run("forward --config " + invalid) == 3);

    CHECK(run("invert --config " + bad) == 2);  // --data is required
}

TEST_CASE("verify passes on clean data and flags corrupted data") {
    const std::string dir = "/tmp/headwave_cli_test";
    std::system(("mkdir -p " + dir).c_str());
    const std::string cfg = dir + "/verify.cfg";
    spit(cfg, std::string(kFlatScene) +
                  "[grid]\nx = -3 3 601\nd = 0 0.01 3\n" + kQuadTight);
    const std::string csv = dir + "/verify.csv";
    REQUIRE(run("forward --config " + cfg + " --out " + csv) == 0);
    CHECK(run("verify --config " + cfg + " --data " + csv) == 0);

    DataGrid g = DataGrid::read_csv(csv);
    g.values(300, 1) += 1e-3;
    const std::string csvbad = dir + "/verify_bad.csv";
    g.write_csv(csvbad);
    CHECK(run("verify --config " + cfg + " --data " + csvbad) == 1);
}

TEST_CASE("gauge subcommand reports annihilation") {
    const std::string dir = "/tmp/headwave_cli_test";
    std::system(("mkdir -p " + dir).c_str());
    const std::string cfg = dir + "/gauge.cfg";
    spit(cfg,
         "[gauge]\n"
         "kind = constant\n"
         "phi = exp(-7*((x-0.2)^2+(y-2.4)^2))\n"
         "u0 = -0.58850111725534579 0.80849640381959018\n"
         "v0 = 0.62160996827066446 0.78332690962748338\n"
         "box = -3 3 0.3 5.5\n");
    CHECK(run("gauge --config " + cfg) == 0);

    const std::string cfg2 = dir + "/gauge_bad.cfg";
    spit(cfg2,
         "[gauge]\n"
         "kind = constant\n"
         "phi = exp(-7*(x^2+y^2))\n"  // does not vanish on the gliding line
         "u0 = -0.58850111725534579 0.80849640381959018\n"
         "v0 = 0.62160996827066446 0.78332690962748338\n"
         "box = -3 3 0.3 5.5\n");
    CHECK(run("gauge --config " + cfg2) == 7);
}
