#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ymmf/ymmf.h"

using Catch::Matchers::ContainsSubstring;

namespace {

struct Map {
    ymmf_map* p = nullptr;
    ~Map() { ymmf_map_free(p); }
};

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(YMMF_CLI_PATH) + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int status = pclose(f);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return std::string(YMMF_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("status names and errors", "[capi]") {
    CHECK(std::string(ymmf_status_name(YMMF_OK)) == "Ok");
    CHECK(std::string(ymmf_status_name(YMMF_ERR_SCHEMA)) == "SchemaError");
    ymmf_map* m = nullptr;
    CHECK(ymmf_map_parse("darts 4\n", &m) == YMMF_ERR_SCHEMA);
    CHECK(m == nullptr);
    CHECK_THAT(ymmf_last_error(), ContainsSubstring("1:1"));
    CHECK(ymmf_map_builtin("nonsense", &m) == YMMF_ERR_INVALID_ARGUMENT);
    CHECK(ymmf_map_load("/nonexistent/file.map", &m) != YMMF_OK);
}

TEST_CASE("map handles", "[capi]") {
    Map t;
    REQUIRE(ymmf_map_builtin("torus", &t.p) == YMMF_OK);
    ymmf_map_info info{};
    REQUIRE(ymmf_map_get_info(t.p, &info) == YMMF_OK);
    CHECK(info.genus == 1);
    CHECK(info.vertices == 1);
    CHECK(info.edges == 2);
    CHECK(info.has_polygon == 1);
    CHECK(info.loops == 3);
    CHECK(std::string(ymmf_map_loop_name(t.p, 0)) == "alpha");
    CHECK(ymmf_map_loop_name(t.p, 7) == nullptr);

    char* text = nullptr;
    REQUIRE(ymmf_map_serialize(t.p, &text) == YMMF_OK);
    Map back;
    REQUIRE(ymmf_map_parse(text, &back.p) == YMMF_OK);
    char* again = nullptr;
    REQUIRE(ymmf_map_serialize(back.p, &again) == YMMF_OK);
    CHECK(std::string(text) == std::string(again));
    CHECK(std::string(text) == slurp(data("torus.map")));
    ymmf_string_free(text);
    ymmf_string_free(again);

    ymmf_loop_info li{};
    REQUIRE(ymmf_loop_get_info(t.p, "alpha", &li) == YMMF_OK);
    CHECK(li.length == 1);
    CHECK(li.null_homologous == 0);
    CHECK(li.contractible == 0);
    REQUIRE(ymmf_loop_get_info(t.p, "comm", &li) == YMMF_OK);
    CHECK(li.null_homologous == 1);
    CHECK(li.contractible == 1);
    CHECK(ymmf_loop_get_info(t.p, "gamma", &li) != YMMF_OK);

    Map e;
    REQUIRE(ymmf_map_load(data("eight.map").c_str(), &e.p) == YMMF_OK);
    REQUIRE(ymmf_loop_get_info(e.p, "L", &li) == YMMF_OK);
    CHECK(li.tame == 1);
    CHECK(li.transverse_crossings == 1);
    CHECK(li.contractible == -1);
    int v[4];
    size_t count = 0;
    REQUIRE(ymmf_loop_crossings(e.p, "L", v, 4, &count) == YMMF_OK);
    CHECK(count == 1);
}

TEST_CASE("evaluations through the C interface", "[capi]") {
    Map e;
    REQUIRE(ymmf_map_builtin("figure-eight", &e.p) == YMMF_OK);
    double v = 0;
    REQUIRE(ymmf_eval_planar(e.p, "L", "1,1", &v) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-1.0)) < 1e-12);
    REQUIRE(ymmf_eval_planar(e.p, "L", "1/2,3/2", &v) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-1.0)) < 1e-12);
    REQUIRE(ymmf_eval_one_boundary(e.p, "east", "0.5,2", &v) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-0.25)) < 1e-12);
    CHECK(ymmf_eval_planar(e.p, "L", "1", &v) != YMMF_OK);
    int vertex = -1;
    size_t count = 0;
    REQUIRE(ymmf_loop_crossings(e.p, "L", &vertex, 1, &count) == YMMF_OK);
    double res = 1;
    REQUIRE(ymmf_mm_residual(e.p, "L", "1,1", vertex, 1e-3, &res) == YMMF_OK);
    CHECK(std::fabs(res) < 1e-5);

    Map t;
    REQUIRE(ymmf_map_builtin("torus", &t.p) == YMMF_OK);
    int contractible = -1, conjectural = -1;
    REQUIRE(ymmf_eval_surface(t.p, "alpha", nullptr, &v, &contractible, &conjectural) == YMMF_OK);
    CHECK(v == 0.0);
    CHECK(contractible == 0);
    CHECK(conjectural == 0);
    REQUIRE(ymmf_eval_surface(t.p, "comm", "2", &v, &contractible, &conjectural) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-1.0)) < 1e-10);
    CHECK(contractible == 1);

    Map g;
    REQUIRE(ymmf_map_builtin("genus2", &g.p) == YMMF_OK);
    REQUIRE(ymmf_eval_surface(g.p, "relator", nullptr, &v, &contractible, &conjectural) == YMMF_OK);
    CHECK(conjectural == 1);

    REQUIRE(ymmf_nu(1.0, 1, &v) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-0.5)) < 1e-14);
    CHECK(ymmf_nu(-1.0, 1, &v) == YMMF_ERR_NEGATIVE_TIME);
    REQUIRE(ymmf_tfree_moment("XYX*Y*", 0.5, &v) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-1.0)) < 1e-8);
    REQUIRE(ymmf_phi_t("XYX*Y*", 2.0, &v) == YMMF_OK);
    CHECK(std::fabs(v - std::exp(-1.0)) < 1e-8);
    CHECK(ymmf_phi_t("XZ", 2.0, &v) != YMMF_OK);
    ymmf_interp_row row{};
    REQUIRE(ymmf_interp_row_eval("(XYX*Y*)^2", 2.0, &row) == YMMF_OK);
    CHECK(row.classical == 1.0);
    CHECK(row.free_value == 0.0);
    char* w = nullptr;
    REQUIRE(ymmf_word_format("Y*XYX*", &w) == YMMF_OK);
    CHECK(std::string(w) == "X*Y*XY");
    ymmf_string_free(w);
}

TEST_CASE("magic check and Monte Carlo", "[capi]") {
    double a = 1, b = 1;
    REQUIRE(ymmf_magic_check("SO", 4, 5, 3, &a, &b) == YMMF_OK);
    CHECK(a < 1e-12);
    CHECK(b < 1e-12);
    CHECK(ymmf_magic_check("G2", 4, 5, 3, &a, &b) != YMMF_OK);

    Map e;
    REQUIRE(ymmf_map_builtin("figure-eight", &e.p) == YMMF_OK);
    const char* loops[] = {"L", "east"};
    double m1[2], s1[2], v1[2], m2[2], s2[2], v2[2];
    ymmf_mc_config cfg{"U", 6, 64, 11, 1, 8};
    REQUIRE(ymmf_mc_run(e.p, loops, 2, "1,1", &cfg, m1, s1, v1) == YMMF_OK);
    cfg.workers = 3;
    REQUIRE(ymmf_mc_run(e.p, loops, 2, "1,1", &cfg, m2, s2, v2) == YMMF_OK);
    for (int i = 0; i < 2; ++i) {
        CHECK(m1[i] == m2[i]);
        CHECK(s1[i] == s2[i]);
        CHECK(v1[i] == v2[i]);
        CHECK(std::fabs(m1[i]) <= 1.0);
    }
    cfg.group = "Z";
    CHECK(ymmf_mc_run(e.p, loops, 2, "1,1", &cfg, m1, s1, v1) != YMMF_OK);
}

TEST_CASE("reports through the C interface", "[capi]") {
    ymmf_report* r = ymmf_report_new("demo");
    ymmf_report_config(r, "k", "v");
    ymmf_report_item(r, "x", 0.5, NAN, "exact", NAN, nullptr);
    ymmf_report_gate(r, "g", 1, "fine");
    CHECK(ymmf_report_failed_gates(r) == 0);
    char* csv = nullptr;
    REQUIRE(ymmf_report_csv(r, &csv) == YMMF_OK);
    CHECK(std::string(csv) == "item,value,stderr,provenance,runtime_ms\nx,0.5,,exact,\n");
    ymmf_string_free(csv);
    CHECK(ymmf_selftest(r) == 0);
    ymmf_report_free(r);
}

TEST_CASE("cli examples", "[cli]") {
    Run r = cli("eval-plane --map " + data("eight.map") + " --loop L --areas 1,1 --format csv");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("L,0.36787944117144233,,exact,"));

    r = cli("eval-surface --map " + data("torus.map") + " --loop alpha");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("| alpha | 0 |  | exact |  | noncontractible |"));

    r = cli("magic-check --group Sp --N 3");
    CHECK(r.code == 0);

    r = cli("eval-surface --map " + data("genus2.map") + " --loop relator");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("CONJECTURAL"));
    CHECK_THAT(r.out, ContainsSubstring("conjectural"));

    r = cli("check-mm --map " + data("eight.map") + " --loop L --format csv");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("L@v0.order,2.0"));

    r = cli("tfree --word XYX*Y* --t 0.5 --format csv");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring(",ode,"));

    r = cli("map-info --builtin genus2 --format csv");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("genus,2,,exact,"));
}

TEST_CASE("cli exit codes", "[cli]") {
    CHECK(cli("").code == 2);
    CHECK(cli("eval-plane --map " + data("eight.map")).code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("magic-check --group U --N 0").code == 2);
    CHECK(cli("magic-check --group U --N 3 --tol 1e-30 --format none").code == 1);
    CHECK(cli("eval-plane --map /nonexistent.map --loop L").code == 3);
    CHECK(cli("eval-plane --map " + data("eight.map") + " --loop nope").code == 3);
    CHECK(cli("magic-check --group Q --N 3").code == 3);
    CHECK(cli("selftest --format none").code == 0);
}

TEST_CASE("mc-run reports are byte-deterministic", "[cli]") {
    std::string base = "mc-run --map " + data("eight.map") +
                       " --loop L --loop east --N 6 --samples 100 --seed 5 --steps 6 --format none --out ";
    std::string p1 = "capi_mc_a", p2 = "capi_mc_b", p3 = "capi_mc_c";
    REQUIRE(cli(base + p1, "YMMF_WORKERS=2").code == 0);
    REQUIRE(cli(base + p2, "YMMF_WORKERS=2").code == 0);
    REQUIRE(cli(base + p3 + " --workers 1").code == 0);
    std::string csv = slurp(p1 + ".csv");
    CHECK_FALSE(csv.empty());
    CHECK_THAT(csv, ContainsSubstring("mc(stderr)"));
    CHECK(csv == slurp(p2 + ".csv"));
    CHECK(slurp(p1 + ".md") == slurp(p2 + ".md"));
    CHECK(csv == slurp(p3 + ".csv"));
    for (const std::string& p : {p1, p2, p3}) {
        std::remove((p + ".csv").c_str());
        std::remove((p + ".md").c_str());
    }
}
