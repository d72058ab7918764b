#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ymmf/builders.hpp"
#include "ymmf/planar.hpp"

using namespace ymmf;

namespace {

LoopPath random_loop(const CombinatorialMap& m, std::mt19937& rng, int steps) {
    std::uniform_int_distribution<int> pick_v(0, m.num_vertices() - 1);
    VertexId base = pick_v(rng);
    std::vector<Dart> darts;
    VertexId at = base;
    for (int i = 0; i < steps; ++i) {
        const auto& rot = m.rotation(at);
        Dart d = rot[std::uniform_int_distribution<std::size_t>(0, rot.size() - 1)(rng)];
        darts.push_back(d);
        at = m.head(d);
    }
    SpanningTree tree(m, base);
    for (Dart d : tree.path_to_root(m, at)) darts.push_back(d);
    LoopPath l;
    l.darts = darts;
    l.base = base;
    return l;
}

AreaVector random_areas(const CombinatorialMap& m, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.5);
    AreaVector a;
    for (FaceId f = 0; f < m.num_faces(); ++f) a.values.push_back(m.is_boundary(f) ? 0.0 : u(rng));
    return a;
}

AreaVector grid_areas(const GridMap& g, double value) {
    AreaVector a;
    a.values.assign(g.map.num_faces(), value);
    a.values[g.outer()] = 0.0;
    return a;
}

CombinatorialMap torus_with_hole() {
    return build_map(paired_alpha(6), sigma_from_rotations(6, {{0, 4, 2, 1, 5, 3}}), {}, {0});
}

}  // namespace

TEST_CASE("lasso basis shape", "[planar]") {
    CombinatorialMap disc = simple_loop_map();
    LassoBasis b = lasso_basis(disc);
    REQUIRE(b.generators.size() == 1);
    CHECK(b.generators[0].darts == std::vector<Dart>{0});

    CombinatorialMap e8 = figure_eight_map();
    LassoBasis b8 = lasso_basis(e8);
    REQUIRE(b8.generators.size() == 2);
    CHECK(b8.generators[0].darts == std::vector<Dart>{1});
    CHECK(b8.generators[1].darts == std::vector<Dart>{2});
    CHECK(b8.handle_generators.empty());

    CombinatorialMap torus = torus_with_hole();
    LassoBasis bt = lasso_basis(torus);
    CHECK(bt.handle_generators.size() == 2);
    CHECK(static_cast<int>(bt.generators.size()) == torus.num_edges() - torus.num_vertices() + 1);
    CHECK(bt.num_faces_generators() == torus.num_faces() - 1);

    CHECK_THROWS_AS(lasso_basis(e8.with_boundary({})), Error);
}

TEST_CASE("face lassos wind once around their face", "[planar]") {
    for (const CombinatorialMap& m : {grid_map(3, 2).map, figure_eight_map(), torus_with_hole()}) {
        LassoBasis b = lasso_basis(m, m.num_vertices() - 1);
        for (FaceId f = 0; f < m.num_faces(); ++f) {
            if (m.is_boundary(f)) continue;
            const LoopPath& lasso = b.generators[b.face_generator[f]];
            CHECK(lasso.base == b.root);
            CHECK(decompose(m, lasso, b) == GeneratorWord({{b.face_generator[f], 1}}));
        }
        for (int h : b.handle_generators) CHECK(decompose(m, b.generators[h], b) == GeneratorWord({{h, 1}}));
    }
}

TEST_CASE("decomposition of the boundary of two faces", "[planar]") {
    GridMap g = grid_map(2, 1);
    LassoBasis b = lasso_basis(g.map);
    GeneratorWord w = decompose(g.map, g.walk(0, 0, "RRULLD"), b);
    REQUIRE(w.size() == 2);
    std::vector<int> gens{w.letters[0].gen, w.letters[1].gen};
    std::sort(gens.begin(), gens.end());
    CHECK(gens == std::vector<int>{b.face_generator[g.square(0, 0)], b.face_generator[g.square(1, 0)]});
    CHECK(w.letters[0].exp == 1);
    CHECK(w.letters[1].exp == 1);
}

TEST_CASE("substitution soundness on random loops", "[planar]") {
    std::mt19937 rng(11);
    std::vector<CombinatorialMap> maps{grid_map(2, 2).map, grid_map(3, 1).map, figure_eight_map(), torus_with_hole(),
                                       simple_loop_map()};
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const CombinatorialMap& m = maps[trial % maps.size()];
        REQUIRE(m.num_faces() <= 6);
        LassoBasis b = lasso_basis(m, trial % m.num_vertices());
        LoopPath l = random_loop(m, rng, 1 + trial % 12);
        GeneratorWord w = decompose(m, l, b);
        CHECK(substitute(m, w, b) == reduce_path(m, reroot(m, l, b)));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("planar closed forms", "[planar]") {
    CombinatorialMap disc = simple_loop_map();
    LoopPath l = make_loop(disc, {0});
    for (double t : {0.2, 1.0, 3.0}) {
        AreaVector a{{t, 0.0}};
        CHECK(std::fabs(eval_planar(disc, l, a) - std::exp(-t / 2)) < 1e-10);
        CHECK(std::fabs(eval_planar(disc, power(disc, l, 2), a) - std::exp(-t) * (1 - t)) < 1e-10);
        CHECK(std::fabs(eval_planar(disc, power(disc, l, 2), a) - nu(t, 2)) < 1e-10);
        CHECK(std::fabs(eval_planar(disc, reverse_path(disc, l), a) - std::exp(-t / 2)) < 1e-10);
    }

    CombinatorialMap e8 = figure_eight_map();
    LoopPath eight = make_loop(e8, {0, 2});
    for (auto [t1, t2] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.0}}) {
        AreaVector a{{0.0, t1, t2}};
        CHECK(std::fabs(eval_planar(e8, eight, a) - std::exp(-(t1 + t2) / 2)) < 1e-10);
    }

    GridMap g = grid_map(3, 3);
    std::mt19937 rng(2);
    AreaVector a = random_areas(g.map, rng);
    LoopPath square = g.walk(0, 0, "RRRUUULLLDDD");
    CHECK(std::fabs(eval_planar(g.map, square, a) - std::exp(-a.total(g.map) / 2)) < 1e-10);
    LoopPath lattice_eight = g.walk(1, 1, "RULDDLUR");
    double petals = a[g.square(1, 1)] + a[g.square(0, 0)];
    CHECK(std::fabs(eval_planar(g.map, lattice_eight, a) - std::exp(-petals / 2)) < 1e-10);
}

TEST_CASE("planar evaluation errors", "[planar]") {
    CombinatorialMap e8 = figure_eight_map();
    LoopPath eight = make_loop(e8, {0, 2});
    CHECK_THROWS_AS(eval_planar(e8, eight, AreaVector{{0.0, 1.0}}), Error);
    CHECK_THROWS_AS(eval_planar(e8, eight, AreaVector{{0.0, -1.0, 1.0}}), Error);
    try {
        eval_planar(torus_with_hole(), constant_loop(0), AreaVector{{0, 1, 1}});
        FAIL("expected WrongGenus");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WrongGenus);
    }
    LoopPath bad;
    bad.darts = {99};
    CHECK_THROWS_AS(decompose(e8, bad, lasso_basis(e8)), Error);
}

TEST_CASE("evaluation properties on random loops", "[planar]") {
    std::mt19937 rng(23);
    GridMap g = grid_map(2, 2);
    AreaVector a = random_areas(g.map, rng);
    LassoBasis b0 = lasso_basis(g.map, 0), b4 = lasso_basis(g.map, 4);
    for (int trial = 0; trial < 60; ++trial) {
        LoopPath l = random_loop(g.map, rng, 2 + trial % 10);
        double v = eval_planar(g.map, l, a, b0);
        CHECK(std::fabs(v) <= 1.0 + 1e-12);
        CHECK(std::fabs(eval_planar(g.map, reverse_path(g.map, l), a, b0) - v) < 1e-12);
        CHECK(std::fabs(eval_planar(g.map, l, a, b4) - v) < 1e-12);
    }
}

TEST_CASE("refinement invariance", "[planar]") {
    std::mt19937 rng(31);
    GridMap g = grid_map(2, 2);
    AreaVector a = random_areas(g.map, rng);
    LoopPath l = g.walk(1, 1, "RULDDLUR");
    double base = eval_planar(g.map, l, a);
    FaceId f = g.square(1, 1);
    const auto& cyc = g.map.face_boundary(f);
    Refinement r = split_face(g.map, cyc[0], cyc[2]);
    for (double fraction : {0.5, 0.2}) {
        AreaVector a2{refine_areas(r, g.map, a.values, fraction)};
        CHECK(std::fabs(eval_planar(r.map, transport(r, l), a2) - base) < 1e-12);
    }
    Refinement s = subdivide_edge(g.map, g.east(1, 1));
    AreaVector a3{refine_areas(s, g.map, a.values)};
    CHECK(std::fabs(eval_planar(s.map, transport(s, l), a3) - base) < 1e-12);
}

TEST_CASE("Makeenko-Migdal residuals", "[planar]") {
    CombinatorialMap e8 = figure_eight_map();
    LoopPath eight = make_loop(e8, {0, 2});
    AreaVector a{{0.0, 1.0, 1.0}};
    double prev = 0.0;
    for (double h : {1e-2, 5e-3, 1e-3}) {
        double r = mm_residual(e8, eight, a, 0, h);
        CHECK(std::fabs(r) < 1e-3);
        if (prev != 0.0) CHECK(std::fabs(r) < std::fabs(prev));
        prev = r;
    }
    CHECK(std::fabs(mm_residual(e8, eight, a, 0, 1e-3)) < 1e-5);
    CHECK_THROWS_AS(mm_residual(e8, eight, AreaVector{{0.0, 1e-4, 1.0}}, 0, 1e-3), Error);

    GridMap g = grid_map(3, 3);
    LoopPath two = g.walk(1, 1, "RUURDLLDDLUR");
    AreaVector ga = grid_areas(g, 1.0);
    for (VertexId v : {g.vertex(1, 1), g.vertex(2, 2)}) {
        double r1 = mm_residual(g.map, two, ga, v, 1e-2);
        double r2 = mm_residual(g.map, two, ga, v, 5e-3);
        double r3 = mm_residual(g.map, two, ga, v, 1e-3);
        CHECK(std::fabs(r3) < 1e-5);
        CHECK(std::fabs(r2 / r1) == Catch::Approx(0.25).margin(0.03));
    }
    CHECK_THROWS_AS(mm_residual(g.map, two, ga, g.vertex(0, 0), 1e-3), Error);
}

TEST_CASE("one-boundary evaluation with handles", "[planar]") {
    CombinatorialMap torus = one_face_map({0, 2, 1, 3}).with_boundary({0});
    AreaVector a{{0.0}};
    LoopPath alpha = make_loop(torus, {0}), beta = make_loop(torus, {2});
    for (int n = 1; n <= 3; ++n) CHECK(eval_one_boundary(torus, power(torus, alpha, n), a) == 0.0);
    LoopPath comm = make_loop(torus, {0, 2, 1, 3});
    CHECK(eval_one_boundary(torus, comm, a) == 0.0);
    CHECK(eval_one_boundary(torus, concat(torus, alpha, reverse_path(torus, alpha)), a) == 1.0);

    CombinatorialMap holed = torus_with_hole();
    std::mt19937 rng(4);
    AreaVector ha = random_areas(holed, rng);
    LassoBasis b = lasso_basis(holed);
    for (FaceId f = 0; f < holed.num_faces(); ++f) {
        if (holed.is_boundary(f)) continue;
        CHECK(std::fabs(eval_one_boundary(holed, b.generators[b.face_generator[f]], ha, b) - std::exp(-ha[f] / 2)) < 1e-12);
    }
}
