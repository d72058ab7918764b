#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ymmf/builders.hpp"
#include "ymmf/homology.hpp"

using namespace ymmf;

namespace {

DiscreteForm random_form(const CombinatorialMap& m, int degree, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    DiscreteForm f = zero_form(m, degree);
    for (auto& c : f.coeffs) c = Rational(num(rng)) / den(rng);
    return f;
}

CombinatorialMap oriented_faces_torus() {
    return build_map(paired_alpha(6), sigma_from_rotations(6, {{0, 4, 2, 1, 5, 3}}));
}

// Expected subspace dimension of the Makeenko-Migdal deformation space.
int expected_mm_dim(const CombinatorialMap& m, const LoopPath& l) {
    return homology_class(m, l).is_zero() ? m.num_faces() - 2 : m.num_faces() - 1;
}

}  // namespace

TEST_CASE("chain complex laws", "[homology]") {
    std::mt19937 rng(3);
    CombinatorialMap e8 = figure_eight_map().with_boundary({});
    CombinatorialMap torus = oriented_faces_torus();
    GridMap g = grid_map(2, 2);
    for (const CombinatorialMap& m : {e8, torus, g.map}) {
        for (int trial = 0; trial < 5; ++trial) {
            DiscreteForm f0 = random_form(m, 0, rng), f1 = random_form(m, 1, rng), f2 = random_form(m, 2, rng);
            CHECK(d(m, d(m, f0)).is_zero());
            CHECK(d_star(m, d_star(m, f2)).is_zero());
            CHECK(pairing(d(m, f1), f2) == pairing(f1, d_star(m, f2)));
            CHECK(pairing(d(m, f0), f1) == pairing(f0, d_star(m, f1)));
        }
    }
    DiscreteForm constant = zero_form(e8, 0);
    for (auto& c : constant.coeffs) c = 5;
    CHECK(d(e8, constant).is_zero());
    CHECK_THROWS_AS(d(e8, zero_form(e8, 2)), Error);
    CHECK_THROWS_AS(d_star(e8, zero_form(e8, 0)), Error);
}

TEST_CASE("d* of a face indicator", "[homology]") {
    GridMap g = grid_map(2, 1);
    FaceId f = g.square(0, 0);
    DiscreteForm w = d_star(g.map, face_indicator(g.map, f));
    for (Dart x = 0; x < g.map.num_darts(); ++x) {
        Rational expected = Rational(g.map.left_face(x) == f) - Rational(g.map.right_face(x) == f);
        CHECK(on_dart(g.map, w, x) == expected);
    }
}

TEST_CASE("loop one-forms", "[homology]") {
    CombinatorialMap s = simple_loop_map();
    CHECK(loop_one_form(s, constant_loop(0)).is_zero());
    CHECK(loop_one_form(s, make_loop(s, {0, 1})).is_zero());
    GridMap g = grid_map(3, 3);
    LoopPath a = g.walk(1, 1, "RULD"), b = g.walk(1, 1, "DLUR");
    CHECK(loop_one_form(g.map, concat(g.map, a, b)) == loop_one_form(g.map, a) + loop_one_form(g.map, b));
    CHECK(d_star(g.map, loop_one_form(g.map, g.walk(1, 1, "RUURDLLDDLUR"))).is_zero());
}

TEST_CASE("homology classes", "[homology]") {
    CombinatorialMap torus = one_face_map({0, 2, 1, 3});
    HomologyBasis basis = homology_basis(torus);
    REQUIRE(basis.loops.size() == 2);
    CHECK(homology_class(torus, make_loop(torus, {0})).coords == std::vector<Rational>{1, 0});
    CHECK(homology_class(torus, make_loop(torus, {2})).coords == std::vector<Rational>{0, 1});
    CHECK(homology_class(torus, make_loop(torus, {0, 2, 1, 3})).is_zero());
    HomologyClass sum = homology_class(torus, make_loop(torus, {0, 0, 3}));
    CHECK(sum.coords == std::vector<Rational>{2, -1});

    CombinatorialMap bouquet2 = one_face_map({0, 2, 1, 3, 4, 6, 5, 7});
    CHECK(homology_basis(bouquet2).loops.size() == 4);
    CHECK(homology_basis(oriented_faces_torus()).loops.size() == 2);
    CHECK(homology_basis(grid_map(3, 2).map).loops.empty());
    CombinatorialMap t = oriented_faces_torus();
    for (FaceId f = 0; f < t.num_faces(); ++f) {
        CHECK(homology_class(t, make_loop(t, t.face_boundary(f))).is_zero());
    }
}

TEST_CASE("winding functions", "[homology]") {
    GridMap g = grid_map(2, 2);
    DiscreteForm n = winding_function(g.map, g.walk(0, 0, "RULD"));
    CHECK(n == face_indicator(g.map, g.square(0, 0)));

    CombinatorialMap e8 = figure_eight_map();
    LoopPath l = make_loop(e8, {0, 2});
    DiscreteForm w = winding_function(e8, l);
    CHECK(w.coeffs[0] == 0);
    CHECK(w.coeffs[1] == -1);
    CHECK(w.coeffs[2] == 1);
    CHECK(d_star(e8, w) == loop_one_form(e8, l));

    DiscreteForm centred = winding_function(e8, l, WindingNormalization::OrthogonalToTotal);
    CHECK(pairing(centred, total_area_form(e8)) == 0);

    CombinatorialMap torus = one_face_map({0, 2, 1, 3});
    try {
        winding_function(torus, make_loop(torus, {0}));
        FAIL("expected NonZeroHomology");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonZeroHomology);
    }
}

TEST_CASE("Makeenko-Migdal vectors", "[homology]") {
    CombinatorialMap e8 = figure_eight_map();
    LoopPath l = make_loop(e8, {0, 2});
    DiscreteForm mu = mm_vector(e8, l, 0);
    CHECK(mu.coeffs == std::vector<Rational>{2, -1, -1});
    CHECK(pairing(mu, total_area_form(e8)) == 0);
    CHECK(in_mm_space(e8, l, mu));
    CHECK_FALSE(in_mm_space(e8, l, total_area_form(e8)));
    CHECK_FALSE(in_mm_space(e8, l, winding_function(e8, l)));

    GridMap g = grid_map(3, 3);
    LoopPath two = g.walk(1, 1, "RUURDLLDDLUR");
    for (const Crossing& c : intersection_profile(g.map, two).crossings) {
        DiscreteForm m = mm_vector(g.map, two, c.vertex);
        CHECK(pairing(m, total_area_form(g.map)) == 0);
        // alternating signs on the four corners
        Rational sum_abs = 0;
        for (const auto& x : m.coeffs) sum_abs += abs(x);
        CHECK(sum_abs == 4);
        CHECK(in_mm_space(g.map, two, m));
    }
    CHECK_THROWS_AS(mm_vector(e8, make_loop(e8, {0}), 0), Error);
}

TEST_CASE("span of the MM family matches the characterisation", "[homology]") {
    struct Case {
        CombinatorialMap map;
        LoopPath loop;
    };
    std::vector<Case> cases;
    GridMap g = grid_map(2, 2);
    CombinatorialMap sphere = g.map.with_boundary({});
    cases.push_back({sphere, g.walk(1, 1, "RULDDLUR")});
    cases.push_back({sphere, g.walk(0, 0, "RRULLD")});
    CombinatorialMap e8 = figure_eight_map().with_boundary({});
    cases.push_back({e8, make_loop(e8, {0, 2})});
    CombinatorialMap torus = oriented_faces_torus();
    cases.push_back({torus, make_loop(torus, {0})});
    for (const Case& c : cases) {
        auto family = mm_spanning_family(c.map, c.loop);
        for (const auto& f : family) CHECK(in_mm_space(c.map, c.loop, f));
        CHECK(form_rank(family) == expected_mm_dim(c.map, c.loop));
    }
}

TEST_CASE("desingularisation is additive", "[homology]") {
    GridMap g = grid_map(3, 3);
    LoopPath two = g.walk(1, 1, "RUURDLLDDLUR");
    for (const Crossing& c : intersection_profile(g.map, two).crossings) {
        auto [a, b] = desingularize(g.map, two, c.vertex);
        CHECK(loop_one_form(g.map, two) == loop_one_form(g.map, a) + loop_one_form(g.map, b));
    }
}
