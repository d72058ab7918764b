#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ymmf/error.hpp"
#include "ymmf/free_moments.hpp"
#include "ymmf/tfree.hpp"

using namespace ymmf;

namespace {

const Monomial kComm = parse_monomial("XYX*Y*");
const Monomial kSep = parse_monomial("XY^2X*Y^-2");

Monomial random_balanced_word(std::mt19937& rng, int len) {
    std::uniform_int_distribution<int> gen(0, 1), sgn(0, 1);
    for (;;) {
        std::vector<Letter> raw;
        for (int i = 0; i < len; ++i) raw.push_back({gen(rng), sgn(rng) ? 1 : -1});
        Monomial w(raw);
        if (!w.empty() && w.net(0) == 0 && w.net(1) == 0) return w;
    }
}

}  // namespace

TEST_CASE("monomial parsing and canonical form", "[tfree]") {
    CHECK(format_monomial(kComm) == "XYX*Y*");
    CHECK(format_monomial(kSep) == "XY^2X*Y^-2");
    CHECK(parse_monomial("XYYX*Y*Y*") == kSep);
    CHECK(parse_monomial("(XYX*Y*)^2") == kComm * kComm);
    CHECK(parse_monomial("(XY)*") == parse_monomial("Y*X*"));
    CHECK(parse_monomial("XX*").empty());
    CHECK(parse_monomial("1").empty());
    CHECK_THROWS_AS(parse_monomial("XZ"), Error);
    CHECK_THROWS_AS(parse_monomial("(XY"), Error);

    Monomial w = parse_monomial("YX^2Y*X");
    CHECK(format_monomial(canonical_monomial(w)) == "XYX^2Y*");
    for (std::size_t k = 0; k < w.size(); ++k) {
        std::vector<Letter> rot(w.blocks.begin() + static_cast<long>(k), w.blocks.end());
        rot.insert(rot.end(), w.blocks.begin(), w.blocks.begin() + static_cast<long>(k));
        CHECK(canonical_monomial(Monomial(rot)) == canonical_monomial(w));
    }
    CHECK(canonical_monomial(parse_monomial("XYX*")) == parse_monomial("Y"));
}

TEST_CASE("delta_ad on small monomials", "[tfree]") {
    CHECK(delta_ad(Monomial()).empty());
    CHECK(delta_ad(parse_monomial("X^3")).empty());
    for (const char* pure : {"Y", "Y^-2"}) {
        double total = 0.0;
        for (const TensorTerm& t : delta_ad(parse_monomial(pure))) total += t.coef;
        CHECK(total == 0.0);
    }
    auto terms = delta_ad(canonical_monomial(parse_monomial("XY")));
    REQUIRE(terms.size() == 3);
    double with_p = 0.0, split = 0.0;
    for (const TensorTerm& t : terms) {
        if (t.left.empty() || t.right.empty()) with_p += t.coef;
        if (t.left == parse_monomial("Y") && t.right == parse_monomial("X")) split += t.coef;
    }
    CHECK(with_p == -1.0);
    CHECK(split == 1.0);
}

TEST_CASE("delta_ad expansion of the commutator collapses", "[tfree]") {
    for (double t : {0.3, 1.1}) {
        auto tau = [t](const Monomial& m) { return tfree_moment(m, t); };
        double sum = 0.0;
        for (const TensorTerm& term : delta_ad(canonical_monomial(kComm))) sum += term.coef * tau(term.left) * tau(term.right);
        CHECK(std::fabs(sum + 2.0 * tau(kComm)) < 1e-9);
    }
}

TEST_CASE("t-free moments against closed forms", "[tfree]") {
    for (double t : {0.0, 0.1, 0.5, 1.0, 3.0}) {
        CHECK(std::fabs(tfree_moment(kComm, t) - std::exp(-2 * t)) < 1e-9);
        CHECK(std::fabs(tfree_moment(kSep, t) - std::exp(-2 * t)) < 1e-9);
        for (int n = 1; n <= 3; ++n) CHECK(std::fabs(tfree_moment(parse_monomial("XY^" + std::to_string(n)), t)) < 1e-12);
        for (int n = 1; n <= 4; ++n) CHECK(std::fabs(tfree_moment(kComm.pow(n), t) - nu(4 * t, n)) < 1e-8);
        CHECK(tfree_moment(Monomial(), t) == 1.0);
    }
}

TEST_CASE("t-free moments interpolate classical and free independence", "[tfree]") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        Monomial w = random_balanced_word(rng, 4 + 2 * (trial % 3));
        CHECK(std::fabs(tfree_moment(w, 0.0) - 1.0) < 1e-15);
        CHECK(std::fabs(tfree_moment(w, 40.0) - free_value(w)) < 1e-6);
        double v = tfree_moment(w, 0.7);
        CHECK(std::fabs(v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("t-free moments with non-Haar marginals", "[tfree]") {
    GeneratorLaw bm = GeneratorLaw::free_bm(0.8);
    Monomial xy = parse_monomial("XY");
    CHECK(std::fabs(tfree_moment(xy, 0.0, bm, bm) - nu(0.8, 1) * nu(0.8, 1)) < 1e-15);
    CHECK(std::fabs(tfree_moment(xy, 2.5, bm, bm) - nu(0.8, 1) * nu(0.8, 1)) < 1e-9);
    CHECK(std::fabs(tfree_moment(parse_monomial("Y^3"), 1.0, bm, bm) - nu(0.8, 3)) < 1e-15);
}

TEST_CASE("closure cap", "[tfree]") {
    CHECK_THROWS_AS(MomentSystem(kComm.pow(3), 4), Error);
    MomentSystem sys(kComm.pow(2));
    CHECK(sys.size() < 1000);
    CHECK_THROWS_AS(tfree_moment(kComm, -1.0), Error);
}

TEST_CASE("torus interpolation state", "[tfree]") {
    for (double T : {0.5, 1.0, 2.0}) {
        CHECK(phi_T_word(parse_monomial("X"), T) == 0.0);
        CHECK(phi_T_word(parse_monomial("XY^2X*"), T) == 0.0);
        CHECK(std::fabs(phi_T_word(kComm, T) - std::exp(-T / 2)) < 1e-10);
        CHECK(std::fabs(phi_T_word(kSep, T) - std::exp(-T)) < 1e-10);
        for (int n = 1; n <= 3; ++n) CHECK(std::fabs(phi_T_word(kComm.pow(n), T) - nu(T, n)) < 1e-8);
        CHECK(phi_T_word(Monomial(), T) == 1.0);
    }
    for (int n = 1; n <= 4; ++n) {
        double t = 0.35;
        CHECK(std::fabs(phi_T_word(kComm.pow(n), 4 * t) - tfree_moment(kComm.pow(n), t)) < 1e-6);
    }
}

TEST_CASE("interpolation report", "[tfree]") {
    auto rows = interpolation_report(2.0, {kComm, kSep});
    REQUIRE(rows.size() == 2);
    CHECK(std::fabs(rows[0].phi - std::exp(-1.0)) < 1e-9);
    CHECK(std::fabs(rows[0].tfree - std::exp(-1.0)) < 1e-9);
    CHECK_FALSE(rows[0].separating);
    CHECK(std::fabs(rows[1].phi - std::exp(-2.0)) < 1e-9);
    CHECK(std::fabs(rows[1].tfree - std::exp(-1.0)) < 1e-9);
    CHECK(rows[1].separating);
    CHECK(rows[1].classical == 1.0);
    CHECK(std::fabs(rows[1].free) < 1e-15);

    auto small = interpolation_report(1e-3, {kComm});
    CHECK(std::fabs(small[0].phi - 1.0) < 1e-3);
    CHECK(std::fabs(small[0].tfree - 1.0) < 1e-3);

    for (const Monomial& w : {kComm, kSep, parse_monomial("XYXY*X*Y*"), parse_monomial("XY")}) {
        InterpolationLimits lim = interpolation_limits(w);
        CHECK(lim.classical_gap < 1e-2);
        CHECK(lim.free_gap < 1e-6);
    }
}
