#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ymmf/error.hpp"
#include "ymmf/free_moments.hpp"

using namespace ymmf;

namespace {

// Plain centering recursion without factorisation shortcuts or caching.
double brute_moment(std::vector<Letter> w, const std::map<int, GeneratorLaw>& laws) {
    GeneratorWord lin(w);
    w = lin.letters;
    while (w.size() >= 2 && w.front().gen == w.back().gen) {
        w.front().exp += w.back().exp;
        w.pop_back();
        if (w.front().exp == 0) w.erase(w.begin());
        w = GeneratorWord(w).letters;
    }
    if (w.empty()) return 1.0;
    if (w.size() == 1) return laws.at(w[0].gen).moment(w[0].exp);
    const std::size_t n = w.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        double coef = 1.0;
        std::vector<Letter> sub;
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                coef *= laws.at(w[i].gen).moment(w[i].exp);
                ++bits;
            } else {
                sub.push_back(w[i]);
            }
        }
        if (coef == 0.0) continue;
        total += (bits % 2 == 1 ? 1.0 : -1.0) * coef * brute_moment(sub, laws);
    }
    return total;
}

bool reduces_to_identity(const std::vector<Letter>& w) { return GeneratorWord(w).empty(); }

std::vector<Letter> random_word(std::mt19937& rng, int gens, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len), gen(0, gens - 1), exp(-2, 2);
    std::vector<Letter> w(len(rng));
    for (auto& l : w) {
        l.gen = gen(rng);
        do {
            l.exp = exp(rng);
        } while (l.exp == 0);
    }
    return w;
}

}  // namespace

TEST_CASE("nu closed form", "[free_moments]") {
    CHECK(nu(0.7, 0) == 1.0);
    for (double t : {0.0, 0.3, 1.0, 4.0}) CHECK(std::fabs(nu(t, 1) - std::exp(-t / 2)) < 1e-15);
    CHECK(std::fabs(nu(1.0, 2)) < 1e-12);
    CHECK(std::fabs(nu(2.0, 2) - std::exp(-2.0) * (1 - 2.0)) < 1e-14);
    // n = 3: e^{-3t/2} (1 - 3t + 3t^2/2)
    CHECK(std::fabs(nu(0.8, 3) - std::exp(-1.2) * (1 - 2.4 + 1.5 * 0.64)) < 1e-14);
    CHECK(nu(10.0, 100) == 0.0);
    CHECK_THROWS_AS(nu(1.0, -1), Error);
}

TEST_CASE("nu agrees with the ODE", "[free_moments]") {
    for (double t : {0.25, 1.0, 4.0}) {
        auto ode = nu_ode(t, 8);
        for (int n = 1; n <= 8; ++n) CHECK(std::fabs(ode[n] - nu(t, n)) < 1e-8);
    }
    for (double x : nu_ode(0.0, 5)) CHECK(x == 1.0);
    CHECK(std::fabs(nu_ode(2.5, 1)[1] - std::exp(-1.25)) < 1e-10);
    // large n t, where the alternating sum cancels heavily
    auto ode = nu_ode(3.0, 24, 20000);
    for (int n : {12, 18, 24}) CHECK(std::fabs(ode[n] - nu(3.0, n)) < 1e-9);
}

TEST_CASE("free moments of simple words", "[free_moments]") {
    std::map<int, GeneratorLaw> laws{{0, GeneratorLaw::free_bm(0.4)},
                                     {1, GeneratorLaw::free_bm(1.1)},
                                     {2, GeneratorLaw::haar()},
                                     {3, GeneratorLaw::deterministic(-1)}};
    CHECK(free_moment(GeneratorWord{}, laws) == 1.0);
    CHECK(free_moment(GeneratorWord({{2, 3}}), laws) == 0.0);
    CHECK(std::fabs(free_moment(GeneratorWord({{0, 1}, {1, -1}}), laws) - std::exp(-0.75)) < 1e-14);
    CHECK(free_moment(GeneratorWord({{3, 1}, {0, 1}}), laws) == Catch::Approx(-std::exp(-0.2)));
    for (int k = -8; k <= 8; ++k) {
        CHECK(std::fabs(free_moment(GeneratorWord({{0, k}}), laws) - nu(0.4, std::abs(k))) < 1e-15);
    }
    CHECK_THROWS_AS(free_moment(GeneratorWord({{9, 1}}), laws), Error);
}

TEST_CASE("product of free unitary Brownian motions", "[free_moments]") {
    std::map<int, GeneratorLaw> laws{{0, GeneratorLaw::free_bm(0.3)}, {1, GeneratorLaw::free_bm(0.9)}};
    for (int n = 1; n <= 5; ++n) {
        std::vector<Letter> w;
        for (int i = 0; i < n; ++i) {
            w.push_back({0, 1});
            w.push_back({1, 1});
        }
        CHECK(std::fabs(free_moment(GeneratorWord(w), laws) - nu(1.2, n)) < 1e-12);
    }
}

TEST_CASE("Haar words vanish unless trivial", "[free_moments]") {
    std::map<int, GeneratorLaw> laws{{0, GeneratorLaw::haar()}, {1, GeneratorLaw::haar()}, {2, GeneratorLaw::haar()}};
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto w = random_word(rng, 3, 8);
        if (trial % 3 == 0) {
            // conjugates of the identity
            auto x = random_word(rng, 3, 3);
            auto xi = GeneratorWord(x).inverse().letters;
            w = x;
            w.insert(w.end(), xi.begin(), xi.end());
        }
        FreeMomentEngine e(laws);
        double got = e.moment(GeneratorWord(w));
        // tau(g) for g in the free group is 1 iff g is the identity
        double expected = reduces_to_identity(w) ? 1.0 : 0.0;
        CHECK(std::fabs(got - expected) < 1e-12);
    }
}

TEST_CASE("free moment properties on random words", "[free_moments]") {
    std::map<int, GeneratorLaw> laws{{0, GeneratorLaw::free_bm(0.5)},
                                     {1, GeneratorLaw::free_bm(1.7)},
                                     {2, GeneratorLaw::haar()},
                                     {3, GeneratorLaw::free_bm(0.05)}};
    FreeMomentEngine engine(laws);
    std::mt19937 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        auto w = random_word(rng, 4, 6);
        GeneratorWord gw(w);
        double value = engine.moment(gw);
        CHECK(std::fabs(value - brute_moment(w, laws)) < 1e-12);
        CHECK(std::fabs(value) <= 1.0 + 1e-12);
        CHECK(std::fabs(engine.moment(gw.inverse()) - value) < 1e-12);
        for (std::size_t k = 1; k < w.size(); ++k) {
            std::vector<Letter> rot(w.begin() + k, w.end());
            rot.insert(rot.end(), w.begin(), w.begin() + k);
            CHECK(std::fabs(engine.moment(GeneratorWord(rot)) - value) < 1e-12);
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_word(rng, 2, 4);
        auto b = random_word(rng, 2, 4);
        for (auto& l : b) l.gen += 2;
        GeneratorWord wa(a), wb(b);
        CHECK(std::fabs(engine.moment(wa * wb) - engine.moment(wa) * engine.moment(wb)) < 1e-12);
    }
}

TEST_CASE("long words with many single letters stay cheap", "[free_moments]") {
    std::map<int, GeneratorLaw> laws;
    std::vector<Letter> w;
    double expected = 1.0;
    for (int g = 0; g < 40; ++g) {
        laws[g] = GeneratorLaw::free_bm(0.01 * (g + 1));
        w.push_back({g, 1});
        expected *= std::exp(-0.005 * (g + 1));
    }
    CHECK(std::fabs(free_moment(GeneratorWord(w), laws) - expected) < 1e-12);
}
