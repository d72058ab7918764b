#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "ymmf/error.hpp"
#include "ymmf/groups.hpp"

using namespace ymmf;

namespace {

std::vector<GroupSpec> all_groups(int N) {
    return {make_group("U", N), make_group("SU", N), make_group("SO", N), make_group("Sp", N)};
}

double inner(const GroupSpec& g, const Matrix& x, const Matrix& y) {
    const double c = g.family == Family::SO ? g.N / 2.0 : g.N;
    return -c * (x * y).trace().real();
}

struct Stats {
    double mean = 0, err = 0;
};

Stats stats(const std::vector<double>& v) {
    Stats s;
    for (double x : v) s.mean += x;
    s.mean /= v.size();
    double var = 0;
    for (double x : v) var += (x - s.mean) * (x - s.mean);
    var /= (v.size() - 1);
    s.err = std::sqrt(var / v.size());
    return s;
}

}  // namespace

TEST_CASE("Lie bases are orthonormal and lie in the algebra", "[groups]") {
    CHECK(lie_basis(make_group("U", 2)).size() == 4);
    CHECK(lie_basis(make_group("SU", 2)).size() == 3);
    for (int N : {2, 3, 4}) {
        for (const GroupSpec& g : all_groups(N)) {
            auto basis = lie_basis(g);
            REQUIRE(static_cast<int>(basis.size()) == g.lie_dim());
            for (std::size_t i = 0; i < basis.size(); ++i) {
                const Matrix& x = basis[i];
                CHECK((x + x.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
                // exp of a small multiple stays in the group
                CHECK(group_residual(g, exp_lie(0.3 * x)) < 1e-12);
                for (std::size_t j = 0; j < basis.size(); ++j) {
                    CHECK(std::fabs(inner(g, x, basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
                }
            }
        }
    }
    CHECK_THROWS_AS(make_group("G2", 3), Error);
    CHECK_THROWS_AS(make_group("U", 1), Error);
}

TEST_CASE("Casimir sums at the identity", "[groups]") {
    for (int N : {2, 3, 5}) {
        GroupSpec u = make_group("U", N);
        std::complex<double> s = 0.0;
        for (const Matrix& x : lie_basis(u)) s += normalized_trace(x * x);
        CHECK(std::abs(s + 1.0) < 1e-12);
        Matrix id = normalized_identity(u);
        MagicResidual r = magic_check(u, id, id);
        CHECK(r.first < 1e-12);
        CHECK(r.second < 1e-12);
        GroupSpec su = make_group("SU", N);
        std::complex<double> t = 0.0;
        for (const Matrix& x : lie_basis(su)) t += normalized_trace(x) * normalized_trace(x);
        CHECK(std::abs(t) < 1e-12);
    }
}

TEST_CASE("magic formulas on random group elements", "[groups]") {
    std::mt19937_64 rng(77);
    for (int N : {2, 3, 4}) {
        for (const GroupSpec& g : all_groups(N)) {
            for (int pair = 0; pair < 20; ++pair) {
                Matrix A = sample_haar(g, rng), B = sample_haar(g, rng);
                MagicResidual r = magic_check(g, A, B);
                CHECK(r.first < 1e-12);
                CHECK(r.second < 1e-12);
            }
        }
    }
    GroupSpec u = make_group("U", 3);
    CHECK_THROWS_AS(magic_check(u, 2.0 * normalized_identity(u), normalized_identity(u)), Error);
}

TEST_CASE("exp on the Lie algebra matches a reference exponential", "[groups]") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (const GroupSpec& g : all_groups(4)) {
        for (double scale : {0.05, 1.0, 6.0}) {
            std::vector<double> c(g.lie_dim());
            for (double& x : c) x = scale * n01(rng);
            Matrix x = lie_combination(g, c);
            Matrix ref = x.exp();
            CHECK((exp_lie(x) - ref).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("Haar samples", "[groups]") {
    std::mt19937_64 rng(123);
    for (const GroupSpec& g : all_groups(5)) {
        for (int k = 0; k < 10; ++k) CHECK(group_residual(g, sample_haar(g, rng)) < 1e-12);
    }
    GroupSpec u32 = make_group("U", 32);
    std::vector<double> re;
    for (int k = 0; k < 2000; ++k) re.push_back(normalized_trace(sample_haar(u32, rng)).real());
    Stats s = stats(re);
    CHECK(std::fabs(s.mean) <= 3 * s.err);

    GroupSpec u8 = make_group("U", 8);
    Matrix V = sample_haar(u8, rng);
    std::vector<double> plain, shifted;
    for (int k = 0; k < 4000; ++k) {
        Matrix U = sample_haar(u8, rng);
        plain.push_back(std::norm(U.trace()));
        shifted.push_back(std::norm((V * U).trace()));
    }
    Stats a = stats(plain), b = stats(shifted);
    CHECK(std::fabs(a.mean - 1.0) <= 3 * a.err);
    CHECK(std::fabs(b.mean - 1.0) <= 3 * b.err);
}

TEST_CASE("heat kernel samples", "[groups]") {
    std::mt19937_64 rng(9);
    GroupSpec u3 = make_group("U", 3);
    CHECK((sample_heat_kernel(u3, 0.0, 10, rng) - normalized_identity(u3)).norm() == 0.0);
    CHECK_THROWS_AS(sample_heat_kernel(u3, -1.0, 10, rng), Error);
    for (const GroupSpec& g : all_groups(3)) CHECK(group_residual(g, sample_heat_kernel(g, 0.7, 0, rng)) < 1e-10);

    GroupSpec u4 = make_group("U", 4);
    CHECK(group_residual(u4, sample_heat_kernel(u4, 10.0, 10000, rng)) < 1e-8);

    GroupSpec u64 = make_group("U", 64);
    std::vector<double> tr;
    for (int k = 0; k < 4000; ++k) tr.push_back(normalized_trace(sample_heat_kernel(u64, 1.0, 25, rng)).real());
    Stats s = stats(tr);
    CHECK(std::fabs(s.mean - std::exp(-0.5)) <= 3 * s.err + 0.01);
}

TEST_CASE("heat kernel semigroup", "[groups]") {
    std::mt19937_64 rng(41);
    GroupSpec g = make_group("U", 4);
    const int M = 3000;
    for (int n = 1; n <= 3; ++n) {
        std::vector<double> prod, direct;
        for (int k = 0; k < M; ++k) {
            Matrix a = sample_heat_kernel(g, 0.3, 0, rng), b = sample_heat_kernel(g, 0.5, 0, rng);
            Matrix c = sample_heat_kernel(g, 0.8, 0, rng);
            Matrix ab = a * b;
            Matrix p = ab, q = c;
            for (int j = 1; j < n; ++j) {
                p = p * ab;
                q = q * c;
            }
            prod.push_back(normalized_trace(p).real());
            direct.push_back(normalized_trace(q).real());
        }
        Stats x = stats(prod), y = stats(direct);
        CHECK(std::fabs(x.mean - y.mean) <= 3 * std::hypot(x.err, y.err));
    }
}
