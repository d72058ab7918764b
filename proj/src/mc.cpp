#include "ymmf/mc.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "ymmf/error.hpp"

namespace ymmf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t sample, std::uint64_t generator) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ splitmix64(sample + 0x1234567ull));
    h = splitmix64(h ^ splitmix64(generator + 0xABCDEFull));
    return std::mt19937_64(h);
}

HolonomySample sample_ym_one_boundary(const CombinatorialMap& m, const LassoBasis& basis, const AreaVector& a,
                                      const GroupSpec& g, int steps, std::uint64_t seed, std::uint64_t sample) {
    if (m.boundary_faces().size() != 1) throw Error(ErrorCode::WrongBoundaryCount, "sampling needs one boundary face");
    validate_areas(m, a);
    HolonomySample out;
    for (std::size_t k = 0; k < basis.generators.size(); ++k) {
        std::mt19937_64 rng = stream_rng(seed, sample, k);
        const FaceId f = basis.generator_face[k];
        out.generators.push_back(f < 0 ? sample_haar(g, rng) : sample_heat_kernel(g, a[f], steps, rng));
    }
    return out;
}

Matrix holonomy(const HolonomySample& s, const GeneratorWord& w) {
    const int d = s.generators.empty() ? 0 : static_cast<int>(s.generators[0].rows());
    Matrix h = Matrix::Identity(d, d);
    for (const Letter& l : w.letters) {
        if (l.gen < 0 || l.gen >= static_cast<int>(s.generators.size())) {
            throw Error(ErrorCode::UnknownGenerator, "generator " + std::to_string(l.gen) + " has no sample");
        }
        const Matrix& base = s.generators[l.gen];
        const Matrix step = l.exp > 0 ? base : Matrix(base.adjoint());
        for (int k = 0; k < std::abs(l.exp); ++k) h = step * h;
    }
    return h;
}

int default_workers() {
    if (const char* env = std::getenv("YMMF_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

std::vector<WilsonEstimate> wilson_estimates(const CombinatorialMap& m, const std::vector<LoopPath>& loops,
                                             const LassoBasis& basis, const AreaVector& a, const GroupSpec& g,
                                             const McConfig& cfg) {
    if (cfg.samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
    std::vector<GeneratorWord> words;
    for (const LoopPath& l : loops) words.push_back(decompose(m, l, basis));
    const std::size_t L = loops.size(), S = static_cast<std::size_t>(cfg.samples);
    std::vector<double> values(L * S);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t s = begin; s < S; s += stride) {
            HolonomySample sample = sample_ym_one_boundary(m, basis, a, g, cfg.steps, cfg.seed, s);
            for (std::size_t k = 0; k < L; ++k) values[k * S + s] = normalized_trace(holonomy(sample, words[k])).real();
        }
    };
    const int workers = std::max(1, std::min(cfg.workers > 0 ? cfg.workers : default_workers(), cfg.samples));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w, workers);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    std::vector<WilsonEstimate> out;
    for (std::size_t k = 0; k < L; ++k) {
        const double* v = values.data() + k * S;
        WilsonEstimate e;
        e.samples = cfg.samples;
        e.mean = pairwise_sum(v, S) / S;
        std::vector<double> sq(S);
        for (std::size_t i = 0; i < S; ++i) sq[i] = (v[i] - e.mean) * (v[i] - e.mean);
        e.variance = pairwise_sum(sq.data(), S) / (S - 1);
        e.stderr_ = std::sqrt(e.variance / S);
        out.push_back(e);
    }
    return out;
}

WilsonEstimate wilson_estimate(const CombinatorialMap& m, const LoopPath& l, const LassoBasis& basis,
                               const AreaVector& a, const GroupSpec& g, const McConfig& cfg) {
    return wilson_estimates(m, {l}, basis, a, g, cfg)[0];
}

}  // namespace ymmf
