#ifndef YMMF_FREE_MOMENTS_HPP
#define YMMF_FREE_MOMENTS_HPP

#include <map>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace ymmf {

/** nu_t(n) = tau(u_t^n) for the free unitary Brownian motion; nu_t(0) = 1. */
double nu(double t, int n);

/** nu_t(1..n_max) by RK4 on the moment ODE; index 0 of the result holds nu_t(0) = 1. */
std::vector<double> nu_ode(double t, int n_max, int steps = 0);

struct GeneratorLaw {
    enum class Kind { Haar, FreeUnitaryBM, Deterministic };
    Kind kind = Kind::Haar;
    double t = 0.0;
    int scalar = 1;

    static GeneratorLaw haar() { return {Kind::Haar, 0.0, 1}; }
    static GeneratorLaw free_bm(double t) { return {Kind::FreeUnitaryBM, t, 1}; }
    /** Deterministic unitary scalar; restricted to +1 or -1 so that moments stay real. */
    static GeneratorLaw deterministic(int sign);

    double moment(int k) const;
};

struct Letter {
    int gen = 0;
    int exp = 0;
    bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};

/** Word in free generators; adjacent equal generators are merged and zero exponents dropped. */
struct GeneratorWord {
    std::vector<Letter> letters;

    GeneratorWord() = default;
    explicit GeneratorWord(std::vector<Letter> raw);

    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
    bool operator==(const GeneratorWord& o) const { return letters == o.letters; }
    GeneratorWord inverse() const;
    GeneratorWord operator*(const GeneratorWord& o) const;
};

/**
 * Evaluates tau on words in freely independent unitaries with the given
 * marginal laws. Results are memoised on cyclic canonical forms; the cache
 * is guarded so one engine can be shared between threads.
 */
class FreeMomentEngine {
public:
    explicit FreeMomentEngine(std::map<int, GeneratorLaw> laws);

    double moment(const GeneratorWord& w);
    const std::map<int, GeneratorLaw>& laws() const { return laws_; }
    std::size_t cache_size() const;

private:
    double eval(std::vector<Letter> cyc);
    double marginal(int gen, int exp);

    struct KeyHash {
        std::size_t operator()(const std::vector<int>& k) const;
    };

    std::map<int, GeneratorLaw> laws_;
    std::unordered_map<std::vector<int>, double, KeyHash> memo_;
    mutable std::recursive_mutex mutex_;
};

double free_moment(const GeneratorWord& w, const std::map<int, GeneratorLaw>& laws);

}  // namespace ymmf

#endif
