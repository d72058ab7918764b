#include "ymmf/free_moments.hpp"

#include <cmath>
#include <cstdlib>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ymmf/error.hpp"

namespace ymmf {

namespace {

using WideFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;

// Neumaier compensated sum.
struct CompensatedSum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

double nu(double t, int n) {
    if (n < 0) throw Error(ErrorCode::NegativeOrder, "nu needs n >= 0");
    if (t < 0) throw Error(ErrorCode::NegativeTime, "nu needs t >= 0");
    if (n == 0 || t == 0.0) return 1.0;
    if (t * n > 700.0) return 0.0;
    // term_k = (-t)^k / k! * n^{k-1} * C(n, k+1), term_0 = 1
    CompensatedSum sum;
    double term = 1.0, abs_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum.add(term);
        abs_sum += std::fabs(term);
        term *= -t * n / (k + 1) * (n - k - 1) / (k + 2);
    }
    const double decay = std::exp(-0.5 * n * t);
    if (abs_sum * decay * 1e-16 < 1e-17) return sum.value() * decay;

    WideFloat wt = t, wsum = 0, wterm = 1;
    for (int k = 0; k < n; ++k) {
        wsum += wterm;
        wterm *= -wt * n / (k + 1) * (n - k - 1) / (k + 2);
    }
    WideFloat result = wsum * exp(-wt * n / 2);
    return result.convert_to<double>();
}

std::vector<double> nu_ode(double t, int n_max, int steps) {
    if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "nu_ode needs n_max >= 1");
    if (t < 0) throw Error(ErrorCode::NegativeTime, "nu_ode needs t >= 0");
    if (steps <= 0) steps = std::max(1000, static_cast<int>(std::ceil(250.0 * t)));
    std::vector<double> y(n_max + 1, 1.0);
    auto rhs = [n_max](const std::vector<double>& v) {
        std::vector<double> out(n_max + 1, 0.0);
        for (int m = 1; m <= n_max; ++m) {
            double s = 0.0;
            for (int l = 1; l < m; ++l) s += v[l] * v[m - l];
            out[m] = -0.5 * m * v[m] - 0.5 * m * s;
        }
        return out;
    };
    const double h = t / steps;
    std::vector<double> tmp(n_max + 1);
    for (int s = 0; s < steps; ++s) {
        auto k1 = rhs(y);
        for (int i = 0; i <= n_max; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        auto k2 = rhs(tmp);
        for (int i = 0; i <= n_max; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        auto k3 = rhs(tmp);
        for (int i = 0; i <= n_max; ++i) tmp[i] = y[i] + h * k3[i];
        auto k4 = rhs(tmp);
        for (int i = 1; i <= n_max; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    y[0] = 1.0;
    return y;
}

GeneratorLaw GeneratorLaw::deterministic(int sign) {
    if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "deterministic scalar must be +1 or -1");
    return {Kind::Deterministic, 0.0, sign};
}

double GeneratorLaw::moment(int k) const {
    if (k == 0) return 1.0;
    switch (kind) {
        case Kind::Haar: return 0.0;
        case Kind::FreeUnitaryBM: return nu(t, std::abs(k));
        case Kind::Deterministic: return (scalar < 0 && (std::abs(k) % 2 == 1)) ? -1.0 : 1.0;
    }
    return 0.0;
}

namespace {

std::vector<Letter> merge_linear(const std::vector<Letter>& raw) {
    std::vector<Letter> out;
    for (const Letter& l : raw) {
        if (l.exp == 0) continue;
        if (!out.empty() && out.back().gen == l.gen) {
            out.back().exp += l.exp;
            if (out.back().exp == 0) out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    return out;
}

std::vector<Letter> merge_cyclic(std::vector<Letter> w) {
    w = merge_linear(w);
    while (w.size() >= 2 && w.front().gen == w.back().gen) {
        w.front().exp += w.back().exp;
        w.pop_back();
        if (w.front().exp == 0) {
            w.erase(w.begin());
            // the new ends may now match; merge_linear handles interior runs only
            w = merge_linear(w);
        }
    }
    return w;
}

std::vector<int> canonical_key(const std::vector<Letter>& w, std::size_t& best) {
    const std::size_t n = w.size();
    best = 0;
    auto less_at = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < n; ++i) {
            const Letter& x = w[(a + i) % n];
            const Letter& y = w[(b + i) % n];
            if (x.gen != y.gen) return x.gen < y.gen;
            if (x.exp != y.exp) return x.exp < y.exp;
        }
        return false;
    };
    for (std::size_t k = 1; k < n; ++k) {
        if (less_at(k, best)) best = k;
    }
    std::vector<int> key;
    key.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        key.push_back(w[(best + i) % n].gen);
        key.push_back(w[(best + i) % n].exp);
    }
    return key;
}

}  // namespace

GeneratorWord::GeneratorWord(std::vector<Letter> raw) : letters(merge_linear(raw)) {}

GeneratorWord GeneratorWord::inverse() const {
    std::vector<Letter> out(letters.rbegin(), letters.rend());
    for (Letter& l : out) l.exp = -l.exp;
    return GeneratorWord(std::move(out));
}

GeneratorWord GeneratorWord::operator*(const GeneratorWord& o) const {
    std::vector<Letter> raw = letters;
    raw.insert(raw.end(), o.letters.begin(), o.letters.end());
    return GeneratorWord(std::move(raw));
}

std::size_t FreeMomentEngine::KeyHash::operator()(const std::vector<int>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : k) {
        h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
        h *= 1099511628211ull;
    }
    return h;
}

FreeMomentEngine::FreeMomentEngine(std::map<int, GeneratorLaw> laws) : laws_(std::move(laws)) {}

std::size_t FreeMomentEngine::cache_size() const {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    return memo_.size();
}

double FreeMomentEngine::marginal(int gen, int exp) {
    auto it = laws_.find(gen);
    if (it == laws_.end()) throw Error(ErrorCode::UnknownGenerator, "no law for generator " + std::to_string(gen));
    return it->second.moment(exp);
}

double FreeMomentEngine::moment(const GeneratorWord& w) {
    for (const Letter& l : w.letters) {
        if (laws_.find(l.gen) == laws_.end()) {
            throw Error(ErrorCode::UnknownGenerator, "no law for generator " + std::to_string(l.gen));
        }
    }
    return eval(w.letters);
}

double FreeMomentEngine::eval(std::vector<Letter> w) {
    double factor = 1.0;
    std::vector<Letter> kept;
    for (const Letter& l : w) {
        if (laws_.at(l.gen).kind == GeneratorLaw::Kind::Deterministic) {
            factor *= marginal(l.gen, l.exp);
        } else {
            kept.push_back(l);
        }
    }
    w = merge_cyclic(std::move(kept));
    if (w.empty()) return factor;
    if (w.size() == 1) return factor * marginal(w[0].gen, w[0].exp);

    std::size_t start = 0;
    std::vector<int> key = canonical_key(w, start);
    {
        std::lock_guard<std::recursive_mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return factor * it->second;
    }
    const std::size_t n = w.size();
    std::vector<Letter> rot(n);
    for (std::size_t i = 0; i < n; ++i) rot[i] = w[(start + i) % n];

    std::map<int, int> total;
    for (const Letter& l : rot) ++total[l.gen];

    double value = 0.0;
    bool split = false;
    // Two cyclic arcs over disjoint generator sets are free from each other.
    for (std::size_t s = 0; s < n && !split; ++s) {
        std::map<int, int> in_arc;
        int partial = 0;
        for (std::size_t len = 1; len < n; ++len) {
            int g = rot[(s + len - 1) % n].gen;
            int c = ++in_arc[g];
            if (c == 1 && total[g] > 1) ++partial;
            if (c == total[g] && c > 1) --partial;
            if (partial == 0) {
                std::vector<Letter> a, b;
                for (std::size_t i = 0; i < n; ++i) (i < len ? a : b).push_back(rot[(s + i) % n]);
                value = eval(std::move(a)) * eval(std::move(b));
                split = true;
                break;
            }
        }
    }
    if (!split) {
        std::vector<double> m(n);
        std::vector<std::size_t> nonzero;
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = marginal(rot[i].gen, rot[i].exp);
            if (m[i] != 0.0) nonzero.push_back(i);
        }
        if (nonzero.size() > 30) throw Error(ErrorCode::InvalidArgument, "word too long for the centering expansion");
        const std::size_t count = std::size_t{1} << nonzero.size();
        for (std::size_t mask = 1; mask < count; ++mask) {
            double coef = 1.0;
            std::vector<char> drop(n, 0);
            int bits = 0;
            for (std::size_t j = 0; j < nonzero.size(); ++j) {
                if (mask & (std::size_t{1} << j)) {
                    drop[nonzero[j]] = 1;
                    coef *= m[nonzero[j]];
                    ++bits;
                }
            }
            std::vector<Letter> sub;
            for (std::size_t i = 0; i < n; ++i) {
                if (!drop[i]) sub.push_back(rot[i]);
            }
            double sign = (bits % 2 == 1) ? 1.0 : -1.0;
            value += sign * coef * eval(std::move(sub));
        }
    }
    {
        std::lock_guard<std::recursive_mutex> lock(mutex_);
        memo_.emplace(std::move(key), value);
    }
    return factor * value;
}

double free_moment(const GeneratorWord& w, const std::map<int, GeneratorLaw>& laws) {
    FreeMomentEngine engine(laws);
    return engine.moment(w);
}

}  // namespace ymmf
