#include "ymmf/tfree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "ymmf/cover.hpp"
#include "ymmf/error.hpp"
#include "ymmf/map.hpp"
#include "ymmf/planar.hpp"

namespace ymmf {

namespace {

void push_block(std::vector<Letter>& out, Letter l) {
    if (l.exp == 0) return;
    if (!out.empty() && out.back().gen == l.gen) {
        out.back().exp += l.exp;
        if (out.back().exp == 0) out.pop_back();
    } else {
        out.push_back(l);
    }
}

bool letter_less(const Letter& a, const Letter& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.exp < b.exp;
}

}  // namespace

Monomial::Monomial(std::vector<Letter> raw) {
    for (const Letter& l : raw) {
        if (l.gen != 0 && l.gen != 1) throw Error(ErrorCode::InvalidArgument, "monomial letters must be X or Y");
        push_block(blocks, l);
    }
}

bool Monomial::operator<(const Monomial& o) const {
    return std::lexicographical_compare(blocks.begin(), blocks.end(), o.blocks.begin(), o.blocks.end(), letter_less);
}

int Monomial::net(int gen) const {
    int s = 0;
    for (const Letter& l : blocks) {
        if (l.gen == gen) s += l.exp;
    }
    return s;
}

int Monomial::y_degree() const {
    return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const Letter& l) { return l.gen == 1; }));
}

bool Monomial::single_algebra() const {
    return std::all_of(blocks.begin(), blocks.end(), [&](const Letter& l) { return l.gen == blocks.front().gen; });
}

Monomial Monomial::inverse() const {
    std::vector<Letter> out(blocks.rbegin(), blocks.rend());
    for (Letter& l : out) l.exp = -l.exp;
    return Monomial(std::move(out));
}

Monomial Monomial::operator*(const Monomial& o) const {
    std::vector<Letter> raw = blocks;
    raw.insert(raw.end(), o.blocks.begin(), o.blocks.end());
    return Monomial(std::move(raw));
}

Monomial Monomial::pow(int n) const {
    Monomial base = n < 0 ? inverse() : *this;
    Monomial out;
    for (int k = 0; k < std::abs(n); ++k) out = out * base;
    return out;
}

namespace {

struct WordParser {
    const std::string& s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::InvalidArgument, "bad word '" + s + "' at column " + std::to_string(pos + 1) + ": " + what);
    }
    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    int integer() {
        skip();
        bool braces = pos < s.size() && s[pos] == '{';
        if (braces) ++pos;
        int sign = 1;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            if (s[pos] == '-') sign = -1;
            ++pos;
        }
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected an integer");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 1000000) fail("exponent too large");
            ++pos;
        }
        if (braces) {
            if (pos >= s.size() || s[pos] != '}') fail("expected '}'");
            ++pos;
        }
        return sign * static_cast<int>(v);
    }
    Monomial word(bool nested) {
        Monomial out;
        for (;;) {
            skip();
            if (pos >= s.size()) break;
            char c = s[pos];
            Monomial atom;
            if (c == 'X' || c == 'Y') {
                atom = Monomial({Letter{c == 'X' ? 0 : 1, 1}});
                ++pos;
            } else if (c == '1' && !nested && out.empty()) {
                ++pos;
                continue;
            } else if (c == '(') {
                ++pos;
                atom = word(true);
                skip();
                if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
                ++pos;
            } else if (c == ')' && nested) {
                break;
            } else {
                fail(std::string("unexpected '") + c + "'");
            }
            skip();
            if (pos < s.size() && s[pos] == '*') {
                atom = atom.inverse();
                ++pos;
                skip();
            }
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                atom = atom.pow(integer());
            }
            out = out * atom;
        }
        return out;
    }
};

}  // namespace

Monomial parse_monomial(const std::string& text) {
    WordParser p{text};
    Monomial w = p.word(false);
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return w;
}

std::string format_monomial(const Monomial& w) {
    if (w.empty()) return "1";
    std::string out;
    for (const Letter& l : w.blocks) {
        out += l.gen == 0 ? 'X' : 'Y';
        if (l.exp == -1) {
            out += '*';
        } else if (l.exp != 1) {
            out += '^' + std::to_string(l.exp);
        }
    }
    return out;
}

Monomial canonical_monomial(const Monomial& w) {
    std::vector<Letter> b = w.blocks;
    while (b.size() >= 2 && b.front().gen == b.back().gen) {
        b.front().exp += b.back().exp;
        b.pop_back();
        if (b.front().exp == 0) {
            b.erase(b.begin());
            b = Monomial(std::move(b)).blocks;
        }
    }
    const std::size_t n = b.size();
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const Letter& x = b[(k + i) % n];
            const Letter& y = b[(best + i) % n];
            if (letter_less(x, y)) {
                best = k;
                break;
            }
            if (letter_less(y, x)) break;
        }
    }
    Monomial out;
    out.blocks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.blocks.push_back(b[(best + i) % n]);
    return out;
}

std::vector<TensorTerm> delta_ad(const Monomial& p) {
    const std::vector<Letter>& c = p.blocks;
    const std::size_t m = c.size();
    std::vector<std::size_t> ys;
    for (std::size_t i = 0; i < m; ++i) {
        if (c[i].gen == 1) ys.push_back(i);
    }
    std::map<std::pair<Monomial, Monomial>, double> acc;
    auto add = [&acc](double coef, const Monomial& l, const Monomial& r) {
        acc[{canonical_monomial(l), canonical_monomial(r)}] += coef;
    };
    auto slice = [&c](std::size_t from, std::size_t to) {
        return Monomial(std::vector<Letter>(c.begin() + static_cast<long>(from), c.begin() + static_cast<long>(to)));
    };
    const double d = static_cast<double>(ys.size());
    if (d > 0) {
        add(-d / 2, p, Monomial());
        add(-d / 2, Monomial(), p);
    }
    for (std::size_t j : ys) add(1.0, Monomial({c[j]}), slice(0, j) * slice(j + 1, m));
    for (std::size_t a = 0; a < ys.size(); ++a) {
        for (std::size_t b = a + 1; b < ys.size(); ++b) {
            const std::size_t i = ys[a], j = ys[b];
            Monomial p11 = slice(0, i), p2 = slice(i + 1, j), p12 = slice(j + 1, m);
            Monomial xi({c[i]}), xj({c[j]});
            add(-1.0, xi * p2, p11 * xj * p12);
            add(-1.0, p11 * xi * p12, p2 * xj);
            add(1.0, p11 * p12, xi * p2 * xj);
            add(1.0, p11 * xi * xj * p12, p2);
        }
    }
    std::vector<TensorTerm> out;
    for (auto& [key, coef] : acc) {
        if (coef != 0.0) out.push_back({coef, key.first, key.second});
    }
    return out;
}

MomentSystem::MomentSystem(const Monomial& seed, std::size_t cap) {
    std::map<Monomial, std::size_t> index;
    auto intern = [&](const Monomial& w) {
        auto it = index.find(w);
        if (it != index.end()) return it->second;
        if (monomials_.size() >= cap) {
            throw Error(ErrorCode::ClosureExplosion, "moment closure exceeds " + std::to_string(cap) + " monomials");
        }
        index.emplace(w, monomials_.size());
        monomials_.push_back(w);
        return monomials_.size() - 1;
    };
    intern(canonical_monomial(seed));
    for (std::size_t k = 0; k < monomials_.size(); ++k) {
        std::vector<Term> row;
        if (!monomials_[k].single_algebra()) {
            Monomial w = monomials_[k];
            for (const TensorTerm& t : delta_ad(w)) row.push_back({t.coef, intern(t.left), intern(t.right)});
        }
        terms_.push_back(std::move(row));
    }
}

std::size_t MomentSystem::index_of(const Monomial& canonical) const {
    auto it = std::find(monomials_.begin(), monomials_.end(), canonical);
    if (it == monomials_.end()) throw Error(ErrorCode::InvalidArgument, "monomial not in the closure");
    return static_cast<std::size_t>(it - monomials_.begin());
}

std::vector<double> MomentSystem::initial_state(const GeneratorLaw& x, const GeneratorLaw& y) const {
    std::vector<double> s(monomials_.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = x.moment(monomials_[k].net(0)) * y.moment(monomials_[k].net(1));
    return s;
}

void MomentSystem::rhs(const std::vector<double>& state, std::vector<double>& out) const {
    out.assign(state.size(), 0.0);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        double v = 0.0;
        for (const Term& t : terms_[k]) v += t.coef * state[t.left] * state[t.right];
        out[k] = v;
    }
}

std::vector<double> MomentSystem::integrate(double t, const GeneratorLaw& x, const GeneratorLaw& y, double tol) const {
    if (t < 0) throw Error(ErrorCode::NegativeTime, "t-free time must be >= 0");
    std::vector<double> state = initial_state(x, y);
    const std::size_t n = state.size();
    std::vector<double> k1, k2, k3, k4, tmp(n);
    auto step = [&](const std::vector<double>& y0, double h) {
        rhs(y0, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + 0.5 * h * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + 0.5 * h * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + h * k3[i];
        rhs(tmp, k4);
        std::vector<double> y1(n);
        for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        return y1;
    };
    double now = 0.0, h = std::min(t, 0.05);
    while (now < t) {
        h = std::min(h, t - now);
        std::vector<double> full = step(state, h);
        std::vector<double> half = step(step(state, 0.5 * h), 0.5 * h);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::fabs(half[i] - full[i]) / 15.0);
        if (err <= tol || h < 1e-12) {
            for (std::size_t i = 0; i < n; ++i) state[i] = half[i] + (half[i] - full[i]) / 15.0;
            now += h;
        }
        double factor = err == 0.0 ? 4.0 : 0.9 * std::pow(tol / err, 0.2);
        h *= std::clamp(factor, 0.2, 4.0);
    }
    return state;
}

namespace {

std::shared_ptr<const MomentSystem> cached_system(const Monomial& canonical) {
    static std::mutex mutex;
    static std::map<Monomial, std::shared_ptr<const MomentSystem>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(canonical);
    if (it != cache.end()) return it->second;
    auto sys = std::make_shared<const MomentSystem>(canonical);
    cache.emplace(canonical, sys);
    return sys;
}

}  // namespace

double tfree_moment(const Monomial& p, double t, const GeneratorLaw& x, const GeneratorLaw& y) {
    if (t < 0) throw Error(ErrorCode::NegativeTime, "t-free time must be >= 0");
    Monomial c = canonical_monomial(p);
    if (c.empty()) return 1.0;
    if (c.single_algebra()) return c.blocks.front().gen == 0 ? x.moment(c.net(0)) : y.moment(c.net(1));
    auto sys = cached_system(c);
    return sys->integrate(t, x, y)[0];
}

double phi_T_word(const Monomial& w, double T) {
    if (T < 0) throw Error(ErrorCode::NegativeTime, "area must be >= 0");
    if (w.net(0) != 0 || w.net(1) != 0) return 0.0;
    if (w.empty()) return 1.0;
    static const PolygonMap torus = bouquet(1);
    const Dart gen_dart[2] = {0, 2};
    std::vector<Dart> darts;
    for (const Letter& l : w.blocks) {
        Dart d = l.exp > 0 ? gen_dart[l.gen] : torus.map.alpha(gen_dart[l.gen]);
        darts.insert(darts.end(), static_cast<std::size_t>(std::abs(l.exp)), d);
    }
    AreaVector a{std::vector<double>(static_cast<std::size_t>(torus.map.num_faces()), T)};
    return eval_surface(torus, make_loop(torus.map, darts), a).value;
}

double classical_value(const Monomial& w) {
    return (w.net(0) == 0 && w.net(1) == 0) ? 1.0 : 0.0;
}

double free_value(const Monomial& w) {
    return free_moment(GeneratorWord(w.blocks), {{0, GeneratorLaw::haar()}, {1, GeneratorLaw::haar()}});
}

std::vector<InterpolationRow> interpolation_report(double T, const std::vector<Monomial>& words) {
    std::vector<InterpolationRow> rows;
    for (const Monomial& w : words) {
        InterpolationRow r;
        r.word = format_monomial(w);
        r.phi = phi_T_word(w, T);
        r.tfree = tfree_moment(w, T / 4);
        r.classical = classical_value(w);
        r.free = free_value(w);
        r.separating = std::fabs(r.phi - r.tfree) > 1e-6;
        rows.push_back(r);
    }
    return rows;
}

InterpolationLimits interpolation_limits(const Monomial& w) {
    InterpolationLimits lim;
    lim.classical_gap = std::fabs(phi_T_word(w, lim.small_T) - classical_value(w));
    lim.free_gap = std::fabs(phi_T_word(w, lim.large_T) - free_value(w));
    return lim;
}

}  // namespace ymmf
