#include "ymmf/cover.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "ymmf/builders.hpp"
#include "ymmf/homology.hpp"

namespace ymmf {

namespace {

DeckWord free_reduce(const DeckWord& w) {
    DeckWord out;
    for (int x : w) {
        if (!out.empty() && out.back() == -x) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return out;
}

DeckWord invert(const DeckWord& w) {
    DeckWord out(w.rbegin(), w.rend());
    for (int& x : out) x = -x;
    return out;
}

DeckWord cyclic_free_reduce(DeckWord w) {
    w = free_reduce(w);
    std::size_t a = 0, b = w.size();
    while (b - a >= 2 && w[a] == -w[b - 1]) {
        ++a;
        --b;
    }
    return DeckWord(w.begin() + a, w.begin() + b);
}

bool cyclic_equal(const DeckWord& a, const DeckWord& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (std::size_t s = 0; s < a.size(); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[(s + i) % a.size()] == b[i];
        if (ok) return true;
    }
    return false;
}

}  // namespace

DeckGroup::DeckGroup(int genus, DeckWord relator, std::vector<std::array<long, 2>> abelian)
    : genus_(genus), relator_(std::move(relator)), abelian_(std::move(abelian)) {
    if (genus_ < 1) throw Error(ErrorCode::NoPolygonStructure, "surface group needs genus >= 1");
    if (static_cast<int>(relator_.size()) != 4 * genus_) {
        throw Error(ErrorCode::NoPolygonStructure, "relator length does not match the genus");
    }
    if (genus_ == 1) {
        if (abelian_.empty()) abelian_ = {{1, 0}, {0, 1}};
        if (abelian_.size() != 2) throw Error(ErrorCode::NoPolygonStructure, "genus one needs two abelian images");
        long det = abelian_[0][0] * abelian_[1][1] - abelian_[0][1] * abelian_[1][0];
        if (std::labs(det) != 1) throw Error(ErrorCode::NoPolygonStructure, "abelian images do not span Z^2");
        auto img = abelianize(relator_);
        if (img[0] != 0 || img[1] != 0) throw Error(ErrorCode::NoPolygonStructure, "relator is not a commutator");
    }
    const std::size_t n = relator_.size();
    for (const DeckWord& r : {relator_, invert(relator_)}) {
        for (std::size_t s = 0; s < n; ++s) {
            DeckWord rot(n);
            for (std::size_t i = 0; i < n; ++i) rot[i] = r[(s + i) % n];
            relator_rotations_.push_back(rot);
        }
    }
}

DeckWord DeckGroup::reduce(DeckWord w) const {
    w = free_reduce(w);
    if (genus_ == 1) return w;
    const std::size_t n = relator_.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < w.size() && !changed; ++i) {
            for (const DeckWord& r : relator_rotations_) {
                std::size_t m = 0;
                while (m < n && i + m < w.size() && w[i + m] == r[m]) ++m;
                if (2 * m <= n) continue;
                DeckWord tail(r.begin() + m, r.end());
                DeckWord out(w.begin(), w.begin() + i);
                for (int x : invert(tail)) out.push_back(x);
                out.insert(out.end(), w.begin() + i + m, w.end());
                w = free_reduce(out);
                changed = true;
                break;
            }
        }
    }
    return w;
}

DeckWord DeckGroup::multiply(const DeckWord& a, const DeckWord& b) const {
    DeckWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return reduce(std::move(w));
}

DeckWord DeckGroup::inverse(const DeckWord& w) const { return invert(w); }

std::array<long, 2> DeckGroup::abelianize(const DeckWord& w) const {
    if (genus_ != 1) throw Error(ErrorCode::WrongGenus, "abelian image is only used in genus one");
    std::array<long, 2> v{0, 0};
    for (int x : w) {
        const auto& a = abelian_[std::abs(x) - 1];
        const long s = x > 0 ? 1 : -1;
        v[0] += s * a[0];
        v[1] += s * a[1];
    }
    return v;
}

bool DeckGroup::is_identity(const DeckWord& w) const {
    if (genus_ == 1) {
        auto v = abelianize(w);
        return v[0] == 0 && v[1] == 0;
    }
    return reduce(w).empty();
}

bool DeckGroup::equal(const DeckWord& a, const DeckWord& b) const { return is_identity(multiply(invert(a), b)); }

std::string DeckGroup::format(const DeckWord& w) const {
    if (genus_ == 1) {
        auto v = abelianize(w);
        return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + ")";
    }
    DeckWord r = reduce(w);
    if (r.empty()) return "1";
    std::ostringstream out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const int k = std::abs(r[i]) - 1;
        if (i) out << ' ';
        out << (k % 2 == 0 ? 'a' : 'b') << (k / 2 + 1);
        if (r[i] < 0) out << "^-1";
    }
    return out.str();
}

bool PolygonMap::on_side(VertexId v) const {
    for (Dart d : map.rotation(v)) {
        if (is_side(d)) return true;
    }
    return false;
}

PolygonMap make_polygon_map(CombinatorialMap m, std::vector<int> side, std::vector<Dart> polygon_word,
                            std::vector<std::array<long, 2>> abelian) {
    if (!m.is_closed()) throw Error(ErrorCode::NoPolygonStructure, "polygon maps are closed");
    const int g = m.genus();
    if (g < 1) throw Error(ErrorCode::NoPolygonStructure, "polygon maps need genus >= 1");
    if (static_cast<int>(side.size()) != m.num_darts()) {
        throw Error(ErrorCode::NoPolygonStructure, "side labels must cover every dart");
    }
    for (Dart d = 0; d < m.num_darts(); ++d) {
        if (side[d] != -side[m.alpha(d)]) throw Error(ErrorCode::NoPolygonStructure, "side labels are not inverse on reversed darts");
        if (std::abs(side[d]) > 2 * g) throw Error(ErrorCode::NoPolygonStructure, "side label out of range");
    }
    for (Dart d : polygon_word) {
        if (d < 0 || d >= m.num_darts()) throw Error(ErrorCode::NoPolygonStructure, "polygon word leaves the map");
    }
    DeckWord relator;
    std::vector<DeckWord> products;
    for (VertexId v = 0; v < m.num_vertices(); ++v) {
        DeckWord prod;
        Dart d0 = m.rotation(v)[0];
        Dart d = d0;
        do {
            d = m.sigma(d);
            if (side[d] != 0) prod.push_back(-side[d]);
        } while (d != d0);
        prod = cyclic_free_reduce(prod);
        if (prod.empty()) continue;
        if (relator.empty()) relator = prod;
        products.push_back(prod);
    }
    if (relator.empty()) throw Error(ErrorCode::NoPolygonStructure, "no polygon corner found");
    for (const DeckWord& p : products) {
        if (!cyclic_equal(p, relator) && !cyclic_equal(p, invert(relator))) {
            throw Error(ErrorCode::NoPolygonStructure, "vertex rotations give more than one relator");
        }
    }
    PolygonMap pm;
    pm.group = DeckGroup(g, relator, std::move(abelian));
    pm.map = std::move(m);
    pm.side = std::move(side);
    pm.polygon_word = std::move(polygon_word);
    return pm;
}

Dart TorusGrid::east(int i, int j) const {
    i = ((i % cols) + cols) % cols;
    j = ((j % rows) + rows) % rows;
    return 2 * (j * cols + i);
}

Dart TorusGrid::north(int i, int j) const {
    i = ((i % cols) + cols) % cols;
    j = ((j % rows) + rows) % rows;
    return 2 * (cols * rows + j * cols + i);
}

LoopPath TorusGrid::walk(int i, int j, const std::string& moves) const {
    std::vector<Dart> darts;
    for (char c : moves) {
        switch (c) {
            case 'R': darts.push_back(east(i, j)); ++i; break;
            case 'L': darts.push_back(west(i, j)); --i; break;
            case 'U': darts.push_back(north(i, j)); ++j; break;
            case 'D': darts.push_back(south(i, j)); --j; break;
            default: throw Error(ErrorCode::InvalidArgument, std::string("unknown move ") + c);
        }
    }
    return make_path(surface.map, std::move(darts));
}

TorusGrid torus_grid(int cols, int rows) {
    if (cols < 1 || rows < 1) throw Error(ErrorCode::InvalidArgument, "torus grid needs at least one square");
    TorusGrid t;
    t.cols = cols;
    t.rows = rows;
    const int n = 4 * cols * rows;
    std::vector<std::vector<Dart>> rotations;
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
            rotations.push_back({t.east(i, j), t.north(i, j), t.east(i - 1, j) + 1, t.north(i, j - 1) + 1});
        }
    }
    CombinatorialMap m = build_map(paired_alpha(n), sigma_from_rotations(n, rotations));
    std::vector<int> side(n, 0);
    std::vector<Dart> word;
    for (int j = 0; j < rows; ++j) {
        side[t.north(0, j)] = 1;
        side[t.north(0, j) + 1] = -1;
    }
    for (int i = 0; i < cols; ++i) {
        side[t.east(i, 0)] = -2;
        side[t.east(i, 0) + 1] = 2;
    }
    for (int i = 0; i < cols; ++i) word.push_back(t.east(i, 0));
    for (int j = 0; j < rows; ++j) word.push_back(t.north(0, j));
    for (int i = cols; i > 0; --i) word.push_back(t.east(i - 1, 0) + 1);
    for (int j = rows; j > 0; --j) word.push_back(t.north(0, j - 1) + 1);
    t.surface = make_polygon_map(std::move(m), std::move(side), std::move(word), {{{1, 0}}, {{0, 1}}});
    return t;
}

PolygonMap bouquet(int genus) {
    if (genus < 1) throw Error(ErrorCode::NegativeGenus, "bouquet needs genus >= 1");
    std::vector<Dart> word;
    std::vector<int> side(4 * genus);
    for (int i = 0; i < genus; ++i) {
        word.insert(word.end(), {4 * i, 4 * i + 2, 4 * i + 1, 4 * i + 3});
        side[4 * i] = 2 * i + 1;
        side[4 * i + 1] = -(2 * i + 1);
        side[4 * i + 2] = 2 * i + 2;
        side[4 * i + 3] = -(2 * i + 2);
    }
    std::vector<std::array<long, 2>> abelian;
    if (genus == 1) abelian = {{{0, -1}}, {{1, 0}}};
    CombinatorialMap m = one_face_map(word);
    return make_polygon_map(std::move(m), std::move(side), word, abelian);
}

namespace {

/** Copies of the fundamental polygon met so far, identified up to equality in the deck group. */
class CopyRegistry {
public:
    explicit CopyRegistry(const DeckGroup& g) : group_(g) {}

    int find_or_add(const DeckWord& w) {
        DeckWord r = group_.reduce(w);
        if (group_.genus() == 1) {
            auto key = group_.abelianize(r);
            auto it = abelian_index_.find(key);
            if (it != abelian_index_.end()) return it->second;
            abelian_index_[key] = add(r);
            return abelian_index_[key];
        }
        auto it = exact_.find(r);
        if (it != exact_.end()) return it->second;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (group_.equal(words_[i], r)) {
                exact_[r] = static_cast<int>(i);
                return static_cast<int>(i);
            }
        }
        int id = add(r);
        exact_[r] = id;
        return id;
    }

    int step(int copy, int letter) {
        auto key = std::make_pair(copy, letter);
        auto it = steps_.find(key);
        if (it != steps_.end()) return it->second;
        DeckWord w = words_[copy];
        w.push_back(letter);
        int out = find_or_add(w);
        steps_[key] = out;
        return out;
    }

    const DeckWord& word(int copy) const { return words_[copy]; }

private:
    int add(const DeckWord& w) {
        words_.push_back(w);
        return static_cast<int>(words_.size() - 1);
    }

    const DeckGroup& group_;
    std::vector<DeckWord> words_;
    std::map<std::array<long, 2>, int> abelian_index_;
    std::map<DeckWord, int> exact_;
    std::map<std::pair<int, int>, int> steps_;
};

struct LiftState {
    int copy;
    Dart dart;
    bool operator<(const LiftState& o) const { return copy != o.copy ? copy < o.copy : dart < o.dart; }
    bool operator==(const LiftState& o) const { return copy == o.copy && dart == o.dart; }
};

LiftState alpha_lift(const PolygonMap& pm, CopyRegistry& reg, LiftState x) {
    int c = pm.side[x.dart] ? reg.step(x.copy, pm.side[x.dart]) : x.copy;
    return {c, pm.map.alpha(x.dart)};
}

LiftState sigma_lift(const PolygonMap& pm, CopyRegistry& reg, LiftState x) {
    Dart s = pm.map.sigma(x.dart);
    int c = pm.side[s] ? reg.step(x.copy, -pm.side[s]) : x.copy;
    return {c, s};
}

void require_on_map(const CombinatorialMap& m, const LoopPath& l) {
    for (Dart d : l.darts) {
        if (d < 0 || d >= m.num_darts()) throw Error(ErrorCode::NotOnMap, "dart is not on the map");
    }
    VertexId at = l.base;
    for (Dart d : l.darts) {
        if (m.tail(d) != at) throw Error(ErrorCode::NotOnMap, "path does not chain on this map");
        at = m.head(d);
    }
    if (at != l.base) throw Error(ErrorCode::NotALoop, "path does not close");
}

std::vector<LiftState> trace(const PolygonMap& pm, CopyRegistry& reg, const LoopPath& l, int& end_copy) {
    std::vector<LiftState> out;
    const int start = reg.find_or_add({});
    end_copy = start;
    if (l.darts.empty()) return out;
    // The frame is fixed by the first dart in the rotation at the base.
    const Dart ref = pm.map.rotation(l.base)[0];
    LiftState cur{start, ref};
    while (cur.dart != l.darts[0]) cur = sigma_lift(pm, reg, cur);
    out.push_back(cur);
    for (std::size_t i = 1; i <= l.darts.size(); ++i) {
        Dart next = i == l.darts.size() ? ref : l.darts[i];
        LiftState x = alpha_lift(pm, reg, cur);
        while (x.dart != next) x = sigma_lift(pm, reg, x);
        if (i == l.darts.size()) {
            end_copy = x.copy;
        } else {
            out.push_back(x);
            cur = x;
        }
    }
    return out;
}

LiftedPatch build_patch(const PolygonMap& pm, CopyRegistry& reg, const std::vector<LiftState>& lifted) {
    const CombinatorialMap& m = pm.map;
    std::set<std::pair<int, FaceId>> faces;
    for (const LiftState& x : lifted) {
        faces.insert({x.copy, m.left_face(x.dart)});
        LiftState y = alpha_lift(pm, reg, x);
        faces.insert({y.copy, m.left_face(y.dart)});
    }
    constexpr std::size_t max_faces = 200000;
    for (int round = 0; round < 256; ++round) {
        std::map<LiftState, int> index;
        std::vector<LiftState> darts;
        auto add = [&](LiftState s) {
            if (index.emplace(s, static_cast<int>(darts.size())).second) darts.push_back(s);
        };
        for (const auto& [c, f] : faces) {
            for (Dart d : m.face_boundary(f)) {
                LiftState s{c, d};
                add(s);
                add(alpha_lift(pm, reg, s));
            }
        }
        const int n = static_cast<int>(darts.size());
        std::vector<Dart> alpha(n), sigma(n);
        for (int i = 0; i < n; ++i) {
            alpha[i] = index.at(alpha_lift(pm, reg, darts[i]));
            LiftState x = sigma_lift(pm, reg, darts[i]);
            while (!index.count(x)) x = sigma_lift(pm, reg, x);
            sigma[i] = index.at(x);
        }
        CombinatorialMap patch = build_map(alpha, sigma);
        std::vector<FaceId> outside;
        for (FaceId f = 0; f < patch.num_faces(); ++f) {
            const LiftState& s = darts[patch.face_boundary(f)[0]];
            if (!faces.count({s.copy, m.left_face(s.dart)})) outside.push_back(f);
        }
        if (outside.size() == 1) {
            if (patch.genus() != 0) throw Error(ErrorCode::ClosureExplosion, "lifted patch is not planar");
            LiftedPatch out;
            out.map = patch.with_boundary(outside);
            out.face_base.assign(patch.num_faces(), -1);
            out.face_copy.assign(patch.num_faces(), {});
            for (FaceId f = 0; f < patch.num_faces(); ++f) {
                if (f == outside[0]) continue;
                const LiftState& s = darts[patch.face_boundary(f)[0]];
                out.face_base[f] = m.left_face(s.dart);
                out.face_copy[f] = reg.word(s.copy);
            }
            std::vector<Dart> loop;
            for (const LiftState& x : lifted) loop.push_back(index.at(x));
            out.loop = make_loop(out.map, loop);
            return out;
        }
        std::set<std::pair<int, FaceId>> grown = faces;
        for (const auto& [c, f] : faces) {
            for (Dart d : m.face_boundary(f)) {
                LiftState x{c, d};
                do {
                    grown.insert({x.copy, m.left_face(x.dart)});
                    x = sigma_lift(pm, reg, x);
                } while (!(x == LiftState{c, d}));
            }
        }
        faces = std::move(grown);
        if (faces.size() > max_faces) break;
    }
    throw Error(ErrorCode::ClosureExplosion, "lifted patch did not close");
}

}  // namespace

AreaVector LiftedPatch::pull_back(const AreaVector& a) const {
    AreaVector out;
    out.values.assign(map.num_faces(), 0.0);
    for (FaceId f = 0; f < map.num_faces(); ++f) {
        if (face_base[f] >= 0) out.values[f] = a[face_base[f]];
    }
    return out;
}

LoopLift lift_loop(const PolygonMap& pm, const LoopPath& l, bool with_patch) {
    require_on_map(pm.map, l);
    CopyRegistry reg(pm.group);
    int end_copy = 0;
    std::vector<LiftState> lifted = trace(pm, reg, l, end_copy);
    LoopLift out;
    for (const LiftState& x : lifted) out.darts.push_back({reg.word(x.copy), x.dart});
    out.deck = reg.word(end_copy);
    out.closed = pm.group.is_identity(out.deck);
    if (out.closed && with_patch && !lifted.empty()) out.patch = build_patch(pm, reg, lifted);
    return out;
}

bool is_contractible(const PolygonMap& pm, const LoopPath& l) {
    if (pm.genus() == 1) {
        require_on_map(pm.map, l);
        return homology_class(pm.map, l).is_zero();
    }
    return lift_loop(pm, l, false).closed;
}

TilingStats tiling_stats(const PolygonMap& pm, const LoopPath& l) {
    require_on_map(pm.map, l);
    if (pm.on_side(l.base)) throw Error(ErrorCode::NotRegularWrtPolygon, "loop is based on a polygon side");
    for (Dart d : l.darts) {
        if (pm.is_side(d)) throw Error(ErrorCode::NotRegularWrtPolygon, "loop runs along a polygon side");
    }
    LoopLift lift = lift_loop(pm, l, false);
    TilingStats out;
    out.path.push_back({});
    for (const LiftedDart& x : lift.darts) {
        if (!pm.group.equal(out.path.back(), x.copy)) out.path.push_back(pm.group.reduce(x.copy));
    }
    if (!pm.group.equal(out.path.back(), lift.deck)) out.path.push_back(pm.group.reduce(lift.deck));
    out.length = static_cast<int>(out.path.size()) - 1;
    return out;
}

SurfaceValue eval_surface(const PolygonMap& pm, const LoopPath& l, const AreaVector& a) {
    validate_areas(pm.map, a);
    SurfaceValue out;
    out.conjectural = pm.genus() >= 2;
    LoopLift lift = lift_loop(pm, l, true);
    out.contractible = lift.closed;
    if (!lift.closed) return out;
    if (!lift.patch) {
        out.value = 1.0;
        return out;
    }
    out.value = eval_planar(lift.patch->map, lift.patch->loop, lift.patch->pull_back(a));
    return out;
}

double mm_residual_surface(const PolygonMap& pm, const LoopPath& l, const AreaVector& a, VertexId v, double h) {
    if (!(h > 0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    validate_areas(pm.map, a);
    DiscreteForm mu = mm_vector(pm.map, l, v);
    auto [l1, l2] = desingularize(pm.map, l, v);
    AreaVector plus = a, minus = a;
    for (FaceId f = 0; f < pm.map.num_faces(); ++f) {
        const double c = to_double(mu.coeffs[f]);
        plus.values[f] += h * c;
        minus.values[f] -= h * c;
        if (plus.values[f] < 0 || minus.values[f] < 0) {
            throw Error(ErrorCode::BoundaryOfSimplex, "perturbation leaves the area simplex at face " + std::to_string(f));
        }
    }
    const double derivative = (eval_surface(pm, l, plus).value - eval_surface(pm, l, minus).value) / (2 * h);
    return derivative - eval_surface(pm, l1, a).value * eval_surface(pm, l2, a).value;
}

}  // namespace ymmf
