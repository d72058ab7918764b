#include "ymmf/planar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ymmf/homology.hpp"

namespace ymmf {

namespace {

std::vector<Letter> inverse_letters(const std::vector<Letter>& w) {
    std::vector<Letter> out(w.rbegin(), w.rend());
    for (Letter& l : out) l.exp = -l.exp;
    return out;
}

void append(std::vector<Letter>& out, const std::vector<Letter>& w) { out.insert(out.end(), w.begin(), w.end()); }

void append_dart(std::vector<Letter>& out, const CombinatorialMap& m, const LassoBasis& b, Dart d) {
    const auto& w = b.edge_word[m.edge_of(d)];
    if (w.empty()) return;
    if (m.is_positive(d)) {
        append(out, w);
    } else {
        append(out, inverse_letters(w));
    }
}

void require_one_boundary(const CombinatorialMap& m) {
    if (m.boundary_faces().size() != 1) {
        throw Error(ErrorCode::WrongBoundaryCount,
                    "expected one boundary face, found " + std::to_string(m.boundary_faces().size()));
    }
}

void require_on_map(const CombinatorialMap& m, const LoopPath& l) {
    for (Dart d : l.darts) {
        if (d < 0 || d >= m.num_darts()) throw Error(ErrorCode::NotOnMap, "dart " + std::to_string(d) + " is not on the map");
    }
    if (l.base < 0 || l.base >= m.num_vertices()) throw Error(ErrorCode::NotOnMap, "base vertex is not on the map");
    VertexId at = l.base;
    for (Dart d : l.darts) {
        if (m.tail(d) != at) throw Error(ErrorCode::NotOnMap, "path does not chain on this map");
        at = m.head(d);
    }
    if (l.is_loop && at != l.base) throw Error(ErrorCode::NotOnMap, "loop does not close on this map");
}

std::map<int, GeneratorLaw> laws_for(const CombinatorialMap& m, const AreaVector& a, const LassoBasis& b) {
    std::map<int, GeneratorLaw> laws;
    for (std::size_t g = 0; g < b.generators.size(); ++g) {
        FaceId f = b.generator_face[g];
        laws[static_cast<int>(g)] = f < 0 ? GeneratorLaw::haar() : GeneratorLaw::free_bm(a[f]);
    }
    (void)m;
    return laws;
}

}  // namespace

double AreaVector::total(const CombinatorialMap& m) const {
    double s = 0.0;
    for (FaceId f = 0; f < m.num_faces() && f < static_cast<FaceId>(values.size()); ++f) {
        if (!m.is_boundary(f)) s += values[f];
    }
    return s;
}

void validate_areas(const CombinatorialMap& m, const AreaVector& a) {
    if (static_cast<int>(a.values.size()) != m.num_faces()) {
        throw Error(ErrorCode::AreaMismatch, "area vector has " + std::to_string(a.values.size()) +
                                                 " entries for " + std::to_string(m.num_faces()) + " faces");
    }
    for (FaceId f = 0; f < m.num_faces(); ++f) {
        if (m.is_boundary(f)) continue;
        if (!std::isfinite(a.values[f]) || a.values[f] < 0) {
            throw Error(ErrorCode::AreaMismatch, "face " + std::to_string(f) + " has an invalid area");
        }
    }
}

LassoBasis lasso_basis(const CombinatorialMap& m, VertexId root) {
    require_one_boundary(m);
    if (root < 0 || root >= m.num_vertices()) throw Error(ErrorCode::NotOnMap, "root is not a vertex of the map");
    LassoBasis b;
    b.root = root;
    b.boundary_face = m.boundary_faces()[0];
    b.tree = SpanningTree(m, root);

    const int F = m.num_faces();
    std::vector<Dart> parent_dart(F, -1);
    std::vector<char> seen(F, 0), cotree(m.num_edges(), 0);
    std::vector<FaceId> order;
    std::deque<FaceId> queue{b.boundary_face};
    seen[b.boundary_face] = 1;
    while (!queue.empty()) {
        FaceId f = queue.front();
        queue.pop_front();
        order.push_back(f);
        std::vector<Dart> darts = m.face_boundary(f);
        std::sort(darts.begin(), darts.end());
        for (Dart d : darts) {
            if (b.tree.in_tree(m.edge_of(d))) continue;
            FaceId g = m.right_face(d);
            if (seen[g]) continue;
            seen[g] = 1;
            parent_dart[g] = m.alpha(d);
            cotree[m.edge_of(d)] = 1;
            queue.push_back(g);
        }
    }

    b.face_generator.assign(F, -1);
    for (FaceId f = 0; f < F; ++f) {
        if (f == b.boundary_face) continue;
        b.face_generator[f] = static_cast<int>(b.generators.size());
        b.generator_face.push_back(f);
        const Dart c = parent_dart[f];
        const auto& cyc = m.face_boundary(f);
        std::size_t k = std::find(cyc.begin(), cyc.end(), c) - cyc.begin();
        std::vector<Dart> darts = b.tree.path_from_root(m.tail(c));
        for (std::size_t i = 0; i < cyc.size(); ++i) darts.push_back(cyc[(k + i) % cyc.size()]);
        for (Dart d : b.tree.path_to_root(m, m.tail(c))) darts.push_back(d);
        LoopPath lasso;
        lasso.darts = std::move(darts);
        lasso.base = root;
        b.generators.push_back(lasso);
    }

    b.edge_word.assign(m.num_edges(), {});
    for (EdgeId e = 0; e < m.num_edges(); ++e) {
        if (b.tree.in_tree(e) || cotree[e]) continue;
        const int g = static_cast<int>(b.generators.size());
        b.handle_generators.push_back(g);
        b.generator_face.push_back(-1);
        const Dart d = m.edge_dart(e);
        std::vector<Dart> darts = b.tree.path_from_root(m.tail(d));
        darts.push_back(d);
        for (Dart x : b.tree.path_to_root(m, m.head(d))) darts.push_back(x);
        LoopPath loop;
        loop.darts = std::move(darts);
        loop.base = root;
        b.generators.push_back(reduce_path(m, loop));
        b.edge_word[e] = {{g, 1}};
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const FaceId f = *it;
        if (f == b.boundary_face) continue;
        const Dart c = parent_dart[f];
        const auto& cyc = m.face_boundary(f);
        std::size_t k = std::find(cyc.begin(), cyc.end(), c) - cyc.begin();
        std::vector<Letter> rest;
        for (std::size_t i = 1; i < cyc.size(); ++i) append_dart(rest, m, b, cyc[(k + i) % cyc.size()]);
        std::vector<Letter> w{{b.face_generator[f], 1}};
        append(w, inverse_letters(rest));
        w = GeneratorWord(w).letters;
        b.edge_word[m.edge_of(c)] = m.is_positive(c) ? w : inverse_letters(w);
    }
    return b;
}

GeneratorWord decompose(const CombinatorialMap& m, const LoopPath& l, const LassoBasis& basis) {
    require_on_map(m, l);
    if (static_cast<int>(basis.edge_word.size()) != m.num_edges()) {
        throw Error(ErrorCode::NotOnMap, "basis belongs to a different map");
    }
    std::vector<Letter> out;
    for (Dart d : l.darts) append_dart(out, m, basis, d);
    return GeneratorWord(std::move(out));
}

LoopPath substitute(const CombinatorialMap& m, const GeneratorWord& w, const LassoBasis& basis) {
    LoopPath out = constant_loop(basis.root);
    for (const Letter& l : w.letters) {
        if (l.gen < 0 || l.gen >= static_cast<int>(basis.generators.size())) {
            throw Error(ErrorCode::UnknownGenerator, "generator " + std::to_string(l.gen) + " is not in the basis");
        }
        out = concat(m, out, power(m, basis.generators[l.gen], l.exp));
    }
    return reduce_path(m, out);
}

LoopPath reroot(const CombinatorialMap& m, const LoopPath& l, const LassoBasis& basis) {
    require_on_map(m, l);
    std::vector<Dart> darts = basis.tree.path_from_root(l.base);
    darts.insert(darts.end(), l.darts.begin(), l.darts.end());
    for (Dart d : basis.tree.path_to_root(m, l.base)) darts.push_back(d);
    LoopPath out;
    out.darts = std::move(darts);
    out.base = basis.root;
    return out;
}

double eval_one_boundary(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a, const LassoBasis& basis) {
    require_one_boundary(m);
    validate_areas(m, a);
    GeneratorWord w = decompose(m, l, basis);
    FreeMomentEngine engine(laws_for(m, a, basis));
    return engine.moment(w);
}

double eval_one_boundary(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a) {
    require_one_boundary(m);
    return eval_one_boundary(m, l, a, lasso_basis(m, 0));
}

double eval_planar(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a, const LassoBasis& basis) {
    if (m.genus() != 0) throw Error(ErrorCode::WrongGenus, "planar evaluation needs genus 0");
    return eval_one_boundary(m, l, a, basis);
}

double eval_planar(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a) {
    if (m.genus() != 0) throw Error(ErrorCode::WrongGenus, "planar evaluation needs genus 0");
    return eval_one_boundary(m, l, a);
}

double mm_residual(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a, VertexId v, double h) {
    if (!(h > 0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    require_one_boundary(m);
    validate_areas(m, a);
    DiscreteForm mu = mm_vector(m, l, v);
    auto [l1, l2] = desingularize(m, l, v);
    AreaVector plus = a, minus = a;
    for (FaceId f = 0; f < m.num_faces(); ++f) {
        if (m.is_boundary(f)) continue;
        const double c = to_double(mu.coeffs[f]);
        plus.values[f] += h * c;
        minus.values[f] -= h * c;
        if (plus.values[f] < 0 || minus.values[f] < 0) {
            throw Error(ErrorCode::BoundaryOfSimplex, "perturbation leaves the area simplex at face " + std::to_string(f));
        }
    }
    LassoBasis basis = lasso_basis(m, 0);
    const double derivative = (eval_one_boundary(m, l, plus, basis) - eval_one_boundary(m, l, minus, basis)) / (2 * h);
    return derivative - eval_one_boundary(m, l1, a, basis) * eval_one_boundary(m, l2, a, basis);
}

}  // namespace ymmf
