#include "ymmf/homology.hpp"

#include <algorithm>
#include <deque>

namespace ymmf {

namespace {

int cell_count(const CombinatorialMap& m, int degree) {
    switch (degree) {
        case 0: return m.num_vertices();
        case 1: return m.num_edges();
        case 2: return m.num_faces();
    }
    throw Error(ErrorCode::DegreeMismatch, "degree must be 0, 1 or 2");
}

void same_shape(const DiscreteForm& a, const DiscreteForm& b) {
    if (a.degree != b.degree || a.coeffs.size() != b.coeffs.size()) {
        throw Error(ErrorCode::DegreeMismatch, "forms of different degree or map");
    }
}

}  // namespace

DiscreteForm& DiscreteForm::operator+=(const DiscreteForm& o) {
    same_shape(*this, o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}

DiscreteForm& DiscreteForm::operator-=(const DiscreteForm& o) {
    same_shape(*this, o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
}

DiscreteForm& DiscreteForm::operator*=(const Rational& s) {
    for (auto& c : coeffs) c *= s;
    return *this;
}

bool DiscreteForm::is_zero() const {
    for (const auto& c : coeffs) {
        if (c != 0) return false;
    }
    return true;
}

DiscreteForm operator+(DiscreteForm a, const DiscreteForm& b) { return a += b; }
DiscreteForm operator-(DiscreteForm a, const DiscreteForm& b) { return a -= b; }
DiscreteForm operator*(const Rational& s, DiscreteForm a) { return a *= s; }

DiscreteForm zero_form(const CombinatorialMap& m, int degree) {
    return DiscreteForm{degree, std::vector<Rational>(cell_count(m, degree), 0)};
}

Rational pairing(const DiscreteForm& a, const DiscreteForm& b) {
    same_shape(a, b);
    Rational s = 0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) s += a.coeffs[i] * b.coeffs[i];
    return s;
}

Rational on_dart(const CombinatorialMap& m, const DiscreteForm& w, Dart e) {
    const Rational& c = w.coeffs[m.edge_of(e)];
    return m.edge_sign(e) > 0 ? c : Rational(-c);
}

DiscreteForm d(const CombinatorialMap& m, const DiscreteForm& form) {
    if (static_cast<int>(form.coeffs.size()) != cell_count(m, form.degree)) {
        throw Error(ErrorCode::DegreeMismatch, "form does not belong to this map");
    }
    if (form.degree == 0) {
        DiscreteForm out = zero_form(m, 1);
        for (EdgeId e = 0; e < m.num_edges(); ++e) {
            Dart p = m.edge_dart(e);
            out.coeffs[e] = form.coeffs[m.head(p)] - form.coeffs[m.tail(p)];
        }
        return out;
    }
    if (form.degree == 1) {
        DiscreteForm out = zero_form(m, 2);
        for (Dart x = 0; x < m.num_darts(); ++x) out.coeffs[m.left_face(x)] += on_dart(m, form, x);
        return out;
    }
    throw Error(ErrorCode::DegreeMismatch, "d is not defined on 2-forms");
}

DiscreteForm d_star(const CombinatorialMap& m, const DiscreteForm& form) {
    if (static_cast<int>(form.coeffs.size()) != cell_count(m, form.degree)) {
        throw Error(ErrorCode::DegreeMismatch, "form does not belong to this map");
    }
    if (form.degree == 2) {
        DiscreteForm out = zero_form(m, 1);
        for (EdgeId e = 0; e < m.num_edges(); ++e) {
            Dart p = m.edge_dart(e);
            out.coeffs[e] = form.coeffs[m.left_face(p)] - form.coeffs[m.right_face(p)];
        }
        return out;
    }
    if (form.degree == 1) {
        DiscreteForm out = zero_form(m, 0);
        for (Dart x = 0; x < m.num_darts(); ++x) out.coeffs[m.tail(x)] -= on_dart(m, form, x);
        return out;
    }
    throw Error(ErrorCode::DegreeMismatch, "d* is not defined on 0-forms");
}

DiscreteForm edge_form(const CombinatorialMap& m, Dart e) {
    DiscreteForm w = zero_form(m, 1);
    w.coeffs[m.edge_of(e)] = m.edge_sign(e);
    return w;
}

DiscreteForm face_indicator(const CombinatorialMap& m, FaceId f) {
    DiscreteForm w = zero_form(m, 2);
    w.coeffs.at(f) = 1;
    return w;
}

DiscreteForm total_area_form(const CombinatorialMap& m) {
    DiscreteForm w = zero_form(m, 2);
    for (auto& c : w.coeffs) c = 1;
    return w;
}

DiscreteForm loop_one_form(const CombinatorialMap& m, const LoopPath& l) {
    if (!l.is_loop) throw Error(ErrorCode::NotALoop, "one-form of a non-closed path");
    DiscreteForm w = zero_form(m, 1);
    for (Dart x : l.darts) w.coeffs[m.edge_of(x)] += m.edge_sign(x);
    return w;
}

HomologyBasis homology_basis(const CombinatorialMap& m) {
    SpanningTree tree(m, 0);
    std::vector<char> used(m.num_edges(), 0);
    for (EdgeId e = 0; e < m.num_edges(); ++e) used[e] = tree.in_tree(e);
    FaceId root_face = m.boundary_faces().empty() ? 0 : m.boundary_faces().front();
    std::vector<char> seen(m.num_faces(), 0);
    std::deque<FaceId> queue{root_face};
    seen[root_face] = 1;
    while (!queue.empty()) {
        FaceId f = queue.front();
        queue.pop_front();
        std::vector<Dart> darts = m.face_boundary(f);
        std::sort(darts.begin(), darts.end());
        for (Dart x : darts) {
            FaceId g = m.right_face(x);
            if (used[m.edge_of(x)] || seen[g]) continue;
            used[m.edge_of(x)] = 1;
            seen[g] = 1;
            queue.push_back(g);
        }
    }
    HomologyBasis basis;
    for (EdgeId e = 0; e < m.num_edges(); ++e) {
        if (used[e]) continue;
        Dart x = m.edge_dart(e);
        std::vector<Dart> darts = tree.path_from_root(m.tail(x));
        darts.push_back(x);
        auto back = tree.path_to_root(m, m.head(x));
        darts.insert(darts.end(), back.begin(), back.end());
        LoopPath loop = make_loop(m, darts);
        basis.forms.push_back(loop_one_form(m, loop));
        basis.loops.push_back(std::move(loop));
    }
    return basis;
}

bool HomologyClass::is_zero() const {
    for (const auto& c : coords) {
        if (c != 0) return false;
    }
    return true;
}

HomologyClass homology_class(const CombinatorialMap& m, const LoopPath& l, const HomologyBasis& basis) {
    DiscreteForm w = loop_one_form(m, l);
    const std::size_t k = basis.forms.size();
    // columns: basis one-forms, then d* of each face indicator
    RationalMatrix a(m.num_edges(), std::vector<Rational>(k + m.num_faces(), 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (EdgeId e = 0; e < m.num_edges(); ++e) a[e][i] = basis.forms[i].coeffs[e];
    }
    for (EdgeId e = 0; e < m.num_edges(); ++e) {
        Dart p = m.edge_dart(e);
        a[e][k + m.left_face(p)] += 1;
        a[e][k + m.right_face(p)] -= 1;
    }
    // columns for d* images span a space of dimension F-1; the basis must add exactly k more
    if (rank(a) != static_cast<int>(k) + m.num_faces() - 1) {
        throw Error(ErrorCode::BasisNotIndependent, "basis loops are not independent modulo boundaries");
    }
    auto x = solve(a, w.coeffs);
    if (!x) throw Error(ErrorCode::BasisNotIndependent, "loop is not in the span of the basis");
    HomologyClass c;
    c.coords.assign(x->begin(), x->begin() + k);
    return c;
}

HomologyClass homology_class(const CombinatorialMap& m, const LoopPath& l) {
    return homology_class(m, l, homology_basis(m));
}

DiscreteForm winding_function(const CombinatorialMap& m, const LoopPath& l, WindingNormalization norm,
                              FaceId zero_face) {
    DiscreteForm w = loop_one_form(m, l);
    DiscreteForm n = zero_form(m, 2);
    std::vector<char> seen(m.num_faces(), 0);
    std::deque<FaceId> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        FaceId f = queue.front();
        queue.pop_front();
        for (Dart x : m.face_boundary(f)) {
            FaceId g = m.right_face(x);
            if (seen[g]) continue;
            seen[g] = 1;
            n.coeffs[g] = n.coeffs[f] - on_dart(m, w, x);
            queue.push_back(g);
        }
    }
    if (!(d_star(m, n) == w)) {
        throw Error(ErrorCode::NonZeroHomology, "loop has no winding function");
    }
    if (norm == WindingNormalization::Default) {
        if (!m.boundary_faces().empty()) {
            norm = WindingNormalization::ZeroOnFace;
            zero_face = m.boundary_faces().front();
        } else {
            norm = WindingNormalization::OrthogonalToTotal;
        }
    }
    Rational shift = 0;
    if (norm == WindingNormalization::ZeroOnFace) {
        shift = n.coeffs.at(zero_face);
    } else {
        for (const auto& c : n.coeffs) shift += c;
        shift /= m.num_faces();
    }
    for (auto& c : n.coeffs) c -= shift;
    return n;
}

DiscreteForm mm_vector(const CombinatorialMap& m, const LoopPath& l, VertexId v) {
    IntersectionProfile prof = intersection_profile(m, l);
    for (const Crossing& c : prof.crossings) {
        if (c.vertex != v || c.type != CrossingType::Transverse) continue;
        DiscreteForm mu = d(m, edge_form(m, c.e[0])) + d(m, edge_form(m, c.e[2]));
        if (m.rotation(v).size() == 4) {
            DiscreteForm other = d(m, edge_form(m, c.e[1])) + d(m, edge_form(m, c.e[3]));
            other *= -1;
            if (!(other == mu)) throw Error(ErrorCode::NotACrossing, "inconsistent crossing data");
        }
        return mu;
    }
    throw Error(ErrorCode::NotACrossing, "vertex " + std::to_string(v) + " is not a transverse crossing");
}

bool in_mm_space(const CombinatorialMap& m, const LoopPath& l, const DiscreteForm& alpha) {
    if (!intersection_profile(m, l).tame) throw Error(ErrorCode::NotTame, "loop is not tame");
    if (pairing(alpha, total_area_form(m)) != 0) return false;
    if (!homology_class(m, l).is_zero()) return true;
    return pairing(alpha, winding_function(m, l)) == 0;
}

std::vector<DiscreteForm> mm_spanning_family(const CombinatorialMap& m, const LoopPath& l) {
    IntersectionProfile prof = intersection_profile(m, l);
    if (!prof.tame) throw Error(ErrorCode::NotTame, "loop is not tame");
    std::vector<DiscreteForm> out;
    for (const Crossing& c : prof.crossings) out.push_back(mm_vector(m, l, c.vertex));
    std::vector<char> used(m.num_edges(), 0);
    for (Dart x : l.darts) used[m.edge_of(x)] = 1;
    for (EdgeId e = 0; e < m.num_edges(); ++e) {
        if (!used[e]) out.push_back(d(m, edge_form(m, m.edge_dart(e))));
    }
    return out;
}

int form_rank(const std::vector<DiscreteForm>& forms) {
    RationalMatrix rows;
    for (const auto& f : forms) rows.push_back(f.coeffs);
    return rank(rows);
}

}  // namespace ymmf
