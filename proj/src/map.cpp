#include "ymmf/map.hpp"

#include <algorithm>
#include <deque>
#include <cstdlib>
#include <set>
#include <string>

namespace ymmf {

namespace {

void check_permutation(const std::vector<Dart>& p, int n, const char* name) {
    if (static_cast<int>(p.size()) != n) {
        throw Error(ErrorCode::NotPermutation, std::string(name) + " has the wrong length");
    }
    std::vector<char> seen(n, 0);
    for (int d = 0; d < n; ++d) {
        if (p[d] < 0 || p[d] >= n || seen[p[d]]) {
            throw Error(ErrorCode::NotPermutation,
                        std::string(name) + " is not a permutation at dart " + std::to_string(d));
        }
        seen[p[d]] = 1;
    }
}

std::vector<std::vector<Dart>> orbits(int n, auto&& next, std::vector<int>& label) {
    std::vector<std::vector<Dart>> out;
    label.assign(n, -1);
    for (int d = 0; d < n; ++d) {
        if (label[d] >= 0) continue;
        std::vector<Dart> cyc;
        int id = static_cast<int>(out.size());
        for (Dart x = d; label[x] < 0; x = next(x)) {
            label[x] = id;
            cyc.push_back(x);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

}  // namespace

CombinatorialMap build_map(std::vector<Dart> alpha, std::vector<Dart> sigma,
                           std::vector<Dart> positive, std::vector<FaceId> boundary_faces) {
    const int n = static_cast<int>(alpha.size());
    if (n == 0 || n % 2 != 0) {
        throw Error(ErrorCode::NotInvolution, "dart count must be positive and even");
    }
    for (int d = 0; d < n; ++d) {
        if (alpha[d] < 0 || alpha[d] >= n || alpha[d] == d || alpha[alpha[d]] != d) {
            throw Error(ErrorCode::NotInvolution,
                        "alpha is not a fixed-point-free involution at dart " + std::to_string(d));
        }
    }
    check_permutation(sigma, n, "sigma");

    CombinatorialMap m;
    m.alpha_ = std::move(alpha);
    m.sigma_ = std::move(sigma);
    m.sigma_inv_.assign(n, 0);
    for (int d = 0; d < n; ++d) m.sigma_inv_[m.sigma_[d]] = d;

    m.vertex_rot_ = orbits(n, [&](Dart d) { return m.sigma_[d]; }, m.vertex_of_);
    m.face_cycle_ = orbits(n, [&](Dart d) { return m.sigma_inv_[m.alpha_[d]]; }, m.face_of_);

    // connectivity of the underlying surface
    std::vector<char> seen(n, 0);
    std::vector<Dart> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        Dart d = stack.back();
        stack.pop_back();
        for (Dart e : {m.alpha_[d], m.sigma_[d]}) {
            if (!seen[e]) {
                seen[e] = 1;
                ++reached;
                stack.push_back(e);
            }
        }
    }
    if (reached != n) throw Error(ErrorCode::NegativeGenus, "map is not connected");

    m.edge_sign_.assign(n, 0);
    if (positive.empty()) {
        for (int d = 0; d < n; ++d) {
            if (d < m.alpha_[d]) positive.push_back(d);
        }
    }
    std::sort(positive.begin(), positive.end());
    for (Dart d : positive) {
        if (d < 0 || d >= n || m.edge_sign_[d] != 0 || m.edge_sign_[m.alpha_[d]] != 0) {
            throw Error(ErrorCode::InvalidArgument, "positive orientation must pick one dart per edge");
        }
        m.edge_sign_[d] = 1;
        m.edge_sign_[m.alpha_[d]] = -1;
    }
    if (static_cast<int>(positive.size()) * 2 != n) {
        throw Error(ErrorCode::InvalidArgument, "positive orientation misses an edge");
    }
    m.positive_ = std::move(positive);
    m.edge_of_.assign(n, 0);
    for (int e = 0; e < static_cast<int>(m.positive_.size()); ++e) {
        m.edge_of_[m.positive_[e]] = e;
        m.edge_of_[m.alpha_[m.positive_[e]]] = e;
    }

    int chi = m.euler_characteristic();
    if (chi > 2 || (chi % 2) != 0) {
        throw Error(ErrorCode::NegativeGenus, "Euler characteristic " + std::to_string(chi) +
                                                  " is not that of a closed orientable surface");
    }
    m.genus_ = (2 - chi) / 2;
    return m.with_boundary(std::move(boundary_faces));
}

CombinatorialMap CombinatorialMap::with_boundary(std::vector<FaceId> faces) const {
    CombinatorialMap m = *this;
    std::sort(faces.begin(), faces.end());
    m.is_boundary_.assign(num_faces(), 0);
    for (FaceId f : faces) {
        if (f < 0 || f >= num_faces()) {
            throw Error(ErrorCode::InvalidArgument, "boundary face " + std::to_string(f) + " does not exist");
        }
        if (m.is_boundary_[f]) throw Error(ErrorCode::InvalidArgument, "boundary face listed twice");
        m.is_boundary_[f] = 1;
    }
    std::vector<int> owner(num_vertices(), -1);
    for (FaceId f : faces) {
        for (Dart d : face_cycle_[f]) {
            VertexId v = vertex_of_[d];
            if (owner[v] >= 0 && owner[v] != f) {
                throw Error(ErrorCode::BoundaryAdjacent,
                            "boundary faces " + std::to_string(owner[v]) + " and " + std::to_string(f) +
                                " share vertex " + std::to_string(v));
            }
            owner[v] = f;
        }
    }
    m.boundary_ = std::move(faces);
    return m;
}

std::vector<Dart> paired_alpha(int num_darts) {
    std::vector<Dart> a(num_darts);
    for (int d = 0; d < num_darts; ++d) a[d] = d ^ 1;
    return a;
}

std::vector<Dart> sigma_from_rotations(int num_darts, const std::vector<std::vector<Dart>>& rotations) {
    std::vector<Dart> s(num_darts, -1);
    for (const auto& rot : rotations) {
        for (std::size_t i = 0; i < rot.size(); ++i) {
            Dart d = rot[i];
            if (d < 0 || d >= num_darts || s[d] != -1) {
                throw Error(ErrorCode::NotPermutation, "dart " + std::to_string(d) + " is listed twice or out of range");
            }
            s[d] = rot[(i + 1) % rot.size()];
        }
    }
    for (int d = 0; d < num_darts; ++d) {
        if (s[d] < 0) throw Error(ErrorCode::NotPermutation, "dart " + std::to_string(d) + " has no vertex");
    }
    return s;
}

CombinatorialMap dual_map(const CombinatorialMap& m) {
    if (!m.is_closed()) throw Error(ErrorCode::HasBoundary, "dual of a map with boundary faces");
    const int n = m.num_darts();
    std::vector<Dart> sigma(n);
    for (int d = 0; d < n; ++d) sigma[d] = m.alpha(m.sigma_inv(d));
    return build_map(m.alpha_table(), std::move(sigma), m.positive_darts());
}

LoopPath make_path(const CombinatorialMap& m, std::vector<Dart> darts) {
    if (darts.empty()) throw Error(ErrorCode::InvalidPath, "a path needs a dart or an explicit base vertex");
    for (std::size_t i = 0; i < darts.size(); ++i) {
        if (darts[i] < 0 || darts[i] >= m.num_darts()) {
            throw Error(ErrorCode::NotOnMap, "dart " + std::to_string(darts[i]) + " is not on the map");
        }
        if (i > 0 && m.head(darts[i - 1]) != m.tail(darts[i])) {
            throw Error(ErrorCode::InvalidPath, "darts " + std::to_string(darts[i - 1]) + " and " +
                                                    std::to_string(darts[i]) + " are not chained");
        }
    }
    LoopPath p;
    p.base = m.tail(darts.front());
    p.is_loop = m.head(darts.back()) == p.base;
    p.darts = std::move(darts);
    return p;
}

LoopPath make_loop(const CombinatorialMap& m, std::vector<Dart> darts) {
    LoopPath p = make_path(m, std::move(darts));
    if (!p.is_loop) throw Error(ErrorCode::NotALoop, "path does not return to its base");
    return p;
}

LoopPath constant_loop(VertexId v) {
    LoopPath p;
    p.base = v;
    p.is_loop = true;
    return p;
}

VertexId path_end(const CombinatorialMap& m, const LoopPath& p) {
    return p.darts.empty() ? p.base : m.head(p.darts.back());
}

LoopPath concat(const CombinatorialMap& m, const LoopPath& a, const LoopPath& b) {
    if (path_end(m, a) != b.base) throw Error(ErrorCode::InvalidPath, "paths do not meet");
    LoopPath p = a;
    p.darts.insert(p.darts.end(), b.darts.begin(), b.darts.end());
    p.is_loop = path_end(m, p) == p.base;
    return p;
}

LoopPath reverse_path(const CombinatorialMap& m, const LoopPath& p) {
    LoopPath r;
    r.base = path_end(m, p);
    for (auto it = p.darts.rbegin(); it != p.darts.rend(); ++it) r.darts.push_back(m.alpha(*it));
    r.is_loop = p.is_loop;
    return r;
}

LoopPath power(const CombinatorialMap& m, const LoopPath& l, int n) {
    if (!l.is_loop) throw Error(ErrorCode::NotALoop, "power of a non-closed path");
    LoopPath unit = n < 0 ? reverse_path(m, l) : l;
    LoopPath out = constant_loop(l.base);
    for (int i = 0; i < std::abs(n); ++i) out = concat(m, out, unit);
    return out;
}

LoopPath reduce_path(const CombinatorialMap& m, const LoopPath& p) {
    LoopPath r;
    r.base = p.base;
    r.is_loop = p.is_loop;
    for (Dart d : p.darts) {
        if (!r.darts.empty() && r.darts.back() == m.alpha(d)) {
            r.darts.pop_back();
        } else {
            r.darts.push_back(d);
        }
    }
    return r;
}

LoopPath cyclic_reduce(const CombinatorialMap& m, const LoopPath& l) {
    if (!l.is_loop) throw Error(ErrorCode::NotALoop, "cyclic reduction of a non-closed path");
    LoopPath r = reduce_path(m, l);
    std::size_t lo = 0, hi = r.darts.size();
    VertexId base = r.base;
    while (hi - lo >= 2 && r.darts[lo] == m.alpha(r.darts[hi - 1])) {
        base = m.head(r.darts[lo]);
        ++lo;
        --hi;
    }
    LoopPath out;
    out.darts.assign(r.darts.begin() + lo, r.darts.begin() + hi);
    out.base = out.darts.empty() ? base : m.tail(out.darts.front());
    out.is_loop = true;
    return out;
}

LoopPath rotate_loop(const CombinatorialMap& m, const LoopPath& l, std::size_t k) {
    if (!l.is_loop) throw Error(ErrorCode::NotALoop, "rotation of a non-closed path");
    if (l.darts.empty()) return l;
    LoopPath r;
    k %= l.darts.size();
    r.darts.assign(l.darts.begin() + k, l.darts.end());
    r.darts.insert(r.darts.end(), l.darts.begin(), l.darts.begin() + k);
    r.base = m.tail(r.darts.front());
    r.is_loop = true;
    return r;
}

LoopPath cyclic_canonical(const CombinatorialMap& m, const LoopPath& l) {
    if (!l.is_loop) throw Error(ErrorCode::NotALoop, "canonical form of a non-closed path");
    const std::size_t n = l.darts.size();
    if (n == 0) return l;
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            Dart a = l.darts[(k + i) % n], b = l.darts[(best + i) % n];
            if (a != b) {
                if (a < b) best = k;
                break;
            }
        }
    }
    return rotate_loop(m, l, best);
}

IntersectionProfile intersection_profile(const CombinatorialMap& m, const LoopPath& l) {
    if (!l.is_loop) throw Error(ErrorCode::NotALoop, "intersection profile of a non-closed path");
    IntersectionProfile prof;
    const std::size_t n = l.darts.size();
    if (n == 0) return prof;
    std::vector<int> edge_use(m.num_edges(), 0);
    for (Dart d : l.darts) {
        if (++edge_use[m.edge_of(d)] > 1) {
            throw Error(ErrorCode::EdgeReused, "edge " + std::to_string(m.edge_of(d)) + " is used twice");
        }
    }
    std::vector<std::vector<std::size_t>> visits(m.num_vertices());
    for (std::size_t k = 0; k < n; ++k) {
        auto& v = visits[m.tail(l.darts[k])];
        v.push_back(k);
        if (v.size() > 2) {
            throw Error(ErrorCode::VertexOverused,
                        "vertex " + std::to_string(m.tail(l.darts[k])) + " is visited more than twice");
        }
    }
    std::vector<int> rot_pos(m.num_darts(), 0);
    for (VertexId v = 0; v < m.num_vertices(); ++v) {
        const auto& rot = m.rotation(v);
        for (std::size_t i = 0; i < rot.size(); ++i) rot_pos[rot[i]] = static_cast<int>(i);
    }
    for (VertexId v = 0; v < m.num_vertices(); ++v) {
        if (visits[v].size() != 2) continue;
        struct Pass {
            Dart in, out;
            std::size_t pos;
        };
        Pass pass[2];
        for (int i = 0; i < 2; ++i) {
            std::size_t k = visits[v][i];
            pass[i] = {m.alpha(l.darts[(k + n - 1) % n]), l.darts[k], k};
        }
        Dart ds[4] = {pass[0].in, pass[0].out, pass[1].in, pass[1].out};
        std::vector<int> order(ds, ds + 4);
        std::sort(order.begin(), order.end(), [&](Dart a, Dart b) { return rot_pos[a] < rot_pos[b]; });
        auto rank = [&](Dart d) {
            return static_cast<int>(std::find(order.begin(), order.end(), d) - order.begin());
        };
        Crossing c;
        c.vertex = v;
        int p_in = rank(pass[0].in), p_out = rank(pass[0].out);
        int q_in = rank(pass[1].in), q_out = rank(pass[1].out);
        if ((p_out - p_in + 4) % 4 == 2) {
            c.type = CrossingType::Transverse;
            const Pass& first = (q_in == (p_in + 1) % 4) ? pass[0] : pass[1];
            const Pass& second = (q_in == (p_in + 1) % 4) ? pass[1] : pass[0];
            c.e[0] = first.in;
            c.e[1] = second.in;
            c.e[2] = first.out;
            c.e[3] = second.out;
            c.out_pos[0] = first.pos;
            c.out_pos[1] = second.pos;
        } else {
            bool p_ccw = (p_out - p_in + 4) % 4 == 1;
            bool q_ccw = (q_out - q_in + 4) % 4 == 1;
            c.type = p_ccw == q_ccw ? CrossingType::TouchSameSense : CrossingType::TouchOppositeSense;
            for (int i = 0; i < 4; ++i) c.e[i] = order[i];
            c.out_pos[0] = pass[0].pos;
            c.out_pos[1] = pass[1].pos;
            prof.tame = false;
        }
        prof.crossings.push_back(c);
    }
    return prof;
}

std::pair<LoopPath, LoopPath> desingularize(const CombinatorialMap& m, const LoopPath& l, VertexId v) {
    IntersectionProfile prof = intersection_profile(m, l);
    for (const Crossing& c : prof.crossings) {
        if (c.vertex != v) continue;
        if (c.type != CrossingType::Transverse) break;
        const std::size_t n = l.darts.size();
        LoopPath r = rotate_loop(m, l, c.out_pos[0]);
        std::size_t split = (c.out_pos[1] + n - c.out_pos[0]) % n;
        LoopPath l1 = make_loop(m, std::vector<Dart>(r.darts.begin(), r.darts.begin() + split));
        LoopPath l2 = make_loop(m, std::vector<Dart>(r.darts.begin() + split, r.darts.end()));
        return {l1, l2};
    }
    throw Error(ErrorCode::NotACrossing, "vertex " + std::to_string(v) + " is not a transverse crossing");
}

namespace {

std::vector<FaceId> compute_face_parent(const CombinatorialMap& old_map, const CombinatorialMap& new_map) {
    std::vector<FaceId> parent(new_map.num_faces(), -1);
    for (FaceId f = 0; f < new_map.num_faces(); ++f) {
        for (Dart d : new_map.face_boundary(f)) {
            if (d < old_map.num_darts()) {
                parent[f] = old_map.left_face(d);
                break;
            }
        }
    }
    return parent;
}

std::vector<FaceId> inherited_boundary(const CombinatorialMap& old_map, const std::vector<FaceId>& parent) {
    std::vector<FaceId> out;
    for (FaceId f = 0; f < static_cast<FaceId>(parent.size()); ++f) {
        if (old_map.is_boundary(parent[f])) out.push_back(f);
    }
    return out;
}

}  // namespace

Refinement subdivide_edge(const CombinatorialMap& m, Dart d) {
    const int n = m.num_darts();
    if (d < 0 || d >= n) throw Error(ErrorCode::NotOnMap, "dart is not on the map");
    const Dart dr = m.alpha(d);
    const Dart x = n, y = n + 1;
    std::vector<Dart> alpha = m.alpha_table(), sigma = m.sigma_table();
    alpha.push_back(dr);
    alpha.push_back(d);
    alpha[d] = y;
    alpha[dr] = x;
    sigma.push_back(y);
    sigma.push_back(x);
    std::vector<Dart> positive;
    for (Dart p : m.positive_darts()) {
        if (p != d && p != dr) positive.push_back(p);
    }
    if (m.is_positive(d)) {
        positive.push_back(d);
        positive.push_back(x);
    } else {
        positive.push_back(dr);
        positive.push_back(y);
    }
    Refinement r;
    r.map = build_map(std::move(alpha), std::move(sigma), std::move(positive));
    r.face_parent = compute_face_parent(m, r.map);
    r.map = r.map.with_boundary(inherited_boundary(m, r.face_parent));
    r.dart_image.resize(n);
    for (Dart e = 0; e < n; ++e) r.dart_image[e] = {e};
    r.dart_image[d] = {d, x};
    r.dart_image[dr] = {dr, y};
    return r;
}

Refinement split_face(const CombinatorialMap& m, Dart c1, Dart c2) {
    const int n = m.num_darts();
    if (c1 < 0 || c1 >= n || c2 < 0 || c2 >= n) throw Error(ErrorCode::NotOnMap, "dart is not on the map");
    if (c1 == c2 || m.left_face(c1) != m.left_face(c2)) {
        throw Error(ErrorCode::InvalidArgument, "split_face needs two distinct corners of one face");
    }
    if (m.is_boundary(m.left_face(c1))) throw Error(ErrorCode::InvalidArgument, "cannot split a boundary face");
    const Dart a = n, b = n + 1;
    std::vector<Dart> alpha = m.alpha_table(), sigma = m.sigma_table();
    alpha.push_back(b);
    alpha.push_back(a);
    sigma.push_back(sigma[c1]);
    sigma.push_back(sigma[c2]);
    sigma[c1] = a;
    sigma[c2] = b;
    std::vector<Dart> positive = m.positive_darts();
    positive.push_back(a);
    Refinement r;
    r.map = build_map(std::move(alpha), std::move(sigma), std::move(positive));
    r.face_parent = compute_face_parent(m, r.map);
    r.map = r.map.with_boundary(inherited_boundary(m, r.face_parent));
    r.dart_image.resize(n);
    for (Dart e = 0; e < n; ++e) r.dart_image[e] = {e};
    return r;
}

LoopPath transport(const Refinement& r, const LoopPath& l) {
    if (l.darts.empty()) return l;
    std::vector<Dart> darts;
    for (Dart d : l.darts) {
        const auto& img = r.dart_image.at(d);
        darts.insert(darts.end(), img.begin(), img.end());
    }
    return make_path(r.map, std::move(darts));
}

std::vector<double> refine_areas(const Refinement& r, const CombinatorialMap& old_map,
                                 const std::vector<double>& areas, double fraction) {
    std::vector<int> children(old_map.num_faces(), 0);
    for (FaceId p : r.face_parent) ++children[p];
    const Dart new_dart = old_map.num_darts();
    std::vector<double> out(r.map.num_faces(), 0.0);
    for (FaceId f = 0; f < r.map.num_faces(); ++f) {
        FaceId p = r.face_parent[f];
        double a = areas.at(p);
        if (children[p] == 1) {
            out[f] = a;
        } else {
            bool left = r.map.left_face(new_dart) == f;
            out[f] = left ? fraction * a : (1.0 - fraction) * a;
        }
    }
    return out;
}

SpanningTree::SpanningTree(const CombinatorialMap& m, VertexId root)
    : root_(root), parent_dart_(m.num_vertices(), -1), parent_vertex_(m.num_vertices(), -1),
      in_tree_(m.num_edges(), 0) {
    std::vector<char> seen(m.num_vertices(), 0);
    std::deque<VertexId> queue{root};
    seen[root] = 1;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        std::vector<Dart> out = m.rotation(v);
        std::sort(out.begin(), out.end());
        for (Dart d : out) {
            VertexId w = m.head(d);
            if (seen[w]) continue;
            seen[w] = 1;
            parent_dart_[w] = d;
            parent_vertex_[w] = v;
            in_tree_[m.edge_of(d)] = 1;
            queue.push_back(w);
        }
    }
}

std::vector<Dart> SpanningTree::path_from_root(VertexId v) const {
    std::vector<Dart> path;
    for (VertexId cur = v; cur != root_; cur = parent_vertex_[cur]) path.push_back(parent_dart_[cur]);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Dart> SpanningTree::path_to_root(const CombinatorialMap& m, VertexId v) const {
    std::vector<Dart> path;
    for (VertexId cur = v; cur != root_; cur = parent_vertex_[cur]) path.push_back(m.alpha(parent_dart_[cur]));
    return path;
}

}  // namespace ymmf
