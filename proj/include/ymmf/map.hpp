#ifndef YMMF_MAP_HPP
#define YMMF_MAP_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "ymmf/error.hpp"

namespace ymmf {

using Dart = int;
using VertexId = int;
using FaceId = int;
using EdgeId = int;

/**
 * A combinatorial map stored as a rotation system.
 *
 * Darts are the integers 0..n-1. alpha pairs a dart with its reverse and
 * sigma turns an outgoing dart counterclockwise around its tail. Faces are
 * the orbits of phi = sigma^{-1} o alpha, traced with the face on the left.
 * Vertices and faces are numbered by the order in which their smallest dart
 * appears.
 */
class CombinatorialMap {
public:
    CombinatorialMap() = default;

    int num_darts() const { return static_cast<int>(alpha_.size()); }
    int num_vertices() const { return static_cast<int>(vertex_rot_.size()); }
    int num_edges() const { return static_cast<int>(positive_.size()); }
    int num_faces() const { return static_cast<int>(face_cycle_.size()); }
    int genus() const { return genus_; }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

    Dart alpha(Dart d) const { return alpha_[d]; }
    Dart sigma(Dart d) const { return sigma_[d]; }
    Dart sigma_inv(Dart d) const { return sigma_inv_[d]; }
    Dart phi(Dart d) const { return sigma_inv_[alpha_[d]]; }
    Dart phi_inv(Dart d) const { return alpha_[sigma_[d]]; }

    VertexId tail(Dart d) const { return vertex_of_[d]; }
    VertexId head(Dart d) const { return vertex_of_[alpha_[d]]; }
    FaceId left_face(Dart d) const { return face_of_[d]; }
    FaceId right_face(Dart d) const { return face_of_[alpha_[d]]; }

    const std::vector<Dart>& rotation(VertexId v) const { return vertex_rot_[v]; }
    const std::vector<Dart>& face_boundary(FaceId f) const { return face_cycle_[f]; }

    bool is_positive(Dart d) const { return edge_sign_[d] > 0; }
    EdgeId edge_of(Dart d) const { return edge_of_[d]; }
    int edge_sign(Dart d) const { return edge_sign_[d]; }
    Dart edge_dart(EdgeId e) const { return positive_[e]; }
    const std::vector<Dart>& positive_darts() const { return positive_; }

    const std::vector<FaceId>& boundary_faces() const { return boundary_; }
    bool is_boundary(FaceId f) const { return is_boundary_[f] != 0; }
    bool is_closed() const { return boundary_.empty(); }

    const std::vector<Dart>& alpha_table() const { return alpha_; }
    const std::vector<Dart>& sigma_table() const { return sigma_; }

    /** Copy of this map with a different boundary face set (validated). */
    CombinatorialMap with_boundary(std::vector<FaceId> faces) const;

    friend CombinatorialMap build_map(std::vector<Dart> alpha, std::vector<Dart> sigma,
                                      std::vector<Dart> positive,
                                      std::vector<FaceId> boundary_faces);

private:
    std::vector<Dart> alpha_, sigma_, sigma_inv_;
    std::vector<VertexId> vertex_of_;
    std::vector<FaceId> face_of_;
    std::vector<std::vector<Dart>> vertex_rot_, face_cycle_;
    std::vector<Dart> positive_;
    std::vector<EdgeId> edge_of_;
    std::vector<int> edge_sign_;
    std::vector<FaceId> boundary_;
    std::vector<char> is_boundary_;
    int genus_ = 0;
};

/**
 * Validates the tables and traces vertices and faces.
 * An empty positive list selects the smaller dart of every alpha-orbit.
 */
CombinatorialMap build_map(std::vector<Dart> alpha, std::vector<Dart> sigma,
                           std::vector<Dart> positive = {},
                           std::vector<FaceId> boundary_faces = {});

/** Default alpha pairing (2k, 2k+1) on n darts. */
std::vector<Dart> paired_alpha(int num_darts);

/** sigma permutation from a list of counterclockwise vertex rotations. */
std::vector<Dart> sigma_from_rotations(int num_darts, const std::vector<std::vector<Dart>>& rotations);

/** Dual map; the dual dart of d has the same id and runs from right_face(d) to left_face(d). */
CombinatorialMap dual_map(const CombinatorialMap& m);

struct LoopPath {
    std::vector<Dart> darts;
    VertexId base = 0;
    bool is_loop = true;

    std::size_t size() const { return darts.size(); }
    bool empty() const { return darts.empty(); }
    bool operator==(const LoopPath& o) const {
        return darts == o.darts && base == o.base && is_loop == o.is_loop;
    }
};

/** Checks chaining and records whether the path closes up. */
LoopPath make_path(const CombinatorialMap& m, std::vector<Dart> darts);
/** As make_path but fails with NotALoop when the path does not close. */
LoopPath make_loop(const CombinatorialMap& m, std::vector<Dart> darts);
LoopPath constant_loop(VertexId v);

VertexId path_end(const CombinatorialMap& m, const LoopPath& p);
LoopPath concat(const CombinatorialMap& m, const LoopPath& a, const LoopPath& b);
LoopPath reverse_path(const CombinatorialMap& m, const LoopPath& p);
LoopPath power(const CombinatorialMap& m, const LoopPath& l, int n);

LoopPath reduce_path(const CombinatorialMap& m, const LoopPath& p);
/** Free and cyclic reduction of a loop; the base moves to the new first tail. */
LoopPath cyclic_reduce(const CombinatorialMap& m, const LoopPath& l);
LoopPath cyclic_canonical(const CombinatorialMap& m, const LoopPath& l);
/** Rotates a loop so that it starts at position k. */
LoopPath rotate_loop(const CombinatorialMap& m, const LoopPath& l, std::size_t k);

enum class CrossingType { Transverse, TouchSameSense, TouchOppositeSense };

struct Crossing {
    VertexId vertex = 0;
    CrossingType type = CrossingType::Transverse;
    // Outgoing darts used by the loop in counterclockwise order. For a
    // transverse crossing one pass enters along e[0] and leaves along e[2],
    // the other enters along e[1] and leaves along e[3].
    Dart e[4] = {0, 0, 0, 0};
    // Positions in the loop of the two outgoing darts e[2] and e[3].
    std::size_t out_pos[2] = {0, 0};
};

struct IntersectionProfile {
    bool tame = true;
    std::vector<Crossing> crossings;
};

IntersectionProfile intersection_profile(const CombinatorialMap& m, const LoopPath& l);

/** Splits a loop at a transverse crossing into (l1, l2) with l ~c l1 l2. */
std::pair<LoopPath, LoopPath> desingularize(const CombinatorialMap& m, const LoopPath& l, VertexId v);

/** Result of a refinement step: the new map and the image of every old dart. */
struct Refinement {
    CombinatorialMap map;
    std::vector<std::vector<Dart>> dart_image;
    std::vector<FaceId> face_parent;
};

/** Inserts a new vertex in the middle of the edge of d. */
Refinement subdivide_edge(const CombinatorialMap& m, Dart d);
/** Adds an edge inside a face from the tail of c1 to the tail of c2. */
Refinement split_face(const CombinatorialMap& m, Dart c1, Dart c2);
LoopPath transport(const Refinement& r, const LoopPath& l);
/** Areas on the refined map; a split face gives `fraction` of its area to the half left of the new edge. */
std::vector<double> refine_areas(const Refinement& r, const CombinatorialMap& old_map,
                                 const std::vector<double>& areas, double fraction = 0.5);

/** Dart path along a spanning tree (BFS from root, smallest darts first). */
class SpanningTree {
public:
    SpanningTree() = default;
    SpanningTree(const CombinatorialMap& m, VertexId root);

    VertexId root() const { return root_; }
    bool in_tree(EdgeId e) const { return in_tree_[e] != 0; }
    std::vector<Dart> path_from_root(VertexId v) const;
    std::vector<Dart> path_to_root(const CombinatorialMap& m, VertexId v) const;

private:
    VertexId root_ = 0;
    std::vector<Dart> parent_dart_;
    std::vector<VertexId> parent_vertex_;
    std::vector<char> in_tree_;
};

}  // namespace ymmf

#endif
