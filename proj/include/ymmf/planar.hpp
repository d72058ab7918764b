#ifndef YMMF_PLANAR_HPP
#define YMMF_PLANAR_HPP

#include <vector>

#include "ymmf/free_moments.hpp"
#include "ymmf/map.hpp"

namespace ymmf {

/** Area per face id. Entries of boundary faces are ignored. */
struct AreaVector {
    std::vector<double> values;

    double operator[](FaceId f) const { return values[f]; }
    /** Sum over the non-boundary faces of m. */
    double total(const CombinatorialMap& m) const;
};

/** Checks sizes and signs; throws AreaMismatch. */
void validate_areas(const CombinatorialMap& m, const AreaVector& a);

/**
 * Free basis of the reduced loops at `root` on a map with one boundary face:
 * one lasso per non-boundary face followed by 2g handle loops.
 */
struct LassoBasis {
    VertexId root = 0;
    FaceId boundary_face = 0;
    SpanningTree tree;
    std::vector<LoopPath> generators;
    /** Face of each generator, -1 for handles. */
    std::vector<FaceId> generator_face;
    /** Generator of each face, -1 for the boundary face. */
    std::vector<int> face_generator;
    std::vector<int> handle_generators;
    /** Word of the fundamental loop of each positive edge (empty for tree edges). */
    std::vector<std::vector<Letter>> edge_word;

    int num_faces_generators() const { return static_cast<int>(generators.size() - handle_generators.size()); }
};

LassoBasis lasso_basis(const CombinatorialMap& m, VertexId root = 0);

/** Word of the loop conjugated to the basis root along the tree. */
GeneratorWord decompose(const CombinatorialMap& m, const LoopPath& l, const LassoBasis& basis);

/** Reduced loop at the root obtained by substituting generator loops. */
LoopPath substitute(const CombinatorialMap& m, const GeneratorWord& w, const LassoBasis& basis);

/** Tree conjugate of a loop: path from the root, the loop, path back. */
LoopPath reroot(const CombinatorialMap& m, const LoopPath& l, const LassoBasis& basis);

double eval_planar(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a);
double eval_planar(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a, const LassoBasis& basis);

/** Face lassos are free unitary Brownian motions and handles are Haar unitaries. */
double eval_one_boundary(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a);
double eval_one_boundary(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a,
                         const LassoBasis& basis);

/**
 * Central difference of the evaluation along +-h mu_v minus the product of
 * the evaluations of the two desingularised loops.
 */
double mm_residual(const CombinatorialMap& m, const LoopPath& l, const AreaVector& a, VertexId v, double h);

}  // namespace ymmf

#endif
