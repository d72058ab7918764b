#ifndef YMMF_BUILDERS_HPP
#define YMMF_BUILDERS_HPP

#include <string>
#include <vector>

#include "ymmf/map.hpp"

namespace ymmf {

/**
 * Planar grid of cols x rows unit squares. Vertex (i, j) sits at integer
 * coordinates; the outer face is the boundary face.
 */
struct GridMap {
    CombinatorialMap map;
    int cols = 0;
    int rows = 0;

    Dart east(int i, int j) const;
    Dart north(int i, int j) const;
    Dart west(int i, int j) const { return map.alpha(east(i - 1, j)); }
    Dart south(int i, int j) const { return map.alpha(north(i, j - 1)); }
    VertexId vertex(int i, int j) const;
    /** Face of the square with lower-left corner (i, j). */
    FaceId square(int i, int j) const { return map.left_face(east(i, j)); }
    FaceId outer() const { return map.right_face(east(0, 0)); }
    /** Lattice walk from (i, j); moves are R, L, U, D. */
    LoopPath walk(int i, int j, const std::string& moves) const;
};

GridMap grid_map(int cols, int rows);

/** One vertex, one edge: dart 0 bounds the inner face, the face of dart 1 is the boundary. */
CombinatorialMap simple_loop_map();

/**
 * One-vertex figure-eight: dart 0 runs clockwise around the east petal and
 * dart 2 counterclockwise around the west petal, so loop (0, 2) is the
 * figure-eight. Face 0 is the outer boundary face, face 1 the east petal,
 * face 2 the west petal.
 */
CombinatorialMap figure_eight_map();

/**
 * Map with a single face whose boundary, read with the face on the left,
 * is `word`. Darts are paired (2k, 2k+1) and each pair appears once in each
 * direction in the word.
 */
CombinatorialMap one_face_map(const std::vector<Dart>& word);

}  // namespace ymmf

#endif
