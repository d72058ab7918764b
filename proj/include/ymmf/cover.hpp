#ifndef YMMF_COVER_HPP
#define YMMF_COVER_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ymmf/map.hpp"
#include "ymmf/planar.hpp"

namespace ymmf {

/** Element of the surface group as a word; letter +-(k+1) is generator k or its inverse. */
using DeckWord = std::vector<int>;

/**
 * Fundamental group of a closed orientable surface of genus g >= 1 given by
 * one relator. Genus one is decided through a fixed isomorphism onto Z^2,
 * higher genus through Dehn's algorithm.
 */
class DeckGroup {
public:
    DeckGroup() = default;
    DeckGroup(int genus, DeckWord relator, std::vector<std::array<long, 2>> abelian = {});

    int genus() const { return genus_; }
    int num_generators() const { return 2 * genus_; }
    const DeckWord& relator() const { return relator_; }

    DeckWord reduce(DeckWord w) const;
    DeckWord multiply(const DeckWord& a, const DeckWord& b) const;
    DeckWord inverse(const DeckWord& w) const;
    bool is_identity(const DeckWord& w) const;
    bool equal(const DeckWord& a, const DeckWord& b) const;
    /** Genus one only: image in Z^2. */
    std::array<long, 2> abelianize(const DeckWord& w) const;
    std::string format(const DeckWord& w) const;

private:
    int genus_ = 0;
    DeckWord relator_;
    std::vector<std::array<long, 2>> abelian_;
    std::vector<DeckWord> relator_rotations_;
};

/**
 * Closed map cut into one fundamental polygon. side[d] is zero for darts
 * inside the polygon; for a dart on a polygon side it is the deck letter
 * taking the copy left of d to the copy right of d.
 */
struct PolygonMap {
    CombinatorialMap map;
    std::vector<int> side;
    std::vector<Dart> polygon_word;
    DeckGroup group;

    int genus() const { return map.genus(); }
    bool is_side(Dart d) const { return side[d] != 0; }
    /** True when some side dart leaves v. */
    bool on_side(VertexId v) const;
};

/** Validates the side labelling and reads the relator off the vertex rotations. */
PolygonMap make_polygon_map(CombinatorialMap m, std::vector<int> side, std::vector<Dart> polygon_word,
                            std::vector<std::array<long, 2>> abelian = {});

/** Square grid on the torus; the polygon sides are the lines x = 0 and y = 0. */
struct TorusGrid {
    PolygonMap surface;
    int cols = 0;
    int rows = 0;

    Dart east(int i, int j) const;
    Dart north(int i, int j) const;
    Dart west(int i, int j) const { return surface.map.alpha(east(i - 1, j)); }
    Dart south(int i, int j) const { return surface.map.alpha(north(i, j - 1)); }
    VertexId vertex(int i, int j) const { return surface.map.tail(east(i, j)); }
    FaceId square(int i, int j) const { return surface.map.left_face(east(i, j)); }
    LoopPath walk(int i, int j, const std::string& moves) const;
};

TorusGrid torus_grid(int cols, int rows);

/** One vertex, 2g edges, one face bounded by [a1,b1]...[ag,bg]; darts 4i and 4i+2 are a_{i+1} and b_{i+1}. */
PolygonMap bouquet(int genus);

struct LiftedDart {
    DeckWord copy;
    Dart dart = 0;
};

/** Finite planar piece of the universal cover around a closed lift. */
struct LiftedPatch {
    CombinatorialMap map;
    /** Base face of every patch face; -1 for the outer face. */
    std::vector<FaceId> face_base;
    std::vector<DeckWord> face_copy;
    LoopPath loop;

    AreaVector pull_back(const AreaVector& a) const;
};

struct LoopLift {
    std::vector<LiftedDart> darts;
    DeckWord deck;
    bool closed = true;
    std::optional<LiftedPatch> patch;
};

LoopLift lift_loop(const PolygonMap& pm, const LoopPath& l, bool build_patch = true);

bool is_contractible(const PolygonMap& pm, const LoopPath& l);

struct TilingStats {
    int length = 0;
    std::vector<DeckWord> path;
};

TilingStats tiling_stats(const PolygonMap& pm, const LoopPath& l);

struct SurfaceValue {
    double value = 0.0;
    bool contractible = false;
    /** Set for genus >= 2, where the value is the lifted-loop candidate. */
    bool conjectural = false;
};

SurfaceValue eval_surface(const PolygonMap& pm, const LoopPath& l, const AreaVector& a);

/** Makeenko-Migdal residual of eval_surface at a transverse crossing. */
double mm_residual_surface(const PolygonMap& pm, const LoopPath& l, const AreaVector& a, VertexId v, double h);

}  // namespace ymmf

#endif
