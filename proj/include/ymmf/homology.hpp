#ifndef YMMF_HOMOLOGY_HPP
#define YMMF_HOMOLOGY_HPP

#include <vector>

#include "ymmf/map.hpp"
#include "ymmf/rational.hpp"

namespace ymmf {

/**
 * Cochain of degree 0, 1 or 2 with one coefficient per vertex, positive
 * edge or face. Boundary faces are ordinary faces here; homology is that of
 * the closed surface.
 */
struct DiscreteForm {
    int degree = 0;
    std::vector<Rational> coeffs;

    bool operator==(const DiscreteForm& o) const { return degree == o.degree && coeffs == o.coeffs; }
    DiscreteForm& operator+=(const DiscreteForm& o);
    DiscreteForm& operator-=(const DiscreteForm& o);
    DiscreteForm& operator*=(const Rational& s);
    bool is_zero() const;
};

DiscreteForm operator+(DiscreteForm a, const DiscreteForm& b);
DiscreteForm operator-(DiscreteForm a, const DiscreteForm& b);
DiscreteForm operator*(const Rational& s, DiscreteForm a);

DiscreteForm zero_form(const CombinatorialMap& m, int degree);
Rational pairing(const DiscreteForm& a, const DiscreteForm& b);
/** Value of a 1-form on a dart; reversing the dart negates it. */
Rational on_dart(const CombinatorialMap& m, const DiscreteForm& w, Dart d);

DiscreteForm d(const CombinatorialMap& m, const DiscreteForm& form);
DiscreteForm d_star(const CombinatorialMap& m, const DiscreteForm& form);

/** omega_e: the 1-form dual to the dart e. */
DiscreteForm edge_form(const CombinatorialMap& m, Dart e);
DiscreteForm face_indicator(const CombinatorialMap& m, FaceId f);
/** mu_*: the 2-form equal to one on every face. */
DiscreteForm total_area_form(const CombinatorialMap& m);

DiscreteForm loop_one_form(const CombinatorialMap& m, const LoopPath& l);

struct HomologyBasis {
    std::vector<LoopPath> loops;
    std::vector<DiscreteForm> forms;
};

/** Cycles closed by the edges outside a spanning tree and a dual spanning tree. */
HomologyBasis homology_basis(const CombinatorialMap& m);

struct HomologyClass {
    std::vector<Rational> coords;
    bool is_zero() const;
    bool operator==(const HomologyClass& o) const { return coords == o.coords; }
};

HomologyClass homology_class(const CombinatorialMap& m, const LoopPath& l, const HomologyBasis& basis);
HomologyClass homology_class(const CombinatorialMap& m, const LoopPath& l);

enum class WindingNormalization { Default, ZeroOnFace, OrthogonalToTotal };

/**
 * n_l with d* n_l = omega_l. Default normalisation: zero on the first
 * boundary face when there is one, otherwise orthogonal to mu_*.
 */
DiscreteForm winding_function(const CombinatorialMap& m, const LoopPath& l,
                              WindingNormalization norm = WindingNormalization::Default,
                              FaceId zero_face = -1);

DiscreteForm mm_vector(const CombinatorialMap& m, const LoopPath& l, VertexId v);

bool in_mm_space(const CombinatorialMap& m, const LoopPath& l, const DiscreteForm& alpha);

/** mu_v over the crossings together with d omega_e over the edges the loop avoids. */
std::vector<DiscreteForm> mm_spanning_family(const CombinatorialMap& m, const LoopPath& l);

int form_rank(const std::vector<DiscreteForm>& forms);

}  // namespace ymmf

#endif
