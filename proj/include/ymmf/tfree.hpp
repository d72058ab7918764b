#ifndef YMMF_TFREE_HPP
#define YMMF_TFREE_HPP

#include <string>
#include <vector>

#include "ymmf/free_moments.hpp"

namespace ymmf {

/**
 * Word in two unitaries X (gen 0) and Y (gen 1). Blocks alternate between
 * the two algebras; a block is a nonzero power of one generator.
 */
struct Monomial {
    std::vector<Letter> blocks;

    Monomial() = default;
    /** Merges adjacent blocks of the same generator and drops zero powers (linear, not cyclic). */
    explicit Monomial(std::vector<Letter> raw);

    bool empty() const { return blocks.empty(); }
    std::size_t size() const { return blocks.size(); }
    bool operator==(const Monomial& o) const { return blocks == o.blocks; }
    bool operator<(const Monomial& o) const;

    /** Net exponents of X and Y. */
    int net(int gen) const;
    /** Number of Y blocks. */
    int y_degree() const;
    bool single_algebra() const;
    Monomial inverse() const;
    Monomial operator*(const Monomial& o) const;
    Monomial pow(int n) const;
};

/** Parses words such as "XYX*Y*", "XY^2X*Y^-2" or "(XYX*Y*)^3"; "1" is the empty word. */
Monomial parse_monomial(const std::string& text);
std::string format_monomial(const Monomial& w);

/** Cyclic merge followed by the least rotation; tau is tracial so this is the key for moments. */
Monomial canonical_monomial(const Monomial& w);

struct TensorTerm {
    double coef = 0.0;
    Monomial left, right;
};

/** Formal expansion of Delta_ad on a canonical monomial; like terms are combined. */
std::vector<TensorTerm> delta_ad(const Monomial& p);

/** Closure of a seed monomial under Delta_ad together with the bilinear right-hand side. */
class MomentSystem {
public:
    explicit MomentSystem(const Monomial& seed, std::size_t cap = 100000);

    std::size_t size() const { return monomials_.size(); }
    const std::vector<Monomial>& monomials() const { return monomials_; }
    std::size_t index_of(const Monomial& canonical) const;

    /** Classical independent state: tau_X(X^{net}) tau_Y(Y^{net}). */
    std::vector<double> initial_state(const GeneratorLaw& x, const GeneratorLaw& y) const;
    void rhs(const std::vector<double>& state, std::vector<double>& out) const;
    /** Adaptive RK4 with step doubling; returns the state at time t. */
    std::vector<double> integrate(double t, const GeneratorLaw& x, const GeneratorLaw& y, double tol = 1e-12) const;

private:
    struct Term {
        double coef;
        std::size_t left, right;
    };
    std::vector<Monomial> monomials_;
    std::vector<std::vector<Term>> terms_;
};

/** tau_X *_t tau_Y on p; throws ClosureExplosion when the closure exceeds 1e5 monomials. */
double tfree_moment(const Monomial& p, double t, const GeneratorLaw& x = GeneratorLaw::haar(),
                    const GeneratorLaw& y = GeneratorLaw::haar());

/** Torus master field of the lattice loop of w with fundamental area T. */
double phi_T_word(const Monomial& w, double T);

/** Value under classical independence of two Haar unitaries. */
double classical_value(const Monomial& w);
/** Value under free independence of two Haar unitaries. */
double free_value(const Monomial& w);

struct InterpolationRow {
    std::string word;
    double phi = 0.0;
    double tfree = 0.0;
    double classical = 0.0;
    double free = 0.0;
    bool separating = false;
};

/** Phi_T against the t-free product at t = T/4; rows differing by more than 1e-6 are flagged. */
std::vector<InterpolationRow> interpolation_report(double T, const std::vector<Monomial>& words);

struct InterpolationLimits {
    double small_T = 1e-3, large_T = 1e3;
    double classical_gap = 0.0;
    double free_gap = 0.0;
};

InterpolationLimits interpolation_limits(const Monomial& w);

}  // namespace ymmf

#endif
