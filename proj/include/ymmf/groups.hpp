#ifndef YMMF_GROUPS_HPP
#define YMMF_GROUPS_HPP

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ymmf {

using Matrix = Eigen::MatrixXcd;

enum class Family { U, SU, SO, Sp };

/**
 * Compact classical group. Sp(N) acts on C^{2N} as quaternionic unitary
 * matrices. Normalised traces divide by the matrix size.
 */
struct GroupSpec {
    Family family = Family::U;
    int N = 2;

    int matrix_size() const { return family == Family::Sp ? 2 * N : N; }
    int beta() const { return family == Family::SO ? 1 : family == Family::Sp ? 4 : 2; }
    int gamma() const { return family == Family::SU ? 1 : 0; }
    int lie_dim() const;
    std::string name() const;
};

GroupSpec make_group(const std::string& family, int N);

/**
 * Orthonormal basis of the Lie algebra for
 * <X,Y> = -N Tr(XY) (U, SU, Sp) and -(N/2) Tr(XY) (SO).
 */
std::vector<Matrix> lie_basis(const GroupSpec& g);

/** sum_i c_i X_i over lie_basis(g), built without forming the basis. */
Matrix lie_combination(const GroupSpec& g, const std::vector<double>& coeffs);

/** Largest deviation from the defining relations of the group. */
double group_residual(const GroupSpec& g, const Matrix& m);

Matrix normalized_identity(const GroupSpec& g);
std::complex<double> normalized_trace(const Matrix& m);

struct MagicResidual {
    double first = 0.0;
    double second = 0.0;
};

/**
 * sum_X tr(AXBX) + tr(A)tr(B) + (beta-2)/(beta N) tr(AB^{-1}) - gamma/N^2 tr(AB)
 * and
 * d^2 sum_X tr(AX)tr(BX) + tr(AB) + k tr(AB^{-1}) - gamma tr(A)tr(B)
 * with d the matrix size and k = -1 for SO and Sp, 0 otherwise.
 */
MagicResidual magic_check(const GroupSpec& g, const Matrix& A, const Matrix& B);

/** exp of a Lie algebra element (Taylor degree 12 with scaling and squaring). */
Matrix exp_lie(const Matrix& x);

/** Pulls a nearly unitary matrix of the group back onto it. */
Matrix project_to_group(const GroupSpec& g, Matrix m);

Matrix sample_haar(const GroupSpec& g, std::mt19937_64& rng);

int default_heat_steps(double t);

/** Product of `steps` increments exp(sqrt(t/steps) Xi); steps = 0 selects the default. */
Matrix sample_heat_kernel(const GroupSpec& g, double t, int steps, std::mt19937_64& rng);

}  // namespace ymmf

#endif
