#include "ymmf/groups.hpp"

#include <cmath>

#include "ymmf/error.hpp"

namespace ymmf {

namespace {

using cd = std::complex<double>;
const cd I1(0.0, 1.0);

Matrix symplectic_form(int N) {
    Matrix J = Matrix::Zero(2 * N, 2 * N);
    J.topRightCorner(N, N).setIdentity();
    J.bottomLeftCorner(N, N) = -Matrix::Identity(N, N);
    return J;
}

void check_group(const GroupSpec& g) {
    if (g.N < 2) throw Error(ErrorCode::UnsupportedFamily, "groups need N >= 2");
}

}  // namespace

int GroupSpec::lie_dim() const {
    switch (family) {
        case Family::U: return N * N;
        case Family::SU: return N * N - 1;
        case Family::SO: return N * (N - 1) / 2;
        case Family::Sp: return N * (2 * N + 1);
    }
    return 0;
}

std::string GroupSpec::name() const {
    static const char* names[] = {"U", "SU", "SO", "Sp"};
    return std::string(names[static_cast<int>(family)]) + "(" + std::to_string(N) + ")";
}

GroupSpec make_group(const std::string& family, int N) {
    GroupSpec g;
    if (family == "U") {
        g.family = Family::U;
    } else if (family == "SU") {
        g.family = Family::SU;
    } else if (family == "SO" || family == "O") {
        g.family = Family::SO;
    } else if (family == "Sp") {
        g.family = Family::Sp;
    } else {
        throw Error(ErrorCode::UnsupportedFamily, "unknown group family " + family);
    }
    g.N = N;
    check_group(g);
    return g;
}

// Coefficient layout, per family:
//   U:  for a<b the pair (E_ab - E_ba, i(E_ab + E_ba)) / sqrt(2N), then i E_aa / sqrt(N)
//   SU: off-diagonal pairs as for U, then i H_k / sqrt(N) with H_k the standard orthonormal Cartan elements
//   SO: for a<b (E_ab - E_ba) / sqrt(N)
//   Sp: blocks [[A, B], [-conj B, conj A]] with A in u(N) and B complex symmetric
Matrix lie_combination(const GroupSpec& g, const std::vector<double>& c) {
    check_group(g);
    const int N = g.N;
    if (static_cast<int>(c.size()) != g.lie_dim()) throw Error(ErrorCode::InvalidArgument, "wrong number of coefficients");
    std::size_t k = 0;
    switch (g.family) {
        case Family::U:
        case Family::SU: {
            Matrix x = Matrix::Zero(N, N);
            const double off = 1.0 / std::sqrt(2.0 * N), diag = 1.0 / std::sqrt(double(N));
            for (int a = 0; a < N; ++a) {
                for (int b = a + 1; b < N; ++b) {
                    const double p = c[k++] * off, q = c[k++] * off;
                    x(a, b) += p + I1 * q;
                    x(b, a) += -p + I1 * q;
                }
            }
            if (g.family == Family::U) {
                for (int a = 0; a < N; ++a) x(a, a) += I1 * (c[k++] * diag);
            } else {
                for (int m = 1; m < N; ++m) {
                    const double s = c[k++] * diag / std::sqrt(double(m) * (m + 1));
                    for (int a = 0; a < m; ++a) x(a, a) += I1 * s;
                    x(m, m) += I1 * (-m * s);
                }
            }
            return x;
        }
        case Family::SO: {
            Matrix x = Matrix::Zero(N, N);
            const double s = 1.0 / std::sqrt(double(N));
            for (int a = 0; a < N; ++a) {
                for (int b = a + 1; b < N; ++b) {
                    x(a, b) += c[k] * s;
                    x(b, a) -= c[k] * s;
                    ++k;
                }
            }
            return x;
        }
        case Family::Sp: {
            Matrix A = Matrix::Zero(N, N), B = Matrix::Zero(N, N);
            const double d1 = 1.0 / std::sqrt(2.0 * N), d2 = 1.0 / (2.0 * std::sqrt(double(N)));
            for (int a = 0; a < N; ++a) A(a, a) += I1 * (c[k++] * d1);
            for (int a = 0; a < N; ++a) {
                for (int b = a + 1; b < N; ++b) {
                    const double p = c[k++] * d2, q = c[k++] * d2;
                    A(a, b) += p + I1 * q;
                    A(b, a) += -p + I1 * q;
                }
            }
            for (int a = 0; a < N; ++a) {
                const double p = c[k++] * d1, q = c[k++] * d1;
                B(a, a) += p + I1 * q;
            }
            for (int a = 0; a < N; ++a) {
                for (int b = a + 1; b < N; ++b) {
                    const double p = c[k++] * d2, q = c[k++] * d2;
                    B(a, b) += p + I1 * q;
                    B(b, a) += p + I1 * q;
                }
            }
            Matrix x(2 * N, 2 * N);
            x.topLeftCorner(N, N) = A;
            x.topRightCorner(N, N) = B;
            x.bottomLeftCorner(N, N) = -B.conjugate();
            x.bottomRightCorner(N, N) = A.conjugate();
            return x;
        }
    }
    return {};
}

std::vector<Matrix> lie_basis(const GroupSpec& g) {
    check_group(g);
    std::vector<Matrix> out;
    std::vector<double> c(g.lie_dim(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = 1.0;
        out.push_back(lie_combination(g, c));
        c[i] = 0.0;
    }
    return out;
}

Matrix normalized_identity(const GroupSpec& g) { return Matrix::Identity(g.matrix_size(), g.matrix_size()); }

std::complex<double> normalized_trace(const Matrix& m) { return m.trace() / double(m.rows()); }

double group_residual(const GroupSpec& g, const Matrix& m) {
    const int d = g.matrix_size();
    if (m.rows() != d || m.cols() != d) return INFINITY;
    double r = (m.adjoint() * m - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    switch (g.family) {
        case Family::U: break;
        case Family::SU: r = std::max(r, std::abs(m.determinant() - 1.0)); break;
        case Family::SO:
            r = std::max(r, m.imag().cwiseAbs().maxCoeff());
            r = std::max(r, std::abs(m.determinant() - 1.0));
            break;
        case Family::Sp: {
            Matrix J = symplectic_form(g.N);
            r = std::max(r, (m.transpose() * J * m - J).cwiseAbs().maxCoeff());
            break;
        }
    }
    return r;
}

MagicResidual magic_check(const GroupSpec& g, const Matrix& A, const Matrix& B) {
    check_group(g);
    for (const Matrix* m : {&A, &B}) {
        if (group_residual(g, *m) > 1e-9) throw Error(ErrorCode::NotInGroup, "matrix is not in " + g.name());
    }
    const double N = g.N, d = g.matrix_size(), beta = g.beta(), gamma = g.gamma();
    const Matrix Binv = B.adjoint();
    cd lhs1 = 0.0, lhs2 = 0.0;
    for (const Matrix& X : lie_basis(g)) {
        lhs1 += normalized_trace(A * X * B * X);
        lhs2 += normalized_trace(A * X) * normalized_trace(B * X);
    }
    const cd trA = normalized_trace(A), trB = normalized_trace(B), trAB = normalized_trace(A * B),
             trABi = normalized_trace(A * Binv);
    const cd rhs1 = -trA * trB - (beta - 2) / (beta * N) * trABi + gamma / (N * N) * trAB;
    const double k = g.beta() == 2 ? 0.0 : -1.0;
    const cd rhs2 = -trAB - k * trABi + gamma * trA * trB;
    return {std::abs(lhs1 - rhs1), std::abs(d * d * lhs2 - rhs2)};
}

namespace {

struct ExpWorkspace {
    Matrix a, a2, a3, a4, acc, tmp;
    Eigen::VectorXcd v, w;
};

double norm_estimate(const Matrix& x, ExpWorkspace& ws) {
    const int n = static_cast<int>(x.rows());
    // x is normal, so its spectral radius bounds the Taylor error
    ws.v.setConstant(n, 1.0 / std::sqrt(double(n)));
    double norm = 0.0;
    for (int it = 0; it < 12; ++it) {
        ws.w.noalias() = x * ws.v;
        norm = ws.w.norm();
        if (norm == 0.0) break;
        ws.v = ws.w / norm;
    }
    return std::max(1.1 * norm, x.cwiseAbs().rowwise().sum().maxCoeff() / std::sqrt(double(n)));
}

void exp_lie_into(const Matrix& x, Matrix& out, ExpWorkspace& ws) {
    double norm = norm_estimate(x, ws);
    int squarings = 0;
    while (norm > 0.5) {
        norm /= 2;
        ++squarings;
    }
    static const double* coef = [] {
        static double c[13];
        c[0] = 1.0;
        for (int k = 1; k <= 12; ++k) c[k] = c[k - 1] / k;
        return c;
    }();
    ws.a = x * std::ldexp(1.0, -squarings);
    ws.a2.noalias() = ws.a * ws.a;
    ws.a3.noalias() = ws.a2 * ws.a;
    ws.a4.noalias() = ws.a2 * ws.a2;
    ws.acc = coef[9] * ws.a + coef[10] * ws.a2 + coef[11] * ws.a3 + coef[12] * ws.a4;
    ws.acc.diagonal().array() += coef[8];
    ws.tmp.noalias() = ws.a4 * ws.acc;
    ws.acc = ws.tmp + coef[5] * ws.a + coef[6] * ws.a2 + coef[7] * ws.a3;
    ws.acc.diagonal().array() += coef[4];
    ws.tmp.noalias() = ws.a4 * ws.acc;
    out = ws.tmp + coef[1] * ws.a + coef[2] * ws.a2 + coef[3] * ws.a3;
    out.diagonal().array() += coef[0];
    for (int s = 0; s < squarings; ++s) {
        ws.tmp.noalias() = out * out;
        out.swap(ws.tmp);
    }
}

}  // namespace

Matrix exp_lie(const Matrix& x) {
    ExpWorkspace ws;
    Matrix out;
    exp_lie_into(x, out, ws);
    return out;
}

Matrix project_to_group(const GroupSpec& g, Matrix m) {
    const int d = static_cast<int>(m.rows());
    const Matrix Id = Matrix::Identity(d, d);
    for (int it = 0; it < 3; ++it) {
        Matrix e = m.adjoint() * m - Id;
        if (e.cwiseAbs().maxCoeff() < 1e-15) break;
        m = m * (Id - 0.5 * e);
    }
    if (g.family == Family::SU) m /= std::pow(m.determinant(), 1.0 / g.N);
    if (g.family == Family::SO) m = m.real().cast<cd>();
    return m;
}

Matrix sample_haar(const GroupSpec& g, std::mt19937_64& rng) {
    check_group(g);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const int N = g.N;
    switch (g.family) {
        case Family::U:
        case Family::SU: {
            Matrix z(N, N);
            for (int j = 0; j < N; ++j) {
                for (int i = 0; i < N; ++i) z(i, j) = cd(gauss(rng), gauss(rng));
            }
            Eigen::HouseholderQR<Matrix> qr(z);
            Matrix q = qr.householderQ();
            Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int j = 0; j < N; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
            if (g.family == Family::SU) q /= std::pow(q.determinant(), 1.0 / N);
            return q;
        }
        case Family::SO: {
            Eigen::MatrixXd z(N, N);
            for (int j = 0; j < N; ++j) {
                for (int i = 0; i < N; ++i) z(i, j) = gauss(rng);
            }
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
            Eigen::MatrixXd q = qr.householderQ();
            for (int j = 0; j < N; ++j) {
                if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
            }
            if (q.determinant() < 0) q.col(0) *= -1.0;
            return q.cast<cd>();
        }
        case Family::Sp: {
            const Matrix J = symplectic_form(N);
            Matrix m(2 * N, 2 * N);
            for (int k = 0; k < N; ++k) {
                Eigen::VectorXcd v(2 * N);
                for (int i = 0; i < 2 * N; ++i) v(i) = cd(gauss(rng), gauss(rng));
                for (int pass = 0; pass < 2; ++pass) {
                    for (int j = 0; j < k; ++j) {
                        v -= m.col(j) * m.col(j).dot(v);
                        v -= m.col(N + j) * m.col(N + j).dot(v);
                    }
                }
                v.normalize();
                m.col(k) = v;
                m.col(N + k) = -J * v.conjugate();
            }
            return m;
        }
    }
    return {};
}

int default_heat_steps(double t) { return std::max(100, static_cast<int>(std::ceil(100.0 * t))); }

Matrix sample_heat_kernel(const GroupSpec& g, double t, int steps, std::mt19937_64& rng) {
    check_group(g);
    if (t < 0) throw Error(ErrorCode::NegativeTime, "heat kernel time must be >= 0");
    if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be >= 0");
    Matrix u = normalized_identity(g);
    if (t == 0.0) return u;
    if (steps == 0) steps = default_heat_steps(t);
    const double scale = std::sqrt(t / steps);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> c(g.lie_dim());
    ExpWorkspace ws;
    Matrix x, e, tmp;
    for (int s = 0; s < steps; ++s) {
        for (double& v : c) v = gauss(rng) * scale;
        x = lie_combination(g, c);
        exp_lie_into(x, e, ws);
        tmp.noalias() = u * e;
        u.swap(tmp);
        if ((s + 1) % 64 == 0) u = project_to_group(g, u);
    }
    return project_to_group(g, u);
}

}  // namespace ymmf
