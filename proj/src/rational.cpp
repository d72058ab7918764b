#include "ymmf/rational.hpp"

#include <cctype>

#include "ymmf/error.hpp"

namespace ymmf {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty number");
    auto slash = text.find('/');
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        }
        return true;
    };
    // GMP reads a leading 0 as an octal prefix, so digits are normalised first.
    auto strip_plus = [](std::string s) {
        bool negative = !s.empty() && s[0] == '-';
        if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.erase(0, 1);
        std::size_t nz = s.find_first_not_of('0');
        s = nz == std::string::npos ? "0" : s.substr(nz);
        return negative ? "-" + s : s;
    };
    if (slash != std::string::npos) {
        std::string p = text.substr(0, slash), q = text.substr(slash + 1);
        if (!is_int(p) || !is_int(q)) throw Error(ErrorCode::InvalidArgument, "bad rational '" + text + "'");
        Rational den{Integer(strip_plus(q))};
        if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + text + "'");
        return Rational{Integer(strip_plus(p))} / den;
    }
    std::string mant = text;
    long exp10 = 0;
    auto e = mant.find_first_of("eE");
    if (e != std::string::npos) {
        std::string ex = mant.substr(e + 1);
        if (!is_int(ex)) throw Error(ErrorCode::InvalidArgument, "bad number '" + text + "'");
        exp10 = std::stol(ex);
        mant = mant.substr(0, e);
    }
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    if (!is_int(mant)) throw Error(ErrorCode::InvalidArgument, "bad number '" + text + "'");
    Rational value{Integer(strip_plus(mant))};
    Rational ten = 10;
    for (long i = 0; i < std::labs(exp10); ++i) value = exp10 > 0 ? value * ten : value / ten;
    return value;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

// In-place Gauss-Jordan; returns pivot columns.
std::vector<int> reduce(RationalMatrix& m, int cols) {
    std::vector<int> pivots;
    int row = 0;
    const int rows = static_cast<int>(m.size());
    for (int c = 0; c < cols && row < rows; ++c) {
        int p = -1;
        for (int r = row; r < rows; ++r) {
            if (m[r][c] != 0) {
                p = r;
                break;
            }
        }
        if (p < 0) continue;
        std::swap(m[row], m[p]);
        Rational inv = 1 / m[row][c];
        for (auto& x : m[row]) x *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == row || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (std::size_t k = c; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

int rank(RationalMatrix rows) {
    if (rows.empty()) return 0;
    int cols = static_cast<int>(rows[0].size());
    return static_cast<int>(reduce(rows, cols).size());
}

std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b) {
    const int cols = a.empty() ? 0 : static_cast<int>(a[0].size());
    RationalMatrix aug = a;
    for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
    std::vector<int> pivots = reduce(aug, cols);
    for (std::size_t r = pivots.size(); r < aug.size(); ++r) {
        if (aug[r][cols] != 0) return std::nullopt;
    }
    std::vector<Rational> x(cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
    return x;
}

}  // namespace ymmf
