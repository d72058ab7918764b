#ifndef YMMF_RATIONAL_HPP
#define YMMF_RATIONAL_HPP

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace ymmf {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using RationalMatrix = std::vector<std::vector<Rational>>;

/** Parses "p/q", an integer, or a finite decimal such as "0.25" exactly. */
Rational parse_rational(const std::string& text);
double to_double(const Rational& q);

/** Rank of the row space. */
int rank(RationalMatrix rows);

/** Some solution x of A x = b, or nothing when the system is inconsistent. */
std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b);

}  // namespace ymmf

#endif
