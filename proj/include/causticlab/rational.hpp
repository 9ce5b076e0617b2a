#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace causticlab {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// Always "p/q", including integers ("1/1"), so golden files never mix forms.
inline std::string to_string(const Rational& q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

}  // namespace causticlab
