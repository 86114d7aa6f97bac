#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace kgc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long n, long long d = 1) { return Rat(Int(n), Int(d)); }

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

// "p/q" or "p"; returns nullopt on malformed input
std::optional<Rat> rat_parse(const std::string& s);

std::string rat_str(const Rat& r);

Rat factorial(int n);
Rat binomial(int n, int k);

Rat pow_rat(const Rat& base, int e);  // e >= 0

// exact binary expansion of the double
inline Rat rat_from_double(double x) { return Rat(x); }

}  // namespace kgc
