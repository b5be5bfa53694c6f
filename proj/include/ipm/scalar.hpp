#ifndef IPM_SCALAR_HPP
#define IPM_SCALAR_HPP

#include <cmath>
#include <cstdlib>

#include "ipm/rational.hpp"

namespace ipm {

/// Per-backend arithmetic policy. The rational backend is exact; the float
/// backend compares against configured epsilons.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational abs_val(const Rational& x) { return abs(x); }
    static bool is_zero(const Rational& x) { return x.is_zero(); }
    // Pivot admissibility: any nonzero entry pivots in exact mode.
    static bool pivot_ok(const Rational& x) { return !x.is_zero(); }
    static double to_double(const Rational& x) { return x.to_double(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr double eps_pivot = 1e-10;
    static constexpr double eps_res = 1e-9;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double abs_val(double x) { return std::fabs(x); }
    static bool is_zero(double x) { return x == 0.0; }
    static bool pivot_ok(double x) { return std::fabs(x) > eps_pivot; }
    static double to_double(double x) { return x; }
};

} // namespace ipm

#endif
