// special_functions.hpp: modified Bessel functions I₀ and K₀
//
// K₀ uses the ascending series below x = 2 and Temme's continued fraction
// (Steed's algorithm, order zero) above it.  Both converge to full precision of
// the scalar type.

#pragma once

#include <cmath>
#include <limits>

#include "qthermo/constants.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

template <typename Scalar>
Scalar bessel_i0(Scalar x) {
    using std::abs;
    // Σ (x²/4)^k / (k!)²
    const Scalar q = x * x / Scalar(4);
    Scalar term{1}, sum{1};
    for (int k = 1; k < 500; ++k) {
        term *= q / (Scalar(k) * Scalar(k));
        sum += term;
        if (abs(term) < std::numeric_limits<Scalar>::epsilon() * abs(sum)) break;
    }
    return sum;
}

namespace detail {

template <typename Scalar>
Scalar bessel_k0_series(Scalar x) {
    using std::abs;
    using std::log;
    // K₀(x) = −(ln(x/2) + γ)·I₀(x) + Σ_{k≥1} (x²/4)^k/(k!)²·H_k
    const Scalar q = x * x / Scalar(4);
    Scalar term{1}, harmonic{0}, correction{0};
    for (int k = 1; k < 500; ++k) {
        term *= q / (Scalar(k) * Scalar(k));
        harmonic += Scalar(1) / Scalar(k);
        const Scalar add = term * harmonic;
        correction += add;
        if (abs(add) < std::numeric_limits<Scalar>::epsilon() * abs(correction)) break;
    }
    return -(log(x / Scalar(2)) + Constants<Scalar>::euler_gamma) * bessel_i0(x) + correction;
}

// e^{x}·K₀(x)
template <typename Scalar>
Scalar bessel_k0_scaled_continued_fraction(Scalar x) {
    using std::abs;
    using std::sqrt;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar b = Scalar(2) * (Scalar(1) + x);
    Scalar d = Scalar(1) / b;
    Scalar delh = d;
    Scalar q1{0}, q2{1};
    const Scalar a1 = Scalar(0.25);
    Scalar q = a1, c = a1;
    Scalar a = -a1;
    Scalar s = Scalar(1) + q * delh;
    for (int i = 2; i < 100000; ++i) {
        a -= Scalar(2 * (i - 1));
        c = -a * c / Scalar(i);
        const Scalar qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += Scalar(2);
        d = Scalar(1) / (b + a * d);
        delh = (b * d - Scalar(1)) * delh;
        const Scalar dels = q * delh;
        s += dels;
        if (abs(dels / s) < eps) break;
    }
    return sqrt(std::numbers::pi_v<Scalar> / (Scalar(2) * x)) / s;
}

}  // namespace detail

template <typename Scalar>
Scalar bessel_k0(Scalar x) {
    detail::require_positive(x, "bessel_k0 argument");
    using std::exp;
    return x <= Scalar(2) ? detail::bessel_k0_series(x)
                          : exp(-x) * detail::bessel_k0_scaled_continued_fraction(x);
}

// cosh(x)·K₀(x), which stays finite where cosh overflows.
template <typename Scalar>
Scalar cosh_times_k0(Scalar x) {
    using std::exp;
    if (x <= Scalar(2)) {
        using std::cosh;
        return cosh(x) * bessel_k0(x);
    }
    detail::require_positive(x, "bessel_k0 argument");
    const Scalar scaled = detail::bessel_k0_scaled_continued_fraction(x);
    return scaled * (Scalar(1) + exp(Scalar(-2) * x)) / Scalar(2);
}

}  // namespace qthermo
