// fastmath.hpp — deterministic math kernels: log, exp, inverse normal CDF.
//
// These are the scalar reference implementations of the transcendental
// functions used inside the simulation kernels. The AVX2 variants in
// kernels_avx2.cpp mirror them operation for operation, so a SIMD lane
// produces bit-identical results to the scalar path. Any change here must
// be mirrored there, and vice versa. Builds use -ffp-contract=off.
//
// Domains are restricted to what the kernels need:
//   det_log:  x in (0, 1], normal finite doubles
//   det_exp:  |x| <= 700
//   norminv:  p in (0, 1), AS 241 (Wichura 1988) rational approximations

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace sitmark::fastmath {

namespace detail {

// log(2) split so that n*kLn2Hi is exact for |n| < 2^20.
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kInvLn2 = 1.44269504088896338700e+00;
inline constexpr double kSqrt2 = 1.41421356237309514547e+00;
// Adding then subtracting 1.5*2^52 rounds to the nearest integer
// (ties to even) and leaves the integer in the low mantissa bits.
inline constexpr double kShifter = 0x1.8p52;

// atanh series: log(m) = w * (2 + w2*(2/3 + w2*(2/5 + ...))), w = (m-1)/(m+1).
inline constexpr double kLogC0 = 2.0;
inline constexpr double kLogC1 = 2.0 / 3.0;
inline constexpr double kLogC2 = 2.0 / 5.0;
inline constexpr double kLogC3 = 2.0 / 7.0;
inline constexpr double kLogC4 = 2.0 / 9.0;
inline constexpr double kLogC5 = 2.0 / 11.0;
inline constexpr double kLogC6 = 2.0 / 13.0;
inline constexpr double kLogC7 = 2.0 / 15.0;
inline constexpr double kLogC8 = 2.0 / 17.0;

// exp Taylor coefficients 1/k!, k = 2..13.
inline constexpr double kExpC2 = 1.0 / 2.0;
inline constexpr double kExpC3 = 1.0 / 6.0;
inline constexpr double kExpC4 = 1.0 / 24.0;
inline constexpr double kExpC5 = 1.0 / 120.0;
inline constexpr double kExpC6 = 1.0 / 720.0;
inline constexpr double kExpC7 = 1.0 / 5040.0;
inline constexpr double kExpC8 = 1.0 / 40320.0;
inline constexpr double kExpC9 = 1.0 / 362880.0;
inline constexpr double kExpC10 = 1.0 / 3628800.0;
inline constexpr double kExpC11 = 1.0 / 39916800.0;
inline constexpr double kExpC12 = 1.0 / 479001600.0;
inline constexpr double kExpC13 = 1.0 / 6227020800.0;

// AS 241 PPND16 coefficients.
// Central region |q| <= 0.425.
inline constexpr double kA0 = 3.3871328727963666080e+00;
inline constexpr double kA1 = 1.3314166789178437745e+02;
inline constexpr double kA2 = 1.9715909503065514427e+03;
inline constexpr double kA3 = 1.3731693765509461125e+04;
inline constexpr double kA4 = 4.5921953931549871457e+04;
inline constexpr double kA5 = 6.7265770927008700853e+04;
inline constexpr double kA6 = 3.3430575583588128105e+04;
inline constexpr double kA7 = 2.5090809287301226727e+03;
inline constexpr double kB1 = 4.2313330701600911252e+01;
inline constexpr double kB2 = 6.8718700749205790830e+02;
inline constexpr double kB3 = 5.3941960214247511077e+03;
inline constexpr double kB4 = 2.1213794301586595867e+04;
inline constexpr double kB5 = 3.9307895800092710610e+04;
inline constexpr double kB6 = 2.8729085735721942674e+04;
inline constexpr double kB7 = 5.2264952788528545610e+03;
// Middle tail, r = sqrt(-log(min(p,1-p))) in (1.186, 5].
inline constexpr double kC0 = 1.42343711074968357734e+00;
inline constexpr double kC1 = 4.63033784615654529590e+00;
inline constexpr double kC2 = 5.76949722146069140550e+00;
inline constexpr double kC3 = 3.64784832476320460504e+00;
inline constexpr double kC4 = 1.27045825245236838258e+00;
inline constexpr double kC5 = 2.41780725177450611770e-01;
inline constexpr double kC6 = 2.27238449892691845833e-02;
inline constexpr double kC7 = 7.74545014278341407640e-04;
inline constexpr double kD1 = 2.05319162663775882187e+00;
inline constexpr double kD2 = 1.67638483018380384940e+00;
inline constexpr double kD3 = 6.89767334985100004550e-01;
inline constexpr double kD4 = 1.48103976427480074590e-01;
inline constexpr double kD5 = 1.51986665636164571966e-02;
inline constexpr double kD6 = 5.47593808499534494600e-04;
inline constexpr double kD7 = 1.05075007164441684324e-09;
// Far tail, r > 5.
inline constexpr double kE0 = 6.65790464350110377720e+00;
inline constexpr double kE1 = 5.46378491116411436990e+00;
inline constexpr double kE2 = 1.78482653991729133580e+00;
inline constexpr double kE3 = 2.96560571828504891230e-01;
inline constexpr double kE4 = 2.65321895265761230930e-02;
inline constexpr double kE5 = 1.24266094738807843860e-03;
inline constexpr double kE6 = 2.71155556874348757815e-05;
inline constexpr double kE7 = 2.01033439929228813265e-07;
inline constexpr double kF1 = 5.99832206555887937690e-01;
inline constexpr double kF2 = 1.36929880922735805310e-01;
inline constexpr double kF3 = 1.48753612908506148525e-02;
inline constexpr double kF4 = 7.86869131145613259100e-04;
inline constexpr double kF5 = 1.84631831751005468180e-05;
inline constexpr double kF6 = 1.42151175831644588870e-07;
inline constexpr double kF7 = 2.04426310338993978564e-15;

}  // namespace detail

// Natural log for x in (0, 1], no subnormals. Exponent/mantissa split plus
// a 9-term atanh series on [1/sqrt2, sqrt2); absolute error < 1e-14.
inline double det_log(double x) {
    using namespace detail;
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    std::int64_t e = static_cast<std::int64_t>((bits >> 52) & 0x7FFull) - 1023;
    double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    if (m > kSqrt2) {
        m = m * 0.5;
        e = e + 1;
    }
    const double ed = static_cast<double>(e);
    const double w = (m - 1.0) / (m + 1.0);
    const double w2 = w * w;
    double p = kLogC8;
    p = p * w2 + kLogC7;
    p = p * w2 + kLogC6;
    p = p * w2 + kLogC5;
    p = p * w2 + kLogC4;
    p = p * w2 + kLogC3;
    p = p * w2 + kLogC2;
    p = p * w2 + kLogC1;
    p = p * w2 + kLogC0;
    const double log_m = w * p;
    return (ed * kLn2Hi + log_m) + ed * kLn2Lo;
}

// exp for |x| <= 700. Range reduction x = n*log2 + r, degree-13 Taylor on r,
// scale by 2^n assembled from exponent bits. Relative error ~2 ulp.
inline double det_exp(double x) {
    using namespace detail;
    const double t = x * kInvLn2 + kShifter;
    const double nd = t - kShifter;
    const double r = (x - nd * kLn2Hi) - nd * kLn2Lo;
    double p = kExpC13;
    p = p * r + kExpC12;
    p = p * r + kExpC11;
    p = p * r + kExpC10;
    p = p * r + kExpC9;
    p = p * r + kExpC8;
    p = p * r + kExpC7;
    p = p * r + kExpC6;
    p = p * r + kExpC5;
    p = p * r + kExpC4;
    p = p * r + kExpC3;
    p = p * r + kExpC2;
    p = p * r + 1.0;
    p = p * r + 1.0;
    const std::uint64_t tbits = std::bit_cast<std::uint64_t>(t);
    const std::int64_t n =
        static_cast<std::int64_t>(tbits & 0x000FFFFFFFFFFFFFull) - 0x0008000000000000ll;
    const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(n + 1023) << 52);
    return p * scale;
}

// Inverse standard normal CDF for p in (0, 1). AS 241 PPND16 layout:
// rational in q^2 in the center, rational in sqrt(-log(tail)) outside.
// Max absolute error below 1e-15 over the kernel's input range.
inline double norminv(double p) {
    using namespace detail;
    const double q = p - 0.5;
    if (q < 0.425 && q > -0.425) {
        const double r = 0.180625 - q * q;
        double num = kA7;
        num = num * r + kA6;
        num = num * r + kA5;
        num = num * r + kA4;
        num = num * r + kA3;
        num = num * r + kA2;
        num = num * r + kA1;
        num = num * r + kA0;
        double den = kB7;
        den = den * r + kB6;
        den = den * r + kB5;
        den = den * r + kB4;
        den = den * r + kB3;
        den = den * r + kB2;
        den = den * r + kB1;
        den = den * r + 1.0;
        return q * num / den;
    }
    const double tail = q < 0.0 ? p : 1.0 - p;
    double r = det_log(tail);
    r = std::sqrt(-r);
    double val;
    if (r <= 5.0) {
        const double s = r - 1.6;
        double num = kC7;
        num = num * s + kC6;
        num = num * s + kC5;
        num = num * s + kC4;
        num = num * s + kC3;
        num = num * s + kC2;
        num = num * s + kC1;
        num = num * s + kC0;
        double den = kD7;
        den = den * s + kD6;
        den = den * s + kD5;
        den = den * s + kD4;
        den = den * s + kD3;
        den = den * s + kD2;
        den = den * s + kD1;
        den = den * s + 1.0;
        val = num / den;
    } else {
        const double s = r - 5.0;
        double num = kE7;
        num = num * s + kE6;
        num = num * s + kE5;
        num = num * s + kE4;
        num = num * s + kE3;
        num = num * s + kE2;
        num = num * s + kE1;
        num = num * s + kE0;
        double den = kF7;
        den = den * s + kF6;
        den = den * s + kF5;
        den = den * s + kF4;
        den = den * s + kF3;
        den = den * s + kF2;
        den = den * s + kF1;
        den = den * s + 1.0;
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

}  // namespace sitmark::fastmath
