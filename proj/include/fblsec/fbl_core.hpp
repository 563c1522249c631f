#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fblsec {

inline constexpr double kLn2 = std::numbers::ln2;

/// Linear-scale signal-to-noise ratio. Zero is excluded because the channel
/// dispersion vanishes there and the normal approximation degenerates.
class Snr {
public:
    explicit Snr(double value) : value_(value)
    {
        if (!std::isfinite(value) || value <= 0.0) {
            throw std::domain_error("Snr: value must be finite and > 0, got " + std::to_string(value));
        }
    }

    static Snr from_db(double db) { return Snr(std::pow(10.0, db / 10.0)); }

    double value() const noexcept { return value_; }
    double db() const noexcept { return 10.0 * std::log10(value_); }

    friend bool operator==(const Snr&, const Snr&) = default;

private:
    double value_;
};

/// Blocklength (channel uses) and total number of coded bits. Both are real
/// valued here; integrality is a solver concern.
struct CodeParams {
    double m;
    double d;

    CodeParams(double blocklength, double bits) : m(blocklength), d(bits)
    {
        if (!std::isfinite(m) || m < 1.0) {
            throw std::domain_error("CodeParams: blocklength must be >= 1, got " + std::to_string(m));
        }
        if (!std::isfinite(d) || d < 0.0) {
            throw std::domain_error("CodeParams: bits must be >= 0, got " + std::to_string(d));
        }
    }
};

/// An error probability together with its complement, each computed from its
/// own tail so that neither loses precision when the other is close to one.
struct ErrorProb {
    double value;
    double complement;
};

/// Upper tail of the standard normal distribution.
inline double q_func(double x)
{
    if (!std::isfinite(x)) {
        throw std::domain_error("q_func: argument must be finite");
    }
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline double normal_pdf(double x)
{
    constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace detail {

// Wichura's AS241 (PPND16) lower-tail quantile, about 1e-16 relative.
inline double normal_quantile_as241(double p)
{
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        constexpr std::array<double, 8> a{3.387132872796366608,  133.14166789178437745, 1971.5909503065514427,
                                          13731.693765509461125, 45921.953931549871457, 67265.770927008700853,
                                          33430.575583588128105, 2509.0809287301226727};
        constexpr std::array<double, 8> b{1.0,
                                          42.313330701600911252,
                                          687.1870074920579083,
                                          5394.1960214247511077,
                                          21213.794301586595867,
                                          39307.89580009271061,
                                          28729.085735721942674,
                                          5226.495278852545925};
        const double r = 0.180625 - q * q;
        double num = a[7];
        double den = b[7];
        for (int i = 6; i >= 0; --i) {
            num = num * r + a[i];
            den = den * r + b[i];
        }
        return q * num / den;
    }

    double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
    double value = 0.0;
    if (r <= 5.0) {
        constexpr std::array<double, 8> c{1.42343711074968357734,  4.6303378461565452959,   5.7694972214606914055,
                                          3.64784832476320460504,  1.27045825245236838258,  0.24178072517745061177,
                                          0.0227238449892691845833, 7.7454501427834140764e-4};
        constexpr std::array<double, 8> d{1.0,
                                          2.05319162663775882187,
                                          1.6763848301838038494,
                                          0.68976733498510000455,
                                          0.14810397642748007459,
                                          0.0151986665636164571966,
                                          5.475938084995344946e-4,
                                          1.05075007164441684324e-9};
        r -= 1.6;
        double num = c[7];
        double den = d[7];
        for (int i = 6; i >= 0; --i) {
            num = num * r + c[i];
            den = den * r + d[i];
        }
        value = num / den;
    } else {
        constexpr std::array<double, 8> e{6.6579046435011037772,   5.4637849111641143699,
                                          1.7848265399172913358,   0.29656057182850489123,
                                          0.026532189526576123093, 0.0012426609473880784386,
                                          2.71155556874348757815e-5, 2.01033439929228813265e-7};
        constexpr std::array<double, 8> f{1.0,
                                          0.59983220655588793769,
                                          0.13692988092273580531,
                                          0.0148753612908506148525,
                                          7.868691311456132591e-4,
                                          1.8463183175100546818e-5,
                                          1.4215117583164458887e-7,
                                          2.04426310338993978564e-15};
        r -= 5.0;
        double num = e[7];
        double den = f[7];
        for (int i = 6; i >= 0; --i) {
            num = num * r + e[i];
            den = den * r + f[i];
        }
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

} // namespace detail

/// Inverse of q_func on (0, 1). One Halley step against erfc polishes the
/// rational approximation; the residual is taken on whichever tail is smaller.
inline double q_inv(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_inv: probability must lie in (0,1), got " + std::to_string(p));
    }
    double x = -detail::normal_quantile_as241(p);
    const double pdf = normal_pdf(x);
    if (pdf > 0.0) {
        const double residual = p <= 0.5 ? q_func(x) - p : (1.0 - p) - q_func(-x);
        const double step = residual / pdf;
        x += step / (1.0 - 0.5 * step * x);
    }
    return x;
}

/// Shannon capacity log2(1 + gamma) in bits per channel use.
inline double capacity(Snr gamma) { return std::log1p(gamma.value()) / kLn2; }

/// Channel dispersion 1 - (1 + gamma)^-2, written to stay accurate for small gamma.
inline double dispersion(Snr gamma)
{
    const double g = gamma.value();
    const double one_plus = 1.0 + g;
    return g * (2.0 + g) / (one_plus * one_plus);
}

/// Argument of the Q-function in the normal approximation:
/// sqrt(m / V) * (ln(1 + gamma) - d ln2 / m).
inline double fbl_argument(Snr gamma, const CodeParams& code)
{
    return std::sqrt(code.m / dispersion(gamma)) * (std::log1p(gamma.value()) - code.d * kLn2 / code.m);
}

/// Decoding error probability and its complement. Both are kept strictly
/// inside (0, 1) so that reciprocals and logarithms downstream stay finite.
inline ErrorProb decode_error(Snr gamma, const CodeParams& code)
{
    constexpr double lo = 1e-300;
    const double x = fbl_argument(gamma, code);
    double eps = std::max(q_func(x), lo);
    double comp = std::max(q_func(-x), lo);
    if (eps >= 1.0) {
        eps = std::nextafter(1.0, 0.0);
    }
    if (comp >= 1.0) {
        comp = std::nextafter(1.0, 0.0);
    }
    return {eps, comp};
}

/// Probability that a receiver fails to decode d bits sent over m channel
/// uses at SNR gamma (finite-blocklength normal approximation).
inline double decode_error_prob(Snr gamma, const CodeParams& code) { return decode_error(gamma, code).value; }

struct ErrorPartials {
    double d_eps_dm;
    double d_eps_dd;
};

/// Analytic partial derivatives of decode_error_prob in blocklength and bits.
inline ErrorPartials error_prob_partials(Snr gamma, const CodeParams& code)
{
    const double v = dispersion(gamma);
    const double x = fbl_argument(gamma, code);
    const double pdf = normal_pdf(x);
    const double sqrt_mv = std::sqrt(code.m * v);
    const double dx_dm = (std::log1p(gamma.value()) + code.d * kLn2 / code.m) / (2.0 * sqrt_mv);
    const double dx_dd = -kLn2 / sqrt_mv;
    return {-pdf * dx_dm, -pdf * dx_dd};
}

} // namespace fblsec
