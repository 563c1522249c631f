#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fblsec/fbl_core.hpp"

namespace fblsec {

/// Raised when a fading draw or geometry yields a zero-gain channel.
class DegenerateChannel : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class FadingModel {
    real_normal,    // h ~ N(0,1), |h|^2 ~ chi-square(1)
    complex_normal, // h ~ CN(0,1), |h|^2 ~ Exp(1)
};

struct LinkGeometry {
    double pathloss = 1.0;
    double noise_power = 1.0;
    double tx_power = 1.0;

    void validate() const
    {
        if (!(pathloss > 0.0) || !(noise_power > 0.0) || !(tx_power > 0.0) || !std::isfinite(pathloss) ||
            !std::isfinite(noise_power) || !std::isfinite(tx_power)) {
            throw std::invalid_argument("LinkGeometry: pathloss, noise_power and tx_power must be finite and > 0");
        }
    }
};

/// Message sizes, blocklength budget and thresholds: everything except the SNRs.
struct ScenarioTemplate {
    int d_m1 = 20;
    int d_m2 = 20;
    int M = 1000;
    double eps_ab_max = 0.5;
    double eps_ba_max = 0.5;
    double eps_e_max = 0.5;

    void validate() const
    {
        auto in_unit = [](double p) { return p > 0.0 && p < 1.0; };
        if (d_m1 < 1 || d_m2 < 1) {
            throw std::invalid_argument("Scenario: message sizes d_m1, d_m2 must be >= 1");
        }
        if (M < 2) {
            throw std::invalid_argument("Scenario: blocklength budget M must be >= 2");
        }
        if (!in_unit(eps_ab_max) || !in_unit(eps_ba_max) || !in_unit(eps_e_max)) {
            throw std::invalid_argument("Scenario: thresholds must lie in (0,1)");
        }
    }
};

/// A complete problem instance. Index 1 is the forward direction (Alice to
/// Bob, overheard by Eve), index 2 the backward one (Bob to Alice).
struct Scenario {
    Snr gamma_ab;
    Snr gamma_ae;
    Snr gamma_ba;
    Snr gamma_be;
    ScenarioTemplate params;

    Scenario(Snr ab, Snr ae, Snr ba, Snr be, ScenarioTemplate p)
        : gamma_ab(ab), gamma_ae(ae), gamma_ba(ba), gamma_be(be), params(p)
    {
        params.validate();
    }

    int M() const noexcept { return params.M; }

    Snr legit(int direction) const { return direction == 1 ? gamma_ab : gamma_ba; }
    Snr eave(int direction) const { return direction == 1 ? gamma_ae : gamma_be; }
    int message_bits(int direction) const { return direction == 1 ? params.d_m1 : params.d_m2; }
    double reliability_max(int direction) const { return direction == 1 ? params.eps_ab_max : params.eps_ba_max; }

    /// The eavesdropper is at least as strong as the legitimate receiver in
    /// this direction. The objective is still defined, but secrecy is hopeless
    /// in the asymptotic sense.
    bool degenerate(int direction) const { return legit(direction).value() <= eave(direction).value(); }

    std::vector<std::string> warnings() const
    {
        std::vector<std::string> out;
        if (degenerate(1)) {
            out.emplace_back("forward link: gamma_ab <= gamma_ae");
        }
        if (degenerate(2)) {
            out.emplace_back("backward link: gamma_ba <= gamma_be");
        }
        return out;
    }

    friend bool operator==(const Scenario& a, const Scenario& b)
    {
        const auto& p = a.params;
        const auto& q = b.params;
        return a.gamma_ab == b.gamma_ab && a.gamma_ae == b.gamma_ae && a.gamma_ba == b.gamma_ba &&
               a.gamma_be == b.gamma_be && p.d_m1 == q.d_m1 && p.d_m2 == q.d_m2 && p.M == q.M &&
               p.eps_ab_max == q.eps_ab_max && p.eps_ba_max == q.eps_ba_max && p.eps_e_max == q.eps_e_max;
    }
};

/// Seeded random source with a fixed, implementation-independent mapping
/// from seed to values: mt19937_64 words, 53-bit uniforms, Box-Muller normals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 == 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Small-scale power gain |h|^2 for one link.
inline double draw_fading_power(Rng& rng, FadingModel model)
{
    if (model == FadingModel::real_normal) {
        const double h = rng.normal();
        return h * h;
    }
    const double re = rng.normal();
    const double im = rng.normal();
    return 0.5 * (re * re + im * im);
}

/// SNR = p * pathloss * h^2 / noise_power for a real fading amplitude h.
inline Snr snr_from_geometry(const LinkGeometry& geom, double fading_sample)
{
    geom.validate();
    if (!std::isfinite(fading_sample)) {
        throw std::domain_error("snr_from_geometry: fading sample must be finite");
    }
    const double gamma = geom.tx_power * geom.pathloss * fading_sample * fading_sample / geom.noise_power;
    if (!(gamma > 0.0)) {
        throw DegenerateChannel("snr_from_geometry: zero channel gain");
    }
    return Snr(gamma);
}

/// Same as snr_from_geometry but takes the fading power |h|^2 directly.
inline Snr snr_from_fading_power(const LinkGeometry& geom, double fading_power)
{
    geom.validate();
    const double gamma = geom.tx_power * geom.pathloss * fading_power / geom.noise_power;
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DegenerateChannel("snr_from_fading_power: zero channel gain");
    }
    return Snr(gamma);
}

/// Geometries are ordered ab, ae, ba, be. One stream is drawn from `seed` in
/// that order.
inline Scenario sample_scenario(const std::array<LinkGeometry, 4>& geoms, std::uint64_t seed,
                                const ScenarioTemplate& tmpl, FadingModel model = FadingModel::real_normal)
{
    Rng rng(seed);
    std::array<double, 4> gamma{};
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        gamma[i] = snr_from_fading_power(geoms[i], draw_fading_power(rng, model)).value();
    }
    return Scenario(Snr(gamma[0]), Snr(gamma[1]), Snr(gamma[2]), Snr(gamma[3]), tmpl);
}

/// Achievable secrecy rate at blocklength m for target decoding error
/// eps_bar and leakage delta_bar. Diagnostic only; may be negative.
inline double secrecy_rate_fbl(const Scenario& s, int direction, double m, double eps_bar, double delta_bar)
{
    if (direction != 1 && direction != 2) {
        throw std::invalid_argument("secrecy_rate_fbl: direction must be 1 or 2");
    }
    if (!(m >= 1.0)) {
        throw std::domain_error("secrecy_rate_fbl: blocklength must be >= 1");
    }
    const Snr b = s.legit(direction);
    const Snr e = s.eave(direction);
    const double secrecy_capacity = capacity(b) - capacity(e);
    return secrecy_capacity - std::sqrt(dispersion(b) / m) * q_inv(eps_bar) -
           std::sqrt(dispersion(e) / m) * q_inv(delta_bar);
}

} // namespace fblsec
