#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "fblsec/scenario.hpp"

namespace fblsec {

/// Bad user input: unreadable file, malformed JSON, schema violation.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One link as written in a scenario file: an SNR in dB, or a geometry whose
/// fading is drawn from its own seed. The dB form wins when both are given.
struct LinkSpec {
    std::optional<double> snr_db;
    std::optional<LinkGeometry> geometry;
    std::uint64_t fading_seed = 0;
};

inline constexpr std::array<const char*, 4> kLinkNames{"ab", "ae", "ba", "be"};

/// File-level scenario description. Kept separate from Scenario so sweeps can
/// vary the source fields (an SNR in dB, M, transmit power) and re-materialize.
struct ScenarioSpec {
    std::array<LinkSpec, 4> links; // ab, ae, ba, be
    ScenarioTemplate params;
    FadingModel fading_model = FadingModel::real_normal;
    /// Transmit power in W. SNRs given in dB are taken at 1 W and scale
    /// linearly; geometry links use it in place of their own tx_power.
    std::optional<double> tx_power;
};

inline Snr materialize_link(const LinkSpec& link, FadingModel model, std::optional<double> tx_power)
{
    if (link.snr_db) {
        const double gain = tx_power.value_or(1.0);
        return Snr(Snr::from_db(*link.snr_db).value() * gain);
    }
    if (!link.geometry) {
        throw InputError("link has neither an SNR nor a geometry");
    }
    LinkGeometry geom = *link.geometry;
    if (tx_power) {
        geom.tx_power = *tx_power;
    }
    Rng rng(link.fading_seed);
    if (model == FadingModel::real_normal) {
        return snr_from_geometry(geom, rng.normal());
    }
    return snr_from_fading_power(geom, draw_fading_power(rng, model));
}

inline Scenario materialize(const ScenarioSpec& spec)
{
    std::array<double, 4> g{};
    for (std::size_t i = 0; i < 4; ++i) {
        g[i] = materialize_link(spec.links[i], spec.fading_model, spec.tx_power).value();
    }
    return Scenario(Snr(g[0]), Snr(g[1]), Snr(g[2]), Snr(g[3]), spec.params);
}

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <class T>
T require(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key)) {
        throw InputError(std::string("scenario: missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError(std::string("scenario: field '") + key + "' has the wrong type");
    }
}

inline double require_number(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw InputError(std::string("scenario: field '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

inline int require_int(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw InputError(std::string("scenario: field '") + key + "' must be an integer");
    }
    return j.at(key).get<int>();
}

} // namespace detail

inline ScenarioSpec scenario_spec_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) {
        throw InputError("scenario: top level must be an object");
    }
    ScenarioSpec spec;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string db_key = std::string("gamma_") + kLinkNames[i] + "_db";
        const std::string geom_key = std::string("geometry_") + kLinkNames[i];
        LinkSpec& link = spec.links[i];
        if (j.contains(db_key)) {
            link.snr_db = detail::require_number(j, db_key.c_str());
        }
        if (j.contains(geom_key)) {
            const auto& g = j.at(geom_key);
            if (!g.is_object()) {
                throw InputError("scenario: '" + geom_key + "' must be an object");
            }
            LinkGeometry geom{detail::require_number(g, "pathloss"), detail::require_number(g, "noise_power"),
                              detail::require_number(g, "tx_power")};
            try {
                geom.validate();
            } catch (const std::invalid_argument& e) {
                throw InputError("scenario: '" + geom_key + "': " + e.what());
            }
            link.geometry = geom;
            if (g.contains("fading_seed")) {
                if (!g.at("fading_seed").is_number_unsigned()) {
                    throw InputError("scenario: '" + geom_key + ".fading_seed' must be a nonnegative integer");
                }
                link.fading_seed = g.at("fading_seed").get<std::uint64_t>();
            }
        }
        if (!link.snr_db && !link.geometry) {
            throw InputError("scenario: link " + std::string(kLinkNames[i]) + " needs '" + db_key + "' or '" +
                             geom_key + "'");
        }
    }
    spec.params.d_m1 = detail::require_int(j, "d_m1");
    spec.params.d_m2 = detail::require_int(j, "d_m2");
    spec.params.M = detail::require_int(j, "M");
    spec.params.eps_ab_max = detail::require_number(j, "eps_ab_max");
    spec.params.eps_ba_max = detail::require_number(j, "eps_ba_max");
    spec.params.eps_e_max = detail::require_number(j, "eps_e_max");
    try {
        spec.params.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    if (j.contains("fading_model")) {
        const auto model = detail::require<std::string>(j, "fading_model");
        if (model == "real_normal") {
            spec.fading_model = FadingModel::real_normal;
        } else if (model == "complex_normal") {
            spec.fading_model = FadingModel::complex_normal;
        } else {
            throw InputError("scenario: fading_model must be 'real_normal' or 'complex_normal'");
        }
    }
    if (j.contains("tx_power")) {
        const double p = detail::require_number(j, "tx_power");
        if (!(p > 0.0)) {
            throw InputError("scenario: tx_power must be > 0");
        }
        spec.tx_power = p;
    }
    return spec;
}

/// Parses scenario text; syntax errors report line and column.
inline ScenarioSpec parse_scenario(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed scenario JSON at " + detail::line_column(text, e.byte) + ": " + e.what());
    }
    return scenario_spec_from_json(j);
}

inline ScenarioSpec load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

inline nlohmann::json to_json(const ScenarioSpec& spec)
{
    nlohmann::json j;
    for (std::size_t i = 0; i < 4; ++i) {
        const LinkSpec& link = spec.links[i];
        if (link.snr_db) {
            j[std::string("gamma_") + kLinkNames[i] + "_db"] = *link.snr_db;
        }
        if (link.geometry) {
            j[std::string("geometry_") + kLinkNames[i]] = {{"pathloss", link.geometry->pathloss},
                                                            {"noise_power", link.geometry->noise_power},
                                                            {"tx_power", link.geometry->tx_power},
                                                            {"fading_seed", link.fading_seed}};
        }
    }
    j["d_m1"] = spec.params.d_m1;
    j["d_m2"] = spec.params.d_m2;
    j["M"] = spec.params.M;
    j["eps_ab_max"] = spec.params.eps_ab_max;
    j["eps_ba_max"] = spec.params.eps_ba_max;
    j["eps_e_max"] = spec.params.eps_e_max;
    j["fading_model"] = spec.fading_model == FadingModel::real_normal ? "real_normal" : "complex_normal";
    if (spec.tx_power) {
        j["tx_power"] = *spec.tx_power;
    }
    return j;
}

} // namespace fblsec
