#include "obslab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace obslab {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

[[noreturn]] void schema_error(const std::string& field, const std::string& why) {
    throw InputError(ErrorCode::SchemaViolation, field + ": " + why);
}

double require_number(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number())
        schema_error(where + "." + key, "missing or not a number");
    return j.at(key).get<double>();
}

std::array<double, 2> parse_pair(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema_error(field, "expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

Scenario build_demo(const std::string& name, int N) {
    if (N < 1) throw InputError(ErrorCode::InvalidArgument, "demo size must be >= 1");
    Scenario sc;
    if (name == "wave") {
        sc.label = "wave";
        sc.output_dim = 1;
        sc.modes.reserve(static_cast<std::size_t>(2 * N));
        for (int n = 1; n <= N; ++n) {
            for (int sign : {+1, -1}) {
                Scenario::Mode mode;
                mode.re = 0.0;
                mode.im = -static_cast<double>(sign * n) * kPi; // λ = -i n π
                mode.obs = {{0.0, -1.0}};                       // CU_n = -i
                sc.modes.push_back(mode);
            }
        }
        sc.metadata = SystemMetadata{false, false};
        return sc;
    }
    if (name == "schrodinger1d" || name == "heat1d") {
        sc.label = name;
        sc.output_dim = 0;
        sc.modes.resize(static_cast<std::size_t>(N));
        std::vector<std::vector<std::array<double, 2>>> cg(
            static_cast<std::size_t>(N), std::vector<std::array<double, 2>>(
                                             static_cast<std::size_t>(N), {0.0, 0.0}));
        for (int n = 1; n <= N; ++n) {
            const double mu = static_cast<double>(n) * kPi * static_cast<double>(n) * kPi;
            auto& mode = sc.modes[static_cast<std::size_t>(n - 1)];
            if (name == "heat1d") {
                mode.re = mu; // λ = (nπ)²
                mode.im = 0.0;
            } else {
                mode.re = 0.0; // λ = i (nπ)²
                mode.im = mu;
            }
            cg[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)] = {mu, 0.0};
        }
        sc.cgram = std::move(cg);
        sc.metadata = name == "heat1d" ? SystemMetadata{true, true} : SystemMetadata{false, false};
        return sc;
    }
    throw InputError(ErrorCode::InvalidArgument, "unknown demo '" + name + "'");
}

Scenario parse_scenario(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(ErrorCode::SchemaViolation, std::string("malformed scenario: ") + e.what());
    }
    if (!j.is_object()) schema_error("scenario", "top level must be an object");

    Scenario sc;
    if (!j.contains("label") || !j.at("label").is_string())
        schema_error("label", "missing or not a string");
    sc.label = j.at("label").get<std::string>();

    if (!j.contains("output_dim") || !j.at("output_dim").is_number_integer())
        schema_error("output_dim", "missing or not an integer");
    sc.output_dim = j.at("output_dim").get<int>();
    if (sc.output_dim < 0) schema_error("output_dim", "must be >= 0");

    if (!j.contains("modes") || !j.at("modes").is_array() || j.at("modes").empty())
        schema_error("modes", "must be a non-empty array");
    const bool vector_form = sc.output_dim >= 1;
    for (std::size_t i = 0; i < j.at("modes").size(); ++i) {
        const auto& jm = j.at("modes")[i];
        const std::string where = "modes[" + std::to_string(i) + "]";
        if (!jm.is_object()) schema_error(where, "must be an object");
        Scenario::Mode mode;
        mode.re = require_number(jm, "re", where);
        mode.im = require_number(jm, "im", where);
        if (jm.contains("obs")) {
            if (!vector_form) schema_error(where + ".obs", "present but output_dim is 0");
            const auto& jo = jm.at("obs");
            if (!jo.is_array() || jo.size() != static_cast<std::size_t>(sc.output_dim))
                schema_error(where + ".obs", "expected " + std::to_string(sc.output_dim) +
                                                 " [re, im] pairs");
            for (std::size_t k = 0; k < jo.size(); ++k)
                mode.obs.push_back(
                    parse_pair(jo[k], where + ".obs[" + std::to_string(k) + "]"));
        } else if (vector_form) {
            schema_error(where + ".obs", "missing while output_dim >= 1");
        }
        sc.modes.push_back(std::move(mode));
    }

    if (j.contains("cgram")) {
        if (vector_form) schema_error("cgram", "present together with per-mode obs");
        const auto& jc = j.at("cgram");
        const std::size_t n = sc.modes.size();
        if (!jc.is_array() || jc.size() != n) schema_error("cgram", "expected an NxN matrix");
        std::vector<std::vector<std::array<double, 2>>> cg;
        for (std::size_t r = 0; r < n; ++r) {
            const auto& jrow = jc[r];
            if (!jrow.is_array() || jrow.size() != n)
                schema_error("cgram[" + std::to_string(r) + "]", "expected N entries");
            std::vector<std::array<double, 2>> row;
            for (std::size_t cidx = 0; cidx < n; ++cidx)
                row.push_back(parse_pair(
                    jrow[cidx], "cgram[" + std::to_string(r) + "][" + std::to_string(cidx) + "]"));
            cg.push_back(std::move(row));
        }
        sc.cgram = std::move(cg);
    } else if (!vector_form) {
        schema_error("cgram", "missing while output_dim is 0");
    }

    if (j.contains("metadata")) {
        const auto& jmeta = j.at("metadata");
        if (!jmeta.is_object()) schema_error("metadata", "must be an object");
        SystemMetadata meta;
        if (jmeta.contains("re_spectrum_unbounded")) {
            if (!jmeta.at("re_spectrum_unbounded").is_boolean())
                schema_error("metadata.re_spectrum_unbounded", "must be a boolean");
            meta.re_spectrum_unbounded = jmeta.at("re_spectrum_unbounded").get<bool>();
        }
        if (jmeta.contains("compact_resolvent")) {
            if (!jmeta.at("compact_resolvent").is_boolean())
                schema_error("metadata.compact_resolvent", "must be a boolean");
            meta.compact_resolvent = jmeta.at("compact_resolvent").get<bool>();
        }
        sc.metadata = meta;
    }
    return sc;
}

std::string serialize_scenario(const Scenario& sc) {
    ordered_json j;
    j["label"] = sc.label;
    j["output_dim"] = sc.output_dim;
    j["modes"] = ordered_json::array();
    for (const auto& mode : sc.modes) {
        ordered_json jm;
        jm["re"] = mode.re;
        jm["im"] = mode.im;
        if (sc.output_dim >= 1) {
            ordered_json jo = ordered_json::array();
            for (const auto& pair : mode.obs) jo.push_back({pair[0], pair[1]});
            jm["obs"] = std::move(jo);
        }
        j["modes"].push_back(std::move(jm));
    }
    if (sc.cgram) {
        ordered_json jc = ordered_json::array();
        for (const auto& row : *sc.cgram) {
            ordered_json jrow = ordered_json::array();
            for (const auto& pair : row) jrow.push_back({pair[0], pair[1]});
            jc.push_back(std::move(jrow));
        }
        j["cgram"] = std::move(jc);
    }
    if (sc.metadata) {
        j["metadata"] = {{"re_spectrum_unbounded", sc.metadata->re_spectrum_unbounded},
                         {"compact_resolvent", sc.metadata->compact_resolvent}};
    }
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(ErrorCode::InvalidArgument, "cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(ErrorCode::InvalidArgument, "cannot write scenario file " + path);
    out << serialize_scenario(scenario);
}

SpectralSystem to_system(const Scenario& sc) {
    if (sc.modes.empty())
        throw InputError(ErrorCode::SchemaViolation, "modes: must contain at least one entry");
    const bool vector_form = sc.output_dim >= 1;
    if (vector_form && sc.cgram)
        throw InputError(ErrorCode::SchemaViolation, "cgram: present together with per-mode obs");
    if (!vector_form && !sc.cgram)
        throw InputError(ErrorCode::SchemaViolation, "cgram: missing while output_dim is 0");

    SpectralSystem sys;
    sys.label = sc.label;
    if (sc.metadata) sys.metadata = *sc.metadata;
    sys.modes.reserve(sc.modes.size());
    for (std::size_t i = 0; i < sc.modes.size(); ++i) {
        const auto& m = sc.modes[i];
        ObservedMode mode;
        mode.lambda = Complex(m.re, m.im);
        if (vector_form) {
            if (m.obs.size() != static_cast<std::size_t>(sc.output_dim))
                throw InputError(ErrorCode::SchemaViolation,
                                 "modes[" + std::to_string(i) + "].obs: expected length " +
                                     std::to_string(sc.output_dim));
            mode.obs.resize(static_cast<Eigen::Index>(m.obs.size()));
            for (std::size_t k = 0; k < m.obs.size(); ++k)
                mode.obs(static_cast<Eigen::Index>(k)) = Complex(m.obs[k][0], m.obs[k][1]);
        }
        sys.modes.push_back(std::move(mode));
    }

    if (vector_form) {
        sys.observation = VectorObservation{sc.output_dim};
    } else {
        const auto n = static_cast<Eigen::Index>(sc.modes.size());
        Eigen::MatrixXcd cg(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) {
                const auto& pair =
                    (*sc.cgram)[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                cg(r, c) = Complex(pair[0], pair[1]);
            }
        sys.observation = CGramObservation{std::move(cg)};
    }
    return sys;
}

ValidatedSystem demo_system(const std::string& name, int N) {
    return validate_system(to_system(build_demo(name, N)));
}

} // namespace obslab
