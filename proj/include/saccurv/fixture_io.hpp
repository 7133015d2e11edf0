#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "saccurv/framecalc.hpp"
#include "saccurv/scalar.hpp"

namespace saccurv::framecalc {

/// Bundled fixture registry, defined in src/fixtures_data.cpp. Each entry
/// is the JSON document text.
struct BundledFixture {
    const char* name;
    const char* json;
};
const std::vector<BundledFixture>& bundled_fixtures();

inline FrameRole role_from_string(const std::string& s) {
    if (s == "radical") return FrameRole::Radical;
    if (s == "screen") return FrameRole::Screen;
    if (s == "transversal") return FrameRole::Transversal;
    if (s == "screen_transversal") return FrameRole::ScreenTransversal;
    if (s == "ambient_only") return FrameRole::AmbientOnly;
    throw FixtureError("unknown frame role '" + s + "'");
}

inline FrameFixture<Rat> parse_fixture(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError(std::string("fixture is not valid JSON: ") + e.what());
    }
    FrameFixture<Rat> fx;
    try {
        fx.name = doc.value("name", "fixture");
        fx.description = doc.value("description", "");
        fx.dim_total = doc.at("dimension").get<std::size_t>();
        std::string conn = doc.value("ambient_connection", "semi_symmetric_non_metric");
        if (conn == "levi_civita")
            fx.ambient = AmbientConnection::LeviCivita;
        else if (conn == "semi_symmetric_non_metric")
            fx.ambient = AmbientConnection::SemiSymmetricNonMetric;
        else
            throw FixtureError(fx.name + ": unknown ambient_connection '" + conn + "'");

        std::map<std::string, std::size_t> index;
        for (const auto& v : doc.at("frame")) {
            typename FrameFixture<Rat>::FrameVec fv{v.at("name").get<std::string>(),
                                                    role_from_string(v.at("role").get<std::string>())};
            if (index.count(fv.name))
                throw FixtureError(fx.name + ": duplicate frame vector '" + fv.name + "'");
            index[fv.name] = fx.frame.size();
            fx.frame.push_back(fv);
        }
        auto idx = [&](const std::string& n) {
            auto it = index.find(n);
            if (it == index.end())
                throw FixtureError(fx.name + ": unknown frame vector '" + n + "'");
            return it->second;
        };
        auto coeffs = [&](const nlohmann::json& obj) {
            std::vector<Rat> v(fx.frame.size(), Rat(0));
            for (auto it = obj.begin(); it != obj.end(); ++it)
                v[idx(it.key())] = parse_rat(it.value().get<std::string>());
            return v;
        };

        fx.metric = Mat<Rat>(fx.frame.size(), fx.frame.size());
        for (const auto& entry : doc.at("metric")) {
            std::size_t i = idx(entry.at(0).get<std::string>());
            std::size_t j = idx(entry.at(1).get<std::string>());
            Rat val = parse_rat(entry.at(2).get<std::string>());
            fx.metric(i, j) = val;
            fx.metric(j, i) = val;
        }
        for (const auto& entry : doc.at("connection")) {
            std::size_t i = idx(entry.at(0).get<std::string>());
            std::size_t j = idx(entry.at(1).get<std::string>());
            fx.connection[{i, j}] = coeffs(entry.at(2));
        }
        if (doc.contains("brackets")) {
            fx.has_brackets = true;
            for (const auto& entry : doc.at("brackets")) {
                std::size_t i = idx(entry.at(0).get<std::string>());
                std::size_t j = idx(entry.at(1).get<std::string>());
                fx.brackets[{i, j}] = coeffs(entry.at(2));
            }
        }
        const auto& xi = doc.at("xi");
        fx.xi_frame.assign(fx.frame.size(), Rat(0));
        fx.xi_a = parse_rat(xi.value("a", "0"));
        fx.xi_b = parse_rat(xi.value("b", "0"));
        fx.xi_e = parse_rat(xi.value("e", "0"));
        fx.xi_frame[fx.radical_index()] = fx.xi_a;
        fx.xi_frame[fx.transversal_index()] = fx.xi_b;
        fx.xi_frame[fx.w_index()] = fx.xi_e;
        if (xi.contains("screen"))
            for (auto it = xi.at("screen").begin(); it != xi.at("screen").end(); ++it) {
                std::size_t i = idx(it.key());
                if (fx.frame[i].role != FrameRole::Screen)
                    throw FixtureError(fx.name + ": xi screen component on non-screen vector");
                fx.xi_frame[i] = parse_rat(it.value().get<std::string>());
            }
        if (doc.contains("evaluation_point"))
            for (auto it = doc.at("evaluation_point").begin(); it != doc.at("evaluation_point").end(); ++it)
                fx.evaluation_point[it.key()] = it.value().get<std::string>();
        if (doc.contains("known_findings"))
            for (const auto& id : doc.at("known_findings"))
                fx.known_findings.push_back(id.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError(std::string("fixture document malformed: ") + e.what());
    }
    fx.validate();
    return fx;
}

template <class S>
FrameFixture<S> convert_fixture(const FrameFixture<Rat>& fx) {
    if constexpr (std::is_same_v<S, Rat>) {
        return fx;
    } else {
        FrameFixture<S> out;
        out.name = fx.name;
        out.description = fx.description;
        out.dim_total = fx.dim_total;
        for (const auto& v : fx.frame) out.frame.push_back({v.name, v.role});
        out.metric = Mat<S>(fx.metric.rows(), fx.metric.cols());
        for (std::size_t i = 0; i < fx.metric.rows(); ++i)
            for (std::size_t j = 0; j < fx.metric.cols(); ++j)
                out.metric(i, j) = scalar_traits<S>::from_rat(fx.metric(i, j));
        auto conv = [](const std::vector<Rat>& v) {
            std::vector<S> o;
            o.reserve(v.size());
            for (const Rat& q : v) o.push_back(scalar_traits<S>::from_rat(q));
            return o;
        };
        for (const auto& [key, v] : fx.connection) out.connection[key] = conv(v);
        for (const auto& [key, v] : fx.brackets) out.brackets[key] = conv(v);
        out.has_brackets = fx.has_brackets;
        out.xi_frame = conv(fx.xi_frame);
        out.xi_a = scalar_traits<S>::from_rat(fx.xi_a);
        out.xi_b = scalar_traits<S>::from_rat(fx.xi_b);
        out.xi_e = scalar_traits<S>::from_rat(fx.xi_e);
        out.ambient = fx.ambient;
        out.evaluation_point = fx.evaluation_point;
        out.known_findings = fx.known_findings;
        return out;
    }
}

/// Resolve a --fixture argument: an existing file path wins, then a bundled
/// name, then `<name>.json` under each directory in SACCURV_FIXTURE_PATH
/// (colon separated).
inline FrameFixture<Rat> load_fixture(const std::string& spec) {
    {
        std::ifstream in(spec);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            return parse_fixture(ss.str());
        }
    }
    for (const auto& b : bundled_fixtures())
        if (spec == b.name) return parse_fixture(b.json);
    if (const char* path = std::getenv("SACCURV_FIXTURE_PATH")) {
        std::string dirs(path);
        std::size_t start = 0;
        while (start <= dirs.size()) {
            std::size_t end = dirs.find(':', start);
            if (end == std::string::npos) end = dirs.size();
            std::string dir = dirs.substr(start, end - start);
            if (!dir.empty()) {
                std::ifstream in(dir + "/" + spec + ".json");
                if (in) {
                    std::stringstream ss;
                    ss << in.rdbuf();
                    return parse_fixture(ss.str());
                }
            }
            start = end + 1;
        }
    }
    throw FixtureError("fixture '" + spec + "' not found (not a file, not bundled, "
                       "not on SACCURV_FIXTURE_PATH)");
}

} // namespace saccurv::framecalc
