#include "tilesplit/scheme_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tilesplit {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required) {
    if (!obj.is_object()) throw ParseError(std::string(where) + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ParseError("unknown field '" + it.key() + "' in " + where);
    }
    for (const char* k : required)
        if (!obj.contains(k))
            throw ParseError(std::string("missing field '") + k + "' in " + where);
}

BigRat rational_from_json(const json& j, const char* where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return BigRat(j.get<long long>());
    throw ParseError(std::string(where) + " must be an integer or a \"p/q\" string");
}

Scalar scalar_from_json(const json& j, const char* where) {
    if (j.is_string()) return Scalar::from_rational(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return Scalar::from_int(j.get<long long>());
    if (j.is_number()) return Scalar::from_double(j.get<double>());
    if (j.is_object()) {
        require_keys(j, where, {"base", "exponent"}, {"base", "exponent"});
        return Scalar::from_power(rational_from_json(j["base"], where),
                                  rational_from_json(j["exponent"], where));
    }
    throw ParseError(std::string(where) +
                     " must be a number, a \"p/q\" string, or a {base, exponent} object");
}

std::vector<double> vector_from_json(const json& j, const char* where) {
    if (!j.is_array()) throw ParseError(std::string(where) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ParseError(std::string(where) + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> matrix_from_json(const json& j, unsigned d, const char* where) {
    if (!j.is_array() || j.size() != d)
        throw ParseError(std::string(where) + " must be an array of " + std::to_string(d) +
                         " rows");
    std::vector<double> out;
    for (const auto& row : j) {
        auto r = vector_from_json(row, where);
        if (r.size() != d)
            throw ParseError(std::string(where) + " rows must have " + std::to_string(d) +
                             " entries");
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

json scalar_to_json(const Scalar& s) {
    if (s.is_rational()) {
        const BigRat& r = s.rational();
        if (boost::multiprecision::denominator(r) == 1 &&
            boost::multiprecision::numerator(r) >= std::numeric_limits<long long>::min() &&
            boost::multiprecision::numerator(r) <= std::numeric_limits<long long>::max())
            return boost::multiprecision::numerator(r).convert_to<long long>();
        return format_rational(r);
    }
    if (s.is_exact()) {
        json j;
        j["base"] = format_rational(s.base());
        j["exponent"] = "1/" + std::to_string(s.root());
        return j;
    }
    return s.to_double();
}

}  // namespace

Scheme parse_scheme(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    require_keys(root, "the top-level object", {"dimension", "prototiles", "rules", "rule_policy"},
                 {"dimension", "prototiles", "rules"});

    Scheme s;
    if (!root["dimension"].is_number_integer() || root["dimension"].get<long long>() <= 0)
        throw ParseError("dimension must be a positive integer");
    s.dimension = root["dimension"].get<unsigned>();

    if (!root["prototiles"].is_array() || root["prototiles"].empty())
        throw ParseError("prototiles must be a non-empty array");
    for (const auto& pj : root["prototiles"]) {
        require_keys(pj, "a prototile", {"label", "volume", "marking_point", "polygon"},
                     {"label", "volume"});
        Prototile p;
        if (!pj["label"].is_string()) throw ParseError("prototile label must be a string");
        p.label = pj["label"].get<std::string>();
        p.volume = scalar_from_json(pj["volume"], "a prototile volume");
        if (pj.contains("marking_point"))
            p.marking_point = vector_from_json(pj["marking_point"], "marking_point");
        if (pj.contains("polygon")) {
            if (!pj["polygon"].is_array()) throw ParseError("polygon must be an array of points");
            for (const auto& v : pj["polygon"])
                p.polygon.push_back(vector_from_json(v, "a polygon point"));
        }
        s.prototiles.push_back(std::move(p));
    }

    s.rules.resize(s.prototiles.size());
    if (!root["rules"].is_array() || root["rules"].empty())
        throw ParseError("rules must be a non-empty array");
    for (const auto& rj : root["rules"]) {
        require_keys(rj, "a rule", {"parent", "children"}, {"parent", "children"});
        if (!rj["parent"].is_string()) throw ParseError("rule parent must be a prototile label");
        std::size_t parent = s.type_index(rj["parent"].get<std::string>());
        if (!rj["children"].is_array() || rj["children"].empty())
            throw ParseError("rule children must be a non-empty array");
        Rule rule;
        for (const auto& cj : rj["children"]) {
            require_keys(cj, "a rule child", {"type", "alpha", "rotation", "translation"},
                         {"type", "alpha"});
            if (!cj["type"].is_string()) throw ParseError("child type must be a prototile label");
            SubstitutionTile st;
            st.child_type = s.type_index(cj["type"].get<std::string>());
            st.placement.scale = scalar_from_json(cj["alpha"], "a child alpha");
            if (cj.contains("rotation"))
                st.placement.rotation = matrix_from_json(cj["rotation"], s.dimension, "rotation");
            if (cj.contains("translation")) {
                st.placement.translation = vector_from_json(cj["translation"], "translation");
                if (st.placement.translation.size() != s.dimension)
                    throw ParseError("translation must have one entry per dimension");
            }
            rule.push_back(std::move(st));
        }
        s.rules[parent].push_back(std::move(rule));
    }

    if (root.contains("rule_policy")) {
        const auto& pj = root["rule_policy"];
        require_keys(pj, "rule_policy", {"kind", "index", "seed"}, {"kind"});
        if (!pj["kind"].is_string()) throw ParseError("rule_policy kind must be a string");
        std::string kind = pj["kind"].get<std::string>();
        if (kind == "fixed")
            s.policy.kind = RulePolicyKind::Fixed;
        else if (kind == "round_robin")
            s.policy.kind = RulePolicyKind::RoundRobin;
        else if (kind == "random")
            s.policy.kind = RulePolicyKind::Random;
        else
            throw ParseError("rule_policy kind must be fixed, round_robin or random");
        if (pj.contains("index")) {
            if (!pj["index"].is_number_integer() || pj["index"].get<long long>() < 0)
                throw ParseError("rule_policy index must be a non-negative integer");
            s.policy.index = pj["index"].get<std::size_t>();
        }
        if (pj.contains("seed")) {
            if (!pj["seed"].is_number_integer() || pj["seed"].get<long long>() < 0)
                throw ParseError("rule_policy seed must be a non-negative integer");
            s.policy.seed = pj["seed"].get<std::uint64_t>();
        }
    }

    // Default marking points: outline barycenter when available, else the
    // midpoint of a unit-volume-scaled interval in one dimension.
    for (Prototile& p : s.prototiles) {
        if (!p.marking_point.empty()) continue;
        if (!p.polygon.empty()) {
            p.marking_point.assign(s.dimension, 0.0);
            for (const auto& v : p.polygon)
                for (unsigned k = 0; k < s.dimension; ++k) p.marking_point[k] += v[k];
            for (double& x : p.marking_point) x /= static_cast<double>(p.polygon.size());
        } else if (s.dimension == 1) {
            p.marking_point = {p.volume.to_double() / 2.0};
        }
    }

    finalize_scheme(s);
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scheme load_scheme(const std::string& path) { return parse_scheme(read_file(path)); }

std::string serialize_scheme(const Scheme& s) {
    json root;
    root["dimension"] = s.dimension;
    root["prototiles"] = json::array();
    for (const Prototile& p : s.prototiles) {
        json pj;
        pj["label"] = p.label;
        pj["volume"] = scalar_to_json(p.volume);
        if (!p.marking_point.empty()) pj["marking_point"] = p.marking_point;
        if (!p.polygon.empty()) pj["polygon"] = p.polygon;
        root["prototiles"].push_back(std::move(pj));
    }
    root["rules"] = json::array();
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        for (const Rule& rule : s.rules[i]) {
            json rj;
            rj["parent"] = s.prototiles[i].label;
            rj["children"] = json::array();
            for (const SubstitutionTile& st : rule) {
                json cj;
                cj["type"] = s.prototiles[st.child_type].label;
                cj["alpha"] = scalar_to_json(st.placement.scale);
                if (!st.placement.rotation.empty()) {
                    json rows = json::array();
                    unsigned d = s.dimension;
                    for (unsigned a = 0; a < d; ++a) {
                        json row = json::array();
                        for (unsigned b = 0; b < d; ++b)
                            row.push_back(st.placement.rotation[a * d + b]);
                        rows.push_back(std::move(row));
                    }
                    cj["rotation"] = std::move(rows);
                }
                if (!st.placement.translation.empty())
                    cj["translation"] = st.placement.translation;
                rj["children"].push_back(std::move(cj));
            }
            root["rules"].push_back(std::move(rj));
        }
    }
    json pol;
    switch (s.policy.kind) {
        case RulePolicyKind::Fixed:
            pol["kind"] = "fixed";
            pol["index"] = s.policy.index;
            break;
        case RulePolicyKind::RoundRobin:
            pol["kind"] = "round_robin";
            break;
        case RulePolicyKind::Random:
            pol["kind"] = "random";
            pol["seed"] = s.policy.seed;
            break;
    }
    root["rule_policy"] = std::move(pol);
    return root.dump(2) + "\n";
}

std::string config_hash(const std::string& json_text) { return fnv1a64_hex(json_text); }

}  // namespace tilesplit
