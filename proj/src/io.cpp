#include <corrsamp/io.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace corrsamp {

namespace {

// Shortest exact decimal via %.17g; round-trips through strtod.
std::string double_to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const Json& require_field(const Json& j, const char* key) {
    if (!j.is_object()) throw InvalidInputError("expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidInputError(std::string("missing field '") + key + "'");
    return *it;
}

int require_int(const Json& j, const char* key) {
    const Json& v = require_field(j, key);
    if (!v.is_number_integer()) throw InvalidInputError(std::string("field '") + key +
                                                        "' must be an integer");
    return v.get<int>();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

Json distribution_to_json(const DiscreteDistribution& d) {
    Json probs = Json::array();
    for (const Rational& p : d.probs()) {
        if (d.exact_source())
            probs.push_back(rational_to_string(p));
        else
            probs.push_back(rational_to_double(p));  // exact: double-sourced entries are dyadic
    }
    return Json{{"n", d.n()}, {"probs", std::move(probs)}};
}

DiscreteDistribution distribution_from_json(const Json& j) {
    const int n = require_int(j, "n");
    const Json& probs = require_field(j, "probs");
    if (!probs.is_array()) throw InvalidInputError("field 'probs' must be an array");
    bool any_string = false;
    for (const Json& v : probs) {
        if (v.is_string()) any_string = true;
        else if (!v.is_number()) throw InvalidInputError("probabilities must be numbers or 'p/q'");
    }
    if (any_string) {
        std::vector<Rational> out;
        out.reserve(probs.size());
        for (const Json& v : probs)
            out.push_back(v.is_string() ? parse_rational(v.get<std::string>())
                                        : rational_from_double(v.get<double>()));
        return DiscreteDistribution::from_rationals(n, std::move(out));
    }
    std::vector<double> out;
    out.reserve(probs.size());
    for (const Json& v : probs) out.push_back(v.get<double>());
    return DiscreteDistribution::from_doubles(n, out);
}

Json subset_to_json(const Subset& s) {
    return Json{{"n", s.universe()}, {"set", s.elements()}};
}

Subset subset_from_json(const Json& j) {
    const int n = require_int(j, "n");
    const Json& set = require_field(j, "set");
    if (!set.is_array()) throw InvalidInputError("field 'set' must be an array");
    std::vector<int> elems;
    elems.reserve(set.size());
    for (const Json& v : set) {
        if (!v.is_number_integer()) throw InvalidInputError("set elements must be integers");
        elems.push_back(v.get<int>());
    }
    return Subset(Universe(n), std::move(elems));
}

Json decomposition_to_json(const MatchingDecomposition& d) {
    Json matchings = Json::array();
    for (const auto& m : d.matchings) {
        Json edges = Json::array();
        for (std::size_t u = 0; u < m.size(); ++u)
            edges.push_back(Json::array({d.graph.vertices[u], d.graph.vertices[m[u]]}));
        matchings.push_back(std::move(edges));
    }
    return Json{{"n", d.graph.n}, {"k", d.graph.k}, {"matchings", std::move(matchings)}};
}

Json strategy_to_json(const DetStrategy& s) {
    if (s.order_backed()) return Json{{"n", s.n()}, {"kind", "order"}, {"sigma", s.sigma()}};
    Json choices = Json::array();
    for (const auto& [set, pick] : s.table())
        choices.push_back(Json{{"set", set}, {"pick", pick}});
    return Json{{"n", s.n()}, {"kind", "table"}, {"choices", std::move(choices)}};
}

Json sweep_to_json(const SweepReport& r) {
    Json rows = Json::array();
    for (const SweepRow& row : r.rows) {
        rows.push_back(Json{{"delta", rational_to_string(row.delta)},
                            {"bound", rational_to_string(row.bound)},
                            {"empirical", row.empirical},
                            {"exact", rational_to_string(row.exact)},
                            {"lower", rational_to_string(row.lower)},
                            {"stderr", row.std_error},
                            {"trials", row.trials},
                            {"seed", row.seed}});
    }
    return Json{{"strategy", to_string(r.kind)}, {"rows", std::move(rows)}};
}

std::string sweep_to_csv(const SweepReport& r) {
    std::ostringstream os;
    os << "delta,bound,empirical,exact,lower,stderr,trials,seed\n";
    for (const SweepRow& row : r.rows) {
        os << rational_to_string(row.delta) << ',' << rational_to_string(row.bound) << ','
           << double_to_string(row.empirical) << ',' << rational_to_string(row.exact) << ','
           << rational_to_string(row.lower) << ',' << double_to_string(row.std_error) << ','
           << row.trials << ',' << row.seed << '\n';
    }
    return os.str();
}

std::string json_object_to_csv(const Json& j) {
    if (!j.is_object()) throw InvalidInputError("CSV rendering needs a flat JSON object");
    std::ostringstream head, body;
    bool first = true;
    for (const auto& [key, value] : j.items()) {
        if (!first) {
            head << ',';
            body << ',';
        }
        first = false;
        head << csv_escape(key);
        if (value.is_string())
            body << csv_escape(value.get<std::string>());
        else if (value.is_number_float())
            body << double_to_string(value.get<double>());
        else
            body << csv_escape(value.dump());
    }
    head << '\n';
    return head.str() + body.str() + "\n";
}

Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInputError("invalid JSON in '" + path + "': " + e.what());
    }
}

DiscreteDistribution load_distribution(const std::string& path) {
    return distribution_from_json(load_json(path));
}

Subset load_subset(const std::string& path) {
    return subset_from_json(load_json(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw InvalidInputError("failed writing '" + path + "'");
}

}  // namespace corrsamp
