#pragma once

// JSON and CSV interchange. Exact rationals render as "p/q". Distribution
// probabilities round-trip: entries given as numbers come back as numbers
// (doubles are stored exactly), entries given as "p/q" come back as strings.

#include <corrsamp/agreement.hpp>
#include <corrsamp/harness.hpp>
#include <corrsamp/rivest.hpp>

#include <nlohmann/json.hpp>

#include <string>

namespace corrsamp {

using Json = nlohmann::json;

// {"n": <int>, "probs": [<number or "p/q">, ...]}
Json distribution_to_json(const DiscreteDistribution& d);
DiscreteDistribution distribution_from_json(const Json& j);

// {"n": <int>, "set": [<int>, ...]} with 1-indexed strictly increasing ids.
Json subset_to_json(const Subset& s);
Subset subset_from_json(const Json& j);

// {"n":, "k":, "matchings": [ [ [[a...],[b...]], ... ], ... ]}
Json decomposition_to_json(const MatchingDecomposition& d);

Json strategy_to_json(const DetStrategy& s);

Json sweep_to_json(const SweepReport& r);
// Fixed columns: delta,bound,empirical,exact,lower,stderr,trials,seed.
std::string sweep_to_csv(const SweepReport& r);

// Flat single-object JSON rendered as a two-line CSV (header, values).
std::string json_object_to_csv(const Json& j);

// File helpers. Parse errors surface as InvalidInputError with location.
Json load_json(const std::string& path);
DiscreteDistribution load_distribution(const std::string& path);
Subset load_subset(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace corrsamp
