#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace entropik {

enum class Granularity { Half, Full };

inline std::string granularity_name(Granularity g) { return g == Granularity::Half ? "half" : "full"; }

// Degree sequence d_0, d_1, ... of map iterates, at half-step (per
// elementary involution) or full-step (per K) granularity.
struct DegreeRecord {
    Granularity granularity = Granularity::Full;
    std::string pattern;  // pattern kind name
    int q = 0;
    std::string method;  // "line" | "surface" | "recurrence"
    std::vector<mpz_class> values;
    std::vector<int> flags;  // indices where independent trials disagreed

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["pattern"] = pattern;
        j["q"] = q;
        j["granularity"] = granularity_name(granularity);
        j["method"] = method;
        nlohmann::ordered_json vals = nlohmann::ordered_json::array();
        for (const auto& v : values) vals.push_back(v.get_str());
        j["degrees"] = vals;
        j["flags"] = flags;
        return j;
    }
};

// The even-index subsequence: degrees of K^n.
inline DegreeRecord full_view(const DegreeRecord& half) {
    if (half.granularity == Granularity::Full) return half;
    DegreeRecord f = half;
    f.granularity = Granularity::Full;
    f.values.clear();
    f.flags.clear();
    for (std::size_t i = 0; i < half.values.size(); i += 2) f.values.push_back(half.values[i]);
    for (int idx : half.flags)
        if (idx % 2 == 0) f.flags.push_back(idx / 2);
    return f;
}

// Exponents u_n^i, v_n^i of the factored coordinate forms, per class.
struct ExponentRecord {
    int q = 0;
    std::vector<std::vector<mpz_class>> u;  // u[class][n]
    std::vector<std::vector<mpz_class>> v;  // v[class][n]

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        auto emit = [](const std::vector<std::vector<mpz_class>>& a) {
            nlohmann::ordered_json out;
            for (std::size_t c = 0; c < a.size(); ++c) {
                nlohmann::ordered_json vals = nlohmann::ordered_json::array();
                for (const auto& x : a[c]) vals.push_back(x.get_str());
                out[std::to_string(c)] = vals;
            }
            return out;
        };
        j["u"] = emit(u);
        j["v"] = emit(v);
        return j;
    }
};

struct ComplexityEstimate {
    double lambda = 1.0;
    double entropy = 0.0;
    std::string method;  // "recurrence" | "genfun" | "arithmetic"
    double uncertainty = 0.0;
    std::vector<long long> exact_poly;  // optional: integer poly with root 1/lambda (lowest degree first)
    int growth_order = -1;              // polynomial growth order when lambda == 1

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["lambda"] = lambda;
        j["entropy"] = entropy;
        j["method"] = method;
        j["uncertainty"] = uncertainty;
        if (!exact_poly.empty()) j["exact_poly"] = exact_poly;
        if (growth_order >= 0) j["growth_order"] = growth_order;
        return j;
    }
};

}  // namespace entropik
