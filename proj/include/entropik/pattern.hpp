#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "entropik/adjugate.hpp"
#include "entropik/field.hpp"
#include "entropik/rng.hpp"

namespace entropik {

enum class PatternKind { General, Symmetric, Cyclic, CyclicSymmetric, Custom };

inline std::string kind_name(PatternKind k) {
    switch (k) {
        case PatternKind::General: return "general";
        case PatternKind::Symmetric: return "symmetric";
        case PatternKind::Cyclic: return "cyclic";
        case PatternKind::CyclicSymmetric: return "cyclic_symmetric";
        case PatternKind::Custom: return "custom";
    }
    return "?";
}

inline PatternKind kind_from_string(const std::string& s) {
    if (s == "g" || s == "general") return PatternKind::General;
    if (s == "s" || s == "symmetric") return PatternKind::Symmetric;
    if (s == "c" || s == "cyclic") return PatternKind::Cyclic;
    if (s == "cs" || s == "cyclic_symmetric") return PatternKind::CyclicSymmetric;
    if (s == "custom") return PatternKind::Custom;
    throw std::invalid_argument("unknown pattern kind: " + s);
}

// A pattern is a partition of the q x q matrix cells; cells in one class are
// constrained to carry equal values.  The class values are the homogeneous
// coordinates of the reduced projective space.
class Pattern {
public:
    Pattern(int q, PatternKind kind, std::vector<int> classes)
        : q_(q), kind_(kind), classes_(std::move(classes)) {
        if (q < 2) throw std::invalid_argument("Pattern: q must be >= 2");
        if ((int)classes_.size() != q * q) throw std::invalid_argument("Pattern: class map size");
        p_ = 0;
        for (int c : classes_) {
            if (c < 0) throw std::invalid_argument("Pattern: negative class");
            p_ = std::max(p_, c + 1);
        }
        std::vector<char> seen(p_, 0);
        for (int c : classes_) seen[c] = 1;
        if (std::find(seen.begin(), seen.end(), 0) != seen.end())
            throw std::invalid_argument("Pattern: classes not surjective");
        validate_kind();
    }

    int q() const { return q_; }
    int num_classes() const { return p_; }
    PatternKind kind() const { return kind_; }
    int class_of(int i, int j) const { return classes_[i * q_ + j]; }
    const std::vector<int>& classes() const { return classes_; }

    // A representative cell per class.
    std::vector<std::pair<int, int>> representatives() const {
        std::vector<std::pair<int, int>> rep(p_, {-1, -1});
        for (int i = 0; i < q_; ++i)
            for (int j = 0; j < q_; ++j)
                if (rep[class_of(i, j)].first < 0) rep[class_of(i, j)] = {i, j};
        return rep;
    }

    template <class T>
    std::vector<std::vector<T>> matrix_from_classes(const std::vector<T>& x) const {
        if ((int)x.size() != p_) throw std::invalid_argument("matrix_from_classes: arity");
        std::vector<std::vector<T>> m(q_, std::vector<T>(q_));
        for (int i = 0; i < q_; ++i)
            for (int j = 0; j < q_; ++j) m[i][j] = x[class_of(i, j)];
        return m;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["q"] = q_;
        j["kind"] = kind_name(kind_);
        j["classes"] = classes_;
        return j;
    }

    static Pattern from_json(const nlohmann::json& j) {
        return Pattern(j.at("q").get<int>(), kind_from_string(j.at("kind").get<std::string>()),
                       j.at("classes").get<std::vector<int>>());
    }

private:
    void validate_kind() const {
        auto cls = [&](int i, int j) { return class_of(((i % q_) + q_) % q_, ((j % q_) + q_) % q_); };
        if (kind_ == PatternKind::Symmetric || kind_ == PatternKind::CyclicSymmetric) {
            for (int i = 0; i < q_; ++i)
                for (int j = 0; j < q_; ++j)
                    if (cls(i, j) != cls(j, i)) throw std::invalid_argument("Pattern: not symmetric");
        }
        if (kind_ == PatternKind::Cyclic || kind_ == PatternKind::CyclicSymmetric) {
            for (int i = 0; i < q_; ++i)
                for (int j = 0; j < q_; ++j)
                    if (cls(i, j) != cls(i + 1, j + 1)) throw std::invalid_argument("Pattern: not cyclic");
        }
    }

    int q_;
    PatternKind kind_;
    std::vector<int> classes_;
    int p_;
};

inline int cs_class_count(int q) { return q % 2 == 0 ? q / 2 + 1 : (q + 1) / 2; }

inline Pattern build_pattern(int q, PatternKind kind) {
    if (q < 3) throw std::invalid_argument("build_pattern: q must be >= 3");
    std::vector<int> cls(q * q);
    switch (kind) {
        case PatternKind::General:
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) cls[i * q + j] = i * q + j;
            break;
        case PatternKind::Symmetric: {
            std::map<std::pair<int, int>, int> idx;
            int next = 0;
            for (int i = 0; i < q; ++i)
                for (int j = i; j < q; ++j) idx[{i, j}] = next++;
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) cls[i * q + j] = idx[{std::min(i, j), std::max(i, j)}];
            break;
        }
        case PatternKind::Cyclic:
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) cls[i * q + j] = ((j - i) % q + q) % q;
            break;
        case PatternKind::CyclicSymmetric:
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) {
                    int d = ((j - i) % q + q) % q;
                    cls[i * q + j] = std::min(d, q - d);
                }
            break;
        case PatternKind::Custom:
            throw std::invalid_argument("build_pattern: custom patterns need an explicit class map");
    }
    return Pattern(q, kind, std::move(cls));
}

// Monte-Carlo admissibility: the pattern is stable under the cofactor map if
// for random class values the cofactor matrix again respects the pattern.
inline bool check_admissible(const Pattern& pat, int trials = 5, u64 seed = 1) {
    PrimeField f = find_field_with_root(2, 60);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<u64> x(pat.num_classes());
        for (auto& v : x) v = 1 + rng.below(f.modulus() - 1);
        FieldMat m = pat.matrix_from_classes(x);
        u64 det = 0;
        FieldMat cof = field_cofactor_matrix(f, m, &det);
        if (det == 0) {
            --t;  // degenerate sample; retry
            continue;
        }
        std::vector<u64> rep(pat.num_classes(), 0);
        std::vector<char> seen(pat.num_classes(), 0);
        for (int i = 0; i < pat.q(); ++i)
            for (int j = 0; j < pat.q(); ++j) {
                int c = pat.class_of(i, j);
                if (!seen[c]) {
                    seen[c] = 1;
                    rep[c] = cof[i][j];
                } else if (rep[c] != cof[i][j]) {
                    return false;
                }
            }
    }
    return true;
}

}  // namespace entropik
