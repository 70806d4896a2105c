#pragma once

#include <stdexcept>
#include <vector>

#include "entropik/adjugate.hpp"
#include "entropik/field.hpp"
#include "entropik/pattern.hpp"

namespace entropik {

// The linear change of coordinates conjugating the matrix inverse to the
// Hadamard inverse on cyclic symmetric patterns.  Over a field containing a
// primitive q-th root of unity, C has integer-like entries w^{rs} + w^{-rs}
// and satisfies C^2 = q * Id (the identity projectively).
class CMatrix {
public:
    CMatrix(const Pattern& pat, const PrimeField& field) : field_(field), q_(pat.q()) {
        if (pat.kind() != PatternKind::CyclicSymmetric)
            throw std::invalid_argument("CMatrix: pattern must be cyclic symmetric");
        if (field.root_order() != (u64)q_)
            throw std::invalid_argument("CMatrix: field lacks a primitive q-th root of unity");
        p_ = pat.num_classes();
        bool even = q_ % 2 == 0;
        entries_.assign(p_, std::vector<u64>(p_, 0));
        for (int r = 0; r < p_; ++r) {
            entries_[r][0] = 1;
            int smax = even ? p_ - 2 : p_ - 1;
            for (int s = 1; s <= smax; ++s)
                entries_[r][s] = field_.add(field_.root_pow((long long)r * s), field_.root_pow(-(long long)r * s));
            if (even) entries_[r][p_ - 1] = (r % 2 == 0) ? 1 : field_.neg(1);
        }
        verify();
    }

    const PrimeField& field() const { return field_; }
    int q() const { return q_; }
    int dim() const { return p_; }
    const FieldMat& entries() const { return entries_; }
    u64 at(int r, int s) const { return entries_[r][s]; }

    std::vector<u64> apply(const std::vector<u64>& x) const {
        if ((int)x.size() != p_) throw std::invalid_argument("CMatrix::apply arity");
        std::vector<u64> y(p_, 0);
        for (int r = 0; r < p_; ++r)
            for (int s = 0; s < p_; ++s) y[r] = field_.add(y[r], field_.mul(entries_[r][s], x[s]));
        return y;
    }

private:
    void verify() const {
        u64 qmod = (u64)q_ % field_.modulus();
        for (int i = 0; i < p_; ++i) {
            for (int j = 0; j < p_; ++j) {
                u64 s = 0;
                for (int k = 0; k < p_; ++k) s = field_.add(s, field_.mul(entries_[i][k], entries_[k][j]));
                if (s != (i == j ? qmod : 0)) throw std::logic_error("CMatrix: C^2 != q*Id");
            }
        }
    }

    PrimeField field_;
    int q_;
    int p_;
    FieldMat entries_;
};

struct SingularPointSet {
    // P[k]: the coordinate points, Q[k] = C.P[k], R[s] = I(P[s]) for
    // s = 1..p-1 (index 0 unused; I fixes P[0]).  Pi[k] is the coordinate
    // hyperplane {x_k = 0}, stored by its variable index.
    std::vector<std::vector<u64>> P, Q, R;
    std::vector<int> Pi;
    std::vector<std::vector<long long>> R_signed;  // symmetric lifts (+-1 vectors)
};

// Scale a projective field vector so its first nonzero coordinate is 1.
inline std::vector<u64> proj_normalize(const PrimeField& f, std::vector<u64> v) {
    for (auto& x : v) x %= f.modulus();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0) {
            u64 s = f.inv(v[i]);
            for (auto& x : v) x = f.mul(x, s);
            return v;
        }
    }
    return v;
}

inline bool proj_equal(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    return proj_normalize(f, a) == proj_normalize(f, b);
}

inline SingularPointSet singular_points(const Pattern& pat, const PrimeField& field) {
    if (pat.kind() != PatternKind::CyclicSymmetric)
        throw std::invalid_argument("singular_points: pattern must be cyclic symmetric");
    CMatrix C(pat, field);
    int p = pat.num_classes();
    SingularPointSet out;
    for (int k = 0; k < p; ++k) {
        std::vector<u64> e(p, 0);
        e[k] = 1;
        out.P.push_back(e);
        out.Q.push_back(proj_normalize(field, C.apply(e)));
        out.Pi.push_back(k);
    }
    out.R.resize(p);
    out.R_signed.resize(p);
    for (int s = 1; s < p; ++s) {
        // I(P_s): cofactor matrix of the pattern matrix at the unit vector,
        // read back through class representatives.
        FieldMat m = pat.matrix_from_classes(out.P[s]);
        FieldMat cof = field_cofactor_matrix(field, m);
        std::vector<u64> img(p);
        auto rep = pat.representatives();
        for (int c = 0; c < p; ++c) img[c] = cof[rep[c].first][rep[c].second];
        img = proj_normalize(field, img);
        out.R[s] = img;
        std::vector<long long> lifted(p);
        for (int c = 0; c < p; ++c) lifted[c] = field.lift_signed(img[c]);
        out.R_signed[s] = lifted;
    }
    return out;
}

}  // namespace entropik
