// The two-sided brace of the 3-dimensional Heisenberg Lie algebra over an odd
// prime field: x∘y = x+y+½[x,y] with [e1,e2]=e3, [e1,e3]=[e2,e3]=0, together
// with the classification of its linear Rota-Baxter operators and a census
// oracle that cross-checks the closed-form classes against brute force.

#pragma once

#include <array>
#include <numeric>

#include "braceforge/rota_baxter.hpp"

namespace braceforge {

// ---------------------------------------------------------------------------
// Prime field arithmetic (table-backed; p odd so that ½ exists)

struct PrimeField {
    int p = 0;
    std::vector<int32_t> add_t, mul_t;  // p x p
    std::vector<int32_t> neg_t, inv_t;  // inv_t[0] unused
    int half = 0;                       // 2⁻¹

    int add(int a, int b) const { return add_t[static_cast<std::size_t>(a) * p + b]; }
    int mul(int a, int b) const { return mul_t[static_cast<std::size_t>(a) * p + b]; }
    int neg(int a) const { return neg_t[static_cast<std::size_t>(a)]; }
    int inv(int a) const { return inv_t[static_cast<std::size_t>(a)]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
};

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline PrimeField make_prime_field(int p) {
    if (!is_prime(p) || p == 2)
        throw std::invalid_argument("prime field: p must be an odd prime");
    PrimeField f;
    f.p = p;
    f.add_t.resize(static_cast<std::size_t>(p) * p);
    f.mul_t.resize(static_cast<std::size_t>(p) * p);
    f.neg_t.resize(static_cast<std::size_t>(p));
    f.inv_t.assign(static_cast<std::size_t>(p), 0);
    for (int a = 0; a < p; ++a) {
        f.neg_t[static_cast<std::size_t>(a)] = static_cast<int32_t>((p - a) % p);
        for (int b = 0; b < p; ++b) {
            f.add_t[static_cast<std::size_t>(a) * p + b] = static_cast<int32_t>((a + b) % p);
            f.mul_t[static_cast<std::size_t>(a) * p + b] = static_cast<int32_t>((a * b) % p);
        }
    }
    for (int a = 1; a < p; ++a)
        for (int b = 1; b < p; ++b)
            if (a * b % p == 1) f.inv_t[static_cast<std::size_t>(a)] = static_cast<int32_t>(b);
    f.half = f.inv(2 % p);
    return f;
}

// ---------------------------------------------------------------------------
// The Heisenberg brace on p³ elements

struct HeisenbergBrace {
    PrimeField field;
    Brace brace;  // two-sided

    int p() const { return field.p; }
    int size() const { return brace.size(); }

    // coordinates (x1,x2,x3) <-> index x1·p² + x2·p + x3
    int encode(int x1, int x2, int x3) const { return (x1 * field.p + x2) * field.p + x3; }
    std::array<int, 3> decode(int x) const {
        int p_ = field.p;
        return {x / (p_ * p_), x / p_ % p_, x % p_};
    }

    // [x,y] = (x1·y2 - x2·y1)·e3
    int bracket_coeff(int x, int y) const {
        auto a = decode(x), b = decode(y);
        return field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0]));
    }
};

inline HeisenbergBrace build_heisenberg_brace(int p) {
    HeisenbergBrace hb;
    hb.field = make_prime_field(p);
    long long n_ll = 1LL * p * p * p;
    if (n_ll > max_carrier())
        throw std::invalid_argument("heisenberg carrier p^3 exceeds the configured bound");
    int n = static_cast<int>(n_ll);

    GroupTable dot, circ;
    dot.n = circ.n = n;
    dot.table.resize(static_cast<std::size_t>(n) * n);
    circ.table.resize(static_cast<std::size_t>(n) * n);
    const PrimeField& f = hb.field;
    for (int x = 0; x < n; ++x) {
        auto a = hb.decode(x);
        for (int y = 0; y < n; ++y) {
            auto b = hb.decode(y);
            int s1 = f.add(a[0], b[0]), s2 = f.add(a[1], b[1]), s3 = f.add(a[2], b[2]);
            dot.set(x, y, hb.encode(s1, s2, s3));
            int br = f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]));
            circ.set(x, y, hb.encode(s1, s2, f.add(s3, f.mul(f.half, br))));
        }
    }
    dot.compute_inverses();
    circ.compute_inverses();
    auto v = validate_brace(std::move(dot), std::move(circ), BraceKind::brace);
    if (!v || !v->two_sided)
        throw std::logic_error("build_heisenberg_brace: construction failed validation");
    hb.brace = std::move(*v.value);
    return hb;
}

// ---------------------------------------------------------------------------
// Linear operators as 3x3 matrices over F_p

struct LinearMap3 {
    std::array<int, 9> m{};  // row-major: m[3r+c] = B_{r+1,c+1}

    int at(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    friend bool operator==(const LinearMap3&, const LinearMap3&) = default;
    friend auto operator<=>(const LinearMap3&, const LinearMap3&) = default;
};

inline CarrierMap linear_to_carrier(const LinearMap3& mat, int p) {
    PrimeField f = make_prime_field(p);
    int n = p * p * p;
    CarrierMap B{n, n, {}};
    B.image.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        int x1 = x / (p * p), x2 = x / p % p, x3 = x % p;
        int y[3];
        for (int r = 0; r < 3; ++r)
            y[r] = f.add(f.add(f.mul(mat.at(r, 0) % p, x1), f.mul(mat.at(r, 1) % p, x2)),
                         f.mul(mat.at(r, 2) % p, x3));
        B.image[static_cast<std::size_t>(x)] = static_cast<int32_t>((y[0] * p + y[1]) * p + y[2]);
    }
    return B;
}

enum class RboClass { class_i, class_ii_iii, enhanced, none };

inline const char* to_string(RboClass c) {
    switch (c) {
        case RboClass::class_i: return "class_i";
        case RboClass::class_ii_iii: return "class_ii_iii";
        case RboClass::enhanced: return "enhanced";
        default: return "none";
    }
}

// Closed-form classification of linear Rota-Baxter operators on the
// Heisenberg brace; the most specific class is reported (enhanced lies
// inside class_i).  Over F_p the real-parameter constraint becomes "the
// quadratic u² - 2·B33·u - B33 = 0 has a root", i.e. B33(B33+1) is a square.
inline RboClass classify_linear_rbo(const LinearMap3& mat, int p) {
    auto md = [&](int v) { return ((v % p) + p) % p; };
    int b11 = md(mat.at(0, 0)), b12 = md(mat.at(0, 1)), b13 = md(mat.at(0, 2));
    int b21 = md(mat.at(1, 0)), b22 = md(mat.at(1, 1)), b23 = md(mat.at(1, 2));
    int b33 = md(mat.at(2, 2));
    if (b13 == 0 && b23 == 0 && b33 == 0) {
        if (b11 == 0 && b12 == 0 && b21 == 0 && b22 == 0) return RboClass::enhanced;
        if (md(b11 * b22 - b12 * b21) == 0) return RboClass::class_i;
        return RboClass::none;
    }
    if (b13 == 0 && b23 == 0 && b12 == 0 && b21 == 0 && b11 == b22 && b33 != 0) {
        int u = b11;
        if (md(u * u - 2 * b33 * u - b33) == 0) return RboClass::class_ii_iii;
    }
    return RboClass::none;
}

// ---------------------------------------------------------------------------
// Census: brute force over all additive maps (= all p⁹ matrices, since over a
// prime field additive maps are linear) cross-checked against the closed-form
// classification.

struct CensusEntry {
    LinearMap3 matrix;
    CarrierMap B;
    bool is_rbo = false;
    bool is_enhanced = false;
    RboClass label = RboClass::none;
};

struct CensusResult {
    int p = 0;
    std::vector<CensusEntry> rbos;  // entries passing the Rota-Baxter check, matrix order
    std::size_t count_class_i = 0, count_class_ii_iii = 0, count_enhanced = 0;
    std::size_t total_maps = 0;
    bool classification_agrees = true;      // {rbo} == {label != none}
    bool enhanced_agrees = true;            // {enhanced} == {label == enhanced}
    std::vector<LinearMap3> disagreements;  // diagnostic, empty on success
};

inline CensusResult census(const HeisenbergBrace& hb, const SemiTrivialAction& adjoint) {
    const int p = hb.p();
    if (p > 5) throw std::invalid_argument("census: p too large for brute force (use 3 or 5)");
    const int n = hb.size();
    const Brace& G = hb.brace;

    CensusResult res;
    res.p = p;
    res.total_maps = 1;
    for (int i = 0; i < 9; ++i) res.total_maps *= static_cast<std::size_t>(p);

    // per-column image tables: col[j][v] = index of B(v·e_{j+1})
    CarrierMap B{n, n, std::vector<int32_t>(static_cast<std::size_t>(n), 0)};
    std::array<std::vector<int>, 3> col;
    LinearMap3 mat{};
    auto refresh_col = [&](int j) {
        col[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(p), 0);
        const PrimeField& f = hb.field;
        for (int v = 0; v < p; ++v)
            col[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)] =
                hb.encode(f.mul(mat.at(0, j), v), f.mul(mat.at(1, j), v), f.mul(mat.at(2, j), v));
    };
    for (int j = 0; j < 3; ++j) refresh_col(j);

    for (std::size_t iter = 0;; ++iter) {
        // assemble the image vector additively from the three columns
        for (int x = 0; x < n; ++x) {
            int x1 = x / (p * p), x2 = x / p % p, x3 = x % p;
            B.image[static_cast<std::size_t>(x)] = static_cast<int32_t>(
                G.dot_at(G.dot_at(col[0][static_cast<std::size_t>(x1)],
                                  col[1][static_cast<std::size_t>(x2)]),
                         col[2][static_cast<std::size_t>(x3)]));
        }
        bool add_ok = !detail::rbo_additive_witness(adjoint, B);
        bool is_rbo = add_ok && !detail::rbo_twisted_witness(adjoint, B);
        bool is_enh = is_rbo && !detail::rbo_enhanced_witness(adjoint, B);
        RboClass label = classify_linear_rbo(mat, p);

        if (is_rbo != (label != RboClass::none) || is_enh != (label == RboClass::enhanced)) {
            res.classification_agrees &= is_rbo == (label != RboClass::none);
            res.enhanced_agrees &= is_enh == (label == RboClass::enhanced);
            res.disagreements.push_back(mat);
        }
        if (is_rbo) {
            res.rbos.push_back(CensusEntry{mat, B, true, is_enh, label});
            switch (label) {
                case RboClass::class_i: ++res.count_class_i; break;
                case RboClass::class_ii_iii: ++res.count_class_ii_iii; break;
                case RboClass::enhanced: ++res.count_enhanced; break;
                default: break;
            }
        }

        // odometer over matrix entries, last entry fastest; entries past the
        // incremented one reset, so every column may change
        int i = 8;
        while (i >= 0) {
            if (++mat.m[static_cast<std::size_t>(i)] < p) break;
            mat.m[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        for (int j = 0; j < 3; ++j) refresh_col(j);
    }
    return res;
}

inline CensusResult census(int p) {
    HeisenbergBrace hb = build_heisenberg_brace(p);
    return census(hb, adjoint_action(hb.brace));
}

// ---------------------------------------------------------------------------
// Exact-rational double check.
//
// The field census could in principle be an artifact of small characteristic,
// so the defining identities are also verified symbolically over Q: entries
// B31, B32 stay free polynomial variables, the diagonal is pinned to a
// rational pair (u, B33).  Since the identities reduce to bilinear relations,
// checking them on basis vectors is exhaustive for linear operators.

struct Rational {
    long long num = 0, den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }
    friend Rational operator+(Rational a, Rational b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(Rational a, Rational b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend bool operator==(const Rational&, const Rational&) = default;
    bool is_zero() const { return num == 0; }
};

// Polynomials over Q in the two free entries; key = (deg b31, deg b32).
struct Poly {
    std::map<std::pair<int, int>, Rational> terms;

    static Poly constant(Rational c) {
        Poly q;
        if (!c.is_zero()) q.terms[{0, 0}] = c;
        return q;
    }
    static Poly variable(int which) {  // 0 -> b31, 1 -> b32
        Poly q;
        q.terms[{which == 0 ? 1 : 0, which == 0 ? 0 : 1}] = Rational(1);
        return q;
    }
    Poly& operator+=(const Poly& o) {
        for (const auto& [k, v] : o.terms) {
            auto it = terms.find(k);
            if (it == terms.end()) {
                if (!v.is_zero()) terms[k] = v;
            } else {
                it->second = it->second + v;
                if (it->second.is_zero()) terms.erase(it);
            }
        }
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (Poly::constant(Rational(-1)) * b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ka, va] : a.terms)
            for (const auto& [kb, vb] : b.terms) {
                auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
                auto it = out.terms.find(key);
                Rational prod = va * vb;
                if (it == out.terms.end()) {
                    if (!prod.is_zero()) out.terms[key] = prod;
                } else {
                    it->second = it->second + prod;
                    if (it->second.is_zero()) out.terms.erase(it);
                }
            }
        return out;
    }
    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const Poly&, const Poly&) = default;
};

using SymVec = std::array<Poly, 3>;

struct RationalCheckResult {
    bool rbo_identity = false;       // B(x)∘B(y) = B(x∘Ad_{B(x)}y) on all basis pairs
    bool enhanced_identity = false;  // (B(x)+z)∘B(y) = B(x∘Ad_{B(x)+z}y)+z on basis triples
};

// Verifies the defining identities for B = [[u,0,0],[0,u,0],[b31,b32,B33]]
// with b31, b32 symbolic.
inline RationalCheckResult rational_heisenberg_check(Rational u, Rational b33) {
    auto vadd = [](const SymVec& x, const SymVec& y) {
        return SymVec{x[0] + y[0], x[1] + y[1], x[2] + y[2]};
    };
    auto bracket = [&](const SymVec& x, const SymVec& y) {
        return SymVec{Poly{}, Poly{}, x[0] * y[1] - x[1] * y[0]};
    };
    Rational half(1, 2);
    auto circ = [&](const SymVec& x, const SymVec& y) {
        SymVec br = bracket(x, y);
        return SymVec{x[0] + y[0], x[1] + y[1],
                      x[2] + y[2] + Poly::constant(half) * br[2]};
    };
    auto adjoint = [&](const SymVec& x, const SymVec& y) { return vadd(y, bracket(x, y)); };
    auto apply_b = [&](const SymVec& x) {
        Poly pu = Poly::constant(u), p33 = Poly::constant(b33);
        return SymVec{pu * x[0], pu * x[1],
                      Poly::variable(0) * x[0] + Poly::variable(1) * x[1] + p33 * x[2]};
    };
    SymVec basis[3];
    for (int i = 0; i < 3; ++i) basis[i][static_cast<std::size_t>(i)] = Poly::constant(Rational(1));

    RationalCheckResult res{true, true};
    for (const auto& x : basis)
        for (const auto& y : basis) {
            SymVec lhs = circ(apply_b(x), apply_b(y));
            SymVec rhs = apply_b(circ(x, adjoint(apply_b(x), y)));
            if (!(lhs == rhs)) res.rbo_identity = false;
            for (const auto& z : basis) {
                SymVec bxz = vadd(apply_b(x), z);
                SymVec l2 = circ(bxz, apply_b(y));
                SymVec r2 = vadd(apply_b(circ(x, adjoint(bxz, y))), z);
                if (!(l2 == r2)) res.enhanced_identity = false;
            }
        }
    return res;
}

}  // namespace braceforge
