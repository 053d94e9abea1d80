// Braces, skew braces and their basic constructions.
//
// A brace (G,·,∘) is one carrier with two group tables sharing the identity,
// linked by a∘(b·c) = (a∘b)·a⁻¹·(a∘c); "skew" drops commutativity of the dot
// group, "two-sided" additionally asks (a·b)∘c = (a∘c)·c⁻¹·(b∘c).

#pragma once

#include <concepts>
#include <map>
#include <set>

#include "braceforge/core.hpp"

namespace braceforge {

// Total map between carriers; not necessarily bijective.
struct CarrierMap {
    int src_n = 0;
    int dst_n = 0;
    std::vector<int32_t> image;

    int operator()(int a) const { return image[static_cast<std::size_t>(a)]; }
    friend bool operator==(const CarrierMap&, const CarrierMap&) = default;
    friend auto operator<=>(const CarrierMap& x, const CarrierMap& y) {
        return x.image <=> y.image;
    }
};

inline CarrierMap make_carrier_map(int src_n, int dst_n, std::vector<int32_t> image) {
    if (static_cast<int>(image.size()) != src_n)
        throw std::invalid_argument("carrier map image has wrong length");
    for (int32_t v : image)
        if (v < 0 || v >= dst_n) throw std::invalid_argument("carrier map image out of range");
    return CarrierMap{src_n, dst_n, std::move(image)};
}

inline CarrierMap identity_map(int n) {
    CarrierMap m{n, n, {}};
    m.image.resize(static_cast<std::size_t>(n));
    std::iota(m.image.begin(), m.image.end(), 0);
    return m;
}

inline CarrierMap constant_map(int src_n, int dst_n, int value = 0) {
    CarrierMap m{src_n, dst_n, {}};
    m.image.assign(static_cast<std::size_t>(src_n), static_cast<int32_t>(value));
    return m;
}

enum class BraceKind { brace, skew_brace };

struct Brace {
    GroupTable dot;
    GroupTable circ;
    BraceKind kind = BraceKind::brace;
    bool two_sided = false;

    int size() const { return dot.n; }
    int dot_at(int a, int b) const { return dot.at(a, b); }
    int circ_at(int a, int b) const { return circ.at(a, b); }
    int dot_inv(int a) const { return dot.inverse(a); }
    int circ_inv(int a) const { return circ.inverse(a); }
    int unit() const { return 0; }

    // λ-map evaluation: a ▷ b = a⁻¹·(a∘b)
    int lambda(int a, int b) const { return dot.at(dot.inverse(a), circ.at(a, b)); }

    friend bool operator==(const Brace&, const Brace&) = default;
};

// Structures that expose brace operations pointwise.  Lets the generic ideal
// and factorization tests run against table-backed braces and against
// transported structures whose tables are better evaluated on the fly.
template <class V>
concept BraceOps = requires(const V v, int a, int b) {
    { v.size() } -> std::convertible_to<int>;
    { v.dot_at(a, b) } -> std::convertible_to<int>;
    { v.circ_at(a, b) } -> std::convertible_to<int>;
    { v.dot_inv(a) } -> std::convertible_to<int>;
    { v.circ_inv(a) } -> std::convertible_to<int>;
    { v.unit() } -> std::convertible_to<int>;
};

template <BraceOps V>
int lambda_at(const V& v, int a, int b) {
    return v.dot_at(v.dot_inv(a), v.circ_at(a, b));
}

// ---------------------------------------------------------------------------
// validate_brace

namespace detail {

// Lexicographically first triple violating a∘(b·c) = (a∘b)·a⁻¹·(a∘c).
inline std::optional<std::vector<int>> brace_law_witness(const GroupTable& dot,
                                                         const GroupTable& circ) {
    int n = dot.n;
    return scan_outer(n, [&](int a) -> std::optional<std::vector<int>> {
        const int inva = dot.inverse(a);
        const int32_t* circ_a = circ.row(a);
        for (int b = 0; b < n; ++b) {
            const int32_t* dot_b = dot.row(b);
            const int32_t* dot_u = dot.row(dot.at(circ_a[b], inva));  // (a∘b)·a⁻¹
            for (int c = 0; c < n; ++c)
                if (circ_a[dot_b[c]] != dot_u[circ_a[c]]) return std::vector<int>{a, b, c};
        }
        return std::nullopt;
    });
}

// Lexicographically first triple violating (a·b)∘c = (a∘c)·c⁻¹·(b∘c).
inline std::optional<std::vector<int>> two_sided_witness(const GroupTable& dot,
                                                         const GroupTable& circ) {
    int n = dot.n;
    return scan_outer(n, [&](int a) -> std::optional<std::vector<int>> {
        const int32_t* circ_a = circ.row(a);
        for (int b = 0; b < n; ++b) {
            const int32_t* circ_ab = circ.row(dot.at(a, b));
            const int32_t* circ_b = circ.row(b);
            for (int c = 0; c < n; ++c) {
                int rhs = dot.at(dot.at(circ_a[c], dot.inverse(c)), circ_b[c]);
                if (circ_ab[c] != rhs) return std::vector<int>{a, b, c};
            }
        }
        return std::nullopt;
    });
}

}  // namespace detail

inline Validated<Brace> validate_brace(GroupTable dot, GroupTable circ,
                                       BraceKind kind = BraceKind::brace) {
    Stopwatch timer;
    Validated<Brace> out;
    Report& rep = out.report;
    rep.subject = kind == BraceKind::brace ? "brace" : "skew-brace";

    if (dot.n != circ.n) {
        rep.structural = "dot and circ tables live on different carriers";
        return out;
    }
    Report dot_rep = validate_group(dot);
    if (!dot_rep.ok()) {
        rep = dot_rep;
        rep.subject = "brace:dot-group";
        return out;
    }
    Report circ_rep = validate_group(circ);
    if (!circ_rep.ok()) {
        rep = circ_rep;
        rep.subject = "brace:circ-group";
        return out;
    }
    // Identity index 0 is shared by construction of GroupTable; both group
    // validations above pin it.

    if (kind == BraceKind::brace) {
        if (!dot.is_abelian()) {
            int wa = -1, wb = -1;
            for (int a = 0; a < dot.n && wa < 0; ++a)
                for (int b = a + 1; b < dot.n; ++b)
                    if (dot.at(a, b) != dot.at(b, a)) {
                        wa = a;
                        wb = b;
                        break;
                    }
            rep.add("dot-abelian", false, {wa, wb});
            return out;
        }
        rep.add("dot-abelian", true);
    }

    auto w1 = detail::brace_law_witness(dot, circ);
    rep.add("brace-law", !w1, w1.value_or(std::vector<int>{}),
            "a∘(b·c) = (a∘b)·a⁻¹·(a∘c)");
    if (w1) return out;

    // Two-sidedness is cached as its own verdict; failing it does not stop
    // the brace from being constructed.
    auto w2 = detail::two_sided_witness(dot, circ);
    rep.add("two-sided", !w2, w2.value_or(std::vector<int>{}),
            "(a·b)∘c = (a∘c)·c⁻¹·(b∘c)");

    Brace b;
    b.dot = std::move(dot);
    b.circ = std::move(circ);
    b.kind = kind;
    b.two_sided = !w2;
    rep.seconds = timer.seconds();
    out.value = std::move(b);
    return out;
}

// The λ-map of a as a permutation: b ↦ a⁻¹·(a∘b).
inline Permutation lambda_map(const Brace& g, int a) {
    Permutation p;
    p.image.resize(static_cast<std::size_t>(g.size()));
    for (int b = 0; b < g.size(); ++b) p.image[static_cast<std::size_t>(b)] = static_cast<int32_t>(g.lambda(a, b));
    return p;
}

// Ψ preserves both operations.
inline bool is_brace_hom(const Brace& src, const Brace& dst, const CarrierMap& psi) {
    if (psi.src_n != src.size() || psi.dst_n != dst.size())
        throw std::invalid_argument("is_brace_hom: carrier mismatch");
    for (int a = 0; a < src.size(); ++a)
        for (int b = 0; b < src.size(); ++b) {
            if (psi(src.dot_at(a, b)) != dst.dot_at(psi(a), psi(b))) return false;
            if (psi(src.circ_at(a, b)) != dst.circ_at(psi(a), psi(b))) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Ideals

namespace detail {

template <BraceOps V>
bool is_dot_subgroup(const V& v, const std::vector<int>& subset, const std::vector<char>& in) {
    if (subset.empty() || !in[static_cast<std::size_t>(v.unit())]) return false;
    for (int a : subset)
        for (int b : subset)
            if (!in[static_cast<std::size_t>(v.dot_at(a, b))]) return false;
    for (int a : subset)
        if (!in[static_cast<std::size_t>(v.dot_inv(a))]) return false;
    return true;
}

template <BraceOps V>
std::vector<char> subset_mask(const V& v, const std::vector<int>& subset) {
    std::vector<char> in(static_cast<std::size_t>(v.size()), 0);
    for (int a : subset) {
        if (a < 0 || a >= v.size()) throw std::invalid_argument("subset element out of range");
        in[static_cast<std::size_t>(a)] = 1;
    }
    return in;
}

}  // namespace detail

// Left ideal: a dot-subgroup stable under every λ-map.
template <BraceOps V>
bool is_left_ideal(const V& v, const std::vector<int>& subset) {
    auto in = detail::subset_mask(v, subset);
    if (!detail::is_dot_subgroup(v, subset, in)) return false;
    for (int a = 0; a < v.size(); ++a)
        for (int b : subset)
            if (!in[static_cast<std::size_t>(lambda_at(v, a, b))]) return false;
    return true;
}

// Ideal: left ideal, normal in (G,·) and closed and normal in (G,∘).
template <BraceOps V>
bool is_ideal(const V& v, const std::vector<int>& subset) {
    if (!is_left_ideal(v, subset)) return false;
    auto in = detail::subset_mask(v, subset);
    for (int a = 0; a < v.size(); ++a)
        for (int b : subset) {
            if (!in[static_cast<std::size_t>(v.dot_at(v.dot_at(a, b), v.dot_inv(a)))]) return false;
            if (!in[static_cast<std::size_t>(v.circ_at(v.circ_at(a, b), v.circ_inv(a)))]) return false;
        }
    for (int a : subset)
        for (int b : subset)
            if (!in[static_cast<std::size_t>(v.circ_at(a, b))]) return false;
    return true;
}

// All dot-subgroups (as sorted element lists), by breadth-first closure over
// extensions by one element.  Intended for ideal searches at desk scale.
inline std::vector<std::vector<int>> enumerate_dot_subgroups(const Brace& g) {
    if (g.size() > 64)
        throw std::invalid_argument("subgroup enumeration capped at carrier size 64");
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> queue;
    std::vector<int> trivial{0};
    seen.insert(trivial);
    queue.push_back(trivial);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::vector<int> base = queue[i];
        for (int x = 1; x < g.size(); ++x) {
            if (std::binary_search(base.begin(), base.end(), x)) continue;
            std::vector<int> gens = base;
            gens.push_back(x);
            std::vector<int> sub = detail::closure(g.dot, gens);
            if (seen.insert(sub).second) queue.push_back(sub);
        }
    }
    std::vector<std::vector<int>> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Quotient by an ideal

struct QuotientBrace {
    Brace brace;
    CarrierMap projection;  // original carrier -> coset index
};

inline QuotientBrace quotient_brace(const Brace& g, const std::vector<int>& ideal) {
    if (!is_ideal(g, ideal)) throw std::invalid_argument("quotient_brace: subset is not an ideal");
    int n = g.size();
    auto in = detail::subset_mask(g, ideal);

    // dot-cosets, indexed by smallest member with the identity coset first
    std::vector<int> coset_of(static_cast<std::size_t>(n), -1);
    std::vector<int> reps;
    for (int a = 0; a < n; ++a) {
        if (coset_of[static_cast<std::size_t>(a)] >= 0) continue;
        int idx = static_cast<int>(reps.size());
        reps.push_back(a);
        for (int i : ideal) coset_of[static_cast<std::size_t>(g.dot_at(a, i))] = idx;
        if (coset_of[static_cast<std::size_t>(a)] != idx)
            throw std::logic_error("quotient_brace: cosets do not partition the carrier");
    }
    int q = static_cast<int>(reps.size());

    // well-definedness of both operations on cosets (verified, not assumed)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int i : ideal) {
                if (coset_of[static_cast<std::size_t>(g.dot_at(g.dot_at(a, i), b))] !=
                        coset_of[static_cast<std::size_t>(g.dot_at(a, b))] ||
                    coset_of[static_cast<std::size_t>(g.circ_at(g.circ_at(a, i), b))] !=
                        coset_of[static_cast<std::size_t>(g.circ_at(a, b))] ||
                    coset_of[static_cast<std::size_t>(g.circ_at(a, g.circ_at(b, i)))] !=
                        coset_of[static_cast<std::size_t>(g.circ_at(a, b))])
                    throw std::logic_error("quotient_brace: operation not well-defined on cosets");
            }

    GroupTable qdot, qcirc;
    qdot.n = qcirc.n = q;
    qdot.table.resize(static_cast<std::size_t>(q) * q);
    qcirc.table.resize(static_cast<std::size_t>(q) * q);
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y) {
            qdot.set(x, y, coset_of[static_cast<std::size_t>(g.dot_at(reps[x], reps[y]))]);
            qcirc.set(x, y, coset_of[static_cast<std::size_t>(g.circ_at(reps[x], reps[y]))]);
        }
    qdot.compute_inverses();
    qcirc.compute_inverses();

    auto validated = validate_brace(std::move(qdot), std::move(qcirc), g.kind);
    if (!validated) throw std::logic_error("quotient_brace: quotient failed brace validation");

    QuotientBrace out{std::move(*validated.value), CarrierMap{n, q, {}}};
    out.projection.image.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        out.projection.image[static_cast<std::size_t>(a)] = static_cast<int32_t>(coset_of[static_cast<std::size_t>(a)]);
    if (!is_brace_hom(g, out.brace, out.projection))
        throw std::logic_error("quotient_brace: projection is not a brace homomorphism");
    return out;
}

// Restriction of a brace to a sub-brace given by a closed subset.
// Element i of the result is subset[i] (subset must be sorted, contain the
// unit, and be closed under both operations and inverses).
inline Brace sub_brace(const Brace& g, const std::vector<int>& subset) {
    int m = static_cast<int>(subset.size());
    if (m == 0 || subset[0] != 0)
        throw std::invalid_argument("sub_brace: subset must contain the unit (index 0 first)");
    std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(subset[i])] = i;
    GroupTable dot, circ;
    dot.n = circ.n = m;
    dot.table.resize(static_cast<std::size_t>(m) * m);
    circ.table.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int d = pos[static_cast<std::size_t>(g.dot_at(subset[i], subset[j]))];
            int c = pos[static_cast<std::size_t>(g.circ_at(subset[i], subset[j]))];
            if (d < 0 || c < 0) throw std::invalid_argument("sub_brace: subset is not closed");
            dot.set(i, j, d);
            circ.set(i, j, c);
        }
    dot.compute_inverses();
    circ.compute_inverses();
    auto validated = validate_brace(std::move(dot), std::move(circ), g.kind);
    if (!validated) throw std::logic_error("sub_brace: restriction failed brace validation");
    return *validated.value;
}

// ---------------------------------------------------------------------------
// Semi-direct product along a semi-trivial action.
//
//   (h,a)·(k,b) = (h·k, a·b),   (h,a)∘(k,b) = (h∘Φ(a)k, a∘b)
//
// Pair index (h,a) = h·|G|+a.  phi must be a validated semi-trivial action
// of G on H (each phi[a] a brace automorphism of H, multiplicative in ∘).

inline Brace semidirect_product(const Brace& G, const Brace& H,
                                const std::vector<Permutation>& phi) {
    if (G.kind != BraceKind::brace || H.kind != BraceKind::brace)
        throw std::invalid_argument("semidirect_product: requires braces (dot abelian)");
    if (static_cast<int>(phi.size()) != G.size())
        throw std::invalid_argument("semidirect_product: action has wrong length");
    int nG = G.size(), nH = H.size(), n = nG * nH;
    if (n > max_carrier())
        throw std::invalid_argument("semidirect_product: product carrier exceeds bound");
    GroupTable dot, circ;
    dot.n = circ.n = n;
    dot.table.resize(static_cast<std::size_t>(n) * n);
    circ.table.resize(static_cast<std::size_t>(n) * n);
    for (int h = 0; h < nH; ++h)
        for (int a = 0; a < nG; ++a) {
            int p = h * nG + a;
            const Permutation& pa = phi[static_cast<std::size_t>(a)];
            for (int k = 0; k < nH; ++k)
                for (int b = 0; b < nG; ++b) {
                    dot.set(p, k * nG + b, H.dot_at(h, k) * nG + G.dot_at(a, b));
                    circ.set(p, k * nG + b, H.circ_at(h, pa(k)) * nG + G.circ_at(a, b));
                }
        }
    dot.compute_inverses();
    circ.compute_inverses();
    auto validated = validate_brace(std::move(dot), std::move(circ), BraceKind::brace);
    if (!validated)
        throw std::logic_error("semidirect_product: result failed brace validation");
    return *validated.value;
}

// ---------------------------------------------------------------------------
// Factorization through two left ideals: G = H·K with the multiplication map
// H×K → G bijective.  G = H∘K is a consequence and is checked as well.

template <BraceOps V>
bool admits_factorization(const V& v, const std::vector<int>& H, const std::vector<int>& K) {
    if (!is_left_ideal(v, H) || !is_left_ideal(v, K)) return false;
    if (static_cast<std::size_t>(H.size()) * K.size() != static_cast<std::size_t>(v.size()))
        return false;
    std::vector<char> hit(static_cast<std::size_t>(v.size()), 0);
    for (int h : H)
        for (int k : K) {
            int x = v.dot_at(h, k);
            if (hit[static_cast<std::size_t>(x)]) return false;
            hit[static_cast<std::size_t>(x)] = 1;
        }
    std::fill(hit.begin(), hit.end(), 0);
    for (int h : H)
        for (int k : K) hit[static_cast<std::size_t>(v.circ_at(h, k))] = 1;
    for (char c : hit)
        if (!c) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Brace file format.
//
//   brace n=<int> kind=<brace|skew>
//   <n dot table rows>
//   <blank line>
//   <n circ table rows>

inline Validated<Brace> parse_brace(std::istream& is) {
    Validated<Brace> out;
    out.report.subject = "brace-file";
    int lineno = 0;
    std::string line, err;
    if (!detail::read_data_line(is, line, lineno)) {
        out.report.structural = "empty file";
        return out;
    }
    int n;
    std::vector<std::pair<std::string, std::string>> extras;
    if (!detail::parse_header(line, "brace", n, extras, err)) {
        out.report.structural = detail::at_line(lineno, err);
        return out;
    }
    BraceKind kind = BraceKind::brace;
    bool saw_kind = false;
    for (auto& [key, val] : extras) {
        if (key == "kind" && (val == "brace" || val == "skew")) {
            kind = val == "brace" ? BraceKind::brace : BraceKind::skew_brace;
            saw_kind = true;
        } else {
            out.report.structural = detail::at_line(lineno, "unknown header field '" + key + "'");
            return out;
        }
    }
    if (!saw_kind) {
        out.report.structural = detail::at_line(lineno, "header is missing kind=<brace|skew>");
        return out;
    }
    std::vector<int32_t> dot_rows, circ_rows;
    if (!detail::parse_table_rows(is, n, dot_rows, lineno, err)) {
        out.report.structural = err;
        return out;
    }
    if (!detail::read_data_line(is, line, lineno) ||
        line.find_first_not_of(" \t") != std::string::npos) {
        out.report.structural = detail::at_line(lineno, "expected blank line between tables");
        return out;
    }
    if (!detail::parse_table_rows(is, n, circ_rows, lineno, err) ||
        !detail::reject_trailing(is, lineno, err)) {
        out.report.structural = err;
        return out;
    }
    GroupTable dot, circ;
    if (!detail::table_from_rows(n, std::move(dot_rows), dot, err)) {
        out.report.structural = "dot table: " + err;
        return out;
    }
    if (!detail::table_from_rows(n, std::move(circ_rows), circ, err)) {
        out.report.structural = "circ table: " + err;
        return out;
    }
    out = validate_brace(std::move(dot), std::move(circ), kind);
    out.report.subject = "brace-file";
    return out;
}

inline void emit_brace(const Brace& g, std::ostream& os) {
    os << "brace n=" << g.size() << " kind=" << (g.kind == BraceKind::brace ? "brace" : "skew")
       << '\n';
    for (int a = 0; a < g.size(); ++a) {
        for (int b = 0; b < g.size(); ++b) os << (b ? " " : "") << g.dot_at(a, b);
        os << '\n';
    }
    os << '\n';
    for (int a = 0; a < g.size(); ++a) {
        for (int b = 0; b < g.size(); ++b) os << (b ? " " : "") << g.circ_at(a, b);
        os << '\n';
    }
}

// Trivial brace: ∘ = · on an abelian group.
inline Brace make_trivial_brace(const GroupTable& g) {
    auto v = validate_brace(g, g, BraceKind::brace);
    if (!v) throw std::invalid_argument("make_trivial_brace: input is not an abelian group");
    return *v.value;
}

}  // namespace braceforge
