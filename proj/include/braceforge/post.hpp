// Post-groups and post-braces.
//
// A post-group (G,∘,▷) asks every left ▷-translation to be an automorphism
// of (G,∘) and the weighted associativity (a∘(a▷b))▷c = a▷(b▷c) to hold.
// A post-brace adds a brace (G,·,∘) with a▷(b·c) = (a▷b)·(a▷c).  Both carry
// a sub-adjacent structure via a∗b = a∘(a▷b).

#pragma once

#include "braceforge/brace.hpp"

namespace braceforge {

struct PostGroup {
    GroupTable circ;
    std::vector<int32_t> rhd;  // n x n, row-major

    int size() const { return circ.n; }
    int rhd_at(int a, int b) const { return rhd[static_cast<std::size_t>(a) * circ.n + b]; }
    int star_at(int a, int b) const { return circ.at(a, rhd_at(a, b)); }
};

struct PostBrace {
    Brace brace;
    std::vector<int32_t> rhd;
    Brace sub_adjacent;  // (G,·,∗), built and validated at construction time

    int size() const { return brace.size(); }
    int rhd_at(int a, int b) const { return rhd[static_cast<std::size_t>(a) * brace.size() + b]; }
    int star_at(int a, int b) const { return brace.circ_at(a, rhd_at(a, b)); }

    PostGroup post_group() const { return PostGroup{brace.circ, rhd}; }
};

namespace detail {

inline GroupTable star_table(const GroupTable& circ, const std::vector<int32_t>& rhd) {
    GroupTable star;
    star.n = circ.n;
    star.table.resize(static_cast<std::size_t>(circ.n) * circ.n);
    for (int a = 0; a < circ.n; ++a)
        for (int b = 0; b < circ.n; ++b)
            star.set(a, b, circ.at(a, rhd[static_cast<std::size_t>(a) * circ.n + b]));
    star.compute_inverses();
    return star;
}

}  // namespace detail

inline Validated<PostGroup> validate_post_group(GroupTable circ, std::vector<int32_t> rhd) {
    Stopwatch timer;
    Validated<PostGroup> out;
    Report& rep = out.report;
    rep.subject = "post-group";

    int n = circ.n;
    if (rhd.size() != static_cast<std::size_t>(n) * n) {
        rep.structural = "rhd table has wrong dimensions";
        return out;
    }
    for (int32_t v : rhd)
        if (v < 0 || v >= n) {
            rep.structural = "rhd entry out of range";
            return out;
        }
    Report circ_rep = validate_group(circ);
    if (!circ_rep.ok()) {
        rep = circ_rep;
        rep.subject = "post-group:circ";
        return out;
    }

    PostGroup pg{std::move(circ), std::move(rhd)};

    for (int a = 0; a < n; ++a) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        bool bij = true;
        for (int b = 0; b < n; ++b) {
            int v = pg.rhd_at(a, b);
            if (seen[static_cast<std::size_t>(v)]) {
                bij = false;
                break;
            }
            seen[static_cast<std::size_t>(v)] = 1;
        }
        if (!bij) {
            rep.add("left-translation-bijective", false, {a});
            return out;
        }
    }
    rep.add("left-translation-bijective", true);

    // a▷(b∘c) = (a▷b)∘(a▷c)
    auto w1 = detail::scan_outer(n, [&](int a) -> std::optional<std::vector<int>> {
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (pg.rhd_at(a, pg.circ.at(b, c)) != pg.circ.at(pg.rhd_at(a, b), pg.rhd_at(a, c)))
                    return std::vector<int>{a, b, c};
        return std::nullopt;
    });
    rep.add("translation-automorphism", !w1, w1.value_or(std::vector<int>{}),
            "a▷(b∘c) = (a▷b)∘(a▷c)");
    if (w1) return out;

    // (a∘(a▷b))▷c = a▷(b▷c)
    auto w2 = detail::scan_outer(n, [&](int a) -> std::optional<std::vector<int>> {
        for (int b = 0; b < n; ++b) {
            int ab = pg.circ.at(a, pg.rhd_at(a, b));
            for (int c = 0; c < n; ++c)
                if (pg.rhd_at(ab, c) != pg.rhd_at(a, pg.rhd_at(b, c)))
                    return std::vector<int>{a, b, c};
        }
        return std::nullopt;
    });
    rep.add("weighted-associativity", !w2, w2.value_or(std::vector<int>{}),
            "(a∘(a▷b))▷c = a▷(b▷c)");
    if (w2) return out;

    // Unit laws follow from the axioms; re-checked as a sanity layer.
    for (int a = 0; a < n; ++a)
        if (pg.rhd_at(a, 0) != 0 || pg.rhd_at(0, a) != a) {
            rep.add("unit-laws", false, {a});
            return out;
        }
    rep.add("unit-laws", true);

    rep.seconds = timer.seconds();
    out.value = std::move(pg);
    return out;
}

inline Validated<PostBrace> validate_post_brace(Brace brace, std::vector<int32_t> rhd) {
    Stopwatch timer;
    Validated<PostBrace> out;
    Report& rep = out.report;
    rep.subject = "post-brace";

    if (brace.kind != BraceKind::brace) {
        rep.structural = "post-braces are defined over braces (dot abelian)";
        return out;
    }
    auto pg = validate_post_group(brace.circ, rhd);
    if (!pg) {
        rep = pg.report;
        rep.subject = "post-brace";
        return out;
    }
    int n = brace.size();
    rep = pg.report;
    rep.subject = "post-brace";

    // a▷(b·c) = (a▷b)·(a▷c)
    auto w = detail::scan_outer(n, [&](int a) -> std::optional<std::vector<int>> {
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (pg->rhd_at(a, brace.dot.at(b, c)) !=
                    brace.dot.at(pg->rhd_at(a, b), pg->rhd_at(a, c)))
                    return std::vector<int>{a, b, c};
        return std::nullopt;
    });
    rep.add("dot-distributivity", !w, w.value_or(std::vector<int>{}),
            "a▷(b·c) = (a▷b)·(a▷c)");
    if (w) return out;

    // The sub-adjacent structure (G,·,∗) is a brace by theorem; a failure
    // here indicates a bug, not bad input.
    GroupTable star = detail::star_table(pg->circ, pg->rhd);
    auto sub = validate_brace(brace.dot, std::move(star), BraceKind::brace);
    if (!sub) throw std::logic_error("validate_post_brace: sub-adjacent structure failed validation");

    PostBrace pb;
    pb.brace = std::move(brace);
    pb.rhd = std::move(pg->rhd);
    pb.sub_adjacent = std::move(*sub.value);
    rep.seconds = timer.seconds();
    out.value = std::move(pb);
    return out;
}

// (G,·,∗) with a∗b = a∘(a▷b); cached on the post-brace at validation time.
inline const Brace& sub_adjacent_brace(const PostBrace& pb) { return pb.sub_adjacent; }

// a† = (L▷_a)⁻¹(ā): the inverse of a in the sub-adjacent group.
inline int dagger_inverse(const PostGroup& pg, int a) {
    int abar = pg.circ.inverse(a);
    for (int b = 0; b < pg.size(); ++b)
        if (pg.rhd_at(a, b) == abar) {
            if (pg.star_at(a, b) != 0 || pg.star_at(b, a) != 0)
                throw std::logic_error("dagger_inverse: candidate fails the unit equations");
            return b;
        }
    throw std::logic_error("dagger_inverse: left translation misses the circ-inverse");
}

// The second skew brace carried by a post-group: (G,∘,∗).
inline Brace companion_skew_brace(const PostGroup& pg) {
    GroupTable star = detail::star_table(pg.circ, pg.rhd);
    auto v = validate_brace(pg.circ, std::move(star), BraceKind::skew_brace);
    if (!v) throw std::logic_error("companion_skew_brace: (G,∘,∗) failed validation");
    return *v.value;
}

// Ψ preserves ·, ∘ and ▷.  A passing map is re-checked to be a homomorphism
// of the sub-adjacent braces.
inline bool is_post_brace_hom(const PostBrace& src, const PostBrace& dst, const CarrierMap& psi) {
    if (psi.src_n != src.size() || psi.dst_n != dst.size())
        throw std::invalid_argument("is_post_brace_hom: carrier mismatch");
    if (!is_brace_hom(src.brace, dst.brace, psi)) return false;
    for (int a = 0; a < src.size(); ++a)
        for (int b = 0; b < src.size(); ++b)
            if (psi(src.rhd_at(a, b)) != dst.rhd_at(psi(a), psi(b))) return false;
    if (!is_brace_hom(src.sub_adjacent, dst.sub_adjacent, psi))
        throw std::logic_error("is_post_brace_hom: sub-adjacent homomorphism property failed");
    return true;
}

// ---------------------------------------------------------------------------
// Post-brace file format: a brace file, a blank line, then the n-line ▷ table.

inline Validated<PostBrace> parse_post_brace(std::istream& is) {
    Validated<PostBrace> out;
    out.report.subject = "post-brace-file";

    // Re-parse the leading brace portion by splitting at the second blank line.
    std::string text, line;
    int n_blank = 0, lineno = 0;
    std::ostringstream head;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            ++n_blank;
            if (n_blank == 2) break;
        }
        head << line << '\n';
    }
    if (n_blank < 2) {
        out.report.structural = "expected a blank line before the rhd table";
        return out;
    }
    std::istringstream head_is(head.str());
    auto brace = parse_brace(head_is);
    if (!brace) {
        out.report = brace.report;
        out.report.subject = "post-brace-file";
        return out;
    }
    int n = brace->size();
    std::vector<int32_t> rhd;
    std::string err;
    if (!detail::parse_table_rows(is, n, rhd, lineno, err) ||
        !detail::reject_trailing(is, lineno, err)) {
        out.report.structural = err;
        return out;
    }
    out = validate_post_brace(std::move(*brace.value), std::move(rhd));
    out.report.subject = "post-brace-file";
    return out;
}

inline void emit_post_brace(const PostBrace& pb, std::ostream& os) {
    emit_brace(pb.brace, os);
    os << '\n';
    for (int a = 0; a < pb.size(); ++a) {
        for (int b = 0; b < pb.size(); ++b) os << (b ? " " : "") << pb.rhd_at(a, b);
        os << '\n';
    }
}

}  // namespace braceforge
