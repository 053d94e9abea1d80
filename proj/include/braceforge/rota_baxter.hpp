// Semi-trivial actions, relative and enhanced relative Rota-Baxter operators,
// the structures they induce, and the factorization pipeline for enhanced
// operators on two-sided braces.

#pragma once

#include "braceforge/post.hpp"

namespace braceforge {

// ---------------------------------------------------------------------------
// Semi-trivial actions: Φ : G → Aut(H) with Φ(a∘b) = Φ(a)Φ(b).

struct SemiTrivialAction {
    Brace G;
    Brace H;
    std::vector<Permutation> phi;  // phi[a] is a brace automorphism of H

    int apply(int a, int h) const { return phi[static_cast<std::size_t>(a)](h); }
};

inline Validated<SemiTrivialAction> validate_semi_trivial_action(Brace G, Brace H,
                                                                 std::vector<Permutation> phi) {
    Stopwatch timer;
    Validated<SemiTrivialAction> out;
    Report& rep = out.report;
    rep.subject = "semi-trivial-action";

    if (G.kind != BraceKind::brace || H.kind != BraceKind::brace) {
        rep.structural = "semi-trivial actions are defined between braces (dot abelian)";
        return out;
    }
    if (static_cast<int>(phi.size()) != G.size()) {
        rep.structural = "action has " + std::to_string(phi.size()) + " maps, expected " +
                         std::to_string(G.size());
        return out;
    }
    for (const auto& p : phi)
        if (p.size() != H.size()) {
            rep.structural = "action map has wrong carrier size";
            return out;
        }

    int nG = G.size(), nH = H.size();
    for (int a = 0; a < nG; ++a)
        if (!phi[static_cast<std::size_t>(a)].is_bijection()) {
            rep.add("bijective", false, {a});
            return out;
        }
    rep.add("bijective", true);

    // each phi[a] preserves both tables of H
    for (int a = 0; a < nG; ++a) {
        const Permutation& p = phi[static_cast<std::size_t>(a)];
        for (int h = 0; h < nH; ++h)
            for (int k = 0; k < nH; ++k) {
                if (p(H.dot_at(h, k)) != H.dot_at(p(h), p(k))) {
                    rep.add("values-in-aut", false, {a, h, k}, "dot not preserved");
                    return out;
                }
                if (p(H.circ_at(h, k)) != H.circ_at(p(h), p(k))) {
                    rep.add("values-in-aut", false, {a, h, k}, "circ not preserved");
                    return out;
                }
            }
    }
    rep.add("values-in-aut", true);

    // Φ(a∘b) = Φ(a)Φ(b)
    for (int a = 0; a < nG; ++a)
        for (int b = 0; b < nG; ++b) {
            const Permutation& pab = phi[static_cast<std::size_t>(G.circ_at(a, b))];
            const Permutation& pa = phi[static_cast<std::size_t>(a)];
            const Permutation& pb = phi[static_cast<std::size_t>(b)];
            for (int h = 0; h < nH; ++h)
                if (pab(h) != pa(pb(h))) {
                    rep.add("multiplicative", false, {a, b, h});
                    return out;
                }
        }
    rep.add("multiplicative", true);

    if (!phi[0].is_identity()) {
        rep.add("unit-acts-trivially", false, {0});
        return out;
    }
    rep.add("unit-acts-trivially", true);

    rep.seconds = timer.seconds();
    out.value = SemiTrivialAction{std::move(G), std::move(H), std::move(phi)};
    return out;
}

inline SemiTrivialAction trivial_action(const Brace& G, const Brace& H) {
    std::vector<Permutation> phi(static_cast<std::size_t>(G.size()), Permutation::identity(H.size()));
    auto v = validate_semi_trivial_action(G, H, std::move(phi));
    if (!v) throw std::invalid_argument("trivial_action: inputs must be braces");
    return *v.value;
}

// Ad∘ of a two-sided brace acting on itself: Φ(a)(b) = a∘b∘ā.
inline SemiTrivialAction adjoint_action(const Brace& G) {
    if (G.kind != BraceKind::brace)
        throw std::invalid_argument("adjoint_action: requires a brace (dot abelian)");
    if (!G.two_sided)
        throw std::invalid_argument("adjoint_action: brace is not two-sided");
    int n = G.size();
    std::vector<Permutation> phi(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        Permutation p;
        p.image.resize(static_cast<std::size_t>(n));
        int abar = G.circ_inv(a);
        for (int b = 0; b < n; ++b)
            p.image[static_cast<std::size_t>(b)] =
                static_cast<int32_t>(G.circ_at(G.circ_at(a, b), abar));
        phi[static_cast<std::size_t>(a)] = std::move(p);
    }
    auto v = validate_semi_trivial_action(G, G, std::move(phi));
    if (!v) throw std::logic_error("adjoint_action: Ad∘ failed validation on a two-sided brace");
    return *v.value;
}

// ---------------------------------------------------------------------------
// Relative Rota-Baxter operators
//
//   B(h)·B(k) = B(h·k)                      (dot additivity)
//   B(h)∘B(k) = B(h ∘ Φ(B(h))k)             (twisted multiplicativity)
// enhanced additionally:
//   (B(h)·a)∘B(k) = B(h ∘ Φ(B(h)·a)k)·a     for all a in G

struct RelativeRBO {
    SemiTrivialAction action;
    CarrierMap B;  // H -> G
    bool enhanced = false;
};

namespace detail {

inline std::optional<std::vector<int>> rbo_additive_witness(const SemiTrivialAction& act,
                                                            const CarrierMap& B) {
    int nH = act.H.size();
    for (int h = 0; h < nH; ++h)
        for (int k = 0; k < nH; ++k)
            if (act.G.dot_at(B(h), B(k)) != B(act.H.dot_at(h, k))) return std::vector<int>{h, k};
    return std::nullopt;
}

inline std::optional<std::vector<int>> rbo_twisted_witness(const SemiTrivialAction& act,
                                                           const CarrierMap& B) {
    int nH = act.H.size();
    for (int h = 0; h < nH; ++h) {
        const Permutation& p = act.phi[static_cast<std::size_t>(B(h))];
        for (int k = 0; k < nH; ++k)
            if (act.G.circ_at(B(h), B(k)) != B(act.H.circ_at(h, p(k))))
                return std::vector<int>{h, k};
    }
    return std::nullopt;
}

inline std::optional<std::vector<int>> rbo_enhanced_witness(const SemiTrivialAction& act,
                                                            const CarrierMap& B) {
    int nG = act.G.size(), nH = act.H.size();
    for (int a = 0; a < nG; ++a)
        for (int h = 0; h < nH; ++h) {
            int ba = act.G.dot_at(B(h), a);
            const Permutation& p = act.phi[static_cast<std::size_t>(ba)];
            for (int k = 0; k < nH; ++k)
                if (act.G.circ_at(ba, B(k)) != act.G.dot_at(B(act.H.circ_at(h, p(k))), a))
                    return std::vector<int>{a, h, k};
        }
    return std::nullopt;
}

}  // namespace detail

inline Validated<RelativeRBO> is_relative_rbo(const SemiTrivialAction& act, CarrierMap B) {
    Stopwatch timer;
    Validated<RelativeRBO> out;
    Report& rep = out.report;
    rep.subject = "relative-rbo";
    if (B.src_n != act.H.size() || B.dst_n != act.G.size()) {
        rep.structural = "operator endpoints do not match the action";
        return out;
    }

    auto w_add = detail::rbo_additive_witness(act, B);
    rep.add("additive", !w_add, w_add.value_or(std::vector<int>{}),
            "B(h)·B(k) = B(h·k)");
    auto w_tw = detail::rbo_twisted_witness(act, B);
    rep.add("twisted-multiplicative", !w_tw, w_tw.value_or(std::vector<int>{}),
            "B(h)∘B(k) = B(h∘Φ(B(h))k)");
    auto w_en = detail::rbo_enhanced_witness(act, B);
    rep.add("enhanced", !w_en, w_en.value_or(std::vector<int>{}),
            "(B(h)·a)∘B(k) = B(h∘Φ(B(h)·a)k)·a");

    if (!w_en && w_tw)
        throw std::logic_error("is_relative_rbo: enhanced held but the twisted law failed");
    if (!w_add && B(0) != 0)
        throw std::logic_error("is_relative_rbo: additivity held but B does not fix the unit");

    rep.seconds = timer.seconds();
    if (!w_add && !w_tw) out.value = RelativeRBO{act, std::move(B), !w_en};
    return out;
}

// The workhorse identity of enhanced operators: a∘B(k) = B(Φ(a)k)·a.
inline bool enhance_property_check(const RelativeRBO& rbo) {
    if (!rbo.enhanced)
        throw std::invalid_argument("enhance_property_check: operator is not enhanced");
    const auto& act = rbo.action;
    for (int a = 0; a < act.G.size(); ++a) {
        const Permutation& p = act.phi[static_cast<std::size_t>(a)];
        for (int k = 0; k < act.H.size(); ++k)
            if (act.G.circ_at(a, rbo.B(k)) != act.G.dot_at(rbo.B(p(k)), a)) return false;
    }
    return true;
}

// Graph criterion: B is a relative Rota-Baxter operator iff the graph
// {(h,B(h))} is a sub-brace of the semi-direct product H ⋊_Φ G.  Implemented
// independently of the equational check so the two can be played against
// each other.
inline bool graph_is_subbrace(const Brace& product, const SemiTrivialAction& act,
                              const CarrierMap& B) {
    int nG = act.G.size(), nH = act.H.size();
    if (product.size() != nG * nH)
        throw std::invalid_argument("graph_is_subbrace: product brace has wrong carrier");
    auto in_graph = [&](int x) { return B(x / nG) == x % nG; };
    std::vector<int> graph;
    graph.reserve(static_cast<std::size_t>(nH));
    for (int h = 0; h < nH; ++h) graph.push_back(h * nG + B(h));
    for (int x : graph) {
        if (!in_graph(product.dot_inv(x)) || !in_graph(product.circ_inv(x))) return false;
        for (int y : graph)
            if (!in_graph(product.dot_at(x, y)) || !in_graph(product.circ_at(x, y))) return false;
    }
    return true;
}

inline bool graph_is_subbrace(const SemiTrivialAction& act, const CarrierMap& B) {
    return graph_is_subbrace(semidirect_product(act.G, act.H, act.phi), act, B);
}

// Descendent brace (H, ·_H, ∘_B) with h∘_B k = h ∘ Φ(B(h))k.  B becomes a
// brace homomorphism from the descendent brace to G.
inline Brace descendent_brace(const RelativeRBO& rbo) {
    const auto& act = rbo.action;
    int n = act.H.size();
    GroupTable circb;
    circb.n = n;
    circb.table.resize(static_cast<std::size_t>(n) * n);
    for (int h = 0; h < n; ++h) {
        const Permutation& p = act.phi[static_cast<std::size_t>(rbo.B(h))];
        for (int k = 0; k < n; ++k) circb.set(h, k, act.H.circ_at(h, p(k)));
    }
    circb.compute_inverses();
    auto v = validate_brace(act.H.dot, std::move(circb), BraceKind::brace);
    if (!v) throw std::logic_error("descendent_brace: descendent structure failed validation");
    if (!is_brace_hom(*v.value, act.G, rbo.B))
        throw std::logic_error("descendent_brace: B is not a homomorphism out of the descendent");
    return *v.value;
}

// Induced post-brace (H, ·_H, ∘_H, ▷_B) with h ▷_B k = Φ(B(h))k; its
// sub-adjacent brace coincides with the descendent brace table-for-table.
inline PostBrace induce_post_brace(const RelativeRBO& rbo) {
    const auto& act = rbo.action;
    int n = act.H.size();
    std::vector<int32_t> rhd(static_cast<std::size_t>(n) * n);
    for (int h = 0; h < n; ++h) {
        const Permutation& p = act.phi[static_cast<std::size_t>(rbo.B(h))];
        for (int k = 0; k < n; ++k) rhd[static_cast<std::size_t>(h) * n + k] = static_cast<int32_t>(p(k));
    }
    auto v = validate_post_brace(act.H, std::move(rhd));
    if (!v) throw std::logic_error("induce_post_brace: induced structure failed validation");
    if (v->sub_adjacent != descendent_brace(rbo))
        throw std::logic_error("induce_post_brace: sub-adjacent brace differs from the descendent");
    return *v.value;
}

// ---------------------------------------------------------------------------
// Rota-Baxter operators on two-sided braces (Φ = Ad∘, H = G)

struct TwoSidedRBO {
    RelativeRBO rel;  // action is Ad∘ of G on itself

    const Brace& G() const { return rel.action.G; }
    const CarrierMap& B() const { return rel.B; }
    bool enhanced() const { return rel.enhanced; }
};

inline Validated<TwoSidedRBO> is_two_sided_rbo(const SemiTrivialAction& adjoint, CarrierMap B) {
    auto rel = is_relative_rbo(adjoint, std::move(B));
    Validated<TwoSidedRBO> out;
    out.report = rel.report;
    out.report.subject = "two-sided-rbo";
    if (!rel) return out;

    if (rel->enhanced) {
        // consequence of the enhanced law: b∘B(b) = B(b)·b
        const Brace& G = rel->action.G;
        for (int b = 0; b < G.size(); ++b)
            if (G.circ_at(b, rel->B(b)) != G.dot_at(rel->B(b), b))
                throw std::logic_error("is_two_sided_rbo: commutation b∘B(b)=B(b)·b failed");
        out.report.add("commutation", true, {}, "b∘B(b) = B(b)·b");
    }
    out.value = TwoSidedRBO{std::move(*rel.value)};
    return out;
}

inline Validated<TwoSidedRBO> is_two_sided_rbo(const Brace& G, CarrierMap B) {
    return is_two_sided_rbo(adjoint_action(G), std::move(B));
}

// B₊(a) = a∘B(a); for enhanced operators a homomorphism of braces from the
// descendent brace to G.
inline CarrierMap b_plus(const TwoSidedRBO& rbo) {
    if (!rbo.enhanced())
        throw std::invalid_argument("b_plus: operator is not enhanced");
    const Brace& G = rbo.G();
    CarrierMap bp{G.size(), G.size(), {}};
    bp.image.resize(static_cast<std::size_t>(G.size()));
    for (int a = 0; a < G.size(); ++a)
        bp.image[static_cast<std::size_t>(a)] = static_cast<int32_t>(G.circ_at(a, rbo.B()(a)));
    if (!is_brace_hom(descendent_brace(rbo.rel), G, bp))
        throw std::logic_error("b_plus: B₊ is not a homomorphism out of the descendent");
    return bp;
}

// ---------------------------------------------------------------------------
// Factorization data of an enhanced operator:
//   G₊ = Im B₊, G₋ = Im B, K₊ = Ker B, K₋ = Ker B₊,
//   Cayley transform Θ : G₋/K₋ → G₊/K₊, [B(a)] ↦ [B₊(a)],
//   G_Θ = {(a₊,a₋) : Θ[a₋] = [a₊]} and the isomorphism a ↦ (B₊(a), B(a)).

struct FactorizationData {
    Brace descendent;  // (G, ·, ∗)
    CarrierMap bplus;
    std::vector<int> gplus, gminus, kplus, kminus;  // sorted element lists in G
    Brace gplus_sub, gminus_sub;
    QuotientBrace qminus, qplus;  // G₋/K₋ and G₊/K₊
    CarrierMap theta;             // quotient carrier of G₋/K₋ -> that of G₊/K₊
    Brace product;                // direct product brace on G₊ x G₋ sub-carriers
    std::vector<int> g_theta_subset;  // indices into the product carrier
    Brace g_theta;
    CarrierMap phi_iso;  // descendent -> G_Θ
};

namespace detail {

inline std::vector<int> sorted_image(const CarrierMap& f) {
    std::vector<int> out(f.image.begin(), f.image.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<int> kernel_of(const CarrierMap& f) {
    std::vector<int> out;
    for (int a = 0; a < f.src_n; ++a)
        if (f(a) == 0) out.push_back(a);
    return out;
}

inline std::vector<int> positions_in(const std::vector<int>& subset, const std::vector<int>& elems) {
    std::vector<int> out;
    for (int e : elems) {
        auto it = std::lower_bound(subset.begin(), subset.end(), e);
        if (it == subset.end() || *it != e)
            throw std::logic_error("element expected inside sub-carrier");
        out.push_back(static_cast<int>(it - subset.begin()));
    }
    return out;
}

inline Brace direct_product_brace(const Brace& A, const Brace& B) {
    auto v = validate_brace(make_direct_product(A.dot, B.dot), make_direct_product(A.circ, B.circ),
                            BraceKind::brace);
    if (!v) throw std::logic_error("direct product of braces failed validation");
    return *v.value;
}

}  // namespace detail

inline FactorizationData factorization_data(const TwoSidedRBO& rbo) {
    if (!rbo.enhanced())
        throw std::invalid_argument("factorization_data: operator is not enhanced");
    const Brace& G = rbo.G();
    FactorizationData fd;
    fd.descendent = descendent_brace(rbo.rel);
    fd.bplus = b_plus(rbo);
    fd.gminus = detail::sorted_image(rbo.B());
    fd.gplus = detail::sorted_image(fd.bplus);
    fd.kplus = detail::kernel_of(rbo.B());
    fd.kminus = detail::kernel_of(fd.bplus);

    if (!is_ideal(fd.descendent, fd.kplus) || !is_ideal(fd.descendent, fd.kminus))
        throw std::logic_error("factorization_data: kernels are not ideals of the descendent");

    fd.gplus_sub = sub_brace(G, fd.gplus);
    fd.gminus_sub = sub_brace(G, fd.gminus);

    // K₊ ⊂ G₊ and K₋ ⊂ G₋ as ideals
    auto kplus_in_gplus = detail::positions_in(fd.gplus, fd.kplus);
    auto kminus_in_gminus = detail::positions_in(fd.gminus, fd.kminus);
    if (!is_ideal(fd.gplus_sub, kplus_in_gplus) || !is_ideal(fd.gminus_sub, kminus_in_gminus))
        throw std::logic_error("factorization_data: K± are not ideals of G±");

    // G± ≅ descendent/K∓ by the first-isomorphism construction
    for (int pass = 0; pass < 2; ++pass) {
        const auto& ker = pass == 0 ? fd.kminus : fd.kplus;
        const auto& img = pass == 0 ? fd.gplus : fd.gminus;
        const auto& img_sub = pass == 0 ? fd.gplus_sub : fd.gminus_sub;
        const auto& f = pass == 0 ? fd.bplus : rbo.B();
        QuotientBrace q = quotient_brace(fd.descendent, ker);
        CarrierMap iso{q.brace.size(), img_sub.size(), {}};
        iso.image.assign(static_cast<std::size_t>(q.brace.size()), -1);
        for (int a = 0; a < G.size(); ++a) {
            int cls = q.projection(a);
            int pos = detail::positions_in(img, {f(a)})[0];
            if (iso.image[static_cast<std::size_t>(cls)] < 0)
                iso.image[static_cast<std::size_t>(cls)] = static_cast<int32_t>(pos);
            else if (iso.image[static_cast<std::size_t>(cls)] != pos)
                throw std::logic_error("factorization_data: first-isomorphism map ill-defined");
        }
        Permutation p{iso.image};
        if (q.brace.size() != img_sub.size() || !p.is_bijection() ||
            !is_brace_hom(q.brace, img_sub, iso))
            throw std::logic_error("factorization_data: G± ≅ G_B/K∓ failed");
    }

    fd.qminus = quotient_brace(fd.gminus_sub, kminus_in_gminus);
    fd.qplus = quotient_brace(fd.gplus_sub, kplus_in_gplus);

    // Θ([B(a)]) = [B₊(a)]; scanning every a both defines it and verifies
    // well-definedness on all representative pairs.
    fd.theta = CarrierMap{fd.qminus.brace.size(), fd.qplus.brace.size(), {}};
    fd.theta.image.assign(static_cast<std::size_t>(fd.qminus.brace.size()), -1);
    for (int a = 0; a < G.size(); ++a) {
        int src = fd.qminus.projection(detail::positions_in(fd.gminus, {rbo.B()(a)})[0]);
        int dst = fd.qplus.projection(detail::positions_in(fd.gplus, {fd.bplus(a)})[0]);
        if (fd.theta.image[static_cast<std::size_t>(src)] < 0)
            fd.theta.image[static_cast<std::size_t>(src)] = static_cast<int32_t>(dst);
        else if (fd.theta.image[static_cast<std::size_t>(src)] != dst)
            throw std::logic_error("factorization_data: Θ is ill-defined");
    }
    for (int32_t v : fd.theta.image)
        if (v < 0) throw std::logic_error("factorization_data: Θ missed a class");
    if (!Permutation{fd.theta.image}.is_bijection() ||
        !is_brace_hom(fd.qminus.brace, fd.qplus.brace, fd.theta))
        throw std::logic_error("factorization_data: Θ is not an isomorphism");

    // G_Θ inside the direct product brace on G₊ × G₋
    fd.product = detail::direct_product_brace(fd.gplus_sub, fd.gminus_sub);
    int nminus = fd.gminus_sub.size();
    for (int u = 0; u < fd.gplus_sub.size(); ++u)
        for (int v = 0; v < nminus; ++v)
            if (fd.theta(fd.qminus.projection(v)) == fd.qplus.projection(u))
                fd.g_theta_subset.push_back(u * nminus + v);
    fd.g_theta = sub_brace(fd.product, fd.g_theta_subset);

    // Φ(a) = (B₊(a), B(a)) is an isomorphism from the descendent onto G_Θ
    fd.phi_iso = CarrierMap{G.size(), fd.g_theta.size(), {}};
    fd.phi_iso.image.resize(static_cast<std::size_t>(G.size()));
    for (int a = 0; a < G.size(); ++a) {
        int u = detail::positions_in(fd.gplus, {fd.bplus(a)})[0];
        int v = detail::positions_in(fd.gminus, {rbo.B()(a)})[0];
        auto it = std::lower_bound(fd.g_theta_subset.begin(), fd.g_theta_subset.end(),
                                   u * nminus + v);
        if (it == fd.g_theta_subset.end() || *it != u * nminus + v)
            throw std::logic_error("factorization_data: (B₊(a),B(a)) escaped G_Θ");
        fd.phi_iso.image[static_cast<std::size_t>(a)] =
            static_cast<int32_t>(it - fd.g_theta_subset.begin());
    }
    if (!Permutation{fd.phi_iso.image}.is_bijection() ||
        !is_brace_hom(fd.descendent, fd.g_theta, fd.phi_iso))
        throw std::logic_error("factorization_data: a ↦ (B₊(a),B(a)) is not an isomorphism");
    return fd;
}

// Unique factorization a = a₊ ∘ ā₋ = a₋⁻¹ · a₊ with (a₊,a₋) ∈ G_Θ.
// Verifies both identities and, at desk scale, uniqueness by exhaustive
// search over G_Θ.
inline std::pair<int, int> factorize(const FactorizationData& fd, const TwoSidedRBO& rbo, int a) {
    const Brace& G = rbo.G();
    if (a < 0 || a >= G.size()) throw std::invalid_argument("factorize: element out of range");
    int aplus = fd.bplus(a), aminus = rbo.B()(a);
    if (G.circ_at(aplus, G.circ_inv(aminus)) != a ||
        G.dot_at(G.dot_inv(aminus), aplus) != a)
        throw std::logic_error("factorize: decomposition identities failed");
    int nminus = fd.gminus_sub.size();
    int solutions = 0;
    for (int pair : fd.g_theta_subset) {
        int u = fd.gplus[static_cast<std::size_t>(pair / nminus)];
        int v = fd.gminus[static_cast<std::size_t>(pair % nminus)];
        if (G.circ_at(u, G.circ_inv(v)) == a) ++solutions;
    }
    if (solutions != 1)
        throw std::logic_error("factorize: decomposition through G_Θ is not unique");
    return {aplus, aminus};
}

inline std::pair<int, int> factorize(const TwoSidedRBO& rbo, int a) {
    return factorize(factorization_data(rbo), rbo, a);
}

// ---------------------------------------------------------------------------
// Enumeration of relative Rota-Baxter operators for a fixed action.
//
// The pruned search fixes B on a minimal generating set of (H,·) and extends
// additively along a spanning tree, so only |G|^k candidate assignments are
// visited; the no-prune mode walks all |G|^|H| total maps and is kept for
// cross-validation on small carriers.

struct EnumOptions {
    bool enhanced_only = false;
    bool prune = true;
};

inline std::vector<RelativeRBO> enumerate_relative_rbos(const SemiTrivialAction& act,
                                                        EnumOptions opt = {}) {
    const Brace& G = act.G;
    const Brace& H = act.H;
    if (H.size() > max_carrier())
        throw std::invalid_argument("enumerate_relative_rbos: carrier exceeds bound");

    std::vector<CarrierMap> found;
    CarrierMap B{H.size(), G.size(), std::vector<int32_t>(static_cast<std::size_t>(H.size()), 0)};

    auto passes = [&](const CarrierMap& cand) {
        return !detail::rbo_additive_witness(act, cand) && !detail::rbo_twisted_witness(act, cand);
    };

    if (opt.prune) {
        std::vector<int> gens = abelian_generators(H.dot);
        struct Step {
            int elem, prev, gen;
        };
        std::vector<Step> tree;
        {
            std::vector<char> seen(static_cast<std::size_t>(H.size()), 0);
            seen[0] = 1;
            std::vector<int> queue{0};
            for (std::size_t i = 0; i < queue.size(); ++i)
                for (std::size_t s = 0; s < gens.size(); ++s) {
                    int x = H.dot.at(queue[i], gens[s]);
                    if (!seen[static_cast<std::size_t>(x)]) {
                        seen[static_cast<std::size_t>(x)] = 1;
                        tree.push_back(Step{x, queue[i], static_cast<int>(s)});
                        queue.push_back(x);
                    }
                }
        }
        std::vector<int> pick(gens.size(), 0);
        for (;;) {
            B.image[0] = 0;
            for (const Step& st : tree)
                B.image[static_cast<std::size_t>(st.elem)] = static_cast<int32_t>(
                    G.dot_at(B(st.prev), pick[static_cast<std::size_t>(st.gen)]));
            if (passes(B)) found.push_back(B);
            std::size_t s = 0;
            while (s < gens.size()) {
                if (++pick[s] < G.size()) break;
                pick[s] = 0;
                ++s;
            }
            if (s == gens.size() || gens.empty()) break;
        }
    } else {
        // odometer over all |G|^|H| total maps
        for (;;) {
            if (passes(B)) found.push_back(B);
            int i = H.size() - 1;
            while (i >= 0) {
                if (++B.image[static_cast<std::size_t>(i)] < G.size()) break;
                B.image[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }

    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());

    std::vector<RelativeRBO> out;
    out.reserve(found.size());
    for (auto& cand : found) {
        bool enhanced = !detail::rbo_enhanced_witness(act, cand);
        if (opt.enhanced_only && !enhanced) continue;
        out.push_back(RelativeRBO{act, std::move(cand), enhanced});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operator file format:  rbo n=<int>  then one line with the n images of B.

inline Validated<CarrierMap> parse_rbo(std::istream& is, int dst_n) {
    Validated<CarrierMap> out;
    out.report.subject = "rbo-file";
    int lineno = 0;
    std::string line, err;
    if (!detail::read_data_line(is, line, lineno)) {
        out.report.structural = "empty file";
        return out;
    }
    int n;
    std::vector<std::pair<std::string, std::string>> extras;
    if (!detail::parse_header(line, "rbo", n, extras, err) || !extras.empty()) {
        out.report.structural = detail::at_line(lineno, err.empty() ? "unexpected header fields" : err);
        return out;
    }
    if (!detail::read_data_line(is, line, lineno)) {
        out.report.structural = detail::at_line(lineno, "missing image line");
        return out;
    }
    std::vector<int32_t> image;
    if (!detail::parse_row(line, n, image, err)) {
        out.report.structural = detail::at_line(lineno, err);
        return out;
    }
    for (int32_t v : image)
        if (v < 0 || v >= dst_n) {
            out.report.structural = detail::at_line(lineno, "image out of range");
            return out;
        }
    if (!detail::reject_trailing(is, lineno, err)) {
        out.report.structural = err;
        return out;
    }
    out.value = CarrierMap{n, dst_n, std::move(image)};
    return out;
}

inline void emit_rbo(const CarrierMap& B, std::ostream& os) {
    os << "rbo n=" << B.src_n << '\n';
    for (int h = 0; h < B.src_n; ++h) os << (h ? " " : "") << B(h);
    os << '\n';
}

}  // namespace braceforge
