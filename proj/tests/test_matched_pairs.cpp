#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "braceforge/heisenberg.hpp"
#include "braceforge/matched_pairs.hpp"
#include "braceforge/selftest.hpp"

using namespace braceforge;

namespace {

struct Raised {
    int saved = max_carrier();
    Raised() { set_max_carrier(std::max(saved, 1024)); }
    ~Raised() { set_max_carrier(saved); }
};

const HeisenbergBrace& heis3() {
    static Raised raised;
    static HeisenbergBrace hb = build_heisenberg_brace(3);
    return hb;
}

const SemiTrivialAction& adj3() {
    static SemiTrivialAction a = adjoint_action(heis3().brace);
    return a;
}

}  // namespace

TEST_CASE("the trivial pair is a matched pair of groups for any two groups") {
    GroupTable G = make_cyclic_group(4), H = make_cyclic_group(6);
    auto mp = validate_mp_groups(G, H, trivial_mp_tables(4, 6));
    REQUIRE(mp.ok());
    GroupTable dbl = double_group(*mp);
    REQUIRE(dbl == make_direct_product(H, G));
}

TEST_CASE("an action pair built from conjugation on the Heisenberg circ group validates") {
    Raised raised;
    const GroupTable& C = heis3().brace.circ;
    std::vector<Permutation> conj;
    for (int a = 0; a < 27; ++a) {
        Permutation p;
        p.image.resize(27);
        for (int b = 0; b < 27; ++b)
            p.image[static_cast<std::size_t>(b)] = static_cast<int32_t>(C.at(C.at(a, b), C.inverse(a)));
        conj.push_back(std::move(p));
    }
    auto mp = validate_mp_groups(C, C, action_mp_tables(conj, 27));
    REQUIRE(mp.ok());
    GroupTable dbl = double_group(*mp);
    REQUIRE(dbl.n == 729);
    REQUIRE(validate_group(dbl).ok());
}

TEST_CASE("perturbing one rharp entry breaks the matched pair and its double") {
    GroupTable G = make_cyclic_group(3), H = make_cyclic_group(3);
    MpTables t = trivial_mp_tables(3, 3);
    t.rh[1 * 3 + 1] = 2;  // a=1 now sends h=1 to 2
    auto mp = validate_mp_groups(G, H, t);
    REQUIRE_FALSE(mp.ok());
    bool witnessed = false;
    for (const auto& v : mp.report.verdicts)
        if (!v.pass && !v.witness.empty()) witnessed = true;
    REQUIRE(witnessed);
    // the double fails the group axioms too (the iff in the other direction)
    GroupTable dbl = double_group_table(G, H, t);
    REQUIRE_FALSE(validate_group(dbl).ok());
}

TEST_CASE("trivial sigma and theta between trivial braces form a matched pair of braces") {
    Brace G = make_trivial_brace(make_cyclic_group(2));
    Brace H = make_trivial_brace(make_cyclic_group(3));
    auto mp = validate_mp_braces(G, H, trivial_mp_tables(2, 3), trivial_mp_tables(2, 3));
    REQUIRE(mp.ok());
    Brace dbl = double_brace(*mp);
    REQUIRE(dbl.dot == make_direct_product(H.dot, G.dot));
    REQUIRE(dbl.circ == make_direct_product(H.circ, G.circ));
}

TEST_CASE("a circ-automorphic but not dot-additive theta fails exactly compatible-2") {
    // H = nil4: circ is Klein, dot is Z4.  The transposition swapping the
    // circ-involutions 1 and 2 preserves circ but not dot, so the action
    // pair for theta passes both group-level matched pairs and dies on the
    // dot-compatibility of the double.
    Brace G = make_trivial_brace(make_cyclic_group(2));
    Brace H = make_nil4_brace();
    std::vector<Permutation> phi{Permutation::identity(4), Permutation{{0, 2, 1, 3}}};
    for (int h = 0; h < 4; ++h)
        for (int k = 0; k < 4; ++k) {
            REQUIRE(phi[1](H.circ_at(h, k)) == H.circ_at(phi[1](h), phi[1](k)));
        }
    auto mp = validate_mp_braces(G, H, trivial_mp_tables(2, 4), action_mp_tables(phi, 4));
    REQUIRE_FALSE(mp.ok());
    REQUIRE(mp.report.find("sigma-matched-pair") != nullptr);
    REQUIRE(mp.report.find("theta-matched-pair") != nullptr);
    const Verdict* c2 = mp.report.find("compatible-2");
    REQUIRE(c2 != nullptr);
    REQUIRE_FALSE(c2->pass);
    REQUIRE_FALSE(c2->witness.empty());
    REQUIRE(mp.report.find("compatible-1")->pass);

    // the other direction of the iff: the double of this pair is not a brace
    auto [dot, circ] = double_brace_tables(G, H, trivial_mp_tables(2, 4), action_mp_tables(phi, 4));
    auto dbl = validate_brace(std::move(dot), std::move(circ));
    REQUIRE_FALSE(dbl.ok());
}

TEST_CASE("the enhanced-operator pair gives a matched pair whose double is the semidirect product") {
    Raised raised;
    LinearMap3 m{};
    m.m[6] = 1;
    auto B = linear_to_carrier(m, 3);
    auto rbo = is_relative_rbo(adj3(), B);
    REQUIRE(rbo->enhanced);
    MatchedPairBraces mp = mp_from_enhanced_rbo(*rbo);
    REQUIRE(mp.sigma.rharp_trivial());
    REQUIRE(mp.sigma.lharp_trivial());
    REQUIRE(mp.theta.lharp_trivial());

    auto [dot, circ] = double_brace_tables(mp.G, mp.H, mp.sigma, mp.theta);
    Brace sd = semidirect_product(heis3().brace, heis3().brace, adj3().phi);
    REQUIRE(dot.table == sd.dot.table);
    REQUIRE(circ.table == sd.circ.table);
}

TEST_CASE("mp_from_enhanced_rbo refuses a merely relative operator") {
    LinearMap3 m{};
    m.m[0] = 1;
    auto rbo = is_relative_rbo(adj3(), linear_to_carrier(m, 3));
    REQUIRE(rbo.ok());
    REQUIRE_FALSE(rbo->enhanced);
    REQUIRE_THROWS_AS(mp_from_enhanced_rbo(*rbo), std::invalid_argument);
}

TEST_CASE("transported brace of the zero map is the semidirect product itself") {
    Raised raised;
    Brace g = make_trivial_brace(make_cyclic_group(3));
    Brace h = make_nil4_brace();
    auto act = trivial_action(g, h);
    Brace sd = semidirect_product(g, h, act.phi);
    TransportedBrace tb = transported_brace(g, h, act.phi, constant_map(4, 3, 0), sd);
    REQUIRE(tb.unit() == 0);
    REQUIRE(tb.dot.table == sd.dot.table);
    REQUIRE(tb.circ.table == sd.circ.table);
}

TEST_CASE("transported structure for an arbitrary map: unit, inverses, closed formulas") {
    Brace g = make_trivial_brace(make_cyclic_group(3));
    Brace h = make_nil4_brace();
    auto act = trivial_action(g, h);
    // a deliberately non-additive map with B(e) != e
    CarrierMap B{4, 3, {1, 2, 0, 2}};
    TransportedBrace tb = transported_brace(g, h, act.phi, B);
    int unit_expect = 0 * 3 + g.dot_inv(B(0));  // (e_H, B(e_H)^{-1})
    REQUIRE(tb.unit() == unit_expect);

    TransportedView view{&g, &h, &act.phi, &B};
    REQUIRE(view.unit() == unit_expect);
    for (int x = 0; x < 12; ++x) {
        // table route (literal xi conjugation) agrees with the closed formulas
        for (int y = 0; y < 12; ++y) {
            REQUIRE(tb.dot_at(x, y) == view.dot_at(x, y));
            REQUIRE(tb.circ_at(x, y) == view.circ_at(x, y));
        }
        REQUIRE(tb.dot_inv(x) == view.dot_inv(x));
        REQUIRE(tb.circ_inv(x) == view.circ_inv(x));
        // group laws around the displaced unit
        REQUIRE(tb.dot_at(x, tb.dot_inv(x)) == tb.unit());
        REQUIRE(tb.circ_at(tb.circ_inv(x), x) == tb.unit());
        REQUIRE(tb.dot_at(x, tb.unit()) == x);
        REQUIRE(tb.circ_at(tb.unit(), x) == x);
    }
}

TEST_CASE("transported view and tables agree for an enhanced operator at p=3") {
    Raised raised;
    LinearMap3 m{};
    m.m = {0, 0, 0, 0, 0, 0, 1, 2, 0};
    auto B = linear_to_carrier(m, 3);
    const Brace& g = heis3().brace;
    Brace sd = semidirect_product(g, g, adj3().phi);
    TransportedBrace tb = transported_brace(g, g, adj3().phi, B, sd);
    REQUIRE(tb.unit() == 0);
    TransportedView view{&g, &g, &adj3().phi, &B};
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(0, 728);
    for (int i = 0; i < 2000; ++i) {
        int x = d(rng), y = d(rng);
        REQUIRE(tb.dot_at(x, y) == view.dot_at(x, y));
        REQUIRE(tb.circ_at(x, y) == view.circ_at(x, y));
    }
    Brace as_brace = transported_to_brace(tb);
    REQUIRE(as_brace.size() == 729);
}

TEST_CASE("the two coordinate slices are left ideals exactly for enhanced operators") {
    Raised raised;
    const Brace& g = heis3().brace;
    LinearMap3 enh{};
    enh.m = {0, 0, 0, 0, 0, 0, 1, 0, 0};
    LinearMap3 rel{};
    rel.m = {1, 0, 0, 0, 0, 0, 0, 0, 0};

    CarrierMap Benh = linear_to_carrier(enh, 3), Brel = linear_to_carrier(rel, 3);
    std::vector<int> h_side, g_side;
    for (int h = 0; h < 27; ++h) h_side.push_back(h * 27);
    for (int a = 0; a < 27; ++a) g_side.push_back(a);

    TransportedView venh{&g, &g, &adj3().phi, &Benh};
    REQUIRE(is_left_ideal(venh, h_side));
    REQUIRE(is_left_ideal(venh, g_side));
    REQUIRE(factor_ideal_criterion(g, g, adj3().phi, Benh));

    TransportedView vrel{&g, &g, &adj3().phi, &Brel};
    REQUIRE_FALSE(is_left_ideal(vrel, h_side));
    REQUIRE_FALSE(factor_ideal_criterion(g, g, adj3().phi, Brel));
}

TEST_CASE("factorization criterion equals the enhanced verdict on all maps of Z4") {
    Brace g = make_trivial_brace(make_cyclic_group(4));
    auto act = trivial_action(g, g);
    CarrierMap B{4, 4, {0, 0, 0, 0}};
    for (;;) {
        auto ver = is_relative_rbo(act, B);
        bool enh = ver.ok() && ver->enhanced;
        REQUIRE(factor_ideal_criterion(g, g, act.phi, B) == enh);
        int i = 3;
        while (i >= 0) {
            if (++B.image[static_cast<std::size_t>(i)] < 4) break;
            B.image[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
}

TEST_CASE("xi intertwines double and transported structures for the identity operator on Z4") {
    Brace g = make_trivial_brace(make_cyclic_group(4));
    auto act = trivial_action(g, g);
    auto rbo = is_relative_rbo(act, identity_map(4));
    REQUIRE(rbo.ok());
    REQUIRE(rbo->enhanced);
    MatchedPairBraces mp = mp_from_enhanced_rbo(*rbo);
    Brace dbl = double_brace(mp);
    TransportedBrace tb = transported_brace(g, g, act.phi, rbo->B);
    REQUIRE(xi_intertwines_double_and_transport(*rbo, dbl, tb));
}

TEST_CASE("matched-pair files round-trip and reject missing blocks") {
    Brace G = make_trivial_brace(make_cyclic_group(2));
    Brace H = make_nil4_brace();
    auto mp = validate_mp_braces(G, H, trivial_mp_tables(2, 4), trivial_mp_tables(2, 4));
    REQUIRE(mp.ok());
    std::ostringstream first;
    emit_matched_pair(*mp, first);
    std::istringstream in(first.str());
    auto parsed = parse_matched_pair(in);
    REQUIRE(parsed.ok());
    std::ostringstream second;
    emit_matched_pair(*parsed, second);
    REQUIRE(first.str() == second.str());

    std::string text = first.str();
    auto cut = text.find("lharpd");
    std::istringstream truncated(text.substr(0, cut));
    REQUIRE_FALSE(parse_matched_pair(truncated).ok());
}

TEST_CASE("oversized compatibility spaces without structure need the sampled flag") {
    Raised raised;
    const Brace& g = heis3().brace;
    const auto& hb = heis3();

    // a valid, non-trivial action pair for the dot groups: the unipotent
    // x -> x + a1*x1*e2, a homomorphism from (G,·) into Aut(G,·)
    std::vector<Permutation> unipotent;
    for (int a = 0; a < 27; ++a) {
        auto ad = hb.decode(a);
        Permutation p;
        p.image.resize(27);
        for (int x = 0; x < 27; ++x) {
            auto xd = hb.decode(x);
            p.image[static_cast<std::size_t>(x)] = static_cast<int32_t>(
                hb.encode(xd[0], hb.field.add(xd[1], hb.field.mul(ad[0], xd[0])), xd[2]));
        }
        unipotent.push_back(std::move(p));
    }
    MpTables sigma = action_mp_tables(unipotent, 27);
    MpTables theta = action_mp_tables(adj3().phi, 27);
    REQUIRE(validate_mp_groups(g.dot, g.dot, sigma).ok());
    REQUIRE(validate_mp_groups(g.circ, g.circ, theta).ok());

    // 27^6 tuples, sigma non-trivial: exhaustive and structured modes are
    // both unavailable, so the strict call must refuse rather than sample
    auto strict = validate_mp_braces(g, g, sigma, theta);
    REQUIRE_FALSE(strict.ok());
    REQUIRE(strict.report.structural.has_value());
    REQUIRE(strict.report.structural->find("sampl") != std::string::npos);

    MpBraceOptions opt;
    opt.allow_sampled = true;
    auto sampled = validate_mp_braces(g, g, sigma, theta, opt);
    REQUIRE_FALSE(sampled.report.exhaustive);

    // with trivial sigma the structured mode applies and stays exhaustive
    auto structured = validate_mp_braces(g, g, trivial_mp_tables(27, 27), theta);
    REQUIRE(structured.ok());
    REQUIRE(structured.report.exhaustive);
}
