#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "braceforge/heisenberg.hpp"
#include "braceforge/selftest.hpp"
#include "braceforge/ybe.hpp"

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

// R(a,b) = (a⁻¹·(a∘b), (a⁻¹·(a∘b))~ ∘ a ∘ b), evaluated straight from the
// tables; mirrors the brace-solution construction for cross-checking and for
// skew braces, which the public constructor refuses.
std::vector<int32_t> formula_solution(const Brace& g) {
    int n = g.size();
    std::vector<int32_t> R(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int u = g.dot_at(g.dot_inv(a), g.circ_at(a, b));
            int v = g.circ_at(g.circ_at(g.circ_inv(u), a), b);
            R[static_cast<std::size_t>(a) * n + b] = static_cast<int32_t>(u * n + v);
        }
    return R;
}

}  // namespace

TEST_CASE("flip and identity pair maps are involutive solutions") {
    BraidedMap flip = flip_solution(5);
    REQUIRE(flip.ybe);
    REQUIRE(flip.involutive);
    REQUIRE(flip.left_nondeg);
    REQUIRE(flip.right_nondeg);

    std::vector<int32_t> id(25);
    std::iota(id.begin(), id.end(), 0);
    auto v = check_braided(5, std::move(id));
    REQUIRE(v.ok());
    REQUIRE(v->ybe);
    REQUIRE(v->involutive);
}

TEST_CASE("a non-bijective pair table is a structural error") {
    std::vector<int32_t> R(9, 0);
    auto v = check_braided(3, std::move(R));
    REQUIRE_FALSE(v.ok());
    REQUIRE(v.report.structural.has_value());
}

TEST_CASE("a bijective non-solution gets a witness triple") {
    // walk transpositions of the flip table until the braid relation breaks
    // (some swaps only relabel a component and stay solutions)
    BraidedMap flip = flip_solution(3);
    bool found = false;
    for (int i = 0; i < 9 && !found; ++i)
        for (int j = i + 1; j < 9 && !found; ++j) {
            auto R = flip.R;
            std::swap(R[static_cast<std::size_t>(i)], R[static_cast<std::size_t>(j)]);
            auto v = check_braided(3, std::move(R));
            REQUIRE(v.ok());  // transpositions keep R bijective
            if (!v->ybe) {
                REQUIRE(v.report.find("ybe")->witness.size() == 3);
                found = true;
            }
        }
    REQUIRE(found);
}

TEST_CASE("R_G of a trivial brace is the flip") {
    for (int n : {2, 5, 8}) {
        auto g = make_trivial_brace(make_cyclic_group(n));
        REQUIRE(solution_from_brace(g) == flip_solution(n));
    }
}

TEST_CASE("R_G of the Z4 trivial brace passes every verdict exhaustively") {
    auto rg = solution_from_brace(make_trivial_brace(make_cyclic_group(4)));
    REQUIRE((rg.ybe && rg.involutive && rg.left_nondeg && rg.right_nondeg));
}

TEST_CASE("solution_from_brace rejects skew braces") {
    Brace sd6 = make_sd6_brace();
    auto skew = validate_brace(sd6.circ, sd6.circ, BraceKind::skew_brace);
    REQUIRE_THROWS_AS(solution_from_brace(*skew), std::invalid_argument);
}

TEST_CASE("the Heisenberg solution is (y + half[x,y], x + half[x,y])") {
    const auto& hb = heis3();
    const auto& f = hb.field;
    BraidedMap rg = solution_from_brace(hb.brace);
    for (int x = 0; x < 27; ++x) {
        auto xd = hb.decode(x);
        for (int y = 0; y < 27; ++y) {
            auto yd = hb.decode(y);
            int hb2 = f.mul(f.half, f.sub(f.mul(xd[0], yd[1]), f.mul(xd[1], yd[0])));
            int first = hb.encode(yd[0], yd[1], f.add(yd[2], hb2));
            int second = hb.encode(xd[0], xd[1], f.add(xd[2], hb2));
            REQUIRE(rg.apply(x * 27 + y) == first * 27 + second);
        }
    }
    int e1 = hb.encode(1, 0, 0), e2 = hb.encode(0, 1, 0);
    REQUIRE(rg.first(e1 * 27 + e2) == hb.encode(0, 1, 2));
    REQUIRE(rg.second(e1 * 27 + e2) == hb.encode(1, 0, 2));
}

TEST_CASE("derived solutions: flip stays flip, R_G derives to the flip") {
    BraidedMap flip = flip_solution(6);
    REQUIRE(derived_solution(flip) == flip);
    for (const Brace& g : {make_trivial_brace(make_cyclic_group(6)), make_nil4_brace()})
        REQUIRE(derived_solution(solution_from_brace(g)) == flip_solution(g.size()));
    REQUIRE(derived_solution(solution_from_brace(heis3().brace)) == flip_solution(27));
}

TEST_CASE("the companion skew brace yields a non-involutive solution whose derived map still solves") {
    LinearMap3 m{};
    m.m[0] = 1;  // class i
    auto rbo = is_relative_rbo(adj3(), linear_to_carrier(m, 3));
    PostBrace pb = induce_post_brace(*rbo);
    Brace comp = companion_skew_brace(pb.post_group());
    auto v = check_braided(27, formula_solution(comp));
    REQUIRE(v.ok());
    REQUIRE(v->ybe);
    REQUIRE_FALSE(v->involutive);
    REQUIRE(v->left_nondeg);
    BraidedMap derived = derived_solution(*v.value);
    REQUIRE(derived.ybe);
}

TEST_CASE("omega1(a,b) = (lambda_a(b), a) intertwines R_G with the flip") {
    Brace nil4 = make_nil4_brace();
    for (const Brace* g : std::initializer_list<const Brace*>{&nil4, &heis3().brace}) {
        int n = g->size();
        BraidedMap rg = solution_from_brace(*g);
        std::vector<int32_t> omega1(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                omega1[static_cast<std::size_t>(a) * n + b] = static_cast<int32_t>(g->lambda(a, b) * n + a);
        REQUIRE(is_pair_bijection(omega1));
        REQUIRE(is_drinfeld_hom(rg, flip_solution(n), omega1));
    }
}

TEST_CASE("is_drinfeld_hom detects failures and matches a direct recomputation") {
    const auto& hb = heis3();
    BraidedMap rg = solution_from_brace(hb.brace);
    BraidedMap flip = flip_solution(27);
    std::vector<int32_t> id(27 * 27);
    std::iota(id.begin(), id.end(), 0);
    REQUIRE(is_drinfeld_hom(rg, rg, id));
    REQUIRE_FALSE(is_drinfeld_hom(rg, flip, id));  // R_G is not the flip here

    std::mt19937 rng(0xd1f);
    std::vector<int32_t> omega = id;
    std::shuffle(omega.begin(), omega.end(), rng);
    bool direct = true;
    for (int p = 0; p < 27 * 27; ++p)
        if (omega[static_cast<std::size_t>(rg.apply(p))] != flip.apply(omega[static_cast<std::size_t>(p)]))
            direct = false;
    REQUIRE(is_drinfeld_hom(rg, flip, omega) == direct);
}

TEST_CASE("strict homomorphisms: the identity map on a brace solution") {
    BraidedMap rg = solution_from_brace(make_nil4_brace());
    REQUIRE(is_strict_hom(rg, rg, identity_map(4)));
    REQUIRE(is_strict_hom(rg, flip_solution(1), constant_map(4, 1, 0)));
}

TEST_CASE("post-brace solutions: trivial rhd gives R1 = R2 and identity omega") {
    auto g = make_nil4_brace();
    std::vector<int32_t> rhd(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rhd[static_cast<std::size_t>(a) * 4 + b] = static_cast<int32_t>(b);
    auto pb = validate_post_brace(g, std::move(rhd));
    REQUIRE(pb.ok());
    PostBraceSolutions sols = post_brace_solutions(*pb);
    REQUIRE(sols.R1 == sols.R2);
    for (int p = 0; p < 16; ++p) REQUIRE(sols.omega_bar[static_cast<std::size_t>(p)] == p);
}

TEST_CASE("class-i operators: R2 and omega-bar follow the closed bracket forms") {
    const auto& hb = heis3();
    const auto& f = hb.field;
    LinearMap3 m{};
    m.m = {1, 0, 0, 0, 0, 0, 0, 2, 0};  // class i with B(e3) = 0
    auto B = linear_to_carrier(m, 3);
    auto rbo = is_relative_rbo(adj3(), B);
    REQUIRE(rbo.ok());
    PostBraceSolutions sols = rrbo_solutions(*rbo);
    REQUIRE(sols.R1 == solution_from_brace(hb.brace));
    REQUIRE_FALSE(sols.R1 == sols.R2);
    REQUIRE(sols.R2.involutive);

    for (int x = 0; x < 27; ++x) {
        auto xd = hb.decode(x);
        auto bx = hb.decode(B(x));
        for (int y = 0; y < 27; ++y) {
            auto yd = hb.decode(y);
            auto by = hb.decode(B(y));
            int half_br = f.mul(f.half, f.sub(f.mul(xd[0], yd[1]), f.mul(xd[1], yd[0])));
            int bxy = f.sub(f.mul(bx[0], yd[1]), f.mul(bx[1], yd[0]));
            int xby = f.sub(f.mul(xd[0], by[1]), f.mul(xd[1], by[0]));
            int first = hb.encode(yd[0], yd[1], f.add(yd[2], f.add(half_br, bxy)));
            int second = hb.encode(xd[0], xd[1], f.add(xd[2], f.add(half_br, xby)));
            REQUIRE(sols.R2.apply(x * 27 + y) == first * 27 + second);
            REQUIRE(sols.omega_bar[static_cast<std::size_t>(x) * 27 + y] ==
                    x * 27 + hb.encode(yd[0], yd[1], f.sub(yd[2], bxy)));
        }
    }
    REQUIRE(is_drinfeld_hom(sols.R1, sols.R2, sols.omega_bar));
    REQUIRE(is_pair_bijection(sols.omega_bar));
}

TEST_CASE("rrbo solutions of the zero operator coincide") {
    auto rbo = is_relative_rbo(adj3(), constant_map(27, 27, 0));
    PostBraceSolutions sols = rrbo_solutions(*rbo);
    REQUIRE(sols.R1 == sols.R2);
}

TEST_CASE("solution files round-trip; duplicate outputs and bad syntax are rejected") {
    BraidedMap rg = solution_from_brace(make_trivial_brace(make_cyclic_group(3)));
    std::ostringstream first;
    emit_solution(rg, first);
    std::istringstream in(first.str());
    auto parsed = parse_solution(in);
    REQUIRE(parsed.ok());
    REQUIRE(*parsed.value == rg);
    std::ostringstream second;
    emit_solution(*parsed, second);
    REQUIRE(first.str() == second.str());

    // repeated output pair => not a bijection
    std::istringstream dup("solution n=2\n0 0 -> 0 0\n0 1 -> 0 0\n1 0 -> 1 0\n1 1 -> 1 1\n");
    auto v1 = parse_solution(dup);
    REQUIRE_FALSE(v1.ok());
    REQUIRE(v1.report.structural.has_value());

    std::istringstream dup_in("solution n=2\n0 0 -> 0 0\n0 0 -> 0 1\n1 0 -> 1 0\n1 1 -> 1 1\n");
    REQUIRE_FALSE(parse_solution(dup_in).ok());

    std::istringstream zero("solution n=0\n");
    REQUIRE_FALSE(parse_solution(zero).ok());

    std::istringstream arrow("solution n=1\n0 0 => 0 0\n");
    REQUIRE_FALSE(parse_solution(arrow).ok());
}
