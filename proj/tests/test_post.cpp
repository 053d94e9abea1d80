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

std::vector<int32_t> trivial_rhd(int n) {
    std::vector<int32_t> rhd(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) rhd[static_cast<std::size_t>(a) * n + b] = static_cast<int32_t>(b);
    return rhd;
}

PostBrace class_i_post_brace(int b11, int b12, int b21, int b22, int b31 = 0, int b32 = 0) {
    LinearMap3 m{};
    m.m = {b11, b12, 0, b21, b22, 0, b31, b32, 0};
    REQUIRE(classify_linear_rbo(m, 3) != RboClass::none);
    auto rbo = is_relative_rbo(adj3(), linear_to_carrier(m, 3));
    REQUIRE(rbo.ok());
    return induce_post_brace(*rbo);
}

}  // namespace

TEST_CASE("trivial rhd is a post-group on any group; sub-adjacent star equals circ") {
    for (int n : {1, 2, 5, 6}) {
        GroupTable g = make_cyclic_group(n);
        auto pg = validate_post_group(g, trivial_rhd(n));
        REQUIRE(pg.ok());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) REQUIRE(pg->star_at(a, b) == g.at(a, b));
    }
}

TEST_CASE("the zero operator induces the trivial rhd on the Heisenberg brace") {
    auto rbo = is_relative_rbo(adj3(), constant_map(27, 27, 0));
    REQUIRE(rbo.ok());
    PostBrace pb = induce_post_brace(*rbo);
    REQUIRE(pb.rhd == trivial_rhd(27));
    REQUIRE(pb.sub_adjacent.circ == heis3().brace.circ);
}

TEST_CASE("rhd from an enhanced operator follows x rhd y = y + [B(x),y]") {
    LinearMap3 m{};
    m.m[6] = 1;  // B31 = 1
    auto B = linear_to_carrier(m, 3);
    auto rbo = is_relative_rbo(adj3(), B);
    REQUIRE(rbo.ok());
    REQUIRE(rbo->enhanced);
    PostBrace pb = induce_post_brace(*rbo);
    const auto& hb = heis3();
    const auto& f = hb.field;
    int e1 = hb.encode(1, 0, 0), e2 = hb.encode(0, 1, 0);
    REQUIRE(pb.rhd_at(e2, e1) == e1);  // B(e2) is central here
    for (int x = 0; x < 27; ++x) {
        auto bx = hb.decode(B(x));
        for (int y = 0; y < 27; ++y) {
            auto yd = hb.decode(y);
            int br = f.sub(f.mul(bx[0], yd[1]), f.mul(bx[1], yd[0]));
            REQUIRE(pb.rhd_at(x, y) == hb.encode(yd[0], yd[1], f.add(yd[2], br)));
        }
    }
}

TEST_CASE("a perturbed rhd table is rejected with a witness") {
    GroupTable g = make_cyclic_group(4);
    auto rhd = trivial_rhd(4);
    std::swap(rhd[1 * 4 + 2], rhd[1 * 4 + 3]);  // row 1 stays a bijection
    auto pg = validate_post_group(g, rhd);
    REQUIRE_FALSE(pg.ok());
    bool witnessed = false;
    for (const auto& v : pg.report.verdicts)
        if (!v.pass && !v.witness.empty()) witnessed = true;
    REQUIRE(witnessed);
}

TEST_CASE("validate_post_brace rejects skew input and dimension mismatches") {
    Brace sd6 = make_sd6_brace();
    auto skew = validate_brace(sd6.circ, sd6.circ, BraceKind::skew_brace);
    auto r1 = validate_post_brace(*skew, trivial_rhd(6));
    REQUIRE_FALSE(r1.ok());
    REQUIRE(r1.report.structural.has_value());

    auto g = make_trivial_brace(make_cyclic_group(3));
    auto r2 = validate_post_brace(g, trivial_rhd(4));
    REQUIRE_FALSE(r2.ok());
    REQUIRE(r2.report.structural.has_value());
}

TEST_CASE("sub-adjacent star table: e1*e2 = (1,1,2) for class i with B11=B21=0") {
    PostBrace pb = class_i_post_brace(0, 0, 0, 0);
    const auto& hb = heis3();
    int e1 = hb.encode(1, 0, 0), e2 = hb.encode(0, 1, 0);
    REQUIRE(sub_adjacent_brace(pb).circ_at(e1, e2) == hb.encode(1, 1, 2));
    REQUIRE(sub_adjacent_brace(pb).circ_at(e2, e1) == hb.encode(1, 1, 1));
}

TEST_CASE("star reproduces x+y+[B(x),y]+half[x,y] on all 729 pairs") {
    LinearMap3 m{};
    m.m = {1, 0, 0, 0, 0, 0, 2, 1, 0};  // class i: det 0, with B31,B32 set
    auto B = linear_to_carrier(m, 3);
    auto rbo = is_relative_rbo(adj3(), B);
    REQUIRE(rbo.ok());
    PostBrace pb = induce_post_brace(*rbo);
    const auto& hb = heis3();
    const auto& f = hb.field;
    for (int x = 0; x < 27; ++x) {
        auto xd = hb.decode(x);
        auto bx = hb.decode(B(x));
        for (int y = 0; y < 27; ++y) {
            auto yd = hb.decode(y);
            int br = f.sub(f.mul(xd[0], yd[1]), f.mul(xd[1], yd[0]));
            int brb = f.sub(f.mul(bx[0], yd[1]), f.mul(bx[1], yd[0]));
            int expect = hb.encode(f.add(xd[0], yd[0]), f.add(xd[1], yd[1]),
                                   f.add(f.add(xd[2], yd[2]), f.add(brb, f.mul(f.half, br))));
            REQUIRE(pb.star_at(x, y) == expect);
        }
    }
}

TEST_CASE("dagger inverse: trivial rhd gives the circ inverse; identity is self-dagger") {
    auto g = make_nil4_brace();
    auto pg = validate_post_group(g.circ, trivial_rhd(4));
    REQUIRE(pg.ok());
    for (int a = 0; a < 4; ++a) REQUIRE(dagger_inverse(*pg, a) == g.circ_inv(a));
    REQUIRE(dagger_inverse(*pg, 0) == 0);
}

TEST_CASE("dagger inverse follows -x + [B(x),x] on the Heisenberg post-braces") {
    PostBrace pb = class_i_post_brace(1, 0, 0, 0, 2, 0);
    PostGroup pg = pb.post_group();
    const auto& hb = heis3();
    const auto& f = hb.field;
    LinearMap3 m{};
    m.m = {1, 0, 0, 0, 0, 0, 2, 0, 0};
    auto B = linear_to_carrier(m, 3);
    for (int x = 0; x < 27; ++x) {
        auto xd = hb.decode(x);
        auto bx = hb.decode(B(x));
        int c = f.sub(f.mul(bx[0], xd[1]), f.mul(bx[1], xd[0]));
        int expect = hb.encode(f.neg(xd[0]), f.neg(xd[1]), f.add(f.neg(xd[2]), c));
        int dag = dagger_inverse(pg, x);
        REQUIRE(dag == expect);
        REQUIRE(pg.star_at(x, dag) == 0);
        REQUIRE(pg.star_at(dag, x) == 0);
    }
}

TEST_CASE("companion skew brace: trivial rhd yields (G,circ,circ)") {
    auto g = make_nil4_brace();
    auto pg = validate_post_group(g.circ, trivial_rhd(4));
    Brace comp = companion_skew_brace(*pg);
    REQUIRE(comp.kind == BraceKind::skew_brace);
    REQUIRE(comp.dot == g.circ);
    REQUIRE(comp.circ == g.circ);
}

TEST_CASE("companion skew brace of a Heisenberg post-group validates at 27") {
    PostBrace pb = class_i_post_brace(1, 0, 0, 0);
    Brace comp = companion_skew_brace(pb.post_group());
    REQUIRE(comp.size() == 27);
    REQUIRE_FALSE(comp.dot.is_abelian());
    auto v = validate_brace(comp.dot, comp.circ, BraceKind::skew_brace);
    REQUIRE(v.ok());

    // enhanced operators act through the center, so their rhd is trivial and
    // the companion collapses to (G,circ,circ)
    PostBrace enh = class_i_post_brace(0, 0, 0, 0, 1, 0);
    Brace cenh = companion_skew_brace(enh.post_group());
    REQUIRE(cenh.dot == heis3().brace.circ);
    REQUIRE(cenh.circ == heis3().brace.circ);
}

TEST_CASE("identity operator on the sub-adjacent brace round-trips rhd and companion") {
    PostBrace pb = class_i_post_brace(0, 1, 0, 0);
    const Brace& sub = sub_adjacent_brace(pb);

    // L-rhd rows act as a semi-trivial action of (G,.,*) on (G,.,circ)
    std::vector<Permutation> lrhd;
    for (int a = 0; a < pb.size(); ++a) {
        Permutation p;
        p.image.resize(static_cast<std::size_t>(pb.size()));
        for (int b = 0; b < pb.size(); ++b) p.image[static_cast<std::size_t>(b)] = static_cast<int32_t>(pb.rhd_at(a, b));
        lrhd.push_back(std::move(p));
    }
    auto act = validate_semi_trivial_action(sub, pb.brace, lrhd);
    REQUIRE(act.ok());

    auto id_rbo = is_relative_rbo(*act, identity_map(pb.size()));
    REQUIRE(id_rbo.ok());
    PostBrace again = induce_post_brace(*id_rbo);
    REQUIRE(again.rhd == pb.rhd);

    Brace comp = companion_skew_brace(again.post_group());
    REQUIRE(comp.dot == pb.brace.circ);
    REQUIRE(comp.circ == sub.circ);
}

TEST_CASE("post-brace homomorphisms: identity passes, mismatched rhd fails") {
    PostBrace pb1 = class_i_post_brace(1, 0, 0, 0);
    PostBrace pb2 = class_i_post_brace(0, 1, 0, 0);
    REQUIRE(is_post_brace_hom(pb1, pb1, identity_map(27)));
    // same brace both sides, different rhd: identity preserves dot and circ
    // but breaks only the rhd equation
    REQUIRE_FALSE(is_post_brace_hom(pb1, pb2, identity_map(27)));
}

TEST_CASE("post-group unit laws and the sub-adjacent action property") {
    PostBrace pb = class_i_post_brace(1, 2, 2, 1);  // det = 1-4 = 0 mod 3
    for (int a = 0; a < pb.size(); ++a) {
        REQUIRE(pb.rhd_at(a, 0) == 0);
        REQUIRE(pb.rhd_at(0, a) == a);
    }
    // L_{a*b} = L_a after L_b
    const Brace& sub = sub_adjacent_brace(pb);
    for (int a = 0; a < pb.size(); ++a)
        for (int b = 0; b < pb.size(); ++b)
            for (int c = 0; c < pb.size(); ++c)
                REQUIRE(pb.rhd_at(sub.circ_at(a, b), c) == pb.rhd_at(a, pb.rhd_at(b, c)));
}

TEST_CASE("post-brace file round-trips and the CLI-facing parser rejects bad tables") {
    PostBrace pb = class_i_post_brace(0, 0, 1, 0);
    std::ostringstream first;
    emit_post_brace(pb, first);
    std::istringstream in(first.str());
    auto parsed = parse_post_brace(in);
    REQUIRE(parsed.ok());
    REQUIRE(parsed->rhd == pb.rhd);
    std::ostringstream second;
    emit_post_brace(*parsed, second);
    REQUIRE(first.str() == second.str());

    std::istringstream bad("brace n=2 kind=brace\n0 1\n1 0\n\n0 1\n1 0\n\n0 1\n0 0\n");
    auto v = parse_post_brace(bad);
    REQUIRE_FALSE(v.ok());  // rhd row 1 is not a bijection
}
