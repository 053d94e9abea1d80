// The acceptance suite: ten criteria, each exhaustive at the stated scale,
// one pass/fail line per criterion.  `run_selftest` is what both the
// `selftest` CLI subcommand and the acceptance test binary execute.

#pragma once

#include "braceforge/heisenberg.hpp"
#include "braceforge/matched_pairs.hpp"
#include "braceforge/ybe.hpp"

namespace braceforge {

// ---------------------------------------------------------------------------
// Small test corpus

// Brace on Z4 from the nil ring 2Z/8Z: a∘b = a+b+2ab (mod 4); circ is Klein.
inline Brace make_nil4_brace() {
    GroupTable dot = make_cyclic_group(4);
    GroupTable circ;
    circ.n = 4;
    circ.table.resize(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) circ.set(a, b, (a + b + 2 * a * b) % 4);
    circ.compute_inverses();
    auto v = validate_brace(std::move(dot), std::move(circ), BraceKind::brace);
    if (!v) throw std::logic_error("make_nil4_brace: construction failed");
    return *v.value;
}

// Brace on Z6 with circ ≅ S3: semidirect product of the trivial braces on Z3
// and Z2 along inversion.  Not two-sided.
inline Brace make_sd6_brace() {
    Brace g2 = make_trivial_brace(make_cyclic_group(2));
    Brace g3 = make_trivial_brace(make_cyclic_group(3));
    std::vector<Permutation> phi{Permutation::identity(3), Permutation{{0, 2, 1}}};
    auto act = validate_semi_trivial_action(g2, g3, std::move(phi));
    if (!act) throw std::logic_error("make_sd6_brace: inversion action failed validation");
    return semidirect_product(act->G, act->H, act->phi);
}

// Trivial braces on the cyclic groups Z2..Z8.
inline std::vector<Brace> trivial_brace_corpus() {
    std::vector<Brace> out;
    for (int n = 2; n <= 8; ++n) out.push_back(make_trivial_brace(make_cyclic_group(n)));
    return out;
}

// ---------------------------------------------------------------------------

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline bool eq4_holds(const Brace& g) {
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b)
            if (g.circ_at(a, g.dot_inv(b)) !=
                g.dot_at(g.dot_at(a, g.dot_inv(g.circ_at(a, b))), a))
                return false;
    return true;
}

// a⁻¹∘b = b·(a∘b)⁻¹·b on two-sided braces (dot inverses throughout)
inline bool eq5_holds(const Brace& g) {
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b)
            if (g.circ_at(g.dot_inv(a), b) !=
                g.dot_at(g.dot_at(b, g.dot_inv(g.circ_at(a, b))), b))
                return false;
    return true;
}

inline CarrierMap random_linear_map(std::mt19937& rng, int p) {
    LinearMap3 m;
    std::uniform_int_distribution<int> d(0, p - 1);
    for (auto& e : m.m) e = d(rng);
    return linear_to_carrier(m, p);
}

}  // namespace detail

class Selftest {
  public:
    Selftest() {
        heis3_ = build_heisenberg_brace(3);
        adj3_ = adjoint_action(heis3_.brace);
    }

    std::vector<CriterionResult> run(std::ostream& out, std::ostream& timing) {
        std::vector<CriterionResult> results;
        Stopwatch total;
        using Fn = CriterionResult (Selftest::*)();
        const std::pair<const char*, Fn> table[] = {
            {"heisenberg-validity", &Selftest::c1_heisenberg},
            {"census-agreement", &Selftest::c2_census},
            {"brace-solutions", &Selftest::c3_solutions},
            {"drinfeld-pairs", &Selftest::c4_drinfeld},
            {"iff-pairs", &Selftest::c5_iff_pairs},
            {"factorization", &Selftest::c6_factorization},
            {"matched-pairs", &Selftest::c7_matched_pairs},
            {"structural-identities", &Selftest::c8_identities},
            {"dual-path-enumeration", &Selftest::c9_dual_path},
        };
        int idx = 1;
        bool all = true;
        for (auto [name, fn] : table) {
            CriterionResult r;
            Stopwatch sw;
            try {
                r = (this->*fn)();
            } catch (const std::exception& e) {
                r.pass = false;
                r.detail = std::string("exception: ") + e.what();
            }
            r.index = idx++;
            r.name = name;
            r.seconds = sw.seconds();
            all &= r.pass;
            print_line(out, timing, r);
            results.push_back(std::move(r));
        }
        CriterionResult r10;
        r10.index = 10;
        r10.name = "selftest-budget";
        r10.seconds = total.seconds();
        r10.pass = all && r10.seconds < 300.0;
        r10.detail = all ? "criteria 1-9 green" : "a previous criterion failed";
        print_line(out, timing, r10);
        results.push_back(std::move(r10));
        return results;
    }

  private:
    HeisenbergBrace heis3_;
    SemiTrivialAction adj3_;
    std::optional<CensusResult> census3_;
    std::optional<Brace> sd729_;
    std::vector<Brace> descendants_;       // per census operator, matrix order
    std::vector<Brace> doubles_;           // per enhanced operator
    std::vector<TransportedBrace> transported_;

    static void print_line(std::ostream& out, std::ostream& timing, const CriterionResult& r) {
        out << "criterion " << r.index << " [" << r.name << "]: " << (r.pass ? "PASS" : "FAIL");
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << '\n' << std::flush;
        timing << "# criterion " << r.index << " took " << r.seconds << " s\n" << std::flush;
    }

    const CensusResult& census() {
        if (!census3_) census3_ = braceforge::census(heis3_, adj3_);
        return *census3_;
    }

    const Brace& sd729() {
        if (!sd729_) sd729_ = semidirect_product(heis3_.brace, heis3_.brace, adj3_.phi);
        return *sd729_;
    }

    RelativeRBO rel_of(const CensusEntry& e) const {
        return RelativeRBO{adj3_, e.B, e.is_enhanced};
    }

    // 1. build_heisenberg_brace(p) validates with two_sided=true for p in
    //    {3,5,7}; under 10 s total.
    CriterionResult c1_heisenberg() {
        CriterionResult r;
        Stopwatch sw;
        bool ok = heis3_.brace.two_sided;
        for (int p : {5, 7}) {
            HeisenbergBrace hb = build_heisenberg_brace(p);
            ok &= hb.brace.two_sided && validate_brace(hb.brace.dot, hb.brace.circ).ok();
        }
        double sec = sw.seconds();
        r.pass = ok && sec < 10.0;
        r.detail = "p=3,5,7 validated in " + std::to_string(sec) + " s";
        return r;
    }

    // 2. census at p=3: brute force equals the closed-form classification,
    //    enhanced count exactly 9; brute < 60 s, pruned < 5 s and same set.
    CriterionResult c2_census() {
        CriterionResult r;
        Stopwatch brute_sw;
        const CensusResult& c = census();
        double brute_sec = census3_ ? brute_sw.seconds() : 0.0;

        Stopwatch pruned_sw;
        auto pruned = enumerate_relative_rbos(adj3_);
        double pruned_sec = pruned_sw.seconds();

        std::vector<std::vector<int32_t>> census_images, pruned_images;
        for (const auto& e : c.rbos) census_images.push_back(e.B.image);
        for (const auto& op : pruned) pruned_images.push_back(op.B.image);
        std::sort(census_images.begin(), census_images.end());

        bool ok = c.classification_agrees && c.enhanced_agrees && c.count_enhanced == 9 &&
                  census_images == pruned_images && brute_sec < 60.0 && pruned_sec < 5.0;
        r.pass = ok;
        r.detail = std::to_string(c.rbos.size()) + " operators (" +
                   std::to_string(c.count_class_i + c.count_enhanced) + " in class i, " +
                   std::to_string(c.count_class_ii_iii) + " in classes ii/iii, " +
                   std::to_string(c.count_enhanced) + " enhanced); brute " +
                   std::to_string(brute_sec) + " s, pruned " + std::to_string(pruned_sec) + " s";
        return r;
    }

    // 3. R_G is a non-degenerate involutive solution on every corpus brace:
    //    trivial Z2..Z8, the Heisenberg brace, and all census descendants.
    CriterionResult c3_solutions() {
        CriterionResult r;
        std::vector<const Brace*> corpus;
        std::vector<Brace> trivials = trivial_brace_corpus();
        for (const auto& b : trivials) corpus.push_back(&b);
        corpus.push_back(&heis3_.brace);
        if (descendants_.empty())
            for (const auto& e : census().rbos) descendants_.push_back(descendent_brace(rel_of(e)));
        for (const auto& d : descendants_) corpus.push_back(&d);

        std::size_t checked = 0;
        for (const Brace* b : corpus) {
            BraidedMap rg = solution_from_brace(*b);
            if (!(rg.ybe && rg.involutive && rg.left_nondeg && rg.right_nondeg)) {
                r.pass = false;
                r.detail = "R_G verdict failed on a corpus brace of size " + std::to_string(b->size());
                return r;
            }
            ++checked;
        }
        r.pass = true;
        r.detail = std::to_string(checked) + " braces, all verdicts exact";
        return r;
    }

    // 4. For every census operator the two induced solutions satisfy
    //    ω̄R1 = R2ω̄ exactly, ω̄ bijective; for enhanced members ω̄ matches
    //    the closed form (x, y−[B(x),y]).
    CriterionResult c4_drinfeld() {
        CriterionResult r;
        const int n = heis3_.size();
        std::size_t closed_checked = 0;
        for (const auto& e : census().rbos) {
            PostBraceSolutions sols = rrbo_solutions(rel_of(e));
            if (!is_pair_bijection(sols.omega_bar) ||
                !is_drinfeld_hom(sols.R1, sols.R2, sols.omega_bar)) {
                r.pass = false;
                r.detail = "Drinfel'd relation failed";
                return r;
            }
            if (e.is_enhanced) {
                const PrimeField& f = heis3_.field;
                for (int x = 0; x < n; ++x) {
                    auto bx = heis3_.decode(e.B(x));
                    for (int y = 0; y < n; ++y) {
                        auto yd = heis3_.decode(y);
                        int br = f.sub(f.mul(bx[0], yd[1]), f.mul(bx[1], yd[0]));
                        int expect = x * n + heis3_.encode(yd[0], yd[1], f.sub(yd[2], br));
                        if (sols.omega_bar[static_cast<std::size_t>(x) * n + y] != expect) {
                            r.pass = false;
                            r.detail = "closed form for ω̄ failed on an enhanced member";
                            return r;
                        }
                    }
                }
                ++closed_checked;
            }
        }
        r.pass = true;
        r.detail = std::to_string(census().rbos.size()) + " operators, " +
                   std::to_string(closed_checked) + " closed-form checks";
        return r;
    }

    // 5. Graph criterion and factorization criterion as iffs, on all census
    //    operators plus 1000 seeded random additive maps.
    CriterionResult c5_iff_pairs() {
        CriterionResult r;
        std::vector<CarrierMap> maps;
        for (const auto& e : census().rbos) maps.push_back(e.B);
        std::mt19937 rng(0x5eedu);
        for (int i = 0; i < 1000; ++i) maps.push_back(detail::random_linear_map(rng, 3));

        const Brace& sd = sd729();
        std::size_t rbos = 0, enhanced = 0;
        for (const auto& B : maps) {
            auto ver = is_relative_rbo(adj3_, B);
            bool graph = graph_is_subbrace(sd, adj3_, B);
            if (graph != ver.ok()) {
                r.pass = false;
                r.detail = "graph criterion disagreed with the equational check";
                return r;
            }
            bool enh = ver.ok() && ver->enhanced;
            bool crit = factor_ideal_criterion(heis3_.brace, heis3_.brace, adj3_.phi, B);
            if (crit != enh) {
                r.pass = false;
                r.detail = "factorization criterion disagreed with the enhanced verdict";
                return r;
            }
            rbos += ver.ok();
            enhanced += enh;
        }
        r.pass = true;
        r.detail = std::to_string(maps.size()) + " maps (" + std::to_string(rbos) +
                   " operators, " + std::to_string(enhanced) + " enhanced), zero disagreements";
        return r;
    }

    // 6. Every element factors uniquely through G_Θ for every enhanced
    //    member, with both decomposition identities.
    CriterionResult c6_factorization() {
        CriterionResult r;
        std::size_t members = 0;
        for (const auto& e : census().rbos) {
            if (!e.is_enhanced) continue;
            auto ts = is_two_sided_rbo(adj3_, e.B);
            if (!ts || !ts->enhanced()) {
                r.pass = false;
                r.detail = "census member lost the enhanced verdict";
                return r;
            }
            FactorizationData fd = factorization_data(*ts);
            for (int a = 0; a < heis3_.size(); ++a) {
                auto [ap, am] = factorize(fd, *ts, a);  // throws on any failure
                if (fd.bplus(a) != ap || ts->B()(a) != am) {
                    r.pass = false;
                    r.detail = "factor components differ from (B₊(a), B(a))";
                    return r;
                }
            }
            ++members;
        }
        r.pass = members == 9;
        r.detail = std::to_string(members) + " enhanced members, 27 elements each";
        return r;
    }

    // 7. mp_from_enhanced_rbo validates for every enhanced member and its
    //    double equals the transported brace through ξ_B.
    CriterionResult c7_matched_pairs() {
        CriterionResult r;
        doubles_.clear();
        transported_.clear();
        for (const auto& e : census().rbos) {
            if (!e.is_enhanced) continue;
            RelativeRBO rel = rel_of(e);
            MatchedPairBraces mp = mp_from_enhanced_rbo(rel);  // validates inside
            Brace dbl = double_brace(mp);                      // validates at 729
            TransportedBrace tb =
                transported_brace(heis3_.brace, heis3_.brace, adj3_.phi, e.B, sd729());
            if (!xi_intertwines_double_and_transport(rel, dbl, tb)) {
                r.pass = false;
                r.detail = "ξ_B failed to intertwine double and transported structures";
                return r;
            }
            doubles_.push_back(std::move(dbl));
            transported_.push_back(std::move(tb));
        }
        r.pass = doubles_.size() == 9;
        r.detail = std::to_string(doubles_.size()) + " matched pairs, doubles validated at 729";
        return r;
    }

    // 8. Structural identities on every structure the suite constructs.
    CriterionResult c8_identities() {
        CriterionResult r;
        std::vector<const Brace*> braces;
        std::vector<Brace> trivials = trivial_brace_corpus();
        Brace nil4 = make_nil4_brace(), sd6 = make_sd6_brace();
        HeisenbergBrace heis5 = build_heisenberg_brace(5);
        for (const auto& b : trivials) braces.push_back(&b);
        braces.push_back(&nil4);
        braces.push_back(&sd6);
        braces.push_back(&heis3_.brace);
        braces.push_back(&heis5.brace);
        if (descendants_.empty())
            for (const auto& e : census().rbos) descendants_.push_back(descendent_brace(rel_of(e)));
        for (const auto& d : descendants_) braces.push_back(&d);
        braces.push_back(&sd729());
        for (const auto& d : doubles_) braces.push_back(&d);

        std::size_t eq4 = 0, eq5 = 0;
        for (const Brace* b : braces) {
            if (!detail::eq4_holds(*b)) {
                r.pass = false;
                r.detail = "a∘b⁻¹ = a·(a∘b)⁻¹·a failed";
                return r;
            }
            ++eq4;
            if (b->two_sided) {
                if (!detail::eq5_holds(*b)) {
                    r.pass = false;
                    r.detail = "a⁻¹∘b = b·(a∘b)⁻¹·b failed";
                    return r;
                }
                ++eq5;
            }
        }

        // unit laws of every induced post-brace; enhanced identities
        std::size_t units = 0, enh_prop = 0, enh_comm = 0, derived = 0;
        for (const auto& e : census().rbos) {
            RelativeRBO rel = rel_of(e);
            PostBrace pb = induce_post_brace(rel);
            for (int a = 0; a < pb.size(); ++a)
                if (pb.rhd_at(a, 0) != 0 || pb.rhd_at(0, a) != a) {
                    r.pass = false;
                    r.detail = "post-group unit law failed";
                    return r;
                }
            ++units;
            if (e.is_enhanced) {
                if (!enhance_property_check(rel)) {
                    r.pass = false;
                    r.detail = "a∘B(k) = B(Φ(a)k)·a failed";
                    return r;
                }
                ++enh_prop;
                const Brace& g = heis3_.brace;
                for (int b = 0; b < g.size(); ++b)
                    if (g.circ_at(b, e.B(b)) != g.dot_at(e.B(b), b)) {
                        r.pass = false;
                        r.detail = "b∘B(b) = B(b)·b failed";
                        return r;
                    }
                ++enh_comm;
            }
        }

        // derived solution of R_G is the flip, everywhere R_G was built
        for (const Brace* b : braces) {
            if (b->size() > 64) continue;  // flip identity is checked at desk scale
            BraidedMap rg = solution_from_brace(*b);
            if (!(derived_solution(rg) == flip_solution(b->size()))) {
                r.pass = false;
                r.detail = "derived solution of R_G is not the flip";
                return r;
            }
            ++derived;
        }

        r.pass = true;
        r.detail = std::to_string(eq4) + " braces, " + std::to_string(eq5) +
                   " two-sided, " + std::to_string(units) + " post-braces, " +
                   std::to_string(derived) + " derived-flip checks";
        return r;
    }

    // 9. Pruned enumeration equals no-prune brute force on every corpus
    //    brace with |H| ≤ 9.
    CriterionResult c9_dual_path() {
        CriterionResult r;
        std::vector<std::pair<std::string, SemiTrivialAction>> actions;
        for (Brace& b : trivial_brace_corpus())
            actions.emplace_back("Z" + std::to_string(b.size()) + " trivial", trivial_action(b, b));
        Brace z9 = make_trivial_brace(make_cyclic_group(9));
        Brace z33 = make_trivial_brace(make_direct_product(make_cyclic_group(3), make_cyclic_group(3)));
        Brace nil4 = make_nil4_brace(), sd6 = make_sd6_brace();
        actions.emplace_back("Z9 trivial", trivial_action(z9, z9));
        actions.emplace_back("Z3xZ3 trivial", trivial_action(z33, z33));
        actions.emplace_back("nil4", trivial_action(nil4, nil4));
        actions.emplace_back("sd6", trivial_action(sd6, sd6));
        // a non-trivial action: Z3 acting on Z7 by doubling
        {
            Brace g3 = make_trivial_brace(make_cyclic_group(3));
            Brace g7 = make_trivial_brace(make_cyclic_group(7));
            std::vector<Permutation> phi;
            for (int a = 0; a < 3; ++a) {
                Permutation p;
                p.image.resize(7);
                int mult = a == 0 ? 1 : (a == 1 ? 2 : 4);
                for (int x = 0; x < 7; ++x) p.image[static_cast<std::size_t>(x)] = static_cast<int32_t>(x * mult % 7);
                phi.push_back(std::move(p));
            }
            auto act = validate_semi_trivial_action(g3, g7, std::move(phi));
            if (!act) throw std::logic_error("doubling action failed validation");
            actions.emplace_back("Z3 on Z7 by doubling", std::move(*act.value));
        }

        std::size_t total_ops = 0;
        for (auto& [name, act] : actions) {
            auto pruned = enumerate_relative_rbos(act, {.prune = true});
            auto brute = enumerate_relative_rbos(act, {.prune = false});
            auto key = [](const std::vector<RelativeRBO>& v) {
                std::vector<std::vector<int32_t>> k;
                for (const auto& op : v) k.push_back(op.B.image);
                return k;
            };
            if (key(pruned) != key(brute)) {
                r.pass = false;
                r.detail = "pruned and brute-force enumerations differ on " + name;
                return r;
            }
            for (const auto& op : pruned)
                for (const auto& op2 : brute)
                    if (op.B == op2.B && op.enhanced != op2.enhanced)
                        throw std::logic_error("enhanced verdicts differ between paths");
            total_ops += pruned.size();
        }
        r.pass = true;
        r.detail = std::to_string(actions.size()) + " actions, " + std::to_string(total_ops) +
                   " operators, set equality both paths";
        return r;
    }
};

inline bool run_selftest(std::ostream& out, std::ostream& timing) {
    int saved = max_carrier();
    set_max_carrier(std::max(saved, 1024));
    bool all = true;
    try {
        Selftest st;
        auto results = st.run(out, timing);
        for (const auto& r : results) all &= r.pass;
    } catch (...) {
        set_max_carrier(saved);
        throw;
    }
    set_max_carrier(saved);
    return all;
}

}  // namespace braceforge
