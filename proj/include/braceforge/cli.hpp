// Command-line front door.  Exit codes: 0 = every requested verdict true,
// 1 = some verdict false (witness printed), 2 = usage or format error.
// Verdict output is deterministic; timings go to the error stream.

#pragma once

#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "braceforge/selftest.hpp"

namespace braceforge::cli {

namespace detail {

inline void print_report(const Report& rep, std::ostream& out, bool machine) {
    if (!machine) {
        rep.print(out);
        return;
    }
    using nlohmann::json;
    if (rep.structural) {
        out << json{{"subject", rep.subject}, {"error", *rep.structural}}.dump() << '\n';
        return;
    }
    for (const auto& v : rep.verdicts) {
        json j{{"subject", rep.subject},
               {"verdict", v.name},
               {"pass", v.pass},
               {"exhaustive", rep.exhaustive}};
        if (!v.pass) j["witness"] = v.witness;
        if (!v.detail.empty()) j["law"] = v.detail;
        out << j.dump() << '\n';
    }
}

inline int report_exit(const Report& rep) {
    if (rep.structural) return 2;
    return rep.ok() ? 0 : 1;
}

inline bool open_input(const std::string& path, std::ifstream& is, std::ostream& err) {
    is.open(path);
    if (!is) {
        err << "error: cannot open '" << path << "'\n";
        return false;
    }
    return true;
}

inline bool open_output(const std::string& path, std::ofstream& os, std::ostream& err) {
    os.open(path);
    if (!os) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

inline std::string first_word(const std::string& path) {
    std::ifstream probe(path);
    std::string word;
    probe >> word;
    return word;
}

// n rows of n entries, used by `ybe --post <rhd-file>`
inline bool parse_rhd_file(std::istream& is, int n, std::vector<int32_t>& rhd, std::string& err) {
    int lineno = 0;
    if (!braceforge::detail::parse_table_rows(is, n, rhd, lineno, err)) return false;
    return braceforge::detail::reject_trailing(is, lineno, err);
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite brace / Rota-Baxter / Yang-Baxter toolkit", "braceforge"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads for exhaustive scans");

    // validate
    std::string v_file;
    bool v_post = false, v_machine = false;
    auto* validate = app.add_subcommand("validate", "validate a group, brace or post-brace file");
    validate->add_option("file", v_file)->required();
    validate->add_flag("--post", v_post, "treat the file as a post-brace file");
    validate->add_flag("--machine", v_machine, "one JSON record per verdict");

    // enumerate-rbo
    std::string e_file, e_action = "adjoint";
    bool e_enh = false, e_count = false, e_noprune = false;
    auto* enumerate = app.add_subcommand("enumerate-rbo", "enumerate relative Rota-Baxter operators");
    enumerate->add_option("brace-file", e_file)->required();
    enumerate->add_option("--action", e_action, "adjoint | trivial | <permutation file>");
    enumerate->add_flag("--enhanced-only", e_enh);
    enumerate->add_flag("--count-only", e_count);
    enumerate->add_flag("--no-prune", e_noprune, "brute force over all maps (small carriers)");

    // ybe
    std::string y_file, y_rhd, y_export;
    bool y_drinfeld = false, y_machine = false;
    auto* ybe = app.add_subcommand("ybe", "Yang-Baxter solutions from a brace or post-brace");
    ybe->add_option("brace-file", y_file)->required();
    ybe->add_option("--post", y_rhd, "rhd table file; solutions of the post-brace");
    ybe->add_flag("--check-drinfeld", y_drinfeld);
    ybe->add_option("--export", y_export, "write the solution file");
    ybe->add_flag("--machine", y_machine);

    // factorize
    std::string f_brace, f_rbo;
    int f_element = -1;
    auto* factorize_cmd = app.add_subcommand("factorize", "factorization through an enhanced operator");
    factorize_cmd->add_option("brace-file", f_brace)->required();
    factorize_cmd->add_option("rbo-file", f_rbo)->required();
    factorize_cmd->add_option("--element", f_element, "factor a single element");

    // matched-pair
    auto* mp_cmd = app.add_subcommand("matched-pair", "matched pairs of braces");
    mp_cmd->require_subcommand(1);
    std::string mp_vfile, mp_dfile, mp_export;
    auto* mp_validate = mp_cmd->add_subcommand("validate", "validate a matched-pair file");
    mp_validate->add_option("file", mp_vfile)->required();
    auto* mp_double = mp_cmd->add_subcommand("double", "build the double brace");
    mp_double->add_option("file", mp_dfile)->required();
    mp_double->add_option("--export", mp_export, "write the double as a brace file");

    // heisenberg
    int h_p = 3;
    bool h_census = false;
    std::string h_emit_brace, h_emit_rbo, h_rbo_out;
    auto* heis = app.add_subcommand("heisenberg", "Heisenberg brace over F_p and its operators");
    heis->add_option("--p", h_p, "odd prime")->required();
    heis->add_flag("--census", h_census, "brute-force census vs closed-form classes");
    heis->add_option("--emit-brace", h_emit_brace, "write the brace file");
    heis->add_option("--emit-rbo", h_emit_rbo,
                     "class:params  (enhanced:B31,B32 | class_i:B11,B12,B21,B22,B31,B32 | "
                     "class_ii_iii:B33,u,B31,B32)");
    heis->add_option("--rbo-out", h_rbo_out, "where to write the operator file");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the full acceptance suite");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 2;
    }
    if (threads > 0) set_thread_cap(threads);

    try {
        if (validate->parsed()) {
            std::ifstream is;
            if (!detail::open_input(v_file, is, err)) return 2;
            Report rep;
            if (v_post) {
                rep = parse_post_brace(is).report;
            } else {
                std::string kind = detail::first_word(v_file);
                if (kind == "group")
                    rep = parse_group(is).report;
                else
                    rep = parse_brace(is).report;
            }
            detail::print_report(rep, out, v_machine);
            return detail::report_exit(rep);
        }

        if (enumerate->parsed()) {
            std::ifstream is;
            if (!detail::open_input(e_file, is, err)) return 2;
            auto brace = parse_brace(is);
            if (!brace) {
                detail::print_report(brace.report, out, false);
                return 2;
            }
            SemiTrivialAction act = [&] {
                if (e_action == "adjoint") return adjoint_action(*brace);
                if (e_action == "trivial") return trivial_action(*brace, *brace);
                std::ifstream as(e_action);
                if (!as) throw std::invalid_argument("cannot open action file '" + e_action + "'");
                std::vector<Permutation> phi;
                std::string line;
                int lineno = 0;
                std::vector<int32_t> row;
                std::string rowerr;
                for (int a = 0; a < brace->size(); ++a) {
                    if (!braceforge::detail::read_data_line(as, line, lineno) ||
                        !braceforge::detail::parse_row(line, brace->size(), row, rowerr))
                        throw std::invalid_argument("action file: row " + std::to_string(a + 1) +
                                                    ": " + rowerr);
                    phi.push_back(Permutation{row});
                }
                auto v = validate_semi_trivial_action(*brace, *brace, std::move(phi));
                if (!v) throw std::invalid_argument("action file does not define a semi-trivial action");
                return *v.value;
            }();
            auto ops = enumerate_relative_rbos(act, {.enhanced_only = e_enh, .prune = !e_noprune});
            out << "count: " << ops.size() << '\n';
            if (!e_count)
                for (const auto& op : ops) {
                    for (int h = 0; h < op.B.src_n; ++h) out << (h ? " " : "") << op.B(h);
                    out << "  enhanced=" << (op.enhanced ? 1 : 0) << '\n';
                }
            return 0;
        }

        if (ybe->parsed()) {
            std::ifstream is;
            if (!detail::open_input(y_file, is, err)) return 2;
            auto brace = parse_brace(is);
            if (!brace) {
                detail::print_report(brace.report, out, y_machine);
                return 2;
            }
            if (y_rhd.empty()) {
                BraidedMap rg = solution_from_brace(*brace);
                Report rep = check_braided(rg.n, rg.R).report;
                rep.subject = "R_G";
                detail::print_report(rep, out, y_machine);
                if (y_drinfeld) {
                    BraidedMap flip = flip_solution(rg.n);
                    BraidedMap rd = derived_solution(rg);
                    out << "derived-is-flip: " << (rd == flip ? "ok" : "FAIL") << '\n';
                }
                if (!y_export.empty()) {
                    std::ofstream os;
                    if (!detail::open_output(y_export, os, err)) return 2;
                    emit_solution(rg, os);
                }
                return detail::report_exit(rep);
            }
            std::ifstream rs;
            if (!detail::open_input(y_rhd, rs, err)) return 2;
            std::vector<int32_t> rhd;
            std::string perr;
            if (!detail::parse_rhd_file(rs, brace->size(), rhd, perr)) {
                err << "error: rhd file: " << perr << '\n';
                return 2;
            }
            auto pb = validate_post_brace(std::move(*brace.value), std::move(rhd));
            if (!pb) {
                detail::print_report(pb.report, out, y_machine);
                return detail::report_exit(pb.report);
            }
            PostBraceSolutions sols = post_brace_solutions(*pb);
            Report rep;
            rep.subject = "post-brace-solutions";
            rep.add("R1", sols.R1.ybe && sols.R1.involutive && sols.R1.left_nondeg && sols.R1.right_nondeg);
            rep.add("R2", sols.R2.ybe && sols.R2.involutive && sols.R2.left_nondeg && sols.R2.right_nondeg);
            if (y_drinfeld)
                rep.add("drinfeld", is_pair_bijection(sols.omega_bar) &&
                                        is_drinfeld_hom(sols.R1, sols.R2, sols.omega_bar));
            detail::print_report(rep, out, y_machine);
            if (!y_export.empty()) {
                std::ofstream os;
                if (!detail::open_output(y_export, os, err)) return 2;
                emit_solution(sols.R2, os);
            }
            return detail::report_exit(rep);
        }

        if (factorize_cmd->parsed()) {
            std::ifstream bs, rs;
            if (!detail::open_input(f_brace, bs, err) || !detail::open_input(f_rbo, rs, err))
                return 2;
            auto brace = parse_brace(bs);
            if (!brace) {
                detail::print_report(brace.report, out, false);
                return 2;
            }
            if (!brace->two_sided) {
                out << "two-sided: FAIL  (factorization requires a two-sided brace)\n";
                return 1;
            }
            auto B = parse_rbo(rs, brace->size());
            if (!B) {
                detail::print_report(B.report, out, false);
                return 2;
            }
            if (B->src_n != brace->size()) {
                err << "error: operator carrier does not match the brace\n";
                return 2;
            }
            auto rbo = is_two_sided_rbo(*brace, *B);
            detail::print_report(rbo.report, out, false);
            if (!rbo || !rbo->enhanced()) return 1;
            FactorizationData fd = factorization_data(*rbo);
            out << "G+: " << fd.gplus.size() << "  G-: " << fd.gminus.size()
                << "  K+: " << fd.kplus.size() << "  K-: " << fd.kminus.size()
                << "  |G_Theta|: " << fd.g_theta.size() << '\n';
            auto emit_one = [&](int a) {
                auto [ap, am] = factorize(fd, *rbo, a);
                out << "element " << a << ": a+ = " << ap << "  a- = " << am << '\n';
            };
            if (f_element >= 0) {
                if (f_element >= brace->size()) {
                    err << "error: element out of range\n";
                    return 2;
                }
                emit_one(f_element);
            } else {
                for (int a = 0; a < brace->size(); ++a) emit_one(a);
            }
            return 0;
        }

        if (mp_cmd->parsed()) {
            if (mp_validate->parsed()) {
                std::ifstream is;
                if (!detail::open_input(mp_vfile, is, err)) return 2;
                auto mp = parse_matched_pair(is);
                detail::print_report(mp.report, out, false);
                return detail::report_exit(mp.report);
            }
            std::ifstream is;
            if (!detail::open_input(mp_dfile, is, err)) return 2;
            auto mp = parse_matched_pair(is);
            if (!mp) {
                detail::print_report(mp.report, out, false);
                return detail::report_exit(mp.report);
            }
            Brace dbl = double_brace(*mp);
            out << "double: n=" << dbl.size() << "  two-sided: " << (dbl.two_sided ? "ok" : "no")
                << '\n';
            if (!mp_export.empty()) {
                std::ofstream os;
                if (!detail::open_output(mp_export, os, err)) return 2;
                emit_brace(dbl, os);
            }
            return 0;
        }

        if (heis->parsed()) {
            HeisenbergBrace hb = build_heisenberg_brace(h_p);
            out << "heisenberg: p=" << h_p << " n=" << hb.size() << " two-sided: ok\n";
            if (!h_emit_brace.empty()) {
                std::ofstream os;
                if (!detail::open_output(h_emit_brace, os, err)) return 2;
                emit_brace(hb.brace, os);
            }
            if (h_census) {
                CensusResult c = census(hb, adjoint_action(hb.brace));
                out << "census: maps=" << c.total_maps << " operators=" << c.rbos.size() << '\n';
                out << "  class_i: " << c.count_class_i + c.count_enhanced
                    << " (of which enhanced: " << c.count_enhanced << ")\n";
                out << "  class_ii_iii: " << c.count_class_ii_iii << '\n';
                out << "  agreement: " << (c.classification_agrees && c.enhanced_agrees ? "ok" : "FAIL")
                    << '\n';
                if (!c.classification_agrees || !c.enhanced_agrees) return 1;
            }
            if (!h_emit_rbo.empty()) {
                auto colon = h_emit_rbo.find(':');
                std::string cls = h_emit_rbo.substr(0, colon);
                std::vector<int> par;
                if (colon != std::string::npos) {
                    std::istringstream ps(h_emit_rbo.substr(colon + 1));
                    std::string tok;
                    while (std::getline(ps, tok, ',')) par.push_back(std::stoi(tok));
                }
                auto md = [&](int v) { return ((v % h_p) + h_p) % h_p; };
                LinearMap3 m{};
                if (cls == "enhanced" && par.size() == 2) {
                    m.m = {0, 0, 0, 0, 0, 0, md(par[0]), md(par[1]), 0};
                } else if (cls == "class_i" && par.size() == 6) {
                    m.m = {md(par[0]), md(par[1]), 0, md(par[2]), md(par[3]), 0, md(par[4]), md(par[5]), 0};
                } else if (cls == "class_ii_iii" && par.size() == 4) {
                    int b33 = md(par[0]), u = md(par[1]);
                    m.m = {u, 0, 0, 0, u, 0, md(par[2]), md(par[3]), b33};
                } else {
                    err << "error: --emit-rbo expects class:params\n";
                    return 2;
                }
                RboClass got = classify_linear_rbo(m, h_p);
                bool match = (cls == "enhanced" && got == RboClass::enhanced) ||
                             (cls == "class_i" && (got == RboClass::class_i || got == RboClass::enhanced)) ||
                             (cls == "class_ii_iii" && got == RboClass::class_ii_iii);
                if (!match) {
                    err << "error: parameters do not satisfy the " << cls << " constraints\n";
                    return 2;
                }
                CarrierMap B = linear_to_carrier(m, h_p);
                if (!h_rbo_out.empty()) {
                    std::ofstream os;
                    if (!detail::open_output(h_rbo_out, os, err)) return 2;
                    emit_rbo(B, os);
                } else {
                    emit_rbo(B, out);
                }
            }
            return 0;
        }

        if (selftest->parsed()) {
            return run_selftest(out, err) ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace braceforge::cli
