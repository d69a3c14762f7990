// Command-line front end. run() is the whole program minus main(), taking
// argv and the output streams so tests can drive it directly.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotcert/engine.hpp"
#include "knotcert/front.hpp"
#include "knotcert/shake.hpp"

#ifndef KNOTCERT_REGISTRY_DEFAULT
#define KNOTCERT_REGISTRY_DEFAULT ""
#endif

namespace knotcert::cli {

inline std::string render_interval(const std::string& name, const Interval& iv) {
    std::string line = name + " " + iv.to_string();
    line += "  [t" + std::to_string(iv.lo.trace) + ",t" + std::to_string(iv.hi.trace) + "]";
    auto cav = iv.caveats();
    if (cav.count(CAVEAT_SPC4)) line += " (mod SPC4)";
    return line;
}

inline Registry load_registry(const std::string& path) {
    if (!path.empty()) return Registry::from_file(path);
    std::string def = KNOTCERT_REGISTRY_DEFAULT;
    if (!def.empty()) {
        std::ifstream probe(def);
        if (probe) return Registry::from_file(def);
    }
    return builtin_registry();
}

inline std::string render_value(const Interval& iv) {
    if (iv.exact()) return bound_str(iv.lo.value);
    return bound_str(iv.lo.value) + ".." + bound_str(iv.hi.value);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"knotcert: certified knot concordance invariant bounds"};
    app.require_subcommand(1);

    std::string registry_path;
    app.add_option("--registry", registry_path, "pattern registry JSON file");

    // eval
    auto* eval = app.add_subcommand("eval", "invariant report for an expression");
    std::string eval_expr;
    std::vector<int> eval_rs;
    bool eval_json = false;
    std::vector<int> explain_ids;
    eval->add_option("expr", eval_expr, "knot expression")->required();
    eval->add_option("--r", eval_rs, "shake parameters to report");
    eval->add_flag("--json", eval_json, "emit the JSON report");
    eval->add_option("--explain", explain_ids, "trace ids to expand");
    std::vector<int> assume_suitable;
    std::vector<int> assume_witness;
    bool assume_slice = false;
    eval->add_option("--assume-suitable", assume_suitable,
                     "inject an external r-suitability certificate (audited)");
    eval->add_option("--assume-witness", assume_witness,
                     "inject an external Legendrian witness: tb rot")
        ->expected(2);
    eval->add_flag("--assume-slice", assume_slice, "inject an external sliceness certificate");

    // table
    auto* table = app.add_subcommand("table", "satellite-iterate family table");
    std::string table_pattern, table_base, table_format = "text", table_path = "auto";
    int table_r = 0, table_iters = 4;
    table->add_option("--pattern", table_pattern, "registry pattern name")->required();
    table->add_option("--base", table_base, "base companion expression")->required();
    table->add_option("--r", table_r, "satellite twist");
    table->add_option("--iters", table_iters, "number of iterations");
    table->add_option("--format", table_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));
    table->add_option("--path", table_path, "derivation path")
        ->check(CLI::IsMember({"auto", "closed", "per-term"}));

    // verdict
    auto* verdict = app.add_subcommand("verdict", "r-shake-sliceness verdict");
    std::string verdict_expr, verdict_witness;
    int verdict_r = 0;
    verdict->add_option("expr", verdict_expr, "knot expression")->required();
    verdict->add_option("--r", verdict_r, "shake parameter")->required();
    verdict->add_option("--witness", verdict_witness,
                        "ribbon pattern name for a characterization witness");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "front-diagram tb/rot oracle");
    std::string oracle_file, oracle_fixture;
    std::vector<int> oracle_torus;
    std::vector<int> oracle_random;
    oracle->add_option("--file", oracle_file, "front word file (L i / R i / X i lines)");
    oracle->add_option("--fixture", oracle_fixture, "builtin fixture")
        ->check(CLI::IsMember({"unknot", "rht"}));
    oracle->add_option("--torus", oracle_torus, "torus front parameters p q")->expected(2);
    oracle->add_option("--random", oracle_random, "seeded random front: seed size")->expected(2);

    // compare-gluings
    auto* cmp = app.add_subcommand("compare-gluings",
                                   "iterated vs composed satellite gluing comparison");
    std::string cmp_p, cmp_q;
    int cmp_wp = 1, cmp_wq = 1, cmp_r = 0, cmp_s = 0;
    bool have_wp = false, have_wq = false;
    cmp->add_option("--pattern-p", cmp_p, "outer pattern name");
    cmp->add_option("--pattern-q", cmp_q, "inner pattern name");
    cmp->add_option("--wp", cmp_wp, "outer winding number")->each([&](const std::string&) {
        have_wp = true;
    });
    cmp->add_option("--wq", cmp_wq, "inner winding number")->each([&](const std::string&) {
        have_wq = true;
    });
    cmp->add_option("--r", cmp_r, "inner twist")->required();
    cmp->add_option("--s", cmp_s, "outer twist")->required();

    // registry
    auto* regcmd = app.add_subcommand("registry", "pattern registry inspection");
    std::string reg_action = "list";
    regcmd->add_option("action", reg_action, "list or validate")
        ->check(CLI::IsMember({"list", "validate"}));

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        Registry reg = load_registry(registry_path);

        if (*eval) {
            Engine en(reg);
            KnotExpr e = normalize(parse_expr(eval_expr, reg), reg);
            for (int r : assume_suitable) en.inject_suit_cert(e, r);
            if (assume_witness.size() == 2)
                en.inject_witness(e, assume_witness[0], assume_witness[1]);
            if (assume_slice) en.inject_slice_cert(e);
            nlohmann::json j = en.report(e, eval_rs);
            if (eval_json) {
                out << j.dump(2) << "\n";
            } else {
                const Facts& f = en.store().facts_for(e);
                out << "expr: " << to_string(e) << "\n";
                out << render_interval("g4", f.g4) << "\n";
                out << render_interval("tau", f.tau) << "\n";
                out << render_interval("s", f.s) << "\n";
                for (const auto& [r, iv] : f.gsh)
                    out << render_interval("gsh^" + std::to_string(r), iv) << "\n";
                if (is_finite(f.tb_lo.value))
                    out << "tb >= " << bound_str(f.tb_lo.value) << "  [t" << f.tb_lo.trace
                        << "]\n";
                out << "arf = " << f.arf.to_string() << "  [t" << f.arf.trace << "]\n";
                for (const auto& w : f.witnesses)
                    out << "witness (" << w.tb << "," << w.rot << ")  [t" << w.trace << "]\n";
                for (const auto& c : f.certs)
                    out << "suitable at r = " << c.r << "  [t" << c.trace << "]\n";
            }
            for (int id : explain_ids) out << en.arena().explain(id);
            return 0;
        }

        if (*table) {
            Engine en(reg);
            KnotExpr base = parse_expr(table_base, reg);
            Engine::TablePath path = table_path == "closed" ? Engine::TablePath::ClosedForm
                                     : table_path == "per-term" ? Engine::TablePath::PerTerm
                                                                : Engine::TablePath::Auto;
            auto rows = en.family_table(PatternRef::named(table_pattern), base, table_r,
                                        table_iters, path);
            if (table_format == "csv") {
                out << "i,g4,tau,s,gsh_r,caveats\n";
                for (const auto& r : rows) {
                    out << r.i << "," << render_value(r.g4) << "," << render_value(r.tau) << ","
                        << render_value(r.s) << "," << (r.gsh ? render_value(*r.gsh) : "") << ",";
                    bool first = true;
                    for (const auto& c : r.caveats) {
                        out << (first ? "" : ";") << c;
                        first = false;
                    }
                    out << "\n";
                }
            } else {
                for (const auto& r : rows) {
                    out << "i=" << r.i << "  " << render_interval("g4", r.g4) << "  "
                        << render_interval("tau", r.tau) << "  " << render_interval("s", r.s);
                    if (r.gsh)
                        out << "  " << render_interval("gsh^" + std::to_string(table_r), *r.gsh);
                    out << "\n";
                }
            }
            return 0;
        }

        if (*verdict) {
            Engine en(reg);
            KnotExpr e = parse_expr(verdict_expr, reg);
            std::optional<CharWitness> w;
            if (!verdict_witness.empty()) w = CharWitness{verdict_witness};
            Verdict v = en.shake_slice_verdict(e, verdict_r, w);
            out << "verdict: " << v.kind_str() << " (" << v.reason << ")";
            if (v.caveats.count(CAVEAT_SPC4)) out << " (mod SPC4)";
            out << "\n";
            return 0;
        }

        if (*oracle) {
            OrientedFront f;
            if (!oracle_file.empty()) f = validate(FrontWord::from_file(oracle_file));
            else if (oracle_fixture == "unknot") f = unknot_front();
            else if (oracle_fixture == "rht") f = rht_front();
            else if (oracle_torus.size() == 2) f = torus_front(oracle_torus[0], oracle_torus[1]);
            else if (oracle_random.size() == 2)
                f = random_front(static_cast<unsigned>(oracle_random[0]), oracle_random[1]);
            else {
                err << "error: oracle needs --file, --fixture, --torus or --random\n";
                return 2;
            }
            auto [tb, rot] = tb_rot(f);
            out << "tb=" << tb << " rot=" << rot << " events=" << f.word.events.size() << "\n";
            return 0;
        }

        if (*cmp) {
            int wp = cmp_wp, wq = cmp_wq;
            if (!cmp_p.empty()) wp = reg.at(cmp_p).w;
            else if (!have_wp) {
                err << "error: compare-gluings needs --pattern-p or --wp\n";
                return 2;
            }
            if (!cmp_q.empty()) wq = reg.at(cmp_q).w;
            else if (!have_wq) {
                err << "error: compare-gluings needs --pattern-q or --wq\n";
                return 2;
            }
            GluingComparison c = compare_gluings(wp, wq, cmp_r, cmp_s);
            if (c.equal) out << "Equal\n";
            else out << "Mismatch: " << to_string(c.mismatch) << "\n";
            return 0;
        }

        if (*regcmd) {
            if (reg_action == "validate") {
                auto diags = reg.validate();
                if (diags.empty()) out << "registry valid\n";
                for (const auto& d : diags) out << "warning: " << d << "\n";
            } else {
                for (const auto& [name, d] : reg.patterns()) {
                    out << name << ": w=" << d.w;
                    if (d.n_geom) out << " n_geom=" << *d.n_geom;
                    if (d.g4_lo && d.g4_hi) out << " g4=[" << *d.g4_lo << "," << *d.g4_hi << "]";
                    out << " leg_pairs={";
                    bool first = true;
                    for (const auto& [tb, rot] : d.leg_pairs) {
                        out << (first ? "" : " ") << "(" << tb << "," << rot << ")";
                        first = false;
                    }
                    out << "}";
                    if (d.tilde_slice && *d.tilde_slice) out << " tilde_slice";
                    if (d.tilde_ribbon && *d.tilde_ribbon) out << " tilde_ribbon";
                    if (d.meridian_ng && *d.meridian_ng) out << " meridian_ng";
                    out << "\n";
                }
            }
            return 0;
        }
    } catch (const ContradictionError& e) {
        err << "contradiction: " << e.what() << " (traces t" << e.lo_trace() << ", t"
            << e.hi_trace() << ")\n";
        return 1;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const RuleError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace knotcert::cli
