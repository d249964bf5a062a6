#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuspi/lla/formula.hpp"
#include "fuspi/mach/machine.hpp"
#include "fuspi/pi/bisim.hpp"
#include "fuspi/pi/parse.hpp"
#include "fuspi/pi/print.hpp"
#include "fuspi/verify/applicable.hpp"
#include "fuspi/verify/corpus.hpp"
#include "fuspi/verify/lockstep.hpp"
#include "fuspi/verify/probe.hpp"
#include "fuspi/verify/typing.hpp"

// Command layer of the workbench binary. Everything lives behind run_cli so
// the text-format tests can drive the exact code path the binary uses.
//
// Exit codes: 0 success or pass, 1 input or verification failure (parse
// errors, type errors, mismatches, "no" verdicts), 2 usage errors.

namespace fuspi::cli {

namespace detail {

// --gamma/--delta accept the arrow letters directly or their ASCII aliases.
inline std::string ascii_word(std::string w) {
    auto replace_all = [&](const std::string& from, const std::string& to) {
        size_t pos = 0;
        while ((pos = w.find(from, pos)) != std::string::npos) {
            w.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all("↓", "v");
    replace_all("↑", "^");
    return w;
}

inline lam::TypeCtx parse_ctx(const std::string& spec) {
    if (spec.empty()) return {};
    return verify::detail::parse_ctx_directive(spec, "<command line>");
}

struct StrategyOpts {
    std::string preset;
    std::string gamma, delta;

    void attach(CLI::App* cmd, bool required) {
        auto* s = cmd->add_option("--strategy,-s", preset,
                                  "preset: cbn-classical, cbn-int, cbv-classical, cbv-int, simply");
        auto* g = cmd->add_option("--gamma", gamma, "value word for a custom strategy");
        auto* d = cmd->add_option("--delta", delta, "term word for a custom strategy");
        s->excludes(g)->excludes(d);
        g->needs(d);
        d->needs(g);
        if (required) {
            // one of the two spellings must be present
            cmd->parse_complete_callback([this] {
                if (preset.empty() && gamma.empty())
                    throw CLI::RequiredError("--strategy or --gamma/--delta");
            });
        }
    }

    trans::Strategy resolve() const {
        if (!gamma.empty())
            return trans::make_strategy("custom", ascii_word(gamma), ascii_word(delta));
        return trans::strategy_named(preset.empty() ? "cbn-classical" : preset);
    }
};

inline NameVec result_channels(int width) {
    NameVec ys;
    for (int i = 0; i < width; ++i) ys.push_back(mkname("r" + std::to_string(i + 1)));
    return ys;
}

inline int simple_width(const lam::MP& term, const lam::TypeCtx& ctx) {
    auto& st = trans::strategy_named("simply");
    lam::TP ty = lam::typecheck(term, ctx);
    return lla::arity(trans::tr_type(ty, st), trans::type_arities(st));
}

inline void print_trace_structured(const verify::CorrespondenceReport& rep, std::ostream& out) {
    for (const auto& r : rep.records) {
        out << "step: " << r.index << "\n";
        out << "exec: " << r.action << "\n";
        out << "process: " << r.process << "\n";
        out << "labels:";
        for (const auto& l : r.labels) out << " " << l;
        out << "\n";
        out << "verdict: " << (r.structural ? "structural" : r.bisim_used ? "bisimilar" : "open")
            << "\n\n";
    }
    out << "step: end\n";
    out << "exec: terminal " << rep.terminal_machine << "\n";
    out << "process: terminal " << rep.terminal_process << "\n";
    out << "labels:";
    for (int i = 0; i < rep.drained_taus; ++i) out << " tau";
    out << "\n";
    out << "verdict: " << (rep.ok ? "pass" : "fail " + rep.failure) << "\n";
}

inline void print_trace_text(const verify::CorrespondenceReport& rep, std::ostream& out) {
    for (const auto& r : rep.records) {
        out << "step " << r.index << ": " << r.action << " (" << r.taus
            << (r.taus == 1 ? " tau, " : " taus, ")
            << (r.structural ? "structural" : r.bisim_used ? "bisimilar" : "open") << ")\n";
        out << "  " << r.process << "\n";
    }
    out << "terminal: machine " << rep.terminal_machine << ", process " << rep.terminal_process;
    if (rep.drained_taus) out << " after " << rep.drained_taus << " drained taus";
    out << "\n" << (rep.ok ? "pass" : "fail: " + rep.failure) << "\n";
}

struct VerifyCounts {
    int passed = 0, failed = 0, skipped = 0;
};

inline void verify_entry(const verify::CorpusEntry& e, const trans::Strategy& st,
                         VerifyCounts& counts, std::ostream& out) {
    std::string head = e.name + " x " + st.name + ": ";
    if (st.simply) {
        auto rep = verify::check_hlr_correspondence(e.term, e.ctx);
        auto typ = verify::check_typing_preservation(e.term, e.ctx, e.muctx, st);
        if (rep.ok && typ.ok) {
            ++counts.passed;
            out << head << "PASS reductions=" << rep.steps << " fallbacks=" << rep.bisim_fallbacks
                << "\n";
        } else {
            ++counts.failed;
            out << head << "FAIL " << (rep.ok ? typ.failure : rep.failure) << "\n";
        }
        return;
    }
    auto rep = verify::check_step_correspondence(e.term, st);
    auto typ = verify::check_typing_preservation(e.term, e.ctx, e.muctx, st);
    auto live = verify::deadlock_probe(e.term, e.ctx, e.muctx, st);
    if (rep.ok && typ.ok && live.ok) {
        ++counts.passed;
        out << head << "PASS steps=" << rep.steps << " fallbacks=" << rep.bisim_fallbacks
            << " terminal=" << rep.terminal_machine << "\n";
    } else {
        ++counts.failed;
        out << head << "FAIL "
            << (!rep.ok ? rep.failure : !typ.ok ? typ.failure : "liveness: " + live.failure)
            << "\n";
    }
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"workbench for process translations of the lambda-mu calculus"};
    app.require_subcommand(1);

    // parse
    std::string parse_text;
    bool parse_lmu = false, parse_lla = false;
    auto* cmd_parse = app.add_subcommand("parse", "parse and pretty-print back");
    cmd_parse->add_option("text", parse_text, "source text")->required();
    auto* o_lmu = cmd_parse->add_flag("--lmu", parse_lmu, "treat the input as a term");
    auto* o_lla = cmd_parse->add_flag("--lla", parse_lla, "treat the input as a formula");
    o_lmu->excludes(o_lla);

    // typecheck
    std::string tc_text, tc_ctx, tc_muctx;
    auto* cmd_tc = app.add_subcommand("typecheck", "type a term and print its type");
    cmd_tc->add_option("term", tc_text, "term source")->required();
    cmd_tc->add_option("--context,-c", tc_ctx, "term variables, e.g. \"x : X, f : X -> X\"");
    cmd_tc->add_option("--mucontext", tc_muctx, "continuation variables, same syntax");

    // translate
    std::string tr_text, tr_chan = "u", tr_ctx;
    detail::StrategyOpts tr_st;
    auto* cmd_tr = app.add_subcommand("translate", "translate a term to a process");
    cmd_tr->add_option("term", tr_text, "term source")->required();
    tr_st.attach(cmd_tr, true);
    cmd_tr->add_option("--channel", tr_chan, "result channel (default u)");
    cmd_tr->add_option("--context,-c", tr_ctx, "term variables (needed for simply)");

    // run
    std::string run_text;
    detail::StrategyOpts run_st;
    long run_max = 10000;
    bool run_quiet = false;
    auto* cmd_run = app.add_subcommand("run", "run the abstract machine to a terminal state");
    cmd_run->add_option("term", run_text, "term source")->required();
    run_st.attach(cmd_run, true);
    cmd_run->add_option("--max-steps", run_max, "step budget (default 10000)");
    cmd_run->add_flag("--quiet,-q", run_quiet, "only print the terminal state");

    // trace
    std::string trace_text, trace_format = "text";
    detail::StrategyOpts trace_st;
    long trace_max = 10000;
    auto* cmd_trace = app.add_subcommand("trace", "machine/process lockstep trace");
    cmd_trace->add_option("term", trace_text, "term source")->required();
    trace_st.attach(cmd_trace, true);
    cmd_trace->add_option("--format", trace_format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd_trace->add_option("--max-steps", trace_max, "step budget (default 10000)");

    // verify
    std::string v_corpus, v_file, v_strategy;
    auto* cmd_verify = app.add_subcommand("verify", "run the harness over corpus entries");
    cmd_verify->add_option("--corpus", v_corpus, "corpus directory (default the built-in one)");
    cmd_verify->add_option("--file", v_file, "verify a single corpus file");
    cmd_verify->add_option("--strategy,-s", v_strategy, "restrict to one strategy");

    // bisim
    std::string b_left, b_right;
    Budget b_budget;
    auto* cmd_bisim = app.add_subcommand("bisim", "bounded bisimilarity of two processes");
    cmd_bisim->add_option("left", b_left, "first process")->required();
    cmd_bisim->add_option("right", b_right, "second process")->required();
    cmd_bisim->add_option("--depth", b_budget.bisim_depth, "match depth (default 12)");
    cmd_bisim->add_option("--unfold", b_budget.replication_unfold,
                          "replication unfoldings (default 32)");

    // probe
    std::string p_text, p_ctx, p_muctx;
    detail::StrategyOpts p_st;
    auto* cmd_probe = app.add_subcommand("probe", "deadlock-freeness probe for a translation");
    cmd_probe->add_option("term", p_text, "term source")->required();
    p_st.attach(cmd_probe, true);
    cmd_probe->add_option("--context,-c", p_ctx, "term variables");
    cmd_probe->add_option("--mucontext", p_muctx, "continuation variables");

    std::vector<const char*> argv;
    argv.push_back("fuspi");
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*cmd_parse) {
            if (parse_lmu)
                out << lam::to_string(lam::parse_term(parse_text)) << "\n";
            else if (parse_lla)
                out << lla::to_string(lla::parse_formula(parse_text)) << "\n";
            else
                out << pi::to_string(pi::parse(parse_text)) << "\n";
            return 0;
        }

        if (*cmd_tc) {
            lam::TP ty = lam::typecheck(lam::parse_term(tc_text), detail::parse_ctx(tc_ctx),
                                        detail::parse_ctx(tc_muctx));
            out << lam::to_string(ty) << "\n";
            return 0;
        }

        if (*cmd_tr) {
            trans::Strategy st = tr_st.resolve();
            lam::MP term = lam::parse_term(tr_text);
            if (st.simply) {
                lam::TypeCtx ctx = detail::parse_ctx(tr_ctx);
                NameVec ys = detail::result_channels(detail::simple_width(term, ctx));
                out << pi::to_string(trans::translate_simple(term, ctx, ys)) << "\n";
            } else {
                out << pi::to_string(trans::translate(term, st, mkname(tr_chan))) << "\n";
            }
            return 0;
        }

        if (*cmd_run) {
            trans::Strategy st = run_st.resolve();
            if (st.simply) {
                err << "error: the arity translation has no machine; use trace for reductions\n";
                return 2;
            }
            mach::Machine m = mach::Machine::load(lam::parse_term(run_text), st, mkname("result"));
            long steps = 0;
            while (steps < run_max) {
                auto info = m.step();
                if (!info) break;
                ++steps;
                if (!run_quiet) out << steps << ": " << info->desc << "\n";
            }
            out << "terminal: " << m.terminal_kind() << " after " << steps << " steps\n";
            out << "state: " << m.show() << "\n";
            return 0;
        }

        if (*cmd_trace) {
            trans::Strategy st = trace_st.resolve();
            if (st.simply) {
                err << "error: trace follows the machine; the arity translation has none\n";
                return 2;
            }
            auto rep =
                verify::check_step_correspondence(lam::parse_term(trace_text), st, (int)trace_max);
            if (trace_format == "structured")
                detail::print_trace_structured(rep, out);
            else
                detail::print_trace_text(rep, out);
            return rep.ok ? 0 : 1;
        }

        if (*cmd_verify) {
            std::vector<verify::CorpusEntry> entries;
            if (!v_file.empty())
                entries.push_back(verify::load_corpus_file(v_file));
            else
                entries = verify::load_corpus(v_corpus.empty() ? verify::default_corpus_dir()
                                                               : v_corpus);
            detail::VerifyCounts counts;
            for (auto& e : entries) {
                if (!v_strategy.empty()) {
                    auto& st = trans::strategy_named(v_strategy);
                    std::string why;
                    if (!verify::strategy_applicable(e.term, e.muctx, st, &why)) {
                        ++counts.skipped;
                        out << e.name << " x " << st.name << ": SKIP (" << why << ")\n";
                        continue;
                    }
                    detail::verify_entry(e, st, counts, out);
                    continue;
                }
                for (auto& stname : e.strategies)
                    detail::verify_entry(e, trans::strategy_named(stname), counts, out);
            }
            out << "passed " << counts.passed << ", failed " << counts.failed << ", skipped "
                << counts.skipped << "\n";
            if (counts.failed > 0) return 1;
            if (counts.passed == 0 && counts.skipped > 0) return 1;
            return 0;
        }

        if (*cmd_bisim) {
            Verdict v = pi::bisimilar(pi::parse(b_left), pi::parse(b_right), b_budget);
            out << to_string(v) << "\n";
            return v == Verdict::Yes ? 0 : 1;
        }

        if (*cmd_probe) {
            trans::Strategy st = p_st.resolve();
            if (st.simply) {
                err << "error: the liveness probe needs a modal strategy\n";
                return 2;
            }
            auto rep = verify::deadlock_probe(lam::parse_term(p_text), detail::parse_ctx(p_ctx),
                                              detail::parse_ctx(p_muctx), st);
            if (rep.ok) {
                out << "live\n";
                return 0;
            }
            out << "not live: " << rep.failure << "\n";
            return 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace fuspi::cli
