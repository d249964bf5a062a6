#pragma once

#include "fuspi/lla/sequent.hpp"
#include "fuspi/pi/ast.hpp"
#include "fuspi/pi/ops.hpp"

namespace fuspi::lla {

enum class Rule {
    Axiom,
    Cut,
    Tensor,
    Par,
    UpAction,
    QuestAction,
    DownAction,
    BangAction,
    Exchange,
    Contraction,
    Weakening,
    Forall,
    Exists,
    PlusLeft,
    PlusRight,
    WithChoice,
};

inline const char* rule_tag(Rule r) {
    switch (r) {
        case Rule::Axiom: return "axiom";
        case Rule::Cut: return "cut";
        case Rule::Tensor: return "tensor";
        case Rule::Par: return "par";
        case Rule::UpAction: return "up-action";
        case Rule::QuestAction: return "whynot-action";
        case Rule::DownAction: return "down-action";
        case Rule::BangAction: return "ofcourse-action";
        case Rule::Exchange: return "exchange";
        case Rule::Contraction: return "contraction";
        case Rule::Weakening: return "weakening";
        case Rule::Forall: return "forall";
        case Rule::Exists: return "exists";
        case Rule::PlusLeft: return "plus-left";
        case Rule::PlusRight: return "plus-right";
        case Rule::WithChoice: return "with-choice";
    }
    return "?";
}

struct Derivation;
using DP = std::shared_ptr<const Derivation>;

struct Derivation {
    Rule rule;
    std::vector<DP> premises;
    FP formula;        // axiom A; cut A; weakening ?A; exists body; plus other side
    FP witness;        // exists witness B
    NameVec names, names2;
    Name a, b, c;      // action subject; contraction u v w; with-choice u v; plus fresh name
    int index = -1;    // par / exchange position
    Name qvar;         // quantifier variable
    std::string word;  // optional modality prefix for quantifier rules
};

inline DP dnode(Derivation&& d) { return std::make_shared<const Derivation>(std::move(d)); }

struct Checked {
    Sequent seq;
    pi::PP proc;
};

// Validates the derivation bottom-up and rebuilds the process each rule
// denotes; checking, not inference.
inline Checked check_derivation(const DP& d, const ArityCtx& ctx) {
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) fail(rule_tag(d->rule), ": ", msg);
    };
    std::vector<Checked> ps;
    for (auto& pr : d->premises) ps.push_back(check_derivation(pr, ctx));

    auto last_entry = [&](Checked& c) -> Entry {
        need(!c.seq.entries.empty(), "premise sequent is empty");
        return c.seq.entries.back();
    };
    auto quest_headed = [](const FP& f) { return f->kind == FKind::Quest; };
    auto up_or_quest = [](const FP& f) { return f->kind == FKind::Up || f->kind == FKind::Quest; };

    Checked out;
    switch (d->rule) {
        case Rule::Axiom: {
            need(d->premises.empty(), "axiom takes no premises");
            int ar = arity(d->formula, ctx);
            need(static_cast<int>(d->names.size()) == ar && static_cast<int>(d->names2.size()) == ar,
                 "axiom name vectors must match the formula arity");
            std::vector<pi::PP> links;
            for (int i = 0; i < ar; ++i) links.push_back(pi::fuse(d->names[i], d->names2[i]));
            out.proc = pi::par(std::move(links));
            out.seq.entries = {{d->names, dual(d->formula)}, {d->names2, d->formula}};
            break;
        }
        case Rule::Cut: {
            need(ps.size() == 2, "cut takes two premises");
            auto take = [&](Checked& c, const FP& want) -> Entry {
                for (size_t i = 0; i < c.seq.entries.size(); ++i) {
                    if (c.seq.entries[i].names == d->names) {
                        Entry e = c.seq.entries[i];
                        need(alpha_equal(e.formula, want),
                             "cut entry has formula " + to_string(e.formula) + ", expected " + to_string(want));
                        c.seq.entries.erase(c.seq.entries.begin() + i);
                        return e;
                    }
                }
                fail("cut: no entry named ", names_str(d->names));
            };
            take(ps[0], dual(d->formula));
            take(ps[1], d->formula);
            out.proc = pi::nu_all(d->names, pi::par(ps[0].proc, ps[1].proc));
            out.seq.entries = ps[0].seq.entries;
            for (auto& e : ps[1].seq.entries) out.seq.entries.push_back(e);
            break;
        }
        case Rule::Tensor: {
            need(ps.size() == 2, "tensor takes two premises");
            Entry l = last_entry(ps[0]);
            need(!ps[1].seq.entries.empty(), "right premise is empty");
            Entry r = ps[1].seq.entries.front();
            out.seq.entries.assign(ps[0].seq.entries.begin(), ps[0].seq.entries.end() - 1);
            NameVec both = l.names;
            for (auto& n : r.names) both.push_back(n);
            out.seq.entries.push_back({both, ftensor(l.formula, r.formula)});
            out.seq.entries.insert(out.seq.entries.end(), ps[1].seq.entries.begin() + 1,
                                   ps[1].seq.entries.end());
            out.proc = pi::par(ps[0].proc, ps[1].proc);
            break;
        }
        case Rule::Par: {
            need(ps.size() == 1, "par takes one premise");
            auto& es = ps[0].seq.entries;
            need(d->index >= 0 && d->index + 1 < static_cast<int>(es.size()), "par index out of range");
            Entry l = es[d->index], r = es[d->index + 1];
            NameVec both = l.names;
            for (auto& n : r.names) both.push_back(n);
            out.seq.entries = es;
            out.seq.entries[d->index] = {both, fparr(l.formula, r.formula)};
            out.seq.entries.erase(out.seq.entries.begin() + d->index + 1);
            out.proc = ps[0].proc;
            break;
        }
        case Rule::UpAction:
        case Rule::QuestAction:
        case Rule::DownAction:
        case Rule::BangAction: {
            need(ps.size() == 1, "action rules take one premise");
            Entry e = last_entry(ps[0]);
            out.seq.entries.assign(ps[0].seq.entries.begin(), ps[0].seq.entries.end() - 1);
            for (auto& g : out.seq.entries) {
                if (d->rule == Rule::DownAction)
                    need(up_or_quest(g.formula),
                         "context of a down-action must be up- or ?-headed, got " + to_string(g.formula));
                if (d->rule == Rule::BangAction)
                    need(quest_headed(g.formula),
                         "context of an ofcourse-action must be ?-headed, got " + to_string(g.formula));
            }
            switch (d->rule) {
                case Rule::UpAction:
                    out.proc = pi::output(d->a, e.names, ps[0].proc);
                    out.seq.entries.push_back({{d->a}, fup(e.formula)});
                    break;
                case Rule::QuestAction:
                    out.proc = pi::output(d->a, e.names, ps[0].proc);
                    out.seq.entries.push_back({{d->a}, fquest(e.formula)});
                    break;
                case Rule::DownAction:
                    out.proc = pi::input(d->a, e.names, ps[0].proc);
                    out.seq.entries.push_back({{d->a}, fdown(e.formula)});
                    break;
                default:
                    out.proc = pi::repl(pi::Action{true, d->a, e.names}, ps[0].proc);
                    out.seq.entries.push_back({{d->a}, fbang(e.formula)});
                    break;
            }
            break;
        }
        case Rule::Exchange: {
            need(ps.size() == 1, "exchange takes one premise");
            auto& es = ps[0].seq.entries;
            need(d->index >= 0 && d->index + 1 < static_cast<int>(es.size()), "exchange index out of range");
            out = ps[0];
            std::swap(out.seq.entries[d->index], out.seq.entries[d->index + 1]);
            break;
        }
        case Rule::Contraction: {
            need(ps.size() == 1, "contraction takes one premise");
            out.seq.entries = ps[0].seq.entries;
            int iu = -1, iv = -1;
            for (size_t i = 0; i < out.seq.entries.size(); ++i) {
                if (out.seq.entries[i].names == NameVec{d->a}) iu = static_cast<int>(i);
                if (out.seq.entries[i].names == NameVec{d->b}) iv = static_cast<int>(i);
            }
            need(iu >= 0 && iv >= 0 && iu != iv, "contraction needs two distinct single-name entries");
            need(quest_headed(out.seq.entries[iu].formula) && quest_headed(out.seq.entries[iv].formula),
                 "contraction applies to ?-headed entries");
            need(alpha_equal(out.seq.entries[iu].formula, out.seq.entries[iv].formula),
                 "contracted entries must share their formula");
            out.seq.entries[iu].names = {d->c};
            out.seq.entries.erase(out.seq.entries.begin() + iv);
            out.proc = pi::substitute(ps[0].proc, pi::Subst{{d->a, d->c}, {d->b, d->c}});
            break;
        }
        case Rule::Weakening: {
            need(ps.size() == 1, "weakening takes one premise");
            need(d->formula->kind == FKind::Quest, "weakening introduces a ?-headed entry");
            out = ps[0];
            out.seq.entries.push_back({{d->a}, d->formula});
            break;
        }
        case Rule::Forall: {
            need(ps.size() == 1, "forall takes one premise");
            Entry e = last_entry(ps[0]);
            FP body = strip_word(d->word, e.formula);
            out.seq.entries.assign(ps[0].seq.entries.begin(), ps[0].seq.entries.end() - 1);
            for (auto& g : out.seq.entries)
                need(!free_vars(g.formula).count(d->qvar),
                     base_spelling(d->qvar) + " occurs free in the context");
            out.seq.entries.push_back({e.names, wrap_word(d->word, fquant(FKind::Forall, d->qvar, body))});
            out.proc = ps[0].proc;
            break;
        }
        case Rule::Exists: {
            need(ps.size() == 1, "exists takes one premise");
            Entry e = last_entry(ps[0]);
            FP body = strip_word(d->word, e.formula);
            need(alpha_equal(body, subst(d->formula, d->qvar, d->witness)),
                 "premise formula is not the instance " + to_string(d->formula) + " at " +
                     to_string(d->witness));
            need(arity(d->witness, ctx) == ctx.of(d->qvar),
                 "witness arity differs from the variable arity");
            out.seq.entries.assign(ps[0].seq.entries.begin(), ps[0].seq.entries.end() - 1);
            out.seq.entries.push_back(
                {e.names, wrap_word(d->word, fquant(FKind::Exists, d->qvar, d->formula))});
            out.proc = ps[0].proc;
            break;
        }
        case Rule::PlusLeft:
        case Rule::PlusRight: {
            need(ps.size() == 1, "plus rules take one premise");
            Entry e = last_entry(ps[0]);
            need(e.names.size() == 1, "plus rules need a single-name entry");
            need(e.formula->kind == FKind::Up && d->formula->kind == FKind::Up,
                 "plus components must be up-headed");
            out.seq.entries.assign(ps[0].seq.entries.begin(), ps[0].seq.entries.end() - 1);
            if (d->rule == Rule::PlusLeft)
                out.seq.entries.push_back({{e.names[0], d->a}, fplus(e.formula, d->formula)});
            else
                out.seq.entries.push_back({{d->a, e.names[0]}, fplus(d->formula, e.formula)});
            out.proc = ps[0].proc;
            break;
        }
        case Rule::WithChoice: {
            need(ps.size() == 2, "with-choice takes two premises");
            Entry l = last_entry(ps[0]);
            Entry r = last_entry(ps[1]);
            need(ps[0].seq.entries.size() == ps[1].seq.entries.size(),
                 "premises must share their context");
            for (size_t i = 0; i + 1 < ps[0].seq.entries.size(); ++i) {
                auto& gl = ps[0].seq.entries[i];
                auto& gr = ps[1].seq.entries[i];
                need(gl.names == gr.names && alpha_equal(gl.formula, gr.formula),
                     "premises must share their context");
            }
            out.seq.entries.assign(ps[0].seq.entries.begin(), ps[0].seq.entries.end() - 1);
            out.seq.entries.push_back({{d->a, d->b}, fwith(fdown(l.formula), fdown(r.formula))});
            out.proc = pi::choice({{pi::Action{true, d->a, l.names}, ps[0].proc},
                                   {pi::Action{true, d->b, r.names}, ps[1].proc}});
            break;
        }
    }
    validate(out.seq, ctx, rule_tag(d->rule));
    return out;
}

// --- textual form: one rule per line, premises indented by two spaces -------

namespace detail {

inline std::string name_str(const Name& n) {
    std::string s = base_spelling(n);
    if (n.uid) s += "#" + std::to_string(n.uid);
    return s;
}

inline void serialize_rec(const DP& d, int indent, std::string& out) {
    out.append(indent * 2, ' ');
    out += rule_tag(d->rule);
    switch (d->rule) {
        case Rule::Axiom:
            out += " " + to_string(d->formula) + " ; " + names_str(d->names) + " ; " + names_str(d->names2);
            break;
        case Rule::Cut:
            out += " " + names_str(d->names) + " ; " + to_string(d->formula);
            break;
        case Rule::Tensor:
            break;
        case Rule::Par:
        case Rule::Exchange:
            out += " " + std::to_string(d->index);
            break;
        case Rule::UpAction:
        case Rule::QuestAction:
        case Rule::DownAction:
        case Rule::BangAction:
            out += " " + name_str(d->a);
            break;
        case Rule::Contraction:
            out += " " + name_str(d->a) + " " + name_str(d->b) + " " + name_str(d->c);
            break;
        case Rule::Weakening:
            out += " " + name_str(d->a) + " ; " + to_string(d->formula);
            break;
        case Rule::Forall:
            out += " " + name_str(d->qvar);
            if (!d->word.empty()) out += " ; " + d->word;
            break;
        case Rule::Exists:
            out += " " + name_str(d->qvar) + " ; " + to_string(d->formula) + " ; " + to_string(d->witness);
            if (!d->word.empty()) out += " ; " + d->word;
            break;
        case Rule::PlusLeft:
        case Rule::PlusRight:
            out += " " + name_str(d->a) + " ; " + to_string(d->formula);
            break;
        case Rule::WithChoice:
            out += " " + name_str(d->a) + " " + name_str(d->b);
            break;
    }
    out += "\n";
    for (auto& p : d->premises) serialize_rec(p, indent + 1, out);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline NameVec parse_names(const std::string& s) {
    NameVec out;
    for (auto& piece : split(s, ',')) {
        std::string t = trim(piece);
        if (!t.empty()) out.push_back(mkname(t));
    }
    return out;
}

struct DerivLine {
    int depth;
    std::string text;
};

inline DP parse_deriv_block(const std::vector<DerivLine>& lines, size_t& i) {
    if (i >= lines.size()) fail("expected a derivation rule line");
    int depth = lines[i].depth;
    std::string line = lines[i].text;
    ++i;

    size_t sp = line.find(' ');
    std::string tag = sp == std::string::npos ? line : line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    auto parts = split(rest, ';');
    for (auto& p : parts) p = trim(p);

    Derivation d{};
    d.index = -1;
    bool known = false;
    for (Rule r : {Rule::Axiom, Rule::Cut, Rule::Tensor, Rule::Par, Rule::UpAction, Rule::QuestAction,
                   Rule::DownAction, Rule::BangAction, Rule::Exchange, Rule::Contraction,
                   Rule::Weakening, Rule::Forall, Rule::Exists, Rule::PlusLeft, Rule::PlusRight,
                   Rule::WithChoice}) {
        if (tag == rule_tag(r)) {
            d.rule = r;
            known = true;
        }
    }
    if (!known) fail("unknown rule tag '", tag, "'");

    auto want = [&](size_t n) {
        if (parts.size() < n || (parts.size() == 1 && parts[0].empty() && n > 0))
            fail(tag, ": expected ", n, " parameter groups");
    };
    switch (d.rule) {
        case Rule::Axiom:
            want(3);
            d.formula = parse_formula(parts[0]);
            d.names = parse_names(parts[1]);
            d.names2 = parse_names(parts[2]);
            break;
        case Rule::Cut:
            want(2);
            d.names = parse_names(parts[0]);
            d.formula = parse_formula(parts[1]);
            break;
        case Rule::Tensor:
            break;
        case Rule::Par:
        case Rule::Exchange:
            want(1);
            d.index = std::stoi(parts[0]);
            break;
        case Rule::UpAction:
        case Rule::QuestAction:
        case Rule::DownAction:
        case Rule::BangAction:
            want(1);
            d.a = mkname(parts[0]);
            break;
        case Rule::Contraction: {
            want(1);
            auto ns = split(parts[0], ' ');
            NameVec got;
            for (auto& n : ns)
                if (!trim(n).empty()) got.push_back(mkname(trim(n)));
            if (got.size() != 3) fail("contraction expects three names");
            d.a = got[0];
            d.b = got[1];
            d.c = got[2];
            break;
        }
        case Rule::Weakening:
            want(2);
            d.a = mkname(parts[0]);
            d.formula = parse_formula(parts[1]);
            break;
        case Rule::Forall:
            want(1);
            d.qvar = mkname(parts[0]);
            if (parts.size() > 1) d.word = parts[1];
            break;
        case Rule::Exists:
            want(3);
            d.qvar = mkname(parts[0]);
            d.formula = parse_formula(parts[1]);
            d.witness = parse_formula(parts[2]);
            if (parts.size() > 3) d.word = parts[3];
            break;
        case Rule::PlusLeft:
        case Rule::PlusRight:
            want(2);
            d.a = mkname(parts[0]);
            d.formula = parse_formula(parts[1]);
            break;
        case Rule::WithChoice: {
            want(1);
            auto ns = split(parts[0], ' ');
            NameVec got;
            for (auto& n : ns)
                if (!trim(n).empty()) got.push_back(mkname(trim(n)));
            if (got.size() != 2) fail("with-choice expects two names");
            d.a = got[0];
            d.b = got[1];
            break;
        }
    }

    std::vector<DP> premises;
    while (i < lines.size() && lines[i].depth == depth + 1)
        premises.push_back(parse_deriv_block(lines, i));
    if (i < lines.size() && lines[i].depth > depth + 1)
        fail("bad indentation under '", tag, "'");
    d.premises = std::move(premises);
    return dnode(std::move(d));
}

}  // namespace detail

inline std::string serialize(const DP& d) {
    std::string out;
    detail::serialize_rec(d, 0, out);
    return out;
}

inline DP parse_derivation(const std::string& text) {
    std::vector<detail::DerivLine> lines;
    for (auto& raw : detail::split(text, '\n')) {
        // A '#' glued to a name is a uid suffix, not a comment; comments
        // start at the line head or after whitespace.
        std::string no_comment = raw;
        for (size_t h = 0; (h = no_comment.find('#', h)) != std::string::npos; ++h) {
            if (h == 0 || no_comment[h - 1] == ' ' || no_comment[h - 1] == '\t') {
                no_comment = no_comment.substr(0, h);
                break;
            }
        }
        if (detail::trim(no_comment).empty()) continue;
        int spaces = 0;
        while (spaces < static_cast<int>(no_comment.size()) && no_comment[spaces] == ' ') ++spaces;
        if (spaces % 2) fail("derivation lines must be indented by two spaces per level");
        lines.push_back({spaces / 2, detail::trim(no_comment)});
    }
    size_t i = 0;
    DP d = detail::parse_deriv_block(lines, i);
    if (i != lines.size()) fail("trailing lines after the root rule");
    return d;
}

}  // namespace fuspi::lla
