#pragma once

// Emits checkable typing derivations for translated terms.  For a term M,
// context G, mu-context D and strategy S, emit_derivation builds a derivation
// whose checked sequent is exactly the sequent of build_theorem_sequent and
// whose reconstructed process matches translate(M) up to structural
// congruence.  emit_derivation_simple does the same for the arity-indexed
// translation of pure lambda terms.

#include "fuspi/lla/derivation.hpp"
#include "fuspi/trans/translate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace fuspi::trans {

namespace detail {

inline lla::Derivation drule(lla::Rule r) {
    lla::Derivation d;
    d.rule = r;
    return d;
}

// Derivation builder.  Mirrors the sequent the checker will recompute, so
// entry positions for exchanges can be tracked without re-running the check
// after every rule.
struct EB {
    lla::DP d;
    std::vector<lla::Entry> es;

    static EB axiom(const lla::FP& f, const Name& n1, const Name& n2) {
        auto r = drule(lla::Rule::Axiom);
        r.formula = f;
        r.names = {n1};
        r.names2 = {n2};
        EB b;
        b.d = lla::dnode(std::move(r));
        b.es.push_back({{n1}, lla::dual(f)});
        b.es.push_back({{n2}, f});
        return b;
    }

    void chain(lla::Derivation&& r) {
        r.premises = {d};
        d = lla::dnode(std::move(r));
    }

    int find(const Name& n) const {
        for (size_t i = 0; i < es.size(); ++i)
            if (es[i].names.size() == 1 && es[i].names[0] == n) return (int)i;
        fail("emit: no entry named ", base_spelling(n));
    }

    void exch(int i) {
        auto r = drule(lla::Rule::Exchange);
        r.index = i;
        chain(std::move(r));
        std::swap(es[i], es[i + 1]);
    }

    // Moves the entry at position `from` to position `to` by adjacent swaps.
    void move(int from, int to) {
        while (from > to) {
            exch(from - 1);
            --from;
        }
        while (from < to) {
            exch(from);
            ++from;
        }
    }

    void act(char letter, const Name& subject) {
        lla::Rule r;
        switch (letter) {
            case 'v': r = lla::Rule::DownAction; break;
            case '^': r = lla::Rule::UpAction; break;
            case '!': r = lla::Rule::BangAction; break;
            case '?': r = lla::Rule::QuestAction; break;
            default: fail("emit: bad modality letter '", std::string(1, letter), "'");
        }
        auto n = drule(r);
        n.a = subject;
        chain(std::move(n));
        lla::Entry e = es.back();
        es.pop_back();
        es.push_back({{subject}, lla::fmod(lla::letter_kind(letter), e.formula)});
    }

    // Applies a modality word to the last entry, innermost letter first, with
    // fresh relay subjects; the head letter gets the given final subject.
    void apply_word(const std::string& w, const Name& finalSubject) {
        for (int i = (int)w.size() - 1; i >= 0; --i)
            act(w[i], i == 0 ? finalSubject : fresh("s"));
    }

    void par_at(int i) {
        auto r = drule(lla::Rule::Par);
        r.index = i;
        chain(std::move(r));
        es[i].formula = lla::fparr(es[i].formula, es[i + 1].formula);
        for (auto& n : es[i + 1].names) es[i].names.push_back(n);
        es.erase(es.begin() + i + 1);
    }

    void weaken(const Name& n, const lla::FP& f) {
        auto r = drule(lla::Rule::Weakening);
        r.a = n;
        r.formula = f;
        chain(std::move(r));
        es.push_back({{n}, f});
    }

    void contract(const Name& keep, const Name& gone) {
        auto r = drule(lla::Rule::Contraction);
        r.a = keep;
        r.b = gone;
        r.c = keep;
        chain(std::move(r));
        es.erase(es.begin() + find(gone));
    }

    void plus_rule(int idx, const Name& other_name, const lla::FP& other) {
        auto r = drule(idx == 1 ? lla::Rule::PlusLeft : lla::Rule::PlusRight);
        r.a = other_name;
        r.formula = other;
        chain(std::move(r));
        lla::Entry& e = es.back();
        if (idx == 1) {
            e.names = {e.names[0], other_name};
            e.formula = lla::fplus(e.formula, other);
        } else {
            e.names = {other_name, e.names[0]};
            e.formula = lla::fplus(other, e.formula);
        }
    }

    void forall_rule(const Name& qvar, const std::string& word) {
        auto r = drule(lla::Rule::Forall);
        r.qvar = qvar;
        r.word = word;
        chain(std::move(r));
        lla::Entry& e = es.back();
        e.formula = lla::wrap_word(word, lla::fquant(lla::FKind::Forall, qvar,
                                                     lla::strip_word(word, e.formula)));
    }

    void exists_rule(const Name& qvar, const lla::FP& body, const lla::FP& witness,
                     const std::string& word) {
        auto r = drule(lla::Rule::Exists);
        r.qvar = qvar;
        r.formula = body;
        r.witness = witness;
        r.word = word;
        chain(std::move(r));
        lla::Entry& e = es.back();
        e.formula = lla::wrap_word(word, lla::fquant(lla::FKind::Exists, qvar, body));
    }

    static EB tensor(EB&& l, EB&& r) {
        auto n = drule(lla::Rule::Tensor);
        n.premises = {l.d, r.d};
        EB b;
        b.d = lla::dnode(std::move(n));
        lla::Entry m = l.es.back();
        const lla::Entry& h = r.es.front();
        for (auto& nm : h.names) m.names.push_back(nm);
        m.formula = lla::ftensor(m.formula, h.formula);
        b.es.assign(l.es.begin(), l.es.end() - 1);
        b.es.push_back(std::move(m));
        b.es.insert(b.es.end(), r.es.begin() + 1, r.es.end());
        return b;
    }

    static EB cut(EB&& l, EB&& r, const Name& ch, const lla::FP& f) {
        auto n = drule(lla::Rule::Cut);
        n.names = {ch};
        n.formula = f;
        n.premises = {l.d, r.d};
        EB b;
        b.d = lla::dnode(std::move(n));
        l.es.erase(l.es.begin() + l.find(ch));
        r.es.erase(r.es.begin() + r.find(ch));
        b.es = std::move(l.es);
        b.es.insert(b.es.end(), r.es.begin(), r.es.end());
        return b;
    }

    static EB with_choice(EB&& l, EB&& r, const Name& a, const Name& bn) {
        auto n = drule(lla::Rule::WithChoice);
        n.a = a;
        n.b = bn;
        n.premises = {l.d, r.d};
        EB b;
        b.d = lla::dnode(std::move(n));
        lla::Entry m;
        m.names = {a, bn};
        m.formula = lla::fwith(lla::fdown(l.es.back().formula),
                               lla::fdown(r.es.back().formula));
        b.es.assign(l.es.begin(), l.es.end() - 1);
        b.es.push_back(std::move(m));
        return b;
    }
};

// Emitter for the modal translations.  Maintains the invariant that every
// sub-derivation for a term with result channel u has sequent
//   [context entries in declaration order, u, jump entries in registration
//    order], all single-name.
struct DerivEmitter {
    Strategy st;
    lam::TypeCtx tctx;    // term variables in scope, innermost last
    lam::TypeCtx tmuctx;  // mu variables in scope
    std::map<Name, Name> lamch;  // variable -> channel (copies for sharing)
    std::map<Name, Name> much;   // mu variable -> channel
    std::map<Name, int> grank, drank;
    std::map<Name, lla::FP> gform, dform;
    int nrank = 0;

    explicit DerivEmitter(const Strategy& s) : st(s) {}

    lam::TP type_of(const lam::MP& t) { return lam::typecheck(t, tctx, tmuctx); }
    lla::FP ty(const lam::TP& a) const { return tr_type(a, st); }

    lla::FP ctx_form(const lam::TP& a) const {
        return lla::wrap_word(dual_word(st.gamma), lla::dual(ty(a)));
    }
    lla::FP out_form(const lam::TP& a) const { return lla::wrap_word(st.delta, ty(a)); }

    Name chan(const Name& x) const {
        auto it = lamch.find(x);
        return it == lamch.end() ? x : it->second;
    }
    Name mchan(const Name& b) const {
        auto it = much.find(b);
        return it == much.end() ? b : it->second;
    }

    void reg_lam(const Name& ch, const lla::FP& f) {
        grank[ch] = nrank++;
        gform[ch] = f;
    }
    void reg_mu(const Name& ch, const lla::FP& f) {
        drank[ch] = nrank++;
        dform[ch] = f;
    }

    // Restores the entry order invariant by sorting context entries to their
    // registration ranks around the result entry.
    void normalize(EB& b, const Name& u) {
        std::vector<std::pair<int, Name>> gs, ds;
        for (auto& e : b.es) {
            if (e.names.size() != 1) fail("emit: unmerged entry at node exit");
            const Name& n = e.names[0];
            if (n == u) continue;
            if (auto it = grank.find(n); it != grank.end())
                gs.push_back({it->second, n});
            else if (auto it2 = drank.find(n); it2 != drank.end())
                ds.push_back({it2->second, n});
            else
                fail("emit: entry for unregistered channel ", base_spelling(n));
        }
        std::sort(gs.begin(), gs.end());
        std::sort(ds.begin(), ds.end());
        std::vector<Name> want;
        for (auto& [r, n] : gs) want.push_back(n);
        want.push_back(u);
        for (auto& [r, n] : ds) want.push_back(n);
        for (size_t p = 0; p < want.size(); ++p) b.move(b.find(want[p]), (int)p);
    }

    // Sharing between the two sides of a cut or tensor is handled by emitting
    // the second side with fresh channel copies and contracting afterwards.
    using Copies = std::vector<std::pair<Name, Name>>;

    struct Snapshot {
        std::map<Name, Name> lamch, much;
    };
    Snapshot snap() const { return {lamch, much}; }
    void restore(Snapshot&& s) {
        lamch = std::move(s.lamch);
        much = std::move(s.much);
    }

    Copies make_copies(const NameSet& keepVars, const NameSet& keepMus, const lam::MP& side) {
        Copies out;
        for (auto& x : lam::free_vars(side)) {
            if (!keepVars.count(x)) continue;
            Name orig = chan(x), cp = freshen(orig);
            grank[cp] = grank.at(orig);
            gform[cp] = gform.at(orig);
            lamch[x] = cp;
            out.push_back({orig, cp});
        }
        for (auto& m : lam::free_mu_vars(side)) {
            if (!keepMus.count(m)) continue;
            Name orig = mchan(m), cp = freshen(orig);
            drank[cp] = drank.at(orig);
            dform[cp] = dform.at(orig);
            much[m] = cp;
            out.push_back({orig, cp});
        }
        return out;
    }

    static void contract_copies(EB& b, const Copies& cs) {
        for (auto& [orig, cp] : cs) b.contract(orig, cp);
    }

    // Variable clause at an explicit channel; returns [chx: ctx form, u: out
    // form] without normalizing, so it can also serve suspended arguments.
    EB var_core(const Name& chx, const lam::TP& A, const Name& u) {
        lla::FP As = ty(A);
        if (st.gamma == st.delta)
            return EB::axiom(lla::wrap_word(st.delta, As), chx, u);
        if (!st.delta_c.empty()) {
            EB b = EB::axiom(lla::wrap_word(st.delta, As), fresh("y"), u);
            b.exch(0);
            b.apply_word(dual_word(st.delta_c), chx);
            b.exch(0);
            return b;
        }
        EB b = EB::axiom(lla::wrap_word(st.gamma, As), chx, fresh("y"));
        b.apply_word(st.gamma_c, u);
        return b;
    }

    // Suspended argument N at channel z: the derivation of a server process
    // offering N under the value word, with the z entry last (or anywhere if
    // no prefix is needed; cuts locate it by name).
    EB emit_arg(const lam::MP& n, const Name& z) {
        if (st.delta_c.empty()) return emit(n, z);
        Name w = fresh("w");
        EB b = emit(n, w);
        b.move(b.find(w), (int)b.es.size() - 1);
        b.apply_word(st.delta_c, z);
        return b;
    }

    lla::FP arg_form(const lam::TP& A) const {
        return lla::wrap_word(st.delta_c, lla::wrap_word(st.delta, ty(A)));
    }

    // Pair and injection components sit under the value word with the target
    // entry last, ready for a tensor or plus rule.
    EB emit_component(const lam::MP& m, const Name& x) {
        EB b = emit_arg(m, x);
        b.move(b.find(x), (int)b.es.size() - 1);
        return b;
    }

    EB emit(const lam::MP& t, const Name& u) {
        switch (t->kind) {
            case lam::MKind::Var: {
                EB b = var_core(chan(t->x), type_of(t), u);
                normalize(b, u);
                return b;
            }
            case lam::MKind::Lam: return emit_lam(t, u);
            case lam::MKind::App: return emit_app(t, u);
            case lam::MKind::Mu: return emit_mu(t, u);
            case lam::MKind::TyLam: return emit_tylam(t, u);
            case lam::MKind::TyApp: return emit_tyapp(t, u);
            case lam::MKind::Pair: return emit_pair(t, u);
            case lam::MKind::Let: return emit_let(t, u);
            case lam::MKind::Inj: return emit_inj(t, u);
            case lam::MKind::Case: return emit_case(t, u);
            case lam::MKind::Sharp: return emit_sharp(t, u);
        }
        fail("emit: unhandled term form");
    }

    EB emit_lam(const lam::MP& t, const Name& u) {
        const Name& x = t->x;
        lla::FP xf = ctx_form(t->ty);
        tctx.push_back({x, t->ty});
        reg_lam(x, xf);
        Name v = fresh("v");
        EB b = emit(t->m, v);
        tctx.pop_back();
        if (!lam::free_vars(t->m).count(x)) b.weaken(x, xf);
        b.move(b.find(x), (int)b.es.size() - 1);
        b.move(b.find(v), (int)b.es.size() - 1);
        b.par_at((int)b.es.size() - 2);
        b.apply_word(st.delta, u);
        normalize(b, u);
        return b;
    }

    EB emit_app(const lam::MP& t, const Name& u) {
        lam::TP fty = type_of(t->m);
        lla::FP As = ty(fty->a), Bs = ty(fty->b);
        lla::FP cutF = lla::wrap_word(st.delta, ty(fty));
        Name v = fresh("v");
        EB m = emit(t->m, v);
        auto keepV = lam::free_vars(t->m);
        auto keepM = lam::free_mu_vars(t->m);

        if (inline_application(st)) {
            auto saved = snap();
            Copies cps = make_copies(keepV, keepM, t->n);
            Name xp = fresh("x");
            EB n = emit_arg(t->n, xp);
            restore(std::move(saved));
            Name up = fresh("u");
            EB t2 = EB::tensor(std::move(n),
                               EB::axiom(lla::wrap_word(st.delta, Bs), up, u));
            t2.exch((int)t2.es.size() - 2);
            t2.apply_word(dual_word(st.delta), v);
            EB c = EB::cut(std::move(t2), std::move(m), v, cutF);
            contract_copies(c, cps);
            normalize(c, u);
            return c;
        }

        bool left = st.gamma_c.empty();
        Name z = fresh("z");
        Name x = left ? z : fresh("x");
        Name xp = fresh("x"), up = fresh("u");
        EB t2 = EB::tensor(EB::axiom(lla::wrap_word(st.gamma, As), x, xp),
                           EB::axiom(lla::wrap_word(st.delta, Bs), up, u));
        t2.exch(1);
        t2.apply_word(dual_word(st.delta), v);
        EB c1 = EB::cut(std::move(t2), std::move(m), v, cutF);
        if (!left) {
            c1.move(c1.find(x), (int)c1.es.size() - 1);
            c1.apply_word(dual_word(st.gamma_c), z);
        }
        auto saved = snap();
        Copies cps = make_copies(keepV, keepM, t->n);
        EB n = emit_arg(t->n, z);
        restore(std::move(saved));
        EB c2 = EB::cut(std::move(c1), std::move(n), z, arg_form(fty->a));
        contract_copies(c2, cps);
        normalize(c2, u);
        return c2;
    }

    // Saves a mu-channel registration so nested jumps that reuse an outer
    // channel as their output do not clobber it.
    struct MuReg {
        bool had = false;
        int rank = 0;
        lla::FP form;
    };
    MuReg save_mu_reg(const Name& ch) const {
        MuReg r;
        if (auto it = drank.find(ch); it != drank.end()) {
            r.had = true;
            r.rank = it->second;
            r.form = dform.at(ch);
        }
        return r;
    }
    void restore_mu_reg(const Name& ch, const MuReg& r) {
        if (r.had) {
            drank[ch] = r.rank;
            dform[ch] = r.form;
        } else {
            drank.erase(ch);
            dform.erase(ch);
        }
    }

    EB emit_mu(const lam::MP& t, const Name& u) {
        const Name& al = t->x;
        const Name& be = t->y;
        lam::TP Aty = type_of(t);
        lla::FP uf = out_form(Aty);
        auto fmv = lam::free_mu_vars(t->m);
        bool alpha_free = fmv.count(al) > 0;
        tmuctx.push_back({al, Aty});
        EB b;
        if (be == al) {
            Name ach = alpha_free ? freshen(u) : u;
            MuReg saved = save_mu_reg(ach);
            much[al] = ach;
            reg_mu(ach, uf);
            b = emit(t->m, u);
            if (alpha_free) b.contract(u, ach);
            restore_mu_reg(ach, saved);
        } else {
            Name chb = mchan(be);
            MuReg saved = save_mu_reg(u);
            much[al] = u;
            reg_mu(u, uf);
            if (fmv.count(be)) {
                Name vh = fresh("v");
                b = emit(t->m, vh);
                b.contract(chb, vh);
            } else {
                b = emit(t->m, chb);
            }
            if (!alpha_free) b.weaken(u, uf);
            restore_mu_reg(u, saved);
        }
        tmuctx.pop_back();
        much.erase(al);
        normalize(b, u);
        return b;
    }

    EB emit_tylam(const lam::MP& t, const Name& u) {
        EB b = emit(t->m, u);
        b.move(b.find(u), (int)b.es.size() - 1);
        b.forall_rule(t->x, st.delta);
        normalize(b, u);
        return b;
    }

    EB emit_tyapp(const lam::MP& t, const Name& u) {
        lam::TP fty = type_of(t->m);
        lam::TP inst = lam::tsubst(fty->a, fty->var, t->ty);
        Name v = fresh("v");
        EB ax = EB::axiom(lla::wrap_word(st.delta, ty(inst)), v, u);
        ax.exch(0);
        ax.exists_rule(fty->var, lla::dual(ty(fty->a)), ty(t->ty), dual_word(st.delta));
        EB m = emit(t->m, v);
        EB c = EB::cut(std::move(ax), std::move(m), v, lla::wrap_word(st.delta, ty(fty)));
        normalize(c, u);
        return c;
    }

    EB emit_pair(const lam::MP& t, const Name& u) {
        Name x = fresh("x"), y = fresh("y");
        EB m = emit_component(t->m, x);
        auto saved = snap();
        Copies cps = make_copies(lam::free_vars(t->m), lam::free_mu_vars(t->m), t->n);
        EB n = emit_component(t->n, y);
        restore(std::move(saved));
        n.move(n.find(y), 0);
        int le = (int)m.es.size();
        EB t2 = EB::tensor(std::move(m), std::move(n));
        t2.move(le - 1, (int)t2.es.size() - 1);
        t2.apply_word(st.delta, u);
        contract_copies(t2, cps);
        normalize(t2, u);
        return t2;
    }

    EB emit_let(const lam::MP& t, const Name& u) {
        lam::TP pt = type_of(t->m);
        const Name& x = t->x;
        const Name& y = t->y;
        lla::FP xf = ctx_form(pt->a), yf = ctx_form(pt->b);
        tctx.push_back({x, pt->a});
        tctx.push_back({y, pt->b});
        reg_lam(x, xf);
        reg_lam(y, yf);
        EB b = emit(t->n, u);
        tctx.pop_back();
        tctx.pop_back();
        auto fvn = lam::free_vars(t->n);
        if (!fvn.count(x)) b.weaken(x, xf);
        if (!fvn.count(y)) b.weaken(y, yf);
        b.move(b.find(x), (int)b.es.size() - 1);
        b.move(b.find(y), (int)b.es.size() - 1);
        b.par_at((int)b.es.size() - 2);
        Name v = fresh("v");
        b.apply_word(dual_word(st.delta), v);
        auto saved = snap();
        Copies cps = make_copies(lam::free_vars(t->n), lam::free_mu_vars(t->n), t->m);
        EB m = emit(t->m, v);
        restore(std::move(saved));
        EB c = EB::cut(std::move(b), std::move(m), v, lla::wrap_word(st.delta, ty(pt)));
        contract_copies(c, cps);
        normalize(c, u);
        return c;
    }

    EB emit_inj(const lam::MP& t, const Name& u) {
        lla::FP other = lla::fup(lla::wrap_word(st.gamma, ty(t->ty)));
        Name a1 = fresh("a"), a2 = fresh("b");
        Name tgt = t->idx == 1 ? a1 : a2;
        Name w = fresh("w");
        EB b = emit(t->m, w);
        b.move(b.find(w), (int)b.es.size() - 1);
        b.apply_word("^" + st.delta_c, tgt);
        b.plus_rule(t->idx, t->idx == 1 ? a2 : a1, other);
        b.apply_word(st.delta, u);
        normalize(b, u);
        return b;
    }

    EB emit_case(const lam::MP& t, const Name& u) {
        lam::TP sty = type_of(t->m);
        lla::FP x1f = ctx_form(sty->a), x2f = ctx_form(sty->b);
        tctx.push_back({t->x, sty->a});
        reg_lam(t->x, x1f);
        EB b1 = emit(t->n, u);
        tctx.pop_back();
        if (!lam::free_vars(t->n).count(t->x)) b1.weaken(t->x, x1f);
        tctx.push_back({t->y, sty->b});
        reg_lam(t->y, x2f);
        EB b2 = emit(t->n2, u);
        tctx.pop_back();
        if (!lam::free_vars(t->n2).count(t->y)) b2.weaken(t->y, x2f);
        equalize(b1, b2, u, t->x, t->y);
        Name ca = fresh("a"), cb = fresh("b");
        EB w = EB::with_choice(std::move(b1), std::move(b2), ca, cb);
        Name v = fresh("v");
        w.apply_word(dual_word(st.delta), v);
        NameSet keepV = lam::free_vars(t->n);
        for (auto& n : lam::free_vars(t->n2)) keepV.insert(n);
        NameSet keepM = lam::free_mu_vars(t->n);
        for (auto& n : lam::free_mu_vars(t->n2)) keepM.insert(n);
        auto saved = snap();
        Copies cps = make_copies(keepV, keepM, t->m);
        EB m = emit(t->m, v);
        restore(std::move(saved));
        EB c = EB::cut(std::move(w), std::move(m), v, lla::wrap_word(st.delta, ty(sty)));
        contract_copies(c, cps);
        normalize(c, u);
        return c;
    }

    // Reorders (and, classically, weakens) the branch sequents of a case so
    // both premises of the with rule carry identical contexts, with the
    // branch binder entry kept last.
    void equalize(EB& b1, EB& b2, const Name& u, const Name& bind1, const Name& bind2) {
        auto chans = [&](const EB& b, const Name& skip) {
            std::set<Name> out;
            for (auto& e : b.es)
                if (!(e.names[0] == u) && !(e.names[0] == skip)) out.insert(e.names[0]);
            return out;
        };
        std::set<Name> c1 = chans(b1, bind1), c2 = chans(b2, bind2);
        auto fill = [&](EB& b, const std::set<Name>& have, const std::set<Name>& want) {
            for (auto& n : want) {
                if (have.count(n)) continue;
                if (auto it = gform.find(n); it != gform.end())
                    b.weaken(n, it->second);
                else
                    b.weaken(n, dform.at(n));
            }
        };
        fill(b1, c1, c2);
        fill(b2, c2, c1);
        std::set<Name> uni = c1;
        uni.insert(c2.begin(), c2.end());
        std::vector<std::pair<int, Name>> gs, ds;
        for (auto& n : uni) {
            if (auto it = grank.find(n); it != grank.end())
                gs.push_back({it->second, n});
            else
                ds.push_back({drank.at(n), n});
        }
        std::sort(gs.begin(), gs.end());
        std::sort(ds.begin(), ds.end());
        auto arrange = [&](EB& b, const Name& bind) {
            std::vector<Name> want;
            for (auto& [r, n] : gs) want.push_back(n);
            want.push_back(u);
            for (auto& [r, n] : ds) want.push_back(n);
            want.push_back(bind);
            for (size_t p = 0; p < want.size(); ++p) b.move(b.find(want[p]), (int)p);
        };
        arrange(b1, bind1);
        arrange(b2, bind2);
    }

    EB emit_sharp(const lam::MP& t, const Name& u) {
        lam::TP A = type_of(t->m);
        Name x = fresh("x");
        EB v = var_core(x, A, u);
        EB srv = emit_arg(t->m, x);
        EB c = EB::cut(std::move(v), std::move(srv), x, arg_form(A));
        normalize(c, u);
        return c;
    }
};

// Emitter for the arity-indexed translation of pure lambda terms.  The
// invariant: the derivation for M at channels ys has sequent
//   [context entries in declaration order, one entry per name of ys carrying
//    the components of the result type].
struct SimpleEmitter {
    Strategy st = strategy_named("simply");
    lam::TypeCtx tctx;
    std::map<Name, Name> ch;  // variable -> channel (binder aliases, copies)
    std::map<Name, int> grank;
    std::map<Name, lla::FP> gform;
    int nrank = 0;

    lla::FP ty0(const lam::TP& a) const { return tr_type(a, st); }
    lam::TP type_of(const lam::MP& t) { return lam::typecheck(t, tctx, {}); }

    Name chan(const Name& x) const {
        auto it = ch.find(x);
        return it == ch.end() ? x : it->second;
    }

    void reg(const Name& c, const lla::FP& f) {
        grank[c] = nrank++;
        gform[c] = f;
    }

    static void split(const lla::FP& f, std::vector<lla::FP>& out) {
        if (f->kind == lla::FKind::Parr) {
            split(f->left, out);
            split(f->right, out);
        } else {
            out.push_back(f);
        }
    }

    void normalize(EB& b, const NameVec& ys) {
        std::set<Name> split_names(ys.begin(), ys.end());
        std::vector<std::pair<int, Name>> gs;
        for (auto& e : b.es) {
            const Name& n = e.names[0];
            if (split_names.count(n)) continue;
            gs.push_back({grank.at(n), n});
        }
        std::sort(gs.begin(), gs.end());
        std::vector<Name> want;
        for (auto& [r, n] : gs) want.push_back(n);
        for (auto& n : ys) want.push_back(n);
        for (size_t p = 0; p < want.size(); ++p) b.move(b.find(want[p]), (int)p);
    }

    EB emit(const lam::MP& t, const NameVec& ys) {
        switch (t->kind) {
            case lam::MKind::Var: return emit_var(chan(t->x), type_of(t), ys);
            case lam::MKind::Lam: return emit_abs(t, ys);
            case lam::MKind::App: return emit_app(t, ys);
            default: fail("emit: the arity translation covers pure lambda terms only");
        }
    }

    EB emit_var(const Name& chx, const lam::TP& A, const NameVec& ys) {
        std::vector<lla::FP> ls;
        split(ty0(A), ls);
        if (ls.size() != ys.size()) fail("emit: channel count does not match the type arity");
        int k = (int)ls.size();
        std::vector<EB> ds;
        for (int i = 0; i < k; ++i) {
            EB a = EB::axiom(ls[i], fresh("w"), ys[i]);
            a.exch(0);
            ds.push_back(std::move(a));
        }
        EB acc = std::move(ds[k - 1]);
        for (int i = k - 2; i >= 0; --i) {
            acc.move(1, 0);
            acc = EB::tensor(std::move(ds[i]), std::move(acc));
        }
        acc.move(1, (int)acc.es.size() - 1);
        acc.act('?', chx);
        acc.move((int)acc.es.size() - 1, 0);
        return acc;
    }

    EB emit_abs(const lam::MP& t, const NameVec& ys) {
        const Name& x = t->x;
        ch[x] = ys[0];
        reg(ys[0], lla::fquest(lla::dual(ty0(t->ty))));
        tctx.push_back({x, t->ty});
        NameVec rest(ys.begin() + 1, ys.end());
        EB b = emit(t->m, rest);
        tctx.pop_back();
        if (!lam::free_vars(t->m).count(x)) b.weaken(ys[0], gform.at(ys[0]));
        grank.erase(ys[0]);
        gform.erase(ys[0]);
        normalize(b, ys);
        return b;
    }

    EB emit_app(const lam::MP& t, const NameVec& ys) {
        lla::FP A0 = ty0(type_of(t->n));
        std::vector<lla::FP> ls;
        split(A0, ls);
        int k = (int)ls.size();
        Name x = fresh("x");
        NameVec xys{x};
        xys.insert(xys.end(), ys.begin(), ys.end());
        EB m = emit(t->m, xys);
        auto keep = lam::free_vars(t->m);
        auto savedch = ch;
        std::vector<std::pair<Name, Name>> cps;
        for (auto& v : lam::free_vars(t->n)) {
            if (!keep.count(v)) continue;
            Name orig = chan(v), cp = freshen(orig);
            grank[cp] = grank.at(orig);
            gform[cp] = gform.at(orig);
            ch[v] = cp;
            cps.push_back({orig, cp});
        }
        NameVec zs;
        for (int i = 0; i < k; ++i) zs.push_back(fresh("z"));
        EB n = emit(t->n, zs);
        ch = std::move(savedch);
        int g = (int)n.es.size() - k;
        for (int j = k - 2; j >= 0; --j) n.par_at(g + j);
        n.act('!', x);
        EB c = EB::cut(std::move(m), std::move(n), x, lla::fbang(A0));
        for (auto& [orig, cp] : cps) c.contract(orig, cp);
        normalize(c, ys);
        return c;
    }
};

}  // namespace detail

// Builds a derivation for `term` under the given contexts whose checked
// sequent is the theorem sequent at result channel u and whose process is the
// translation of the term.
inline lla::DP emit_derivation(const lam::MP& term, const lam::TypeCtx& ctx,
                               const lam::TypeCtx& muctx, const Strategy& st,
                               const Name& u) {
    if (st.simply) fail("emit_derivation: the arity translation has its own emitter");
    detail::DerivEmitter em(st);
    lam::MP t = lam::rename_apart(term);
    for (auto& [x, a] : ctx) {
        em.tctx.push_back({x, a});
        em.reg_lam(x, em.ctx_form(a));
    }
    for (auto& [b, a] : muctx) {
        em.tmuctx.push_back({b, a});
        em.reg_mu(b, em.out_form(a));
    }
    detail::EB b = em.emit(t, u);
    std::set<Name> present;
    for (auto& e : b.es) present.insert(e.names[0]);
    for (auto& [x, a] : ctx)
        if (!present.count(x)) b.weaken(x, em.gform.at(x));
    for (auto& [m, a] : muctx)
        if (!present.count(m)) b.weaken(m, em.dform.at(m));
    em.normalize(b, u);
    return b.d;
}

// Same for the arity-indexed translation: the checked sequent is the simple
// theorem sequent over ys and the process is translate_simple(term).
inline lla::DP emit_derivation_simple(const lam::MP& term, const lam::TypeCtx& ctx,
                                      const NameVec& ys) {
    detail::SimpleEmitter em;
    lam::MP t = lam::rename_apart(term);
    for (auto& [x, a] : ctx) {
        em.tctx.push_back({x, a});
        em.reg(x, lla::fquest(lla::dual(em.ty0(a))));
    }
    detail::EB b = em.emit(t, ys);
    int g = (int)b.es.size() - (int)ys.size();
    for (int j = (int)ys.size() - 2; j >= 0; --j) b.par_at(g + j);
    std::set<Name> present;
    for (auto& e : b.es) present.insert(e.names[0]);
    int before = (int)b.es.size();
    for (auto& [x, a] : ctx)
        if (!present.count(x)) b.weaken(x, em.gform.at(x));
    if ((int)b.es.size() != before) b.move(before - 1, (int)b.es.size() - 1);
    std::vector<Name> want;
    for (auto& [x, a] : ctx) want.push_back(x);
    for (size_t p = 0; p < want.size(); ++p) {
        int i = b.find(want[p]);
        b.move(i, (int)p);
    }
    return b.d;
}

}  // namespace fuspi::trans
