#pragma once

#include <string>

#include "fuspi/trans/emit.hpp"
#include "fuspi/trans/types.hpp"

// Typing preservation, checked mechanically: the emitted derivation must pass
// the sequent checker, land on exactly the theorem sequent computed from the
// typing judgement, and rebuild the translated process up to congruence.

namespace fuspi::verify {

struct TypingReport {
    bool ok = false;
    std::string failure;
};

inline TypingReport check_typing_preservation(const lam::MP& term, const lam::TypeCtx& ctx,
                                              const lam::TypeCtx& muctx,
                                              const trans::Strategy& st) {
    TypingReport r;
    try {
        lam::TP a = lam::typecheck(term, ctx, muctx);
        lla::ArityCtx actx = trans::type_arities(st);
        if (st.simply) {
            if (!muctx.empty()) fail("the arity translation has no continuation channels");
            int width = lla::arity(trans::tr_type(a, st), actx);
            NameVec ys;
            for (int i = 0; i < width; ++i) ys.push_back(mkname("r" + std::to_string(i + 1)));
            lla::Sequent want = trans::build_theorem_sequent_simple(ctx, a, st, ys);
            lla::Checked got = lla::check_derivation(trans::emit_derivation_simple(term, ctx, ys), actx);
            if (!lla::alpha_equal(got.seq, want))
                fail("checked sequent differs from the theorem sequent");
            if (pi::normal_key(got.proc) != pi::normal_key(trans::translate_simple(term, ctx, ys)))
                fail("derivation process differs from the translation");
        } else {
            Name u = mkname("result");
            lla::Sequent want = trans::build_theorem_sequent(ctx, a, muctx, st, u);
            lla::Checked got =
                lla::check_derivation(trans::emit_derivation(term, ctx, muctx, st, u), actx);
            if (!lla::alpha_equal(got.seq, want))
                fail("checked sequent differs from the theorem sequent");
            if (pi::normal_key(got.proc) != pi::normal_key(trans::translate(term, st, u)))
                fail("derivation process differs from the translation");
        }
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.failure = e.what();
    }
    return r;
}

}  // namespace fuspi::verify
