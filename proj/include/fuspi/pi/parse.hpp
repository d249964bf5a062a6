#pragma once

#include "fuspi/pi/ast.hpp"

#include <cctype>

namespace fuspi {

// Shared lexer for the small textual syntaxes. Identifiers may contain
// primes, `#` starts a comment running to end of line.
class Lexer {
public:
    explicit Lexer(std::string text) : text_(std::move(text)) { skip(); }

    bool done() const { return pos_ >= text_.size(); }

    char peek() const { return done() ? '\0' : text_[pos_]; }

    bool lookahead(const std::string& s) const {
        return text_.compare(pos_, s.size(), s) == 0;
    }

    bool eat(const std::string& s) {
        if (!lookahead(s)) return false;
        pos_ += s.size();
        skip();
        return true;
    }

    void expect(const std::string& s) {
        if (!eat(s)) fail("expected '", s, "' at: ", rest(24));
    }

    bool ident_ahead() const {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    // Does an identifier followed (after spaces) by token s come next?
    bool ident_then(const std::string& s) const {
        if (!ident_ahead()) return false;
        size_t i = pos_;
        while (i < text_.size() && is_ident_char(text_[i])) ++i;
        while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
        return text_.compare(i, s.size(), s) == 0;
    }

    std::string ident() {
        if (!ident_ahead()) fail("expected identifier at: ", rest(24));
        size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        std::string s = text_.substr(start, pos_ - start);
        skip();
        return s;
    }

    std::string word_ahead() const {
        if (!ident_ahead()) return "";
        size_t i = pos_;
        while (i < text_.size() && is_ident_char(text_[i])) ++i;
        return text_.substr(pos_, i - pos_);
    }

    std::string rest(size_t n) const {
        std::string r = text_.substr(pos_, n);
        if (pos_ + n < text_.size()) r += "...";
        return r.empty() ? "<end of input>" : r;
    }

    void end() {
        if (!done()) fail("unexpected trailing input: ", rest(24));
    }

private:
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string text_;
    size_t pos_ = 0;
};

}  // namespace fuspi

namespace fuspi::pi {

namespace detail {

struct ProcParser {
    Lexer lx;

    explicit ProcParser(const std::string& s) : lx(s) {}

    Name name() {
        std::string id = lx.ident();
        if (id == "nu") fail("'nu' is a keyword, not a name");
        return mkname(id);
    }

    NameVec name_list(const char* close) {
        NameVec xs;
        if (lx.lookahead(close)) return xs;
        xs.push_back(name());
        while (lx.eat(",")) xs.push_back(name());
        return xs;
    }

    Action action() {
        bool out = lx.eat("'");
        Name u = name();
        lx.expect("(");
        NameVec xs = name_list(")");
        lx.expect(")");
        return Action{!out, u, xs};
    }

    PP prefix() {
        if (lx.eat("1")) return nil();
        if (lx.eat("(")) {
            PP p = par_exp();
            lx.expect(")");
            return p;
        }
        if (lx.word_ahead() == "nu") {
            lx.eat("nu");
            Name x = name();
            lx.expect(".");
            return nu(x, prefix());
        }
        if (lx.eat("!")) {
            Action a = action();
            lx.expect(".");
            return repl(a, prefix());
        }
        if (lx.lookahead("'")) {
            // binding output 'u(xs).p or output macro 'u<xs>
            lx.eat("'");
            Name u = name();
            if (lx.eat("<")) {
                NameVec xs = name_list(">");
                lx.expect(">");
                return macro_out(u, xs);
            }
            lx.expect("(");
            NameVec xs = name_list(")");
            lx.expect(")");
            lx.expect(".");
            return act(Action{false, u, xs}, prefix());
        }
        Name u = name();
        if (lx.eat("~")) return fuse(u, name());
        lx.expect("(");
        NameVec xs = name_list(")");
        lx.expect(")");
        lx.expect(".");
        return act(Action{true, u, xs}, prefix());
    }

    PP choice_exp() {
        PP first = prefix();
        if (!lx.lookahead("+")) return first;
        std::vector<Branch> brs;
        auto push = [&](const PP& p) {
            if (p->kind != PKind::Act || !p->act.input)
                fail("choice branches must be input-prefixed");
            brs.push_back({p->act, p->body});
        };
        push(first);
        while (lx.eat("+")) push(prefix());
        return choice(std::move(brs));
    }

    PP par_exp() {
        std::vector<PP> cs{choice_exp()};
        while (lx.eat("|")) cs.push_back(choice_exp());
        if (cs.size() == 1) return cs[0];
        return par(std::move(cs));
    }
};

}  // namespace detail

inline PP parse(const std::string& text) {
    detail::ProcParser p(text);
    PP r = p.par_exp();
    p.lx.end();
    return r;
}

}  // namespace fuspi::pi
