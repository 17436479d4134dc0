#include "rewr/fologic.hpp"

#include <cctype>
#include <cstdint>
#include <optional>
#include <utility>

#include "internal.hpp"

namespace rewr {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr mk_eq(Term lhs, Term rhs) {
    return make({Formula::Kind::Eq, std::move(lhs), std::move(rhs), nullptr, nullptr, {}});
}
FormulaPtr mk_step(Term lhs, Term rhs) {
    return make({Formula::Kind::Step, std::move(lhs), std::move(rhs), nullptr, nullptr, {}});
}
FormulaPtr mk_not(FormulaPtr f) {
    return make({Formula::Kind::Not, {}, {}, std::move(f), nullptr, {}});
}
FormulaPtr mk_and(FormulaPtr l, FormulaPtr r) {
    return make({Formula::Kind::And, {}, {}, std::move(l), std::move(r), {}});
}
FormulaPtr mk_or(FormulaPtr l, FormulaPtr r) {
    return make({Formula::Kind::Or, {}, {}, std::move(l), std::move(r), {}});
}
FormulaPtr mk_implies(FormulaPtr l, FormulaPtr r) {
    return make({Formula::Kind::Implies, {}, {}, std::move(l), std::move(r), {}});
}
FormulaPtr mk_forall(std::string v, FormulaPtr body) {
    return make({Formula::Kind::ForAll, {}, {}, std::move(body), nullptr, std::move(v)});
}
FormulaPtr mk_exists(std::string v, FormulaPtr body) {
    return make({Formula::Kind::Exists, {}, {}, std::move(body), nullptr, std::move(v)});
}
Term var(std::string name) { return Term{true, std::move(name)}; }
Term cst(std::string name) { return Term{false, std::move(name)}; }

// ---------------------------------------------------------------------------
// Alpha-equivalence: bound variables are compared by binder position, free
// variables and constants by name (and by kind).

namespace {

using BinderMap = std::map<std::string, int>;

bool term_alpha_equal(const Term& a, const Term& b, const BinderMap& la, const BinderMap& lb) {
    if (a.is_variable != b.is_variable) return false;
    if (!a.is_variable) return a.name == b.name;
    auto ia = la.find(a.name);
    auto ib = lb.find(b.name);
    if ((ia == la.end()) != (ib == lb.end())) return false;
    if (ia == la.end()) return a.name == b.name;  // both free
    return ia->second == ib->second;
}

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b, BinderMap& la, BinderMap& lb,
                 int depth) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::Eq:
        case Formula::Kind::Step:
            return term_alpha_equal(a->lhs, b->lhs, la, lb) &&
                   term_alpha_equal(a->rhs, b->rhs, la, lb);
        case Formula::Kind::Not:
            return alpha_equal(a->child, b->child, la, lb, depth);
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
            return alpha_equal(a->child, b->child, la, lb, depth) &&
                   alpha_equal(a->child2, b->child2, la, lb, depth);
        case Formula::Kind::ForAll:
        case Formula::Kind::Exists: {
            auto olda = la.find(a->bound) == la.end()
                            ? std::optional<int>{}
                            : std::optional<int>{la[a->bound]};
            auto oldb = lb.find(b->bound) == lb.end()
                            ? std::optional<int>{}
                            : std::optional<int>{lb[b->bound]};
            la[a->bound] = depth;
            lb[b->bound] = depth;
            const bool r = alpha_equal(a->child, b->child, la, lb, depth + 1);
            if (olda) la[a->bound] = *olda; else la.erase(a->bound);
            if (oldb) lb[b->bound] = *oldb; else lb.erase(b->bound);
            return r;
        }
    }
    return false;
}

}  // namespace

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    BinderMap la, lb;
    return alpha_equal(a, b, la, lb, 0);
}

// ---------------------------------------------------------------------------
// Parsing.

FormulaParseError::FormulaParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

enum class Tok {
    Ident, Int, LParen, RParen, LBracket, RBracket, Comma, Dot,
    Eq, Neq, Arrow, StepArrow, Tilde, Amp, Pipe, End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
    while (i < n) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t pos = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), pos});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Int, std::string(text.substr(i, j - i)), pos});
            i = j;
        } else if (starts("-->")) {
            out.push_back({Tok::StepArrow, "-->", pos});
            i += 3;
        } else if (starts("->")) {
            out.push_back({Tok::Arrow, "->", pos});
            i += 2;
        } else if (starts("!=")) {
            out.push_back({Tok::Neq, "!=", pos});
            i += 2;
        } else {
            Tok k;
            switch (c) {
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case '[': k = Tok::LBracket; break;
                case ']': k = Tok::RBracket; break;
                case ',': k = Tok::Comma; break;
                case '.': k = Tok::Dot; break;
                case '=': k = Tok::Eq; break;
                case '~': k = Tok::Tilde; break;
                case '&': k = Tok::Amp; break;
                case '|': k = Tok::Pipe; break;
                default:
                    throw FormulaParseError(pos, std::string("unexpected character '") + c + "'");
            }
            out.push_back({k, std::string(1, c), pos});
            ++i;
        }
    }
    out.push_back({Tok::End, "", n});
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    FormulaPtr run() {
        FormulaPtr f = implication();
        if (peek().kind != Tok::End)
            throw FormulaParseError(peek().pos, "unexpected trailing input");
        return f;
    }

  private:
    const Token& peek() const { return toks_[idx_]; }
    Token take() { return toks_[idx_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++idx_;
        return true;
    }
    Token expect(Tok k, const char* what) {
        if (peek().kind != k) throw FormulaParseError(peek().pos, std::string("expected ") + what);
        return take();
    }

    bool bound_in_scope(const std::string& name) const {
        for (const std::string& s : scope_)
            if (s == name) return true;
        return false;
    }

    Term make_term(const std::string& name) const {
        return Term{bound_in_scope(name), name};
    }

    // Fresh variable for macro expansion: never collides with the macro's
    // argument names or any name currently in scope.
    std::string fresh(const Term& s, const Term& t) {
        for (;;) {
            std::string name = "_v" + std::to_string(fresh_counter_++);
            if (name != s.name && name != t.name && !bound_in_scope(name)) return name;
        }
    }

    FormulaPtr implication() {
        FormulaPtr l = disjunct();
        if (accept(Tok::Arrow)) return mk_implies(std::move(l), implication());
        return l;
    }

    FormulaPtr disjunct() {
        FormulaPtr f = conjunct();
        while (accept(Tok::Pipe)) f = mk_or(std::move(f), conjunct());
        return f;
    }

    FormulaPtr conjunct() {
        FormulaPtr f = negation();
        while (accept(Tok::Amp)) f = mk_and(std::move(f), negation());
        return f;
    }

    FormulaPtr negation() {
        if (accept(Tok::Tilde)) return mk_not(negation());
        if (peek().kind == Tok::Ident && (peek().text == "forall" || peek().text == "exists"))
            return quantified();
        return primary();
    }

    FormulaPtr quantified() {
        const bool universal = take().text == "forall";
        Token v = expect(Tok::Ident, "a variable name");
        expect(Tok::Dot, "'.'");
        scope_.push_back(v.text);
        FormulaPtr body = implication();  // the body extends maximally
        scope_.pop_back();
        return universal ? mk_forall(v.text, std::move(body))
                         : mk_exists(v.text, std::move(body));
    }

    FormulaPtr primary() {
        if (accept(Tok::LParen)) {
            FormulaPtr f = implication();
            expect(Tok::RParen, "')'");
            return f;
        }
        Token id = expect(Tok::Ident, "a term or formula");
        if (id.text == "nf" && peek().kind == Tok::LParen) {
            take();
            Term t = make_term(expect(Tok::Ident, "a term").text);
            expect(Tok::RParen, "')'");
            std::string y = fresh(t, t);
            return mk_not(mk_exists(y, mk_step(t, var(y))));
        }
        if ((id.text == "step" || id.text == "conv") && peek().kind == Tok::LBracket) {
            take();
            Token count = expect(Tok::Int, "a step count");
            expect(Tok::RBracket, "']'");
            expect(Tok::LParen, "'('");
            Term s = make_term(expect(Tok::Ident, "a term").text);
            expect(Tok::Comma, "','");
            Term t = make_term(expect(Tok::Ident, "a term").text);
            expect(Tok::RParen, "')'");
            unsigned n = 0;
            for (char c : count.text) n = n * 10 + static_cast<unsigned>(c - '0');
            return id.text == "step" ? expand_step(n, s, t) : expand_conv(n, s, t);
        }
        Term lhs = make_term(id.text);
        if (accept(Tok::Eq)) return mk_eq(lhs, rhs_term());
        if (accept(Tok::Neq)) return mk_not(mk_eq(lhs, rhs_term()));
        if (accept(Tok::StepArrow)) return mk_step(lhs, rhs_term());
        throw FormulaParseError(peek().pos, "expected '=', '!=' or '-->' after a term");
    }

    Term rhs_term() { return make_term(expect(Tok::Ident, "a term").text); }

    //   x ->^0 y = x = y          x ->^{n+1} y = exists z. x -> z & z ->^n y
    FormulaPtr expand_step(unsigned n, const Term& s, const Term& t) {
        if (n == 0) return mk_eq(s, t);
        std::string z = fresh(s, t);
        return mk_exists(z, mk_and(mk_step(s, var(z)), expand_step(n - 1, var(z), t)));
    }

    //   x <->^0 y = x = y
    //   x <->^{n+1} y = exists z. (x -> z | z -> x) & z <->^n y
    FormulaPtr expand_conv(unsigned n, const Term& s, const Term& t) {
        if (n == 0) return mk_eq(s, t);
        std::string z = fresh(s, t);
        return mk_exists(z, mk_and(mk_or(mk_step(s, var(z)), mk_step(var(z), s)),
                                   expand_conv(n - 1, var(z), t)));
    }

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
    std::vector<std::string> scope_;
    unsigned fresh_counter_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing. Precedence: quantifiers 0 (maximal bodies), -> 1 (right-assoc),
// | 2, & 3, ~ 4, atoms 5; a subformula is parenthesised when its level is
// below the context's.

namespace {

int precedence_of(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::ForAll:
        case Formula::Kind::Exists: return 0;
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::Not: return 4;
        default: return 5;
    }
}

void print_rec(const FormulaPtr& f, int ctx, std::string& out) {
    const int prec = precedence_of(*f);
    // Negated equality prints as the sugar form at atom level.
    if (f->kind == Formula::Kind::Not && f->child->kind == Formula::Kind::Eq) {
        out += f->child->lhs.name + " != " + f->child->rhs.name;
        return;
    }
    const bool parens = prec < ctx;
    if (parens) out += '(';
    switch (f->kind) {
        case Formula::Kind::Eq:
            out += f->lhs.name + " = " + f->rhs.name;
            break;
        case Formula::Kind::Step:
            out += f->lhs.name + " --> " + f->rhs.name;
            break;
        case Formula::Kind::Not:
            out += '~';
            print_rec(f->child, 4, out);
            break;
        case Formula::Kind::And:
            print_rec(f->child, 3, out);
            out += " & ";
            print_rec(f->child2, 4, out);
            break;
        case Formula::Kind::Or:
            print_rec(f->child, 2, out);
            out += " | ";
            print_rec(f->child2, 3, out);
            break;
        case Formula::Kind::Implies:
            print_rec(f->child, 2, out);
            out += " -> ";
            print_rec(f->child2, 1, out);
            break;
        case Formula::Kind::ForAll:
        case Formula::Kind::Exists:
            out += (f->kind == Formula::Kind::ForAll ? "forall " : "exists ") + f->bound + ". ";
            print_rec(f->child, 0, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    print_rec(f, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

class Evaluator {
  public:
    Evaluator(const Ars& ars, const Environment& env)
        : ars_(ars), env_(env), adj_(detail::adjacency_bits(ars)) {
        for (const auto& [name, node] : env) {
            if (node >= ars.n_nodes())
                throw std::invalid_argument("environment value out of range for '" + name + "'");
        }
    }

    bool ev(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::Eq: return resolve(f->lhs) == resolve(f->rhs);
            case Formula::Kind::Step: return adj_.test(resolve(f->lhs), resolve(f->rhs));
            case Formula::Kind::Not: return !ev(f->child);
            case Formula::Kind::And: return ev(f->child) && ev(f->child2);
            case Formula::Kind::Or: return ev(f->child) || ev(f->child2);
            case Formula::Kind::Implies: return !ev(f->child) || ev(f->child2);
            case Formula::Kind::ForAll:
            case Formula::Kind::Exists: {
                const bool universal = f->kind == Formula::Kind::ForAll;
                auto it = scope_.find(f->bound);
                const std::optional<NodeId> saved =
                    it == scope_.end() ? std::optional<NodeId>{} : std::optional<NodeId>{it->second};
                bool result = universal;
                for (NodeId v = 0; v < ars_.n_nodes(); ++v) {
                    scope_[f->bound] = v;
                    if (ev(f->child) != universal) {
                        result = !universal;
                        break;
                    }
                }
                if (saved) scope_[f->bound] = *saved; else scope_.erase(f->bound);
                return result;
            }
        }
        return false;
    }

  private:
    NodeId resolve(const Term& t) {
        if (t.is_variable) {
            auto it = scope_.find(t.name);
            if (it == scope_.end())
                throw std::invalid_argument("unbound variable '" + t.name + "'");
            return it->second;
        }
        auto it = env_.find(t.name);
        if (it == env_.end()) throw std::invalid_argument("unbound constant '" + t.name + "'");
        return it->second;
    }

    const Ars& ars_;
    const Environment& env_;
    detail::BitMatrix adj_;
    std::map<std::string, NodeId> scope_;
};

}  // namespace

bool eval(const Ars& ars, const FormulaPtr& f, const Environment& env) {
    return Evaluator(ars, env).ev(f);
}

// ---------------------------------------------------------------------------
// The named sentence families.

FormulaPtr delta_un(unsigned i) {
    return parse_formula("forall a. forall b. nf(a) & nf(b) & conv[" + std::to_string(i) +
                         "](a, b) -> a = b");
}

FormulaPtr delta_unr(unsigned i, unsigned j) {
    return parse_formula("forall a. forall b. forall x. nf(a) & nf(b) & step[" +
                         std::to_string(i) + "](x, a) & step[" + std::to_string(j) +
                         "](x, b) -> a = b");
}

FormulaPtr delta_ac(unsigned i) {
    if (i == 0) throw std::invalid_argument("acyclicity sentences start at i = 1");
    return parse_formula("forall a. forall b. step[" + std::to_string(i) +
                         "](a, b) -> ~(a = b)");
}

FormulaPtr xi_a() {
    return parse_formula(
        "forall x. forall y. forall z. (a --> x & a --> y & a --> z) -> "
        "(x = y | y = z | x = z)");
}

FormulaPtr xi_not_a() {
    return parse_formula(
        "forall x. forall y. forall z. (~(x = a) & x --> y & x --> z) -> y = z");
}

bool check_bounded_gfop(const Ars& ars, GfopFamily family) {
    const unsigned bound = ars.n_nodes();  // simple paths/cycles never need more
    switch (family) {
        case GfopFamily::UN:
            for (unsigned i = 0; i <= bound; ++i)
                if (!eval(ars, delta_un(i))) return false;
            return true;
        case GfopFamily::UNR:
            for (unsigned i = 0; i <= bound; ++i)
                for (unsigned j = 0; j <= bound; ++j)
                    if (!eval(ars, delta_unr(i, j))) return false;
            return true;
        case GfopFamily::AC:
            for (unsigned i = 1; i <= bound; ++i)
                if (!eval(ars, delta_ac(i))) return false;
            return true;
    }
    return false;
}

}  // namespace rewr
