#include "agv/logic.hpp"

#include <cctype>

namespace agv
{

namespace fml
{

namespace
{
FormulaPtr make(Op op, FormulaPtr l = nullptr, FormulaPtr r = nullptr)
{
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}
} // namespace

FormulaPtr top() { return make(Op::True); }
FormulaPtr bottom() { return make(Op::False); }

FormulaPtr atom(Valuation v)
{
    auto f = std::make_shared<Formula>();
    f->op = Op::Atom;
    f->atom = std::move(v);
    return f;
}

FormulaPtr atom(const std::string& var, Value v) { return atom(Valuation{{var, v}}); }
FormulaPtr neg(FormulaPtr f) { return make(Op::Not, std::move(f)); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(Op::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make(Op::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return make(Op::Implies, std::move(a), std::move(b)); }
FormulaPtr until(FormulaPtr a, FormulaPtr b) { return make(Op::Until, std::move(a), std::move(b)); }
FormulaPtr finally(FormulaPtr f) { return make(Op::Finally, std::move(f)); }
FormulaPtr globally(FormulaPtr f) { return make(Op::Globally, std::move(f)); }

FormulaPtr coop(std::vector<std::string> coalition, FormulaPtr f)
{
    if (coalition.empty())
        throw ModelError("empty coalition");
    auto g = std::make_shared<Formula>();
    g->op = Op::Coop;
    g->coalition = std::move(coalition);
    g->lhs = std::move(f);
    return g;
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs)
{
    if (fs.empty())
        return top();
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
        acc = conj(acc, fs[i]);
    return acc;
}

} // namespace fml

FormulaSyntaxError::FormulaSyntaxError(const std::string& msg, int line_, int column_)
    : std::runtime_error("syntax error at " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
      line(line_), column(column_)
{
}

namespace
{

enum class Tok
{
    Ident,
    Int,
    Eq,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LCoop,
    RCoop,
    Comma,
    End
};

struct Token
{
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cl});
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && i + 1 < s.size() &&
                                                                   std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            out.push_back({Tok::Int, std::string(s.substr(i, j - i)), l, cl});
            advance(j - i);
        } else if (s.substr(i, 2) == "<<") {
            out.push_back({Tok::LCoop, "<<", l, cl});
            advance(2);
        } else if (s.substr(i, 2) == ">>") {
            out.push_back({Tok::RCoop, ">>", l, cl});
            advance(2);
        } else if (s.substr(i, 2) == "->") {
            out.push_back({Tok::Arrow, "->", l, cl});
            advance(2);
        } else {
            Tok k;
            switch (c) {
            case '=': k = Tok::Eq; break;
            case '!': k = Tok::Not; break;
            case '&': k = Tok::And; break;
            case '|': k = Tok::Or; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            default:
                throw FormulaSyntaxError(std::string("unexpected character '") + c + "'", l, cl);
            }
            out.push_back({k, std::string(1, c), l, cl});
            advance(1);
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser
{
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw FormulaSyntaxError(msg, t.line, t.col); }

    bool is_keyword(const Token& t, const char* kw) const { return t.kind == Tok::Ident && t.text == kw; }
    // F, G, U and X are operators unless they name a variable in an atom.
    bool is_op(const Token& t, const char* kw) const { return is_keyword(t, kw) && peek(1).kind != Tok::Eq; }

    void expect(Tok k, const char* what)
    {
        if (peek().kind != k)
            fail(std::string("expected ") + what, peek());
        next();
    }

public:
    explicit Parser(std::string_view s) : toks_(lex(s)) {}

    FormulaPtr parse()
    {
        auto f = implication();
        if (peek().kind != Tok::End)
            fail("unexpected '" + peek().text + "'", peek());
        return f;
    }

    FormulaPtr implication()
    {
        auto l = disjunction();
        if (peek().kind == Tok::Arrow) {
            next();
            return fml::implies(l, implication());
        }
        return l;
    }

    FormulaPtr disjunction()
    {
        auto l = conjunction();
        while (peek().kind == Tok::Or) {
            next();
            l = fml::disj(l, conjunction());
        }
        return l;
    }

    FormulaPtr conjunction()
    {
        auto l = until();
        while (peek().kind == Tok::And) {
            next();
            l = fml::conj(l, until());
        }
        return l;
    }

    FormulaPtr until()
    {
        auto l = unary();
        if (is_keyword(peek(), "U")) {
            next();
            return fml::until(l, until());
        }
        return l;
    }

    FormulaPtr unary()
    {
        const Token& t = peek();
        if (t.kind == Tok::Not) {
            next();
            return fml::neg(unary());
        }
        if (is_op(t, "F")) {
            next();
            return fml::finally(unary());
        }
        if (is_op(t, "G")) {
            next();
            return fml::globally(unary());
        }
        if (is_op(t, "X"))
            fail("the next-step operator X is not supported", t);
        if (t.kind == Tok::LCoop) {
            next();
            std::vector<std::string> ids;
            if (peek().kind == Tok::RCoop)
                fail("empty coalition", peek());
            for (;;) {
                const Token& id = peek();
                if (id.kind != Tok::Ident && id.kind != Tok::Int)
                    fail("expected agent name or index", id);
                ids.push_back(id.text);
                next();
                if (peek().kind == Tok::Comma) {
                    next();
                    continue;
                }
                break;
            }
            expect(Tok::RCoop, "'>>'");
            return fml::coop(std::move(ids), unary());
        }
        return primary();
    }

    FormulaPtr primary()
    {
        const Token& t = peek();
        if (t.kind == Tok::LParen) {
            next();
            auto f = implication();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.kind != Tok::Ident)
            fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
        if (peek(1).kind != Tok::Eq) {
            if (t.text == "true") {
                next();
                return fml::top();
            }
            if (t.text == "false") {
                next();
                return fml::bottom();
            }
            fail("expected '=' after '" + t.text + "'", peek(1));
        }
        std::string var = next().text;
        next();
        const Token& v = peek();
        if (v.kind != Tok::Int)
            fail("expected integer value", v);
        next();
        return fml::atom(var, std::stoi(v.text));
    }
};

int prec(Op op)
{
    switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until: return 4;
    case Op::Not:
    case Op::Finally:
    case Op::Globally:
    case Op::Coop: return 5;
    default: return 6;
    }
}

void print(const FormulaPtr& f, int ctx, std::string& out)
{
    const int p = prec(f->op);
    const bool paren = p < ctx || (f->op == Op::Atom && f->atom.size() > 1 && ctx > 3);
    if (paren)
        out += '(';
    switch (f->op) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom:
        if (f->atom.empty()) {
            out += "true";
        } else {
            bool first = true;
            for (const auto& [k, v] : f->atom.entries()) {
                if (!first)
                    out += " & ";
                first = false;
                out += k + "=" + std::to_string(v);
            }
        }
        break;
    case Op::Not:
        out += '!';
        print(f->lhs, 5, out);
        break;
    case Op::Finally:
    case Op::Globally:
        out += f->op == Op::Finally ? "F " : "G ";
        print(f->lhs, 5, out);
        break;
    case Op::Coop:
        out += "<<";
        for (std::size_t i = 0; i < f->coalition.size(); ++i)
            out += (i ? "," : "") + f->coalition[i];
        out += ">>";
        print(f->lhs, 5, out);
        break;
    case Op::And:
        print(f->lhs, 3, out);
        out += " & ";
        print(f->rhs, 4, out);
        break;
    case Op::Or:
        print(f->lhs, 2, out);
        out += " | ";
        print(f->rhs, 3, out);
        break;
    case Op::Until:
        print(f->lhs, 5, out);
        out += " U ";
        print(f->rhs, 4, out);
        break;
    case Op::Implies:
        print(f->lhs, 2, out);
        out += " -> ";
        print(f->rhs, 1, out);
        break;
    }
    if (paren)
        out += ')';
}

} // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const FormulaPtr& f)
{
    std::string out;
    print(f, 0, out);
    return out;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b)
{
    if (a == b)
        return true;
    if (!a || !b || a->op != b->op || a->atom != b->atom || a->coalition != b->coalition)
        return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

} // namespace agv
