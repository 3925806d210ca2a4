#include "lsym/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "kernel.hpp"

namespace lsym {

namespace {

enum class Tok { Ident, Int, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Eq, Semi, End };

struct Token {
    Tok kind;
    std::string text;
    int primes = 0;     // Ident only
    std::size_t pos = 0;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Eq: return "'='";
        case Tok::Semi: return "';'";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto clamp = [&](std::size_t p) { return s.empty() ? 0 : std::min(p, s.size() - 1); };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                name += s[i++];
            int primes = 0;
            while (i < s.size() && s[i] == '\'') {
                ++primes;
                ++i;
            }
            out.push_back(Token{Tok::Ident, name, primes, start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                digits += s[i++];
            out.push_back(Token{Tok::Int, digits, 0, start});
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            case '=': k = Tok::Eq; break;
            case ';': k = Tok::Semi; break;
            default:
                throw SyntaxError(clamp(start), "token",
                                  std::string("unexpected character '") + c + "'");
        }
        out.push_back(Token{k, std::string(1, c), 0, start});
        ++i;
    }
    out.push_back(Token{Tok::End, "", 0, s.empty() ? 0 : s.size() - 1});
    return out;
}

class Parser {
public:
    Parser(const std::string& text, const ParseContext& ctx) : ctx_(ctx), toks_(lex(text)) {}

    Expr parse_full() {
        Expr e = expression(0);
        expect(Tok::End);
        return e;
    }

    Expr expression(int min_bp) {
        Expr lhs = prefix();
        for (;;) {
            Tok k = peek().kind;
            int bp;
            switch (k) {
                case Tok::Plus:
                case Tok::Minus: bp = 1; break;
                case Tok::Star:
                case Tok::Slash: bp = 2; break;
                case Tok::Caret: bp = 4; break;
                default: return lhs;
            }
            if (bp < min_bp) return lhs;
            Token op = next();
            switch (k) {
                case Tok::Plus: lhs = lhs + expression(bp + 1); break;
                case Tok::Minus: lhs = lhs - expression(bp + 1); break;
                case Tok::Star: lhs = lhs * expression(bp + 1); break;
                case Tok::Slash: {
                    Expr rhs = expression(bp + 1);
                    try {
                        lhs = lhs / rhs;
                    } catch (const Error& e) {
                        if (e.code() == ErrorCode::ZeroDenominator)
                            throw Error(ErrorCode::ZeroDenominator,
                                        "division by zero at offset " + std::to_string(op.pos));
                        throw;
                    }
                    break;
                }
                case Tok::Caret: lhs = Expr::pow(lhs, expression(bp));  // right-assoc
                    break;
                default: return lhs;
            }
        }
    }

    const Token& peek() const { return toks_[i_]; }

    std::size_t stopped_at() const { return i_; }

private:
    Token next() { return toks_[i_++]; }

    void expect(Tok k) {
        if (peek().kind != k)
            throw SyntaxError(peek().pos, tok_name(k),
                              std::string("expected ") + tok_name(k) + ", found " +
                                  tok_name(peek().kind));
        next();
    }

    Expr prefix() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Minus:
                next();
                return -expression(3 + 1);
            case Tok::Int: {
                next();
                return Expr::rational(mpq_class(t.text));
            }
            case Tok::LParen: {
                next();
                Expr e = expression(0);
                expect(Tok::RParen);
                return e;
            }
            case Tok::Ident: return identifier();
            default:
                throw SyntaxError(t.pos, "integer, identifier, '(' or '-'",
                                  std::string("expected an expression, found ") +
                                      tok_name(t.kind));
        }
    }

    Expr identifier() {
        Token t = next();
        bool builtin = (t.text == "exp" || t.text == "log" || t.text == "Int");
        if (builtin) {
            if (t.primes > 0)
                throw SyntaxError(t.pos, "'('", "built-in " + t.text + " cannot carry primes");
            expect(Tok::LParen);
            Expr arg = expression(0);
            expect(Tok::RParen);
            if (t.text == "exp") return Expr::exp(arg);
            if (t.text == "log") return Expr::log(arg);
            return Expr::antiderivative(arg);
        }
        if (peek().kind == Tok::LParen) {
            // arbitrary function application: f(t), q''(t)
            next();
            const Token& a = peek();
            if (a.kind != Tok::Ident || a.text != "t" || a.primes != 0)
                throw SyntaxError(a.pos, "'t'",
                                  "arbitrary functions take the independent variable t");
            next();
            expect(Tok::RParen);
            return Expr::symbol(Symbol::function(t.text, t.primes));
        }
        if (t.text == "t") {
            if (t.primes > 0)
                throw SyntaxError(t.pos, "identifier",
                                  "the independent variable cannot carry primes");
            return Expr::symbol(Symbol::independent("t"));
        }
        if (ctx_.dependents.count(t.text)) {
            Symbol dep = Symbol::dependent(t.text);
            return Expr::symbol(t.primes ? Symbol::deriv(dep, t.primes) : dep);
        }
        // a primed identifier outside the dependents is a derivative of an
        // arbitrary function: q'' means q''(t)
        if (t.primes > 0) return Expr::symbol(Symbol::function(t.text, t.primes));
        return Expr::symbol(Symbol::parameter(t.text));
    }

    const ParseContext& ctx_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const ParseContext& ctx) {
    Parser p(text, ctx);
    return p.parse_full();
}

SecondOrderODE parse_ode(const std::string& text) {
    auto toks = lex(text);
    if (toks.size() < 2 || toks[0].kind != Tok::Ident)
        throw SyntaxError(0, "identifier", "an ODE starts with y'' = ...");
    if (toks[0].primes != 2)
        throw SyntaxError(toks[0].pos, "second-derivative left-hand side",
                          "the left-hand side must be a second derivative like y''");
    if (toks[1].kind != Tok::Eq)
        throw SyntaxError(toks[1].pos, "'='", "expected '=' after the left-hand side");
    std::size_t eq = text.find('=');
    ParseContext ctx;
    ctx.dependents = {toks[0].text};
    Expr phi = parse_expr(text.substr(eq + 1), ctx);
    Symbol dep = Symbol::dependent(toks[0].text);
    for (Symbol s : phi.symbols())
        if (s.kind() == SymbolKind::DerivCoord && s.order() >= 2)
            throw Error(ErrorCode::HigherDerivativeOnRHS,
                        "right-hand side contains " + s.display());
    return SecondOrderODE(dep, phi);
}

FirstOrderSystem parse_system(const std::string& text) {
    // split on ';', first pass collects the declared variables
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        std::size_t semi = text.find(';', start);
        parts.push_back(text.substr(start, semi == std::string::npos ? semi : semi - start));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    ParseContext ctx;
    ctx.dependents.clear();
    std::vector<std::string> names;
    for (const auto& part : parts) {
        auto toks = lex(part);
        if (toks.size() < 2 || toks[0].kind != Tok::Ident || toks[0].primes != 1 ||
            toks[1].kind != Tok::Eq)
            throw SyntaxError(toks.empty() ? 0 : toks[0].pos, "w' = ...",
                              "each system equation has the form w' = <expr>");
        names.push_back(toks[0].text);
        ctx.dependents.insert(toks[0].text);
    }
    std::vector<Symbol> vars;
    std::vector<Expr> rhs;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        std::size_t eq = parts[i].find('=');
        Expr w = parse_expr(parts[i].substr(eq + 1), ctx);
        vars.push_back(Symbol::dependent(names[i]));
        rhs.push_back(w);
    }
    return FirstOrderSystem(std::move(vars), std::move(rhs));
}

}  // namespace lsym
