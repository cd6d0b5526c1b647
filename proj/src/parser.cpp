#include "mildstokes/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

namespace mildstokes {

namespace {

enum class Tok { Number, Ident, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    cx value{0.0};
    bool imag = false;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;
    std::vector<Token> out;

    explicit Lexer(const std::string& s) : src(s) {}

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    }

    void run() {
        while (pos < src.size()) {
            char u = src[pos];
            if (u == '#') {
                while (pos < src.size() && src[pos] != '\n') advance();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(u))) {
                advance();
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if (std::isdigit(static_cast<unsigned char>(u)) ||
                (u == '.' && pos + 1 < src.size() &&
                 std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
                size_t start = pos;
                while (pos < src.size() &&
                       (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
                    advance();
                if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
                    size_t mark = pos;
                    advance();
                    if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) advance();
                    if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                        while (pos < src.size() &&
                               std::isdigit(static_cast<unsigned char>(src[pos])))
                            advance();
                    } else {
                        // not an exponent after all
                        while (pos > mark) {
                            --pos;
                            --col;
                        }
                    }
                }
                t.kind = Tok::Number;
                t.text = src.substr(start, pos - start);
                double v = std::strtod(t.text.c_str(), nullptr);
                if (pos < src.size() && src[pos] == 'i') {
                    t.imag = true;
                    t.value = cx(0.0, v);
                    advance();
                } else {
                    t.value = cx(v, 0.0);
                }
                out.push_back(t);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(u)) || u == '_') {
                size_t start = pos;
                while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                            src[pos] == '_'))
                    advance();
                t.kind = Tok::Ident;
                t.text = src.substr(start, pos - start);
                out.push_back(t);
                continue;
            }
            if (std::strchr("+-*/^()[],=", u)) {
                t.kind = Tok::Punct;
                t.text = std::string(1, u);
                advance();
                out.push_back(t);
                continue;
            }
            throw ParseError(t.line, t.col, "a token", std::string(1, u));
        }
        Token end;
        end.kind = Tok::End;
        end.text = "<end>";
        end.line = line;
        end.col = col;
        out.push_back(end);
    }
};

struct Cursor {
    const std::vector<Token>& toks;
    size_t i = 0;
    int order;

    const Token& peek() const { return toks[i]; }
    const Token& get() { return toks[std::min(i++, toks.size() - 1)]; }
    bool accept_punct(const char* p) {
        if (peek().kind == Tok::Punct && peek().text == p) {
            ++i;
            return true;
        }
        return false;
    }
    void expect_punct(const char* p) {
        if (!accept_punct(p)) throw ParseError(peek().line, peek().col, std::string("'") + p + "'", peek().text);
    }
};

PuiseuxSeries parse_expr(Cursor& c);

// rational detection for exponents of '^'
bool as_rational(double x, long& p, long& q) {
    for (long den = 1; den <= kMaxRamification; ++den) {
        double num = x * den;
        if (std::abs(num - std::round(num)) < 1e-9) {
            p = static_cast<long>(std::round(num));
            q = den;
            long g = std::gcd(std::labs(p), den);
            p /= g;
            q /= g;
            return true;
        }
    }
    return false;
}

PuiseuxSeries series_ipow(const PuiseuxSeries& base, long e, const Token& at) {
    if (e == 0) return ps_const(1.0, base.ram, base.high);
    PuiseuxSeries b = base;
    if (e < 0) {
        try {
            b = invert(b);
        } catch (const ZeroLeadingTerm&) {
            throw ParseError(at.line, at.col, "an invertible expression", "zero series");
        }
        e = -e;
    }
    PuiseuxSeries r = b;
    for (long k = 1; k < e; ++k) r = r * b;
    return r;
}

PuiseuxSeries parse_atom(Cursor& c) {
    const Token& t = c.peek();
    if (t.kind == Tok::Number) {
        c.get();
        return ps_const(t.value, 1, c.order);
    }
    if (t.kind == Tok::Ident) {
        if (t.text == "t") {
            c.get();
            return ps_monomial(1.0, 1, 1, c.order);
        }
        if (t.text == "s") {
            c.get();
            return ps_monomial(1.0, -1, 1, c.order);
        }
        if (t.text == "u") {
            c.get();
            throw ExpansionError("u = exp(2*pi*i*s) has an essential singularity at t = 0");
        }
        if (t.text == "i") {
            throw ParseError(t.line, t.col, "the imaginary unit as a literal suffix (write 1i)",
                             t.text);
        }
        if (t.text == "pi") {
            c.get();
            return ps_const(3.14159265358979323846, 1, c.order);
        }
        if (t.text == "log" || t.text == "exp" || t.text == "sqrt") {
            std::string fn = c.get().text;
            c.expect_punct("(");
            PuiseuxSeries arg = parse_expr(c);
            c.expect_punct(")");
            try {
                if (fn == "log") return log_series(arg);
                if (fn == "exp") return exp_series(arg);
                // sqrt: monomial or unit series
                PuiseuxSeries half = ps_const(0.5, 1, c.order);
                (void)half;
                int v = arg.valuation();
                if (v == 0) return exp_series(cx(0.5) * log_series(arg));
                throw ExpansionError("sqrt of a non-unit series");
            } catch (const ZeroLeadingTerm&) {
                throw ParseError(t.line, t.col, "a series with nonzero leading term",
                                 "singular argument of " + fn);
            }
        }
        throw ParseError(t.line, t.col, "a variable, constant, or function", t.text);
    }
    if (t.kind == Tok::Punct && t.text == "(") {
        c.get();
        PuiseuxSeries r = parse_expr(c);
        c.expect_punct(")");
        return r;
    }
    if (t.kind == Tok::Punct && t.text == "-") {
        c.get();
        return -parse_atom(c);
    }
    if (t.kind == Tok::Punct && t.text == "+") {
        c.get();
        return parse_atom(c);
    }
    throw ParseError(t.line, t.col, "an expression", t.text);
}

PuiseuxSeries parse_power(Cursor& c) {
    const Token at = c.peek();
    PuiseuxSeries base = parse_atom(c);
    if (!c.accept_punct("^")) return base;
    // right associative
    const Token et = c.peek();
    PuiseuxSeries ex = parse_power(c);
    if (!ex.is_zero() && ex.valuation() != 0)
        throw ParseError(et.line, et.col, "a constant exponent", "a series");
    cx ev = ex.at(0);
    if (std::abs(ev.imag()) > 1e-12)
        throw ParseError(et.line, et.col, "a real exponent", "a complex value");
    long p = 0, q = 1;
    if (!as_rational(ev.real(), p, q))
        throw ParseError(et.line, et.col, "a rational exponent with denominator <= 12",
                         et.text);
    if (q == 1) return series_ipow(base, p, at);
    // fractional power: base must be a monomial
    int v = base.valuation();
    bool monomial = true;
    for (int k = v + 1; k <= base.high; ++k)
        if (std::abs(base.at(k)) > kCoeffTol * (1.0 + base.max_abs())) monomial = false;
    if (!monomial || v > base.high)
        throw ParseError(at.line, at.col, "a monomial base under a fractional power", at.text);
    int m2 = static_cast<int>(std::lcm(static_cast<long>(base.ram) * q, static_cast<long>(base.ram)));
    if (m2 > kMaxRamification) throw RamificationCapExceeded(m2);
    long knum = static_cast<long>(v) * p;
    long kden = static_cast<long>(base.ram) * q;
    // exponent of the result is v*p / (ram*q) on the m2 grid
    if ((knum * m2) % kden != 0)
        throw RamificationCapExceeded(static_cast<int>(kden));
    int knew = static_cast<int>(knum * m2 / kden);
    cx coef = std::pow(base.at(v), cx(static_cast<double>(p) / q));
    return ps_monomial(coef, knew, m2, std::max(c.order * m2 / base.ram, knew));
}

PuiseuxSeries parse_term(Cursor& c) {
    PuiseuxSeries r = parse_power(c);
    for (;;) {
        if (c.accept_punct("*")) {
            r = r * parse_power(c);
        } else if (c.peek().kind == Tok::Punct && c.peek().text == "/") {
            const Token dt = c.get();
            PuiseuxSeries d = parse_power(c);
            try {
                r = r * invert(d);
            } catch (const ZeroLeadingTerm&) {
                throw ParseError(dt.line, dt.col, "a nonzero divisor", "zero series");
            }
        } else {
            break;
        }
    }
    return r;
}

PuiseuxSeries parse_expr(Cursor& c) {
    PuiseuxSeries r = parse_term(c);
    for (;;) {
        if (c.accept_punct("+")) {
            r = r + parse_term(c);
        } else if (c.peek().kind == Tok::Punct && c.peek().text == "-") {
            c.get();
            r = r - parse_term(c);
        } else {
            break;
        }
    }
    return r;
}

std::vector<std::vector<PuiseuxSeries>> parse_matrix(Cursor& c) {
    std::vector<std::vector<PuiseuxSeries>> rows;
    c.expect_punct("[");
    for (;;) {
        c.expect_punct("[");
        std::vector<PuiseuxSeries> row;
        if (!c.accept_punct("]")) {
            row.push_back(parse_expr(c));
            while (c.accept_punct(",")) row.push_back(parse_expr(c));
            c.expect_punct("]");
        }
        rows.push_back(std::move(row));
        if (!c.accept_punct(",")) break;
    }
    c.expect_punct("]");
    if (rows.empty()) throw ParseError(c.peek().line, c.peek().col, "matrix rows", c.peek().text);
    size_t w = rows[0].size();
    bool square = rows.size() == w;
    for (const auto& r : rows)
        if (r.size() != w) square = false;
    if (!square)
        throw ParseError(c.peek().line, c.peek().col, "a square matrix", "ragged rows");
    return rows;
}

Exponent exponent_from_series(const PuiseuxSeries& f, const Token& at) {
    double fl = kCoeffTol * (1.0 + f.max_abs());
    int m = f.ram;
    for (int k = f.low; k <= f.high; ++k) {
        if (std::abs(f.at(k)) <= fl) continue;
        if (k >= 0 || k < -m) throw NonMildExponent();
        (void)at;
    }
    Exponent a(m);
    for (int l = 1; l <= m; ++l)
        if (-l >= f.low) a.c[static_cast<size_t>(l - 1)] = f.at(-l);
    return reduce_ramification(a);
}

Eigen::MatrixXcd constant_matrix(const std::vector<std::vector<PuiseuxSeries>>& rows,
                                 const Token& at) {
    int n = static_cast<int>(rows.size());
    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const PuiseuxSeries& f = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (int k = f.low; k <= f.high; ++k)
                if (k != 0 && std::abs(f.at(k)) > kCoeffTol * (1.0 + f.max_abs()))
                    throw ParseError(at.line, at.col, "a constant matrix", "series entry");
            G(i, j) = f.at(0);
        }
    return G;
}

FormalDatum parse_formal_body(Cursor& c) {
    FormalDatum fd;
    c.expect_punct("[");
    int m = 1;
    std::vector<std::pair<Exponent, Eigen::MatrixXcd>> items;
    if (!c.accept_punct("]")) {
        for (;;) {
            const Token at = c.peek();
            c.expect_punct("(");
            PuiseuxSeries es = parse_expr(c);
            Exponent a = exponent_from_series(es, at);
            c.expect_punct(",");
            Eigen::MatrixXcd G = constant_matrix(parse_matrix(c), at);
            c.expect_punct(")");
            m = std::lcm(m, a.ram);
            if (m > kMaxRamification) throw RamificationCapExceeded(m);
            items.emplace_back(canonicalize(a).first, G);
            if (!c.accept_punct(",")) break;
        }
        c.expect_punct("]");
    }
    fd.ram = m;
    for (auto& [a, G] : items) fd.blocks.push_back(FormalBlock{with_ramification(a, m), G});
    return fd;
}

}  // namespace

SystemFile parse_system(const std::string& text, int order) {
    Lexer lex(text);
    lex.run();
    Cursor c{lex.out, 0, order};

    SystemFile sf;
    std::vector<std::vector<PuiseuxSeries>> entries;
    bool have_matrix = false;

    while (c.peek().kind != Tok::End) {
        const Token& t = c.peek();
        if (t.kind != Tok::Ident)
            throw ParseError(t.line, t.col, "a statement (rank/var/ram/A/formal/param)", t.text);
        std::string kw = c.get().text;
        if (kw == "rank") {
            const Token& n = c.get();
            if (n.kind != Tok::Number || n.imag)
                throw ParseError(n.line, n.col, "an integer rank", n.text);
            sf.rank = static_cast<int>(std::lround(n.value.real()));
        } else if (kw == "var") {
            const Token& v = c.get();
            if (v.kind != Tok::Ident || (v.text != "t" && v.text != "s"))
                throw ParseError(v.line, v.col, "t or s", v.text);
            sf.var = v.text[0];
        } else if (kw == "ram") {
            const Token& n = c.get();
            if (n.kind != Tok::Number || n.imag)
                throw ParseError(n.line, n.col, "an integer ramification", n.text);
            sf.ram = static_cast<int>(std::lround(n.value.real()));
            if (sf.ram < 1 || sf.ram > kMaxRamification) throw RamificationCapExceeded(sf.ram);
        } else if (kw == "A") {
            c.expect_punct("=");
            entries = parse_matrix(c);
            have_matrix = true;
        } else if (kw == "formal") {
            c.expect_punct("=");
            sf.formal = parse_formal_body(c);
        } else if (kw == "param") {
            const Token& name = c.get();
            if (name.kind != Tok::Ident)
                throw ParseError(name.line, name.col, "a parameter name", name.text);
            bool neg = c.accept_punct("-");
            const Token& val = c.get();
            if (val.kind != Tok::Number)
                throw ParseError(val.line, val.col, "a numeric value", val.text);
            sf.params[name.text] = (neg ? -1.0 : 1.0) * val.value.real();
        } else {
            throw ParseError(t.line, t.col, "a statement (rank/var/ram/A/formal/param)", kw);
        }
    }
    if (!have_matrix) throw ParseError(1, 1, "a matrix statement 'A = [[...]]'", "<end>");
    if (sf.rank == 0) sf.rank = static_cast<int>(entries.size());
    if (sf.rank != static_cast<int>(entries.size()))
        throw ParseError(1, 1, "rank matching the matrix size",
                         std::to_string(entries.size()) + " rows");
    sf.system = DiffSystem(from_entries(entries));
    if (sf.system.A.ram > 1) sf.ram = std::lcm(sf.ram, sf.system.A.ram);
    return sf;
}

std::string print_system(const SystemFile& sf) {
    std::ostringstream os;
    os.precision(17);
    os << "rank " << sf.system.rank() << "\n";
    if (sf.ram > 1) os << "ram " << sf.ram << "\n";
    os << "A = [";
    for (int i = 0; i < sf.system.rank(); ++i) {
        os << "[";
        for (int j = 0; j < sf.system.rank(); ++j) {
            os << to_string(sf.system.A.entry(i, j));
            if (j + 1 < sf.system.rank()) os << ", ";
        }
        os << "]";
        if (i + 1 < sf.system.rank()) os << ",\n     ";
    }
    os << "]\n";
    if (sf.formal) os << "formal = " << print_formal(*sf.formal) << "\n";
    for (const auto& [k, v] : sf.params) os << "param " << k << " " << v << "\n";
    return os.str();
}

Exponent parse_exponent(const std::string& text) {
    Lexer lex(text);
    lex.run();
    Cursor c{lex.out, 0, 4 * kMaxRamification};
    const Token at = c.peek();
    PuiseuxSeries f = parse_expr(c);
    if (c.peek().kind != Tok::End)
        throw ParseError(c.peek().line, c.peek().col, "end of exponent", c.peek().text);
    return exponent_from_series(f, at);
}

FormalDatum parse_formal(const std::string& text, int ram_hint) {
    Lexer lex(text);
    lex.run();
    Cursor c{lex.out, 0, 4 * kMaxRamification};
    FormalDatum fd = parse_formal_body(c);
    if (c.peek().kind != Tok::End)
        throw ParseError(c.peek().line, c.peek().col, "end of formal datum", c.peek().text);
    if (ram_hint > fd.ram) {
        for (auto& b : fd.blocks) b.a = with_ramification(b.a, ram_hint);
        fd.ram = ram_hint;
    }
    return fd;
}

std::string print_exponent(const Exponent& a) { return to_string(a); }

std::string print_formal(const FormalDatum& fd) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (size_t b = 0; b < fd.blocks.size(); ++b) {
        const auto& blk = fd.blocks[b];
        os << "(" << to_string(blk.a) << ", [";
        for (int i = 0; i < blk.rank(); ++i) {
            os << "[";
            for (int j = 0; j < blk.rank(); ++j) {
                cx v = blk.G(i, j);
                if (v.imag() == 0.0)
                    os << v.real();
                else
                    os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i)";
                if (j + 1 < blk.rank()) os << ",";
            }
            os << "]";
            if (i + 1 < blk.rank()) os << ",";
        }
        os << "])";
        if (b + 1 < fd.blocks.size()) os << ", ";
    }
    os << "]";
    return os.str();
}

bool structurally_equal(const SystemFile& a, const SystemFile& b, double tol) {
    if (a.system.rank() != b.system.rank()) return false;
    if (!approx_equal(a.system.A, b.system.A, tol)) return false;
    if (a.formal.has_value() != b.formal.has_value()) return false;
    if (a.formal) {
        if (a.formal->blocks.size() != b.formal->blocks.size()) return false;
        for (size_t i = 0; i < a.formal->blocks.size(); ++i) {
            if (!orbit_equal(a.formal->blocks[i].a, b.formal->blocks[i].a, tol)) return false;
            if (a.formal->blocks[i].rank() != b.formal->blocks[i].rank()) return false;
            if ((a.formal->blocks[i].G - b.formal->blocks[i].G).cwiseAbs().maxCoeff() > tol)
                return false;
        }
    }
    if (a.params.size() != b.params.size()) return false;
    for (const auto& [k, v] : a.params) {
        auto it = b.params.find(k);
        if (it == b.params.end() || std::abs(it->second - v) > tol * (1.0 + std::abs(v)))
            return false;
    }
    return true;
}

}  // namespace mildstokes
