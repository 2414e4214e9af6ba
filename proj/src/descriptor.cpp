#include "ellip/descriptor.hpp"

#include "ellip/error.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ellip {

std::string Pi1Descriptor::to_string() const {
    switch (kind) {
    case Kind::Trivial: return "trivial";
    case Kind::Finite: return "finite";
    case Kind::FreeAbelian: return rank == 1 ? "Z" : fmt::format("Z^{}", rank);
    case Kind::Nilpotent: return fmt::format("nilpotent(dim {})", lie ? lie->dimension() : 0);
    case Kind::Unknown: return "unknown";
    }
    return "?";
}

namespace {

struct Value {
    enum class Kind { String, Number, Bool, List, Poly };
    Kind kind = Kind::String;
    std::string text;     // String, Poly
    Rational number;      // Number
    bool is_integer = false;
    bool flag = false;    // Bool
    std::vector<Value> items;
    int line = 0;
    int col = 0;          // of the token; for strings, of the opening quote
    int text_col = 0;     // column of the first character inside the quotes
};

struct Entry {
    std::string key;
    int line = 0;
    int col = 0;
    bool is_block = false;
    Value value;
    std::vector<Entry> block;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    [[noreturn]] void fail(const std::string& msg, int line, int col) const { throw ParseError(msg, line, col); }
    [[noreturn]] void fail_here(const std::string& msg) const { fail(msg, line_, col_); }

    void skip() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    bool at_end() {
        skip();
        return pos_ >= s_.size();
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    int line() const { return line_; }
    int col() const { return col_; }

    void expect(char c) {
        if (peek() != c) fail_here(fmt::format("expected '{}'", c));
        advance();
    }

    std::string ident() {
        skip();
        if (pos_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            fail_here("expected a key");
        std::string out;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            out += s_[pos_];
            advance();
        }
        return out;
    }

    Value value() {
        skip();
        Value v;
        v.line = line_;
        v.col = col_;
        if (pos_ >= s_.size()) fail_here("expected a value");
        char c = s_[pos_];
        if (c == '"') {
            v.kind = Value::Kind::String;
            v.text = string_body(v.text_col);
            return v;
        }
        if (c == '[') {
            advance();
            v.kind = Value::Kind::List;
            if (peek() == ']') {
                advance();
                return v;
            }
            while (true) {
                v.items.push_back(value());
                char d = peek();
                if (d == ',') {
                    advance();
                    if (peek() == ']') {
                        advance();
                        return v;
                    }
                    continue;
                }
                if (d == ']') {
                    advance();
                    return v;
                }
                fail_here("expected ',' or ']' in list");
            }
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            std::string tok;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/' ||
                                        s_[pos_] == '-' || s_[pos_] == '+')) {
                tok += s_[pos_];
                advance();
            }
            try {
                v.number = parse_rational(tok);
            } catch (const Error& e) {
                fail(fmt::format("malformed rational '{}'", tok), v.line, v.col);
            }
            v.kind = Value::Kind::Number;
            v.is_integer = tok.find('/') == std::string::npos;
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word = ident();
            if (word == "true" || word == "false") {
                v.kind = Value::Kind::Bool;
                v.flag = word == "true";
                return v;
            }
            if (word == "poly") {
                expect('(');
                skip();
                if (peek() != '"') fail_here("poly(...) takes a string");
                v.kind = Value::Kind::Poly;
                v.text = string_body(v.text_col);
                expect(')');
                return v;
            }
            fail(fmt::format("unexpected word '{}'", word), v.line, v.col);
        }
        fail_here(fmt::format("unexpected character '{}'", c));
    }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string string_body(int& text_col) {
        int l = line_, c = col_;
        advance(); // opening quote
        text_col = col_;
        std::string out;
        while (true) {
            if (pos_ >= s_.size() || s_[pos_] == '\n') fail("unterminated string", l, c);
            char ch = s_[pos_];
            if (ch == '"') {
                advance();
                return out;
            }
            if (ch == '\\') {
                advance();
                if (pos_ >= s_.size()) fail("unterminated string", l, c);
                char e = s_[pos_];
                if (e == 'n') out += '\n';
                else if (e == '"' || e == '\\') out += e;
                else fail_here(fmt::format("unknown escape '\\{}'", e));
                advance();
                continue;
            }
            out += ch;
            advance();
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

std::vector<Entry> parse_entries(Lexer& lx, bool nested) {
    std::vector<Entry> out;
    while (true) {
        if (lx.at_end()) {
            if (nested) lx.fail_here("missing '}'");
            return out;
        }
        if (nested && lx.peek() == '}') {
            lx.expect('}');
            return out;
        }
        Entry e;
        lx.skip();
        e.line = lx.line();
        e.col = lx.col();
        e.key = lx.ident();
        char c = lx.peek();
        if (c == '{') {
            lx.expect('{');
            e.is_block = true;
            e.block = parse_entries(lx, true);
        } else if (c == '=') {
            lx.expect('=');
            e.value = lx.value();
        } else {
            lx.fail_here(fmt::format("expected '=' or '{{' after '{}'", e.key));
        }
        out.push_back(std::move(e));
    }
}

[[noreturn]] void fail_at(const Value& v, const std::string& msg) { throw ParseError(msg, v.line, v.col); }
[[noreturn]] void fail_at(const Entry& e, const std::string& msg) { throw ParseError(msg, e.line, e.col); }

int as_int(const Value& v, const char* what) {
    if (v.kind != Value::Kind::Number || !v.is_integer) fail_at(v, fmt::format("{} must be an integer", what));
    const mpz_class z = v.number.get_num();
    if (!z.fits_sint_p()) fail_at(v, fmt::format("{} overflows", what));
    return static_cast<int>(z.get_si());
}

const Value& as_value(const Entry& e) {
    if (e.is_block) fail_at(e, fmt::format("'{}' expects a value, not a block", e.key));
    return e.value;
}

GradedPolynomial parse_poly_value(const Value& v, const std::shared_ptr<const GeneratorTable>& table) {
    if (v.kind == Value::Kind::String || v.kind == Value::Kind::Poly) {
        try {
            GradedPolynomial p = parse_polynomial(v.text, table);
            p.degree(); // rejects mixed degrees
            return p;
        } catch (const ParseError& e) {
            std::string msg = e.what();
            auto colon = msg.find(": ");
            throw ParseError(colon == std::string::npos ? msg : msg.substr(colon + 2), v.line,
                             v.text_col + e.column() - 1);
        } catch (const Error& e) {
            fail_at(v, e.what());
        }
    }
    if (v.kind == Value::Kind::List) {
        // [[coefficient, [e_1, ..., e_r]], ...]
        GradedPolynomial p(table);
        for (const auto& term : v.items) {
            if (term.kind != Value::Kind::List || term.items.size() != 2 || term.items[0].kind != Value::Kind::Number ||
                term.items[1].kind != Value::Kind::List)
                fail_at(term, "exponent-vector term must be [coefficient, [exponents]]");
            const auto& ex = term.items[1].items;
            if (ex.size() != table->size())
                fail_at(term.items[1], fmt::format("exponent vector has {} entries, expected {}", ex.size(), table->size()));
            Monomial m;
            for (std::size_t i = 0; i < ex.size(); ++i) {
                int e = as_int(ex[i], "exponent");
                if (e < 0) fail_at(ex[i], "negative exponent");
                if ((*table)[i].odd() && e > 1)
                    fail_at(ex[i], fmt::format("odd generator '{}' has exponent {} > 1", (*table)[i].name, e));
                m.push_back(e);
            }
            p += GradedPolynomial::monomial(table, m, term.items[0].number);
        }
        try {
            p.degree();
        } catch (const Error& e) {
            fail_at(v, e.what());
        }
        return p;
    }
    fail_at(v, "expected a polynomial string, poly(...) or an exponent-vector list");
}

Pi1Descriptor parse_pi1(const Entry& e) {
    Pi1Descriptor d;
    if (!e.is_block) {
        const Value& v = e.value;
        if (v.kind != Value::Kind::String) fail_at(v, "pi1 must be a string or a lie block");
        const std::string& s = v.text;
        if (s == "trivial") d.kind = Pi1Descriptor::Kind::Trivial;
        else if (s == "finite") d.kind = Pi1Descriptor::Kind::Finite;
        else if (s == "unknown") d.kind = Pi1Descriptor::Kind::Unknown;
        else if (s == "Z") {
            d.kind = Pi1Descriptor::Kind::FreeAbelian;
            d.rank = 1;
        } else if (s.rfind("Z^", 0) == 0 && s.size() > 2 &&
                   s.find_first_not_of("0123456789", 2) == std::string::npos && s.size() < 6) {
            d.kind = Pi1Descriptor::Kind::FreeAbelian;
            d.rank = std::stoi(s.substr(2));
            if (d.rank < 1) fail_at(v, "Z^k needs k >= 1");
        } else {
            fail_at(v, fmt::format("unknown pi1 symbol '{}'", s));
        }
        return d;
    }
    std::optional<int> dim;
    std::vector<BracketTerm> terms;
    std::set<std::string> seen;
    for (const auto& sub : e.block) {
        if (!seen.insert(sub.key).second) fail_at(sub, fmt::format("duplicate key '{}'", sub.key));
        if (sub.key == "dim") {
            dim = as_int(as_value(sub), "dim");
            if (*dim < 1 || *dim > 12) fail_at(sub.value, "dim must be between 1 and 12");
        } else if (sub.key == "brackets") {
            const Value& v = as_value(sub);
            if (v.kind != Value::Kind::List) fail_at(v, "brackets must be a list of [i, j, k, c]");
            for (const auto& t : v.items) {
                if (t.kind != Value::Kind::List || t.items.size() != 4)
                    fail_at(t, "bracket term must be [i, j, k, c]");
                BracketTerm b{as_int(t.items[0], "index"), as_int(t.items[1], "index"), as_int(t.items[2], "index"),
                              Rational(0)};
                if (t.items[3].kind != Value::Kind::Number) fail_at(t.items[3], "coefficient must be a number");
                b.c = t.items[3].number;
                terms.push_back(b);
            }
        } else {
            fail_at(sub, fmt::format("unknown key '{}' in pi1", sub.key));
        }
    }
    if (!dim) fail_at(e, "pi1 block needs dim");
    try {
        d.lie = NilLieAlgebra::from_brackets(*dim, terms);
    } catch (const Error& ex) {
        fail_at(e, ex.what());
    }
    d.kind = Pi1Descriptor::Kind::Nilpotent;
    return d;
}

} // namespace

ManifoldDescriptor parse_descriptor(std::string_view text) {
    Lexer lx(text);
    std::vector<Entry> entries = parse_entries(lx, false);

    std::set<std::string> seen;
    const Entry* gens = nullptr;
    const Entry* rels = nullptr;
    const Entry* fund = nullptr;
    const Entry* pi1 = nullptr;
    const Entry* n_entry = nullptr;
    ManifoldDescriptor d;
    bool truncate = true;
    for (const auto& e : entries) {
        if (!seen.insert(e.key).second) fail_at(e, fmt::format("duplicate key '{}'", e.key));
        if (e.key == "name") {
            const Value& v = as_value(e);
            if (v.kind != Value::Kind::String) fail_at(v, "name must be a string");
            d.name = v.text;
        } else if (e.key == "n") {
            n_entry = &e;
            d.n = as_int(as_value(e), "n");
            if (d.n < 1 || d.n > 24) fail_at(e.value, "n must be between 1 and 24");
        } else if (e.key == "generators") {
            if (!e.is_block) fail_at(e, "generators must be a block");
            gens = &e;
        } else if (e.key == "relations") {
            const Value& v = as_value(e);
            if (v.kind != Value::Kind::List) fail_at(v, "relations must be a list");
            rels = &e;
        } else if (e.key == "fundamental") {
            as_value(e);
            fund = &e;
        } else if (e.key == "truncate") {
            const Value& v = as_value(e);
            if (v.kind != Value::Kind::Bool) fail_at(v, "truncate must be true or false");
            truncate = v.flag;
        } else if (e.key == "pi1") {
            pi1 = &e;
        } else if (e.key == "betti") {
            if (!e.is_block) fail_at(e, "betti must be a block with plus and minus");
            std::optional<int> plus, minus;
            for (const auto& sub : e.block) {
                if (sub.key == "plus") plus = as_int(as_value(sub), "plus");
                else if (sub.key == "minus") minus = as_int(as_value(sub), "minus");
                else fail_at(sub, fmt::format("unknown key '{}' in betti", sub.key));
                if (as_int(sub.value, sub.key.c_str()) < 0) fail_at(sub.value, "Betti numbers must be non-negative");
            }
            if (!plus || !minus) fail_at(e, "betti needs both plus and minus");
            d.betti = std::make_pair(*plus, *minus);
        } else if (e.key == "cup_form_degree") {
            d.cup_form_degree = as_int(as_value(e), "cup_form_degree");
            if (*d.cup_form_degree < 1) fail_at(e.value, "cup_form_degree must be positive");
        } else if (e.key == "notes") {
            const Value& v = as_value(e);
            if (v.kind != Value::Kind::String) fail_at(v, "notes must be a string");
            d.notes = v.text;
        } else {
            fail_at(e, fmt::format("unknown key '{}'", e.key));
        }
    }
    if (!n_entry) throw ParseError("missing key 'n'", lx.line(), lx.col());
    if (!gens) throw ParseError("missing block 'generators'", lx.line(), lx.col());
    if (!pi1) throw ParseError("missing key 'pi1'", lx.line(), lx.col());
    if (d.name.empty()) d.name = "unnamed";

    GeneratorTable table;
    std::set<std::string> names;
    for (const auto& g : gens->block) {
        int deg = as_int(as_value(g), "generator degree");
        if (deg < 1) fail_at(g.value, fmt::format("generator '{}' must have positive degree", g.key));
        if (deg > d.n) fail_at(g.value, fmt::format("degree overflow: generator '{}' has degree {} > n = {}", g.key, deg, d.n));
        if (!names.insert(g.key).second) fail_at(g, fmt::format("duplicate generator '{}'", g.key));
        table.push_back({g.key, deg});
    }
    if (table.empty()) fail_at(*gens, "at least one generator is required");
    if (table.size() > 30) fail_at(*gens, "at most 30 generators are supported");

    AlgebraPresentation& a = d.cohomology;
    a.generators = std::make_shared<const GeneratorTable>(std::move(table));
    a.n = d.n;
    a.truncate_above_n = truncate;
    if (rels)
        for (const auto& v : rels->value.items) {
            GradedPolynomial p = parse_poly_value(v, a.generators);
            if (p.is_zero()) continue;
            if (truncate && p.degree() > d.n)
                fail_at(v, fmt::format("degree overflow: relation of degree {} > n = {} is implied by truncation", p.degree(), d.n));
            a.relations.push_back(std::move(p));
        }
    if (fund) {
        GradedPolynomial p = parse_poly_value(fund->value, a.generators);
        if (p.is_zero() || p.degree() != d.n)
            fail_at(fund->value, fmt::format("fundamental class must be nonzero of degree n = {}", d.n));
        a.fundamental_class = std::move(p);
    }
    d.pi1 = parse_pi1(*pi1);
    if (d.pi1.lie && d.pi1.lie->dimension() > d.n)
        fail_at(*pi1, fmt::format("pi1 Lie algebra dimension {} exceeds n = {}", d.pi1.lie->dimension(), d.n));
    return d;
}

ManifoldDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_descriptor(ss.str());
}

std::string format_presentation(const AlgebraPresentation& a) {
    std::string out = "generators {";
    for (const auto& g : *a.generators) out += fmt::format(" {} = {}", g.name, g.degree);
    out += " }\nrelations = [\n";
    for (std::size_t i = 0; i < a.relations.size(); ++i)
        out += fmt::format("  \"{}\"{}\n", a.relations[i].to_string(), i + 1 < a.relations.size() ? "," : "");
    out += "]\n";
    if (a.fundamental_class) out += fmt::format("fundamental = \"{}\"\n", a.fundamental_class->to_string());
    return out;
}

} // namespace ellip
