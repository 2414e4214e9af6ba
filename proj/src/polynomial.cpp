#include "ellip/polynomial.hpp"

#include "ellip/error.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace ellip {

int monomial_degree(const Monomial& m, const GeneratorTable& table) {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        d += m[i] * table[i].degree;
    return d;
}

int monomial_product_sign(const Monomial& m1, const Monomial& m2, const GeneratorTable& table) {
    int swaps = 0;
    int odd_above = 0; // odd factors of m1 with index > j, scanning j downwards
    for (std::size_t jj = table.size(); jj-- > 0;) {
        if (table[jj].odd()) {
            if (m1[jj] + m2[jj] > 1)
                return 0;
            if (m2[jj] == 1)
                swaps += odd_above;
            odd_above += m1[jj];
        }
    }
    return (swaps & 1) ? -1 : 1;
}

std::vector<Monomial> monomials_of_degree(int k, const GeneratorTable& table) {
    std::vector<Monomial> out;
    if (k < 0)
        return out;
    Monomial cur(table.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (i == table.size()) {
            if (remaining == 0)
                out.push_back(cur);
            return;
        }
        const int d = table[i].degree;
        const int max_e = table[i].odd() ? 1 : remaining / d;
        for (int e = 0; e <= max_e && e * d <= remaining; ++e) {
            cur[i] = e;
            rec(i + 1, remaining - e * d);
        }
        cur[i] = 0;
    };
    rec(0, k);
    return out;
}

GradedPolynomial::GradedPolynomial(std::shared_ptr<const GeneratorTable> table) : table_(std::move(table)) {
    if (!table_)
        throw InvalidArgument("polynomial requires a generator table");
}

GradedPolynomial GradedPolynomial::constant(std::shared_ptr<const GeneratorTable> table, const Rational& c) {
    GradedPolynomial p(std::move(table));
    p.add_term(Monomial(p.table().size(), 0), c);
    return p;
}

GradedPolynomial GradedPolynomial::generator(std::shared_ptr<const GeneratorTable> table, std::size_t index) {
    GradedPolynomial p(std::move(table));
    if (index >= p.table().size())
        throw InvalidArgument("generator index out of range");
    Monomial m(p.table().size(), 0);
    m[index] = 1;
    p.add_term(m, 1);
    return p;
}

GradedPolynomial GradedPolynomial::monomial(std::shared_ptr<const GeneratorTable> table, Monomial m,
                                            const Rational& c) {
    GradedPolynomial p(std::move(table));
    p.add_term(m, c);
    return p;
}

int GradedPolynomial::degree() const {
    if (terms_.empty())
        return -1;
    const int d = monomial_degree(terms_.begin()->first, *table_);
    for (const auto& [m, c] : terms_)
        if (monomial_degree(m, *table_) != d)
            throw InvalidArgument("polynomial '" + to_string() + "' is not homogeneous");
    return d;
}

bool GradedPolynomial::is_homogeneous() const {
    if (terms_.empty())
        return true;
    const int d = monomial_degree(terms_.begin()->first, *table_);
    for (const auto& [m, c] : terms_)
        if (monomial_degree(m, *table_) != d)
            return false;
    return true;
}

void GradedPolynomial::add_term(const Monomial& m, const Rational& c) {
    if (m.size() != table_->size())
        throw DimensionMismatch("monomial length differs from generator count");
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0)
            throw InvalidArgument("negative exponent");
        if ((*table_)[i].odd() && m[i] > 1)
            return; // odd generators square to zero
    }
    if (ellip::is_zero(c))
        return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (ellip::is_zero(it->second))
            terms_.erase(it);
    }
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& other) {
    if (!table_)
        table_ = other.table_;
    for (const auto& [m, c] : other.terms_)
        add_term(m, c);
    return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& other) {
    if (!table_)
        table_ = other.table_;
    for (const auto& [m, c] : other.terms_)
        add_term(m, -c);
    return *this;
}

GradedPolynomial& GradedPolynomial::operator*=(const Rational& s) {
    if (ellip::is_zero(s)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_)
        c *= s;
    return *this;
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
    GradedPolynomial out(a.table_ ? a.table_ : b.table_);
    const auto& table = out.table();
    Monomial prod(table.size());
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            const int s = monomial_product_sign(ma, mb, table);
            if (s == 0)
                continue;
            for (std::size_t i = 0; i < prod.size(); ++i)
                prod[i] = ma[i] + mb[i];
            Rational c = ca * cb;
            if (s < 0)
                c = -c;
            out.add_term(prod, c);
        }
    return out;
}

std::string GradedPolynomial::to_string() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // Highest monomials first reads more naturally.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        const Rational mag = abs(c);
        if (first)
            os << (sgn(c) < 0 ? "-" : "");
        else
            os << (sgn(c) < 0 ? " - " : " + ");
        first = false;
        bool constant = true;
        std::ostringstream mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (!constant)
                mono << "*";
            constant = false;
            mono << (*table_)[i].name;
            if (m[i] > 1)
                mono << "^" << m[i];
        }
        if (constant)
            os << mag.get_str();
        else if (mag == 1)
            os << mono.str();
        else
            os << mag.get_str() << "*" << mono.str();
    }
    return os.str();
}

namespace {

// sum    := ['+'|'-'] term (('+'|'-') term)*
// term   := factor (['*'] factor)*
// factor := RATIONAL | IDENT ['^' INT] | '(' sum ')'
class PolyParser {
public:
    PolyParser(std::string_view text, std::shared_ptr<const GeneratorTable> table)
        : text_(text), table_(std::move(table)) {}

    GradedPolynomial parse() {
        GradedPolynomial p = sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek_factor_start() {
        skip_ws();
        if (pos_ >= text_.size())
            return false;
        const char c = text_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    GradedPolynomial sum() {
        skip_ws();
        int sign = 1;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
            sign = text_[pos_] == '-' ? -1 : 1;
            ++pos_;
        }
        GradedPolynomial acc = term() * Rational(sign);
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size() || (text_[pos_] != '+' && text_[pos_] != '-'))
                break;
            const bool minus = text_[pos_] == '-';
            ++pos_;
            GradedPolynomial t = term();
            if (minus)
                acc -= t;
            else
                acc += t;
        }
        return acc;
    }

    GradedPolynomial term() {
        GradedPolynomial acc = factor();
        for (;;) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                acc = acc * factor();
            } else if (peek_factor_start()) {
                acc = acc * factor();
            } else {
                break;
            }
        }
        return acc;
    }

    GradedPolynomial factor() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of polynomial");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            GradedPolynomial inner = sum();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
                ++pos_;
            try {
                return GradedPolynomial::constant(table_, parse_rational(text_.substr(start, pos_ - start)));
            } catch (const InvalidArgument& e) {
                pos_ = start;
                fail(e.what());
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            std::size_t index = table_->size();
            for (std::size_t i = 0; i < table_->size(); ++i)
                if ((*table_)[i].name == name)
                    index = i;
            if (index == table_->size()) {
                pos_ = start;
                fail("unknown generator '" + name + "'");
            }
            int exponent = 1;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                skip_ws();
                const std::size_t estart = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                if (estart == pos_)
                    fail("expected exponent after '^'");
                exponent = std::stoi(std::string(text_.substr(estart, pos_ - estart)));
                if ((*table_)[index].odd() && exponent > 1) {
                    pos_ = estart;
                    fail("odd-degree generator '" + name + "' raised to power " + std::to_string(exponent));
                }
            }
            Monomial m(table_->size(), 0);
            m[index] = exponent;
            return GradedPolynomial::monomial(table_, m);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::shared_ptr<const GeneratorTable> table_;
    std::size_t pos_ = 0;
};

} // namespace

GradedPolynomial parse_polynomial(std::string_view text, std::shared_ptr<const GeneratorTable> table) {
    return PolyParser(text, std::move(table)).parse();
}

} // namespace ellip
