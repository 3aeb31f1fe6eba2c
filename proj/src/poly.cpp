#include "sna/poly.hpp"

#include "sna/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sna {

Poly Poly::constant(const Rational& value)
{
    Poly p;
    p.add_term({}, value);
    return p;
}

Poly Poly::symbol(const Symbol& name)
{
    Poly p;
    p.add_term({name}, 1);
    return p;
}

bool Poly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Poly::constant_value() const
{
    if (terms_.empty()) {
        return 0;
    }
    if (!is_constant()) {
        throw std::logic_error("constant_value() on non-constant polynomial");
    }
    return terms_.begin()->second;
}

void Poly::add_term(Monomial mono, const Rational& coef)
{
    if (coef == 0) {
        return;
    }
    std::sort(mono.begin(), mono.end());
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(std::move(mono), coef);
        return;
    }
    it->second += coef;
    if (it->second == 0) {
        terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& other)
{
    for (const auto& [mono, coef] : other.terms_) {
        add_term(mono, coef);
    }
    return *this;
}

Poly& Poly::operator-=(const Poly& other)
{
    for (const auto& [mono, coef] : other.terms_) {
        add_term(mono, -coef);
    }
    return *this;
}

Poly& Poly::operator*=(const Poly& other)
{
    Poly product;
    for (const auto& [lm, lc] : terms_) {
        for (const auto& [rm, rc] : other.terms_) {
            Monomial mono = lm;
            mono.insert(mono.end(), rm.begin(), rm.end());
            product.add_term(std::move(mono), lc * rc);
        }
    }
    terms_ = std::move(product.terms_);
    return *this;
}

Poly Poly::operator-() const
{
    Poly negated;
    for (const auto& [mono, coef] : terms_) {
        negated.terms_.emplace(mono, -coef);
    }
    return negated;
}

Poly Poly::scaled(const Rational& factor) const
{
    Poly result;
    if (factor == 0) {
        return result;
    }
    for (const auto& [mono, coef] : terms_) {
        result.terms_.emplace(mono, coef * factor);
    }
    return result;
}

Poly operator+(Poly lhs, const Poly& rhs)
{
    lhs += rhs;
    return lhs;
}

Poly operator-(Poly lhs, const Poly& rhs)
{
    lhs -= rhs;
    return lhs;
}

Poly operator*(Poly lhs, const Poly& rhs)
{
    lhs *= rhs;
    return lhs;
}

Rational Poly::eval(const std::map<Symbol, Rational>& bindings) const
{
    Rational total = 0;
    for (const auto& [mono, coef] : terms_) {
        Rational value = coef;
        for (const Symbol& sym : mono) {
            auto it = bindings.find(sym);
            if (it == bindings.end()) {
                throw Error(ErrorCode::UnboundSymbol, "no value bound for symbol '" + sym + "'");
            }
            value *= it->second;
        }
        total += value;
    }
    return total;
}

std::string Poly::render() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [mono, coef] : terms_) {
        const bool negative = coef < 0;
        if (first) {
            if (negative) {
                out << '-';
            }
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        const Rational magnitude = negative ? Rational(-coef) : coef;
        if (mono.empty()) {
            out << to_string(magnitude);
            continue;
        }
        bool need_star = false;
        if (magnitude != 1) {
            out << to_string(magnitude);
            need_star = true;
        }
        for (const Symbol& sym : mono) {
            if (need_star) {
                out << '*';
            }
            out << sym;
            need_star = true;
        }
    }
    return out.str();
}

std::set<Symbol> Poly::symbols() const
{
    std::set<Symbol> names;
    for (const auto& [mono, coef] : terms_) {
        names.insert(mono.begin(), mono.end());
    }
    return names;
}

bool Poly::contains(const Symbol& name) const
{
    for (const auto& [mono, coef] : terms_) {
        if (std::binary_search(mono.begin(), mono.end(), name)) {
            return true;
        }
    }
    return false;
}

int Poly::total_degree() const
{
    int degree = 0;
    for (const auto& [mono, coef] : terms_) {
        degree = std::max(degree, static_cast<int>(mono.size()));
    }
    return degree;
}

std::pair<Poly, Poly> Poly::split_linear(const Symbol& s) const
{
    Poly coeff;
    Poly rest;
    for (const auto& [mono, coef] : terms_) {
        auto [lo, hi] = std::equal_range(mono.begin(), mono.end(), s);
        const auto count = hi - lo;
        if (count == 0) {
            rest.add_term(mono, coef);
        } else if (count == 1) {
            Monomial reduced(mono.begin(), lo);
            reduced.insert(reduced.end(), hi, mono.end());
            coeff.add_term(std::move(reduced), coef);
        } else {
            throw std::logic_error("split_linear: symbol '" + s + "' occurs with degree >= 2");
        }
    }
    return {coeff, rest};
}

Poly Poly::substitute(const Symbol& s, const Poly& replacement) const
{
    Poly result;
    for (const auto& [mono, coef] : terms_) {
        auto [lo, hi] = std::equal_range(mono.begin(), mono.end(), s);
        const auto count = hi - lo;
        if (count == 0) {
            result.add_term(mono, coef);
            continue;
        }
        Monomial reduced(mono.begin(), lo);
        reduced.insert(reduced.end(), hi, mono.end());
        Poly term;
        term.add_term(std::move(reduced), coef);
        for (auto k = count; k > 0; --k) {
            term *= replacement;
        }
        result += term;
    }
    return result;
}

namespace {

struct SignedChunk {
    bool negative = false;
    std::string body;
};

// Splits on top-level +/-; parentheses only ever appear inside opaque symbol
// tokens such as "v(2)", but tracking depth keeps the split safe regardless.
std::vector<SignedChunk> split_terms(const std::string& text)
{
    std::vector<SignedChunk> chunks;
    SignedChunk current;
    int depth = 0;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        current.negative = text[i] == '-';
        ++i;
    }
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
            if (depth < 0) {
                throw std::invalid_argument("unbalanced ')' in polynomial text");
            }
        }
        if (depth == 0 && (c == '+' || c == '-')) {
            if (current.body.empty()) {
                throw std::invalid_argument("empty term in polynomial text");
            }
            chunks.push_back(std::move(current));
            current = SignedChunk{c == '-', ""};
            continue;
        }
        current.body.push_back(c);
    }
    if (depth != 0) {
        throw std::invalid_argument("unbalanced '(' in polynomial text");
    }
    if (current.body.empty()) {
        throw std::invalid_argument("empty term in polynomial text");
    }
    chunks.push_back(std::move(current));
    return chunks;
}

std::vector<std::string> split_factors(const std::string& body)
{
    std::vector<std::string> factors;
    std::string current;
    int depth = 0;
    for (const char c : body) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        }
        if (depth == 0 && c == '*') {
            if (current.empty()) {
                throw std::invalid_argument("empty factor in polynomial term");
            }
            factors.push_back(std::move(current));
            current.clear();
            continue;
        }
        current.push_back(c);
    }
    if (current.empty()) {
        throw std::invalid_argument("empty factor in polynomial term");
    }
    factors.push_back(std::move(current));
    return factors;
}

}  // namespace

Poly parse_poly(const std::string& text)
{
    std::string compact;
    compact.reserve(text.size());
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            compact.push_back(c);
        }
    }
    if (compact.empty()) {
        throw std::invalid_argument("empty polynomial text");
    }
    Poly result;
    for (const SignedChunk& chunk : split_terms(compact)) {
        Rational coef = chunk.negative ? -1 : 1;
        Monomial mono;
        for (const std::string& factor : split_factors(chunk.body)) {
            if (auto value = parse_rational(factor)) {
                coef *= *value;
            } else {
                mono.push_back(factor);
            }
        }
        result.add_term(std::move(mono), coef);
    }
    return result;
}

AffineForm AffineForm::unknown(const std::string& node)
{
    AffineForm form;
    form.coeffs.emplace(node, Poly::constant(1));
    return form;
}

void AffineForm::add_unknown(const std::string& node, const Poly& c)
{
    if (c.is_zero()) {
        return;
    }
    auto it = coeffs.find(node);
    if (it == coeffs.end()) {
        coeffs.emplace(node, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) {
        coeffs.erase(it);
    }
}

AffineForm& AffineForm::operator+=(const AffineForm& other)
{
    constant += other.constant;
    for (const auto& [node, c] : other.coeffs) {
        add_unknown(node, c);
    }
    return *this;
}

AffineForm& AffineForm::operator-=(const AffineForm& other)
{
    constant -= other.constant;
    for (const auto& [node, c] : other.coeffs) {
        add_unknown(node, -c);
    }
    return *this;
}

AffineForm AffineForm::operator-() const
{
    AffineForm negated;
    negated.constant = -constant;
    for (const auto& [node, c] : coeffs) {
        negated.coeffs.emplace(node, -c);
    }
    return negated;
}

AffineForm AffineForm::scaled_by(const Poly& factor) const
{
    AffineForm result;
    if (factor.is_zero()) {
        return result;
    }
    result.constant = constant * factor;
    for (const auto& [node, c] : coeffs) {
        result.coeffs.emplace(node, c * factor);
    }
    return result;
}

AffineForm AffineForm::scaled(const Rational& factor) const
{
    return scaled_by(Poly::constant(factor));
}

AffineForm operator+(AffineForm lhs, const AffineForm& rhs)
{
    lhs += rhs;
    return lhs;
}

AffineForm operator-(AffineForm lhs, const AffineForm& rhs)
{
    lhs -= rhs;
    return lhs;
}

Rational AffineForm::eval(const std::map<Symbol, Rational>& bindings,
                          const std::map<std::string, Rational>& unknown_values) const
{
    Rational total = constant.eval(bindings);
    for (const auto& [node, c] : coeffs) {
        auto it = unknown_values.find(node);
        if (it == unknown_values.end()) {
            throw Error(ErrorCode::UnboundSymbol, "no value for unknown node voltage '" + node + "'");
        }
        total += c.eval(bindings) * it->second;
    }
    return total;
}

bool AffineForm::contains_symbol(const Symbol& name) const
{
    if (constant.contains(name)) {
        return true;
    }
    for (const auto& [node, c] : coeffs) {
        if (c.contains(name)) {
            return true;
        }
    }
    return false;
}

std::set<Symbol> AffineForm::symbols() const
{
    std::set<Symbol> names = constant.symbols();
    for (const auto& [node, c] : coeffs) {
        const auto more = c.symbols();
        names.insert(more.begin(), more.end());
    }
    return names;
}

Poly AffineForm::flatten(const std::function<Symbol(const std::string&)>& name_unknown) const
{
    Poly flat = constant;
    for (const auto& [node, c] : coeffs) {
        flat += c * Poly::symbol(name_unknown(node));
    }
    return flat;
}

Symbol unknown_token(const std::string& node)
{
    return "v(" + node + ")";
}

std::string render_affine(const AffineForm& form)
{
    return form.flatten(unknown_token).render();
}

}  // namespace sna
