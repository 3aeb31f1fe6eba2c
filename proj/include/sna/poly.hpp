#pragma once

#include "sna/rational.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sna {

using Symbol = std::string;

/// A monomial is the sorted multiset of its symbol tokens; repetition encodes
/// powers, and the empty vector is the constant-term monomial. std::vector's
/// lexicographic ordering doubles as the canonical term order.
using Monomial = std::vector<Symbol>;

/// Exact-rational multivariate polynomial. The single value type for matrix
/// entries, right-hand sides, offsets and residuals throughout the engine.
///
/// Invariants: no zero coefficients are stored and monomials are kept sorted,
/// so two polynomials are equal iff their term maps are equal, and rendering
/// is deterministic.
class Poly {
public:
    Poly() = default;

    static Poly zero() { return Poly{}; }
    static Poly constant(const Rational& value);
    static Poly symbol(const Symbol& name);

    bool is_zero() const { return terms_.empty(); }
    /// True when the polynomial is a plain rational (including zero).
    bool is_constant() const;
    /// The value of a constant polynomial; requires is_constant().
    Rational constant_value() const;

    Poly& operator+=(const Poly& other);
    Poly& operator-=(const Poly& other);
    Poly& operator*=(const Poly& other);
    Poly operator-() const;

    /// Multiplication by a plain rational.
    Poly scaled(const Rational& factor) const;

    bool operator==(const Poly& other) const { return terms_ == other.terms_; }
    bool operator!=(const Poly& other) const { return !(*this == other); }

    /// Exact evaluation; throws UnboundSymbol when a symbol has no binding.
    Rational eval(const std::map<Symbol, Rational>& bindings) const;

    /// Canonical string: terms in monomial order, `*` for products, the
    /// coefficient omitted when it is +-1 (unless the monomial is empty),
    /// leading sign folded, "0" for the zero polynomial.
    std::string render() const;

    std::set<Symbol> symbols() const;
    bool contains(const Symbol& name) const;
    int total_degree() const;

    /// Splits p = coeff * s + rest with s occurring in neither part.
    /// Throws std::logic_error if s occurs with degree >= 2 in any term.
    std::pair<Poly, Poly> split_linear(const Symbol& s) const;

    /// Replaces every occurrence of s (power k becomes replacement^k).
    Poly substitute(const Symbol& s, const Poly& replacement) const;

    const std::map<Monomial, Rational>& terms() const { return terms_; }

    /// Adds coef * mono, merging and dropping the term if it cancels.
    /// The monomial is sorted on insertion.
    void add_term(Monomial mono, const Rational& coef);

private:
    std::map<Monomial, Rational> terms_;
};

Poly operator+(Poly lhs, const Poly& rhs);
Poly operator-(Poly lhs, const Poly& rhs);
Poly operator*(Poly lhs, const Poly& rhs);

/// Parses the canonical grammar emitted by Poly::render:
///   poly = term ((+|-) term)* | "0"
///   term = factor (`*` factor)*      factor = rational | symbol
/// Symbol factors are opaque tokens (identifiers, reciprocal tokens such as
/// "1/Rx", or unknown tokens such as "v(2)"). Throws std::invalid_argument
/// on malformed input.
Poly parse_poly(const std::string& text);

/// A polynomial plus a linear part over reduced-system unknowns (reference
/// node voltages, keyed by node token). Coefficient polynomials never
/// mention unknowns themselves.
struct AffineForm {
    Poly constant;
    std::map<std::string, Poly> coeffs;

    AffineForm() = default;
    explicit AffineForm(Poly c) : constant(std::move(c)) {}

    static AffineForm unknown(const std::string& node);

    bool is_constant() const { return coeffs.empty(); }

    AffineForm& operator+=(const AffineForm& other);
    AffineForm& operator-=(const AffineForm& other);
    AffineForm operator-() const;
    AffineForm scaled_by(const Poly& factor) const;
    AffineForm scaled(const Rational& factor) const;

    /// Adds c * v(node), dropping the entry if it cancels to zero.
    void add_unknown(const std::string& node, const Poly& c);

    bool operator==(const AffineForm& other) const
    {
        return constant == other.constant && coeffs == other.coeffs;
    }
    bool operator!=(const AffineForm& other) const { return !(*this == other); }

    Rational eval(const std::map<Symbol, Rational>& bindings,
                  const std::map<std::string, Rational>& unknown_values) const;

    /// True when the symbol occurs in the constant or any coefficient.
    bool contains_symbol(const Symbol& name) const;
    std::set<Symbol> symbols() const;

    /// Folds the linear part into a plain polynomial by naming each unknown
    /// (e.g. node "2" -> token "v(2)"); used for rendering.
    Poly flatten(const std::function<Symbol(const std::string&)>& name_unknown) const;
};

AffineForm operator+(AffineForm lhs, const AffineForm& rhs);
AffineForm operator-(AffineForm lhs, const AffineForm& rhs);

/// Canonical rendering of an affine form with unknowns printed as "v(node)".
std::string render_affine(const AffineForm& form);

/// Standard unknown naming used by renderers: node token t -> "v(t)".
Symbol unknown_token(const std::string& node);

}  // namespace sna
