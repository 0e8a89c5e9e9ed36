#pragma once

// Free associative algebra over words with exact rational coefficients, and
// residual ("zero-witness") forms of the nested-commutator identity families.
// Every check returns LHS - RHS; an identity holds iff the residual is the
// zero WordSum.

#include "liebox/perm_words.hpp"
#include "liebox/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace liebox {

class WordSum {
public:
    using Terms = std::map<Word, Rational>;

    WordSum() = default;
    explicit WordSum(const Word& w, const Rational& c = 1) { add(w, c); }

    /// Adds c*w; entries that cancel to zero are erased.
    void add(const Word& w, const Rational& c);
    void add_scaled(const WordSum& other, const Rational& c);

    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    Rational coefficient(const Word& w) const;
    const Terms& terms() const noexcept { return terms_; }

    WordSum& operator+=(const WordSum& other);
    WordSum& operator-=(const WordSum& other);
    WordSum& operator*=(const Rational& c);

    friend WordSum operator+(WordSum a, const WordSum& b) { return a += b; }
    friend WordSum operator-(WordSum a, const WordSum& b) { return a -= b; }
    friend WordSum operator*(WordSum a, const Rational& c) { return a *= c; }
    friend WordSum operator*(const Rational& c, WordSum a) { return a *= c; }
    /// Concatenation product, extended bilinearly.
    friend WordSum operator*(const WordSum& a, const WordSum& b);
    friend bool operator==(const WordSum& a, const WordSum& b) { return a.terms_ == b.terms_; }

    /// "+1*12 -1*21"; "0" for the zero element.
    std::string str() const;

private:
    Terms terms_;
};

/// ab - ba.
WordSum assoc_bracket(const WordSum& a, const WordSum& b);

/// X_w = [w_1,[w_2,...]] expanded through the pi table of order |w|.
/// Throws std::out_of_range when |w| exceeds max_order.
WordSum expand_nested(const Word& w, int max_order = kDefaultMaxPiOrder);

/// Expansion by the left/right placement rule: each of the letters
/// v_{l-1}, ..., v_1 is placed left (k = +1) or right (k = -1) of the block
/// built so far, starting from v_l, with sign (-1)^{#{j : k_j = -1}}.
WordSum signed_expansion(const Word& v);

/// Word produced by one placement vector k (k[j] = +1 or -1 for v_{j+1}),
/// for j = 0..|v|-2; the last letter of v seeds the block.
Word placement_word(const Word& v, const std::vector<int>& k);

WordSum check_jacobi(const Word& u, const Word& v, const Word& w);

/// [X_v, X_w] - sum_sigma pi_p(sigma) X_{sigma(v) w}, p = |v|.
WordSum check_generalized_jacobi(const Word& v, const Word& w);

/// X_v - (1/l) sum_sigma pi_l(sigma) X_{sigma(v)}, l = |v| >= 2.
WordSum check_J2(const Word& v);

/// Thrown when an F identity is requested at p = l, where it is known to fail.
class KnownFailure : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// sum_sigma pi_l(sigma) sum_{i_1<...<i_p} X_{v_{sigma(i_p)}^{b_p} ... v_{sigma(i_1)}^{b_1} w}
/// for l = |v| and p = |b|, any 1 <= p <= l. A letter power with exponent 0
/// contributes no letters.
WordSum f_identity_sum(const std::vector<int>& b, const Word& v, const Word& w);

/// Same sum, restricted to the range 1 <= p <= l-1 where it must vanish.
/// Throws KnownFailure for p = l and std::invalid_argument for malformed input.
WordSum check_F(const std::vector<int>& b, const Word& v, const Word& w);

struct NamedResidual {
    std::string name;
    WordSum residual;
};

/// The order-four and order-six identities (1212 = 2112 = -1221, the order-six
/// combination, the intermediate b^3aba = b^2ab^2a and 2X_1212 = -2X_2121),
/// instantiated at a = 1, b = 2.
std::vector<NamedResidual> check_baker(int a = 1, int b = 2);

/// Bracket-word combination [w v] + sum_k sign(k) [placement(k, v) w] before
/// expansion: a map from bracket word to integer multiplicity.
std::map<Word, long> giochetto_terms(const Word& v, int w);

/// The combination above, with each bracket word expanded (expected zero).
WordSum check_giochetto(const Word& v, int w);

}  // namespace liebox
