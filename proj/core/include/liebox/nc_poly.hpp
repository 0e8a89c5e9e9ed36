#pragma once

// Noncommutative polynomials P(X_1..X_m) = sum C(k_1..k_p) X_{k_1}...X_{k_p}
// and the triviality test: split into components homogeneous in every
// variable, multilinearize, then read every coefficient off the witness
// fields X_j = x_j d/dx_{j+1} acting on psi = x_{p+1}.

#include "liebox/free_lie.hpp"
#include "liebox/perm_words.hpp"
#include "liebox/polynomial.hpp"
#include "liebox/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace liebox {

class NCPoly {
public:
    using Terms = std::map<Word, Rational>;

    explicit NCPoly(int alphabet = 0) : alphabet_(alphabet) {}
    /// Reads a free-algebra element as a polynomial in `alphabet` variables.
    static NCPoly from_word_sum(const WordSum& s, int alphabet);

    int alphabet() const noexcept { return alphabet_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Total degrees present, ascending.
    std::vector<int> degrees() const;

    void add(const Word& w, const Rational& c);
    NCPoly& operator+=(const NCPoly& o);
    NCPoly& operator-=(const NCPoly& o);
    friend bool operator==(const NCPoly& a, const NCPoly& b)
    {
        return a.alphabet_ == b.alphabet_ && a.terms_ == b.terms_;
    }

    /// Degree of `var` (1-based) in every monomial, or nullopt if it varies.
    std::optional<int> degree_in(int var) const;
    /// Per-variable degree vector when P is homogeneous in every variable.
    std::optional<std::vector<int>> multidegree() const;
    bool is_multilinear() const;

    std::string str() const;

private:
    int alphabet_;
    Terms terms_;
};

std::vector<int> multidegree_of(const Word& w, int alphabet);

struct HomogeneousComponent {
    std::vector<int> multidegree;
    NCPoly poly;
};

/// Components homogeneous in each variable, ordered by multidegree.
std::vector<HomogeneousComponent> homogeneous_split(const NCPoly& p);

/// P(U+T, ...) - P(U, ...) - P(T, ...) where U keeps index `var` and T is the
/// new variable alphabet+1. Requires P homogeneous of degree >= 2 in `var`.
NCPoly multilinearize(const NCPoly& p, int var);

/// B(sigma) for every sigma in S_p with B(sigma) != 0, from the symbolic
/// action of X_{sigma_j} = x_j d/dx_{j+1} on psi = x_{p+1} in R^{p+1}.
/// Requires each variable 1..p to occur exactly once in every monomial.
std::map<Perm, Rational> witness_coefficients(const NCPoly& q);

/// Q psi for the relabeled witness fields of one sigma, as an exact
/// polynomial in x_1..x_{p+1}; equals B(sigma) * x_1.
Polynomial witness_action(const NCPoly& q, const Perm& sigma);

struct TrivialityCertificate {
    std::vector<int> component_multidegree;  // of the original component
    NCPoly multilinear;                       // descendant that was evaluated
    std::vector<int> relabel;                 // relabel[new-1] = variable of `multilinear`
    Perm sigma;
    Rational coefficient;
};

struct TrivialityResult {
    bool trivial = true;
    std::optional<TrivialityCertificate> certificate;
    std::size_t components = 0;
    std::size_t multilinear_evaluations = 0;
};

TrivialityResult is_trivial(const NCPoly& p);

}  // namespace liebox
