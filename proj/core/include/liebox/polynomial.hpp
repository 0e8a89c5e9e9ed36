#pragma once

// Sparse multivariate polynomials with exact rational coefficients, maps
// R^n -> R^n built from them, and a compiled double-precision form for the
// numeric hot loops (flows, Newton solves, Monte Carlo membership).

#include "liebox/rational.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace liebox {

using Exponents = std::vector<int>;

class Polynomial {
public:
    using Terms = std::map<Exponents, Rational>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c);
    /// The coordinate x_{index}, index 0-based.
    static Polynomial variable(int nvars, int index);
    static Polynomial monomial(Exponents exps, const Rational& c);

    int nvars() const noexcept { return nvars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const;
    Rational coefficient(const Exponents& exps) const;

    void add_term(const Exponents& exps, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// d/dx_{var}, var 0-based.
    Polynomial derivative(int var) const;

    Rational evaluate(std::span<const Rational> x) const;
    double evaluate(std::span<const double> x) const;
    double evaluate(const Eigen::VectorXd& x) const
    {
        return evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    }

    /// Human-readable, e.g. "x1 - 1/2*x2*x3".
    std::string str() const;

private:
    int nvars_;
    Terms terms_;
};

/// A polynomial map R^n -> R^n (a vector field f with X = f . grad).
class PolyMap {
public:
    PolyMap() = default;
    /// Zero map on R^n.
    explicit PolyMap(int n);
    explicit PolyMap(std::vector<Polynomial> components);

    int dim() const noexcept { return static_cast<int>(components_.size()); }
    const Polynomial& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }
    Polynomial& operator[](int i) { return components_.at(static_cast<std::size_t>(i)); }
    const std::vector<Polynomial>& components() const noexcept { return components_; }
    bool is_zero() const;

    PolyMap& operator+=(const PolyMap& o);
    PolyMap& operator-=(const PolyMap& o);
    PolyMap& operator*=(const Rational& c);
    friend PolyMap operator+(PolyMap a, const PolyMap& b) { return a += b; }
    friend PolyMap operator-(PolyMap a, const PolyMap& b) { return a -= b; }
    friend PolyMap operator*(PolyMap a, const Rational& c) { return a *= c; }
    friend PolyMap operator*(const Rational& c, PolyMap a) { return a *= c; }
    friend bool operator==(const PolyMap& a, const PolyMap& b) { return a.components_ == b.components_; }

    std::vector<Rational> evaluate(std::span<const Rational> x) const;
    Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;

    std::string str() const;

private:
    std::vector<Polynomial> components_;
};

/// (f . grad) g for a scalar polynomial g.
Polynomial directional_derivative(const PolyMap& f, const Polynomial& g);
/// (f . grad) g applied componentwise.
PolyMap directional_derivative(const PolyMap& f, const PolyMap& g);

/// Double-precision evaluation of a family of polynomial maps sharing one
/// monomial basis, so that any linear combination sum_k u_k F_k evaluates
/// with a single pass over the monomials.
class CompiledFamily {
public:
    CompiledFamily() = default;
    explicit CompiledFamily(const std::vector<PolyMap>& maps);

    int dim() const noexcept { return dim_; }
    int size() const noexcept { return static_cast<int>(coeffs_.size()); }
    int monomial_count() const noexcept { return static_cast<int>(monomials_.size()); }

    /// Coefficient matrix (dim x monomials) of sum_k u_k F_k.
    Eigen::MatrixXd combine(std::span<const double> u) const;
    const Eigen::MatrixXd& coefficients(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }

    /// Values of all basis monomials at x.
    void monomials(const Eigen::VectorXd& x, Eigen::VectorXd& values) const;
    /// Values and gradients (monomials x dim) of all basis monomials at x.
    void monomials_with_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& values, Eigen::MatrixXd& grads) const;

    Eigen::VectorXd evaluate(int k, const Eigen::VectorXd& x) const;
    /// Columns F_k(x), k = 0..size-1.
    Eigen::MatrixXd evaluate_all(const Eigen::VectorXd& x) const;

private:
    int dim_ = 0;
    int max_degree_ = 0;
    std::vector<Exponents> monomials_;
    std::vector<Eigen::MatrixXd> coeffs_;
};

}  // namespace liebox
