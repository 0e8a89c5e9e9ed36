#include "liebox/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace liebox {

namespace {

void require_same_vars(int a, int b)
{
    if (a != b)
        throw std::invalid_argument("polynomials over different variable counts: " + std::to_string(a) + " vs " +
                                    std::to_string(b));
}

}  // namespace

Polynomial Polynomial::constant(int nvars, const Rational& c)
{
    Polynomial p(nvars);
    p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int index)
{
    if (index < 0 || index >= nvars)
        throw std::out_of_range("variable index out of range");
    Exponents e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(index)] = 1;
    return monomial(std::move(e), 1);
}

Polynomial Polynomial::monomial(Exponents exps, const Rational& c)
{
    Polynomial p(static_cast<int>(exps.size()));
    p.add_term(exps, c);
    return p;
}

int Polynomial::degree() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int k : e)
            s += k;
        d = std::max(d, s);
    }
    return d;
}

Rational Polynomial::coefficient(const Exponents& exps) const
{
    auto it = terms_.find(exps);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& exps, const Rational& c)
{
    if (static_cast<int>(exps.size()) != nvars_)
        throw std::invalid_argument("exponent vector length does not match variable count");
    for (int k : exps)
        if (k < 0)
            throw std::invalid_argument("negative exponent");
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    require_same_vars(nvars_, o.nvars_);
    for (const auto& [e, c] : o.terms_)
        add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o)
{
    require_same_vars(nvars_, o.nvars_);
    for (const auto& [e, c] : o.terms_)
        add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, a] : terms_)
        a *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    require_same_vars(a.nvars_, b.nvars_);
    Polynomial out(a.nvars_);
    Exponents e(static_cast<std::size_t>(a.nvars_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

Polynomial Polynomial::derivative(int var) const
{
    if (var < 0 || var >= nvars_)
        throw std::out_of_range("derivative variable out of range");
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<std::size_t>(var)];
        if (k == 0)
            continue;
        Exponents d = e;
        d[static_cast<std::size_t>(var)] = k - 1;
        out.add_term(d, c * k);
    }
    return out;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const
{
    if (static_cast<int>(x.size()) != nvars_)
        throw std::invalid_argument("evaluation point has wrong dimension");
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k)
                term *= x[i];
        sum += term;
    }
    return sum;
}

double Polynomial::evaluate(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != nvars_)
        throw std::invalid_argument("evaluation point has wrong dimension");
    double sum = 0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k)
                term *= x[i];
        sum += term;
    }
    return sum;
}

std::string Polynomial::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // Highest total degree first reads more naturally.
    std::vector<std::pair<Exponents, Rational>> sorted(terms_.begin(), terms_.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        int da = 0, db = 0;
        for (int k : a.first)
            da += k;
        for (int k : b.first)
            db += k;
        return da < db;
    });
    for (const auto& [e, c] : sorted) {
        Rational mag = abs(c);
        bool is_const = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        bool wrote = false;
        if (mag != 1 || is_const) {
            os << to_string(mag);
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            os << (wrote ? "*" : "") << 'x' << (i + 1);
            if (e[i] > 1)
                os << '^' << e[i];
            wrote = true;
        }
    }
    return os.str();
}

PolyMap::PolyMap(int n) : components_(static_cast<std::size_t>(n), Polynomial(n)) {}

PolyMap::PolyMap(std::vector<Polynomial> components) : components_(std::move(components))
{
    for (const auto& c : components_)
        if (c.nvars() != dim())
            throw std::invalid_argument("PolyMap components must be polynomials in dim() variables");
}

bool PolyMap::is_zero() const
{
    return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

PolyMap& PolyMap::operator+=(const PolyMap& o)
{
    if (o.dim() != dim())
        throw std::invalid_argument("PolyMap dimension mismatch");
    for (std::size_t i = 0; i < components_.size(); ++i)
        components_[i] += o.components_[i];
    return *this;
}

PolyMap& PolyMap::operator-=(const PolyMap& o)
{
    if (o.dim() != dim())
        throw std::invalid_argument("PolyMap dimension mismatch");
    for (std::size_t i = 0; i < components_.size(); ++i)
        components_[i] -= o.components_[i];
    return *this;
}

PolyMap& PolyMap::operator*=(const Rational& c)
{
    for (auto& p : components_)
        p *= c;
    return *this;
}

std::vector<Rational> PolyMap::evaluate(std::span<const Rational> x) const
{
    std::vector<Rational> out;
    out.reserve(components_.size());
    for (const auto& p : components_)
        out.push_back(p.evaluate(x));
    return out;
}

Eigen::VectorXd PolyMap::evaluate(const Eigen::VectorXd& x) const
{
    Eigen::VectorXd out(dim());
    for (int i = 0; i < dim(); ++i)
        out[i] = components_[static_cast<std::size_t>(i)].evaluate(x);
    return out;
}

std::string PolyMap::str() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i)
            out += ", ";
        out += components_[i].str();
    }
    return out + ")";
}

Polynomial directional_derivative(const PolyMap& f, const Polynomial& g)
{
    if (f.dim() != g.nvars())
        throw std::invalid_argument("directional_derivative: dimension mismatch");
    Polynomial out(g.nvars());
    for (int i = 0; i < f.dim(); ++i) {
        if (f[i].is_zero())
            continue;
        auto dg = g.derivative(i);
        if (!dg.is_zero())
            out += f[i] * dg;
    }
    return out;
}

PolyMap directional_derivative(const PolyMap& f, const PolyMap& g)
{
    std::vector<Polynomial> comps;
    comps.reserve(static_cast<std::size_t>(g.dim()));
    for (const auto& gi : g.components())
        comps.push_back(directional_derivative(f, gi));
    return PolyMap(std::move(comps));
}

CompiledFamily::CompiledFamily(const std::vector<PolyMap>& maps)
{
    if (maps.empty())
        return;
    dim_ = maps.front().dim();
    std::map<Exponents, int> index;
    for (const auto& f : maps) {
        if (f.dim() != dim_)
            throw std::invalid_argument("CompiledFamily: maps of different dimensions");
        for (const auto& p : f.components())
            for (const auto& [e, c] : p.terms())
                index.try_emplace(e, 0);
    }
    int k = 0;
    for (auto& [e, idx] : index) {
        idx = k++;
        monomials_.push_back(e);
        for (int v : e)
            max_degree_ = std::max(max_degree_, v);
    }
    for (const auto& f : maps) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim_, k);
        for (int i = 0; i < dim_; ++i)
            for (const auto& [e, coef] : f[i].terms())
                c(i, index.at(e)) = coef.get_d();
        coeffs_.push_back(std::move(c));
    }
}

Eigen::MatrixXd CompiledFamily::combine(std::span<const double> u) const
{
    if (static_cast<int>(u.size()) != size())
        throw std::invalid_argument("CompiledFamily::combine: coefficient count mismatch");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim_, monomial_count());
    for (int k = 0; k < size(); ++k)
        if (u[static_cast<std::size_t>(k)] != 0.0)
            c.noalias() += u[static_cast<std::size_t>(k)] * coeffs_[static_cast<std::size_t>(k)];
    return c;
}

void CompiledFamily::monomials(const Eigen::VectorXd& x, Eigen::VectorXd& values) const
{
    const int m = monomial_count();
    values.resize(m);
    // powers(i, d) = x_i^d
    Eigen::MatrixXd powers(dim_, max_degree_ + 1);
    for (int i = 0; i < dim_; ++i) {
        powers(i, 0) = 1.0;
        for (int d = 1; d <= max_degree_; ++d)
            powers(i, d) = powers(i, d - 1) * x[i];
    }
    for (int j = 0; j < m; ++j) {
        double v = 1.0;
        const auto& e = monomials_[static_cast<std::size_t>(j)];
        for (int i = 0; i < dim_; ++i)
            if (e[static_cast<std::size_t>(i)])
                v *= powers(i, e[static_cast<std::size_t>(i)]);
        values[j] = v;
    }
}

void CompiledFamily::monomials_with_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& values,
                                             Eigen::MatrixXd& grads) const
{
    const int m = monomial_count();
    values.resize(m);
    grads.setZero(m, dim_);
    Eigen::MatrixXd powers(dim_, max_degree_ + 1);
    for (int i = 0; i < dim_; ++i) {
        powers(i, 0) = 1.0;
        for (int d = 1; d <= max_degree_; ++d)
            powers(i, d) = powers(i, d - 1) * x[i];
    }
    for (int j = 0; j < m; ++j) {
        const auto& e = monomials_[static_cast<std::size_t>(j)];
        double v = 1.0;
        for (int i = 0; i < dim_; ++i)
            if (e[static_cast<std::size_t>(i)])
                v *= powers(i, e[static_cast<std::size_t>(i)]);
        values[j] = v;
        for (int i = 0; i < dim_; ++i) {
            int ei = e[static_cast<std::size_t>(i)];
            if (ei == 0)
                continue;
            double g = ei * powers(i, ei - 1);
            for (int l = 0; l < dim_; ++l)
                if (l != i && e[static_cast<std::size_t>(l)])
                    g *= powers(l, e[static_cast<std::size_t>(l)]);
            grads(j, i) = g;
        }
    }
}

Eigen::VectorXd CompiledFamily::evaluate(int k, const Eigen::VectorXd& x) const
{
    Eigen::VectorXd vals;
    monomials(x, vals);
    return coeffs_.at(static_cast<std::size_t>(k)) * vals;
}

Eigen::MatrixXd CompiledFamily::evaluate_all(const Eigen::VectorXd& x) const
{
    Eigen::VectorXd vals;
    monomials(x, vals);
    Eigen::MatrixXd out(dim_, size());
    for (int k = 0; k < size(); ++k)
        out.col(k) = coeffs_[static_cast<std::size_t>(k)] * vals;
    return out;
}

}  // namespace liebox
