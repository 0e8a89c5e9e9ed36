#include "liebox/free_lie.hpp"

#include <numeric>
#include <sstream>

namespace liebox {

void WordSum::add(const Word& w, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

void WordSum::add_scaled(const WordSum& other, const Rational& c)
{
    if (c == 0)
        return;
    for (const auto& [w, a] : other.terms_)
        add(w, a * c);
}

Rational WordSum::coefficient(const Word& w) const
{
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

WordSum& WordSum::operator+=(const WordSum& other)
{
    for (const auto& [w, c] : other.terms_)
        add(w, c);
    return *this;
}

WordSum& WordSum::operator-=(const WordSum& other)
{
    for (const auto& [w, c] : other.terms_)
        add(w, -c);
    return *this;
}

WordSum& WordSum::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, a] : terms_)
        a *= c;
    return *this;
}

WordSum operator*(const WordSum& a, const WordSum& b)
{
    WordSum out;
    for (const auto& [u, cu] : a.terms_)
        for (const auto& [v, cv] : b.terms_)
            out.add(u + v, cu * cv);
    return out;
}

std::string WordSum::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first)
            os << ' ';
        first = false;
        os << (c > 0 ? "+" : "") << to_string(c) << '*' << w.str();
    }
    return os.str();
}

WordSum assoc_bracket(const WordSum& a, const WordSum& b) { return a * b - b * a; }

WordSum expand_nested(const Word& w, int max_order)
{
    if (w.empty())
        throw std::invalid_argument("expand_nested: empty word");
    const auto& table = pi_table(static_cast<int>(w.size()), max_order);
    WordSum out;
    for (const auto& [sigma, c] : table.support())
        out.add(apply_perm(sigma, w), c);
    return out;
}

Word placement_word(const Word& v, const std::vector<int>& k)
{
    if (v.empty() || k.size() + 1 != v.size())
        throw std::invalid_argument("placement_word: need |k| = |v| - 1");
    Word block = v.subword(v.size() - 1, 1);
    for (std::size_t j = k.size(); j-- > 0;) {
        Word letter = v.subword(j, 1);
        if (k[j] == 1)
            block = letter + block;
        else if (k[j] == -1)
            block = block + letter;
        else
            throw std::invalid_argument("placement_word: k entries must be +1 or -1");
    }
    return block;
}

namespace {

// Calls f(k, sign) for every k in {+1,-1}^count, sign = (-1)^{#(-1)}.
template <class F>
void for_each_sign_vector(std::size_t count, F&& f)
{
    std::vector<int> k(count, 1);
    for (std::size_t mask = 0; mask < (std::size_t{1} << count); ++mask) {
        int sign = 1;
        for (std::size_t j = 0; j < count; ++j) {
            bool right = (mask >> j) & 1U;
            k[j] = right ? -1 : 1;
            if (right)
                sign = -sign;
        }
        f(k, sign);
    }
}

}  // namespace

WordSum signed_expansion(const Word& v)
{
    if (v.empty())
        throw std::invalid_argument("signed_expansion: empty word");
    WordSum out;
    for_each_sign_vector(v.size() - 1, [&](const std::vector<int>& k, int sign) {
        out.add(placement_word(v, k), sign);
    });
    return out;
}

WordSum check_jacobi(const Word& u, const Word& v, const Word& w)
{
    auto xu = expand_nested(u);
    auto xv = expand_nested(v);
    auto xw = expand_nested(w);
    return assoc_bracket(xu, assoc_bracket(xv, xw)) + assoc_bracket(xv, assoc_bracket(xw, xu)) +
           assoc_bracket(xw, assoc_bracket(xu, xv));
}

WordSum check_generalized_jacobi(const Word& v, const Word& w)
{
    if (v.empty() || w.empty())
        throw std::invalid_argument("check_generalized_jacobi: need |v|, |w| >= 1");
    WordSum residual = assoc_bracket(expand_nested(v), expand_nested(w));
    const auto& table = pi_table(static_cast<int>(v.size()));
    for (const auto& [sigma, c] : table.support())
        residual.add_scaled(expand_nested(apply_perm(sigma, v) + w), -c);
    return residual;
}

WordSum check_J2(const Word& v)
{
    if (v.size() < 2)
        throw std::invalid_argument("check_J2: need |v| >= 2");
    WordSum residual = expand_nested(v);
    const auto& table = pi_table(static_cast<int>(v.size()));
    Rational inv_l(1, static_cast<unsigned long>(v.size()));
    for (const auto& [sigma, c] : table.support())
        residual.add_scaled(expand_nested(apply_perm(sigma, v)), -inv_l * c);
    return residual;
}

WordSum f_identity_sum(const std::vector<int>& b, const Word& v, const Word& w)
{
    const std::size_t l = v.size();
    const std::size_t p = b.size();
    if (l < 1)
        throw std::invalid_argument("F identity: |v| must be >= 1");
    if (p < 1 || p > l)
        throw std::invalid_argument("F identity: need 1 <= p <= |v|");
    int total = 0;
    for (int bi : b) {
        if (bi < 0)
            throw std::invalid_argument("F identity: exponents must be >= 0");
        total += bi;
    }
    if (total < 1)
        throw std::invalid_argument("F identity: exponents must sum to at least 1");

    // Positions i_1 < ... < i_p as a combination of {1..l}.
    std::vector<std::size_t> idx(p);
    std::vector<std::vector<std::size_t>> combos;
    std::iota(idx.begin(), idx.end(), 1);
    while (true) {
        combos.push_back(idx);
        std::size_t j = p;
        while (j > 0 && idx[j - 1] == l - p + j)
            --j;
        if (j == 0)
            break;
        ++idx[j - 1];
        for (std::size_t t = j; t < p; ++t)
            idx[t] = idx[t - 1] + 1;
    }

    WordSum out;
    const auto& table = pi_table(static_cast<int>(l));
    for (const auto& [sigma, c] : table.support()) {
        Word sv = apply_perm(sigma, v);
        for (const auto& combo : combos) {
            Word u;
            for (std::size_t t = p; t-- > 0;)
                u = u + Word::repeat(sv[combo[t] - 1], static_cast<std::size_t>(b[t]));
            u = u + w;
            out.add_scaled(expand_nested(u), c);
        }
    }
    return out;
}

WordSum check_F(const std::vector<int>& b, const Word& v, const Word& w)
{
    if (b.size() == v.size())
        throw KnownFailure("F identity with p = l = " + std::to_string(v.size()) + " does not hold");
    return f_identity_sum(b, v, w);
}

std::vector<NamedResidual> check_baker(int a, int b)
{
    auto X = [](const Word& w) { return expand_nested(w); };
    Word A{a}, B{b};
    auto word = [&](std::initializer_list<Word> parts) {
        Word out;
        for (const auto& p : parts)
            out = out + p;
        return out;
    };
    Word b2 = B + B, b3 = b2 + B, b4 = b3 + B;

    std::vector<NamedResidual> out;
    out.push_back({"X_abab - X_baab", X(word({A, B, A, B})) - X(word({B, A, A, B}))});
    out.push_back({"X_abab + X_abba", X(word({A, B, A, B})) + X(word({A, B, B, A}))});
    out.push_back({"2X_abab + 2X_baba", Rational(2) * X(word({A, B, A, B})) + Rational(2) * X(word({B, A, B, A}))});
    out.push_back({"[b^3aba] - [b^2ab^2a]", X(word({b3, A, B, A})) - X(word({b2, A, b2, A}))});
    out.push_back({"[ab^4a] - 2[b^3aba] + 3[b^2ab^2a] - 2[bab^3a]",
                   X(word({A, b4, A})) - Rational(2) * X(word({b3, A, B, A})) +
                       Rational(3) * X(word({b2, A, b2, A})) - Rational(2) * X(word({B, A, b3, A}))});
    out.push_back({"[ab^4a] - 2[bab^3a] + [b^2ab^2a]",
                   X(word({A, b4, A})) - Rational(2) * X(word({B, A, b3, A})) + X(word({b2, A, b2, A}))});
    return out;
}

std::map<Word, long> giochetto_terms(const Word& v, int w)
{
    if (v.empty())
        throw std::invalid_argument("giochetto: |v| must be >= 1");
    Word tail{w};
    std::map<Word, long> out;
    auto bump = [&](const Word& word, long c) {
        auto& slot = out[word];
        slot += c;
        if (slot == 0)
            out.erase(word);
    };
    bump(tail + v, 1);
    for_each_sign_vector(v.size() - 1, [&](const std::vector<int>& k, int sign) {
        bump(placement_word(v, k) + tail, sign);
    });
    return out;
}

WordSum check_giochetto(const Word& v, int w)
{
    WordSum out;
    for (const auto& [word, c] : giochetto_terms(v, w))
        out.add_scaled(expand_nested(word), c);
    return out;
}

}  // namespace liebox
