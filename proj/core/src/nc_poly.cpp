#include "liebox/nc_poly.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace liebox {

NCPoly NCPoly::from_word_sum(const WordSum& s, int alphabet)
{
    NCPoly p(alphabet);
    for (const auto& [w, c] : s.terms())
        p.add(w, c);
    return p;
}

std::vector<int> NCPoly::degrees() const
{
    std::set<int> ds;
    for (const auto& [w, c] : terms_)
        ds.insert(static_cast<int>(w.size()));
    return {ds.begin(), ds.end()};
}

void NCPoly::add(const Word& w, const Rational& c)
{
    w.check_alphabet(alphabet_);
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

NCPoly& NCPoly::operator+=(const NCPoly& o)
{
    alphabet_ = std::max(alphabet_, o.alphabet_);
    for (const auto& [w, c] : o.terms_)
        add(w, c);
    return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o)
{
    alphabet_ = std::max(alphabet_, o.alphabet_);
    for (const auto& [w, c] : o.terms_)
        add(w, -c);
    return *this;
}

std::vector<int> multidegree_of(const Word& w, int alphabet)
{
    std::vector<int> d(static_cast<std::size_t>(alphabet), 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        ++d.at(static_cast<std::size_t>(w[i] - 1));
    return d;
}

std::optional<int> NCPoly::degree_in(int var) const
{
    std::optional<int> deg;
    for (const auto& [w, c] : terms_) {
        int d = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            d += w[i] == var;
        if (deg && *deg != d)
            return std::nullopt;
        deg = d;
    }
    return deg.value_or(0);
}

std::optional<std::vector<int>> NCPoly::multidegree() const
{
    std::optional<std::vector<int>> md;
    for (const auto& [w, c] : terms_) {
        auto d = multidegree_of(w, alphabet_);
        if (md && *md != d)
            return std::nullopt;
        md = std::move(d);
    }
    return md ? md : std::vector<int>(static_cast<std::size_t>(alphabet_), 0);
}

bool NCPoly::is_multilinear() const
{
    auto md = multidegree();
    if (!md)
        return false;
    return std::all_of(md->begin(), md->end(), [](int d) { return d <= 1; });
}

std::string NCPoly::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
        first = false;
        Rational mag = abs(c);
        if (mag != 1)
            os << to_string(mag) << '*';
        for (std::size_t i = 0; i < w.size(); ++i)
            os << 'X' << w[i];
    }
    return os.str();
}

std::vector<HomogeneousComponent> homogeneous_split(const NCPoly& p)
{
    std::map<std::vector<int>, NCPoly> parts;
    for (const auto& [w, c] : p.terms()) {
        auto [it, inserted] = parts.try_emplace(multidegree_of(w, p.alphabet()), p.alphabet());
        it->second.add(w, c);
    }
    std::vector<HomogeneousComponent> out;
    for (auto& [d, poly] : parts)
        out.push_back({d, std::move(poly)});
    return out;
}

NCPoly multilinearize(const NCPoly& p, int var)
{
    if (var < 1 || var > p.alphabet())
        throw std::invalid_argument("multilinearize: variable out of range");
    auto d = p.degree_in(var);
    if (!d)
        throw std::invalid_argument("multilinearize: polynomial not homogeneous in X" + std::to_string(var));
    if (*d < 2)
        throw std::invalid_argument("multilinearize: degree in X" + std::to_string(var) + " is below 2");

    const int fresh = p.alphabet() + 1;
    NCPoly out(fresh);
    for (const auto& [w, c] : p.terms()) {
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] == var)
                slots.push_back(i);
        const std::size_t full = (std::size_t{1} << slots.size()) - 1;
        auto letters = w.letters();
        for (std::size_t mask = 1; mask < full; ++mask) {
            auto next = letters;
            for (std::size_t j = 0; j < slots.size(); ++j)
                if ((mask >> j) & 1U)
                    next[slots[j]] = fresh;
            out.add(Word(std::span<const int>(next)), c);
        }
    }
    return out;
}

namespace {

// x_j d/dx_{j+1} applied to g, j 1-based, in R^{nvars}.
Polynomial witness_field(int j, const Polynomial& g)
{
    const int n = g.nvars();
    auto dg = g.derivative(j);  // d/dx_{j+1} with 0-based index j
    return Polynomial::variable(n, j - 1) * dg;
}

std::size_t arity(const NCPoly& q)
{
    auto md = q.multidegree();
    if (!md)
        throw std::invalid_argument("witness: polynomial is not homogeneous");
    std::size_t p = 0;
    for (std::size_t k = 0; k < md->size(); ++k) {
        if ((*md)[k] != 1)
            throw std::invalid_argument("witness: variable X" + std::to_string(k + 1) +
                                        " does not have degree exactly 1");
        ++p;
    }
    return p;
}

}  // namespace

Polynomial witness_action(const NCPoly& q, const Perm& sigma)
{
    const std::size_t p = arity(q);
    if (static_cast<std::size_t>(sigma.order()) != p)
        throw std::invalid_argument("witness_action: permutation order mismatch");
    const int n = static_cast<int>(p) + 1;
    // position[k] = j with sigma_j = k, i.e. X_k acts as x_j d/dx_{j+1}.
    std::vector<int> position(p + 1);
    for (int j = 1; j <= sigma.order(); ++j)
        position[static_cast<std::size_t>(sigma(j))] = j;

    Polynomial psi = Polynomial::variable(n, n - 1);
    Polynomial total(n);
    for (const auto& [w, c] : q.terms()) {
        Polynomial g = psi;
        for (std::size_t i = w.size(); i-- > 0 && !g.is_zero();)
            g = witness_field(position[static_cast<std::size_t>(w[i])], g);
        total += g * c;
    }
    return total;
}

std::map<Perm, Rational> witness_coefficients(const NCPoly& q)
{
    std::map<Perm, Rational> out;
    if (q.is_zero())
        return out;
    const std::size_t p = arity(q);
    const int n = static_cast<int>(p) + 1;
    Exponents x1(static_cast<std::size_t>(n), 0);
    x1[0] = 1;
    for (const auto& sigma : all_perms(static_cast<int>(p))) {
        auto action = witness_action(q, sigma);
        auto b = action.coefficient(x1);
        if (action.terms().size() > (b == 0 ? 0U : 1U))
            throw std::logic_error("witness action produced terms other than x1");
        if (b != 0)
            out.emplace(sigma, b);
    }
    return out;
}

TrivialityResult is_trivial(const NCPoly& p)
{
    TrivialityResult result;
    struct Item {
        std::vector<int> origin;
        NCPoly poly;
    };
    std::deque<Item> work;
    for (auto& comp : homogeneous_split(p)) {
        ++result.components;
        work.push_back({comp.multidegree, std::move(comp.poly)});
    }

    while (!work.empty()) {
        Item item = std::move(work.front());
        work.pop_front();
        for (auto& comp : homogeneous_split(item.poly)) {
            const auto& md = comp.multidegree;
            auto heavy = std::find_if(md.begin(), md.end(), [](int d) { return d >= 2; });
            if (heavy != md.end()) {
                int var = static_cast<int>(heavy - md.begin()) + 1;
                work.push_back({item.origin, multilinearize(comp.poly, var)});
                continue;
            }
            // Multilinear in the variables that occur; relabel them 1..p.
            std::vector<int> relabel;
            std::vector<int> to_new(md.size() + 1, 0);
            for (std::size_t k = 0; k < md.size(); ++k)
                if (md[k] == 1) {
                    relabel.push_back(static_cast<int>(k) + 1);
                    to_new[k + 1] = static_cast<int>(relabel.size());
                }
            NCPoly q(static_cast<int>(relabel.size()));
            for (const auto& [w, c] : comp.poly.terms()) {
                std::vector<int> letters;
                for (std::size_t i = 0; i < w.size(); ++i)
                    letters.push_back(to_new[static_cast<std::size_t>(w[i])]);
                q.add(Word(std::span<const int>(letters)), c);
            }
            ++result.multilinear_evaluations;
            auto coeffs = witness_coefficients(q);
            if (!coeffs.empty() && result.trivial) {
                result.trivial = false;
                const auto& [sigma, b] = *coeffs.begin();
                result.certificate = TrivialityCertificate{item.origin, comp.poly, relabel, sigma, b};
                return result;
            }
        }
    }
    return result;
}

}  // namespace liebox
