#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the library's expansion code: brackets are expanded by the definition
// [a,b] = ab - ba on plain integer-coefficient maps.

#include "liebox/free_lie.hpp"

#include <map>
#include <random>
#include <vector>

namespace oracle {

using Letters = std::vector<int>;
using Sum = std::map<Letters, long>;

inline void add(Sum& s, const Letters& w, long c)
{
    if (c == 0)
        return;
    auto& v = s[w];
    v += c;
    if (v == 0)
        s.erase(w);
}

inline Sum product(const Sum& a, const Sum& b)
{
    Sum out;
    for (const auto& [u, cu] : a)
        for (const auto& [v, cv] : b) {
            Letters w = u;
            w.insert(w.end(), v.begin(), v.end());
            add(out, w, cu * cv);
        }
    return out;
}

inline Sum bracket(const Sum& a, const Sum& b)
{
    Sum out = product(a, b);
    for (const auto& [w, c] : product(b, a))
        add(out, w, -c);
    return out;
}

inline Sum letter(int a) { return Sum{{Letters{a}, 1}}; }

/// [w_1,[w_2,...,[w_{l-1},w_l]]] by repeated brackets, innermost first.
inline Sum nested(const Letters& w)
{
    Sum acc = letter(w.back());
    for (std::size_t i = w.size() - 1; i-- > 0;)
        acc = bracket(letter(w[i]), acc);
    return acc;
}

/// The same element as a library WordSum, for comparisons.
inline liebox::WordSum to_word_sum(const Sum& s)
{
    liebox::WordSum out;
    for (const auto& [w, c] : s)
        out.add(liebox::Word(std::span<const int>(w)), liebox::Rational(c));
    return out;
}

inline Letters letters_of(const liebox::Word& w) { return w.letters(); }

/// Every word of length len over {1..m}.
inline std::vector<liebox::Word> all_words(int m, int len)
{
    std::vector<liebox::Word> out{liebox::Word{}};
    for (int k = 0; k < len; ++k) {
        std::vector<liebox::Word> next;
        for (const auto& w : out)
            for (int a = 1; a <= m; ++a) {
                auto v = w;
                v.push_back(a);
                next.push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace oracle
