#include "liebox/perm_words.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace liebox {

namespace {

std::vector<int> parse_int_list(std::string_view text)
{
    std::vector<int> out;
    bool has_comma = text.find(',') != std::string_view::npos;
    if (has_comma) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto next = text.find(',', pos);
            if (next == std::string_view::npos)
                next = text.size();
            auto token = text.substr(pos, next - pos);
            int value = 0;
            bool any = false;
            for (char c : token) {
                if (c == ' ')
                    continue;
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw std::invalid_argument("bad list element in '" + std::string(text) + "'");
                value = value * 10 + (c - '0');
                any = true;
            }
            if (!any)
                throw std::invalid_argument("empty list element in '" + std::string(text) + "'");
            out.push_back(value);
            pos = next + 1;
        }
        return out;
    }
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            out.push_back(c - '0');
        else if (c >= 'a' && c <= 'z')
            out.push_back(c - 'a' + 1);
        else if (c != ' ')
            throw std::invalid_argument("bad character in '" + std::string(text) + "'");
    }
    return out;
}

}  // namespace

Word::Word(std::initializer_list<int> letters) : Word(std::span<const int>(letters.begin(), letters.size())) {}

Word::Word(std::span<const int> letters)
{
    bytes_.reserve(letters.size());
    for (int letter : letters)
        push_back(letter);
}

Word Word::parse(std::string_view text)
{
    auto letters = parse_int_list(text);
    return Word(std::span<const int>(letters));
}

Word Word::repeat(int letter, std::size_t count)
{
    Word w;
    for (std::size_t i = 0; i < count; ++i)
        w.push_back(letter);
    return w;
}

std::vector<int> Word::letters() const
{
    std::vector<int> out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = (*this)[i];
    return out;
}

int Word::max_letter() const noexcept
{
    int m = 0;
    for (std::size_t i = 0; i < size(); ++i)
        m = std::max(m, (*this)[i]);
    return m;
}

void Word::push_back(int letter)
{
    if (letter < 1 || letter > 255)
        throw std::invalid_argument("word letter out of range: " + std::to_string(letter));
    bytes_.push_back(static_cast<char>(static_cast<unsigned char>(letter)));
}

Word Word::subword(std::size_t pos, std::size_t count) const
{
    Word w;
    w.bytes_ = bytes_.substr(pos, count);
    return w;
}

Word Word::reversed() const
{
    Word w = *this;
    std::reverse(w.bytes_.begin(), w.bytes_.end());
    return w;
}

void Word::check_alphabet(int alphabet) const
{
    if (max_letter() > alphabet)
        throw std::invalid_argument("word " + str() + " uses a letter outside {1.." + std::to_string(alphabet) + "}");
}

std::string Word::str() const
{
    bool wide = max_letter() >= 10;
    std::string out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (wide && i > 0)
            out += ',';
        out += std::to_string((*this)[i]);
    }
    return out;
}

Word operator+(const Word& a, const Word& b)
{
    Word w;
    w.bytes_.reserve(a.size() + b.size());
    w.bytes_ = a.bytes_;
    w.bytes_ += b.bytes_;
    return w;
}

Perm::Perm(std::vector<int> images) : images_(std::move(images))
{
    std::vector<bool> seen(images_.size() + 1, false);
    for (int v : images_) {
        if (v < 1 || v > static_cast<int>(images_.size()) || seen[v])
            throw std::invalid_argument("not a permutation: " + str());
        seen[v] = true;
    }
}

Perm Perm::identity(int order)
{
    std::vector<int> images(order);
    std::iota(images.begin(), images.end(), 1);
    return Perm(std::move(images));
}

Perm Perm::parse(std::string_view text) { return Perm(parse_int_list(text)); }

Perm Perm::unrank(int order, std::size_t r)
{
    std::vector<int> pool(order);
    std::iota(pool.begin(), pool.end(), 1);
    std::vector<int> images;
    images.reserve(order);
    for (int k = order; k >= 1; --k) {
        std::size_t block = factorial(k - 1);
        std::size_t idx = r / block;
        r %= block;
        images.push_back(pool.at(idx));
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return Perm(std::move(images));
}

Perm Perm::reversed() const
{
    std::vector<int> images(images_.rbegin(), images_.rend());
    return Perm(std::move(images));
}

std::size_t Perm::rank() const
{
    std::size_t r = 0;
    int n = order();
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            smaller += images_[j] < images_[i];
        r += smaller * factorial(n - 1 - i);
    }
    return r;
}

std::string Perm::str() const
{
    bool wide = order() >= 10;
    std::string out;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (wide && i > 0)
            out += ',';
        out += std::to_string(images_[i]);
    }
    return out;
}

std::vector<Perm> all_perms(int order)
{
    std::vector<int> images(order);
    std::iota(images.begin(), images.end(), 1);
    std::vector<Perm> out;
    out.reserve(factorial(order));
    do {
        out.emplace_back(images);
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

std::size_t factorial(int n)
{
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= static_cast<std::size_t>(i);
    return f;
}

Word apply_perm(const Perm& sigma, const Word& w)
{
    if (static_cast<std::size_t>(sigma.order()) != w.size())
        throw std::invalid_argument("apply_perm: permutation of order " + std::to_string(sigma.order()) +
                                    " applied to word of length " + std::to_string(w.size()));
    Word out;
    for (int pos : sigma.images())
        out.push_back(w[pos - 1]);
    return out;
}

int pi_recursive(const Perm& sigma)
{
    // Peel position 1 off repeatedly: the value 1 must sit at either end.
    std::vector<int> images = sigma.images();
    int sign = 1;
    while (images.size() > 1) {
        if (images.front() == 1) {
            images.erase(images.begin());
        } else if (images.back() == 1) {
            images.pop_back();
            sign = -sign;
        } else {
            return 0;
        }
        for (int& v : images)
            --v;
    }
    return sign;
}

PiTable::PiTable(int order) : order_(order)
{
    if (order < 1 || order > kHardMaxPiOrder)
        throw std::out_of_range("pi table order out of range: " + std::to_string(order));
    std::size_t n = factorial(order);
    by_rank_.assign(n, 0);
    std::vector<int> images(order);
    std::iota(images.begin(), images.end(), 1);
    std::size_t r = 0;
    do {
        Perm sigma(images);
        int c = pi_recursive(sigma);
        by_rank_[r++] = static_cast<std::int8_t>(c);
        if (c != 0)
            support_.push_back({std::move(sigma), c});
    } while (std::next_permutation(images.begin(), images.end()));
}

int PiTable::coefficient(const Perm& sigma) const
{
    if (sigma.order() != order_)
        throw std::invalid_argument("permutation order " + std::to_string(sigma.order()) +
                                    " does not match table order " + std::to_string(order_));
    return by_rank_[sigma.rank()];
}

const PiTable& pi_table(int order, int max_order)
{
    if (max_order < 1 || max_order > kHardMaxPiOrder)
        throw std::out_of_range("configured max order out of range: " + std::to_string(max_order));
    if (order < 1 || order > max_order)
        throw std::out_of_range("order " + std::to_string(order) + " outside 1.." + std::to_string(max_order));

    static std::array<std::once_flag, kHardMaxPiOrder + 1> once;
    static std::array<std::unique_ptr<PiTable>, kHardMaxPiOrder + 1> tables;
    std::call_once(once[order], [order] { tables[order] = std::make_unique<PiTable>(order); });
    return *tables[order];
}

int pi_coefficient(int order, const Perm& sigma, int max_order)
{
    return pi_table(order, max_order).coefficient(sigma);
}

}  // namespace liebox
