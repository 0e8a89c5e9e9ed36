#pragma once

// Words over a finite alphabet {1..m}, permutations of positions, and the
// coefficients pi_l(sigma) of the associative expansion of a right-nested
// commutator:
//
//   [A_{w_1},[A_{w_2},...[A_{w_{l-1}},A_{w_l}]...]]
//       = sum_{sigma} pi_l(sigma) A_{w_sigma(1)} ... A_{w_sigma(l)}.
//
// Positions are 1-based. The recursion is stated on 0-based positions
// 0..l; shifted to 1-based positions 1..l+1 it reads
//
//   pi_{l+1}(1, sigma + 1) =  pi_l(sigma)
//   pi_{l+1}(sigma + 1, 1) = -pi_l(sigma)
//   pi_{l+1}(tau)          =  0  when tau(1) != 1 and tau(l+1) != 1,
//
// with pi_1(1) = 1. Here "sigma + 1" adds one to every image.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace liebox {

inline constexpr int kDefaultMaxPiOrder = 8;
// Upper limit accepted for any configured max order (10! table entries).
inline constexpr int kHardMaxPiOrder = 10;

/// A finite word over the alphabet {1..255}. The empty word is allowed as a
/// value (it is the neutral suffix in X_{vw} with |w| = 0) but most
/// operations require |w| >= 1.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> letters);
    explicit Word(std::span<const int> letters);

    /// "1212", "1,12,3" (comma form needed for letters >= 10) or "a","b"
    /// style single lowercase letters mapped to 1,2,...
    static Word parse(std::string_view text);
    static Word repeat(int letter, std::size_t count);

    std::size_t size() const noexcept { return bytes_.size(); }
    bool empty() const noexcept { return bytes_.empty(); }
    int operator[](std::size_t pos) const noexcept {
        return static_cast<unsigned char>(bytes_[pos]);
    }
    int front() const noexcept { return (*this)[0]; }
    int back() const noexcept { return (*this)[size() - 1]; }

    std::vector<int> letters() const;
    int max_letter() const noexcept;
    void push_back(int letter);
    Word subword(std::size_t pos, std::size_t count) const;
    Word reversed() const;

    /// Throws std::invalid_argument if a letter exceeds `alphabet`.
    void check_alphabet(int alphabet) const;

    std::string str() const;

    friend Word operator+(const Word& a, const Word& b);
    friend auto operator<=>(const Word&, const Word&) = default;
    friend bool operator==(const Word&, const Word&) = default;

private:
    // Letters stored as bytes: short words stay in the small-string buffer.
    std::string bytes_;
};

class Perm {
public:
    /// `images` lists sigma(1), ..., sigma(l). Throws std::invalid_argument
    /// unless it is a bijection of {1..l}.
    explicit Perm(std::vector<int> images);

    static Perm identity(int order);
    /// "231" or "2,3,1".
    static Perm parse(std::string_view text);
    /// Inverse of rank(): the r-th permutation in lexicographic order.
    static Perm unrank(int order, std::size_t r);

    int order() const noexcept { return static_cast<int>(images_.size()); }
    int operator()(int position) const { return images_.at(position - 1); }
    const std::vector<int>& images() const noexcept { return images_; }

    /// sigma_l ... sigma_1, the image sequence read backwards.
    Perm reversed() const;
    std::size_t rank() const;
    std::string str() const;

    friend auto operator<=>(const Perm&, const Perm&) = default;
    friend bool operator==(const Perm&, const Perm&) = default;

private:
    std::vector<int> images_;
};

/// All permutations of {1..order} in lexicographic order.
std::vector<Perm> all_perms(int order);

std::size_t factorial(int n);

/// w_{sigma(1)} ... w_{sigma(l)}. Throws std::invalid_argument on length
/// mismatch.
Word apply_perm(const Perm& sigma, const Word& w);

struct PiEntry {
    Perm sigma;
    int coefficient;
};

/// Complete coefficient table for one order, indexed by lexicographic rank.
class PiTable {
public:
    explicit PiTable(int order);

    int order() const noexcept { return order_; }
    int coefficient(const Perm& sigma) const;
    int coefficient_by_rank(std::size_t rank) const { return by_rank_.at(rank); }
    std::size_t size() const noexcept { return by_rank_.size(); }
    /// Nonzero entries, lexicographic in sigma. Always 2^{l-1} of them.
    const std::vector<PiEntry>& support() const noexcept { return support_; }

private:
    int order_;
    std::vector<std::int8_t> by_rank_;
    std::vector<PiEntry> support_;
};

/// The recursion evaluated directly on sigma, without tables.
int pi_recursive(const Perm& sigma);

/// Memoized table; built once per order, safe for concurrent callers.
/// Throws std::out_of_range unless 1 <= order <= max_order <= kHardMaxPiOrder.
const PiTable& pi_table(int order, int max_order = kDefaultMaxPiOrder);

int pi_coefficient(int order, const Perm& sigma, int max_order = kDefaultMaxPiOrder);

}  // namespace liebox
