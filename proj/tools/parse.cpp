#include "parse.hpp"

#include "liebox/rational.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace liebox::cli {

namespace {

struct Cursor {
    std::string s;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool done()
    {
        skip();
        return pos >= s.size();
    }
    char peek()
    {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    std::string digits()
    {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        return s.substr(start, pos - start);
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("polynomial \"" + s + "\": " + what + " at position " + std::to_string(pos));
    }
};

Polynomial parse_factor(Cursor& c, int nvars)
{
    char ch = c.peek();
    if (ch == 'x') {
        ++c.pos;
        auto idx = c.digits();
        if (idx.empty())
            c.fail("expected a variable index");
        int i = std::stoi(idx);
        if (i < 1 || i > nvars)
            c.fail("variable x" + idx + " out of range");
        int power = 1;
        if (c.peek() == '^') {
            ++c.pos;
            auto e = c.digits();
            if (e.empty())
                c.fail("expected an exponent");
            power = std::stoi(e);
        }
        Exponents exps(static_cast<std::size_t>(nvars), 0);
        exps[static_cast<std::size_t>(i - 1)] = power;
        return Polynomial::monomial(exps, Rational(1));
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::string num = c.digits();
        if (c.peek() == '/') {
            ++c.pos;
            auto den = c.digits();
            if (den.empty())
                c.fail("expected a denominator");
            num += "/" + den;
        }
        return Polynomial::constant(nvars, parse_rational(num));
    }
    c.fail("unexpected character");
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, int nvars)
{
    Cursor c{text};
    Polynomial out(nvars);
    if (c.done())
        c.fail("empty expression");
    bool first = true;
    while (!c.done()) {
        Rational sign(1);
        char ch = c.peek();
        if (ch == '+' || ch == '-') {
            sign = ch == '-' ? -1 : 1;
            ++c.pos;
        } else if (!first) {
            c.fail("expected + or -");
        }
        Polynomial term = parse_factor(c, nvars);
        while (c.peek() == '*') {
            ++c.pos;
            term = term * parse_factor(c, nvars);
        }
        out += term * sign;
        first = false;
    }
    return out;
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::invalid_argument(path.string() + ": not a number: \"" + cell + "\"");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument(path.string() + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::invalid_argument(path.string() + ": no data");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

Eigen::VectorXd to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace liebox::cli
