#ifndef DENSIC_POLYNOMIAL_HPP
#define DENSIC_POLYNOMIAL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "densic/matrix.hpp"
#include "densic/rational.hpp"

namespace densic {

// Rational polynomial, coefficients lowest degree first. The empty
// coefficient vector is the zero polynomial.
struct Polynomial {
    std::vector<Rat> coeffs;

    Polynomial() = default;
    explicit Polynomial(std::vector<Rat> c) : coeffs(std::move(c)) { trim(); }

    static Polynomial constant(const Rat& c) {
        return c == 0 ? Polynomial() : Polynomial({c});
    }
    // x - r
    static Polynomial linear_root(const Rat& r) { return Polynomial({-r, Rat(1)}); }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    // degree of the zero polynomial is -1 by convention
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    const Rat& leading() const {
        if (is_zero()) throw std::domain_error("zero polynomial has no leading coefficient");
        return coeffs.back();
    }

    Rat operator()(const Rat& x) const {
        Rat acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.coeffs.size()) c[i] += a.coeffs[i];
        if (i < b.coeffs.size()) c[i] += b.coeffs[i];
    }
    return Polynomial(std::move(c));
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.coeffs.size()) c[i] += a.coeffs[i];
        if (i < b.coeffs.size()) c[i] -= b.coeffs[i];
    }
    return Polynomial(std::move(c));
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rat> c(a.coeffs.size() + b.coeffs.size() - 1);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            if (b.coeffs[j] != 0) c[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return Polynomial(std::move(c));
}

// p = quotient*(x - r) + remainder, remainder = p(r).
inline std::pair<Polynomial, Rat> divide_linear(const Polynomial& p, const Rat& r) {
    if (p.is_zero()) throw std::domain_error("divide_linear of the zero polynomial");
    std::vector<Rat> q(p.coeffs.size() - 1);
    Rat carry = 0;
    for (std::size_t i = p.coeffs.size(); i-- > 1;) {
        carry = carry * r + p.coeffs[i];
        q[i - 1] = carry;
    }
    Rat rem = carry * r + p.coeffs[0];
    return {Polynomial(std::move(q)), rem};
}

// Euclidean division over the rationals.
inline std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& num,
                                                     const Polynomial& div) {
    if (div.is_zero()) throw std::domain_error("polynomial division by zero");
    Polynomial rem = num;
    if (num.degree() < div.degree()) return {Polynomial(), rem};
    std::vector<Rat> q(static_cast<std::size_t>(num.degree() - div.degree()) + 1);
    const Rat& lead = div.leading();
    while (!rem.is_zero() && rem.degree() >= div.degree()) {
        std::size_t shift = static_cast<std::size_t>(rem.degree() - div.degree());
        Rat factor = rem.leading() / lead;
        q[shift] = factor;
        for (std::size_t i = 0; i < div.coeffs.size(); ++i)
            rem.coeffs[shift + i] -= factor * div.coeffs[i];
        rem.trim();
    }
    return {Polynomial(std::move(q)), rem};
}

// true iff p divides q exactly (p nonzero).
inline bool poly_divides(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero()) throw std::domain_error("divisibility by the zero polynomial");
    return poly_divmod(q, p).second.is_zero();
}

// p(s*x)
inline Polynomial scale_argument(const Polynomial& p, const Rat& s) {
    std::vector<Rat> c(p.coeffs.size());
    Rat power = 1;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        c[i] = p.coeffs[i] * power;
        power *= s;
    }
    return Polynomial(std::move(c));
}

// n-th cyclotomic polynomial, by exact division of x^n - 1 by the proper
// cyclotomic factors. n stays tiny here (phi(n) <= kernel dimension).
inline Polynomial cyclotomic(std::uint64_t n) {
    if (n == 0) throw std::domain_error("cyclotomic index must be positive");
    std::vector<Rat> xn(static_cast<std::size_t>(n) + 1);
    xn[0] = -1;
    xn.back() = 1;
    Polynomial result((std::move(xn)));
    for (std::uint64_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        auto [q, r] = poly_divmod(result, cyclotomic(d));
        if (!r.is_zero()) throw std::logic_error("cyclotomic division left a remainder");
        result = std::move(q);
    }
    return result;
}

// Exact Horner evaluation of p at a square matrix.
inline Matrix eval_poly_at_matrix(const Polynomial& p, const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("polynomial of a non-square matrix");
    Matrix acc(m.rows, m.rows);
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        acc = acc * m;
        if (p.coeffs[i] != 0)
            for (std::size_t j = 0; j < m.rows; ++j) acc.at(j, j) += p.coeffs[i];
    }
    return acc;
}

namespace detail {

// Incremental search for the first linear dependence in a stream of
// rational vectors. Rows are kept in reduced echelon form together with
// their expression in terms of the fed vectors.
class DependencyFinder {
  public:
    explicit DependencyFinder(std::size_t dim) : dim_(dim) {}

    // Feeds the next vector. Returns true when it is dependent on the
    // previous ones and fills `combo` with coefficients so that
    // v = sum combo[i] * fed[i].
    bool feed(Vec v, std::vector<Rat>& combo) {
        // coords expresses the running residual in fed-vector coordinates
        std::vector<Rat> coords(count_ + 1, Rat(0));
        coords[count_] = 1;
        for (const Row& row : rows_) {
            const Rat c = v[row.pivot];
            if (c == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j)
                if (row.vec[j] != 0) v[j] -= c * row.vec[j];
            for (std::size_t j = 0; j < row.coords.size(); ++j)
                if (row.coords[j] != 0) coords[j] -= c * row.coords[j];
        }
        std::size_t pivot = dim_;
        for (std::size_t j = 0; j < dim_; ++j)
            if (v[j] != 0) {
                pivot = j;
                break;
            }
        if (pivot == dim_) {
            // 0 = sum coords[j] fed_j with coords[count_] = 1
            combo.assign(count_, Rat(0));
            for (std::size_t j = 0; j < count_; ++j) combo[j] = -coords[j];
            return true;
        }
        Rat inv = Rat(1) / v[pivot];
        for (Rat& x : v) x *= inv;
        for (Rat& x : coords) x *= inv;
        rows_.push_back(Row{pivot, std::move(v), std::move(coords)});
        ++count_;
        return false;
    }

    std::size_t fed() const { return count_; }

  private:
    struct Row {
        std::size_t pivot;
        Vec vec;
        std::vector<Rat> coords;
    };
    std::size_t dim_;
    std::size_t count_ = 0;
    std::vector<Row> rows_;
};

}  // namespace detail

// Monic minimal polynomial of a square matrix: first linear dependence
// among I, M, M^2, ... in the entry space.
inline Polynomial minimal_polynomial(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("minimal polynomial of a non-square matrix");
    std::size_t n = m.rows;
    detail::DependencyFinder finder(n * n);
    Matrix power = Matrix::identity(n);
    std::vector<Rat> combo;
    for (std::size_t deg = 0; deg <= n; ++deg) {
        if (finder.feed(power.entries, combo)) {
            std::vector<Rat> coeffs(combo.size() + 1);
            for (std::size_t i = 0; i < combo.size(); ++i) coeffs[i] = -combo[i];
            coeffs.back() = 1;
            return Polynomial(std::move(coeffs));
        }
        power = power * m;
    }
    throw std::logic_error("no annihilating polynomial up to the dimension");
}

// Monic minimal annihilator of v under the linear map `apply`:
// the lowest-degree monic g with g(M) v = 0. Degree is at most dim.
inline Polynomial krylov_annihilator(std::size_t dim,
                                     const std::function<Vec(const Vec&)>& apply,
                                     const Vec& v) {
    detail::DependencyFinder finder(dim);
    Vec w = v;
    std::vector<Rat> combo;
    for (std::size_t deg = 0; deg <= dim; ++deg) {
        if (finder.feed(w, combo)) {
            std::vector<Rat> coeffs(combo.size() + 1);
            for (std::size_t i = 0; i < combo.size(); ++i) coeffs[i] = -combo[i];
            coeffs.back() = 1;
            return Polynomial(std::move(coeffs));
        }
        w = apply(w);
    }
    throw std::logic_error("no annihilating polynomial up to the dimension");
}

}  // namespace densic

#endif
