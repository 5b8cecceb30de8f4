#ifndef DENSIC_MATRIX_HPP
#define DENSIC_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "densic/rational.hpp"

namespace densic {

using Vec = std::vector<Rat>;

// Dense rational matrix, row major. Sizes here are small (kernel systems);
// no sparse representation is attempted.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rat> entries;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    Matrix(std::size_t r, std::size_t c, std::vector<Rat> e)
        : rows(r), cols(c), entries(std::move(e)) {
        if (entries.size() != rows * cols)
            throw std::invalid_argument("matrix entry count does not match shape");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    Rat& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool square() const { return rows == cols; }

    friend bool operator==(const Matrix& a, const Matrix& b) = default;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix addition shape mismatch");
    Matrix r(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        r.entries[i] = a.entries[i] + b.entries[i];
    return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix subtraction shape mismatch");
    Matrix r(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        r.entries[i] = a.entries[i] - b.entries[i];
    return r;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t l = 0; l < a.cols; ++l) {
            const Rat& ail = a.at(i, l);
            if (ail == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                if (b.at(l, j) == 0) continue;
                r.at(i, j) += ail * b.at(l, j);
            }
        }
    return r;
}

inline Matrix operator*(const Rat& s, const Matrix& a) {
    Matrix r(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) r.entries[i] = s * a.entries[i];
    return r;
}

inline Vec mat_vec(const Matrix& a, const Vec& v) {
    if (a.cols != v.size()) throw std::invalid_argument("matrix/vector shape mismatch");
    Vec r(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Rat acc = 0;
        for (std::size_t j = 0; j < a.cols; ++j)
            if (a.at(i, j) != 0) acc += a.at(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

inline bool is_zero(const Matrix& a) {
    for (const Rat& e : a.entries)
        if (e != 0) return false;
    return true;
}

// M^e by repeated squaring; M^0 is the identity.
inline Matrix mat_pow(const Matrix& m, std::uint64_t e) {
    if (!m.square()) throw std::invalid_argument("mat_pow requires a square matrix");
    Matrix result = Matrix::identity(m.rows);
    Matrix base = m;
    while (e) {
        if (e & 1) result = result * base;
        if (e >>= 1) base = base * base;
    }
    return result;
}

}  // namespace densic

#endif
