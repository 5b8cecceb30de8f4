#ifndef DENSIC_ASYMPTOTICS_HPP
#define DENSIC_ASYMPTOTICS_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "densic/automaton.hpp"
#include "densic/kernel.hpp"
#include "densic/polynomial.hpp"
#include "densic/rational.hpp"

namespace densic {

// Census data of a kernel system: the least period a making every
// peripheral eigenvalue direction converge along k^(an+j), and the exact
// growth constants c[j][i] with
//   sum over |w| = an+j of f_i(w)  =  c[j][i] * k^(an+j) + o(k^(an+j)).
// q0 is the cofactor of (x - k^a) in the minimal annihilator of v0 under
// B^a; lambda = q0(k^a). The spectral projector is materialized on demand.
struct AsymptoticTable {
    std::uint64_t a = 1;
    std::vector<Vec> c;  // c[j], one column per residue, c[j][i] = c_{i+1,j}
    Polynomial q0;
    Rat lambda;

    const Rat& at(std::size_t state, std::uint64_t j) const { return c[j][state]; }

    bool column_zero(std::size_t state) const {
        for (const Vec& col : c)
            if (col[state] != 0) return false;
        return true;
    }

    // Spectral projector onto the k^a eigenspace of B^a, built from the
    // full minimal polynomial so that P*P = P and B^a P = k^a P hold as
    // matrix identities. Cubic-plus in the dimension; intended for small
    // systems and tests. The stored census columns are its images:
    // c_j = P B^j v0 / k^j.
    Matrix projector(const KernelSystem& ks) const {
        Matrix ba = mat_pow(ks.b, a);
        Polynomial m = minimal_polynomial(ba);
        Rat ka = Rat(int_pow(Int(ks.k), a));
        auto [quot, rem] = divide_linear(m, ka);
        if (rem != 0) throw std::logic_error("k^a is not an eigenvalue of B^a");
        Rat lam = quot(ka);
        if (lam == 0) throw std::logic_error("peripheral eigenvalue not semisimple");
        return (Rat(1) / lam) * eval_poly_at_matrix(quot, ba);
    }
};

namespace detail {

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

// prod over primes p <= d of p^floor(log_p d)
inline Int period_bound(std::size_t d) {
    Int bound = 1;
    std::vector<bool> composite(d + 1, false);
    for (std::size_t p = 2; p <= d; ++p) {
        if (composite[p]) continue;
        for (std::size_t q = p * p; q <= d; q += p) composite[q] = true;
        Int pw = 1;
        while (pw * p <= d) pw *= p;
        bound *= pw;
    }
    return bound;
}

}  // namespace detail

// Least a >= 1 with omega^a = 1 for every eigenvalue k*omega of B of
// modulus k, i.e. the lcm of all n with phi(n) <= d whose cyclotomic
// polynomial divides m(kx), m the minimal polynomial of B. Since B has
// row sums k, its peripheral spectrum is the union over terminal
// strongly connected components of k times the roots of unity of the
// component's cyclicity, so the lcm is computed from the transition
// graph. Divides the worst-case bound prod_{p<=d} p^floor(log_p d).
inline std::uint64_t period(const KernelSystem& ks) {
    if (ks.d == 0 || ks.trans.size() != ks.d || ks.v0.size() != ks.d)
        throw std::logic_error("malformed kernel system");
    // Tarjan SCC, iterative.
    std::size_t d = ks.d;
    std::vector<std::size_t> comp(d, SIZE_MAX), low(d), num(d, SIZE_MAX), scc_stack;
    std::vector<bool> on_stack(d, false);
    std::size_t counter = 0, n_comp = 0;
    struct Frame {
        std::size_t state;
        std::uint64_t next_digit;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < d; ++root) {
        if (num[root] != SIZE_MAX) continue;
        call.push_back({root, 0});
        num[root] = low[root] = counter++;
        scc_stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next_digit < ks.k) {
                std::size_t t = ks.trans[f.state][f.next_digit++];
                if (num[t] == SIZE_MAX) {
                    num[t] = low[t] = counter++;
                    scc_stack.push_back(t);
                    on_stack[t] = true;
                    call.push_back({t, 0});
                } else if (on_stack[t] && num[t] < low[f.state]) {
                    low[f.state] = num[t];
                }
            } else {
                if (low[f.state] == num[f.state]) {
                    std::size_t s;
                    do {
                        s = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[s] = false;
                        comp[s] = n_comp;
                    } while (s != f.state);
                    ++n_comp;
                }
                std::size_t done = f.state;
                call.pop_back();
                if (!call.empty() && low[done] < low[call.back().state])
                    low[call.back().state] = low[done];
            }
        }
    }
    std::vector<bool> terminal(n_comp, true);
    for (std::size_t s = 0; s < d; ++s)
        for (std::uint64_t x = 0; x < ks.k; ++x)
            if (comp[ks.trans[s][x]] != comp[s]) terminal[comp[s]] = false;
    // cyclicity of each terminal component: gcd of level differences
    // along its internal edges, levels from a BFS inside the component
    std::uint64_t a = 1;
    std::vector<long long> level(d, -1);
    for (std::size_t root = 0; root < d; ++root) {
        if (!terminal[comp[root]] || level[root] >= 0) continue;
        std::vector<std::size_t> queue{root};
        level[root] = 0;
        long long g = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::size_t s = queue[head];
            for (std::uint64_t x = 0; x < ks.k; ++x) {
                std::size_t t = ks.trans[s][x];
                if (level[t] < 0) {
                    level[t] = level[s] + 1;
                    queue.push_back(t);
                } else {
                    g = std::gcd(g, level[s] + 1 - level[t]);
                }
            }
        }
        if (g == 0) g = 1;  // unreachable for finite strongly connected parts
        a = std::lcm(a, static_cast<std::uint64_t>(g < 0 ? -g : g));
    }
    Int bound = detail::period_bound(ks.d);
    if (bound % a != 0)
        throw std::logic_error("computed period escapes the prime-power bound");
    return a;
}

// Reference implementation of the period via exact cyclotomic
// divisibility on the minimal polynomial of B; quadratic-plus in the
// dimension, meant for cross-checks on small systems.
inline std::uint64_t period_cyclotomic(const KernelSystem& ks) {
    Polynomial m = minimal_polynomial(ks.b);
    Polynomial g = scale_argument(m, Rat(ks.k));
    std::uint64_t a = 1;
    std::uint64_t limit = 2 * static_cast<std::uint64_t>(ks.d) * ks.d + 2;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (detail::euler_phi(n) > ks.d) continue;
        if (!poly_divides(cyclotomic(n), g)) continue;
        a = std::lcm(a, n);
    }
    return a;
}

// Exact census constants for period a (any positive multiple of the
// minimal period gives the same values on its shared residues).
inline AsymptoticTable census_constants(const KernelSystem& ks, std::uint64_t a) {
    if (a == 0) throw std::invalid_argument("census period must be positive");
    auto apply_ba = [&](const Vec& w) {
        Vec r = w;
        for (std::uint64_t i = 0; i < a; ++i) r = ks.apply_b(r);
        return r;
    };
    Polynomial qv = krylov_annihilator(ks.d, apply_ba, ks.v0);
    Rat ka = Rat(int_pow(Int(ks.k), a));
    AsymptoticTable table;
    table.a = a;
    if (qv.degree() >= 1) {
        auto [quot, rem] = divide_linear(qv, ka);
        if (rem == 0) {
            table.q0 = quot;
        } else {
            // v0 has no k^a-eigencomponent; every census constant is zero.
            table.q0 = qv;
        }
    } else {
        table.q0 = qv;  // v0 = 0
    }
    table.lambda = table.q0(ka);
    if (table.lambda == 0)
        throw std::logic_error("peripheral eigenvalue not semisimple");
    // c_0 = q0(B^a) v0 / lambda, via Horner on the orbit.
    Vec c0(ks.d, Rat(0));
    for (std::size_t i = table.q0.coeffs.size(); i-- > 0;) {
        c0 = apply_ba(c0);
        if (table.q0.coeffs[i] != 0)
            for (std::size_t s = 0; s < ks.d; ++s) c0[s] += table.q0.coeffs[i] * ks.v0[s];
    }
    for (Rat& x : c0) x /= table.lambda;
    table.c.push_back(std::move(c0));
    // c_{j+1} = B c_j / k, cyclically with B c_{a-1} = k c_0.
    Rat inv_k = make_rat(1, Int(ks.k));
    for (std::uint64_t j = 1; j < a; ++j) {
        Vec next = ks.apply_b(table.c[j - 1]);
        for (Rat& x : next) x *= inv_k;
        table.c.push_back(std::move(next));
    }
    Vec closure = ks.apply_b(table.c[a - 1]);
    for (std::size_t s = 0; s < ks.d; ++s)
        if (closure[s] != Rat(ks.k) * table.c[0][s])
            throw std::logic_error("census columns fail the cyclic closure identity");
    Rat m = 0;
    for (const Rat& o : ks.v0)
        if (o > m) m = o;
    for (const Vec& col : table.c)
        for (const Rat& x : col)
            if (x < 0 || x > m) throw std::logic_error("census constant out of range");
    return table;
}

// s(n) = sum_{j<n} h(j), exactly, in time polynomial in log n: decompose
// the count below w = (n)_k by the first position where a smaller word
// branches off, and close each branch with e_r^T B^m v0.
inline Rat partial_sum_exact(const Dfao& d, const Int& n) {
    if (!d.normalized())
        throw std::invalid_argument("partial_sum_exact requires a normalized automaton");
    if (n <= 0) return 0;
    KernelSystem ks = kernel_system(d);
    Word w = canonical_digits(n, d.base);
    std::vector<Vec> pow;  // pow[m] = B^m v0
    pow.push_back(ks.v0);
    for (std::size_t m = 1; m < w.size(); ++m) pow.push_back(ks.apply_b(pow.back()));
    Rat s = 0;
    std::size_t state = 0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        std::size_t m = w.size() - t - 1;
        for (unsigned x = 0; x < w[t]; ++x) s += pow[m][ks.trans[state][x]];
        state = ks.trans[state][w[t]];
    }
    return s;
}

}  // namespace densic

#endif
