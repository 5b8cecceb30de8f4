#ifndef DENSIC_KERNEL_HPP
#define DENSIC_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "densic/automaton.hpp"
#include "densic/matrix.hpp"

namespace densic {

// Left k-kernel of a normalized DFAO. State 0 carries the initial kernel
// map (the paper's f_1); A[x][i][j] = 1 iff reading digit x moves kernel
// map i to kernel map j, B = sum of the A[x], v0[i] = output at state i.
struct KernelSystem {
    std::uint64_t k = 2;
    std::size_t d = 0;
    std::vector<Matrix> a_mats;
    Matrix b;
    Vec v0;
    std::vector<std::vector<std::size_t>> trans;  // same transitions, index form

    std::size_t delta(std::size_t state, const Word& w) const {
        for (unsigned x : w) state = trans[state][x];
        return state;
    }

    // (B w)[i] = sum over digits x of w[trans[i][x]]; B is applied through
    // the transition table rather than the dense matrix.
    Vec apply_b(const Vec& w) const {
        Vec r(d, Rat(0));
        for (std::size_t i = 0; i < d; ++i) {
            Rat acc = 0;
            for (std::uint64_t x = 0; x < k; ++x) acc += w[trans[i][x]];
            r[i] = acc;
        }
        return r;
    }
};

// Requires delta(initial, 0) = initial (run normalize first). The kernel
// is indexed with the initial state at 0 and the remaining reachable
// states in increasing input order.
inline KernelSystem kernel_system(const Dfao& d0) {
    d0.validate();
    if (!d0.normalized())
        throw std::invalid_argument("kernel system requires a normalized automaton");
    Dfao d = detail::trim_unreachable(d0);
    KernelSystem ks;
    ks.k = d.base;
    ks.d = d.state_count();
    ks.trans = d.transitions;
    ks.v0 = d.outputs;
    ks.a_mats.reserve(ks.k);
    ks.b = Matrix(ks.d, ks.d);
    for (std::uint64_t x = 0; x < ks.k; ++x) {
        Matrix a(ks.d, ks.d);
        for (std::size_t i = 0; i < ks.d; ++i) a.at(i, d.transitions[i][x]) = 1;
        ks.b = ks.b + a;
        ks.a_mats.push_back(std::move(a));
    }
    return ks;
}

}  // namespace densic

#endif
