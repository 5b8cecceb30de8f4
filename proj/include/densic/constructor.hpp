#ifndef DENSIC_CONSTRUCTOR_HPP
#define DENSIC_CONSTRUCTOR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "densic/automaton.hpp"
#include "densic/rational.hpp"

namespace densic {

// Admissible density pair: (0,0), (1,1), or 0 < alpha <= beta < 1.
struct DensityTarget {
    Rat alpha;
    Rat beta;
    std::uint64_t base = 2;
};

struct ConstructParams {
    std::uint64_t m = 0;  // K = base^m
    Int big_base;         // K
    Int modulus;          // C
    Int threshold_even;   // A
    Int threshold_odd;    // B
};

inline void validate_target(const DensityTarget& t) {
    if (t.base < 2) throw std::domain_error("base must be at least 2");
    if ((t.alpha == 0 && t.beta == 0) || (t.alpha == 1 && t.beta == 1)) return;
    if (!(t.alpha > 0)) throw std::domain_error("inadmissible target: alpha must be positive");
    if (!(t.alpha <= t.beta)) throw std::domain_error("inadmissible target: alpha must not exceed beta");
    if (!(t.beta < 1)) throw std::domain_error("inadmissible target: beta must be below 1");
}

// Synthesizes a base-k automatic set with lower density alpha and upper
// density beta. Nontrivial targets are realized over the power base
// K = k^m (a set is k-automatic iff it is k^m-automatic) with the least
// m making K*alpha >= beta and K*beta < K-1; membership depends on the
// expansion length parity and the residue mod C, with thresholds
// A = alpha'*C on even length and B = beta'*C on odd length.
inline AutomaticSet construct(const DensityTarget& t, ConstructParams* params = nullptr) {
    validate_target(t);
    if ((t.alpha == 0 && t.beta == 0) || (t.alpha == 1 && t.beta == 1)) {
        Dfao d;
        d.base = t.base;
        d.initial = 0;
        d.outputs = {t.alpha == 1 ? Rat(1) : Rat(0)};
        d.transitions = {std::vector<std::size_t>(t.base, 0)};
        if (params) *params = ConstructParams{0, Int(1), Int(1), Int(0), Int(0)};
        return AutomaticSet(std::move(d));
    }
    std::uint64_t m = 1;
    Int big = t.base;
    while (!(Rat(big) * t.alpha >= t.beta && Rat(big) * t.beta < Rat(big) - 1)) {
        ++m;
        big *= t.base;
        if (big > (Int(1) << 20))
            throw std::domain_error("power base required by the target is too large");
    }
    Rat alpha_p = (Rat(big) * t.alpha - t.beta) / (Rat(big) - 1);
    Rat beta_p = (Rat(big) * t.beta - t.alpha) / (Rat(big) - 1);
    Int c = lcm(denominator(alpha_p), denominator(beta_p));
    Int thr_even = numerator(alpha_p) * (c / denominator(alpha_p));
    Int thr_odd = numerator(beta_p) * (c / denominator(beta_p));
    if (params) *params = ConstructParams{m, big, c, thr_even, thr_odd};

    std::uint64_t k_big = static_cast<std::uint64_t>(big);
    std::size_t mod = static_cast<std::size_t>(c);
    // states: 0 = initial; 1 + parity*C + residue for parity in {even, odd}
    auto state_of = [&](unsigned parity, std::size_t r) { return 1 + parity * mod + r; };
    Dfao d;
    d.base = k_big;
    d.initial = 0;
    std::size_t n_states = 1 + 2 * mod;
    d.outputs.assign(n_states, Rat(0));
    d.transitions.assign(n_states, std::vector<std::size_t>(k_big, 0));
    d.outputs[0] = thr_even > 0 ? 1 : 0;  // 0 has even (empty) expansion, residue 0
    d.transitions[0][0] = 0;
    for (std::uint64_t x = 1; x < k_big; ++x)
        d.transitions[0][x] = state_of(1, static_cast<std::size_t>(Int(x) % c));
    for (unsigned parity = 0; parity < 2; ++parity)
        for (std::size_t r = 0; r < mod; ++r) {
            std::size_t s = state_of(parity, r);
            d.outputs[s] = Int(r) < (parity == 0 ? thr_even : thr_odd) ? 1 : 0;
            for (std::uint64_t x = 0; x < k_big; ++x)
                d.transitions[s][x] =
                    state_of(1 - parity, static_cast<std::size_t>((Int(r) * big + x) % c));
        }
    return AutomaticSet(std::move(d));
}

// The set of numbers whose base-k expansion has even length; 0 (empty
// expansion) belongs. Lower density 1/(k+1), upper density k/(k+1).
inline AutomaticSet even_length_set(std::uint64_t k) {
    if (k < 2) throw std::domain_error("base must be at least 2");
    Dfao d;
    d.base = k;
    d.initial = 0;
    d.outputs = {Rat(1), Rat(0), Rat(1)};
    d.transitions.assign(3, std::vector<std::size_t>(k, 0));
    d.transitions[0][0] = 0;
    for (std::uint64_t x = 1; x < k; ++x) d.transitions[0][x] = 1;
    for (std::uint64_t x = 0; x < k; ++x) {
        d.transitions[1][x] = 2;
        d.transitions[2][x] = 1;
    }
    return AutomaticSet(std::move(d));
}

// The set of numbers whose most significant base-k digit equals `digit`.
inline AutomaticSet leading_digit_set(std::uint64_t k, unsigned digit) {
    if (k < 2) throw std::domain_error("base must be at least 2");
    if (digit < 1 || digit >= k) throw std::domain_error("leading digit must be in 1..k-1");
    Dfao d;
    d.base = k;
    d.initial = 0;
    d.outputs = {Rat(0), Rat(0), Rat(1)};
    d.transitions.assign(3, std::vector<std::size_t>(k, 0));
    d.transitions[0][0] = 0;
    for (std::uint64_t x = 1; x < k; ++x) d.transitions[0][x] = (x == digit) ? 2 : 1;
    for (std::uint64_t x = 0; x < k; ++x) {
        d.transitions[1][x] = 1;
        d.transitions[2][x] = 2;
    }
    return AutomaticSet(std::move(d));
}

}  // namespace densic

#endif
