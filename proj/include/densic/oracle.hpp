#ifndef DENSIC_ORACLE_HPP
#define DENSIC_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "densic/asymptotics.hpp"
#include "densic/automaton.hpp"
#include "densic/kernel.hpp"
#include "densic/rational.hpp"

namespace densic {

struct TraceSample {
    Int n;
    Rat s;
    Rat ratio;
};

// Empirical record of s(n)/n along a simulation: sampled points plus the
// running extremes over the burn-in window.
struct Trace {
    std::vector<TraceSample> samples;
    Int window_start;
    bool window_hit = false;
    Rat running_sup;
    Rat running_inf;

    std::string to_csv() const {
        std::string out = "n,s,ratio\n";
        for (const TraceSample& p : samples)
            out += p.n.str() + "," + rat_string(p.s) + "," + decimal_string(p.ratio, 12) + "\n";
        return out;
    }
};

// Streams n = 1..n_max accumulating s(n) by repeated evaluation, recording
// every stride-th point and the sup/inf of s(n)/n over n >= window
// (default: n_max / k^2, one full multiplicative period of burn-in).
inline Trace simulate(const Dfao& d, const Int& n_max, const Int& stride = 1,
                      std::optional<Int> window = std::nullopt) {
    if (n_max < 1) throw std::invalid_argument("simulation horizon must be positive");
    if (stride < 1) throw std::invalid_argument("stride must be positive");
    Trace trace;
    trace.window_start = window ? *window : n_max / (Int(d.base) * Int(d.base));
    if (trace.window_start < 1) trace.window_start = 1;
    Rat s = 0;
    Word digits;  // expansion of n-1, maintained as an odometer
    Int n = 0;
    Int next_sample = stride;
    while (n < n_max) {
        // increment the odometer to n, evaluate h(n-1)... order: h(n-1)
        // enters s(n), so bump first.
        if (n > 0) {
            std::size_t i = digits.size();
            while (i > 0 && digits[i - 1] == d.base - 1) digits[--i] = 0;
            if (i == 0) digits.insert(digits.begin(), 1u);
            else ++digits[i - 1];
        }
        s += d.outputs[d.walk(d.initial, digits)];
        ++n;
        Rat ratio = s / Rat(n);
        if (n >= trace.window_start) {
            if (!trace.window_hit) {
                trace.window_hit = true;
                trace.running_sup = trace.running_inf = ratio;
            } else {
                if (ratio > trace.running_sup) trace.running_sup = ratio;
                if (ratio < trace.running_inf) trace.running_inf = ratio;
            }
        }
        if (n == next_sample || n == n_max) {
            trace.samples.push_back(TraceSample{n, s, ratio});
            next_sample += stride;
        }
    }
    return trace;
}

// s(n) by direct loop; guard keeps accidental quadratic experiments out.
inline Rat naive_partial_sum(const Dfao& d, const Int& n) {
    if (n > 1'000'000) throw std::domain_error("naive partial sum capped at 10^6");
    Rat s = 0;
    for (Int j = 0; j < n; ++j) s += eval(d, j);
    return s;
}

namespace detail {

inline Rat naive_census_sum(const KernelSystem& ks, const AsymptoticTable& t,
                            std::size_t start, const Word& w, std::uint64_t j) {
    if (w.size() > 6) throw std::domain_error("naive census sum capped at words of length 6");
    if (j >= t.a) throw std::invalid_argument("residue out of range");
    Word v(w.size(), 0);
    Rat sum = 0;
    for (;;) {
        // lexicographic v < w test
        bool less = false;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (v[i] != w[i]) {
                less = v[i] < w[i];
                break;
            }
        }
        if (less) sum += t.c[j][ks.delta(start, v)];
        // next word
        std::size_t i = v.size();
        while (i > 0 && v[i - 1] == ks.k - 1) v[--i] = 0;
        if (i == 0) break;
        ++v[i - 1];
    }
    return sum;
}

}  // namespace detail

// Literal evaluation of the kappa sum over all k^|A| words below A.
inline Rat naive_kappa(const KernelSystem& ks, const AsymptoticTable& t, const Word& a_word,
                       std::uint64_t j) {
    if (a_word.empty() || a_word[0] == 0)
        throw std::invalid_argument("kappa needs a nonempty word without leading zero");
    return detail::naive_census_sum(ks, t, 0, a_word, j);
}

inline Rat naive_kappa_prime(const KernelSystem& ks, const AsymptoticTable& t, std::size_t ell,
                             const Word& b_word, std::uint64_t j) {
    if (b_word.empty()) throw std::invalid_argument("kappa' needs a nonempty word");
    if (ell >= ks.d) throw std::invalid_argument("state index out of range");
    return detail::naive_census_sum(ks, t, ell, b_word, j);
}

}  // namespace densic

#endif
