#ifndef DENSIC_DENSITY_HPP
#define DENSIC_DENSITY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "densic/asymptotics.hpp"
#include "densic/automaton.hpp"
#include "densic/detail/ratio_opt.hpp"
#include "densic/kernel.hpp"
#include "densic/rational.hpp"

namespace densic {

namespace detail {

// sum over length-|w| words v strictly below w (from `start`) of the
// census constant at the state reached, using e_r^T B^m c_j =
// k^m c[(j+m) mod a][r] to close each branch in one step.
inline Rat prefix_census_sum(const KernelSystem& ks, const AsymptoticTable& t,
                             std::size_t start, const Word& w, std::uint64_t j) {
    std::size_t len = w.size();
    std::vector<Int> kpow(len);
    if (len) kpow[0] = 1;
    for (std::size_t i = 1; i < len; ++i) kpow[i] = kpow[i - 1] * ks.k;
    Rat sum = 0;
    std::size_t state = start;
    for (std::size_t pos = 0; pos < len; ++pos) {
        std::size_t m = len - pos - 1;
        std::uint64_t res = (j + m) % t.a;
        for (unsigned x = 0; x < w[pos]; ++x)
            sum += Rat(kpow[m]) * t.c[res][ks.trans[state][x]];
        state = ks.trans[state][w[pos]];
    }
    return sum;
}

}  // namespace detail

// kappa_{A,j}: the exact census mass of the words of length |A| strictly
// below A, read from the initial kernel state.
inline Rat kappa(const KernelSystem& ks, const AsymptoticTable& t, const Word& a_word,
                 std::uint64_t j) {
    if (a_word.empty() || a_word[0] == 0)
        throw std::invalid_argument("kappa needs a nonempty word without leading zero");
    if (j >= t.a) throw std::invalid_argument("residue out of range");
    return detail::prefix_census_sum(ks, t, 0, a_word, j);
}

// kappa'_{B,j}: as kappa but read from kernel state `ell`; leading zeros
// in the enumerated words are permitted.
inline Rat kappa_prime(const KernelSystem& ks, const AsymptoticTable& t, std::size_t ell,
                       const Word& b_word, std::uint64_t j) {
    if (b_word.empty()) throw std::invalid_argument("kappa' needs a nonempty word");
    if (ell >= ks.d) throw std::invalid_argument("state index out of range");
    if (j >= t.a) throw std::invalid_argument("residue out of range");
    return detail::prefix_census_sum(ks, t, ell, b_word, j);
}

// Exact limit of s([A B^m w]_k) / [A B^m w]_k as m grows, over tails w of
// length j mod a:
//   ( kappa + kappa' / (k^|B| - 1) ) / ( [A]_k + [B]_k / (k^|B| - 1) ).
inline Rat candidate_value(const KernelSystem& ks, const AsymptoticTable& t,
                           const Word& a_word, const Word& b_word, std::uint64_t j) {
    if (a_word.empty() || a_word[0] == 0)
        throw std::invalid_argument("candidate word A must be nonempty without leading zero");
    if (b_word.empty()) throw std::invalid_argument("candidate word B must be nonempty");
    if (a_word.size() % t.a || b_word.size() % t.a)
        throw std::invalid_argument("candidate word lengths must be multiples of the period");
    if (j >= t.a) throw std::invalid_argument("residue out of range");
    std::size_t ell = ks.delta(0, a_word);
    if (ks.delta(ell, b_word) != ell)
        throw std::invalid_argument("candidate violates the state-return constraint");
    Rat kap = kappa(ks, t, a_word, j);
    Rat kap_p = kappa_prime(ks, t, ell, b_word, j);
    Rat geom = Rat(int_pow(Int(ks.k), b_word.size())) - 1;
    Rat num = kap + kap_p / geom;
    Rat den = Rat(word_value(a_word, ks.k)) + Rat(word_value(b_word, ks.k)) / geom;
    return num / den;
}

struct Witness {
    Word a_word;
    Word b_word;
    std::uint64_t j = 0;
    Rat value;
};

enum class TrivialCase { none, zero, one };

struct DensityReport {
    Rat upper;
    Rat lower;
    std::optional<Witness> witness_upper;
    std::optional<Witness> witness_lower;
    AsymptoticTable table;
    TrivialCase trivial_case = TrivialCase::none;
};

namespace detail {

struct MeanAnalysis {
    Rat value;
    std::optional<Witness> witness;
    KernelSystem ks;
    AsymptoticTable table;
};

// limsup of s(n)/n for a normalized automaton whose kernel system and
// census table are already computed.
inline MeanAnalysis analyze_limsup(KernelSystem ks, AsymptoticTable table,
                                   const DensityOptions& opts) {
    MeanAnalysis out{Rat(0), std::nullopt, std::move(ks), std::move(table)};
    if (out.table.column_zero(0)) return out;  // all c_{1,j} vanish: limsup 0
    RatioOptimizer optimizer(out.ks, out.table, opts);
    auto [value, lasso] = optimizer.run();
    Witness w{std::move(lasso.a_word), std::move(lasso.b_word), lasso.j, value};
    if (candidate_value(out.ks, out.table, w.a_word, w.b_word, w.j) != value)
        throw std::logic_error("witness value disagrees with the optimizer");
    out.value = value;
    out.witness = std::move(w);
    return out;
}

inline MeanAnalysis analyze_limsup(const Dfao& d, const DensityOptions& opts) {
    Dfao norm = normalize(d);
    KernelSystem ks = kernel_system(norm);
    std::uint64_t a = period(ks);
    AsymptoticTable table = census_constants(ks, a);
    return analyze_limsup(std::move(ks), std::move(table), opts);
}

}  // namespace detail

// limsup of s(n)/n with a maximizing witness; (0, none) when the census
// row of the initial state vanishes.
inline std::pair<Rat, std::optional<Witness>> limsup_mean(const Dfao& d,
                                                          const DensityOptions& opts = {}) {
    auto r = detail::analyze_limsup(d, opts);
    return {r.value, r.witness};
}

// liminf of s(n)/n by reflection: outputs h become M - h, and
// liminf = M - limsup(reflected). The witness words realize the liminf of
// the original automaton.
inline std::pair<Rat, std::optional<Witness>> liminf_mean(const Dfao& d,
                                                          const DensityOptions& opts = {}) {
    Rat m = max_output(d);
    auto r = detail::analyze_limsup(reflect_outputs(d), opts);
    Rat value = m - r.value;
    std::optional<Witness> w;
    if (r.witness) {
        w = std::move(*r.witness);
        w->value = value;
    }
    return {value, w};
}

enum class Dichotomy { zero, one, interior };

// Lemma-style zero/one dichotomy: density 0 iff every census constant of
// the set vanishes; density 1 iff every census constant of the complement
// vanishes.
inline Dichotomy dichotomy(const AutomaticSet& s) {
    Dfao norm = normalize(s.dfao);
    KernelSystem ks = kernel_system(norm);
    AsymptoticTable table = census_constants(ks, period(ks));
    if (table.column_zero(0)) return Dichotomy::zero;
    Dfao comp = norm;
    for (Rat& o : comp.outputs) o = Rat(1) - o;
    KernelSystem ksc = kernel_system(comp);
    AsymptoticTable tablec = census_constants(ksc, period(ksc));
    if (tablec.column_zero(0)) return Dichotomy::one;
    return Dichotomy::interior;
}

// Upper and lower densities of an automatic set: upper from the limsup of
// the characteristic sequence, lower from 1 - limsup(complement), with
// the zero/one dichotomy short-circuiting the trivial cases.
inline DensityReport densities(const AutomaticSet& s, const DensityOptions& opts = {}) {
    Dfao norm = normalize(s.dfao);
    KernelSystem ks = kernel_system(norm);
    AsymptoticTable table = census_constants(ks, period(ks));
    Dfao comp = norm;
    for (Rat& o : comp.outputs) o = Rat(1) - o;
    KernelSystem ksc = kernel_system(comp);
    AsymptoticTable tablec = census_constants(ksc, period(ksc));

    DensityReport report;
    report.table = table;
    if (table.column_zero(0)) {
        report.upper = report.lower = 0;
        report.trivial_case = TrivialCase::zero;
        return report;
    }
    if (tablec.column_zero(0)) {
        report.upper = report.lower = 1;
        report.trivial_case = TrivialCase::one;
        return report;
    }
    auto up = detail::analyze_limsup(std::move(ks), std::move(table), opts);
    auto comp_up = detail::analyze_limsup(std::move(ksc), std::move(tablec), opts);
    report.upper = up.value;
    report.witness_upper = up.witness;
    report.lower = Rat(1) - comp_up.value;
    if (comp_up.witness) {
        report.witness_lower = comp_up.witness;
        report.witness_lower->value = report.lower;
    }
    if (report.lower < 0 || report.lower > report.upper || report.upper > 1)
        throw std::logic_error("density report violates 0 <= lower <= upper <= 1");
    return report;
}

// Mean-mode report for general nonnegative rational outputs: upper/lower
// carry limsup/liminf of s(n)/n.
inline DensityReport mean_report(const Dfao& d, const DensityOptions& opts = {}) {
    Dfao norm = normalize(d);
    KernelSystem ks = kernel_system(norm);
    AsymptoticTable table = census_constants(ks, period(ks));
    DensityReport report;
    report.table = table;
    auto up = detail::analyze_limsup(std::move(ks), std::move(table), opts);
    report.upper = up.value;
    report.witness_upper = up.witness;
    auto lo = liminf_mean(norm, opts);
    report.lower = lo.first;
    report.witness_lower = lo.second;
    if (report.lower > report.upper)
        throw std::logic_error("liminf exceeds limsup");
    return report;
}

}  // namespace densic

#endif
