#include <catch2/catch_amalgamated.hpp>

#include "densic/constructor.hpp"
#include "densic/density.hpp"
#include "densic/oracle.hpp"
#include "support/corpus.hpp"
#include "support/enumerate.hpp"

using namespace densic;

namespace {

struct System {
    Dfao dfao;
    KernelSystem ks;
    AsymptoticTable table;
};

System analyze(Dfao d) {
    Dfao norm = normalize(d);
    KernelSystem ks = kernel_system(norm);
    AsymptoticTable t = census_constants(ks, period(ks));
    return {std::move(norm), std::move(ks), std::move(t)};
}

System ternary() { return analyze(leading_digit_set(3, 1).dfao); }
System fig1() { return analyze(even_length_set(2).dfao); }

System constant_one(std::uint64_t k) {
    Dfao d;
    d.base = k;
    d.initial = 0;
    d.outputs = {Rat(1)};
    d.transitions = {std::vector<std::size_t>(k, 0)};
    return analyze(std::move(d));
}

bool next_word(Word& w, std::uint64_t k) {
    std::size_t i = w.size();
    while (i > 0 && w[i - 1] == k - 1) w[--i] = 0;
    if (i == 0) return false;
    ++w[i - 1];
    return true;
}

}  // namespace

TEST_CASE("kappa on worked examples") {
    System t = ternary();
    REQUIRE(kappa(t.ks, t.table, {1}, 0) == Rat(1, 2));
    // direct sum over v in {00, 01, 02}: c_1 + c_3 + c_2
    REQUIRE(kappa(t.ks, t.table, {1, 0}, 0) == Rat(3, 2));
    REQUIRE_THROWS_AS(kappa(t.ks, t.table, {0, 1}, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(kappa(t.ks, t.table, {}, 0), std::invalid_argument);

    System z = analyze([] {
        Dfao d = even_length_set(2).dfao;
        for (Rat& o : d.outputs) o = 0;
        return d;
    }());
    for (unsigned len = 1; len <= 3; ++len) {
        Word w(len, 1);
        REQUIRE(kappa(z.ks, z.table, w, 0) == 0);
        REQUIRE(kappa(z.ks, z.table, w, 1) == 0);
    }
}

TEST_CASE("kappa_prime on worked examples") {
    System t = ternary();
    // from the constant-1 kernel state, words below "2" are {0, 1}
    REQUIRE(kappa_prime(t.ks, t.table, 2, {2}, 0) == Rat(2));
    REQUIRE(kappa_prime(t.ks, t.table, 2, {0}, 0) == Rat(0));

    System f = fig1();
    // from the odd-parity state every length-2 word returns to it, and
    // its census constant at j = 0 vanishes
    Rat direct = naive_kappa_prime(f.ks, f.table, 1, {1, 1}, 0);
    REQUIRE(kappa_prime(f.ks, f.table, 1, {1, 1}, 0) == direct);
    REQUIRE(direct == 0);
}

TEST_CASE("kappa and kappa_prime match the literal sums") {
    std::vector<System> systems{fig1(), ternary()};
    for (const Dfao& d : testsupport::random_corpus(15, 2718))
        systems.push_back(analyze(d));
    for (const Dfao& d : testsupport::random_corpus(5, 1414, true))
        systems.push_back(analyze(d));
    for (const System& s : systems) {
        for (unsigned len = 1; len <= 4; ++len) {
            Word w(len, 0);
            do {
                for (std::uint64_t j = 0; j < s.table.a; ++j) {
                    if (w[0] != 0)
                        REQUIRE(kappa(s.ks, s.table, w, j) == naive_kappa(s.ks, s.table, w, j));
                    for (std::size_t ell = 0; ell < s.ks.d; ++ell)
                        REQUIRE(kappa_prime(s.ks, s.table, ell, w, j) ==
                                naive_kappa_prime(s.ks, s.table, ell, w, j));
                }
            } while (next_word(w, s.ks.k));
        }
    }
}

TEST_CASE("candidate_value on worked examples") {
    System t = ternary();
    REQUIRE(candidate_value(t.ks, t.table, {1}, {2}, 0) == Rat(3, 4));
    REQUIRE(candidate_value(t.ks, t.table, {1}, {0}, 0) == Rat(1, 2));
    System one = constant_one(2);
    REQUIRE(candidate_value(one.ks, one.table, {1}, {0}, 0) == 1);

    // violated preconditions are rejected
    REQUIRE_THROWS_AS(candidate_value(t.ks, t.table, {0, 1}, {2}, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(candidate_value(t.ks, t.table, {1}, {}, 0), std::invalid_argument);
    // state-return violation: from the powers-of-two accept state,
    // digit 1 falls into the dead state
    System pow2 = analyze(parse_dfao(
        "base 2\nstates 3\ninitial 0\n"
        "state 0 output 0 -> 0 1\n"
        "state 1 output 1 -> 1 2\n"
        "state 2 output 0 -> 2 2\n"));
    REQUIRE_THROWS_AS(candidate_value(pow2.ks, pow2.table, {1}, {1}, 0), std::invalid_argument);
    // period-2 system rejects odd lengths
    System f = fig1();
    REQUIRE_THROWS_AS(candidate_value(f.ks, f.table, {1}, {0, 0}, 0), std::invalid_argument);
}

TEST_CASE("candidate_value is invariant under pumping B") {
    std::vector<System> systems{fig1(), ternary()};
    for (const Dfao& d : testsupport::random_corpus(10, 69))
        systems.push_back(analyze(d));
    for (const System& s : systems) {
        for (unsigned la = 1; la <= 2; ++la)
            for (unsigned lb = 1; lb <= 2; ++lb) {
                if (la % s.table.a || lb % s.table.a) continue;
                Word a_word(la, 0);
                do {
                    if (a_word[0] == 0) continue;
                    std::size_t ell = s.ks.delta(0, a_word);
                    Word b_word(lb, 0);
                    do {
                        if (s.ks.delta(ell, b_word) != ell) continue;
                        Word doubled = b_word;
                        doubled.insert(doubled.end(), b_word.begin(), b_word.end());
                        for (std::uint64_t j = 0; j < s.table.a; ++j)
                            REQUIRE(candidate_value(s.ks, s.table, a_word, b_word, j) ==
                                    candidate_value(s.ks, s.table, a_word, doubled, j));
                    } while (next_word(b_word, s.ks.k));
                } while (next_word(a_word, s.ks.k));
            }
    }
}

TEST_CASE("limsup_mean on worked examples") {
    auto [t_val, t_wit] = limsup_mean(leading_digit_set(3, 1).dfao);
    REQUIRE(t_val == Rat(3, 4));
    REQUIRE(t_wit.has_value());
    REQUIRE(t_wit->a_word == Word{1});
    REQUIRE(t_wit->b_word == Word{2});
    REQUIRE(t_wit->j == 0);

    auto [f_val, f_wit] = limsup_mean(even_length_set(2).dfao);
    REQUIRE(f_val == Rat(2, 3));
    REQUIRE(f_wit.has_value());

    Dfao zero = even_length_set(2).dfao;
    for (Rat& o : zero.outputs) o = 0;
    auto [z_val, z_wit] = limsup_mean(zero);
    REQUIRE(z_val == 0);
    REQUIRE_FALSE(z_wit.has_value());
}

TEST_CASE("liminf_mean on worked examples") {
    REQUIRE(liminf_mean(leading_digit_set(3, 1).dfao).first == Rat(1, 2));
    REQUIRE(liminf_mean(even_length_set(2).dfao).first == Rat(1, 3));
    Dfao one;
    one.base = 2;
    one.initial = 0;
    one.outputs = {Rat(1)};
    one.transitions = {{0, 0}};
    auto [v, w] = liminf_mean(one);
    REQUIRE(v == 1);
}

TEST_CASE("densities on worked examples") {
    DensityReport fig = densities(even_length_set(2));
    REQUIRE(fig.lower == Rat(1, 3));
    REQUIRE(fig.upper == Rat(2, 3));
    REQUIRE(fig.trivial_case == TrivialCase::none);
    REQUIRE(fig.witness_upper.has_value());
    REQUIRE(fig.witness_lower.has_value());

    DensityReport lead = densities(leading_digit_set(3, 1));
    REQUIRE(lead.lower == Rat(1, 2));
    REQUIRE(lead.upper == Rat(3, 4));

    Dfao empty;
    empty.base = 2;
    empty.initial = 0;
    empty.outputs = {Rat(0)};
    empty.transitions = {{0, 0}};
    DensityReport e = densities(AutomaticSet(empty));
    REQUIRE(e.lower == 0);
    REQUIRE(e.upper == 0);
    REQUIRE(e.trivial_case == TrivialCase::zero);
    REQUIRE_FALSE(e.witness_upper.has_value());
    REQUIRE_FALSE(e.witness_lower.has_value());
}

TEST_CASE("dichotomy") {
    Dfao empty;
    empty.base = 2;
    empty.initial = 0;
    empty.outputs = {Rat(0)};
    empty.transitions = {{0, 0}};
    REQUIRE(dichotomy(AutomaticSet(empty)) == Dichotomy::zero);

    Dfao full = empty;
    full.outputs = {Rat(1)};
    REQUIRE(dichotomy(AutomaticSet(full)) == Dichotomy::one);

    REQUIRE(dichotomy(even_length_set(2)) == Dichotomy::interior);

    Dfao pow2 = parse_dfao(
        "base 2\nstates 3\ninitial 0\n"
        "state 0 output 0 -> 0 1\n"
        "state 1 output 1 -> 1 2\n"
        "state 2 output 0 -> 2 2\n");
    AutomaticSet powers(pow2);
    REQUIRE(dichotomy(powers) == Dichotomy::zero);
    DensityReport r = densities(powers);
    REQUIRE(r.lower == 0);
    REQUIRE(r.upper == 0);
    REQUIRE(r.trivial_case == TrivialCase::zero);
}

TEST_CASE("zero-one dichotomy and complement duality on the corpus") {
    for (const Dfao& d : testsupport::random_corpus(25, 31337)) {
        AutomaticSet s(d);
        DensityReport r = densities(s);
        REQUIRE(r.lower >= 0);
        REQUIRE(r.lower <= r.upper);
        REQUIRE(r.upper <= 1);
        REQUIRE((r.lower == 0) == (r.upper == 0));
        REQUIRE((r.upper == 1) == (r.lower == 1));
        DensityReport c = densities(complement(s));
        REQUIRE(r.upper + c.lower == 1);
        REQUIRE(r.lower + c.upper == 1);
    }
}

TEST_CASE("scaling outputs scales the mean values") {
    for (const Dfao& d : testsupport::random_corpus(8, 512, true)) {
        auto [up, up_w] = limsup_mean(d);
        auto [lo, lo_w] = liminf_mean(d);
        Dfao scaled = d;
        Rat factor(7, 3);
        for (Rat& o : scaled.outputs) o *= factor;
        auto [up2, up2_w] = limsup_mean(scaled);
        auto [lo2, lo2_w] = liminf_mean(scaled);
        REQUIRE(up2 == factor * up);
        REQUIRE(lo2 == factor * lo);
        REQUIRE(up_w.has_value() == up2_w.has_value());
        if (up_w) {
            REQUIRE(up_w->a_word == up2_w->a_word);
            REQUIRE(up_w->b_word == up2_w->b_word);
            REQUIRE(up_w->j == up2_w->j);
        }
    }
}

TEST_CASE("optimizer agrees with exhaustive enumeration") {
    std::vector<System> systems{fig1(), ternary(), constant_one(2)};
    for (const Dfao& d : testsupport::random_corpus(30, 20260809))
        systems.push_back(analyze(d));
    for (const Dfao& d : testsupport::random_corpus(10, 977, true))
        systems.push_back(analyze(d));
    int compared = 0;
    for (const System& s : systems) {
        auto res = detail::analyze_limsup(s.ks, s.table, {});
        if (s.table.column_zero(0)) {
            REQUIRE(res.value == 0);
            continue;
        }
        auto oracle = testsupport::enumerate_limsup(s.ks, s.table, 300'000);
        if (!oracle) continue;
        ++compared;
        REQUIRE(res.value == oracle->value);
        REQUIRE(res.witness->a_word == oracle->a_word);
        REQUIRE(res.witness->b_word == oracle->b_word);
        REQUIRE(res.witness->j == oracle->j);
    }
    REQUIRE(compared >= 20);
}

TEST_CASE("witness invariants") {
    std::vector<System> systems{fig1(), ternary()};
    for (const Dfao& d : testsupport::random_corpus(20, 4096))
        systems.push_back(analyze(d));
    for (const System& s : systems) {
        auto res = detail::analyze_limsup(s.ks, s.table, {});
        if (!res.witness) continue;
        const Witness& w = *res.witness;
        REQUIRE(!w.a_word.empty());
        REQUIRE(w.a_word[0] != 0);
        REQUIRE(!w.b_word.empty());
        REQUIRE(w.a_word.size() % s.table.a == 0);
        REQUIRE(w.b_word.size() % s.table.a == 0);
        REQUIRE(w.a_word.size() + w.b_word.size() <= (2 * s.ks.d + 1) * s.table.a);
        std::size_t ell = s.ks.delta(0, w.a_word);
        REQUIRE(s.ks.delta(ell, w.b_word) == ell);
        REQUIRE(w.j < s.table.a);
        REQUIRE(candidate_value(s.ks, s.table, w.a_word, w.b_word, w.j) == w.value);
    }
}

TEST_CASE("witness values are attained as limit points") {
    // ratios s([A B^m w]) / [A B^m w] approach the reported limsup
    auto check = [](const Dfao& d, const Rat& expect, const Witness& w, std::uint64_t k,
                    std::uint64_t a) {
        Word digits = w.a_word;
        std::size_t pump = 1 + 12 / w.b_word.size();
        for (std::size_t i = 0; i < pump; ++i)
            digits.insert(digits.end(), w.b_word.begin(), w.b_word.end());
        for (std::uint64_t i = 0; i < w.j; ++i) digits.push_back(0);
        Int n = word_value(digits, k);
        Rat ratio = partial_sum_exact(d, n) / Rat(n);
        Rat err = ratio > expect ? ratio - expect : expect - ratio;
        REQUIRE(err < Rat(1, 100));
        (void)a;
    };
    {
        Dfao d = normalize(leading_digit_set(3, 1).dfao);
        auto [val, wit] = limsup_mean(d);
        check(d, val, *wit, 3, 1);
    }
    {
        Dfao d = normalize(even_length_set(2).dfao);
        auto [val, wit] = limsup_mean(d);
        check(d, val, *wit, 2, 2);
    }
}

TEST_CASE("work budget produces an infeasible error, never an answer") {
    DensityOptions opts;
    opts.max_work = 10;
    REQUIRE_THROWS_AS(densities(even_length_set(2), opts), infeasible_error);
}

TEST_CASE("thread count does not change results") {
    for (const Dfao& d : testsupport::random_corpus(6, 7777)) {
        DensityOptions t1, t4;
        t1.threads = 1;
        t4.threads = 4;
        DensityReport r1 = densities(AutomaticSet(d), t1);
        DensityReport r4 = densities(AutomaticSet(d), t4);
        REQUIRE(r1.upper == r4.upper);
        REQUIRE(r1.lower == r4.lower);
        REQUIRE(r1.witness_upper.has_value() == r4.witness_upper.has_value());
        if (r1.witness_upper) {
            REQUIRE(r1.witness_upper->a_word == r4.witness_upper->a_word);
            REQUIRE(r1.witness_upper->b_word == r4.witness_upper->b_word);
        }
    }
}
