#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "densic/automaton.hpp"
#include "densic/constructor.hpp"
#include "densic/kernel.hpp"
#include "support/corpus.hpp"

using namespace densic;

namespace {

const char* kFig1Text =
    "base 2\n"
    "states 3\n"
    "initial 0\n"
    "state 0 output 1 -> 0 1\n"
    "state 1 output 0 -> 2 2\n"
    "state 2 output 1 -> 1 1\n";

const char* kTernaryText =
    "base 3\n"
    "states 3\n"
    "initial 0\n"
    "state 0 output 0 -> 0 2 1\n"
    "state 1 output 0 -> 1 1 1\n"
    "state 2 output 1 -> 2 2 2\n";

// brute-force word enumeration helper
bool next_word(Word& w, std::uint64_t k) {
    std::size_t i = w.size();
    while (i > 0 && w[i - 1] == k - 1) w[--i] = 0;
    if (i == 0) return false;
    ++w[i - 1];
    return true;
}

}  // namespace

TEST_CASE("parse_dfao on the worked examples") {
    Dfao fig1 = parse_dfao(kFig1Text);
    REQUIRE(fig1.base == 2);
    REQUIRE(fig1.state_count() == 3);
    REQUIRE(fig1.initial == 0);
    REQUIRE(fig1.outputs == std::vector<Rat>{Rat(1), Rat(0), Rat(1)});
    REQUIRE(fig1.transitions[0] == std::vector<std::size_t>{0, 1});

    Dfao one = parse_dfao("base 2\nstates 1\ninitial 0\nstate 0 output 1 -> 0 0\n");
    for (int n = 0; n < 50; ++n) REQUIRE(eval(one, n) == 1);

    // comments and rational outputs
    Dfao r = parse_dfao("# header\nbase 2\nstates 1\ninitial 0\nstate 0 output 3/4 -> 0 0 # loop\n");
    REQUIRE(r.outputs[0] == Rat(3, 4));
}

TEST_CASE("parse_dfao error paths") {
    auto expect_error = [](const std::string& text, std::size_t line) {
        try {
            parse_dfao(text);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            REQUIRE(e.line == line);
        }
    };
    // dangling state reference
    expect_error("base 2\nstates 1\ninitial 0\nstate 0 output 1 -> 0 7\n", 4);
    // duplicate definition
    expect_error(
        "base 2\nstates 2\ninitial 0\nstate 0 output 1 -> 0 0\nstate 0 output 0 -> 1 1\n", 5);
    // negative output
    expect_error("base 2\nstates 1\ninitial 0\nstate 0 output -1 -> 0 0\n", 4);
    // malformed header
    expect_error("base x\n", 1);
    // missing state definition
    REQUIRE_THROWS_AS(parse_dfao("base 2\nstates 2\ninitial 0\nstate 0 output 1 -> 0 0\n"),
                      parse_error);
    // initial out of range
    expect_error("base 2\nstates 1\ninitial 3\n", 3);
}

TEST_CASE("serialization is canonical") {
    Dfao fig1 = parse_dfao(kFig1Text);
    REQUIRE(serialize_dfao(fig1) == kFig1Text);
    std::string text = serialize_dfao(even_length_set(3).dfao);
    REQUIRE(serialize_dfao(parse_dfao(text)) == text);
}

TEST_CASE("eval reads most significant digit first") {
    Dfao fig1 = parse_dfao(kFig1Text);
    REQUIRE(eval(fig1, 0) == 1);  // empty word, initial output
    REQUIRE(eval(fig1, 2) == 1);  // "10" has even length
    REQUIRE(eval(fig1, 1) == 0);
    Dfao ternary = parse_dfao(kTernaryText);
    REQUIRE(eval(ternary, 5) == 1);  // "12" leads with 1
    REQUIRE(eval(ternary, 7) == 0);  // "21"
}

TEST_CASE("normalize") {
    SECTION("already normalized automata are only trimmed") {
        Dfao fig1 = parse_dfao(kFig1Text);
        REQUIRE(serialize_dfao(normalize(fig1)) == serialize_dfao(fig1));
        Dfao ternary = parse_dfao(kTernaryText);
        REQUIRE(serialize_dfao(normalize(ternary)) == serialize_dfao(ternary));
    }
    SECTION("unreachable states are dropped") {
        Dfao d = parse_dfao(
            "base 2\nstates 3\ninitial 0\n"
            "state 0 output 1 -> 0 0\n"
            "state 1 output 0 -> 2 2\n"
            "state 2 output 1 -> 1 1\n");
        REQUIRE(normalize(d).state_count() == 1);
    }
    SECTION("length-parity automaton gains a fresh zero-looping initial state") {
        // two states swapping on every digit; delta(q0, 0) != q0
        Dfao d = parse_dfao(
            "base 2\nstates 2\ninitial 0\n"
            "state 0 output 1 -> 1 1\n"
            "state 1 output 0 -> 0 0\n");
        Dfao n = normalize(d);
        REQUIRE(n.normalized());
        for (Int v = 0; v < 1024; ++v) REQUIRE(eval(n, v) == eval(d, v));
    }
    SECTION("leading zeros never change the result after normalization") {
        auto corpus = testsupport::random_corpus(10, 42);
        for (const Dfao& d : corpus) {
            REQUIRE(d.normalized());
            for (int len = 0; len <= 4; ++len) {
                Word w(len, 0);
                do {
                    std::size_t direct = d.walk(d.initial, w);
                    Word padded(3, 0);
                    padded.insert(padded.end(), w.begin(), w.end());
                    REQUIRE(d.walk(d.initial, padded) == direct);
                } while (next_word(w, d.base));
            }
        }
    }
}

TEST_CASE("normalize preserves the computed function") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        Dfao d;
        d.base = 2 + rng() % 2;
        std::size_t states = 1 + rng() % 4;
        d.initial = rng() % states;
        d.outputs.resize(states);
        d.transitions.assign(states, std::vector<std::size_t>(d.base, 0));
        for (std::size_t s = 0; s < states; ++s) {
            d.outputs[s] = Rat(rng() % 3);
            for (std::uint64_t x = 0; x < d.base; ++x) d.transitions[s][x] = rng() % states;
        }
        Dfao n = normalize(d);
        REQUIRE(n.normalized());
        for (Int v = 0; v < 500; ++v) REQUIRE(eval(n, v) == eval(d, v));
    }
}

TEST_CASE("kernel_system on the worked examples") {
    SECTION("Fig. 1") {
        KernelSystem ks = kernel_system(parse_dfao(kFig1Text));
        REQUIRE(ks.d == 3);
        REQUIRE(ks.b == Matrix(3, 3,
                               {Rat(1), Rat(1), Rat(0), Rat(0), Rat(0), Rat(2), Rat(0), Rat(2),
                                Rat(0)}));
        REQUIRE(ks.v0 == Vec{Rat(1), Rat(0), Rat(1)});
    }
    SECTION("ternary leading-digit") {
        KernelSystem ks = kernel_system(parse_dfao(kTernaryText));
        REQUIRE(ks.d == 3);
        REQUIRE(ks.b == Matrix(3, 3,
                               {Rat(1), Rat(1), Rat(1), Rat(0), Rat(3), Rat(0), Rat(0), Rat(0),
                                Rat(3)}));
        REQUIRE(ks.v0 == Vec{Rat(0), Rat(0), Rat(1)});
        // f_2 is constant 0 and f_3 constant 1
        for (int len = 0; len <= 3; ++len) {
            Word w(len, 0);
            do {
                REQUIRE(ks.v0[ks.delta(1, w)] == 0);
                REQUIRE(ks.v0[ks.delta(2, w)] == 1);
            } while (next_word(w, 3));
        }
    }
    SECTION("constant automaton") {
        Dfao one = parse_dfao("base 5\nstates 1\ninitial 0\nstate 0 output 1 -> 0 0 0 0 0\n");
        KernelSystem ks = kernel_system(one);
        REQUIRE(ks.d == 1);
        REQUIRE(ks.b == Matrix(1, 1, {Rat(5)}));
        REQUIRE(ks.v0 == Vec{Rat(1)});
    }
    SECTION("requires a normalized automaton") {
        Dfao d = parse_dfao("base 2\nstates 2\ninitial 0\nstate 0 output 1 -> 1 1\nstate 1 output 0 -> 0 0\n");
        REQUIRE_THROWS_AS(kernel_system(d), std::invalid_argument);
    }
}

TEST_CASE("kernel recurrence and census identity") {
    auto corpus = testsupport::random_corpus(6, 314);
    corpus.push_back(normalize(parse_dfao(kFig1Text)));
    corpus.push_back(normalize(parse_dfao(kTernaryText)));
    for (const Dfao& d : corpus) {
        KernelSystem ks = kernel_system(d);
        Dfao trimmed = detail::trim_unreachable(d);
        // f_i(xw) = f_{delta(i,x)}(w) for all short words
        for (std::size_t i = 0; i < ks.d; ++i)
            for (unsigned x = 0; x < ks.k; ++x)
                for (int len = 0; len <= 4; ++len) {
                    Word w(len, 0);
                    do {
                        Word xw{x};
                        xw.insert(xw.end(), w.begin(), w.end());
                        REQUIRE(ks.delta(i, xw) == ks.delta(ks.trans[i][x], w));
                    } while (next_word(w, ks.k));
                }
        // sum over |w| = m of f_i(w) equals e_i^T B^m v0
        std::vector<Vec> powers{ks.v0};
        for (int m = 1; m <= 6; ++m) powers.push_back(ks.apply_b(powers.back()));
        for (std::size_t i = 0; i < ks.d; ++i)
            for (int m = 0; m <= 6; ++m) {
                Rat direct = 0;
                Word w(m, 0);
                do {
                    direct += trimmed.outputs[trimmed.walk(i, w)];
                } while (next_word(w, ks.k));
                REQUIRE(direct == powers[m][i]);
            }
        // structural facts about the transition matrices
        for (const Matrix& a : ks.a_mats)
            for (std::size_t i = 0; i < ks.d; ++i) {
                Rat row = 0;
                for (std::size_t j = 0; j < ks.d; ++j) {
                    REQUIRE((a.at(i, j) == 0 || a.at(i, j) == 1));
                    row += a.at(i, j);
                }
                REQUIRE(row == 1);
            }
        for (std::size_t i = 0; i < ks.d; ++i) {
            Rat row = 0;
            for (std::size_t j = 0; j < ks.d; ++j) row += ks.b.at(i, j);
            REQUIRE(row == Rat(ks.k));
        }
    }
}

TEST_CASE("minimize") {
    // even-length set is already minimal
    REQUIRE(minimize(even_length_set(2).dfao).state_count() == 3);
    // duplicated accept state collapses
    Dfao dup = parse_dfao(
        "base 2\nstates 4\ninitial 0\n"
        "state 0 output 1 -> 0 1\n"
        "state 1 output 0 -> 2 3\n"
        "state 2 output 1 -> 1 1\n"
        "state 3 output 1 -> 1 1\n");
    Dfao small = minimize(dup);
    REQUIRE(small.state_count() == 3);
    for (Int v = 0; v < 2000; ++v) REQUIRE(eval(small, v) == eval(dup, v));
    // minimization never changes the function
    auto corpus = testsupport::random_corpus(10, 555);
    for (const Dfao& d : corpus) {
        Dfao m = minimize(d);
        REQUIRE(m.state_count() <= d.state_count());
        for (Int v = 0; v < 1000; ++v) REQUIRE(eval(m, v) == eval(d, v));
    }
}
