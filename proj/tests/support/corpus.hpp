#ifndef DENSIC_TESTS_CORPUS_HPP
#define DENSIC_TESTS_CORPUS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "densic/automaton.hpp"

namespace densic::testsupport {

// Deterministic corpus of small normalized DFAOs (d <= 4, k in {2,3}).
// Outputs are 0/1 so the same corpus serves set-mode and mean-mode tests.
inline std::vector<Dfao> random_corpus(std::size_t count, std::uint32_t seed,
                                       bool rational_outputs = false) {
    std::mt19937 rng(seed);
    std::vector<Dfao> corpus;
    corpus.reserve(count);
    while (corpus.size() < count) {
        Dfao d;
        d.base = rng() % 2 ? 2 : 3;
        std::size_t states = 1 + rng() % 4;
        d.initial = 0;
        d.outputs.resize(states);
        d.transitions.assign(states, std::vector<std::size_t>(d.base, 0));
        for (std::size_t s = 0; s < states; ++s) {
            if (rational_outputs) {
                static const Rat choices[] = {Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(1, 3)};
                d.outputs[s] = choices[rng() % 5];
            } else {
                d.outputs[s] = Rat(rng() % 2);
            }
            for (std::uint64_t x = 0; x < d.base; ++x)
                d.transitions[s][x] = rng() % states;
        }
        // keep the normalized kernel at d <= 4
        if (states == 4) d.transitions[0][0] = 0;
        corpus.push_back(normalize(d));
    }
    return corpus;
}

}  // namespace densic::testsupport

#endif
