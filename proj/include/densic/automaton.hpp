#ifndef DENSIC_AUTOMATON_HPP
#define DENSIC_AUTOMATON_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "densic/rational.hpp"

namespace densic {

// Digit word, most significant digit first.
using Word = std::vector<unsigned>;

// Deterministic finite automaton with output over the digit alphabet
// {0, ..., base-1}. Input is read most-significant-digit first; the
// expansion of 0 is the empty word. Outputs are nonnegative rationals.
struct Dfao {
    std::uint64_t base = 2;
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> transitions;  // [state][digit]
    std::vector<Rat> outputs;

    std::size_t state_count() const { return outputs.size(); }

    std::size_t step(std::size_t state, unsigned digit) const {
        return transitions[state][digit];
    }

    std::size_t walk(std::size_t state, const Word& w) const {
        for (unsigned d : w) state = transitions[state][d];
        return state;
    }

    bool normalized() const {
        return state_count() > 0 && transitions[initial][0] == initial;
    }

    void validate() const {
        if (base < 2) throw std::invalid_argument("automaton base must be at least 2");
        if (state_count() == 0) throw std::invalid_argument("automaton has no states");
        if (initial >= state_count()) throw std::invalid_argument("initial state out of range");
        if (transitions.size() != state_count())
            throw std::invalid_argument("transition table size mismatch");
        for (const auto& row : transitions) {
            if (row.size() != base)
                throw std::invalid_argument("transition row does not cover every digit");
            for (std::size_t t : row)
                if (t >= state_count()) throw std::invalid_argument("transition target out of range");
        }
        for (const Rat& o : outputs)
            if (o < 0) throw std::invalid_argument("negative output value");
    }
};

// Canonical base-k digits of n, most significant first; empty for 0.
inline Word canonical_digits(Int n, std::uint64_t k) {
    Word w;
    while (n > 0) {
        w.push_back(static_cast<unsigned>(n % k));
        n /= k;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

inline Int word_value(const Word& w, std::uint64_t k) {
    Int v = 0;
    for (unsigned d : w) v = v * k + d;
    return v;
}

inline std::string word_string(const Word& w, std::uint64_t base) {
    if (w.empty()) return "(empty)";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (base > 10 && i) s += '.';
        s += std::to_string(w[i]);
    }
    return s;
}

// h(n): run the canonical expansion of n and emit the final state's output.
inline Rat eval(const Dfao& d, const Int& n) {
    return d.outputs[d.walk(d.initial, canonical_digits(n, d.base))];
}

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

}  // namespace detail

// Text format, one automaton per stream:
//   base <k>
//   states <m>
//   initial <i>
//   state <i> output <p>[/<q>] -> <t_0> ... <t_{k-1}>
// '#' starts a comment; state indices are 0-based.
inline Dfao parse_dfao(std::istream& in) {
    Dfao d;
    std::size_t line_no = 0;
    std::size_t declared_states = 0;
    int header = 0;  // how many header lines seen
    std::vector<bool> seen;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;
        if (header < 3) {
            const char* expect = header == 0 ? "base" : header == 1 ? "states" : "initial";
            if (tokens.size() != 2 || tokens[0] != expect)
                throw parse_error("expected '" + std::string(expect) + " <n>'", line_no);
            Int v;
            if (!parse_int_strict(tokens[1], v) || v < 0)
                throw parse_error("malformed number '" + tokens[1] + "'", line_no);
            if (header == 0) {
                if (v < 2 || v > (1 << 20)) throw parse_error("base out of range", line_no);
                d.base = static_cast<std::uint64_t>(v);
            } else if (header == 1) {
                if (v < 1 || v > 10'000'000) throw parse_error("state count out of range", line_no);
                declared_states = static_cast<std::size_t>(v);
                d.outputs.assign(declared_states, Rat(0));
                d.transitions.assign(declared_states, std::vector<std::size_t>(d.base, 0));
                seen.assign(declared_states, false);
            } else {
                if (v >= declared_states)
                    throw parse_error("initial state " + v.str() + " is undefined", line_no);
                d.initial = static_cast<std::size_t>(v);
            }
            ++header;
            continue;
        }
        if (tokens[0] != "state")
            throw parse_error("expected 'state ...' line", line_no);
        if (tokens.size() != 5 + d.base || tokens[2] != "output" || tokens[4] != "->")
            throw parse_error("malformed state line", line_no);
        Int idx;
        if (!parse_int_strict(tokens[1], idx) || idx < 0 || idx >= Int(declared_states))
            throw parse_error("state index '" + tokens[1] + "' out of range", line_no);
        std::size_t s = static_cast<std::size_t>(idx);
        if (seen[s]) throw parse_error("duplicate definition of state " + tokens[1], line_no);
        seen[s] = true;
        Rat out;
        try {
            out = parse_rational(tokens[3]);
        } catch (const parse_error&) {
            throw parse_error("malformed output '" + tokens[3] + "'", line_no);
        }
        if (out < 0) throw parse_error("negative output '" + tokens[3] + "'", line_no);
        d.outputs[s] = out;
        for (std::uint64_t x = 0; x < d.base; ++x) {
            Int t;
            if (!parse_int_strict(tokens[5 + x], t) || t < 0)
                throw parse_error("malformed transition target '" + tokens[5 + x] + "'", line_no);
            if (t >= Int(declared_states))
                throw parse_error("transition to undefined state " + t.str(), line_no);
            d.transitions[s][x] = static_cast<std::size_t>(t);
        }
    }
    if (header < 3) throw parse_error("missing header (base/states/initial)", line_no);
    for (std::size_t s = 0; s < declared_states; ++s)
        if (!seen[s]) throw parse_error("state " + std::to_string(s) + " is never defined", line_no);
    d.validate();
    return d;
}

inline Dfao parse_dfao(const std::string& text) {
    std::istringstream in(text);
    return parse_dfao(in);
}

// Canonical serialization; parse(serialize(d)) reproduces d byte for byte.
inline std::string serialize_dfao(const Dfao& d) {
    std::string out;
    out += "base " + std::to_string(d.base) + "\n";
    out += "states " + std::to_string(d.state_count()) + "\n";
    out += "initial " + std::to_string(d.initial) + "\n";
    for (std::size_t s = 0; s < d.state_count(); ++s) {
        out += "state " + std::to_string(s) + " output " + rat_string(d.outputs[s]) + " ->";
        for (std::uint64_t x = 0; x < d.base; ++x)
            out += " " + std::to_string(d.transitions[s][x]);
        out += "\n";
    }
    return out;
}

namespace detail {

// Keeps reachable states only, renumbered with the initial state first and
// the rest in increasing old order.
inline Dfao trim_unreachable(const Dfao& d) {
    std::vector<bool> reach(d.state_count(), false);
    std::vector<std::size_t> stack{d.initial};
    reach[d.initial] = true;
    while (!stack.empty()) {
        std::size_t s = stack.back();
        stack.pop_back();
        for (std::size_t t : d.transitions[s])
            if (!reach[t]) {
                reach[t] = true;
                stack.push_back(t);
            }
    }
    std::vector<std::size_t> order{d.initial};
    for (std::size_t s = 0; s < d.state_count(); ++s)
        if (reach[s] && s != d.initial) order.push_back(s);
    std::vector<std::size_t> renum(d.state_count());
    for (std::size_t i = 0; i < order.size(); ++i) renum[order[i]] = i;
    Dfao r;
    r.base = d.base;
    r.initial = 0;
    r.outputs.reserve(order.size());
    r.transitions.reserve(order.size());
    for (std::size_t s : order) {
        r.outputs.push_back(d.outputs[s]);
        std::vector<std::size_t> row(d.base);
        for (std::uint64_t x = 0; x < d.base; ++x) row[x] = renum[d.transitions[s][x]];
        r.transitions.push_back(std::move(row));
    }
    return r;
}

}  // namespace detail

// Enforces the standing assumption f(0w) = f(w): the result computes the
// same function on every natural number and its initial state loops on
// digit 0. When the input already loops, only unreachable states are
// trimmed; otherwise a fresh initial state is inserted that copies the old
// initial state's output and nonzero transitions.
inline Dfao normalize(const Dfao& d) {
    d.validate();
    if (d.transitions[d.initial][0] == d.initial) return detail::trim_unreachable(d);
    Dfao e = d;
    std::size_t fresh = e.state_count();
    std::vector<std::size_t> row(e.base);
    row[0] = fresh;
    for (std::uint64_t x = 1; x < e.base; ++x) row[x] = d.transitions[d.initial][x];
    e.transitions.push_back(std::move(row));
    e.outputs.push_back(d.outputs[d.initial]);
    e.initial = fresh;
    return detail::trim_unreachable(e);
}

// Moore minimization by partition refinement, preceded by reachability
// trimming. Optional pre-pass: analysis never requires it, but a smaller
// automaton shrinks the witness search space.
inline Dfao minimize(const Dfao& d0) {
    Dfao d = detail::trim_unreachable(d0);
    std::size_t n = d.state_count();
    std::vector<std::size_t> cls(n);
    {
        std::map<Rat, std::size_t> by_output;
        for (std::size_t s = 0; s < n; ++s)
            cls[s] = by_output.try_emplace(d.outputs[s], by_output.size()).first->second;
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> sig_to_class;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::size_t> sig{cls[s]};
            for (std::size_t t : d.transitions[s]) sig.push_back(cls[t]);
            next[s] = sig_to_class.try_emplace(std::move(sig), sig_to_class.size()).first->second;
        }
        if (next == cls) break;
        cls = std::move(next);
    }
    // Renumber classes by first occurrence, scanning states in order.
    std::size_t num_classes = 0;
    std::vector<std::size_t> renum(n, SIZE_MAX);
    std::vector<std::size_t> rep;
    for (std::size_t s = 0; s < n; ++s)
        if (renum[cls[s]] == SIZE_MAX) {
            renum[cls[s]] = num_classes++;
            rep.push_back(s);
        }
    Dfao r;
    r.base = d.base;
    r.initial = renum[cls[d.initial]];
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t s = rep[c];
        r.outputs.push_back(d.outputs[s]);
        std::vector<std::size_t> row(d.base);
        for (std::uint64_t x = 0; x < d.base; ++x) row[x] = renum[cls[d.transitions[s][x]]];
        r.transitions.push_back(std::move(row));
    }
    return detail::trim_unreachable(r);
}

inline Rat max_output(const Dfao& d) {
    Rat m = 0;
    for (const Rat& o : d.outputs)
        if (o > m) m = o;
    return m;
}

// Outputs mapped to M - h(n) with M the maximum output.
inline Dfao reflect_outputs(const Dfao& d) {
    Dfao r = d;
    Rat m = max_output(d);
    for (Rat& o : r.outputs) o = m - o;
    return r;
}

// A DFAO whose outputs are all 0 or 1: the characteristic automaton of a
// k-automatic set.
struct AutomaticSet {
    Dfao dfao;

    explicit AutomaticSet(Dfao d) : dfao(std::move(d)) {
        dfao.validate();
        for (const Rat& o : dfao.outputs)
            if (o != 0 && o != 1)
                throw std::invalid_argument("automatic set outputs must be 0 or 1");
    }

    bool contains(const Int& n) const { return eval(dfao, n) == 1; }
};

inline AutomaticSet complement(const AutomaticSet& s) {
    Dfao d = s.dfao;
    for (Rat& o : d.outputs) o = Rat(1) - o;
    return AutomaticSet(std::move(d));
}

}  // namespace densic

#endif
