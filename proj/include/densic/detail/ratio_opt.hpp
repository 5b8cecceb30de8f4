#ifndef DENSIC_DETAIL_RATIO_OPT_HPP
#define DENSIC_DETAIL_RATIO_OPT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <cstdlib>
#include <iostream>
#include <thread>
#include <utility>
#include <vector>

#include "densic/asymptotics.hpp"
#include "densic/kernel.hpp"
#include "densic/rational.hpp"

namespace densic {

struct DensityOptions {
    // Budget for elementary optimizer steps; exceeding it raises
    // infeasible_error rather than returning a truncated answer.
    std::uint64_t max_work = 100'000'000;
    unsigned threads = 1;
};

namespace detail {

struct LassoWitness {
    Word a_word;
    Word b_word;
    std::uint64_t j = 0;
};

// Exact maximization of the candidate value
//   ( kappa_{A,j} + kappa'_{B,j} / (k^|B| - 1) ) /
//   ( [A]_k      + [B]_k        / (k^|B| - 1) )
// over all words A (no leading zero), B with lengths positive multiples of
// the period a and the state-return constraint delta(delta(1,A), B) =
// delta(1,A), for all j.
//
// Every such candidate is an eventually periodic digit path, and for a
// path w read from the initial kernel state the value equals R(w) =
// Y(w)/X(w) with
//   Y(w) = sum_T k^-(T+1) * sum_{y < w_T} c[(j-1-T) mod a][delta(1, w_<T y)]
//   X(w) = sum_T k^-(T+1) * w_T
// because e_r^T B^m c_j = k^m c[(j+m) mod a][r] exactly. Maximizing R over
// infinite digit paths is a deterministic discounted control problem on
// the (kernel state, residue phase) graph, so the optimum is attained by
// an eventually periodic path and can be found exactly by Dinkelbach
// iteration with policy iteration solving each linearized subproblem.
class RatioOptimizer {
  public:
    RatioOptimizer(const KernelSystem& ks, const AsymptoticTable& table,
                   const DensityOptions& opt)
        : ks_(ks), tbl_(table), opt_(opt), d_(ks.d), a_(table.a),
          k_(ks.k), n_(d_ * static_cast<std::size_t>(a_)) {
        if (n_ == 0) throw std::invalid_argument("empty kernel system");
        if (n_ > 5'000'000 || n_ * k_ > opt_.max_work)
            throw infeasible_error("state-phase graph exceeds the work budget");
        succ_.resize(n_ * k_);
        base_.resize(n_ * k_);
        for (std::size_t q = 0; q < d_; ++q)
            for (std::uint64_t phi = 0; phi < a_; ++phi) {
                std::size_t s = q * a_ + phi;
                std::uint64_t phi_next = (phi + a_ - 1) % a_;
                Rat acc = 0;
                for (std::uint64_t x = 0; x < k_; ++x) {
                    succ_[s * k_ + x] = ks_.trans[q][x] * a_ + phi_next;
                    base_[s * k_ + x] = acc;
                    acc += tbl_.c[phi][ks_.trans[q][x]];
                }
            }
    }

    // (maximum candidate value, witness lasso). `canonical` asks for the
    // lexicographically least maximizer under the (j, |A|+|B|, A, B)
    // order when the search fits the budget.
    std::pair<Rat, LassoWitness> run() {
        // Any subsequential limit of s(n)/n bounds the limsup from below;
        // the census constants of the initial state are such limits, so
        // the largest one is a sound starting point.
        lambda_ = 0;
        for (const Vec& col : tbl_.c)
            if (col[0] > lambda_) lambda_ = col[0];
        policy_.assign(n_, 0);
        w_.assign(n_, Rat(0));
        for (std::uint64_t round = 0; round < 100'000; ++round) {
            solve_policy();
            auto [f, start_j, start_x] = best_start();
            if (f == 0) return {lambda_, extract_witness()};
            if (f < 0) throw std::logic_error("ratio iteration overshot its own optimum");
            Rat next = lasso_ratio(start_j, start_x);
            if (!(next > lambda_))
                throw std::logic_error("ratio iteration failed to make progress");
            lambda_ = next;
        }
        throw infeasible_error("ratio iteration budget exhausted");
    }

  private:
    const KernelSystem& ks_;
    const AsymptoticTable& tbl_;
    DensityOptions opt_;
    std::size_t d_;
    std::uint64_t a_;
    std::uint64_t k_;
    std::size_t n_;
    std::vector<std::size_t> succ_;
    std::vector<Rat> base_;  // lambda-free reward prefix sums

    Rat lambda_;
    std::vector<Rat> lambda_x_;  // lambda * x per digit
    std::vector<unsigned> policy_;
    std::vector<Rat> w_;
    std::uint64_t work_ = 0;

    void charge(std::uint64_t units) {
        work_ += units;
        if (work_ > opt_.max_work)
            throw infeasible_error("optimizer exceeded the work budget (raise --max-candidates)");
    }

    std::size_t start_state(std::uint64_t j) const { return (j + a_ - 1) % a_; }
    std::uint64_t phase_of(std::size_t s) const { return s % a_; }

    Rat reward(std::size_t s, unsigned x) const {
        return base_[s * k_ + x] - lambda_x_[x];
    }

    // Value of the current policy: the successor graph is functional, so
    // each component is a rho shape; the cycle value closes a geometric
    // series and tails back-substitute.
    void evaluate_policy() {
        charge(n_ * 2);
        std::vector<unsigned char> color(n_, 0);
        std::vector<std::size_t> path;
        Rat k_rat = Rat(k_);
        for (std::size_t s0 = 0; s0 < n_; ++s0) {
            if (color[s0]) continue;
            path.clear();
            std::size_t s = s0;
            while (color[s] == 0) {
                color[s] = 1;
                path.push_back(s);
                s = succ_[s * k_ + policy_[s]];
            }
            if (color[s] == 1) {
                std::size_t idx = 0;
                while (path[idx] != s) ++idx;
                std::size_t len = path.size() - idx;
                // w(s) = [ sum_{i<len} k^(len-1-i) g_i ] / (k^len - 1)
                Rat num = 0;
                for (std::size_t i = idx; i < path.size(); ++i)
                    num = num * k_rat + reward(path[i], policy_[path[i]]);
                Rat den = Rat(int_pow(Int(k_), len)) - 1;
                w_[s] = num / den;
                for (std::size_t i = path.size(); i-- > idx + 1;)
                    w_[path[i]] =
                        (reward(path[i], policy_[path[i]]) + w_[succ_[path[i] * k_ + policy_[path[i]]]]) / k_rat;
                for (std::size_t i = idx; i < path.size(); ++i) color[path[i]] = 2;
                path.resize(idx);
            }
            for (std::size_t i = path.size(); i-- > 0;) {
                w_[path[i]] =
                    (reward(path[i], policy_[path[i]]) + w_[succ_[path[i] * k_ + policy_[path[i]]]]) / k_rat;
                color[path[i]] = 2;
            }
        }
    }

    // One synchronous improvement sweep. Smallest digit among strict
    // improvements; returns whether anything changed.
    bool improve_policy() {
        charge(n_ * k_);
        std::vector<unsigned> next(policy_);
        auto sweep = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t s = lo; s < hi; ++s) {
                Rat best = Rat(k_) * w_[s];
                unsigned best_x = policy_[s];
                bool better = false;
                for (unsigned x = 0; x < k_; ++x) {
                    Rat q = reward(s, x) + w_[succ_[s * k_ + x]];
                    if (q > best) {
                        best = q;
                        best_x = x;
                        better = true;
                    }
                }
                if (better) next[s] = best_x;
            }
        };
        unsigned threads = opt_.threads;
        if (threads > 1 && n_ * k_ >= 65536) {
            std::vector<std::thread> pool;
            std::size_t chunk = (n_ + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                std::size_t lo = std::min(n_, t * chunk);
                std::size_t hi = std::min(n_, lo + chunk);
                if (lo < hi) pool.emplace_back(sweep, lo, hi);
            }
            for (auto& th : pool) th.join();
        } else {
            sweep(0, n_);
        }
        if (next == policy_) return false;
        policy_ = std::move(next);
        return true;
    }

    void solve_policy() {
        lambda_x_.clear();
        for (std::uint64_t x = 0; x < k_; ++x) lambda_x_.push_back(lambda_ * Rat(x));
        std::uint64_t rounds = 0;
        for (;;) {
            evaluate_policy();
            ++rounds;
            if (!improve_policy()) break;
        }
        if (std::getenv("DENSIC_DEBUG"))
            std::cerr << "  [opt] lambda=" << lambda_ << " pi-rounds=" << rounds << "\n";
    }

    // F(lambda) = max over start phase and first digit >= 1 of the
    // discounted value; zero exactly when lambda is the optimum.
    std::tuple<Rat, std::uint64_t, unsigned> best_start() {
        bool have = false;
        Rat best = 0;
        std::uint64_t best_j = 0;
        unsigned best_x = 1;
        for (std::uint64_t j = 0; j < a_; ++j) {
            std::size_t s0 = start_state(j);
            for (unsigned x = 1; x < k_; ++x) {
                Rat v = reward(s0, x) + w_[succ_[s0 * k_ + x]];
                if (!have || v > best) {
                    have = true;
                    best = v;
                    best_j = j;
                    best_x = x;
                }
            }
        }
        return {best / Rat(k_), best_j, best_x};
    }

    // Digit stream of the lasso that starts at phase j with digit x and
    // then follows the current policy: prefix digits, cycle digits.
    std::pair<Word, Word> policy_lasso(std::uint64_t j, unsigned x) const {
        std::vector<std::size_t> seq;  // states at positions >= 1
        Word digits{x};
        std::vector<std::size_t> pos(n_, SIZE_MAX);
        std::size_t s = succ_[start_state(j) * k_ + x];
        while (pos[s] == SIZE_MAX) {
            pos[s] = seq.size();
            seq.push_back(s);
            digits.push_back(policy_[s]);
            s = succ_[s * k_ + policy_[s]];
        }
        std::size_t entry = pos[s];  // cycle spans positions entry.. in seq
        Word pre(digits.begin(), digits.begin() + 1 + entry);
        Word cyc(digits.begin() + 1 + entry, digits.end());
        return {pre, cyc};
    }

    // Exact value ratio of an eventually periodic digit stream.
    Rat lasso_ratio(std::uint64_t j, unsigned x) {
        auto [pre, cyc] = policy_lasso(j, x);
        charge(pre.size() + cyc.size());
        Rat k_rat = Rat(k_);
        std::size_t s = start_state(j);
        Rat y_pre = 0, x_pre = 0, scale = 1;
        for (unsigned d : pre) {
            scale /= k_rat;
            y_pre += scale * base_[s * k_ + d];
            x_pre += scale * Rat(d);
            s = succ_[s * k_ + d];
        }
        Rat y_cyc = 0, x_cyc = 0, cscale = 1;
        for (unsigned d : cyc) {
            cscale /= k_rat;
            y_cyc += cscale * base_[s * k_ + d];
            x_cyc += cscale * Rat(d);
            s = succ_[s * k_ + d];
        }
        // geometric closure: total = pre + scale * cyc / (1 - k^-|cyc|)
        Rat closure = Rat(1) - cscale;
        Rat y = y_pre + scale * y_cyc / closure;
        Rat xv = x_pre + scale * x_cyc / closure;
        return y / xv;
    }

    // ---- maximizer extraction at F(lambda) == 0 ----

    bool edge_tight(std::size_t s, unsigned x) const {
        return base_[s * k_ + x] - lambda_x_[x] + w_[succ_[s * k_ + x]] == Rat(k_) * w_[s];
    }

    bool start_tight(std::uint64_t j, unsigned x) const {
        std::size_t s0 = start_state(j);
        return base_[s0 * k_ + x] - lambda_x_[x] + w_[succ_[s0 * k_ + x]] == 0;
    }

    // Rounds a tight greedy walk into a valid (A, B) pair: A runs to the
    // first multiple of the period at or after the cycle entry, B is one
    // full turn of the cycle from there.
    LassoWitness lasso_to_witness(std::uint64_t j, const Word& pre, const Word& cyc) const {
        auto digit_at = [&](std::size_t t) -> unsigned {
            return t < pre.size() ? pre[t] : cyc[(t - pre.size()) % cyc.size()];
        };
        std::size_t la = pre.size();
        if (la == 0) la = 1;
        la = ((la + a_ - 1) / a_) * a_;
        LassoWitness w;
        w.j = j;
        for (std::size_t t = 0; t < la; ++t) w.a_word.push_back(digit_at(t));
        for (std::size_t t = la; t < la + cyc.size(); ++t) w.b_word.push_back(digit_at(t));
        return w;
    }

    LassoWitness greedy_tight_witness(std::uint64_t j) const {
        unsigned first = 0;
        for (unsigned x = 1; x < k_; ++x)
            if (start_tight(j, x)) {
                first = x;
                break;
            }
        Word digits{first};
        std::vector<std::size_t> pos(n_, SIZE_MAX);
        std::vector<std::size_t> seq;
        std::size_t s = succ_[start_state(j) * k_ + first];
        while (pos[s] == SIZE_MAX) {
            pos[s] = seq.size();
            seq.push_back(s);
            unsigned pick = 0;
            for (unsigned x = 0; x < k_; ++x)
                if (edge_tight(s, x)) {
                    pick = x;
                    break;
                }
            digits.push_back(pick);
            s = succ_[s * k_ + pick];
        }
        std::size_t entry = pos[s];
        Word pre(digits.begin(), digits.begin() + 1 + entry);
        Word cyc(digits.begin() + 1 + entry, digits.end());
        return lasso_to_witness(j, pre, cyc);
    }

    // Lexicographically least maximizer under (j, |A|+|B|, A, B). Falls
    // back to the greedy tight lasso when the layered search would blow
    // the budget.
    LassoWitness extract_witness() {
        std::uint64_t j = 0;
        bool found = false;
        for (; j < a_; ++j) {
            for (unsigned x = 1; x < k_; ++x)
                if (start_tight(j, x)) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found) throw std::logic_error("optimum reached with no tight start");
        std::uint64_t lcap = (2 * static_cast<std::uint64_t>(d_) + 1) * a_;
        // layered searches cost about lcap * n * k per anchor
        if (lcap * n_ * k_ > 4'000'000 || n_ * n_ > 4'000'000)
            return greedy_tight_witness(j);
        return canonical_witness(j, static_cast<std::size_t>(lcap));
    }

    LassoWitness canonical_witness(std::uint64_t j, std::size_t lcap) {
        std::size_t s0 = start_state(j);
        std::vector<unsigned char> start_ok(k_, 0);
        for (unsigned x = 1; x < k_; ++x) start_ok[x] = start_tight(j, x);
        // reach_a[t][s]: a tight A-prefix of length t ends at s
        std::vector<std::vector<unsigned char>> reach_a(lcap + 1,
                                                        std::vector<unsigned char>(n_, 0));
        for (unsigned x = 1; x < k_; ++x)
            if (start_ok[x]) reach_a[1][succ_[s0 * k_ + x]] = 1;
        for (std::size_t t = 1; t < lcap; ++t) {
            charge(n_);
            for (std::size_t s = 0; s < n_; ++s) {
                if (!reach_a[t][s]) continue;
                for (unsigned x = 0; x < k_; ++x)
                    if (edge_tight(s, x)) reach_a[t + 1][succ_[s * k_ + x]] = 1;
            }
        }
        // back_to[anchor][r][s]: a tight path of length r runs s -> anchor
        std::vector<std::vector<std::vector<unsigned char>>> back_to(n_);
        auto backward = [&](std::size_t anchor, std::size_t rmax) -> const auto& {
            auto& table = back_to[anchor];
            if (table.size() > rmax) return table;
            if (table.empty()) {
                table.emplace_back(n_, 0);
                table[0][anchor] = 1;
            }
            while (table.size() <= rmax) {
                charge(n_);
                std::vector<unsigned char> layer(n_, 0);
                const auto& prev = table.back();
                for (std::size_t s = 0; s < n_; ++s)
                    for (unsigned x = 0; x < k_; ++x)
                        if (edge_tight(s, x) && prev[succ_[s * k_ + x]]) {
                            layer[s] = 1;
                            break;
                        }
                table.push_back(std::move(layer));
            }
            return table;
        };
        // minimal total length
        std::size_t best_total = 0;
        for (std::size_t total = 2 * a_; total <= lcap && !best_total; total += a_) {
            for (std::size_t la = a_; la + a_ <= total; la += a_) {
                std::size_t lb = total - la;
                for (std::size_t s = 0; s < n_; ++s) {
                    if (!reach_a[la][s] || phase_of(s) != phase_of(s0)) continue;
                    const auto& bt = backward(s, lb);
                    if (bt[lb][s]) {
                        best_total = total;
                        break;
                    }
                }
                if (best_total) break;
            }
        }
        if (!best_total) return greedy_tight_witness(j);
        // feas[t][s]: a valid completion exists from s after t A-digits
        std::size_t tmax = best_total - a_;
        std::vector<std::vector<unsigned char>> feas(tmax + 1, std::vector<unsigned char>(n_, 0));
        auto stop_ok = [&](std::size_t s, std::size_t t) {
            if (t < a_ || phase_of(s) != phase_of(s0)) return false;
            const auto& bt = backward(s, best_total - t);
            return bt[best_total - t][s] != 0;
        };
        for (std::size_t t = tmax + 1; t-- > 1;) {
            charge(n_);
            for (std::size_t s = 0; s < n_; ++s) {
                if (stop_ok(s, t)) {
                    feas[t][s] = 1;
                    continue;
                }
                if (t == tmax) continue;
                for (unsigned x = 0; x < k_; ++x)
                    if (edge_tight(s, x) && feas[t + 1][succ_[s * k_ + x]]) {
                        feas[t][s] = 1;
                        break;
                    }
            }
        }
        // greedy A: stop as soon as possible, otherwise smallest digit
        LassoWitness w;
        w.j = j;
        std::size_t s = s0, t = 0;
        while (!(t > 0 && stop_ok(s, t))) {
            bool moved = false;
            for (unsigned x = (t == 0 ? 1u : 0u); x < k_; ++x) {
                bool ok = t == 0 ? (start_ok[x] != 0) : edge_tight(s, x);
                if (!ok) continue;
                std::size_t nxt = succ_[s * k_ + x];
                if (t + 1 <= tmax && feas[t + 1][nxt]) {
                    w.a_word.push_back(x);
                    s = nxt;
                    ++t;
                    moved = true;
                    break;
                }
            }
            if (!moved) throw std::logic_error("canonical witness search lost feasibility");
        }
        // greedy B: smallest tight cycle digits of exact length
        std::size_t lb = best_total - t;
        const auto& bt = backward(s, lb);
        std::size_t cur = s;
        for (std::size_t r = lb; r-- > 0;) {
            bool moved = false;
            for (unsigned x = 0; x < k_; ++x) {
                if (!edge_tight(cur, x)) continue;
                std::size_t nxt = succ_[cur * k_ + x];
                if (bt[r][nxt]) {
                    w.b_word.push_back(x);
                    cur = nxt;
                    moved = true;
                    break;
                }
            }
            if (!moved) throw std::logic_error("canonical witness cycle search lost feasibility");
        }
        return w;
    }
};

}  // namespace detail
}  // namespace densic

#endif
