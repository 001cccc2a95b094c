#pragma once

#include "helpsl2/cyclotomic.hpp"
#include "helpsl2/numtheory.hpp"
#include "helpsl2/psl2.hpp"
#include "helpsl2/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace helpsl2 {

inline long long ipow_checked(long long base, int exp)
{
    long long out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > (1LL << 40) / base)
            throw std::invalid_argument("ipow_checked: power too large");
        out *= base;
    }
    return out;
}

// Classes eligible to carry a partial augmentation of a normalized unit of
// order r^m: element order must divide the unit order (classical vanishing
// result), and the identity is excluded (Berman-Higman). Grouped by element
// order ascending, ids ascending inside a group.
inline std::vector<int> eligible_classes(const GroupData& g, long long r, int m)
{
    std::vector<int> out;
    long long ord = 1;
    for (int j = 1; j <= m; ++j) {
        ord *= r;
        for (int id : g.classes_of_order(ord))
            out.push_back(id);
    }
    return out;
}

// Partial augmentations of one torsion unit, dense over the eligible
// classes for its order (entries may be zero, keys never missing).
struct PAVector {
    long long unit_order = 1;
    std::map<int, Int> entries;

    static PAVector make(const GroupData& g, long long r, int m, std::map<int, Int> entries)
    {
        PAVector v;
        v.unit_order = ipow_checked(r, m);
        v.entries = std::move(entries);
        std::vector<int> want = eligible_classes(g, r, m);
        std::sort(want.begin(), want.end());
        if (v.entries.size() != want.size())
            throw std::invalid_argument("PAVector: entries must cover exactly the eligible classes");
        Int sum = 0;
        auto it = v.entries.begin();
        for (int id : want) {
            if (it->first != id)
                throw std::invalid_argument("PAVector: entries must cover exactly the eligible classes");
            sum += it->second;
            ++it;
        }
        if (sum != 1)
            throw std::invalid_argument("PAVector: partial augmentations must sum to 1");
        return v;
    }
};

// levels[j] holds the partial augmentations of u^{r^j}; levels[0] is the
// unit itself (order r^n), the last level has order r.
struct PAChain {
    long long r = 2;
    int n = 1;
    std::vector<PAVector> levels;
};

// Exact eigenvalue multiplicities of one character on one unit: mu[e] is
// the multiplicity of zeta_modulus^e.
struct MultiplicityTable {
    int k = 0;
    long long modulus = 1;
    std::vector<Rat> mu;
};

struct ChainResult {
    PAChain chain;
    bool trivial = false;
    std::vector<MultiplicityTable> tables;
};

struct EnumerateOptions {
    // Require partial augmentations over the classes of each order r^m,
    // m strictly below the unit order exponent, to sum to zero. This is a
    // theorem about torsion units of prime-power order in these group
    // rings, independent of the multiplicity constraints.
    bool power_sum_rule = true;
};

// chi_k evaluated on a unit via its partial augmentations, as a formal
// root-of-unity sum at the given conductor.
inline CycloSum char_value_of_unit(const GroupData& g, int k, const PAVector& pa,
                                   long long conductor)
{
    BrauerChar chi(g, k);
    CycloSum acc(conductor);
    for (const auto& [cid, eps] : pa.entries) {
        if (eps == 0)
            continue;
        acc += chi.value_at_conductor(g.class_by_id(cid), conductor).scaled(eps);
    }
    return acc;
}

// Multiplicity of zeta_N^e as an eigenvalue of chi_k on the top unit of the
// chain, via the full divisor sum over the powers u^{r^j}.
inline Rat multiplicity_general(const GroupData& g, int k, const PAChain& chain, long long e)
{
    if (chain.levels.empty() || static_cast<int>(chain.levels.size()) != chain.n)
        throw std::invalid_argument("multiplicity_general: chain has wrong number of levels");
    const long long N = chain.levels.front().unit_order;
    Int acc = 2LL * k + 1;
    long long cond = N;
    for (int j = 0; j < chain.n; ++j) {
        const CycloSum value = char_value_of_unit(g, k, chain.levels[j], cond);
        acc += value.mul_by_root(-e).trace_to_q();
        cond /= chain.r;
    }
    return Rat(acc, Int(N));
}

// Same multiplicity through the one-step recursion: the table of u^r plus
// the trace contribution of the top-level partial augmentations.
inline Rat multiplicity_primepower(const GroupData& g, int k, const PAChain& chain,
                                   long long e, const MultiplicityTable& table_ur)
{
    const long long N = chain.levels.front().unit_order;
    const long long prev = N / chain.r;
    if (table_ur.modulus != prev || table_ur.k != k)
        throw std::invalid_argument("multiplicity_primepower: table does not match u^r");
    long long em = e % prev;
    if (em < 0)
        em += prev;
    Rat acc = table_ur.mu[static_cast<size_t>(em)] / chain.r;
    const CycloSum value = char_value_of_unit(g, k, chain.levels.front(), N);
    acc += Rat(value.mul_by_root(-e).trace_to_q(), Int(N));
    return acc;
}

struct AdmissibilityResult {
    bool admissible = false;
    std::vector<MultiplicityTable> tables;
};

// Pure multiplicity test for the top level of a chain: every mu must be a
// non-negative integer. Structural rules (like the power sum rule) are
// deliberately not applied here; this is the raw constraint system.
inline AdmissibilityResult admissibility_check(const GroupData& g, const std::vector<int>& char_ks,
                                               const PAChain& chain)
{
    AdmissibilityResult res;
    res.admissible = true;
    const long long N = chain.levels.front().unit_order;
    for (int k : char_ks) {
        MultiplicityTable table;
        table.k = k;
        table.modulus = N;
        table.mu.reserve(static_cast<size_t>(N));
        for (long long e = 0; e < N; ++e) {
            Rat mu = multiplicity_general(g, k, chain, e);
            if (!is_integer(mu) || mu < 0)
                res.admissible = false;
            table.mu.push_back(std::move(mu));
        }
        res.tables.push_back(std::move(table));
    }
    return res;
}

inline bool is_trivial_chain(const GroupData& g, const PAChain& chain)
{
    const PAVector& top = chain.levels.front();
    int base_class = -1;
    for (const auto& [cid, eps] : top.entries) {
        if (eps == 0)
            continue;
        if (eps != 1 || base_class != -1)
            return false;
        base_class = cid;
    }
    if (base_class < 0)
        return false;
    if (g.class_by_id(base_class).element_order != top.unit_order)
        return false;
    long long pw = 1;
    for (size_t j = 1; j < chain.levels.size(); ++j) {
        pw *= chain.r;
        const int expect = g.power_class(base_class, pw);
        for (const auto& [cid, eps] : chain.levels[j].entries) {
            if (eps != (cid == expect ? 1 : 0))
                return false;
        }
    }
    return true;
}

// Character choice known to close the standard instances: enough
// characters to separate the r^{n-1}+1 relevant eigenvalue patterns, but
// never more than the torus sizes admit distinct ones.
inline std::vector<int> default_character_set(const GroupData& g, long long r, int n)
{
    const long long torus = std::max(g.order_a(), g.order_b()) - 1;
    long long count = std::min(ipow_checked(r, n - 1) + 1, torus);
    if (count < 1)
        count = 1;
    std::vector<int> ks;
    for (long long k = 1; k <= count; ++k)
        ks.push_back(static_cast<int>(k));
    return ks;
}

inline unsigned resolve_thread_count()
{
    if (const char* env = std::getenv("HELP_PSL2_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<unsigned>(std::min<long>(v, 64));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : std::min(hc, 16u);
}

namespace detail {

inline int compare_pa(const PAVector& a, const PAVector& b)
{
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    for (; ia != a.entries.end() && ib != b.entries.end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            return ia->first < ib->first ? -1 : 1;
        if (ia->second != ib->second)
            return ia->second < ib->second ? -1 : 1;
    }
    if (a.entries.size() != b.entries.size())
        return a.entries.size() < b.entries.size() ? -1 : 1;
    return 0;
}

inline bool chain_less(const PAChain& a, const PAChain& b)
{
    const size_t levels = std::min(a.levels.size(), b.levels.size());
    for (size_t j = 0; j < levels; ++j) {
        const int c = compare_pa(a.levels[j], b.levels[j]);
        if (c != 0)
            return c < 0;
    }
    return a.levels.size() < b.levels.size();
}

// Chain under construction, bottom-up: levels[0] has order r, the back has
// the current top order. tables[ci][e] holds N * mu(e) for char index ci.
struct WorkChain {
    std::vector<PAVector> levels;
    std::vector<std::vector<Int>> tables;
};

// Everything fixed for one extension step (target order N), shared
// read-only between worker threads.
struct LevelContext {
    const GroupData* group = nullptr;
    long long r = 2;
    int m = 1;
    long long N = 1;
    long long prev_N = 1;
    long long bound = 1;
    bool power_sum_rule = true;
    std::vector<int> char_ks;

    std::vector<int> eligible;
    std::vector<long long> orders;     // element order per eligible slot
    std::vector<size_t> group_end;     // one past the last slot of the slot's order group
    // coeff[ci][slot*N + e] = Tr(chi(x_slot) * zeta_N^{-e}), an integer.
    std::vector<std::vector<Int>> coeff;
    // suffix_abs[ci][slot*N + e] = sum over slots >= slot of |coeff|.
    std::vector<std::vector<Int>> suffix_abs;
    std::vector<Int> cap;              // N * degree per char

    LevelContext(const GroupData& g, long long r_, int m_, const std::vector<int>& ks,
                 long long bound_, const EnumerateOptions& opts)
        : group(&g), r(r_), m(m_), N(ipow_checked(r_, m_)), prev_N(N / r_), bound(bound_),
          power_sum_rule(opts.power_sum_rule), char_ks(ks)
    {
        eligible = eligible_classes(g, r, m);
        const size_t K = eligible.size();
        orders.resize(K);
        for (size_t i = 0; i < K; ++i)
            orders[i] = g.class_by_id(eligible[i]).element_order;
        group_end.resize(K);
        for (size_t i = K; i-- > 0;)
            group_end[i] = (i + 1 < K && orders[i + 1] == orders[i]) ? group_end[i + 1] : i + 1;

        const size_t n_e = static_cast<size_t>(N);
        std::vector<long long> trace;
        trace.reserve(n_e);
        for (long long e = 0; e < N; ++e)
            trace.push_back(trace_cyclo(N, e));

        coeff.assign(char_ks.size(), std::vector<Int>(K * n_e, 0));
        suffix_abs.assign(char_ks.size(), std::vector<Int>((K + 1) * n_e, 0));
        for (size_t ci = 0; ci < char_ks.size(); ++ci) {
            BrauerChar chi(g, char_ks[ci]);
            cap.push_back(Int(N) * chi.degree());
            for (size_t slot = 0; slot < K; ++slot) {
                const CycloSum value = chi.value_at_conductor(g.class_by_id(eligible[slot]), N);
                for (long long e = 0; e < N; ++e) {
                    Int t = 0;
                    for (const auto& [exp, c] : value.coefficients()) {
                        long long shifted = (exp - e) % N;
                        if (shifted < 0)
                            shifted += N;
                        t += c * trace[static_cast<size_t>(shifted)];
                    }
                    coeff[ci][slot * n_e + static_cast<size_t>(e)] = std::move(t);
                }
            }
            for (size_t slot = K; slot-- > 0;) {
                for (size_t e = 0; e < n_e; ++e) {
                    Int a = coeff[ci][slot * n_e + e];
                    if (a < 0)
                        a = -a;
                    suffix_abs[ci][slot * n_e + e] = suffix_abs[ci][(slot + 1) * n_e + e] + a;
                }
            }
        }
    }
};

// Depth-first assignment of partial augmentations for one parent chain.
// One instance per worker thread; holds the mutable scratch state.
class LevelSolver {
public:
    LevelSolver(const LevelContext& ctx) : ctx_(ctx)
    {
        const size_t n_e = static_cast<size_t>(ctx_.N);
        partial_.assign(ctx_.char_ks.size(), std::vector<Int>(n_e, 0));
        base_.assign(ctx_.char_ks.size(), std::vector<Int>(n_e, 0));
        eps_.assign(ctx_.eligible.size(), 0);
    }

    void extend(const WorkChain& parent, std::vector<WorkChain>& out)
    {
        parent_ = &parent;
        out_ = &out;
        const size_t n_e = static_cast<size_t>(ctx_.N);
        for (size_t ci = 0; ci < ctx_.char_ks.size(); ++ci) {
            for (size_t e = 0; e < n_e; ++e) {
                base_[ci][e] = parent.tables[ci][e % static_cast<size_t>(ctx_.prev_N)];
                partial_[ci][e] = 0;
            }
        }
        dfs(0, 0, 0);
    }

private:
    // True when some final value >= 0, <= cap (when the slot suffix still
    // has freedom), and divisible by N is reachable inside the interval
    // [center - slack, center + slack].
    bool window_feasible(const Int& center, const Int& slack, const Int& cap) const
    {
        Int lo = center - slack;
        Int hi = center + slack;
        if (lo < 0)
            lo = 0;
        if (hi > cap)
            hi = cap;
        if (hi < lo)
            return false;
        const Int N(ctx_.N);
        return hi / N >= (lo + N - 1) / N;
    }

    bool prune(size_t next_slot) const
    {
        const size_t n_e = static_cast<size_t>(ctx_.N);
        const Int b(ctx_.bound);
        for (size_t ci = 0; ci < ctx_.char_ks.size(); ++ci) {
            const Int* suf = ctx_.suffix_abs[ci].data() + next_slot * n_e;
            for (size_t e = 0; e < n_e; ++e) {
                if (!window_feasible(base_[ci][e] + partial_[ci][e], b * suf[e], ctx_.cap[ci]))
                    return true;
            }
        }
        return false;
    }

    void emit()
    {
        WorkChain child;
        child.levels = parent_->levels;
        PAVector v;
        v.unit_order = ctx_.N;
        for (size_t i = 0; i < ctx_.eligible.size(); ++i)
            v.entries.emplace(ctx_.eligible[i], eps_[i]);
        child.levels.push_back(std::move(v));
        child.tables.resize(ctx_.char_ks.size());
        const size_t n_e = static_cast<size_t>(ctx_.N);
        for (size_t ci = 0; ci < ctx_.char_ks.size(); ++ci) {
            child.tables[ci].resize(n_e);
            for (size_t e = 0; e < n_e; ++e)
                child.tables[ci][e] = base_[ci][e] + partial_[ci][e];
        }
        out_->push_back(std::move(child));
    }

    void dfs(size_t slot, const Int& sum_total, const Int& sum_group)
    {
        const size_t K = ctx_.eligible.size();
        const Int b(ctx_.bound);
        if (slot == K) {
            if (sum_total != 1)
                return;
            if (ctx_.power_sum_rule && K > 0 && ctx_.orders.back() < ctx_.N && sum_group != 0)
                return;
            const size_t n_e = static_cast<size_t>(ctx_.N);
            const Int N(ctx_.N);
            for (size_t ci = 0; ci < ctx_.char_ks.size(); ++ci) {
                for (size_t e = 0; e < n_e; ++e) {
                    const Int m = base_[ci][e] + partial_[ci][e];
                    if (m < 0 || m % N != 0)
                        return;
                }
            }
            emit();
            return;
        }

        Int group = sum_group;
        if (slot > 0 && ctx_.orders[slot - 1] != ctx_.orders[slot]) {
            // Order group finished; its orders are < N here because groups
            // are ascending and another group follows.
            if (ctx_.power_sum_rule && group != 0)
                return;
            group = 0;
        }

        const size_t n_e = static_cast<size_t>(ctx_.N);
        const size_t n_chars = ctx_.char_ks.size();
        std::vector<const Int*> cols(n_chars);
        for (size_t ci = 0; ci < n_chars; ++ci)
            cols[ci] = ctx_.coeff[ci].data() + slot * n_e;

        const Int rest_total = Int(K - slot - 1) * b;
        const size_t in_group_rest = ctx_.group_end[slot] - slot - 1;
        const bool group_must_zero =
            ctx_.power_sum_rule && ctx_.orders[slot] < ctx_.N;

        for (long long v = -ctx_.bound; v <= ctx_.bound; ++v) {
            const Int new_total = sum_total + v;
            Int need = 1 - new_total;
            if (need < 0)
                need = -need;
            if (need > rest_total)
                continue;
            if (group_must_zero) {
                Int g = group + v;
                if (g < 0)
                    g = -g;
                // Later slots of this order group can still move the group
                // sum by at most bound each.
                if (g > Int(in_group_rest) * b)
                    continue;
            }
            if (v != 0) {
                for (size_t ci = 0; ci < n_chars; ++ci)
                    for (size_t e = 0; e < n_e; ++e)
                        partial_[ci][e] += v * cols[ci][e];
            }
            eps_[slot] = v;
            if (!prune(slot + 1))
                dfs(slot + 1, new_total, group + v);
            if (v != 0) {
                for (size_t ci = 0; ci < n_chars; ++ci)
                    for (size_t e = 0; e < n_e; ++e)
                        partial_[ci][e] -= v * cols[ci][e];
            }
        }
    }

    const LevelContext& ctx_;
    const WorkChain* parent_ = nullptr;
    std::vector<WorkChain>* out_ = nullptr;
    std::vector<std::vector<Int>> partial_;
    std::vector<std::vector<Int>> base_;
    std::vector<Int> eps_;

    friend void extend_level(const LevelContext&, const std::vector<WorkChain>&,
                             std::vector<WorkChain>&);
};

inline void extend_level(const LevelContext& ctx, const std::vector<WorkChain>& parents,
                         std::vector<WorkChain>& out)
{
    const unsigned threads = std::min<unsigned>(resolve_thread_count(),
                                                static_cast<unsigned>(std::max<size_t>(parents.size(), 1)));
    std::vector<std::vector<WorkChain>> per_parent(parents.size());
    if (threads <= 1 || parents.size() <= 1) {
        LevelSolver solver(ctx);
        for (size_t i = 0; i < parents.size(); ++i)
            solver.extend(parents[i], per_parent[i]);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                LevelSolver solver(ctx);
                for (size_t i = next.fetch_add(1); i < parents.size(); i = next.fetch_add(1))
                    solver.extend(parents[i], per_parent[i]);
            });
        }
        for (auto& th : pool)
            th.join();
    }
    for (auto& block : per_parent)
        for (auto& chain : block)
            out.push_back(std::move(chain));
}

} // namespace detail

// Bottom-up enumeration of all admissible chains for units of order r^n:
// level by level, every partial augmentation vector within the box
// [-bound, bound] whose multiplicity tables are non-negative integers and
// which satisfies the structural rules, for every admissible parent.
inline std::vector<ChainResult> enumerate_pa_detailed(const GroupData& g, long long r, int n,
                                                      const std::vector<int>& char_ks,
                                                      long long bound,
                                                      EnumerateOptions opts = {})
{
    if (!is_prime(r))
        throw std::invalid_argument("enumerate: r must be prime");
    if (r == g.p())
        throw std::domain_error("enumerate: unit order sharing the group characteristic "
                                "is outside the scope of this character method");
    if (n < 1)
        throw std::invalid_argument("enumerate: n must be >= 1");
    if (bound < 1)
        throw std::invalid_argument("enumerate: bound must be >= 1");
    if (char_ks.empty())
        throw std::invalid_argument("enumerate: need at least one character");
    for (int k : char_ks)
        if (k < 0)
            throw std::invalid_argument("enumerate: character index must be >= 0");
    if (ipow_checked(r, n) > (1LL << 20))
        throw std::invalid_argument("enumerate: unit order r^n too large");

    std::vector<detail::WorkChain> chains(1);
    chains[0].tables.reserve(char_ks.size());
    for (int k : char_ks)
        chains[0].tables.push_back({Int(2LL * k + 1)});

    for (int m = 1; m <= n; ++m) {
        const detail::LevelContext ctx(g, r, m, char_ks, bound, opts);
        std::vector<detail::WorkChain> next;
        detail::extend_level(ctx, chains, next);
        chains = std::move(next);
        if (chains.empty())
            break;
    }

    std::vector<ChainResult> out;
    out.reserve(chains.size());
    const long long N = ipow_checked(r, n);
    for (auto& work : chains) {
        ChainResult res;
        res.chain.r = r;
        res.chain.n = n;
        res.chain.levels.assign(work.levels.rbegin(), work.levels.rend());
        res.trivial = is_trivial_chain(g, res.chain);
        for (size_t ci = 0; ci < char_ks.size(); ++ci) {
            MultiplicityTable table;
            table.k = char_ks[ci];
            table.modulus = N;
            table.mu.reserve(work.tables[ci].size());
            for (const Int& m : work.tables[ci])
                table.mu.emplace_back(m, Int(N));
            res.tables.push_back(std::move(table));
        }
        out.push_back(std::move(res));
    }
    std::sort(out.begin(), out.end(), [](const ChainResult& a, const ChainResult& b) {
        return detail::chain_less(a.chain, b.chain);
    });
    return out;
}

inline std::vector<PAChain> enumerate_pa(const GroupData& g, long long r, int n,
                                         const std::vector<int>& char_ks, long long bound,
                                         EnumerateOptions opts = {})
{
    std::vector<PAChain> out;
    for (auto& res : enumerate_pa_detailed(g, r, n, char_ks, bound, opts))
        out.push_back(std::move(res.chain));
    return out;
}

struct SolverReport {
    long long r = 2;
    int n = 1;
    std::vector<int> characters;
    long long bound = 1;
    bool elements_exist = false;
    std::vector<ChainResult> chains;
    bool verified = false;
};

// Full check for one group and one unit order: enumerate everything the
// constraints admit and test whether each survivor matches a group element
// class (i.e. is trivial). verified == true means units of order r^n are
// rationally conjugate to group elements (vacuously so when nothing has
// that order).
inline SolverReport verify_theorem1(const GroupData& g, long long r, int n,
                                    const std::vector<int>& char_ks, long long bound,
                                    EnumerateOptions opts = {})
{
    SolverReport rep;
    rep.r = r;
    rep.n = n;
    rep.characters = char_ks;
    rep.bound = bound;
    rep.elements_exist = !g.classes_of_order(ipow_checked(r, n)).empty();
    rep.chains = enumerate_pa_detailed(g, r, n, char_ks, bound, opts);
    rep.verified = true;
    for (const auto& chain : rep.chains)
        if (!chain.trivial)
            rep.verified = false;
    return rep;
}

} // namespace helpsl2
