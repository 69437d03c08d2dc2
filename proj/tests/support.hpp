// Reference computations for the tests.  Everything here works from the
// raw instance data and the definitions, never through the library's value
// matrix or query oracle, so a shared bug cannot hide on both sides.

#ifndef MIXFAIR_TESTS_SUPPORT_HPP
#define MIXFAIR_TESTS_SUPPORT_HPP

#include "mixfair/mixfair.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mixfair::ref {

inline std::string data_file(const std::string& name)
{
    std::ifstream in(std::string(MIXFAIR_DATA_DIR) + "/" + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// ∫_a^b of agent i's density by the trapezoid rule per segment, exact for
/// linear pieces.
inline Scalar integral(const Instance& inst, AgentIndex i, const Scalar& a, const Scalar& b)
{
    Scalar total = 0;
    for (const auto& s : inst.valuation(i).density()) {
        const Scalar lo = std::max(a, s.start);
        const Scalar hi = std::min(b, s.end);
        if (!(lo < hi)) continue;
        const Scalar w = s.end - s.start;
        auto f = [&](const Scalar& x) -> Scalar { return s.left_value + (s.right_value - s.left_value) * (x - s.start) / w; };
        total += (hi - lo) * (f(lo) + f(hi)) / 2;
    }
    return total;
}

inline Scalar cake_value(const Instance& inst, AgentIndex i, const IntervalSet& piece)
{
    Scalar total = 0;
    for (const auto& iv : piece) total += integral(inst, i, iv.start, iv.end);
    return total;
}

inline Scalar goods_value(const Instance& inst, AgentIndex i, const std::vector<GoodIndex>& goods)
{
    Scalar total = 0;
    for (GoodIndex g : goods) total += inst.utility(i, g);
    return total;
}

inline Scalar bundle_value(const Instance& inst, AgentIndex i, const Bundle& b)
{
    return goods_value(inst, i, b.goods) + cake_value(inst, i, b.cake);
}

/// Definition-level EFM with envy tolerance `eps` on the EF clause.
/// weak: the EF1 clause also covers bundles whose cake i values at zero.
inline bool efm(const Instance& inst, const Allocation& a, const Scalar& eps, const Scalar& slack, bool weak = false)
{
    const std::size_t n = inst.agent_count();
    for (AgentIndex i = 0; i < n; ++i) {
        const Scalar own = bundle_value(inst, i, a[i]);
        for (AgentIndex j = 0; j < n; ++j) {
            if (i == j) continue;
            const Scalar other = bundle_value(inst, i, a[j]);
            const bool ef1_side = a[j].cake.empty() || (weak && sgn(cake_value(inst, i, a[j].cake)) == 0);
            if (!ef1_side) {
                if (own + eps + slack < other) return false;
                continue;
            }
            if (own + slack >= other) continue;
            bool fixed = false;
            for (GoodIndex g : a[j].goods)
                if (own + slack >= other - inst.utility(i, g)) fixed = true;
            if (!fixed) return false;
        }
    }
    return true;
}

inline bool ef(const Instance& inst, const Allocation& a, const Scalar& slack = 0)
{
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
        for (AgentIndex j = 0; j < inst.agent_count(); ++j)
            if (bundle_value(inst, i, a[i]) + slack < bundle_value(inst, i, a[j])) return false;
    return true;
}

inline bool ef1(const Instance& inst, const Allocation& a)
{
    const std::size_t n = inst.agent_count();
    for (AgentIndex i = 0; i < n; ++i)
        for (AgentIndex j = 0; j < n; ++j) {
            const Scalar own = bundle_value(inst, i, a[i]);
            const Scalar other = bundle_value(inst, i, a[j]);
            if (i == j || own >= other) continue;
            bool fixed = false;
            for (GoodIndex g : a[j].goods)
                if (own >= other - inst.utility(i, g)) fixed = true;
            if (!fixed) return false;
        }
    return true;
}

/// Complete and disjoint: every good once, cake pieces partition [0, 1).
inline bool is_partition(const Instance& inst, const Allocation& a)
{
    std::vector<int> seen(inst.good_count(), 0);
    IntervalSet all = a.unallocated_cake;
    for (const auto& b : a.bundles) {
        for (GoodIndex g : b.goods) ++seen[g];
        if (!all.disjoint_from(b.cake)) return false;
        all = all.united(b.cake);
    }
    for (int c : seen)
        if (c != 1) return false;
    return all == IntervalSet::unit();
}

inline Instance instance_from(const std::string& json)
{
    return load_instance(json);
}

inline Instance generated(std::size_t n, std::size_t m, DensityKind kind, std::uint64_t seed, std::size_t segments = 3)
{
    GeneratorParams p;
    p.agents = n;
    p.goods = m;
    p.kind = kind;
    p.seed = seed;
    p.max_segments = segments;
    return generate_instance(p);
}

} // namespace mixfair::ref

#endif // MIXFAIR_TESTS_SUPPORT_HPP
