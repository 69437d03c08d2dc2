#ifndef MIXFAIR_INSTANCE_HPP
#define MIXFAIR_INSTANCE_HPP

#include "mixfair/errors.hpp"
#include "mixfair/interval_set.hpp"
#include "mixfair/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mixfair {

using AgentIndex = std::size_t;
using GoodIndex = std::size_t;

/// Linear density on [start, end): left_value at start, right_value at end.
struct DensitySegment
{
    Scalar start;
    Scalar end;
    Scalar left_value;
    Scalar right_value;

    bool is_constant() const { return left_value == right_value; }

    Scalar slope() const { return (right_value - left_value) / (end - start); }

    Scalar at(const Scalar& x) const
    {
        if (is_constant()) return left_value;
        return left_value + (right_value - left_value) * (x - start) / (end - start);
    }

    /// Exact integral over [a, b] ⊆ [start, end] (trapezoid is exact for linear).
    Scalar integral(const Scalar& a, const Scalar& b) const
    {
        if (is_constant()) return (b - a) * left_value;
        return (b - a) * (at(a) + at(b)) / 2;
    }

    Scalar max_value() const { return left_value > right_value ? left_value : right_value; }

    bool operator==(const DensitySegment&) const = default;
};

/// One agent's additive valuation: utilities for indivisible goods plus a
/// piecewise-linear density that covers the unit cake.
class AgentValuation
{
public:
    AgentValuation() = default;

    /// Validates non-negativity and contiguous coverage of [0, 1).
    /// `where` prefixes error locations.
    AgentValuation(std::vector<Scalar> good_utilities, std::vector<DensitySegment> density,
                   const std::string& where = {})
        : goods_(std::move(good_utilities)), density_(std::move(density))
    {
        for (std::size_t g = 0; g < goods_.size(); ++g)
            if (sgn(goods_[g]) < 0)
                throw InstanceError(where, "negative utility for good #" + std::to_string(g));
        if (density_.empty()) throw InstanceError(where, "density has no segments");
        Scalar cursor = 0;
        for (std::size_t k = 0; k < density_.size(); ++k) {
            const auto& s = density_[k];
            const std::string at = where + "/density/" + std::to_string(k);
            if (s.start != cursor)
                throw InstanceError(at, "segment starts at " + to_string(s.start) + ", expected "
                                            + to_string(cursor) + " (segments must be contiguous)");
            if (!(s.start < s.end)) throw InstanceError(at, "segment has start >= end");
            if (sgn(s.left_value) < 0 || sgn(s.right_value) < 0)
                throw InstanceError(at, "negative density value");
            cursor = s.end;
        }
        if (cursor != 1)
            throw InstanceError(where, "density covers [0, " + to_string(cursor) + ") instead of [0, 1)");
        rebuild_prefix();
    }

    const std::vector<Scalar>& good_utilities() const { return goods_; }
    const Scalar& good(GoodIndex g) const { return goods_[g]; }
    const std::vector<DensitySegment>& density() const { return density_; }

    bool is_piecewise_constant() const
    {
        return std::all_of(density_.begin(), density_.end(),
                           [](const DensitySegment& s) { return s.is_constant(); });
    }

    /// Index of the segment containing x (x = 1 maps to the last segment).
    std::size_t segment_of(const Scalar& x) const
    {
        auto it = std::upper_bound(density_.begin(), density_.end(), x,
                                   [](const Scalar& v, const DensitySegment& s) { return v < s.start; });
        if (it == density_.begin()) return 0;
        return static_cast<std::size_t>(std::distance(density_.begin(), it)) - 1;
    }

    /// Cumulative cake value on [0, x].
    Scalar cumulative(const Scalar& x) const
    {
        const std::size_t k = segment_of(x);
        const auto& seg = density_[k];
        if (x == seg.start) return prefix_[k];
        // ∫_start^x f = d·(f(start) + slope/2·d), d = x − start
        Scalar d = x - seg.start;
        if (sgn(half_slope_[k]) == 0) {
            d *= seg.left_value;
        } else {
            Scalar rate = half_slope_[k] * d;
            rate += seg.left_value;
            d *= rate;
        }
        d += prefix_[k];
        return d;
    }

    /// Cumulative value at the start of segment k (k == size() gives the total).
    const Scalar& prefix(std::size_t k) const { return prefix_[k]; }

    Scalar cake_total() const { return prefix_.back(); }

    Scalar goods_total() const
    {
        Scalar t = 0;
        for (const auto& u : goods_) t += u;
        return t;
    }

    std::vector<Scalar> breakpoints() const
    {
        std::vector<Scalar> b;
        b.reserve(density_.size() + 1);
        for (const auto& s : density_) b.push_back(s.start);
        b.push_back(density_.back().end);
        return b;
    }

    AgentValuation scaled(const Scalar& factor) const
    {
        AgentValuation v = *this;
        for (auto& u : v.goods_) u *= factor;
        for (auto& s : v.density_) {
            s.left_value *= factor;
            s.right_value *= factor;
        }
        v.rebuild_prefix();
        return v;
    }

private:
    void rebuild_prefix()
    {
        prefix_.assign(density_.size() + 1, Scalar(0));
        half_slope_.assign(density_.size(), Scalar(0));
        for (std::size_t k = 0; k < density_.size(); ++k) {
            prefix_[k + 1] = prefix_[k] + density_[k].integral(density_[k].start, density_[k].end);
            if (!density_[k].is_constant()) half_slope_[k] = density_[k].slope() / 2;
        }
    }

    std::vector<Scalar> goods_;
    std::vector<DensitySegment> density_;
    std::vector<Scalar> prefix_;
    std::vector<Scalar> half_slope_;
};

/// Agents, indivisible goods and one unit cake [0, 1).  Immutable once built.
class Instance
{
public:
    Instance() = default;

    Instance(std::vector<std::string> agents, std::vector<std::string> goods,
             std::vector<AgentValuation> valuations, std::vector<Scalar> cake_offsets = {})
        : agents_(std::move(agents)), goods_(std::move(goods)), valuations_(std::move(valuations)),
          cake_offsets_(std::move(cake_offsets))
    {
        if (agents_.empty()) throw InstanceError("/agents", "at least one agent is required");
        if (valuations_.size() != agents_.size())
            throw InstanceError("/agents", "one valuation per agent is required");
        for (std::size_t i = 0; i < agents_.size(); ++i)
            if (valuations_[i].good_utilities().size() != goods_.size())
                throw InstanceError("/agents/" + std::to_string(i), "agent does not value every good");
        if (cake_offsets_.empty()) cake_offsets_ = {Scalar(0), Scalar(1)};
    }

    std::size_t agent_count() const { return agents_.size(); }
    std::size_t good_count() const { return goods_.size(); }
    const std::vector<std::string>& agent_names() const { return agents_; }
    const std::vector<std::string>& good_names() const { return goods_; }
    const std::vector<AgentValuation>& valuations() const { return valuations_; }
    const AgentValuation& valuation(AgentIndex i) const { return valuations_[i]; }
    const Scalar& utility(AgentIndex i, GoodIndex g) const { return valuations_[i].good(g); }
    /// Boundaries of the original cakes inside [0, 1]; {0, 1} for a single cake.
    const std::vector<Scalar>& cake_offsets() const { return cake_offsets_; }

    std::optional<AgentIndex> find_agent(const std::string& name) const
    {
        auto it = std::find(agents_.begin(), agents_.end(), name);
        if (it == agents_.end()) return std::nullopt;
        return static_cast<AgentIndex>(it - agents_.begin());
    }

    std::optional<GoodIndex> find_good(const std::string& name) const
    {
        auto it = std::find(goods_.begin(), goods_.end(), name);
        if (it == goods_.end()) return std::nullopt;
        return static_cast<GoodIndex>(it - goods_.begin());
    }

    bool is_piecewise_constant() const
    {
        return std::all_of(valuations_.begin(), valuations_.end(),
                           [](const AgentValuation& v) { return v.is_piecewise_constant(); });
    }

    /// Every density is identically zero.
    bool cake_is_null() const
    {
        return std::all_of(valuations_.begin(), valuations_.end(),
                           [](const AgentValuation& v) { return sgn(v.cake_total()) == 0; });
    }

    /// Sorted union of all agents' density breakpoints.
    std::vector<Scalar> breakpoints() const
    {
        std::vector<Scalar> all;
        for (const auto& v : valuations_) {
            auto b = v.breakpoints();
            all.insert(all.end(), b.begin(), b.end());
        }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return all;
    }

    /// Rescales each agent so u_i(M) + u_i([0,1]) = 1.
    Instance normalized() const
    {
        Instance out = *this;
        for (std::size_t i = 0; i < valuations_.size(); ++i) {
            const Scalar total = valuations_[i].goods_total() + valuations_[i].cake_total();
            if (sgn(total) == 0)
                throw InstanceError("/agents/" + std::to_string(i),
                                    "agent '" + agents_[i] + "' has zero total utility; cannot normalize");
            out.valuations_[i] = valuations_[i].scaled(Scalar(1) / total);
        }
        return out;
    }

private:
    std::vector<std::string> agents_;
    std::vector<std::string> goods_;
    std::vector<AgentValuation> valuations_;
    std::vector<Scalar> cake_offsets_;
};

} // namespace mixfair

#endif // MIXFAIR_INSTANCE_HPP
