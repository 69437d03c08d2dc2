#ifndef MIXFAIR_INTERVAL_SET_HPP
#define MIXFAIR_INTERVAL_SET_HPP

#include "mixfair/scalar.hpp"

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mixfair {

/// Half-open interval [start, end).
struct Interval
{
    Scalar start;
    Scalar end;

    Scalar length() const { return end - start; }
    bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint half-open intervals, kept sorted with touching
/// neighbours merged.  Two sets describing the same point set compare equal.
class IntervalSet
{
public:
    IntervalSet() = default;

    IntervalSet(std::initializer_list<Interval> parts)
        : IntervalSet(std::vector<Interval>(parts))
    {}

    /// Throws std::invalid_argument on overlapping or inverted intervals.
    /// Empty intervals (start == end) are dropped.
    explicit IntervalSet(std::vector<Interval> parts)
    {
        std::erase_if(parts, [](const Interval& iv) { return iv.start == iv.end; });
        for (const auto& iv : parts)
            if (iv.start > iv.end) throw std::invalid_argument("interval with start > end");
        const auto by_start = [](const Interval& a, const Interval& b) { return a.start < b.start; };
        if (!std::is_sorted(parts.begin(), parts.end(), by_start)) std::sort(parts.begin(), parts.end(), by_start);
        for (std::size_t k = 1; k < parts.size(); ++k)
            if (parts[k].start < parts[k - 1].end)
                throw std::invalid_argument("overlapping intervals");
        parts_ = merge_touching(std::move(parts));
    }

    static IntervalSet unit() { return IntervalSet{{Scalar(0), Scalar(1)}}; }
    static IntervalSet single(Scalar start, Scalar end)
    {
        return IntervalSet(std::vector<Interval>{{std::move(start), std::move(end)}});
    }

    const std::vector<Interval>& intervals() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }
    auto begin() const { return parts_.begin(); }
    auto end() const { return parts_.end(); }

    Scalar length() const
    {
        Scalar total = 0;
        for (const auto& iv : parts_) total += iv.length();
        return total;
    }

    /// Union with a set that must be disjoint from this one.
    void absorb(const IntervalSet& other)
    {
        if (other.empty()) return;
        std::vector<Interval> merged;
        merged.reserve(parts_.size() + other.parts_.size());
        std::merge(parts_.begin(), parts_.end(), other.parts_.begin(), other.parts_.end(),
                   std::back_inserter(merged),
                   [](const Interval& a, const Interval& b) { return a.start < b.start; });
        for (std::size_t k = 1; k < merged.size(); ++k)
            if (merged[k].start < merged[k - 1].end)
                throw std::invalid_argument("absorb: interval sets overlap");
        parts_ = merge_touching(std::move(merged));
    }

    /// Union; overlap allowed.
    IntervalSet united(const IntervalSet& other) const
    {
        std::vector<Interval> merged;
        merged.reserve(parts_.size() + other.parts_.size());
        std::merge(parts_.begin(), parts_.end(), other.parts_.begin(), other.parts_.end(),
                   std::back_inserter(merged),
                   [](const Interval& a, const Interval& b) { return a.start < b.start; });
        std::vector<Interval> out;
        for (auto& iv : merged) {
            if (!out.empty() && iv.start <= out.back().end) {
                if (out.back().end < iv.end) out.back().end = std::move(iv.end);
            } else {
                out.push_back(std::move(iv));
            }
        }
        IntervalSet result;
        result.parts_ = std::move(out);
        return result;
    }

    IntervalSet intersected(const IntervalSet& other) const
    {
        std::vector<Interval> out;
        std::size_t a = 0, b = 0;
        while (a < parts_.size() && b < other.parts_.size()) {
            const auto& x = parts_[a];
            const auto& y = other.parts_[b];
            const Scalar& lo = x.start > y.start ? x.start : y.start;
            const Scalar& hi = x.end < y.end ? x.end : y.end;
            if (lo < hi) out.push_back({lo, hi});
            if (x.end < y.end) ++a; else ++b;
        }
        IntervalSet r;
        r.parts_ = merge_touching(std::move(out));
        return r;
    }

    IntervalSet clipped(const Scalar& lo, const Scalar& hi) const
    {
        if (!(lo < hi)) return {};
        return intersected(single(lo, hi));
    }

    IntervalSet minus(const IntervalSet& other) const
    {
        std::vector<Interval> out;
        std::size_t b = 0;
        for (const auto& x : parts_) {
            Scalar cur = x.start;
            while (b < other.parts_.size() && other.parts_[b].end <= cur) ++b;
            std::size_t k = b;
            while (k < other.parts_.size() && other.parts_[k].start < x.end) {
                const auto& y = other.parts_[k];
                if (cur < y.start) out.push_back({cur, y.start});
                if (y.end > cur) cur = y.end;
                if (cur >= x.end) break;
                ++k;
            }
            if (cur < x.end) out.push_back({cur, x.end});
        }
        IntervalSet r;
        r.parts_ = merge_touching(std::move(out));
        return r;
    }

    /// Parts strictly left of `point` and at-or-right of it.
    std::pair<IntervalSet, IntervalSet> split_at(const Scalar& point) const
    {
        IntervalSet left, right;
        for (const auto& iv : parts_) {
            if (iv.end <= point) left.parts_.push_back(iv);
            else if (iv.start >= point) right.parts_.push_back(iv);
            else {
                left.parts_.push_back({iv.start, point});
                right.parts_.push_back({point, iv.end});
            }
        }
        return {std::move(left), std::move(right)};
    }

    bool disjoint_from(const IntervalSet& other) const
    {
        return intersected(other).empty();
    }

    bool subset_of(const IntervalSet& other) const
    {
        return minus(other).empty();
    }

    bool operator==(const IntervalSet&) const = default;

private:
    static std::vector<Interval> merge_touching(std::vector<Interval> parts)
    {
        std::vector<Interval> out;
        out.reserve(parts.size());
        for (auto& iv : parts) {
            if (!out.empty() && out.back().end == iv.start) out.back().end = std::move(iv.end);
            else out.push_back(std::move(iv));
        }
        return out;
    }

    std::vector<Interval> parts_;
};

} // namespace mixfair

#endif // MIXFAIR_INTERVAL_SET_HPP
