#ifndef MIXFAIR_GENERATOR_HPP
#define MIXFAIR_GENERATOR_HPP

// Seeded random instances.  Output depends only on the parameters: the
// engine is mt19937_64 (fixed by the standard) and draws go through
// uniform_below rather than std distributions, whose output is
// implementation-defined.

#include "mixfair/errors.hpp"
#include "mixfair/instance.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mixfair {

enum class DensityKind
{
    Constant,
    Linear,
    Mixed, ///< each segment independently constant or linear
    None,  ///< worthless cake
};

inline std::optional<DensityKind> parse_density_kind(const std::string& s)
{
    if (s == "constant") return DensityKind::Constant;
    if (s == "linear") return DensityKind::Linear;
    if (s == "mixed") return DensityKind::Mixed;
    if (s == "none") return DensityKind::None;
    return std::nullopt;
}

inline const char* density_kind_name(DensityKind k)
{
    switch (k) {
    case DensityKind::Constant: return "constant";
    case DensityKind::Linear: return "linear";
    case DensityKind::Mixed: return "mixed";
    case DensityKind::None: return "none";
    }
    return "?";
}

struct GeneratorParams
{
    std::size_t agents = 2;
    std::size_t goods = 0;
    std::size_t max_segments = 3; ///< per agent, at most grid - 1 breakpoints apart
    DensityKind kind = DensityKind::Constant;
    std::uint64_t seed = 0;
    unsigned grid = 24;      ///< breakpoints are multiples of 1/grid
    unsigned max_value = 10; ///< raw utilities and densities are integers in [0, max_value]
};

/// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
}

/// Normalized random instance; agents "a1".., goods "g1"...
inline Instance generate_instance(const GeneratorParams& p)
{
    if (p.agents == 0) throw PreconditionError("generator needs at least one agent");
    if (p.max_segments == 0 || p.grid < 2 || p.max_segments > p.grid)
        throw PreconditionError("generator needs 1 <= segments <= grid");
    std::mt19937_64 rng(p.seed);
    auto value = [&] { return Scalar(static_cast<long>(uniform_below(rng, p.max_value + 1))); };

    std::vector<std::string> agents, goods;
    for (std::size_t i = 0; i < p.agents; ++i) agents.push_back("a" + std::to_string(i + 1));
    for (std::size_t g = 0; g < p.goods; ++g) goods.push_back("g" + std::to_string(g + 1));

    std::vector<AgentValuation> vals;
    for (std::size_t i = 0; i < p.agents; ++i) {
        std::vector<Scalar> utils;
        for (std::size_t g = 0; g < p.goods; ++g) utils.push_back(value());

        std::vector<DensitySegment> density;
        if (p.kind == DensityKind::None) {
            density.push_back({Scalar(0), Scalar(1), Scalar(0), Scalar(0)});
        } else {
            // Choose distinct interior grid points by partial Fisher-Yates.
            const std::size_t segments = 1 + uniform_below(rng, p.max_segments);
            std::vector<unsigned> interior;
            for (unsigned t = 1; t < p.grid; ++t) interior.push_back(t);
            for (std::size_t t = 0; t + 1 < segments; ++t)
                std::swap(interior[t], interior[t + uniform_below(rng, interior.size() - t)]);
            interior.resize(segments - 1);
            std::sort(interior.begin(), interior.end());
            std::vector<Scalar> cuts{Scalar(0)};
            for (unsigned t : interior) cuts.push_back(make_scalar(t, p.grid));
            cuts.push_back(Scalar(1));
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                bool sloped = p.kind == DensityKind::Linear
                              || (p.kind == DensityKind::Mixed && uniform_below(rng, 2) == 1);
                Scalar left = value();
                Scalar right = sloped ? value() : left;
                density.push_back({cuts[s], cuts[s + 1], std::move(left), std::move(right)});
            }
        }
        Scalar total = 0;
        for (const auto& u : utils) total += u;
        for (const auto& d : density) total += d.integral(d.start, d.end);
        if (sgn(total) == 0) {
            // Keep every agent normalizable.
            if (!utils.empty()) utils.front() = 1;
            else density.front().left_value = density.front().right_value = 1;
        }
        vals.emplace_back(std::move(utils), std::move(density), "/agents/" + std::to_string(i));
    }
    return Instance(std::move(agents), std::move(goods), std::move(vals)).normalized();
}

} // namespace mixfair

#endif // MIXFAIR_GENERATOR_HPP
