#ifndef MIXFAIR_JSON_IO_HPP
#define MIXFAIR_JSON_IO_HPP

// JSON reading and writing.  Rationals travel as "p/q" strings (integers and
// exact decimal strings are accepted on input; JSON floating-point numbers are
// rejected).  Output uses insertion-ordered objects so identical inputs give
// byte-identical text.

#include "mixfair/allocation.hpp"
#include "mixfair/errors.hpp"
#include "mixfair/fairness.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/trace.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mixfair {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

using Json = nlohmann::json;

inline std::string pointer(const std::string& base, const std::string& key)
{
    std::string escaped;
    for (char c : key) {
        if (c == '~') escaped += "~0";
        else if (c == '/') escaped += "~1";
        else escaped += c;
    }
    return base + "/" + escaped;
}

inline std::string pointer(const std::string& base, std::size_t index)
{
    return base + "/" + std::to_string(index);
}

inline Scalar read_scalar(const Json& v, const std::string& where)
{
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) return Scalar(mpz_class(std::to_string(v.get<std::uint64_t>())));
        return Scalar(mpz_class(std::to_string(v.get<std::int64_t>())));
    }
    if (v.is_number_float())
        throw InstanceError(where, "floating-point numbers are not accepted; write the value as a string such as \"3/5\"");
    if (!v.is_string()) throw InstanceError(where, "expected a rational (string \"p/q\" or integer)");
    const auto text = v.get<std::string>();
    auto s = parse_scalar(text);
    if (!s) throw InstanceError(where, "malformed rational '" + text + "'");
    return *s;
}

inline const Json& require(const Json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw InstanceError(where, std::string("missing field '") + key + "'");
    return *it;
}

inline void require_object(const Json& v, const std::string& where)
{
    if (!v.is_object()) throw InstanceError(where, "expected an object");
}

inline void require_array(const Json& v, const std::string& where)
{
    if (!v.is_array()) throw InstanceError(where, "expected an array");
}

inline std::string read_name(const Json& v, const std::string& where)
{
    if (!v.is_string() || v.get<std::string>().empty()) throw InstanceError(where, "expected a non-empty string id");
    return v.get<std::string>();
}

// "line L, column C" for a byte offset into `text`.
inline std::string position_of(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline Json parse_document(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is one past the offending character.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        if (auto cut = what.find("syntax error"); cut != std::string::npos) what = what.substr(cut);
        throw InstanceError(position_of(text, at), what);
    }
}

} // namespace detail

struct LoadOptions
{
    std::optional<bool> normalize; ///< overrides the document's "normalize" field (default true)
};

/// Parses and validates an instance document.  Errors name the JSON pointer
/// of the offending field, or the line and column of a syntax error.
inline Instance load_instance(const std::string& text, const LoadOptions& opt = {})
{
    using detail::pointer;
    const auto doc = detail::parse_document(text);
    detail::require_object(doc, "");

    const auto& agents_json = detail::require(doc, "agents", "");
    detail::require_array(agents_json, "/agents");
    std::vector<std::string> agents;
    std::map<std::string, std::size_t> agent_index;
    for (std::size_t i = 0; i < agents_json.size(); ++i) {
        auto name = detail::read_name(agents_json[i], pointer("/agents", i));
        if (!agent_index.emplace(name, i).second)
            throw InstanceError(pointer("/agents", i), "duplicate agent id '" + name + "'");
        agents.push_back(std::move(name));
    }
    if (agents.empty()) throw InstanceError("/agents", "at least one agent is required");
    const std::size_t n = agents.size();

    std::vector<std::string> goods;
    std::vector<std::vector<Scalar>> utils(n);
    if (auto it = doc.find("goods"); it != doc.end()) {
        detail::require_array(*it, "/goods");
        std::set<std::string> seen;
        for (std::size_t g = 0; g < it->size(); ++g) {
            const auto where = pointer("/goods", g);
            const auto& good = (*it)[g];
            detail::require_object(good, where);
            auto id = detail::read_name(detail::require(good, "id", where), pointer(where, "id"));
            if (!seen.insert(id).second) throw InstanceError(pointer(where, "id"), "duplicate good id '" + id + "'");
            const auto uwhere = pointer(where, "utilities");
            const auto& u = detail::require(good, "utilities", where);
            detail::require_object(u, uwhere);
            for (auto kv = u.begin(); kv != u.end(); ++kv)
                if (!agent_index.count(kv.key()))
                    throw InstanceError(pointer(uwhere, kv.key()), "unknown agent '" + kv.key() + "'");
            for (std::size_t i = 0; i < n; ++i) {
                auto v = u.find(agents[i]);
                if (v == u.end())
                    throw InstanceError(uwhere, "agent '" + agents[i] + "' has no utility for good '" + id + "'");
                Scalar val = detail::read_scalar(*v, pointer(uwhere, agents[i]));
                if (sgn(val) < 0) throw InstanceError(pointer(uwhere, agents[i]), "utility must be non-negative");
                utils[i].push_back(std::move(val));
            }
            goods.push_back(std::move(id));
        }
    }

    // Cake k of l occupies [k/l, (k+1)/l); densities scale by l so values keep.
    std::vector<std::vector<DensitySegment>> density(n);
    std::vector<Scalar> offsets;
    std::size_t cake_count = 0;
    const detail::Json* cakes = nullptr;
    if (auto it = doc.find("cakes"); it != doc.end()) {
        detail::require_array(*it, "/cakes");
        cakes = &*it;
        cake_count = it->size();
    }
    if (cake_count == 0) {
        for (auto& d : density) d.push_back({Scalar(0), Scalar(1), Scalar(0), Scalar(0)});
        offsets = {Scalar(0), Scalar(1)};
    } else {
        const Scalar ell(static_cast<long>(cake_count));
        for (std::size_t k = 0; k <= cake_count; ++k) offsets.push_back(Scalar(static_cast<long>(k)) / ell);
        for (std::size_t k = 0; k < cake_count; ++k) {
            const auto cwhere = pointer("/cakes", k);
            const auto& cake = (*cakes)[k];
            detail::require_object(cake, cwhere);
            const auto pwhere = pointer(cwhere, "per_agent");
            const auto& per_agent = detail::require(cake, "per_agent", cwhere);
            detail::require_object(per_agent, pwhere);
            for (auto kv = per_agent.begin(); kv != per_agent.end(); ++kv)
                if (!agent_index.count(kv.key()))
                    throw InstanceError(pointer(pwhere, kv.key()), "unknown agent '" + kv.key() + "'");
            for (std::size_t i = 0; i < n; ++i) {
                auto segs = per_agent.find(agents[i]);
                if (segs == per_agent.end())
                    throw InstanceError(pwhere, "agent '" + agents[i] + "' has no density for this cake");
                const auto swhere = pointer(pwhere, agents[i]);
                detail::require_array(*segs, swhere);
                if (segs->empty()) throw InstanceError(swhere, "density must cover [0, 1]");
                Scalar expect = 0;
                for (std::size_t s = 0; s < segs->size(); ++s) {
                    const auto where = pointer(swhere, s);
                    const auto& seg = (*segs)[s];
                    detail::require_object(seg, where);
                    auto field = [&](const char* key) {
                        return detail::read_scalar(detail::require(seg, key, where), pointer(where, key));
                    };
                    Scalar start = field("start"), end = field("end"), left = field("left"), right = field("right");
                    if (start != expect)
                        throw InstanceError(pointer(where, "start"),
                                            "segment starts at " + to_string(start) + ", expected " + to_string(expect)
                                                + " (segments must be contiguous from 0)");
                    if (!(start < end)) throw InstanceError(pointer(where, "end"), "segment must have start < end");
                    if (end > 1) throw InstanceError(pointer(where, "end"), "segment ends past 1");
                    if (sgn(left) < 0) throw InstanceError(pointer(where, "left"), "density must be non-negative");
                    if (sgn(right) < 0) throw InstanceError(pointer(where, "right"), "density must be non-negative");
                    expect = end;
                    density[i].push_back({(Scalar(static_cast<long>(k)) + start) / ell,
                                          (Scalar(static_cast<long>(k)) + end) / ell, left * ell, right * ell});
                }
                if (expect != 1) throw InstanceError(swhere, "density covers [0, " + to_string(expect) + "), not [0, 1]");
            }
        }
    }

    bool normalize = true;
    if (auto it = doc.find("normalize"); it != doc.end()) {
        if (!it->is_boolean()) throw InstanceError("/normalize", "expected true or false");
        normalize = it->get<bool>();
    }
    if (opt.normalize) normalize = *opt.normalize;

    std::vector<AgentValuation> vals;
    for (std::size_t i = 0; i < n; ++i)
        vals.emplace_back(std::move(utils[i]), std::move(density[i]), pointer("/agents", i));
    Instance inst(std::move(agents), std::move(goods), std::move(vals), std::move(offsets));
    return normalize ? inst.normalized() : inst;
}

// ---- output ------------------------------------------------------------------

struct OutputOptions
{
    bool decimal = false; ///< add display-only decimal twins next to rationals
};

namespace detail {

inline void put_scalar(OrderedJson& obj, const std::string& key, const Scalar& v, const OutputOptions& out)
{
    obj[key] = to_string(v);
    if (out.decimal) obj[key + "_decimal"] = to_double(v);
}

inline OrderedJson scalar_list(const std::vector<Scalar>& v)
{
    OrderedJson a = OrderedJson::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

} // namespace detail

inline OrderedJson interval_set_to_json(const IntervalSet& s)
{
    OrderedJson a = OrderedJson::array();
    for (const auto& iv : s) a.push_back(OrderedJson::array({to_string(iv.start), to_string(iv.end)}));
    return a;
}

/// Single-cake form of the instance (multiple input cakes stay concatenated).
inline OrderedJson instance_to_json(const Instance& inst)
{
    OrderedJson doc;
    doc["agents"] = inst.agent_names();
    OrderedJson goods = OrderedJson::array();
    for (GoodIndex g = 0; g < inst.good_count(); ++g) {
        OrderedJson good;
        good["id"] = inst.good_names()[g];
        OrderedJson u = OrderedJson::object();
        for (AgentIndex i = 0; i < inst.agent_count(); ++i) u[inst.agent_names()[i]] = to_string(inst.utility(i, g));
        good["utilities"] = std::move(u);
        goods.push_back(std::move(good));
    }
    doc["goods"] = std::move(goods);
    OrderedJson per_agent = OrderedJson::object();
    for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
        OrderedJson segs = OrderedJson::array();
        for (const auto& d : inst.valuation(i).density()) {
            OrderedJson seg;
            seg["start"] = to_string(d.start);
            seg["end"] = to_string(d.end);
            seg["left"] = to_string(d.left_value);
            seg["right"] = to_string(d.right_value);
            segs.push_back(std::move(seg));
        }
        per_agent[inst.agent_names()[i]] = std::move(segs);
    }
    OrderedJson cake;
    cake["per_agent"] = std::move(per_agent);
    doc["cakes"] = OrderedJson::array({std::move(cake)});
    doc["normalize"] = false;
    return doc;
}

inline OrderedJson allocation_to_json(const Instance& inst, const Allocation& alloc, const OutputOptions& out = {})
{
    const auto vm = compute_value_matrix(inst, alloc, nullptr);
    OrderedJson rows = OrderedJson::array();
    for (AgentIndex i = 0; i < alloc.bundles.size(); ++i) {
        OrderedJson row;
        row["agent"] = inst.agent_names()[i];
        OrderedJson goods = OrderedJson::array();
        for (GoodIndex g : alloc.bundles[i].goods) goods.push_back(inst.good_names()[g]);
        row["goods"] = std::move(goods);
        row["cake"] = interval_set_to_json(alloc.bundles[i].cake);
        detail::put_scalar(row, "utility", vm.value[i][i], out);
        rows.push_back(std::move(row));
    }
    OrderedJson doc;
    doc["allocation"] = std::move(rows);
    doc["unallocated_cake"] = interval_set_to_json(alloc.unallocated_cake);
    return doc;
}

inline IntervalSet interval_set_from_json(const detail::Json& v, const std::string& where)
{
    detail::require_array(v, where);
    std::vector<Interval> ivs;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto w = detail::pointer(where, k);
        if (!v[k].is_array() || v[k].size() != 2) throw InstanceError(w, "expected a pair [start, end]");
        Scalar a = detail::read_scalar(v[k][0], detail::pointer(w, 0));
        Scalar b = detail::read_scalar(v[k][1], detail::pointer(w, 1));
        if (b < a) throw InstanceError(w, "interval end precedes its start");
        ivs.push_back({std::move(a), std::move(b)});
    }
    try {
        return IntervalSet(std::move(ivs));
    } catch (const std::invalid_argument& e) {
        throw InstanceError(where, e.what());
    }
}

/// Reads an allocation document against `inst`.  Utilities in the document
/// are ignored; agents not listed receive empty bundles.
inline Allocation load_allocation(const Instance& inst, const std::string& text)
{
    using detail::pointer;
    const auto doc = detail::parse_document(text);
    detail::require_object(doc, "");
    const auto& rows = detail::require(doc, "allocation", "");
    detail::require_array(rows, "/allocation");
    Allocation alloc = Allocation::empty(inst.agent_count());
    alloc.unallocated_cake = IntervalSet();
    std::vector<bool> seen(inst.agent_count(), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto where = pointer("/allocation", r);
        const auto& row = rows[r];
        detail::require_object(row, where);
        const auto name = detail::read_name(detail::require(row, "agent", where), pointer(where, "agent"));
        const auto agent = inst.find_agent(name);
        if (!agent) throw InstanceError(pointer(where, "agent"), "unknown agent '" + name + "'");
        if (seen[*agent]) throw InstanceError(pointer(where, "agent"), "agent '" + name + "' listed twice");
        seen[*agent] = true;
        Bundle& b = alloc.bundles[*agent];
        if (auto goods = row.find("goods"); goods != row.end()) {
            detail::require_array(*goods, pointer(where, "goods"));
            for (std::size_t k = 0; k < goods->size(); ++k) {
                const auto gname = detail::read_name((*goods)[k], pointer(pointer(where, "goods"), k));
                const auto g = inst.find_good(gname);
                if (!g) throw InstanceError(pointer(pointer(where, "goods"), k), "unknown good '" + gname + "'");
                b.add_good(*g);
            }
        }
        if (auto cake = row.find("cake"); cake != row.end())
            b.cake = interval_set_from_json(*cake, pointer(where, "cake"));
    }
    if (auto rest = doc.find("unallocated_cake"); rest != doc.end())
        alloc.unallocated_cake = interval_set_from_json(*rest, "/unallocated_cake");
    try {
        validate_allocation(inst, alloc, false);
    } catch (const std::invalid_argument& e) {
        throw InstanceError("/allocation", e.what());
    }
    return alloc;
}

inline OrderedJson report_to_json(const Instance& inst, const FairnessReport& r, const OutputOptions& out = {})
{
    const auto& names = inst.agent_names();
    OrderedJson doc;
    doc["slack"] = to_string(r.slack);
    if (r.eps) doc["eps"] = to_string(*r.eps);
    OrderedJson verdicts;
    verdicts["EF"] = r.ef;
    verdicts["EF1"] = r.ef1 ? OrderedJson(*r.ef1) : OrderedJson(nullptr);
    verdicts["EFM"] = r.efm;
    verdicts["weak-EFM"] = r.weak_efm;
    if (r.eps_efm) verdicts["eps-EFM"] = *r.eps_efm;
    doc["verdicts"] = std::move(verdicts);
    OrderedJson utils = OrderedJson::object();
    for (std::size_t i = 0; i < r.utilities.size(); ++i) detail::put_scalar(utils, names[i], r.utilities[i], out);
    doc["utilities"] = std::move(utils);
    OrderedJson envy = OrderedJson::object();
    for (std::size_t i = 0; i < r.pairwise_envy.size(); ++i) {
        OrderedJson row = OrderedJson::object();
        for (std::size_t j = 0; j < r.pairwise_envy[i].size(); ++j)
            detail::put_scalar(row, names[j], r.pairwise_envy[i][j], out);
        envy[names[i]] = std::move(row);
    }
    doc["pairwise_envy"] = std::move(envy);
    OrderedJson witnesses = OrderedJson::array();
    for (const auto& w : r.witnesses) {
        OrderedJson x;
        x["envier"] = names[w.envier];
        x["envied"] = names[w.envied];
        x["good"] = inst.good_names()[w.good];
        witnesses.push_back(std::move(x));
    }
    doc["ef1_witnesses"] = std::move(witnesses);
    OrderedJson violations = OrderedJson::array();
    for (const auto& [notion, v] : r.violations) {
        OrderedJson x;
        x["notion"] = notion_name(notion);
        x["envier"] = names[v.envier];
        x["envied"] = names[v.envied];
        violations.push_back(std::move(x));
    }
    doc["violations"] = std::move(violations);
    return doc;
}

inline OrderedJson counter_to_json(const QueryCounter& q)
{
    OrderedJson c;
    c["eval_queries"] = q.eval_count;
    c["cut_queries"] = q.cut_count;
    c["perfect_calls"] = q.perfect_oracle_calls;
    return c;
}

inline OrderedJson trace_to_json(const Instance& inst, const SolverTrace& t)
{
    const auto& names = inst.agent_names();
    auto agent_list = [&](const std::vector<AgentIndex>& v) {
        OrderedJson a = OrderedJson::array();
        for (AgentIndex i : v) a.push_back(names[i]);
        return a;
    };
    OrderedJson doc;
    doc["algorithm"] = t.algorithm;
    if (t.eps) doc["eps"] = to_string(*t.eps);
    if (t.eps_prime) doc["eps_prime"] = to_string(*t.eps_prime);
    doc["round_count"] = t.round_count;
    doc["totals"] = counter_to_json(t.totals);
    OrderedJson rounds = OrderedJson::array();
    for (const auto& r : t.rounds) {
        OrderedJson x;
        x["round"] = r.round;
        x["phase"] = phase_name(r.phase);
        x["envy_edges_before"] = r.envy_edges_before;
        x["envy_edges_after"] = r.envy_edges_after;
        x["addable_set"] = agent_list(r.addable_set);
        x["addable_size_after"] = r.addable_size_after;
        if (r.phase == Phase::CycleElim) x["cycle"] = agent_list(r.cycle);
        if (r.phase == Phase::CakeAdd || r.phase == Phase::FinalEf) {
            x["cutter"] = r.cutter ? OrderedJson(names[*r.cutter]) : OrderedJson(nullptr);
            x["whole_cake"] = r.whole_cake;
            x["piece"] = interval_set_to_json(r.piece);
        }
        x["graph_slack"] = to_string(r.graph_slack_after);
        if (t.eps) x["eps_hat"] = to_string(r.eps_hat);
        x["remaining_value_before"] = to_string(r.remaining_value_before);
        x["remaining_value_after"] = to_string(r.remaining_value_after);
        x["welfare_before"] = to_string(r.welfare_before);
        x["welfare_after"] = to_string(r.welfare_after);
        if (r.phase == Phase::CakeAdd || r.phase == Phase::FinalEf) {
            if (r.subroutine_eps) {
                x["subroutine_eps"] = to_string(*r.subroutine_eps);
                x["subroutine_envy"] = to_string(r.subroutine_envy);
            } else {
                x["perfect_residual"] = to_string(r.perfect_residual);
            }
        }
        x["dichotomy_holds"] = r.dichotomy_holds;
        x["partial_fair"] = r.partial_fair;
        x["perfect_calls"] = r.perfect_oracle_calls;
        x["eval_queries"] = r.eval_queries;
        x["cut_queries"] = r.cut_queries;
        rounds.push_back(std::move(x));
    }
    doc["rounds"] = std::move(rounds);
    return doc;
}

} // namespace mixfair

#endif // MIXFAIR_JSON_IO_HPP
