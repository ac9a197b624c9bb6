#include "coreforge/factorize.hpp"

#include <algorithm>
#include <set>

namespace coreforge {

namespace {

std::string joined_name(const std::vector<type_def>& types) {
    std::string out;
    for (const auto& t : types) {
        if (!out.empty()) out += '+';
        out += t.name;
    }
    return out;
}

void check_distinct_names(const std::vector<type_def>& types) {
    std::set<std::string> seen;
    for (const auto& t : types)
        if (!seen.insert(t.name).second)
            throw duplicate_type_name("duplicate type name: " + t.name);
}

bool has_equivalent(const type_def& t, const unit& u) {
    for (const unit* cand : t.all_units())
        if (unit_equivalent(*cand, u)) return true;
    return false;
}

}  // namespace

std::vector<std::string> mcic::member_names(const core& c) const {
    std::vector<std::string> out;
    out.reserve(c.members.size());
    for (std::size_t i : c.members) out.push_back(type_names.at(i));
    return out;
}

scic build_scic(const std::vector<type_def>& types) {
    if (types.size() < 2)
        throw too_few_types("single-core factorization needs at least 2 types, got " +
                            std::to_string(types.size()));
    check_distinct_names(types);

    scic out;
    out.name = joined_name(types);
    for (const auto& t : types) out.type_names.push_back(t.name);

    for (const unit* u : types.front().all_units()) {
        if (u->bind != binding::type_level) continue;
        bool everywhere = true;
        for (std::size_t j = 1; j < types.size() && everywhere; ++j)
            everywhere = has_equivalent(types[j], *u);
        if (everywhere) out.core.push_back(*u);
    }

    for (const auto& t : types) {
        auto& proj = out.projections[t.name];
        for (const unit* u : t.all_units()) {
            bool in_core = std::any_of(out.core.begin(), out.core.end(),
                                       [&](const unit& c) { return unit_equivalent(c, *u); });
            if (!in_core) proj.push_back(*u);
        }
    }
    return out;
}

mcic build_mcic(const std::vector<type_def>& types) {
    if (types.empty()) throw too_few_types("factorization needs at least 1 type");
    check_distinct_names(types);

    mcic out;
    out.name = joined_name(types);
    for (const auto& t : types) out.type_names.push_back(t.name);

    // Every type-level unit lands in the core keyed by its full sharing set;
    // it is appended while scanning the first type of that set, so unit order
    // inside a core follows that type's declaration order.
    std::map<std::vector<std::size_t>, std::vector<unit>> cores;
    for (std::size_t i = 0; i < types.size(); ++i) {
        for (const unit* u : types[i].all_units()) {
            if (u->bind != binding::type_level) {
                out.projections[types[i].name].push_back(*u);
                continue;
            }
            std::vector<std::size_t> sharing;
            for (std::size_t j = 0; j < types.size(); ++j)
                if (j == i || has_equivalent(types[j], *u)) sharing.push_back(j);
            if (sharing.front() == i) cores[sharing].push_back(*u);
        }
        out.projections.try_emplace(types[i].name);
    }

    for (auto& [members, units] : cores)
        out.cores.push_back({members, std::move(units)});
    std::sort(out.cores.begin(), out.cores.end(), [](const mcic::core& a, const mcic::core& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.members < b.members;
    });
    return out;
}

namespace {

type_def assemble(const std::string& type_name, const std::vector<const unit*>& ordered) {
    std::vector<unit> spec, sig;
    for (const unit* u : ordered)
        (u->kind == unit_kind::method ? sig : spec).push_back(*u);
    return define_type(type_name, std::move(spec), std::move(sig));
}

}  // namespace

type_def extract_type(const scic& c, const std::string& type_name) {
    auto pit = c.projections.find(type_name);
    if (pit == c.projections.end())
        throw unknown_type_name("type " + type_name + " is not a member of " + c.name);
    std::vector<const unit*> ordered;
    for (const auto& u : c.core) ordered.push_back(&u);
    for (const auto& u : pit->second) ordered.push_back(&u);
    return assemble(type_name, ordered);
}

type_def extract_type(const mcic& c, const std::string& type_name) {
    auto idx = std::find(c.type_names.begin(), c.type_names.end(), type_name);
    if (idx == c.type_names.end())
        throw unknown_type_name("type " + type_name + " is not a member of " + c.name);
    std::size_t i = static_cast<std::size_t>(idx - c.type_names.begin());

    std::vector<const unit*> ordered;
    for (const auto& core : c.cores)
        if (std::find(core.members.begin(), core.members.end(), i) != core.members.end())
            for (const auto& u : core.units) ordered.push_back(&u);
    auto pit = c.projections.find(type_name);
    if (pit != c.projections.end())
        for (const auto& u : pit->second) ordered.push_back(&u);
    return assemble(type_name, ordered);
}

std::map<std::size_t, std::size_t> core_census(const mcic& c) {
    std::map<std::size_t, std::size_t> out;
    for (const auto& core : c.cores) ++out[core.level()];
    return out;
}

std::string to_string(class_variant v) {
    switch (v) {
        case class_variant::hc: return "hc";
        case class_variant::scic: return "scic";
        case class_variant::mcic: return "mcic";
    }
    return "hc";
}

class_variant class_variant_from_string(const std::string& s) {
    if (s == "hc") return class_variant::hc;
    if (s == "scic") return class_variant::scic;
    if (s == "mcic") return class_variant::mcic;
    throw error("unknown class variant: " + s + " (expected hc, scic, or mcic)");
}

namespace {

void tally(const std::vector<unit>& units, unit_counts_result& r) {
    for (const auto& u : units)
        u.kind == unit_kind::method ? ++r.methods : ++r.properties;
}

}  // namespace

unit_counts_result unit_counts(class_variant v, const std::vector<type_def>& types) {
    unit_counts_result r;
    switch (v) {
        case class_variant::hc:
            for (const auto& t : types) {
                tally(t.specification, r);
                tally(t.signature, r);
            }
            break;
        case class_variant::scic: {
            scic c = build_scic(types);
            tally(c.core, r);
            for (const auto& [_, proj] : c.projections) tally(proj, r);
            break;
        }
        case class_variant::mcic: {
            mcic c = build_mcic(types);
            for (const auto& core : c.cores) tally(core.units, r);
            for (const auto& [_, proj] : c.projections) tally(proj, r);
            break;
        }
    }
    return r;
}

}  // namespace coreforge
