#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "coreforge/model.hpp"

namespace coreforge {

struct too_few_types : error {
    using error::error;
};
struct duplicate_type_name : error {
    using error::error;
};
struct unknown_type_name : error {
    using error::error;
};

// Single-core inhomogeneous class: one core holding the type-level units
// common to all member types, plus one projection per type with the rest.
struct scic {
    std::string name;
    std::vector<std::string> type_names;
    std::vector<unit> core;
    std::map<std::string, std::vector<unit>> projections;
};

// Multi-core inhomogeneous class. Each core is keyed by the exact set of
// member types sharing its units; cores are ordered by descending level,
// then by member indices.
struct mcic {
    struct core {
        std::vector<std::size_t> members;  // indices into type_names, ascending
        std::vector<unit> units;

        std::size_t level() const { return members.size(); }
    };

    std::string name;
    std::vector<std::string> type_names;
    std::vector<core> cores;
    std::map<std::string, std::vector<unit>> projections;

    std::vector<std::string> member_names(const core& c) const;
};

// Units common to every type (type-level only) form the core; everything
// else stays in per-type projections, declaration order preserved.
scic build_scic(const std::vector<type_def>& types);

// Exact grouping by maximal sharing set: every type-level unit goes to the
// core keyed by the set of types holding an equivalent unit; instance-level
// units go to projections.
mcic build_mcic(const std::vector<type_def>& types);

// Rebuilds a homogeneous class from the shared parts plus the projection.
// Core units come first (descending level, then member order), then the
// projection, both in stored order.
type_def extract_type(const scic& c, const std::string& type_name);
type_def extract_type(const mcic& c, const std::string& type_name);

// Number of cores per level.
std::map<std::size_t, std::size_t> core_census(const mcic& c);

enum class class_variant { hc, scic, mcic };

std::string to_string(class_variant v);
class_variant class_variant_from_string(const std::string& s);

struct unit_counts_result {
    std::size_t properties = 0;
    std::size_t methods = 0;

    bool operator==(const unit_counts_result&) const = default;
};

// Units that must be stored to represent the family under the given
// variant: hc sums per type; scic/mcic count core and projection units once.
unit_counts_result unit_counts(class_variant v, const std::vector<type_def>& types);

}  // namespace coreforge
