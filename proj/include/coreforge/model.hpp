#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coreforge/expr.hpp"
#include "coreforge/values.hpp"

namespace coreforge {

struct duplicate_unit_name : error {
    using error::error;
};
struct dangling_reference : error {
    using error::error;
};
struct schema_arity_mismatch : error {
    using error::error;
};
struct value_out_of_range : error {
    using error::error;
};
struct missing_value : error {
    using error::error;
};

enum class unit_kind {
    data_property,
    verification_function,
    method,
};

enum class binding {
    type_level,      // value fixed by the type definition
    instance_level,  // value supplied per object
};

std::string to_string(unit_kind k);
std::string to_string(binding b);

// One property, verification function or method: the atom of factorization.
struct unit {
    std::string name;
    unit_kind kind = unit_kind::data_property;
    binding bind = binding::instance_level;
    std::vector<component_desc> value_schema;
    expr::ast expression;                     // required for vf and method
    std::optional<value_tuple> constant_value;  // required for type-level data properties
    std::optional<std::string> result_unit;     // methods: label of the computed result
};

// A homogeneous class: one object type, defined by a specification of
// properties (data properties and verification functions) and a signature
// of methods.
struct type_def {
    std::string name;
    std::vector<unit> specification;
    std::vector<unit> signature;

    const unit* find_unit(std::string_view unit_name) const;
    std::vector<const unit*> all_units() const;  // specification then signature
    std::vector<const unit*> instance_properties() const;
};

// Concrete values for one object of one type. `values` holds exactly the
// instance-level data properties of the type.
struct object_instance {
    std::uint64_t object_id = 0;
    std::string type_name;
    std::map<std::string, value_tuple> values;

    bool operator==(const object_instance&) const = default;
};

struct verification_report {
    std::map<std::string, int> results;  // vf name -> 0/1
    bool valid = false;                  // all results are 1
};

// Validates unit shapes, name uniqueness and expression references, and
// returns the assembled type.
type_def define_type(std::string name, std::vector<unit> spec, std::vector<unit> sig);

// True iff the two units are interchangeable representation-wise: same
// name, kind, binding and schema, equal constants for type-level data
// properties, and alpha-equivalent expressions.
bool unit_equivalent(const unit& a, const unit& b);

// Selector environment over an instance plus its type: instance values
// first, then type-level constants. Verification functions are selectable
// as 1-component units (their evaluated result), mirroring the p_i/vf_i
// duality of the source model.
expr::selector_resolver make_resolver(const object_instance& obj, const type_def& type);

double evaluate_unit(const unit& u, const object_instance& obj, const type_def& type);

// Evaluates every verification function of the type against the instance.
verification_report validate_instance(const object_instance& obj, const type_def& type);

// Checks that the instance covers exactly the instance-level data
// properties of the type with matching arities and legal angle ranges.
void check_conformance(const object_instance& obj, const type_def& type);

}  // namespace coreforge
