#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coreforge {

// Base for all domain errors thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape of one component of a unit's value tuple.
enum class component_desc {
    numeric,        // bare real number
    labeled,        // real number with a unit-of-measure label, e.g. (2, "cm")
    angle_degrees,  // real number interpreted as degrees, constrained to [0, 360)
};

std::string to_string(component_desc d);
component_desc component_desc_from_string(const std::string& s);

// An ordered tuple of (magnitude, optional label) pairs. Tuple order is
// significant: sides and angles are positional.
struct value_tuple {
    struct component {
        double magnitude = 0.0;
        std::optional<std::string> unit_label;

        bool operator==(const component&) const = default;
    };

    std::vector<component> components;

    bool operator==(const value_tuple&) const = default;

    std::size_t arity() const { return components.size(); }
};

// Shortest round-trip decimal form, e.g. 2 -> "2", 0.5 -> "0.5".
std::string format_number(double v);

}  // namespace coreforge
