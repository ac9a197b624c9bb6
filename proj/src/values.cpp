#include "coreforge/values.hpp"

#include <array>
#include <charconv>

namespace coreforge {

std::string to_string(component_desc d) {
    switch (d) {
        case component_desc::numeric: return "num";
        case component_desc::labeled: return "labeled";
        case component_desc::angle_degrees: return "angle";
    }
    return "num";
}

component_desc component_desc_from_string(const std::string& s) {
    if (s == "num") return component_desc::numeric;
    if (s == "labeled") return component_desc::labeled;
    if (s == "angle") return component_desc::angle_degrees;
    throw error("unknown component descriptor: " + s);
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf.data(), ptr);
}

}  // namespace coreforge
