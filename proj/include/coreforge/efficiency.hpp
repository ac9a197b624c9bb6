#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coreforge/factorize.hpp"

namespace coreforge {

struct missing_size_entry : error {
    using error::error;
};
struct division_by_zero_hc : error {
    using error::error;
};
struct degenerate_input : error {
    using error::error;
};

// Memory-size model for a factored family: per-core sizes, per-object
// projection sizes, per-object homogeneous type sizes, and object counts.
struct size_model {
    std::map<std::string, double> core_sizes;        // subset key -> size
    std::map<std::string, double> projection_sizes;  // type name -> size per object
    std::map<std::string, double> hc_type_sizes;     // type name -> size per object
    std::map<std::string, std::uint64_t> object_counts;
};

// Key for a core's member set, e.g. "square+rectangle".
std::string subset_key(const mcic& c, const mcic::core& core);

enum class storage_variant { hc, mcic };

// M_HC  = sum_i T_i * m_i
// M_MCIC = sum over cores of the core size + sum_i Pr_i * m_i
double estimate_storage(const size_model& model, storage_variant v);

// E = 100 - (m_mcic / m_hc) * 100, in percent.
double efficiency_coefficient(double m_mcic, double m_hc);

// Size model where every stored unit costs one size unit.
size_model unit_count_model(const mcic& c, const std::map<std::string, std::uint64_t>& object_counts);

// Upper-bound byte model: each numeric component costs 8 bytes, each label
// at most `label_cap` bytes, each verification result 1 byte, each method
// its printed definition plus result label. Suitable for the approximate
// pre-creation estimate (maximum possible sizes).
size_model column_byte_model(const mcic& c, const std::vector<type_def>& types,
                             const std::map<std::string, std::uint64_t>& object_counts,
                             std::size_t label_cap = 8);

struct linear_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares over (x, y) points. Requires at least two
// distinct x values. r_squared is 1 for an exact fit (including the
// all-equal-y case).
linear_fit fit_linear(std::span<const std::pair<double, double>> points);

}  // namespace coreforge
