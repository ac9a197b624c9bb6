#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coreforge/efficiency.hpp"
#include "coreforge/store.hpp"

namespace coreforge {

enum class generation_regime { identical, randomized };

std::string to_string(generation_regime r);
generation_regime regime_from_string(const std::string& s);

// One measurement sweep: `points` measurement rounds starting at zero
// objects, adding `step` objects of every type per round.
struct experiment_config {
    std::filesystem::path schema_path;
    int points = 11;
    int step = 400;
    generation_regime regime = generation_regime::identical;
    std::uint64_t seed = 1;
    std::filesystem::path csv_out;     // optional; empty = don't write
    std::filesystem::path report_out;  // optional; empty = don't write
    std::filesystem::path work_dir;    // databases land here
};

struct measurement_row {
    std::uint64_t total_objects = 0;  // Q: running total across all types
    class_variant variant = class_variant::hc;
    double live_bytes = 0.0;
    double export_bytes = 0.0;
};

struct measurement_table {
    std::vector<measurement_row> rows;
};

// Deterministic object generator used by both regimes. Identical mode
// replays the schema's per-type default values; randomized mode derives
// values from (seed, type, ordinal) only.
object_instance generate_instance(const schema_doc& doc, const std::string& type_name,
                                  generation_regime regime, std::uint64_t seed,
                                  std::uint64_t ordinal);

measurement_table run_experiment(const experiment_config& config);

std::string to_csv(const measurement_table& table);
measurement_table from_csv(const std::string& text);
measurement_table load_csv(const std::filesystem::path& file);

enum class size_measure { live, export_file };

struct experiment_summary {
    std::map<class_variant, std::array<linear_fit, 2>> fits;  // [live, export]
    double live_reduction_vs_hc = 0.0;    // mean over Q>0 of 100*(1 - mcic/hc)
    double live_reduction_vs_scic = 0.0;
    double export_reduction_vs_hc = 0.0;
    double export_reduction_vs_scic = 0.0;
    bool ordering_live = false;    // mcic < scic < hc at every Q > 0
    bool ordering_export = false;
    bool final_round_ordering = false;  // both measures at the last Q
};

experiment_summary report(const measurement_table& table);

std::string format_report(const experiment_summary& summary);

}  // namespace coreforge
