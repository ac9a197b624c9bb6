#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "coreforge/factorize.hpp"
#include "coreforge/model.hpp"

namespace coreforge {

// Line-oriented schema document format error. Line numbers are 1-based.
struct schema_format_error : error {
    schema_format_error(std::string msg, std::size_t line_no)
        : error(std::move(msg)), line(line_no) {}

    std::size_t line;
};

// One schema file: a named family of types, plus optional per-type default
// values for instance-level properties (used by the identical generation
// regime).
struct schema_doc {
    std::string name;
    std::vector<type_def> types;
    // type name -> unit name -> default value
    std::map<std::string, std::map<std::string, value_tuple>> defaults;

    const type_def& type_named(const std::string& name) const;
};

schema_doc parse_schema(const std::string& text);
schema_doc load_schema(const std::filesystem::path& file);

std::string serialize_schema(const schema_doc& doc);

// Decomposition output in the same unit-line syntax.
std::string serialize_scic(const scic& c);
std::string serialize_mcic(const mcic& c);

// Human-readable core table: core, units, common-for types.
std::string census_table(const mcic& c);

std::string serialize_value_tuple(const value_tuple& v);
value_tuple parse_value_tuple(const std::string& text);

}  // namespace coreforge
