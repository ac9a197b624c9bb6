#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coreforge/factorize.hpp"
#include "coreforge/schema_io.hpp"

namespace coreforge {

struct empty_class : error {
    using error::error;
};
struct schema_mismatch : error {
    using error::error;
};
struct constraint_violation : error {
    using error::error;
};
struct not_found : error {
    using error::error;
};
struct io_error : error {
    using error::error;
};

struct column_spec {
    std::string name;
    std::string sql_type;  // REAL, TEXT or INTEGER
};

struct foreign_key_spec {
    std::string column;
    std::string ref_table;
};

struct table_spec {
    std::string name;
    std::vector<column_spec> columns;
    std::string primary_key;
    std::vector<foreign_key_spec> foreign_keys;
};

// Where a table's rows come from: one homogeneous type, one core, or one
// projection. Core tables are deduplicated on value equality; object tables
// hold one row per object.
enum class bundle_kind { hc_type, core, projection };

struct table_binding {
    bundle_kind kind = bundle_kind::hc_type;
    std::vector<std::string> covered_types;  // types whose objects touch this table
    std::vector<unit> units;                 // stored units, table column order
};

// Relational mapping of a class family. `tables` lists the object-bearing
// tables (one per type for hc, core + projections otherwise); the shared
// unit catalog comes on top and holds one definition row per stored unit.
struct relational_schema {
    class_variant variant = class_variant::hc;
    std::vector<table_spec> tables;
    std::vector<table_binding> bindings;  // parallel to `tables`
    table_spec catalog;
    std::string ddl;
};

relational_schema generate_schema(const std::vector<type_def>& types);
relational_schema generate_schema(const scic& c);
relational_schema generate_schema(const mcic& c);

struct measurement {
    std::uint64_t live_bytes = 0;
    std::uint64_t export_bytes = 0;
};

// One embedded database file plus its schema. Single writer; the handle may
// move between threads, distinct stores may be used in parallel.
class store {
public:
    // Creates the file and applies the schema. The schema document is kept
    // in the file so the store can be reopened without it.
    static store create(const std::filesystem::path& db_file, const schema_doc& doc,
                        class_variant variant);
    static store open(const std::filesystem::path& db_file);

    store(store&&) noexcept;
    store& operator=(store&&) noexcept;
    store(const store&) = delete;
    store& operator=(const store&) = delete;
    ~store();

    // Object ids are global and strictly increasing; an instance with
    // object_id 0 gets the next id. The batch is one transaction.
    std::uint64_t insert_objects(std::span<const object_instance> objects);

    object_instance load_object(std::uint64_t object_id);

    // live_bytes is the on-disk size of the database file; export_bytes the
    // length of export_sql().
    measurement measure();

    // Deterministic dump: catalog then object tables in schema order, rows
    // by primary key, one INSERT per row.
    std::string export_sql();

    // Bytes of unit values stored across object-bearing rows: 8 per
    // magnitude, label length per label, 1 per verification result, text
    // length per method definition. Keys and foreign keys excluded.
    std::uint64_t payload_bytes();

    std::uint64_t next_object_id() const;
    const relational_schema& schema() const;
    const schema_doc& doc() const;
    class_variant variant() const;

private:
    struct impl;
    explicit store(std::unique_ptr<impl> p);
    std::unique_ptr<impl> impl_;
};

}  // namespace coreforge
