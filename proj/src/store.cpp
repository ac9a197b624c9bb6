#include "coreforge/store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>
#include <utility>

#include "coreforge/expr.hpp"

namespace coreforge {

namespace {

// Per-column payload accounting role.
enum class col_role { key, magnitude, label, flag, text };

struct column_plan {
    column_spec spec;
    col_role role;
};

// The flattening rule for one unit. Data properties get one REAL per
// component plus a TEXT label column for labeled components; verification
// functions get one INTEGER result column; methods get their definition
// text plus an optional result-unit label.
std::vector<column_plan> unit_columns(const unit& u) {
    std::vector<column_plan> out;
    switch (u.kind) {
        case unit_kind::data_property:
            for (std::size_t j = 0; j < u.value_schema.size(); ++j) {
                std::string base = u.name + "_" + std::to_string(j + 1);
                out.push_back({{base, "REAL"}, col_role::magnitude});
                if (u.value_schema[j] == component_desc::labeled)
                    out.push_back({{base + "_unit", "TEXT"}, col_role::label});
            }
            break;
        case unit_kind::verification_function:
            out.push_back({{u.name, "INTEGER"}, col_role::flag});
            break;
        case unit_kind::method:
            out.push_back({{u.name + "_def", "TEXT"}, col_role::text});
            if (u.result_unit) out.push_back({{u.name + "_unit", "TEXT"}, col_role::text});
            break;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

table_spec catalog_spec() {
    table_spec t;
    t.name = "unit_catalog";
    t.primary_key = "entry_id";
    t.columns = {{"entry_id", "INTEGER"}, {"bundle", "TEXT"},     {"unit", "TEXT"},
                 {"kind", "TEXT"},        {"binding", "TEXT"},    {"value_schema", "TEXT"},
                 {"definition", "TEXT"},  {"result_unit", "TEXT"}};
    return t;
}

std::string value_schema_text(const std::vector<component_desc>& schema) {
    std::string out;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i) out += ',';
        out += to_string(schema[i]);
    }
    return out;
}

std::string table_ddl(const table_spec& t) {
    std::string sql = "CREATE TABLE " + t.name + " (\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        sql += "  " + t.columns[i].name + " " + t.columns[i].sql_type;
        if (t.columns[i].name == t.primary_key) sql += " PRIMARY KEY";
        for (const auto& fk : t.foreign_keys)
            if (fk.column == t.columns[i].name)
                sql += " REFERENCES " + fk.ref_table + "(core_id)";
        if (i + 1 < t.columns.size()) sql += ",";
        sql += "\n";
    }
    sql += ");\n";
    return sql;
}

struct schema_builder {
    relational_schema rel;

    void add_table(std::string name, bundle_kind kind, std::vector<std::string> covered,
                   std::vector<unit> units, std::vector<std::string> fk_tables) {
        table_spec t;
        t.name = std::move(name);
        t.primary_key = kind == bundle_kind::core ? "core_id" : "object_id";
        t.columns.push_back({t.primary_key, "INTEGER"});
        for (const auto& ref : fk_tables) {
            t.columns.push_back({"fk_" + ref, "INTEGER"});
            t.foreign_keys.push_back({"fk_" + ref, ref});
        }
        for (const auto& u : units)
            for (const auto& c : unit_columns(u)) t.columns.push_back(c.spec);
        rel.tables.push_back(std::move(t));
        rel.bindings.push_back({kind, std::move(covered), std::move(units)});
    }

    void finish() {
        rel.catalog = catalog_spec();
        rel.ddl = table_ddl(rel.catalog);
        for (const auto& t : rel.tables) rel.ddl += table_ddl(t);
    }
};

std::vector<unit> copy_units(const std::vector<unit>& units) { return units; }

}  // namespace

relational_schema generate_schema(const std::vector<type_def>& types) {
    if (types.empty()) throw empty_class("cannot map an empty family");
    schema_builder b;
    b.rel.variant = class_variant::hc;
    for (const auto& t : types) {
        std::vector<unit> units;
        for (const unit* u : t.all_units()) units.push_back(*u);
        b.add_table(t.name, bundle_kind::hc_type, {t.name}, std::move(units), {});
    }
    b.finish();
    return b.rel;
}

relational_schema generate_schema(const scic& c) {
    if (c.type_names.empty()) throw empty_class("cannot map an empty class");
    schema_builder b;
    b.rel.variant = class_variant::scic;
    std::string core_name = "core_" + join(c.type_names, "_");
    b.add_table(core_name, bundle_kind::core, c.type_names, copy_units(c.core), {});
    for (const auto& t : c.type_names) {
        auto pit = c.projections.find(t);
        b.add_table("pr_" + t, bundle_kind::projection, {t},
                    pit == c.projections.end() ? std::vector<unit>{} : copy_units(pit->second),
                    {core_name});
    }
    b.finish();
    return b.rel;
}

relational_schema generate_schema(const mcic& c) {
    if (c.type_names.empty()) throw empty_class("cannot map an empty class");
    schema_builder b;
    b.rel.variant = class_variant::mcic;
    std::vector<std::string> core_names;
    for (const auto& core : c.cores) {
        std::string name = "core_" + join(c.member_names(core), "_");
        core_names.push_back(name);
        b.add_table(name, bundle_kind::core, c.member_names(core), copy_units(core.units), {});
    }
    for (std::size_t i = 0; i < c.type_names.size(); ++i) {
        std::vector<std::string> fks;
        for (std::size_t k = 0; k < c.cores.size(); ++k)
            if (std::find(c.cores[k].members.begin(), c.cores[k].members.end(), i) !=
                c.cores[k].members.end())
                fks.push_back(core_names[k]);
        const auto& t = c.type_names[i];
        auto pit = c.projections.find(t);
        b.add_table("pr_" + t, bundle_kind::projection, {t},
                    pit == c.projections.end() ? std::vector<unit>{} : copy_units(pit->second),
                    std::move(fks));
    }
    b.finish();
    return b.rel;
}

// ---------------------------------------------------------------------------
// store

namespace {

struct stmt {
    sqlite3_stmt* p = nullptr;

    stmt() = default;
    stmt(sqlite3* db, const std::string& sql) {
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &p, nullptr) != SQLITE_OK)
            throw io_error("prepare failed: " + std::string(sqlite3_errmsg(db)) + " in: " + sql);
    }
    stmt(stmt&& o) noexcept : p(std::exchange(o.p, nullptr)) {}
    stmt& operator=(stmt&& o) noexcept {
        if (this != &o) {
            sqlite3_finalize(p);
            p = std::exchange(o.p, nullptr);
        }
        return *this;
    }
    stmt(const stmt&) = delete;
    stmt& operator=(const stmt&) = delete;
    ~stmt() { sqlite3_finalize(p); }
};

// One stored cell: either a number, a 0/1 flag, or a text payload.
struct cell {
    enum class tag { real, integer, text } t = tag::real;
    double real = 0.0;
    std::int64_t integer = 0;
    std::string text;

    static cell of_real(double v) { return {tag::real, v, 0, {}}; }
    static cell of_int(std::int64_t v) { return {tag::integer, 0.0, v, {}}; }
    static cell of_text(std::string v) { return {tag::text, 0.0, 0, std::move(v)}; }
};

std::string sql_quote(const std::string& s) {
    std::string out = "'";
    for (char ch : s) {
        out += ch;
        if (ch == '\'') out += '\'';
    }
    out += "'";
    return out;
}

std::string cell_sql(const cell& c) {
    switch (c.t) {
        case cell::tag::real: return format_number(c.real);
        case cell::tag::integer: return std::to_string(c.integer);
        case cell::tag::text: return sql_quote(c.text);
    }
    return "NULL";
}

}  // namespace

struct store::impl {
    std::filesystem::path path;
    schema_doc document;
    class_variant var = class_variant::hc;
    relational_schema rel;
    sqlite3* db = nullptr;
    std::uint64_t next_id = 1;
    // table -> serialized core values -> core_id
    std::map<std::string, std::map<std::string, std::int64_t>> core_rows;

    ~impl() {
        if (db) sqlite3_close(db);
    }

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown sqlite error";
            sqlite3_free(err);
            throw io_error("sqlite exec failed: " + msg);
        }
    }

    const type_def& type_of(const object_instance& obj) const {
        for (const auto& t : document.types)
            if (t.name == obj.type_name) return t;
        throw schema_mismatch("store holds no type named " + obj.type_name);
    }

    // Cells for the unit columns of one bundle, evaluated against an object.
    std::vector<cell> unit_cells(const std::vector<unit>& units, const object_instance& obj,
                                 const type_def& type) {
        std::vector<cell> out;
        for (const auto& u : units) {
            switch (u.kind) {
                case unit_kind::data_property: {
                    const value_tuple* v = nullptr;
                    if (u.bind == binding::type_level) {
                        v = &*u.constant_value;
                    } else {
                        auto it = obj.values.find(u.name);
                        if (it == obj.values.end())
                            throw schema_mismatch("object " + std::to_string(obj.object_id) +
                                                  " lacks value for " + u.name);
                        v = &it->second;
                    }
                    for (std::size_t j = 0; j < u.value_schema.size(); ++j) {
                        out.push_back(cell::of_real(v->components[j].magnitude));
                        if (u.value_schema[j] == component_desc::labeled)
                            out.push_back(cell::of_text(v->components[j].unit_label.value_or("")));
                    }
                    break;
                }
                case unit_kind::verification_function: {
                    double r;
                    try {
                        r = evaluate_unit(u, obj, type);
                    } catch (const error& e) {
                        throw constraint_violation("verification " + u.name + " failed to evaluate: " +
                                                   e.what());
                    }
                    out.push_back(cell::of_int(static_cast<std::int64_t>(r)));
                    break;
                }
                case unit_kind::method:
                    out.push_back(cell::of_text(expr::print_expression(u.expression)));
                    if (u.result_unit) out.push_back(cell::of_text(*u.result_unit));
                    break;
            }
        }
        return out;
    }

    static std::string cells_key(const std::vector<cell>& cells) {
        std::string key;
        for (const auto& c : cells) {
            key += cell_sql(c);
            key += '\x1f';
        }
        return key;
    }

    void bind_cell(sqlite3_stmt* s, int idx, const cell& c) {
        int rc = SQLITE_OK;
        switch (c.t) {
            case cell::tag::real: rc = sqlite3_bind_double(s, idx, c.real); break;
            case cell::tag::integer: rc = sqlite3_bind_int64(s, idx, c.integer); break;
            case cell::tag::text:
                rc = sqlite3_bind_text(s, idx, c.text.c_str(), static_cast<int>(c.text.size()),
                                       SQLITE_TRANSIENT);
                break;
        }
        if (rc != SQLITE_OK) throw io_error("bind failed: " + std::string(sqlite3_errmsg(db)));
    }

    void step_insert(stmt& s) {
        int rc = sqlite3_step(s.p);
        if (rc != SQLITE_DONE) {
            std::string msg = sqlite3_errmsg(db);
            sqlite3_reset(s.p);
            if (rc == SQLITE_CONSTRAINT) throw constraint_violation("insert rejected: " + msg);
            throw io_error("insert failed: " + msg);
        }
        sqlite3_reset(s.p);
        sqlite3_clear_bindings(s.p);
    }

    stmt insert_stmt(const table_spec& t) {
        std::string sql = "INSERT INTO " + t.name + " VALUES (";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) sql += ", ";
            sql += "?";
        }
        sql += ")";
        return stmt(db, sql);
    }

    std::int64_t core_row_id(std::size_t table_idx, const std::vector<cell>& cells, stmt& ins) {
        const auto& name = rel.tables[table_idx].name;
        auto& cache = core_rows[name];
        std::string key = cells_key(cells);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::int64_t id = static_cast<std::int64_t>(cache.size()) + 1;
        bind_cell(ins.p, 1, cell::of_int(id));
        for (std::size_t i = 0; i < cells.size(); ++i)
            bind_cell(ins.p, static_cast<int>(i + 2), cells[i]);
        step_insert(ins);
        cache.emplace(std::move(key), id);
        return id;
    }

    void apply_pragmas() {
        exec("PRAGMA page_size = 1024");
        exec("PRAGMA journal_mode = DELETE");
        exec("PRAGMA synchronous = OFF");
        exec("PRAGMA foreign_keys = ON");
    }

    void open_db() {
        if (sqlite3_open(path.string().c_str(), &db) != SQLITE_OK)
            throw io_error("cannot open database file: " + path.string());
    }

    void build_rel() {
        switch (var) {
            case class_variant::hc: rel = generate_schema(document.types); break;
            case class_variant::scic: rel = generate_schema(build_scic(document.types)); break;
            case class_variant::mcic: rel = generate_schema(build_mcic(document.types)); break;
        }
    }

    void write_catalog() {
        stmt ins(db, "INSERT INTO unit_catalog VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
        std::int64_t entry = 0;
        for (std::size_t i = 0; i < rel.tables.size(); ++i) {
            for (const auto& u : rel.bindings[i].units) {
                std::string definition;
                if (u.expression)
                    definition = expr::print_expression(u.expression);
                else if (u.constant_value)
                    definition = serialize_value_tuple(*u.constant_value);
                bind_cell(ins.p, 1, cell::of_int(++entry));
                bind_cell(ins.p, 2, cell::of_text(rel.tables[i].name));
                bind_cell(ins.p, 3, cell::of_text(u.name));
                bind_cell(ins.p, 4, cell::of_text(to_string(u.kind)));
                bind_cell(ins.p, 5, cell::of_text(to_string(u.bind)));
                bind_cell(ins.p, 6, cell::of_text(value_schema_text(u.value_schema)));
                bind_cell(ins.p, 7, cell::of_text(definition));
                bind_cell(ins.p, 8, cell::of_text(u.result_unit.value_or("")));
                step_insert(ins);
            }
        }
    }

    void load_core_caches() {
        for (std::size_t i = 0; i < rel.tables.size(); ++i) {
            if (rel.bindings[i].kind != bundle_kind::core) continue;
            const auto& t = rel.tables[i];
            stmt sel(db, "SELECT * FROM " + t.name + " ORDER BY core_id");
            auto& cache = core_rows[t.name];
            while (sqlite3_step(sel.p) == SQLITE_ROW) {
                std::int64_t id = sqlite3_column_int64(sel.p, 0);
                std::vector<cell> cells;
                read_row_cells(sel.p, i, 1, cells);
                cache.emplace(cells_key(cells), id);
            }
        }
    }

    // Reads the unit columns of the current row, starting at column `first`.
    void read_row_cells(sqlite3_stmt* s, std::size_t binding_idx, int first,
                        std::vector<cell>& out) {
        int col = first;
        for (const auto& u : rel.bindings[binding_idx].units) {
            for (const auto& plan : unit_columns(u)) {
                switch (plan.role) {
                    case col_role::magnitude:
                        out.push_back(cell::of_real(sqlite3_column_double(s, col)));
                        break;
                    case col_role::flag:
                        out.push_back(cell::of_int(sqlite3_column_int64(s, col)));
                        break;
                    default: {
                        const unsigned char* txt = sqlite3_column_text(s, col);
                        out.push_back(cell::of_text(txt ? reinterpret_cast<const char*>(txt) : ""));
                        break;
                    }
                }
                ++col;
            }
        }
    }

    std::uint64_t max_object_id() {
        std::uint64_t top = 0;
        for (std::size_t i = 0; i < rel.tables.size(); ++i) {
            if (rel.bindings[i].kind == bundle_kind::core) continue;
            stmt sel(db, "SELECT MAX(object_id) FROM " + rel.tables[i].name);
            if (sqlite3_step(sel.p) == SQLITE_ROW &&
                sqlite3_column_type(sel.p, 0) != SQLITE_NULL) {
                auto v = static_cast<std::uint64_t>(sqlite3_column_int64(sel.p, 0));
                top = std::max(top, v);
            }
        }
        return top;
    }

    bool object_id_taken(std::uint64_t id) {
        for (std::size_t i = 0; i < rel.tables.size(); ++i) {
            if (rel.bindings[i].kind == bundle_kind::core) continue;
            stmt sel(db, "SELECT 1 FROM " + rel.tables[i].name + " WHERE object_id = ?");
            bind_cell(sel.p, 1, cell::of_int(static_cast<std::int64_t>(id)));
            if (sqlite3_step(sel.p) == SQLITE_ROW) return true;
        }
        return false;
    }

    void bind_row(stmt& ins, std::uint64_t id, const std::vector<std::int64_t>& fks,
                  const std::vector<cell>& cells) {
        int idx = 1;
        bind_cell(ins.p, idx++, cell::of_int(static_cast<std::int64_t>(id)));
        for (auto fk : fks) bind_cell(ins.p, idx++, cell::of_int(fk));
        for (const auto& c : cells) bind_cell(ins.p, idx++, c);
        step_insert(ins);
    }
};

store::store(std::unique_ptr<impl> p) : impl_(std::move(p)) {}
store::store(store&&) noexcept = default;
store& store::operator=(store&&) noexcept = default;
store::~store() = default;

store store::create(const std::filesystem::path& db_file, const schema_doc& doc,
                    class_variant variant) {
    auto p = std::make_unique<impl>();
    p->path = db_file;
    p->document = doc;
    p->var = variant;
    p->build_rel();

    std::error_code ec;
    if (db_file.has_parent_path()) std::filesystem::create_directories(db_file.parent_path(), ec);
    std::filesystem::remove(db_file, ec);
    p->open_db();
    p->apply_pragmas();
    p->exec("BEGIN");
    p->exec(p->rel.ddl);
    p->exec("CREATE TABLE schema_info (key TEXT PRIMARY KEY, value TEXT)");
    {
        stmt ins(p->db, "INSERT INTO schema_info VALUES (?, ?)");
        auto put = [&](const std::string& k, const std::string& v) {
            p->bind_cell(ins.p, 1, cell::of_text(k));
            p->bind_cell(ins.p, 2, cell::of_text(v));
            p->step_insert(ins);
        };
        put("schema", serialize_schema(doc));
        put("variant", to_string(variant));
    }
    p->write_catalog();
    p->exec("COMMIT");
    return store(std::move(p));
}

store store::open(const std::filesystem::path& db_file) {
    if (!std::filesystem::exists(db_file))
        throw io_error("no database file at " + db_file.string());
    auto p = std::make_unique<impl>();
    p->path = db_file;
    p->open_db();
    p->apply_pragmas();

    std::string schema_text, variant_text;
    {
        stmt sel(p->db, "SELECT key, value FROM schema_info");
        while (sqlite3_step(sel.p) == SQLITE_ROW) {
            std::string k = reinterpret_cast<const char*>(sqlite3_column_text(sel.p, 0));
            std::string v = reinterpret_cast<const char*>(sqlite3_column_text(sel.p, 1));
            if (k == "schema")
                schema_text = v;
            else if (k == "variant")
                variant_text = v;
        }
    }
    if (schema_text.empty() || variant_text.empty())
        throw io_error("database lacks schema metadata: " + db_file.string());
    p->document = parse_schema(schema_text);
    p->var = class_variant_from_string(variant_text);
    p->build_rel();
    p->load_core_caches();
    p->next_id = p->max_object_id() + 1;
    return store(std::move(p));
}

std::uint64_t store::insert_objects(std::span<const object_instance> objects) {
    auto& im = *impl_;
    if (objects.empty()) return 0;

    // Statements per table, prepared once per batch.
    std::vector<stmt> inserts;
    inserts.reserve(im.rel.tables.size());
    for (const auto& t : im.rel.tables) inserts.push_back(im.insert_stmt(t));

    im.exec("BEGIN");
    try {
        for (const auto& obj : objects) {
            const type_def& type = im.type_of(obj);
            try {
                check_conformance(obj, type);
            } catch (const error& e) {
                throw schema_mismatch(e.what());
            }
            std::uint64_t id = obj.object_id ? obj.object_id : im.next_id;
            if (obj.object_id && im.object_id_taken(obj.object_id))
                throw constraint_violation("object id already stored: " +
                                           std::to_string(obj.object_id));

            if (im.var == class_variant::hc) {
                for (std::size_t i = 0; i < im.rel.tables.size(); ++i) {
                    if (im.rel.bindings[i].covered_types.front() != obj.type_name) continue;
                    auto cells = im.unit_cells(im.rel.bindings[i].units, obj, type);
                    im.bind_row(inserts[i], id, {}, cells);
                    break;
                }
            } else {
                std::vector<std::int64_t> fk_values;
                std::size_t proj_idx = 0;
                for (std::size_t i = 0; i < im.rel.tables.size(); ++i) {
                    const auto& bind = im.rel.bindings[i];
                    bool covers = std::find(bind.covered_types.begin(), bind.covered_types.end(),
                                            obj.type_name) != bind.covered_types.end();
                    if (!covers) continue;
                    if (bind.kind == bundle_kind::core) {
                        auto cells = im.unit_cells(bind.units, obj, type);
                        fk_values.push_back(im.core_row_id(i, cells, inserts[i]));
                    } else {
                        proj_idx = i;
                    }
                }
                auto cells = im.unit_cells(im.rel.bindings[proj_idx].units, obj, type);
                im.bind_row(inserts[proj_idx], id, fk_values, cells);
            }
            im.next_id = std::max(im.next_id, id + 1);
        }
        im.exec("COMMIT");
    } catch (...) {
        im.exec("ROLLBACK");
        throw;
    }
    return objects.size();
}

object_instance store::load_object(std::uint64_t object_id) {
    auto& im = *impl_;
    for (std::size_t i = 0; i < im.rel.tables.size(); ++i) {
        const auto& bind = im.rel.bindings[i];
        if (bind.kind == bundle_kind::core) continue;
        const auto& t = im.rel.tables[i];
        stmt sel(im.db, "SELECT * FROM " + t.name + " WHERE object_id = ?");
        im.bind_cell(sel.p, 1, cell::of_int(static_cast<std::int64_t>(object_id)));
        if (sqlite3_step(sel.p) != SQLITE_ROW) continue;

        object_instance obj;
        obj.object_id = object_id;
        obj.type_name = bind.covered_types.front();

        int col = 1 + static_cast<int>(t.foreign_keys.size());
        for (const auto& u : bind.units) {
            auto plans = unit_columns(u);
            if (u.kind == unit_kind::data_property && u.bind == binding::instance_level) {
                value_tuple v;
                int c = col;
                for (std::size_t j = 0; j < u.value_schema.size(); ++j) {
                    value_tuple::component comp;
                    comp.magnitude = sqlite3_column_double(sel.p, c++);
                    if (u.value_schema[j] == component_desc::labeled) {
                        const unsigned char* txt = sqlite3_column_text(sel.p, c++);
                        comp.unit_label = txt ? reinterpret_cast<const char*>(txt) : "";
                    }
                    v.components.push_back(std::move(comp));
                }
                obj.values.emplace(u.name, std::move(v));
            }
            col += static_cast<int>(plans.size());
        }
        return obj;
    }
    throw not_found("no object with id " + std::to_string(object_id));
}

measurement store::measure() {
    auto& im = *impl_;
    measurement m;
    std::error_code ec;
    auto size = std::filesystem::file_size(im.path, ec);
    if (ec) throw io_error("cannot stat " + im.path.string() + ": " + ec.message());
    m.live_bytes = static_cast<std::uint64_t>(size);
    m.export_bytes = export_sql().size();
    return m;
}

std::string store::export_sql() {
    auto& im = *impl_;
    std::string out = "BEGIN TRANSACTION;\n";
    out += im.rel.ddl;

    auto dump_table = [&](const table_spec& t) {
        stmt sel(im.db, "SELECT * FROM " + t.name + " ORDER BY " + t.primary_key);
        while (sqlite3_step(sel.p) == SQLITE_ROW) {
            out += "INSERT INTO " + t.name + " VALUES (";
            int n = sqlite3_column_count(sel.p);
            for (int c = 0; c < n; ++c) {
                if (c) out += ", ";
                switch (sqlite3_column_type(sel.p, c)) {
                    case SQLITE_INTEGER:
                        out += std::to_string(sqlite3_column_int64(sel.p, c));
                        break;
                    case SQLITE_FLOAT:
                        out += format_number(sqlite3_column_double(sel.p, c));
                        break;
                    case SQLITE_NULL:
                        out += "NULL";
                        break;
                    default: {
                        const unsigned char* txt = sqlite3_column_text(sel.p, c);
                        out += sql_quote(txt ? reinterpret_cast<const char*>(txt) : "");
                        break;
                    }
                }
            }
            out += ");\n";
        }
    };

    dump_table(im.rel.catalog);
    for (const auto& t : im.rel.tables) dump_table(t);
    out += "COMMIT;\n";
    return out;
}

std::uint64_t store::payload_bytes() {
    auto& im = *impl_;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < im.rel.tables.size(); ++i) {
        const auto& t = im.rel.tables[i];
        std::vector<col_role> roles;
        for (const auto& u : im.rel.bindings[i].units)
            for (const auto& plan : unit_columns(u)) roles.push_back(plan.role);

        int skip = 1 + static_cast<int>(t.foreign_keys.size());
        stmt sel(im.db, "SELECT * FROM " + t.name);
        while (sqlite3_step(sel.p) == SQLITE_ROW) {
            for (std::size_t r = 0; r < roles.size(); ++r) {
                int c = skip + static_cast<int>(r);
                switch (roles[r]) {
                    case col_role::magnitude: total += 8; break;
                    case col_role::flag: total += 1; break;
                    case col_role::label:
                    case col_role::text:
                        total += static_cast<std::uint64_t>(sqlite3_column_bytes(sel.p, c));
                        break;
                    case col_role::key: break;
                }
            }
        }
    }
    return total;
}

std::uint64_t store::next_object_id() const { return impl_->next_id; }
const relational_schema& store::schema() const { return impl_->rel; }
const schema_doc& store::doc() const { return impl_->document; }
class_variant store::variant() const { return impl_->var; }

}  // namespace coreforge
