#include "coreforge/bench.hpp"

#include <unistd.h>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coreforge {

std::string to_string(generation_regime r) {
    return r == generation_regime::identical ? "identical" : "randomized";
}

generation_regime regime_from_string(const std::string& s) {
    if (s == "identical") return generation_regime::identical;
    if (s == "randomized") return generation_regime::randomized;
    throw error("unknown generation regime: " + s + " (expected identical or randomized)");
}

namespace {

// splitmix64; fixed-width arithmetic keeps the stream portable.
struct rng {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    return h;
}

const value_tuple* default_for(const schema_doc& doc, const std::string& type_name,
                               const std::string& unit_name) {
    auto dit = doc.defaults.find(type_name);
    if (dit == doc.defaults.end()) return nullptr;
    auto uit = dit->second.find(unit_name);
    return uit == dit->second.end() ? nullptr : &uit->second;
}

}  // namespace

object_instance generate_instance(const schema_doc& doc, const std::string& type_name,
                                  generation_regime regime, std::uint64_t seed,
                                  std::uint64_t ordinal) {
    const type_def& type = doc.type_named(type_name);
    object_instance obj;
    obj.type_name = type_name;

    if (regime == generation_regime::identical) {
        for (const unit* u : type.instance_properties()) {
            const value_tuple* v = default_for(doc, type_name, u->name);
            if (!v)
                throw missing_value("identical regime needs a default for " + type_name + "." +
                                    u->name);
            obj.values.emplace(u->name, *v);
        }
    } else {
        rng r{seed ^ fnv1a(type_name) ^ (0x9E3779B97F4A7C15ull * (ordinal + 1))};
        for (const unit* u : type.instance_properties()) {
            const value_tuple* dflt = default_for(doc, type_name, u->name);
            value_tuple v;
            for (std::size_t j = 0; j < u->value_schema.size(); ++j) {
                value_tuple::component c;
                if (u->value_schema[j] == component_desc::angle_degrees)
                    c.magnitude = static_cast<double>(1 + r.next() % 359);
                else
                    c.magnitude = static_cast<double>(1 + r.next() % 9);
                if (u->value_schema[j] == component_desc::labeled) {
                    if (dflt && j < dflt->components.size() && dflt->components[j].unit_label)
                        c.unit_label = dflt->components[j].unit_label;
                    else
                        c.unit_label = "u";
                }
                v.components.push_back(std::move(c));
            }
            obj.values.emplace(u->name, std::move(v));
        }
    }
    check_conformance(obj, type);
    return obj;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot write " + p.string());
    out << text;
}

}  // namespace

measurement_table run_experiment(const experiment_config& config) {
    if (config.points < 2)
        throw degenerate_input("an experiment needs at least 2 measurement rounds");
    if (config.step < 1) throw degenerate_input("step must be at least 1 object per type");

    schema_doc doc = load_schema(config.schema_path);

    std::filesystem::path dir = config.work_dir;
    if (dir.empty())
        dir = std::filesystem::temp_directory_path() /
              ("coreforge-bench-" + std::to_string(static_cast<unsigned>(getpid())));
    std::filesystem::create_directories(dir);

    const class_variant variants[] = {class_variant::hc, class_variant::scic, class_variant::mcic};
    std::vector<store> stores;
    for (auto v : variants)
        stores.push_back(store::create(dir / (to_string(v) + ".db"), doc, v));

    measurement_table table;
    auto record = [&](std::uint64_t q) {
        for (std::size_t i = 0; i < stores.size(); ++i) {
            measurement m = stores[i].measure();
            table.rows.push_back({q, variants[i], static_cast<double>(m.live_bytes),
                                  static_cast<double>(m.export_bytes)});
        }
    };

    try {
        record(0);
        std::uint64_t total = 0;
        for (int round = 1; round < config.points; ++round) {
            std::vector<object_instance> batch;
            batch.reserve(static_cast<std::size_t>(config.step) * doc.types.size());
            for (const auto& t : doc.types) {
                std::uint64_t base = static_cast<std::uint64_t>(round - 1) *
                                     static_cast<std::uint64_t>(config.step);
                for (int k = 0; k < config.step; ++k)
                    batch.push_back(
                        generate_instance(doc, t.name, config.regime, config.seed, base + k));
            }
            for (auto& s : stores) s.insert_objects(batch);
            total += batch.size();
            record(total);
        }
    } catch (const std::exception& e) {
        if (!config.csv_out.empty())
            write_file(config.csv_out, to_csv(table) + "# FAILED: " + e.what() + "\n");
        throw;
    }

    if (!config.csv_out.empty()) write_file(config.csv_out, to_csv(table));
    if (!config.report_out.empty()) write_file(config.report_out, format_report(report(table)));
    return table;
}

std::string to_csv(const measurement_table& table) {
    std::string out = "Q,variant,live_bytes,export_bytes\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.total_objects) + "," + to_string(r.variant) + "," +
               format_number(r.live_bytes) + "," + format_number(r.export_bytes) + "\n";
    }
    return out;
}

measurement_table from_csv(const std::string& text) {
    measurement_table table;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "Q,variant,live_bytes,export_bytes")
                throw error("unexpected CSV header: " + line);
            saw_header = true;
            continue;
        }
        std::array<std::string, 4> f;
        std::size_t start = 0;
        for (int i = 0; i < 4; ++i) {
            std::size_t comma = line.find(',', start);
            if ((i < 3) != (comma != std::string::npos))
                throw error("CSV line " + std::to_string(line_no) + " wants 4 fields: " + line);
            f[i] = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                 : comma - start);
            start = comma + 1;
        }
        measurement_row r;
        try {
            r.total_objects = std::stoull(f[0]);
            r.variant = class_variant_from_string(f[1]);
            r.live_bytes = std::stod(f[2]);
            r.export_bytes = std::stod(f[3]);
        } catch (const std::invalid_argument&) {
            throw error("bad CSV value on line " + std::to_string(line_no) + ": " + line);
        } catch (const std::out_of_range&) {
            throw error("bad CSV value on line " + std::to_string(line_no) + ": " + line);
        }
        table.rows.push_back(std::move(r));
    }
    if (!saw_header) throw error("CSV is missing its header line");
    return table;
}

measurement_table load_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("cannot open CSV file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
}

experiment_summary report(const measurement_table& table) {
    std::map<class_variant, std::vector<measurement_row>> by_variant;
    for (const auto& r : table.rows) by_variant[r.variant].push_back(r);

    experiment_summary s;
    for (const auto& [variant, rows] : by_variant) {
        std::vector<std::pair<double, double>> live, exp;
        for (const auto& r : rows) {
            live.emplace_back(static_cast<double>(r.total_objects), r.live_bytes);
            exp.emplace_back(static_cast<double>(r.total_objects), r.export_bytes);
        }
        s.fits[variant] = {fit_linear(live), fit_linear(exp)};
    }

    // Rounds where all three variants were measured, Q > 0.
    std::map<std::uint64_t, std::map<class_variant, const measurement_row*>> rounds;
    for (const auto& r : table.rows) rounds[r.total_objects][r.variant] = &r;

    double sum_live_hc = 0, sum_live_scic = 0, sum_exp_hc = 0, sum_exp_scic = 0;
    std::size_t n = 0;
    bool live_ok = true, export_ok = true;
    const measurement_row* last[3] = {nullptr, nullptr, nullptr};
    for (const auto& [q, per] : rounds) {
        if (per.size() != 3) continue;
        const auto* hc = per.at(class_variant::hc);
        const auto* sc = per.at(class_variant::scic);
        const auto* mc = per.at(class_variant::mcic);
        if (q == 0) continue;
        ++n;
        sum_live_hc += 100.0 * (1.0 - mc->live_bytes / hc->live_bytes);
        sum_live_scic += 100.0 * (1.0 - mc->live_bytes / sc->live_bytes);
        sum_exp_hc += 100.0 * (1.0 - mc->export_bytes / hc->export_bytes);
        sum_exp_scic += 100.0 * (1.0 - mc->export_bytes / sc->export_bytes);
        if (!(mc->live_bytes < sc->live_bytes && sc->live_bytes < hc->live_bytes))
            live_ok = false;
        if (!(mc->export_bytes < sc->export_bytes && sc->export_bytes < hc->export_bytes))
            export_ok = false;
        last[0] = hc;
        last[1] = sc;
        last[2] = mc;
    }
    if (n) {
        s.live_reduction_vs_hc = sum_live_hc / static_cast<double>(n);
        s.live_reduction_vs_scic = sum_live_scic / static_cast<double>(n);
        s.export_reduction_vs_hc = sum_exp_hc / static_cast<double>(n);
        s.export_reduction_vs_scic = sum_exp_scic / static_cast<double>(n);
        s.ordering_live = live_ok;
        s.ordering_export = export_ok;
        s.final_round_ordering =
            last[2]->live_bytes < last[1]->live_bytes && last[1]->live_bytes < last[0]->live_bytes &&
            last[2]->export_bytes < last[1]->export_bytes &&
            last[1]->export_bytes < last[0]->export_bytes;
    }
    return s;
}

std::string format_report(const experiment_summary& summary) {
    char buf[160];
    std::string out = "linear fits, size = slope * Q + intercept\n";
    out += "  variant  measure  slope          intercept      r^2\n";
    for (const auto& [variant, fits] : summary.fits) {
        for (int m = 0; m < 2; ++m) {
            std::snprintf(buf, sizeof buf, "  %-7s  %-7s  %-13.6g  %-13.6g  %.6f\n",
                          to_string(variant).c_str(), m == 0 ? "live" : "export",
                          fits[static_cast<std::size_t>(m)].slope,
                          fits[static_cast<std::size_t>(m)].intercept,
                          fits[static_cast<std::size_t>(m)].r_squared);
            out += buf;
        }
    }
    out += "\nmean reduction of mcic storage over rounds with Q > 0\n";
    std::snprintf(buf, sizeof buf, "  vs hc:    live %.2f%%   export %.2f%%\n",
                  summary.live_reduction_vs_hc, summary.export_reduction_vs_hc);
    out += buf;
    std::snprintf(buf, sizeof buf, "  vs scic:  live %.2f%%   export %.2f%%\n",
                  summary.live_reduction_vs_scic, summary.export_reduction_vs_scic);
    out += buf;
    out += "\nsize ordering mcic < scic < hc\n";
    out += std::string("  every round: live ") + (summary.ordering_live ? "yes" : "no") +
           ", export " + (summary.ordering_export ? "yes" : "no") + "\n";
    out += std::string("  final round: ") + (summary.final_round_ordering ? "yes" : "no") + "\n";
    return out;
}

}  // namespace coreforge
