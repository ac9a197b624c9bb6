#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "coreforge/bench.hpp"
#include "coreforge/efficiency.hpp"
#include "coreforge/expr.hpp"
#include "coreforge/factorize.hpp"
#include "coreforge/schema_io.hpp"
#include "coreforge/store.hpp"

namespace {

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw coreforge::io_error("cannot write " + path);
    out << text;
}

std::map<std::string, std::uint64_t> parse_counts(const std::string& text) {
    std::map<std::string, std::uint64_t> counts;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw coreforge::error("counts want name=count pairs, got '" + item + "'");
        counts[item.substr(0, eq)] = std::stoull(item.substr(eq + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (counts.empty()) throw coreforge::error("counts list is empty");
    return counts;
}

int run(int argc, char** argv) {
    CLI::App app{"schema factorization and storage benchmark toolkit"};
    app.require_subcommand(1);

    // expr eval
    auto* expr_cmd = app.add_subcommand("expr", "expression mini-language utilities");
    expr_cmd->require_subcommand(1);
    auto* eval_cmd = expr_cmd->add_subcommand("eval", "evaluate a selector-free expression");
    std::string expr_text;
    eval_cmd->add_option("expression", expr_text, "expression text")->required();

    // factorize
    auto* fact_cmd = app.add_subcommand("factorize", "decompose a schema into shared cores");
    std::string fact_schema, fact_variant = "mcic", fact_out;
    fact_cmd->add_option("schema", fact_schema, "schema file")->required();
    fact_cmd->add_option("--variant", fact_variant, "scic or mcic")
        ->check(CLI::IsMember({"scic", "mcic"}));
    fact_cmd->add_option("--out", fact_out, "output file (default: stdout)");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "predict storage sizes before creating a DB");
    std::string est_schema, est_counts, est_model = "units";
    est_cmd->add_option("schema", est_schema, "schema file")->required();
    est_cmd->add_option("--counts", est_counts, "per-type object counts, name=count,...")
        ->required();
    est_cmd->add_option("--model", est_model, "units (1 per unit) or bytes (column upper bound)")
        ->check(CLI::IsMember({"units", "bytes"}));

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "least-squares size fits from a measurement CSV");
    std::string fit_csv;
    fit_cmd->add_option("csv", fit_csv, "CSV produced by the bench subcommand")->required();

    // schema
    auto* schema_cmd = app.add_subcommand("schema", "print the relational DDL for a variant");
    std::string ddl_schema, ddl_variant = "hc";
    schema_cmd->add_option("schema", ddl_schema, "schema file")->required();
    schema_cmd->add_option("--variant", ddl_variant, "hc, scic or mcic")
        ->check(CLI::IsMember({"hc", "scic", "mcic"}));

    // populate
    auto* pop_cmd = app.add_subcommand("populate", "insert generated objects into a database");
    std::string pop_db, pop_schema, pop_variant = "hc", pop_regime = "identical";
    std::uint64_t pop_n = 0, pop_seed = 1;
    pop_cmd->add_option("db", pop_db, "database file")->required();
    pop_cmd->add_option("--n", pop_n, "objects per type")->required();
    pop_cmd->add_option("--regime", pop_regime, "identical or randomized")
        ->check(CLI::IsMember({"identical", "randomized"}));
    pop_cmd->add_option("--seed", pop_seed, "randomized regime seed");
    pop_cmd->add_option("--schema", pop_schema, "schema file (to create a missing database)");
    pop_cmd->add_option("--variant", pop_variant, "variant when creating (hc, scic, mcic)")
        ->check(CLI::IsMember({"hc", "scic", "mcic"}));

    // measure
    auto* meas_cmd = app.add_subcommand("measure", "report live and export sizes of a database");
    std::string meas_db, meas_export;
    meas_cmd->add_option("db", meas_db, "database file")->required();
    meas_cmd->add_option("--export", meas_export, "also write the SQL dump here");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run the three-variant measurement sweep");
    coreforge::experiment_config cfg;
    std::string bench_schema, bench_regime = "identical", bench_csv, bench_report, bench_dir;
    bench_cmd->add_option("--schema", bench_schema, "schema file")->required();
    bench_cmd->add_option("--points", cfg.points, "measurement rounds, including Q = 0");
    bench_cmd->add_option("--step", cfg.step, "objects added per type per round");
    bench_cmd->add_option("--regime", bench_regime, "identical or randomized")
        ->check(CLI::IsMember({"identical", "randomized"}));
    bench_cmd->add_option("--seed", cfg.seed, "randomized regime seed");
    bench_cmd->add_option("--csv", bench_csv, "write the measurement table here");
    bench_cmd->add_option("--report", bench_report, "write the fit/reduction report here");
    bench_cmd->add_option("--work-dir", bench_dir, "directory for the database files");

    CLI11_PARSE(app, argc, argv);

    if (eval_cmd->parsed()) {
        auto ast = coreforge::expr::parse_expression(expr_text);
        double v = coreforge::expr::evaluate(
            ast, [](std::string_view) -> const coreforge::value_tuple* { return nullptr; });
        std::cout << coreforge::format_number(v) << "\n";
        return 0;
    }

    if (fact_cmd->parsed()) {
        auto doc = coreforge::load_schema(fact_schema);
        std::string out;
        if (fact_variant == "scic") {
            out = coreforge::serialize_scic(coreforge::build_scic(doc.types));
        } else {
            auto m = coreforge::build_mcic(doc.types);
            out = coreforge::serialize_mcic(m) + "\n" + coreforge::census_table(m);
        }
        write_or_print(fact_out, out);
        return 0;
    }

    if (est_cmd->parsed()) {
        auto doc = coreforge::load_schema(est_schema);
        auto counts = parse_counts(est_counts);
        auto m = coreforge::build_mcic(doc.types);
        coreforge::size_model model = est_model == "units"
                                          ? coreforge::unit_count_model(m, counts)
                                          : coreforge::column_byte_model(m, doc.types, counts);
        double hc = coreforge::estimate_storage(model, coreforge::storage_variant::hc);
        double mcic = coreforge::estimate_storage(model, coreforge::storage_variant::mcic);
        std::cout << "M_HC = " << coreforge::format_number(hc) << "\n";
        std::cout << "M_MCIC = " << coreforge::format_number(mcic) << "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", coreforge::efficiency_coefficient(mcic, hc));
        std::cout << "E = " << buf << "%\n";
        return 0;
    }

    if (fit_cmd->parsed()) {
        auto table = coreforge::load_csv(fit_csv);
        auto summary = coreforge::report(table);
        for (const auto& [variant, fits] : summary.fits) {
            for (int m = 0; m < 2; ++m) {
                const auto& f = fits[static_cast<std::size_t>(m)];
                char buf[160];
                std::snprintf(buf, sizeof buf, "%-5s %-7s slope=%.10g intercept=%.10g r2=%.6f\n",
                              coreforge::to_string(variant).c_str(), m == 0 ? "live" : "export",
                              f.slope, f.intercept, f.r_squared);
                std::cout << buf;
            }
        }
        return 0;
    }

    if (schema_cmd->parsed()) {
        auto doc = coreforge::load_schema(ddl_schema);
        coreforge::relational_schema rel;
        if (ddl_variant == "hc")
            rel = coreforge::generate_schema(doc.types);
        else if (ddl_variant == "scic")
            rel = coreforge::generate_schema(coreforge::build_scic(doc.types));
        else
            rel = coreforge::generate_schema(coreforge::build_mcic(doc.types));
        std::cout << rel.ddl;
        return 0;
    }

    if (pop_cmd->parsed()) {
        coreforge::store st = [&] {
            if (std::filesystem::exists(pop_db)) return coreforge::store::open(pop_db);
            if (pop_schema.empty())
                throw coreforge::error("database does not exist; pass --schema to create it");
            return coreforge::store::create(pop_db, coreforge::load_schema(pop_schema),
                                            coreforge::class_variant_from_string(pop_variant));
        }();
        auto regime = coreforge::regime_from_string(pop_regime);
        std::vector<coreforge::object_instance> batch;
        for (const auto& t : st.doc().types)
            for (std::uint64_t k = 0; k < pop_n; ++k)
                batch.push_back(coreforge::generate_instance(st.doc(), t.name, regime, pop_seed, k));
        std::uint64_t n = st.insert_objects(batch);
        std::cout << "inserted " << n << " objects\n";
        return 0;
    }

    if (meas_cmd->parsed()) {
        coreforge::store st = coreforge::store::open(meas_db);
        auto m = st.measure();
        if (!meas_export.empty()) write_or_print(meas_export, st.export_sql());
        std::cout << "live_bytes = " << m.live_bytes << "\n";
        std::cout << "export_bytes = " << m.export_bytes << "\n";
        return 0;
    }

    if (bench_cmd->parsed()) {
        cfg.schema_path = bench_schema;
        cfg.regime = coreforge::regime_from_string(bench_regime);
        cfg.csv_out = bench_csv;
        cfg.report_out = bench_report;
        cfg.work_dir = bench_dir;
        auto table = coreforge::run_experiment(cfg);
        auto summary = coreforge::report(table);
        std::cout << coreforge::format_report(summary);
        return summary.final_round_ordering ? 0 : 2;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const coreforge::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
