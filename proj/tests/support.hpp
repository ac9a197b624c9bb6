#pragma once

// Shared helpers for the test binaries: fixture loading, tuple builders, a
// deterministic rng, synthetic families with known sharing structure, and
// the recorded measurement series used as a regression baseline.

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coreforge/bench.hpp"
#include "coreforge/schema_io.hpp"

namespace testsupport {

inline std::filesystem::path fixture_path() { return FIXTURE_SCHEMA; }

inline const coreforge::schema_doc& fixture() {
    static const coreforge::schema_doc doc = coreforge::load_schema(fixture_path());
    return doc;
}

inline coreforge::value_tuple nums(std::initializer_list<double> xs) {
    coreforge::value_tuple v;
    for (double x : xs) v.components.push_back({x, std::nullopt});
    return v;
}

inline coreforge::value_tuple labeled(std::initializer_list<double> xs, const std::string& lbl) {
    coreforge::value_tuple v;
    for (double x : xs) v.components.push_back({x, lbl});
    return v;
}

// splitmix64; test-local so suite randomness is independent of the library.
struct rng64 {
    std::uint64_t state;

    explicit rng64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Temp directory removed on scope exit.
struct scratch_dir {
    std::filesystem::path path;

    explicit scratch_dir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("coreforge-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~scratch_dir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    scratch_dir(const scratch_dir&) = delete;
    scratch_dir& operator=(const scratch_dir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path / name; }
};

// Structural identity string for multiset comparisons across factor/rebuild.
inline std::string unit_fingerprint(const coreforge::unit& u) {
    std::string s = u.name;
    s += '|';
    s += coreforge::to_string(u.kind);
    s += '|';
    s += coreforge::to_string(u.bind);
    s += '|';
    for (auto d : u.value_schema) {
        s += coreforge::to_string(d);
        s += ',';
    }
    s += '|';
    if (u.constant_value) s += coreforge::serialize_value_tuple(*u.constant_value);
    s += '|';
    if (u.expression) s += coreforge::expr::alpha_canonicalize(u.expression).key;
    s += '|';
    if (u.result_unit) s += *u.result_unit;
    return s;
}

inline std::vector<std::string> type_fingerprints(const coreforge::type_def& t) {
    std::vector<std::string> out;
    for (const auto* u : t.all_units()) out.push_back(unit_fingerprint(*u));
    std::sort(out.begin(), out.end());
    return out;
}

// A synthetic family plus the sharing structure it was built from. Each
// pool unit is placed, definition-identical, into every type of its owner
// set; a name may carry a second structurally different variant on a
// disjoint owner set. Ground truth for the factorizer.
struct family {
    std::vector<coreforge::type_def> types;
    std::map<std::string, std::vector<std::set<std::size_t>>> owners;  // type-level units

    // owner set -> names of the units carried by that exact set
    std::map<std::set<std::size_t>, std::set<std::string>> groups() const {
        std::map<std::set<std::size_t>, std::set<std::string>> g;
        for (const auto& [name, sets] : owners)
            for (const auto& s : sets) g[s].insert(name);
        return g;
    }
};

inline coreforge::unit pool_unit(rng64& rng, const std::string& name, std::size_t kind_pick) {
    using namespace coreforge;
    unit u;
    u.name = name;
    switch (kind_pick % 3) {
        case 0: {
            u.kind = unit_kind::data_property;
            u.bind = binding::type_level;
            std::size_t k = 1 + rng.below(3);
            value_tuple v;
            for (std::size_t i = 0; i < k; ++i) {
                switch (rng.below(3)) {
                    case 0:
                        u.value_schema.push_back(component_desc::numeric);
                        v.components.push_back({double(rng.below(10)), std::nullopt});
                        break;
                    case 1:
                        u.value_schema.push_back(component_desc::labeled);
                        v.components.push_back({double(rng.below(10)), std::string("kg")});
                        break;
                    default:
                        u.value_schema.push_back(component_desc::angle_degrees);
                        v.components.push_back({double(10 + rng.below(340)), std::nullopt});
                        break;
                }
            }
            u.constant_value = std::move(v);
            break;
        }
        case 1: {
            u.kind = unit_kind::verification_function;
            u.bind = binding::type_level;
            u.value_schema = {component_desc::numeric};
            static const char* const vfs[] = {
                "v1(base) <= v2(base)",
                "v1(base) = v2(base)",
                "v1(base) + v2(base) > 0",
                "v1(base(anchor)) < v2(base) + 5",
                "v1(base) = v2(base) and v1(base) >= 0",
            };
            u.expression = expr::parse_expression(vfs[rng.below(5)]);
            break;
        }
        default: {
            u.kind = unit_kind::method;
            u.bind = binding::type_level;
            u.value_schema = {component_desc::numeric};
            static const char* const defs[] = {
                "v1(base) * v2(base)",
                "sum(base)",
                "v1(base) ^ 2",
                "sin(v1(base))",
                "v1(base) + v2(base) * 2",
            };
            u.expression = expr::parse_expression(defs[rng.below(5)]);
            if (rng.below(2) == 0) u.result_unit = "m2";
            break;
        }
    }
    return u;
}

inline family random_family(rng64& rng, std::size_t n_types) {
    using namespace coreforge;
    family fam;
    std::vector<std::vector<unit>> spec(n_types), sig(n_types);

    unit base;  // shared instance-level anchor every expression can select from
    base.name = "base";
    base.kind = unit_kind::data_property;
    base.bind = binding::instance_level;
    base.value_schema = {component_desc::numeric, component_desc::numeric};
    for (auto& s : spec) s.push_back(base);

    std::size_t pool = 3 + rng.below(7);
    for (std::size_t i = 0; i < pool; ++i) {
        std::string name = "u" + std::to_string(i);
        std::vector<std::size_t> order(n_types);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t j = n_types; j > 1; --j) std::swap(order[j - 1], order[rng.below(j)]);

        std::size_t take = 1 + rng.below(n_types);
        std::set<std::size_t> first(order.begin(), order.begin() + take);
        std::set<std::size_t> second;
        if (take < n_types && rng.below(4) == 0)
            second.insert(order.begin() + take,
                          order.begin() + take + 1 + rng.below(n_types - take));

        // same-named variants get shifted kinds so they can never be
        // equivalent; variants on disjoint owner sets must stay distinct
        std::size_t kind_pick = rng.below(3);
        std::size_t variant = 0;
        for (const auto* own : {&first, &second}) {
            if (own->empty()) continue;
            unit u = pool_unit(rng, name, kind_pick + variant++);
            for (std::size_t t : *own) (u.kind == unit_kind::method ? sig : spec)[t].push_back(u);
            fam.owners[name].push_back(*own);
        }
    }

    for (std::size_t t = 0; t < n_types; ++t) {
        if (rng.below(2) == 0) {
            unit p;
            p.name = "own" + std::to_string(t);
            p.kind = unit_kind::data_property;
            p.bind = binding::instance_level;
            p.value_schema = {component_desc::numeric};
            spec[t].push_back(p);
        }
        fam.types.push_back(
            define_type("t" + std::to_string(t), std::move(spec[t]), std::move(sig[t])));
    }
    return fam;
}

// Core layout as a comparable value: member set -> unit name set.
inline std::map<std::set<std::size_t>, std::set<std::string>> grouping_of(const coreforge::mcic& m) {
    std::map<std::set<std::size_t>, std::set<std::string>> out;
    for (const auto& c : m.cores) {
        std::set<std::size_t> key(c.members.begin(), c.members.end());
        if (out.count(key)) throw std::runtime_error("duplicate core member set");
        std::set<std::string>& names = out[key];
        for (const auto& u : c.units) names.insert(u.name);
    }
    return out;
}

// Exhaustive-subset grouping: for every non-empty subset of types, the
// units present (by equivalence) in exactly that subset. Independent of
// the grouping algorithm under test.
inline std::map<std::set<std::size_t>, std::set<std::string>> exhaustive_grouping(
    const std::vector<coreforge::type_def>& types) {
    std::map<std::set<std::size_t>, std::set<std::string>> out;
    const std::size_t n = types.size();
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        std::set<std::size_t> subset;
        for (std::size_t t = 0; t < n; ++t)
            if (mask & (std::size_t(1) << t)) subset.insert(t);
        std::set<std::string> found;
        for (const coreforge::unit* u : types[*subset.begin()].all_units()) {
            if (u->bind != coreforge::binding::type_level) continue;
            std::set<std::size_t> present;
            for (std::size_t t = 0; t < n; ++t)
                for (const coreforge::unit* w : types[t].all_units())
                    if (coreforge::unit_equivalent(*u, *w)) {
                        present.insert(t);
                        break;
                    }
            if (present == subset) found.insert(u->name);
        }
        if (!found.empty()) out[subset] = std::move(found);
    }
    return out;
}

// Recorded measurement series (sizes in megabytes, 1 Mb = 1048576 bytes)
// used as the regression baseline for fits and reduction summaries.
struct baseline_row {
    double q, hc_live, scic_live, mcic_live, hc_file, scic_file, mcic_file;

    double column(int i) const {
        switch (i) {
            case 1: return hc_live;
            case 2: return scic_live;
            case 3: return mcic_live;
            case 4: return hc_file;
            case 5: return scic_file;
            default: return mcic_file;
        }
    }
};

inline const std::vector<baseline_row>& baseline_series() {
    static const std::vector<baseline_row> rows = {
        {0, 0.046875, 0.0625, 0.125000, 0.006396, 0.006080, 0.007398},
        {12000, 4.546875, 4.5625, 1.031250, 4.730189, 2.954480, 0.872142},
        {24000, 10.546875, 7.5625, 2.593750, 9.456926, 5.905566, 1.738131},
        {36000, 13.546875, 8.5625, 4.640625, 13.747144, 8.861661, 2.610227},
        {48000, 17.546875, 11.5625, 4.640625, 18.928142, 11.825956, 3.488397},
        {60000, 21.546875, 14.5625, 5.640625, 23.666618, 14.789045, 4.366487},
        {72000, 26.546875, 17.5625, 5.640625, 28.405355, 17.751929, 5.244479},
        {84000, 30.546875, 20.5625, 8.640625, 33.143831, 20.715019, 6.122471},
        {96000, 33.546875, 21.5625, 8.640625, 37.882568, 23.678108, 7.000561},
        {108000, 40.546875, 23.5625, 8.640625, 42.621044, 26.641197, 7.878553},
        {120000, 45.546875, 26.5625, 8.640625, 47.359781, 29.604286, 8.756643},
        {132000, 45.546875, 29.5625, 9.640625, 52.098518, 32.567581, 9.634635},
        {144000, 47.546875, 29.5625, 9.640625, 56.837220, 35.530940, 10.512725},
        {156000, 47.546875, 29.5625, 9.640625, 61.575731, 38.493554, 11.390717},
        {168000, 47.546875, 29.5625, 9.640625, 66.314207, 41.456849, 12.268807},
        {180000, 47.546875, 29.5625, 13.640625, 71.053206, 44.419733, 13.146799},
        {192000, 68.640625, 43.5625, 15.640625, 75.791682, 47.382822, 14.024791},
        {204000, 75.640625, 47.5625, 15.640625, 80.530419, 50.346117, 14.902881},
        {216000, 75.640625, 47.5625, 16.640625, 85.268895, 53.309206, 15.780873},
        {228000, 84.656250, 52.5625, 16.640625, 90.007632, 56.272295, 16.659141},
        {240000, 84.656250, 52.5625, 16.640625, 94.746369, 59.235385, 17.537246},
    };
    return rows;
}

inline constexpr double kMb = 1048576.0;

inline coreforge::measurement_table baseline_table() {
    coreforge::measurement_table t;
    for (const auto& r : baseline_series()) {
        auto q = static_cast<std::uint64_t>(r.q);
        t.rows.push_back({q, coreforge::class_variant::hc, r.hc_live * kMb, r.hc_file * kMb});
        t.rows.push_back({q, coreforge::class_variant::scic, r.scic_live * kMb, r.scic_file * kMb});
        t.rows.push_back({q, coreforge::class_variant::mcic, r.mcic_live * kMb, r.mcic_file * kMb});
    }
    return t;
}

}  // namespace testsupport
