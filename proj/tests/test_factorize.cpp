#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "coreforge/factorize.hpp"
#include "support.hpp"

using namespace coreforge;

namespace {

std::vector<std::string> names_of(const std::vector<unit>& units) {
    std::vector<std::string> out;
    for (const auto& u : units) out.push_back(u.name);
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("single-core factorization splits shared from type-specific units") {
    const auto& doc = testsupport::fixture();
    scic c = build_scic(doc.types);

    CHECK(c.name == "square+rectangle+rhombus");
    CHECK(c.type_names == std::vector<std::string>{"square", "rectangle", "rhombus"});
    CHECK(names_of(c.core) ==
          std::vector<std::string>{"side_count", "angle_count", "vf_angle_sum", "perimeter"});

    CHECK(names_of(c.projections.at("square")) ==
          std::vector<std::string>{"sides", "angles", "vf_sides_equal", "vf_right_angles",
                                   "area_square"});
    CHECK(names_of(c.projections.at("rectangle")) ==
          std::vector<std::string>{"sides", "angles", "vf_right_angles",
                                   "vf_opposite_sides_equal", "area_rectangle"});
    CHECK(names_of(c.projections.at("rhombus")) ==
          std::vector<std::string>{"sides", "angles", "vf_sides_equal",
                                   "vf_opposite_angles_equal", "area_rhombus"});
}

TEST_CASE("multi-core factorization reproduces the quadrangle decomposition") {
    const auto& doc = testsupport::fixture();
    mcic m = build_mcic(doc.types);

    REQUIRE(m.cores.size() == 6);
    CHECK(m.cores[0].members == std::vector<std::size_t>{0, 1, 2});
    CHECK(names_of(m.cores[0].units) ==
          std::vector<std::string>{"side_count", "angle_count", "vf_angle_sum", "perimeter"});
    CHECK(m.cores[1].members == std::vector<std::size_t>{0, 1});
    CHECK(names_of(m.cores[1].units) == std::vector<std::string>{"angles", "vf_right_angles"});
    CHECK(m.cores[2].members == std::vector<std::size_t>{0, 2});
    CHECK(names_of(m.cores[2].units) == std::vector<std::string>{"vf_sides_equal"});
    CHECK(m.cores[3].members == std::vector<std::size_t>{0});
    CHECK(names_of(m.cores[3].units) == std::vector<std::string>{"area_square"});
    CHECK(m.cores[4].members == std::vector<std::size_t>{1});
    CHECK(names_of(m.cores[4].units) ==
          std::vector<std::string>{"vf_opposite_sides_equal", "area_rectangle"});
    CHECK(m.cores[5].members == std::vector<std::size_t>{2});
    CHECK(names_of(m.cores[5].units) ==
          std::vector<std::string>{"vf_opposite_angles_equal", "area_rhombus"});

    CHECK(m.member_names(m.cores[1]) == std::vector<std::string>{"square", "rectangle"});

    CHECK(names_of(m.projections.at("square")) == std::vector<std::string>{"sides"});
    CHECK(names_of(m.projections.at("rectangle")) == std::vector<std::string>{"sides"});
    CHECK(names_of(m.projections.at("rhombus")) == std::vector<std::string>{"sides", "angles"});

    CHECK(core_census(m) ==
          std::map<std::size_t, std::size_t>{{3, 1}, {2, 2}, {1, 3}});

    // the single core of the scic is the full-level core
    scic s = build_scic(doc.types);
    CHECK(names_of(s.core) == names_of(m.cores[0].units));
}

TEST_CASE("degenerate families") {
    const auto& doc = testsupport::fixture();
    const type_def& square = doc.type_named("square");

    CHECK_THROWS_AS(build_scic({}), too_few_types);
    CHECK_THROWS_AS(build_scic({square}), too_few_types);
    CHECK_THROWS_AS(build_mcic({}), too_few_types);
    CHECK_THROWS_AS(build_scic({square, square}), duplicate_type_name);
    CHECK_THROWS_AS(build_mcic({square, square}), duplicate_type_name);

    // one type alone: every type-level unit sits in the single level-1 core
    mcic solo = build_mcic({square});
    REQUIRE(solo.cores.size() == 1);
    CHECK(solo.cores[0].members == std::vector<std::size_t>{0});
    CHECK(solo.cores[0].units.size() == 8);
    CHECK(names_of(solo.projections.at("square")) == std::vector<std::string>{"sides"});
    CHECK(core_census(solo) == std::map<std::size_t, std::size_t>{{1, 1}});

    // structurally identical twins: everything shared, projections empty
    testsupport::rng64 rng(7);
    auto fam = testsupport::random_family(rng, 1);
    type_def a = fam.types[0];
    type_def b = a;
    b.name = "twin";
    scic twins = build_scic({a, b});
    std::size_t type_level = 0;
    for (const unit* u : a.all_units())
        if (u->bind == binding::type_level) ++type_level;
    CHECK(twins.core.size() == type_level);
    for (const auto& [_, proj] : twins.projections)
        for (const auto& u : proj) CHECK(u.bind == binding::instance_level);

    // nothing shared: scic core is empty, every unit stays with its type
    auto left = define_type(
        "left",
        {[] {
            unit u;
            u.name = "alpha";
            u.kind = unit_kind::data_property;
            u.bind = binding::type_level;
            u.value_schema = {component_desc::numeric};
            u.constant_value = testsupport::nums({1});
            return u;
        }()},
        {});
    auto right = define_type(
        "right",
        {[] {
            unit u;
            u.name = "beta";
            u.kind = unit_kind::data_property;
            u.bind = binding::type_level;
            u.value_schema = {component_desc::numeric};
            u.constant_value = testsupport::nums({2});
            return u;
        }()},
        {});
    scic disjoint = build_scic({left, right});
    CHECK(disjoint.core.empty());
    CHECK(names_of(disjoint.projections.at("left")) == std::vector<std::string>{"alpha"});
    mcic dm = build_mcic({left, right});
    CHECK(core_census(dm) == std::map<std::size_t, std::size_t>{{1, 2}});
}

TEST_CASE("factored classes rebuild the original types") {
    const auto& doc = testsupport::fixture();
    scic s = build_scic(doc.types);
    mcic m = build_mcic(doc.types);

    for (const auto& t : doc.types) {
        CHECK(testsupport::type_fingerprints(extract_type(s, t.name)) ==
              testsupport::type_fingerprints(t));
        CHECK(testsupport::type_fingerprints(extract_type(m, t.name)) ==
              testsupport::type_fingerprints(t));
    }
    CHECK_THROWS_AS(extract_type(s, "pentagon"), unknown_type_name);
    CHECK_THROWS_AS(extract_type(m, "pentagon"), unknown_type_name);
}

TEST_CASE("unit counts shrink monotonically across representations") {
    const auto& doc = testsupport::fixture();
    CHECK(unit_counts(class_variant::hc, doc.types) == unit_counts_result{21, 6});
    CHECK(unit_counts(class_variant::scic, doc.types) == unit_counts_result{15, 4});
    CHECK(unit_counts(class_variant::mcic, doc.types) == unit_counts_result{12, 4});
}

TEST_CASE("random families: grouping matches construction and brute force") {
    testsupport::rng64 rng(20240817);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 2 + rng.below(5);
        auto fam = testsupport::random_family(rng, n);
        CAPTURE(round);
        CAPTURE(n);

        mcic m = build_mcic(fam.types);
        auto got = testsupport::grouping_of(m);
        auto expected = fam.groups();
        CHECK(got == expected);

        // census per level never exceeds the number of subsets of that size
        auto census = core_census(m);
        std::size_t total = 0;
        for (const auto& [level, count] : census) {
            CHECK(level >= 1);
            CHECK(level <= n);
            CHECK(count <= binomial(n, level));
            total += count;
        }
        CHECK(total == m.cores.size());

        // rebuild every type from both factorizations
        scic s = build_scic(fam.types);
        for (const auto& t : fam.types) {
            CHECK(testsupport::type_fingerprints(extract_type(m, t.name)) ==
                  testsupport::type_fingerprints(t));
            CHECK(testsupport::type_fingerprints(extract_type(s, t.name)) ==
                  testsupport::type_fingerprints(t));
        }

        // stored-unit totals never grow when sharing is factored out
        auto hc = unit_counts(class_variant::hc, fam.types);
        auto sc = unit_counts(class_variant::scic, fam.types);
        auto mc = unit_counts(class_variant::mcic, fam.types);
        CHECK(mc.properties <= sc.properties);
        CHECK(sc.properties <= hc.properties);
        CHECK(mc.methods <= sc.methods);
        CHECK(sc.methods <= hc.methods);

        // exhaustive-subset oracle on the small families
        if (n <= 4) CHECK(got == testsupport::exhaustive_grouping(fam.types));
    }
}
