#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <string>

#include "coreforge/expr.hpp"
#include "support.hpp"

using namespace coreforge;
using namespace coreforge::expr;

namespace {

double eval(const std::string& text) {
    return evaluate(parse_expression(text), nullptr);
}

struct env {
    std::map<std::string, value_tuple> values;

    selector_resolver resolver() const {
        return [this](std::string_view name) -> const value_tuple* {
            auto it = values.find(std::string(name));
            return it == values.end() ? nullptr : &it->second;
        };
    }
};

}  // namespace

TEST_CASE("literals and arithmetic precedence") {
    CHECK(eval("42") == 42.0);
    CHECK(eval("2 + 2 * 2") == 6.0);
    CHECK(eval("(2 + 2) * 2") == 8.0);
    CHECK(eval("10 - 3 - 2") == 5.0);
    CHECK(eval("10 - 2 + 1") == 9.0);
    CHECK(eval("2 * 3 ^ 2") == 18.0);
    CHECK(eval("-3 + 5") == 2.0);
    CHECK(eval("2 * -3") == -6.0);
    CHECK(eval("1.5 * 4") == 6.0);
}

TEST_CASE("power is right-associative and binds tightest") {
    CHECK(eval("2 ^ 3 ^ 2") == 512.0);
    CHECK(eval("(2 ^ 3) ^ 2") == 64.0);
    CHECK(eval("2 ^ 2 + 1") == 5.0);
    CHECK(eval("3 ^ 0.5") == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("sine takes degrees") {
    CHECK(eval("sin(30)") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eval("sin(90)") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval("sin(0)") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eval("3 ^ 2 * sin(80)") == doctest::Approx(8.8632697771098723).epsilon(1e-12));
}

TEST_CASE("selectors and component sums read the environment") {
    env e;
    e.values["sides"] = testsupport::labeled({2, 3, 2, 3}, "cm");
    e.values["angles"] = testsupport::nums({90, 90, 90, 90});
    auto r = e.resolver();

    CHECK(evaluate(parse_expression("v1(sides) + v2(sides) + v3(sides) + v4(sides)"), r) == 10.0);
    CHECK(evaluate(parse_expression("sum(sides)"), r) == 10.0);
    CHECK(evaluate(parse_expression("v1(sides) * v2(sides)"), r) == 6.0);
    CHECK(evaluate(parse_expression("sum(angles)"), r) == 360.0);
    // a type subscript picks the same unit; it only matters for display
    CHECK(evaluate(parse_expression("v2(sides(rectangle))"), r) == 3.0);
}

TEST_CASE("equality chains compare exactly") {
    env e;
    e.values["a"] = testsupport::nums({90, 90});
    e.values["b"] = testsupport::nums({90, 100});
    auto r = e.resolver();

    CHECK(eval("90 = 90 = 90 = 90") == 1.0);
    CHECK(evaluate(parse_expression("v1(a) = v2(a) = 90"), r) == 1.0);
    CHECK(evaluate(parse_expression("v1(b) = v2(b) = 90"), r) == 0.0);
    CHECK(eval("1 = 1.0000000001") == 0.0);
    CHECK(eval("0.5 = 0.5") == 1.0);
}

TEST_CASE("comparisons and conjunction") {
    CHECK(eval("2 < 3") == 1.0);
    CHECK(eval("3 <= 3") == 1.0);
    CHECK(eval("4 > 5") == 0.0);
    CHECK(eval("2 >= 2") == 1.0);
    CHECK(eval("2 != 3") == 1.0);
    CHECK(eval("2 != 2") == 0.0);
    CHECK(eval("2 < 3 and 3 < 4") == 1.0);
    CHECK(eval("2 < 3 and 4 < 3") == 0.0);
    // arithmetic binds tighter than = which binds tighter than `and`
    CHECK(eval("1 + 1 = 2") == 1.0);
    CHECK(eval("1 = 2 and 2 = 2") == 0.0);
    CHECK(eval("1 = 1 and 2 = 2 and 3 = 3") == 1.0);
}

TEST_CASE("parse errors carry 1-based byte offsets") {
    CHECK_THROWS_AS(parse_expression(""), parse_error);
    try {
        parse_expression("v1(p1");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.offset == 6);
        CHECK(e.expected == "')'");
    }
    CHECK_THROWS_AS(parse_expression("1 +"), parse_error);
    CHECK_THROWS_AS(parse_expression("()"), parse_error);
    CHECK_THROWS_AS(parse_expression("v0(p1)"), parse_error);
    CHECK_THROWS_AS(parse_expression("sin 30"), parse_error);
    CHECK_THROWS_AS(parse_expression("2 = "), parse_error);
    CHECK_THROWS_AS(parse_expression("1 2"), parse_error);
}

TEST_CASE("unresolved selectors and non-boolean verifications are rejected") {
    env e;
    auto r = e.resolver();
    CHECK_THROWS_AS(evaluate(parse_expression("v1(ghost)"), r), unbound_selector);
    CHECK_THROWS_AS(evaluate(parse_expression("sum(ghost)"), r), unbound_selector);
    // component index past the tuple arity
    e.values["p"] = testsupport::nums({1, 2});
    CHECK_THROWS_AS(evaluate(parse_expression("v3(p)"), e.resolver()), unbound_selector);

    CHECK(evaluate_verification(parse_expression("1 = 1"), nullptr) == 1.0);
    CHECK_THROWS_AS(evaluate_verification(parse_expression("2 + 2"), nullptr),
                    non_boolean_verification);
    CHECK_THROWS_AS(evaluate(parse_expression("1 and 2"), nullptr), non_boolean_verification);
}

TEST_CASE("printer round-trips through the parser") {
    const char* samples[] = {
        "2 + 2 * 2",
        "(2 + 2) * 2",
        "2 ^ 3 ^ 2",
        "(2 ^ 3) ^ 2",
        "v1(sides) ^ 2 * sin(v1(angles))",
        "v1(sides) = v2(sides) = v3(sides) = v4(sides)",
        "v1(sides) = v3(sides) and v2(sides) = v4(sides)",
        "v1(angles) + v2(angles) + v3(angles) + v4(angles) = 360",
        "sum(sides) - v1(sides)",
        "v2(sides(rectangle)) * 2",
        "1 - (2 - 3)",
        "-4 + 2",
        "2 <= sum(p)",
    };
    for (const char* s : samples) {
        CAPTURE(s);
        ast first = parse_expression(s);
        std::string printed = print_expression(first);
        ast second = parse_expression(printed);
        CHECK(print_expression(second) == printed);
        CHECK(alpha_canonicalize(second).key == alpha_canonicalize(first).key);
    }
}

TEST_CASE("canonical form ignores type subscripts and operand order") {
    auto key = [](const char* s) { return alpha_canonicalize(parse_expression(s)).key; };

    CHECK(key("v1(p1) + v2(p1)") == key("v2(p1) + v1(p1)"));
    CHECK(key("v1(p1) * v2(p1)") == key("v2(p1) * v1(p1)"));
    CHECK(key("v1(p1(square))") == key("v1(p1(rhombus))"));
    CHECK(key("v1(p1(square)) + 1") == key("1 + v1(p1)"));
    CHECK(key("v1(a) = v2(a) = 90") == key("90 = v2(a) = v1(a)"));

    // subtraction and power stay ordered
    CHECK(key("v1(p1) - v2(p1)") != key("v2(p1) - v1(p1)"));
    CHECK(key("v1(p1) ^ 2") != key("2 ^ v1(p1)"));
    // structurally different definitions stay apart
    CHECK(key("v1(sides) ^ 2") != key("v1(sides) * v2(sides)"));
    CHECK(key("v1(p1)") != key("v2(p1)"));
    CHECK(key("v1(p1)") != key("v1(p2)"));

    // canonicalization is idempotent
    auto c = alpha_canonicalize(parse_expression("v3(x(t)) * (v1(x) + v2(y(t)))"));
    CHECK(alpha_canonicalize(c.form).key == c.key);
}

TEST_CASE("referenced unit names are collected once each") {
    auto names = referenced_units(parse_expression("v1(a) + sum(b) * v2(a) - sin(v1(c(t)))"));
    CHECK(names == std::vector<std::string>{"a", "b", "c"});
    CHECK(referenced_units(parse_expression("1 + 2")).empty());
}
