#include <doctest.h>

#include <stdexcept>

#include "fixtures.hpp"
#include "roboevo/morphology.hpp"

using namespace roboevo;

TEST_CASE("core-only body validates") {
    const auto report = validate(fixtures::core_only());
    CHECK(report.ok);
    CHECK(report.violations.empty());
}

TEST_CASE("eleven modules violate the module cap") {
    // Chain of 10 bricks behind the core = 11 modules.
    BodyNode chain = fixtures::node(ModuleKind::Brick);
    for (int i = 0; i < 9; ++i) {
        chain = fixtures::node(ModuleKind::Brick, 0, {{0, chain}});
    }
    BodyGraph body;
    body.root = fixtures::node(ModuleKind::Core, 0, {{0, chain}});
    REQUIRE(module_count(body) == 11);

    const auto report = validate(body);
    CHECK_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0] == "module_count > 10");
}

TEST_CASE("loop-back chain collides on the core cell") {
    // Hand-traced: east brick at (1,0,0), then left turns through (1,1,0) and
    // (0,1,0) put the fourth brick back on (0,0,0).
    const auto report = validate(fixtures::loopback_collision());
    CHECK_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].find("cell collision at (0,0,0)") != std::string::npos);
}

TEST_CASE("validate rejects rotation on non-bricks and misplaced cores") {
    BodyGraph body;
    body.root = fixtures::node(ModuleKind::Core, 0,
                               {{0, fixtures::node(ModuleKind::HingeHorizontal, 90)}});
    auto report = validate(body);
    CHECK_FALSE(report.ok);

    body.root = fixtures::node(ModuleKind::Core, 0, {{0, fixtures::node(ModuleKind::Core)}});
    report = validate(body);
    CHECK_FALSE(report.ok);

    BodyGraph not_core;
    not_core.root = fixtures::node(ModuleKind::Brick);
    CHECK_FALSE(validate(not_core).ok);
}

TEST_CASE("validate rejects children on illegal slots") {
    // Slot 2 of a non-root brick is the parent link; slot 1 of a hinge too.
    BodyGraph body;
    body.root = fixtures::node(
        ModuleKind::Core, 0,
        {{0, fixtures::node(ModuleKind::Brick, 0, {{2, fixtures::node(ModuleKind::Brick)}})}});
    CHECK_FALSE(validate(body).ok);

    body.root = fixtures::node(ModuleKind::Core, 0,
                               {{0, fixtures::node(ModuleKind::HingeHorizontal, 0,
                                                   {{1, fixtures::node(ModuleKind::Brick)}})}});
    CHECK_FALSE(validate(body).ok);

    body.root = fixtures::node(ModuleKind::Core, 0, {{4, fixtures::node(ModuleKind::Brick)}});
    CHECK_FALSE(validate(body).ok);
}

TEST_CASE("to_grid places the core at the origin") {
    const BodyGrid grid = to_grid(fixtures::core_only());
    REQUIRE(grid.cells.size() == 1);
    CHECK(grid.cells.at({0, 0, 0}) == ModuleKind::Core);
}

TEST_CASE("to_grid steps one cell along the face normal") {
    BodyGraph body;
    body.root = fixtures::node(ModuleKind::Core, 0, {{0, fixtures::node(ModuleKind::Brick)}});
    const BodyGrid grid = to_grid(body);
    REQUIRE(grid.cells.size() == 2);
    CHECK(grid.cells.at({1, 0, 0}) == ModuleKind::Brick);
}

TEST_CASE("rotated brick redirects growth vertically") {
    BodyGraph body;
    body.root = fixtures::node(
        ModuleKind::Core, 0,
        {{0, fixtures::node(ModuleKind::Brick, 90, {{0, fixtures::node(ModuleKind::Brick)}})}});
    const BodyGrid grid = to_grid(body);
    REQUIRE(grid.cells.size() == 3);
    CHECK(grid.cells.count({1, 0, 1}) == 1);
    CHECK(grid.cells.at({1, 0, 1}) == ModuleKind::Brick);
}

TEST_CASE("module_count matches grid cell count on valid bodies") {
    for (const auto& body : {fixtures::core_only(), fixtures::chain5(), fixtures::plus5(),
                             fixtures::ten_module_all_kinds(), fixtures::hinge_walker()}) {
        REQUIRE(validate(body).ok);
        CHECK(module_count(body) == static_cast<int>(to_grid(body).cells.size()));
    }
}

TEST_CASE("serialization round-trips") {
    SUBCASE("core-only") {
        const BodyGraph body = fixtures::core_only();
        CHECK(structurally_equal(deserialize(serialize(body)), body));
    }
    SUBCASE("ten modules, all kinds") {
        const BodyGraph body = fixtures::ten_module_all_kinds();
        REQUIRE(validate(body).ok);
        CHECK(structurally_equal(deserialize(serialize(body)), body));
    }
    SUBCASE("canonical document is a fixed point") {
        const std::string doc = serialize(fixtures::ten_module_all_kinds());
        CHECK(serialize(deserialize(doc)) == doc);
    }
    SUBCASE("byte equality follows from structural equality") {
        CHECK(serialize(fixtures::chain5()) == serialize(fixtures::chain5()));
    }
}

TEST_CASE("deserialize reports schema errors by name") {
    CHECK_THROWS_WITH_AS(deserialize(R"({"format_version":1,"body":{"kind":"X"}})"),
                         doctest::Contains("\"X\""), std::runtime_error);
    CHECK_THROWS_WITH_AS(deserialize(R"({"body":{"kind":"core"}})"),
                         doctest::Contains("format_version"), std::runtime_error);
    CHECK_THROWS_WITH_AS(deserialize(R"({"format_version":1,"body":{"kind":"core","bogus":1}})"),
                         doctest::Contains("\"bogus\""), std::runtime_error);
    CHECK_THROWS_AS(deserialize("not json at all"), std::runtime_error);
}
