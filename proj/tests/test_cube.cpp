#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubelift/corpus.hpp"
#include "cubelift/cube.hpp"
#include "cubelift/invariants.hpp"

using namespace cubelift;

namespace {

ParsedCube k3_1() {
    return parse_cube_text(
        "K3_1 = {X[{1, 5, 4}, {4, 3, 2}, {5, 4, 3}, {2, 1, 5}, {3, 2, 1}], "
        "Y[{1, 5, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5}], "
        "Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 5, 4}, {5, 1, 5}]}");
}

ParsedCube hopf() {
    return parse_cube_text("HL = {X[{1, 4, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}], "
                           "Y[{1, 4, 3}, {2, 1, 4}, {3, 2, 1}, {4, 3, 2}], "
                           "Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 1, 4}]}");
}

} // namespace

TEST_CASE("parse and validate the trefoil cube") {
    auto p = k3_1();
    CHECK(p.label == "3_1");
    REQUIRE(p.xs.size() == 5);
    auto c = validate_cube(5, p.xs, p.ys, p.zs);
    CHECK(c.n == 5);
    CHECK(component_count(c) == 1);
}

TEST_CASE("text-convention mode rejects the corpus data") {
    auto p = k3_1();
    auto v = cube_violations(5, p.xs, p.ys, p.zs, VertexConvention::PaperText);
    CHECK(!v.empty());
    bool vertex_kind = false;
    for (auto& viol : v) vertex_kind = vertex_kind || viol.tag == Violation::Tag::VertexKind;
    CHECK(vertex_kind);
}

TEST_CASE("validation reports flat-count violations precisely") {
    auto p = k3_1();
    // Move the X marking {1,5,4} to {1,5,3}: z-flat 3 gains an X and
    // z-flat 4 loses its one.
    p.xs[0] = {1, 5, 3};
    auto v = cube_violations(5, p.xs, p.ys, p.zs);
    REQUIRE(!v.empty());
    int flat_count = 0;
    for (auto& viol : v)
        if (viol.tag == Violation::Tag::FlatCount) ++flat_count;
    CHECK(flat_count == 2);
}

TEST_CASE("malformed input throws") {
    auto p = k3_1();
    p.xs[0] = {0, 5, 4};
    CHECK_THROWS_AS(cube_violations(5, p.xs, p.ys, p.zs), CubeError);
    CHECK_THROWS_AS(cube_violations(4, k3_1().xs, k3_1().ys, k3_1().zs), CubeError);
}

TEST_CASE("segments follow the cyclic orientation") {
    auto p = k3_1();
    auto c = validate_cube(5, p.xs, p.ys, p.zs);
    auto segs = segments(c);
    REQUIRE(segs.size() == 15);
    int per_axis[3] = {0, 0, 0};
    for (const auto& s : segs) {
        ++per_axis[static_cast<int>(s.axis)];
        if (s.axis == Axis::ZAxis) {
            CHECK(s.from.kind == CubeMark::X);
            CHECK(s.to.kind == CubeMark::Y);
        } else if (s.axis == Axis::YAxis) {
            CHECK(s.from.kind == CubeMark::Y);
            CHECK(s.to.kind == CubeMark::Z);
        } else {
            CHECK(s.from.kind == CubeMark::Z);
            CHECK(s.to.kind == CubeMark::X);
        }
    }
    CHECK(per_axis[0] == 5);
    CHECK(per_axis[1] == 5);
    CHECK(per_axis[2] == 5);

    // The named example segments: X{1,5,4} -> Y{1,5,1} and Z{4,5,4} -> X{1,5,4}.
    bool found_zpar = false, found_xpar = false;
    for (const auto& s : segs) {
        if (s.axis == Axis::ZAxis && s.from.pos == Triple{1, 5, 4}) {
            CHECK(s.to.pos == Triple{1, 5, 1});
            found_zpar = true;
        }
        if (s.axis == Axis::XAxis && s.from.pos == Triple{4, 5, 4}) {
            CHECK(s.to.pos == Triple{1, 5, 4});
            found_xpar = true;
        }
    }
    CHECK(found_zpar);
    CHECK(found_xpar);
}

TEST_CASE("projections of the trefoil cube") {
    auto p = k3_1();
    auto c = validate_cube(5, p.xs, p.ys, p.zs);
    auto xy = project(c, Plane::XY);
    CHECK(xy.x_col == std::vector<int>{2, 3, 4, 5, 1});
    CHECK(xy.o_col == std::vector<int>{5, 1, 2, 3, 4});
    for (auto plane : {Plane::XY, Plane::YZ, Plane::ZX}) {
        auto g = project(c, plane);
        CHECK(determinant(g) == 3);
        CHECK(trace_components(g).count == 1);
    }
}

TEST_CASE("hopf cube projects to the expected grid with two components") {
    auto p = hopf();
    CHECK(p.label == "HL");
    auto c = validate_cube(4, p.xs, p.ys, p.zs);
    CHECK(component_count(c) == 2);
    auto xy = project(c, Plane::XY);
    CHECK(xy.x_col == std::vector<int>{2, 3, 4, 1});
    CHECK(xy.o_col == std::vector<int>{4, 1, 2, 3});
    CHECK(trace_components(xy).count == 2);
}

TEST_CASE("projected over-strands recomputed from the cube") {
    // In the XY projection the over strand at every crossing is the strand
    // parallel to the plane's column axis (larger dropped coordinate).
    auto p = k3_1();
    auto c = validate_cube(5, p.xs, p.ys, p.zs);
    for (const auto& lc : scan_lattice_crossings(c.xs, c.ys, c.zs)) CHECK(lc.good);
}

TEST_CASE("emit and parse round trip, exact text") {
    auto p = k3_1();
    auto c = validate_cube(5, p.xs, p.ys, p.zs);
    std::string text = emit_cube_text("3_1", c);
    CHECK(text ==
          "K3_1 = {X[{1, 5, 4}, {4, 3, 2}, {5, 4, 3}, {2, 1, 5}, {3, 2, 1}], "
          "Y[{1, 5, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5}], "
          "Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 5, 4}, {5, 1, 5}]}");
    auto p2 = parse_cube_text(text);
    CHECK(p2.label == "3_1");
    CHECK(p2.xs == p.xs);
    CHECK(p2.ys == p.ys);
    CHECK(p2.zs == p.zs);
}

TEST_CASE("parser rejects malformed text") {
    CHECK_THROWS_AS(parse_cube_text("K3_1 = {X[{1, 5, 4}], Y[{1, 5, 1}]}"), CubeError);
    CHECK_THROWS_AS(parse_cube_text("= {X[{1,1,1}], Y[{1,1,1}], Z[{1,1,1}]}"), CubeError);
    // Length mismatch between the three lists.
    CHECK_THROWS_AS(parse_cube_text("K = {X[{1, 5, 4}, {4, 3, 2}], Y[{1, 5, 1}], Z[{1, 2, 1}]}"),
                    CubeError);
}
