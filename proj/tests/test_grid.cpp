#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cubelift/grid.hpp"
#include "cubelift/invariants.hpp"

using namespace cubelift;

namespace {

// The grid of Fig. 2: a trefoil of size 5.
GridDiagram trefoil5() { return make_grid({2, 3, 4, 5, 1}, {5, 1, 2, 3, 4}); }
GridDiagram unknot2() { return make_grid({2, 1}, {1, 2}); }
// The (x,y)-projection of the Hopf link cube.
GridDiagram hopf4() { return make_grid({2, 3, 4, 1}, {4, 1, 2, 3}); }

GridDiagram random_grid(int n, std::mt19937_64& rng) {
    std::vector<int> x(n), o(n);
    for (int i = 0; i < n; ++i) x[i] = i + 1;
    std::shuffle(x.begin(), x.end(), rng);
    while (true) {
        for (int i = 0; i < n; ++i) o[i] = i + 1;
        std::shuffle(o.begin(), o.end(), rng);
        bool ok = true;
        for (int i = 0; i < n; ++i) ok = ok && x[i] != o[i];
        if (ok) return make_grid(x, o);
    }
}

} // namespace

TEST_CASE("make_grid validation") {
    CHECK(trefoil5().n == 5);
    CHECK_THROWS_WITH_AS(make_grid({1, 2}, {1, 2}), doctest::Contains("share a cell"), GridError);
    CHECK(unknot2().n == 2);
    CHECK_THROWS_AS(make_grid({1}, {1}), GridError);          // TooSmall
    CHECK_THROWS_AS(make_grid({1, 1}, {2, 1}), GridError);    // NotAPermutation
    CHECK_THROWS_AS(make_grid({1, 2, 3}, {2, 1}), GridError); // SizeMismatch
}

TEST_CASE("component tracing") {
    CHECK(trace_components(trefoil5()).count == 1);
    CHECK(trace_components(hopf4()).count == 2);
    CHECK(trace_components(unknot2()).count == 1);

    // Every marking appears in exactly one cycle.
    auto tr = trace_components(trefoil5());
    int xs = 0, os = 0;
    for (auto& cyc : tr.cycles)
        for (auto& m : cyc) (m.kind == MarkKind::X ? xs : os)++;
    CHECK(xs == 5);
    CHECK(os == 5);
}

TEST_CASE("crossings") {
    CHECK(crossings(trefoil5()).size() == 3);
    CHECK(crossings(unknot2()).empty());
    for (const auto& x : crossings(trefoil5())) {
        CHECK(x.over_segment == x.col);
        CHECK(x.under_segment == x.row);
    }
}

TEST_CASE("bend partitions cover the diagram") {
    for (auto kind : {BendKind::AtX, BendKind::AtO}) {
        auto p = bend_partition(trefoil5(), kind);
        CHECK(p.bends.size() == 5);
        std::vector<char> rows(6, 0), cols(6, 0);
        for (auto& b : p.bends) {
            rows[b.arm_row]++;
            cols[b.arm_col]++;
        }
        for (int i = 1; i <= 5; ++i) {
            CHECK(rows[i] == 1);
            CHECK(cols[i] == 1);
        }
    }
    CHECK(bend_partition(unknot2(), BendKind::AtX).bends.size() == 2);
}

TEST_CASE("twisted bends") {
    auto g = unknot2();
    CHECK(twisted_bends(g, bend_partition(g, BendKind::AtX)).empty());
    CHECK(twisted_bends(g, bend_partition(g, BendKind::AtO)).empty());

    // Brute-force oracle on the trefoil: a bend is twisted iff both its
    // row arm and its column arm are involved in crossings.
    auto t = trefoil5();
    auto p = bend_partition(t, BendKind::AtX);
    auto twisted = twisted_bends(t, p);
    auto xs = crossings(t);
    for (int i = 1; i <= 5; ++i) {
        bool row_hit = false, col_hit = false;
        for (auto& x : xs) {
            row_hit = row_hit || x.row == p.bends[i - 1].arm_row;
            col_hit = col_hit || x.col == p.bends[i - 1].arm_col;
        }
        bool expect = row_hit && col_hit;
        bool got = std::find(twisted.begin(), twisted.end(), i) != twisted.end();
        CHECK(expect == got);
    }
}

TEST_CASE("cross over relation") {
    auto g = unknot2();
    auto rel = cross_over_relation(g, bend_partition(g, BendKind::AtX));
    CHECK(rel.edges.empty());
    CHECK(rel.acyclic);

    // No twisted bends implies an acyclic relation (section-4 claim),
    // checked over random grids and both partitions.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        auto r = random_grid(3 + trial % 5, rng);
        for (auto kind : {BendKind::AtX, BendKind::AtO}) {
            auto p = bend_partition(r, kind);
            if (twisted_bends(r, p).empty()) CHECK(cross_over_relation(r, p).acyclic);
        }
    }
}

TEST_CASE("stabilization") {
    auto u = stabilize_at(unknot2(), {MarkKind::X, 1});
    CHECK(u.n == 3);
    CHECK(trace_components(u).count == 1);

    // Stabilizing at a twisted-bend vertex lowers the twisted count.
    auto t = trefoil5();
    auto p = bend_partition(t, BendKind::AtX);
    auto tw = twisted_bends(t, p);
    REQUIRE(!tw.empty());
    auto t2 = stabilize_at(t, p.bends[tw[0] - 1].vertex);
    CHECK(t2.n == 6);
    CHECK(twisted_bends(t2, bend_partition(t2, BendKind::AtX)).size() < tw.size());

    // Determinant and component count are preserved for every vertex of
    // random grids.
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = random_grid(3 + trial % 4, rng);
        auto det = determinant(g);
        auto comps = trace_components(g).count;
        for (int r = 1; r <= g.n; ++r) {
            for (auto kind : {MarkKind::X, MarkKind::O}) {
                auto s = stabilize_at(g, {kind, r});
                CHECK(s.n == g.n + 1);
                CHECK(determinant(s) == det);
                CHECK(trace_components(s).count == comps);
            }
        }
    }
    CHECK_THROWS_AS(stabilize_at(unknot2(), {MarkKind::X, 9}), GridError);
}

TEST_CASE("transition kinds") {
    auto t = trefoil5();
    CHECK(transition_kind(t, t) == TransitionKind::Other);

    // All-columns cyclic shift.
    auto shift = [&](const GridDiagram& g, int k) {
        std::vector<int> x(g.n), o(g.n);
        for (int i = 0; i < g.n; ++i) {
            x[i] = (g.x_col[i] - 1 + k) % g.n + 1;
            o[i] = (g.o_col[i] - 1 + k) % g.n + 1;
        }
        return make_grid(x, o);
    };
    for (int k = 1; k < 5; ++k) {
        CHECK(transition_kind(t, shift(t, k)) == TransitionKind::CyclicPermutation);
        CHECK(transition_kind(shift(t, k), t) == TransitionKind::CyclicPermutation);
    }

    // Adjacent column swap; legality depends on the two column spans.
    auto swap_cols = [&](const GridDiagram& g, int j) {
        auto sw = [&](int v) { return v == j ? j + 1 : v == j + 1 ? j : v; };
        std::vector<int> x(g.n), o(g.n);
        for (int i = 0; i < g.n; ++i) {
            x[i] = sw(g.x_col[i]);
            o[i] = sw(g.o_col[i]);
        }
        return make_grid(x, o);
    };
    // Nested spans: build a grid where column 2 nests inside column 1.
    auto g = make_grid({1, 3, 2, 4}, {3, 4, 1, 2});
    // col1 rows {1,3}; col2 rows {3,4}... pick whatever the data gives.
    for (int j = 1; j < g.n; ++j) {
        auto k = transition_kind(g, swap_cols(g, j));
        auto back = transition_kind(swap_cols(g, j), g);
        CHECK(k == back); // symmetric for Commutation results
    }
    CHECK(transition_kind(t, shift(t, 2)) == TransitionKind::CyclicPermutation);
    CHECK_THROWS_AS(transition_kind(t, unknot2()), GridError);
}

TEST_CASE("commutation legality is the nesting condition") {
    // Columns 1,2 interleaved: swap must be Other.
    // col1: X row1, O row3 -> span [1,3]; col2: X row2, O row4 -> span [2,4].
    auto g = make_grid({1, 2, 3, 4}, {3, 4, 1, 2});
    auto swapped = make_grid({2, 1, 3, 4}, {3, 4, 2, 1});
    CHECK(transition_kind(g, swapped) == TransitionKind::Other);
}

TEST_CASE("grid text format") {
    auto t = trefoil5();
    CHECK(emit_grid_text(t) == "X={2,3,4,5,1} O={5,1,2,3,4}");
    CHECK(parse_grid_text(emit_grid_text(t)) == t);
    CHECK(parse_grid_text("  X = { 2 ,3,4,5,1 }\n O = {5,1,2,3,4}") == t);
    CHECK_THROWS_AS(parse_grid_text("X={1,2}"), GridError);
}

TEST_CASE("crossing count matches under marking swap") {
    // |crossings| depends only on the segments, not on which partition or
    // marking plays which role.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_grid(3 + trial % 5, rng);
        CHECK(crossings(g).size() == crossings(swap_markings(g)).size());
    }
}

TEST_CASE("mirror is an involution and preserves crossing count") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_grid(3 + trial % 5, rng);
        CHECK(mirror_grid(mirror_grid(g)) == g);
        CHECK(crossings(mirror_grid(g)).size() == crossings(g).size());
    }
}
