#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "cubelift/corpus.hpp"
#include "cubelift/cube.hpp"
#include "cubelift/grid.hpp"
#include "cubelift/invariants.hpp"
#include "cubelift/lifting.hpp"

using namespace cubelift;

namespace {

GridDiagram trefoil5() { return make_grid({2, 3, 4, 5, 1}, {5, 1, 2, 3, 4}); }
GridDiagram unknot2() { return make_grid({2, 1}, {1, 2}); }

CubeDiagram k3_1() {
    auto p = parse_cube_text(
        "K3_1 = {X[{1, 5, 4}, {4, 3, 2}, {5, 4, 3}, {2, 1, 5}, {3, 2, 1}], "
        "Y[{1, 5, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5}], "
        "Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 5, 4}, {5, 1, 5}]}");
    return validate_cube(5, p.xs, p.ys, p.zs);
}

// Stack permutation of a cube read off its z-flats: the bend anchored at
// the Z marking of level k is the grid row of that marking.
StackAssignment zeta_of(const CubeDiagram& c) {
    StackAssignment za;
    za.zeta.resize(c.n);
    for (const Triple& z : c.zs) za.zeta[z[2] - 1] = z[0];
    return za;
}

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

// Exhaustive raw sweep over every one of the n! stack permutations,
// validating each candidate through the full cube validator. Test-only
// oracle for find_lift/all_lifts.
std::vector<CubeDiagram> raw_sweep(const GridDiagram& g) {
    std::vector<int> zeta(g.n);
    std::iota(zeta.begin(), zeta.end(), 1);
    std::set<CubeDiagram> found;
    do {
        try {
            LatticeEmbedding e = stack(g, bend_partition(g, BendKind::AtX), {zeta});
            if (!e.report.empty()) continue;
            found.insert(validate_cube(e.n, e.xs, e.ys, e.zs));
        } catch (const LiftError&) {
            continue;
        }
    } while (std::next_permutation(zeta.begin(), zeta.end()));
    return {found.begin(), found.end()};
}

} // namespace

TEST_CASE("replaying the trefoil cube's stacking reproduces it") {
    auto c = k3_1();
    auto g = project(c, Plane::XY);
    CHECK(g == trefoil5());
    auto e = stack(g, bend_partition(g, BendKind::AtX), zeta_of(c));
    CHECK(e.report.empty());
    CHECK(validate_cube(e.n, e.xs, e.ys, e.zs) == c);
}

TEST_CASE("reversing the trefoil stacking order violates the crossing data") {
    auto c = k3_1();
    auto g = project(c, Plane::XY);
    auto za = zeta_of(c);
    std::reverse(za.zeta.begin(), za.zeta.end());
    CHECK_THROWS_AS(stack(g, bend_partition(g, BendKind::AtX), za), LiftError);
}

TEST_CASE("both stackings of the smallest unknot are valid") {
    auto g = unknot2();
    for (auto zeta : {std::vector<int>{1, 2}, std::vector<int>{2, 1}}) {
        auto e = stack(g, bend_partition(g, BendKind::AtX), {zeta});
        CHECK(e.report.empty());
    }
    auto lifts = all_lifts(g);
    CHECK(lifts.size() == 2);
    CHECK(find_lift(g).has_value());
}

TEST_CASE("find_lift on the trefoil grid") {
    auto g = trefoil5();
    auto lift = find_lift(g);
    REQUIRE(lift.has_value());
    CHECK(project(*lift, Plane::XY) == g);
    auto lifts = all_lifts(g);
    CHECK(std::find(lifts.begin(), lifts.end(), k3_1()) != lifts.end());
}

TEST_CASE("find_lift agrees with the raw zeta sweep on random grids") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_grid(3 + trial % 3, rng);
        auto pruned = all_lifts(g);
        auto raw = raw_sweep(g);
        CHECK(pruned == raw);
        CHECK(find_lift(g).has_value() == !raw.empty());
        if (find_lift(g)) {
            auto c = *find_lift(g);
            CHECK(project(c, Plane::XY) == g);
            CHECK(cube_violations(c.n, c.xs, c.ys, c.zs).empty());
        }
    }
}

TEST_CASE("all_lifts size limit") {
    CHECK_THROWS_AS(all_lifts(unknot2(), 1), LiftError);
}

TEST_CASE("fix_bad_crossing repairs a stacked embedding") {
    // Hunt for embeddings with bad crossings among random stackings and
    // check the repair contract on each.
    std::mt19937_64 rng(43);
    int exercised = 0;
    while (exercised < 30) {
        auto g = random_grid(4 + static_cast<int>(rng() % 3), rng);
        auto p = bend_partition(g, BendKind::AtX);
        if (!twisted_bends(g, p).empty()) continue;
        std::vector<int> zeta(g.n);
        std::iota(zeta.begin(), zeta.end(), 1);
        LatticeEmbedding e;
        try {
            // Smallest admissible order.
            auto rel = cross_over_relation(g, p);
            std::vector<int> indeg(g.n + 1, 0);
            for (auto& [a, b] : rel.edges) ++indeg[b];
            // order edges constrain below/above; reuse grid_to_cube's own
            // path instead of duplicating it here.
            e = stack(g, p, {zeta});
        } catch (const LiftError&) {
            continue;
        }
        if (e.report.empty()) continue;
        ++exercised;
        const size_t before = e.report.total();
        const LatticeCrossing target =
            e.report.bad_yz.empty() ? e.report.bad_zx.front() : e.report.bad_yz.front();
        auto fixed = fix_bad_crossing(e, target);
        CHECK(fixed.n == e.n + 2);
        CHECK(fixed.report.total() < before);
        // The XY projection diagram is unchanged as a grid.
        // (Marking conditions hold, so the projection is a valid grid.)
        CHECK(marking_violations(fixed.n, fixed.xs, fixed.ys, fixed.zs).empty());

        auto not_listed = target;
        not_listed.a += 1;
        CHECK_THROWS_AS(fix_bad_crossing(e, not_listed), LiftError);
    }
}

TEST_CASE("grid_to_cube on direct-lift grids") {
    auto r = grid_to_cube(trefoil5());
    CHECK(r.report.branch == SizeReport::Branch::Direct);
    CHECK(r.report.final_size == 5);
    CHECK(r.report.to_string() == "n=5 twisted=0 bad=0 final=5 branch=direct");
    CHECK(project(r.cube, Plane::XY) == trefoil5());
}

TEST_CASE("grid_to_cube accounting identity and knot preservation") {
    std::mt19937_64 rng(47);
    ReferenceTable table;
    {
        auto corpus = load_corpus();
        table = build_reference_table(corpus);
    }
    for (int trial = 0; trial < 120; ++trial) {
        auto g = random_grid(4 + trial % 3, rng);
        auto r = grid_to_cube(g);
        CHECK(cube_violations(r.cube.n, r.cube.xs, r.cube.ys, r.cube.zs).empty());
        CHECK(r.report.final_size == r.report.n + r.report.twisted + 2 * r.report.bad);
        CHECK(r.report.final_size == r.cube.n);
        if (trace_components(g).count == 1) {
            auto before = identify(g, table);
            auto after = identify(project(r.cube, Plane::XY), table);
            CHECK(before.outcome == after.outcome);
            CHECK(before.label == after.label);
            CHECK(before.chirality == after.chirality);
        }
    }
}

TEST_CASE("grid_to_cube falls back to stabilization on twisted grids") {
    // Find a grid whose direct lift fails; the constructive branch must
    // still produce a valid cube with the accounting identity.
    std::mt19937_64 rng(53);
    int constructive = 0;
    while (constructive < 10) {
        auto g = random_grid(5, rng);
        auto r = grid_to_cube(g);
        if (r.report.branch != SizeReport::Branch::Constructive) continue;
        ++constructive;
        CHECK(r.report.final_size == 5 + r.report.twisted + 2 * r.report.bad);
        CHECK(cube_violations(r.cube.n, r.cube.xs, r.cube.ys, r.cube.zs).empty());
    }
}

TEST_CASE("corpus roundtrip for small entries") {
    // The stacking construction labels kinds in the K3_1 pattern; appendix
    // entries written with the reversed orientation are matched through the
    // X<->Y relabeling.
    auto corpus = load_corpus();
    for (const auto& e : corpus) {
        if (e.cube.n > 7) continue;
        auto g = project(e.cube, Plane::XY);
        auto lifts = all_lifts(g);
        bool found = std::find(lifts.begin(), lifts.end(), e.cube) != lifts.end() ||
                     std::find(lifts.begin(), lifts.end(), reverse_orientation(e.cube)) !=
                         lifts.end();
        CHECK_MESSAGE(found, e.label);
    }
}
