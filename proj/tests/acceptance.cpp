// Acceptance suite: one pass/fail line per criterion, exact expectations.
// Criterion 2 (the size-8 row) runs only with CUBELIFT_LONG_RUNNING=1.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "cubelift/corpus.hpp"
#include "cubelift/cube.hpp"
#include "cubelift/grid.hpp"
#include "cubelift/invariants.hpp"
#include "cubelift/lifting.hpp"
#include "cubelift/search.hpp"

using namespace cubelift;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << "criterion " << idx << " [" << name << "]: " << (pass ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++failures;
}

int hw_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
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

// Unpruned oracle: every one of the n! stack permutations, validated
// through the stack construction and the full crossing report.
bool raw_sweep_lifts(const GridDiagram& g) {
    std::vector<int> zeta(g.n);
    std::iota(zeta.begin(), zeta.end(), 1);
    auto p = bend_partition(g, BendKind::AtX);
    do {
        try {
            if (stack(g, p, {zeta}).report.empty()) return true;
        } catch (const LiftError&) {
        }
    } while (std::next_permutation(zeta.begin(), zeta.end()));
    return false;
}

// Run fn over every grid of size n, split across worker threads by outer
// blocks; fn must be thread-safe.
void census(int n, int workers, const std::function<void(const GridDiagram&)>& fn) {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            enumerate(n, std::make_pair(w, workers), [&](const GridDiagram& g, TransitionKind) {
                fn(g);
                return true;
            });
        });
    for (auto& t : threads) t.join();
}

void criterion1_table() {
    struct Row {
        int n;
        long long nontrivial, lifts;
    };
    const std::vector<Row> rows = {{5, 10, 3}, {6, 972, 261}, {7, 85022, 19722}};
    bool pass = true;
    std::string detail;
    for (const Row& row : rows) {
        SearchConfig cfg;
        cfg.n = row.n;
        cfg.workers = row.n >= 6 ? hw_workers() : 1;
        SearchStats stats = run(cfg);
        BigInt k = stats.nontrivial_knots / 2, c = stats.lifts_found / 2;
        bool even = stats.nontrivial_knots % 2 == 0 && stats.lifts_found % 2 == 0;
        bool ok = even && k == row.nontrivial && c == row.lifts;
        pass = pass && ok;
        detail += "n=" + std::to_string(row.n) + ": " + k.str() + "/" + c.str() +
                  (ok ? " ok" : " MISMATCH") + "; ";
    }
    report(1, "paper table rows n=5,6,7", pass, detail);
}

void criterion2_long_running() {
    const char* flag = std::getenv("CUBELIFT_LONG_RUNNING");
    if (!flag || std::string(flag) != "1") {
        std::cout << "criterion 2 [size-8 row]: SKIPPED (set CUBELIFT_LONG_RUNNING=1)"
                  << std::endl;
        return;
    }
    SearchConfig cfg;
    cfg.n = 8;
    cfg.workers = hw_workers();
    SearchStats stats = run(cfg);
    BigInt nontrivial = stats.nontrivial_knots / 2;
    BigInt lifts = stats.lifts_found / 2;
    BigInt singles = (stats.nontrivial_knots + stats.trivial_det1) / 2;
    bool pass = nontrivial == 8077072 && lifts == 1589447 && singles == 101606400;
    report(2, "size-8 row", pass,
           "nontrivial=" + nontrivial.str() + " lifts=" + lifts.str() +
               " single-component=" + singles.str());
}

void criterion3_corpus() {
    try {
        auto corpus = load_corpus();
        auto rep = verify_corpus(corpus);
        int knots = 0, links = 0;
        for (const auto& e : corpus) (component_count(e.cube) == 1 ? knots : links)++;
        bool pass = corpus.size() == 27 && knots == 24 && links == 3 && rep.all_good();
        report(3, "corpus verification", pass,
               std::to_string(rep.validated) + "/27 valid, " +
                   std::to_string(rep.label_consistent) + "/27 label-consistent");
    } catch (const std::exception& e) {
        report(3, "corpus verification", false, e.what());
    }
}

void criterion4_roundtrip() {
    bool pass = true;
    std::string detail;
    try {
        // The stacking construction labels kinds in the K3_1 pattern;
        // appendix entries written with the reversed orientation are
        // matched through the X<->Y relabeling.
        auto corpus = load_corpus();
        for (const auto& e : corpus) {
            auto g = project(e.cube, Plane::XY);
            auto matches = [&](const CubeDiagram& c) {
                return c == e.cube || c == reverse_orientation(e.cube);
            };
            if (e.cube.n <= 10) {
                auto lifts = all_lifts(g, e.cube.n);
                if (std::find_if(lifts.begin(), lifts.end(), matches) == lifts.end()) {
                    pass = false;
                    detail += e.label + " not in all_lifts; ";
                }
            } else {
                // Enumerating every stacking is infeasible at this size; the
                // cube's own stacking is replayed as the membership witness.
                StackAssignment za;
                za.zeta.resize(e.cube.n);
                for (const Triple& z : e.cube.zs) za.zeta[z[2] - 1] = z[0];
                auto emb = stack(g, bend_partition(g, BendKind::AtX), za);
                bool ok = emb.report.empty() &&
                          matches(validate_cube(emb.n, emb.xs, emb.ys, emb.zs));
                if (!ok) {
                    pass = false;
                    detail += e.label + " replay failed; ";
                }
            }
        }
    } catch (const std::exception& e) {
        pass = false;
        detail += e.what();
    }

    // Full census at n <= 6: find_lift agrees with the unpruned zeta sweep.
    std::atomic<long long> disagreements{0}, lift_count{0};
    for (int n = 2; n <= 6; ++n) {
        census(n, hw_workers(), [&](const GridDiagram& g) {
            bool pruned = find_lift(g).has_value();
            if (pruned) ++lift_count;
            if (pruned != raw_sweep_lifts(g)) ++disagreements;
        });
    }
    pass = pass && disagreements == 0;
    report(4, "lifting roundtrip and pruning completeness", pass,
           detail + "census disagreements=" + std::to_string(disagreements.load()));
}

void criterion5_accounting() {
    std::atomic<long long> checked{0}, violations{0};
    std::mutex mu;
    std::string first_bad;
    auto corpus = load_corpus();
    auto table = build_reference_table(corpus);

    auto check_grid = [&](const GridDiagram& g) {
        try {
            auto r = grid_to_cube(g);
            bool ok = r.report.final_size == r.report.n + r.report.twisted + 2 * r.report.bad &&
                      r.report.final_size == r.cube.n &&
                      cube_violations(r.cube.n, r.cube.xs, r.cube.ys, r.cube.zs).empty();
            if (ok && trace_components(g).count == 1) {
                auto before = identify(g, table);
                auto after = identify(project(r.cube, Plane::XY), table);
                ok = before.outcome == after.outcome && before.label == after.label &&
                     before.chirality == after.chirality;
            }
            if (!ok) {
                ++violations;
                std::lock_guard<std::mutex> lock(mu);
                if (first_bad.empty()) first_bad = emit_grid_text(g);
            }
        } catch (const std::exception& e) {
            ++violations;
            std::lock_guard<std::mutex> lock(mu);
            if (first_bad.empty()) first_bad = emit_grid_text(g) + ": " + e.what();
        }
        ++checked;
    };

    for (int n = 2; n <= 6; ++n) census(n, hw_workers(), check_grid);
    // Fixed random sample at larger sizes.
    std::mt19937_64 rng(20090730);
    for (int n = 7; n <= 9; ++n)
        for (int i = 0; i < 120; ++i) check_grid(random_grid(n, rng));

    report(5, "grid_to_cube accounting and knot preservation", violations == 0,
           "checked=" + std::to_string(checked.load()) +
               (first_bad.empty() ? "" : " first failure: " + first_bad));
}

void criterion6_determinants() {
    bool pass = true;
    std::string detail;
    try {
        auto corpus = load_corpus();
        for (const auto& e : corpus) {
            BigInt dets[3];
            int i = 0;
            for (auto plane : {Plane::XY, Plane::YZ, Plane::ZX}) {
                auto g = project(e.cube, plane);
                dets[i] = determinant(g);
                if (determinant(g) != bracket_determinant(g, 26)) {
                    pass = false;
                    detail += e.label + " route mismatch; ";
                }
                ++i;
            }
            if (!(dets[0] == dets[1] && dets[1] == dets[2])) {
                pass = false;
                detail += e.label + " projections disagree; ";
            }
            // Normalized brackets of the three projections agree up to
            // mirroring for knots.
            if (component_count(e.cube) == 1) {
                auto f_xy = normalized_bracket(planar_code(project(e.cube, Plane::XY)), 26);
                for (auto plane : {Plane::YZ, Plane::ZX}) {
                    auto f = normalized_bracket(planar_code(project(e.cube, plane)), 26);
                    if (f != f_xy && f != f_xy.mirrored()) {
                        pass = false;
                        detail += e.label + " bracket mismatch; ";
                    }
                }
            }
        }
    } catch (const std::exception& e) {
        pass = false;
        detail += e.what();
    }

    std::mt19937_64 rng(1969);
    for (int i = 0; i < 1000; ++i) {
        auto g = random_grid(3 + i % 6, rng);
        if (determinant(g) != bracket_determinant(g, 26)) {
            pass = false;
            detail += "random grid mismatch at " + emit_grid_text(g) + "; ";
            break;
        }
    }
    report(6, "determinant cross-checks", pass, detail);
}

void criterion7_count_formula() {
    bool pass = true;
    std::string detail;
    for (int n = 1; n <= 20 && pass; ++n) {
        BigInt nfact = 1;
        for (int k = 2; k <= n; ++k) nfact *= k;
        if (count_formula(n) != nfact * derangements(n) / 2) {
            pass = false;
            detail = "symbolic mismatch at n=" + std::to_string(n);
        }
    }
    for (int n = 2; n <= 6 && pass; ++n) {
        long long total = 0;
        enumerate(n, std::nullopt, [&](const GridDiagram&, TransitionKind) {
            ++total;
            return true;
        });
        if (BigInt(total) != raw_pair_count(n)) {
            pass = false;
            detail = "enumeration total mismatch at n=" + std::to_string(n);
        }
    }
    report(7, "count formula", pass, detail);
}

void criterion8_determinism() {
    bool pass = true;
    std::string detail;

    // Filters on vs off at n=5 and n=6.
    for (int n : {5, 6}) {
        SearchConfig on, off;
        on.n = off.n = n;
        off.filters.link_exclusion = false;
        off.filters.determinant_filter = false;
        off.filters.transition_reuse = false;
        off.filters.xo_prefilters = false;
        auto a = run(on), b = run(off);
        if (a.nontrivial_knots != b.nontrivial_knots || a.lifts_found != b.lifts_found) {
            pass = false;
            detail += "filter mismatch at n=" + std::to_string(n) + "; ";
        }
    }

    // Interrupted and resumed n=6 run equals an uninterrupted run.
    const std::string path = "/tmp/cubelift_acceptance_ckpt";
    std::remove(path.c_str());
    SearchConfig interrupted;
    interrupted.n = 6;
    interrupted.checkpoint_path = path;
    interrupted.max_outer_steps = derangements(6).convert_to<long long>() / 2;
    try {
        run(interrupted);
        pass = false;
        detail += "interrupt did not trigger; ";
    } catch (const SearchError&) {
    }
    interrupted.max_outer_steps.reset();
    auto resumed = run(interrupted);
    SearchConfig whole;
    whole.n = 6;
    auto w = run(whole);
    if (resumed.to_text(6, true) != w.to_text(6, true)) {
        pass = false;
        detail += "resumed stats differ; ";
    }
    std::remove(path.c_str());
    report(8, "pruning and checkpoint determinism", pass, detail);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1_table();
    criterion2_long_running();
    criterion3_corpus();
    criterion4_roundtrip();
    criterion5_accounting();
    criterion6_determinants();
    criterion7_count_formula();
    criterion8_determinism();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0);
    std::cout << "acceptance total: " << (failures == 0 ? "PASS" : "FAIL") << " ("
              << secs.count() << "s)" << std::endl;
    return failures == 0 ? 0 : 1;
}
