#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cubelift/corpus.hpp"
#include "cubelift/cube.hpp"
#include "cubelift/grid.hpp"
#include "cubelift/invariants.hpp"
#include "cubelift/lifting.hpp"
#include "cubelift/search.hpp"

using namespace cubelift;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool looks_like_cube(const std::string& text) { return text.find('[') != std::string::npos; }

GridDiagram grid_from_file(const std::string& path) {
    std::string text = read_input(path);
    if (looks_like_cube(text)) {
        ParsedCube p = parse_cube_text(text);
        return project(validate_cube(static_cast<int>(p.xs.size()), p.xs, p.ys, p.zs), Plane::XY);
    }
    return parse_grid_text(text);
}

int cmd_validate_grid(const std::string& path) {
    try {
        GridDiagram g = parse_grid_text(read_input(path));
        std::cout << "valid grid, n=" << g.n << ", components=" << trace_components(g).count
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return 1;
    }
}

int cmd_validate_cube(const std::string& path, bool strict_text) {
    try {
        ParsedCube p = parse_cube_text(read_input(path));
        auto conv = strict_text ? VertexConvention::PaperText : VertexConvention::Corpus;
        auto violations =
            cube_violations(static_cast<int>(p.xs.size()), p.xs, p.ys, p.zs, conv);
        if (violations.empty()) {
            CubeDiagram c = validate_cube(static_cast<int>(p.xs.size()), p.xs, p.ys, p.zs, conv);
            std::cout << "valid cube, n=" << c.n << ", components=" << component_count(c) << "\n";
            return 0;
        }
        std::cout << "invalid: " << violations.size() << " violation(s)\n";
        for (const auto& v : violations) std::cout << "  " << v.detail << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid and cube diagrams of knots: lifting, invariants, search"};
    app.require_subcommand(1);

    std::string path, plane = "xy", emit_path, checkpoint_path, corpus_path;
    bool all = false, strict_text = false, long_running = false;
    int size = 5, workers = 1;
    std::string shard_spec;

    auto* vg = app.add_subcommand("validate-grid", "validate a grid text file");
    vg->add_option("file", path, "grid file or - for stdin")->required();

    auto* vc = app.add_subcommand("validate-cube", "validate a cube text file");
    vc->add_option("file", path, "cube file or - for stdin")->required();
    vc->add_flag("--strict-text", strict_text, "use the definition-text vertex convention");

    auto* pr = app.add_subcommand("project", "project a cube to a grid diagram");
    pr->add_option("file", path)->required();
    pr->add_option("--plane", plane, "xy, yz or zx")->check(CLI::IsMember({"xy", "yz", "zx"}));

    auto* lf = app.add_subcommand("lift", "search for a same-size cube lift of a grid");
    lf->add_option("file", path)->required();
    lf->add_flag("--all", all, "emit every lift instead of the first");

    auto* bd = app.add_subcommand("build", "always-succeeding grid-to-cube construction");
    bd->add_option("file", path)->required();

    auto* id = app.add_subcommand("identify", "identify a grid or cube against the corpus table");
    id->add_option("file", path)->required();
    id->add_option("--corpus", corpus_path, "corpus file overriding the bundled one");

    auto* se = app.add_subcommand("search", "exhaustive census over all grids of a size");
    se->add_option("--size", size, "grid size")->required();
    se->add_option("--shard", shard_spec, "i/k: process the i-th of k outer blocks");
    se->add_option("--checkpoint", checkpoint_path, "checkpoint file for resumable runs");
    se->add_option("--emit", emit_path, "append found cubes to this file");
    se->add_option("--workers", workers, "parallel workers (whole run only)");
    se->add_flag("--long-running", long_running, "allow sizes 8 and above");

    auto* ct = app.add_subcommand("count", "closed-form grid count");
    ct->add_option("--size", size, "grid size")->required();

    auto* co = app.add_subcommand("corpus", "bundled corpus operations");
    auto* cv = co->add_subcommand("verify", "validate and identify every corpus entry");
    cv->add_option("--corpus", corpus_path, "corpus file overriding the bundled one");

    auto* re = app.add_subcommand("render", "ASCII render of a grid or cube projection");
    re->add_option("file", path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (vg->parsed()) return cmd_validate_grid(path);
        if (vc->parsed()) return cmd_validate_cube(path, strict_text);
        if (pr->parsed()) {
            ParsedCube p = parse_cube_text(read_input(path));
            CubeDiagram c = validate_cube(static_cast<int>(p.xs.size()), p.xs, p.ys, p.zs);
            Plane pl = plane == "xy" ? Plane::XY : plane == "yz" ? Plane::YZ : Plane::ZX;
            std::cout << emit_grid_text(project(c, pl)) << "\n";
            return 0;
        }
        if (lf->parsed()) {
            GridDiagram g = parse_grid_text(read_input(path));
            if (all) {
                auto lifts = all_lifts(g);
                if (lifts.empty()) {
                    std::cout << "none\n";
                    return 1;
                }
                for (size_t i = 0; i < lifts.size(); ++i)
                    std::cout << emit_cube_text("lift" + std::to_string(i + 1), lifts[i]) << "\n";
                return 0;
            }
            auto lift = find_lift(g);
            if (!lift) {
                std::cout << "none\n";
                return 1;
            }
            std::cout << emit_cube_text("lift", *lift) << "\n";
            return 0;
        }
        if (bd->parsed()) {
            GridDiagram g = parse_grid_text(read_input(path));
            auto result = grid_to_cube(g);
            std::cout << emit_cube_text("built", result.cube) << "\n"
                      << result.report.to_string() << "\n";
            return 0;
        }
        if (id->parsed()) {
            GridDiagram g = grid_from_file(path);
            auto corpus = load_corpus(corpus_path.empty() ? default_corpus_path() : corpus_path);
            auto table = build_reference_table(corpus);
            auto r = identify(g, table);
            switch (r.outcome) {
            case IdentifyResult::Outcome::Match:
                std::cout << r.label << " ("
                          << (r.chirality == Chirality::Same ? "same" : "mirror") << ")\n";
                break;
            case IdentifyResult::Outcome::Unknot: std::cout << "unknot\n"; break;
            case IdentifyResult::Outcome::Unknown: std::cout << "unknown\n"; break;
            case IdentifyResult::Outcome::Ambiguous: {
                std::cout << "ambiguous:";
                for (const auto& l : r.labels) std::cout << " " << l;
                std::cout << "\n";
                break;
            }
            }
            return 0;
        }
        if (se->parsed()) {
            if (size >= 8 && !long_running) {
                std::cerr << "sizes 8 and above require --long-running\n";
                return 1;
            }
            SearchConfig cfg;
            cfg.n = size;
            cfg.workers = workers;
            cfg.checkpoint_path = checkpoint_path;
            cfg.emit_path = emit_path;
            if (!shard_spec.empty()) {
                auto slash = shard_spec.find('/');
                if (slash == std::string::npos) throw std::runtime_error("shard must be i/k");
                cfg.shard = {std::stoi(shard_spec.substr(0, slash)),
                             std::stoi(shard_spec.substr(slash + 1))};
            }
            SearchStats stats = run(cfg);
            std::cout << stats.to_text(size, cfg.halve_by_marking_swap);
            return 0;
        }
        if (ct->parsed()) {
            std::cout << "formula=" << count_formula(size).str()
                      << " raw_pairs=" << raw_pair_count(size).str() << "\n";
            return 0;
        }
        if (cv->parsed()) {
            auto corpus = load_corpus(corpus_path.empty() ? default_corpus_path() : corpus_path);
            auto report = verify_corpus(corpus);
            std::cout << report.to_text();
            return report.all_good() ? 0 : 1;
        }
        if (re->parsed()) {
            GridDiagram g = grid_from_file(path);
            std::cout << render_grid(g);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
