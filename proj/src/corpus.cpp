#include "cubelift/corpus.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cubelift {

std::string default_corpus_path() {
    if (const char* env = std::getenv("CUBELIFT_CORPUS")) return env;
#ifdef CUBELIFT_BUNDLED_CORPUS
    return CUBELIFT_BUNDLED_CORPUS;
#else
    return "data/corpus.txt";
#endif
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open corpus file " + path);
    std::ostringstream all;
    all << in.rdbuf();
    const std::string text = all.str();

    std::vector<CorpusEntry> out;
    size_t pos = 0;
    while (pos < text.size()) {
        // Next blank-line separated block.
        size_t end = text.find("\n\n", pos);
        if (end == std::string::npos) end = text.size();
        std::string block = text.substr(pos, end - pos);
        pos = end + 2;
        bool blank = true;
        for (char ch : block)
            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
        if (blank) continue;

        ParsedCube parsed = parse_cube_text(block);
        const int n = static_cast<int>(parsed.xs.size());
        CorpusEntry e;
        e.label = parsed.label;
        e.source_text = block;
        e.cube = validate_cube(n, parsed.xs, parsed.ys, parsed.zs);
        e.expected_components = std::isdigit(static_cast<unsigned char>(e.label[0])) ? 1 : 2;
        out.push_back(std::move(e));
    }
    return out;
}

ReferenceTable build_reference_table(const std::vector<CorpusEntry>& corpus) {
    ReferenceTable t;
    for (const CorpusEntry& e : corpus) {
        if (component_count(e.cube) != 1) continue; // knots only
        if (t.find(e.label))
            throw InvariantError(InvariantError::Kind::DuplicateLabel,
                                 "duplicate corpus label " + e.label);
        GridDiagram g = project(e.cube, Plane::XY);
        ReferenceEntry entry;
        entry.label = e.label;
        entry.det = determinant(g);
        entry.poly = normalized_bracket(planar_code(g));
        entry.source = e.label;
        t.entries.push_back(std::move(entry));
    }
    return t;
}

VerificationReport verify_corpus(const std::vector<CorpusEntry>& entries) {
    VerificationReport rep;
    rep.total = static_cast<int>(entries.size());
    ReferenceTable table = build_reference_table(entries);

    for (const CorpusEntry& e : entries) {
        VerificationReport::Entry r;
        r.label = e.label;
        r.parsed = true;
        r.size = e.cube.n;
        // load_corpus validated already; re-check to make the report
        // self-contained.
        r.validated = cube_violations(e.cube.n, e.cube.xs, e.cube.ys, e.cube.zs).empty();
        r.components = component_count(e.cube);
        r.components_match = r.components == e.expected_components;
        if (r.validated && r.components == 1) {
            auto id = identify(project(e.cube, Plane::XY), table);
            switch (id.outcome) {
            case IdentifyResult::Outcome::Match:
                r.xy_identity = id.label + (id.chirality == Chirality::Same ? " (same)" : " (mirror)");
                r.label_consistent = id.label == e.label && id.chirality == Chirality::Same;
                break;
            case IdentifyResult::Outcome::Unknot: r.xy_identity = "unknot"; break;
            case IdentifyResult::Outcome::Ambiguous: r.xy_identity = "ambiguous"; break;
            case IdentifyResult::Outcome::Unknown: r.xy_identity = "unknown"; break;
            }
        } else if (r.validated) {
            r.xy_identity = "link";
            r.label_consistent = r.components_match;
        }
        if (r.validated) ++rep.validated;
        if (r.label_consistent) ++rep.label_consistent;
        rep.entries.push_back(std::move(r));
    }
    return rep;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    for (const auto& e : entries) {
        os << e.label << ": size=" << e.size << " components=" << e.components
           << (e.validated ? " valid" : " INVALID") << " identify=" << e.xy_identity
           << (e.label_consistent ? "" : " MISMATCH") << "\n";
    }
    os << "summary: " << validated << "/" << total << " validated, " << label_consistent << "/"
       << total << " label-consistent\n";
    return os.str();
}

} // namespace cubelift
