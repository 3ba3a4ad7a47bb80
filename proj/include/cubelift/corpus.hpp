#pragma once

#include <string>
#include <vector>

#include "cubelift/cube.hpp"
#include "cubelift/invariants.hpp"

namespace cubelift {

struct CorpusEntry {
    std::string label;
    std::string source_text;
    CubeDiagram cube;
    int expected_components = 1;
};

/// Path of the bundled appendix corpus; the CUBELIFT_CORPUS environment
/// variable overrides it.
std::string default_corpus_path();

/// Load and validate every entry of a corpus file (blank-line separated
/// appendix-format blocks).
std::vector<CorpusEntry> load_corpus(const std::string& path = default_corpus_path());

ReferenceTable build_reference_table(const std::vector<CorpusEntry>& corpus);

struct VerificationReport {
    struct Entry {
        std::string label;
        bool parsed = false;
        bool validated = false;
        int size = 0;
        int components = 0;
        bool components_match = false;
        std::string xy_identity; // identification outcome of the XY projection
        bool label_consistent = false;
        std::string note;
    };
    std::vector<Entry> entries;
    int total = 0;
    int validated = 0;
    int label_consistent = 0;

    bool all_good() const { return total == validated && total == label_consistent; }
    std::string to_text() const;
};

VerificationReport verify_corpus(const std::vector<CorpusEntry>& entries);

} // namespace cubelift
