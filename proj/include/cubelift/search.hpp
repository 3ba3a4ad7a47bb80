#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubelift/bigint.hpp"
#include "cubelift/grid.hpp"
#include "cubelift/invariants.hpp"

namespace cubelift {

class SearchError : public std::runtime_error {
public:
    enum class Kind { ResourceLimit, CorruptCheckpoint, ConfigMismatch, BadConfig };
    SearchError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct SearchConfig {
    int n = 5;
    // Contiguous block of the outer (derangement) sequence: (index, count).
    std::optional<std::pair<int, int>> shard;
    struct Filters {
        bool link_exclusion = true;
        bool determinant_filter = true;
        bool transition_reuse = true;
        bool xo_prefilters = true;
        // Route determinant-1 single-component grids through full
        // identification instead of discarding them as trivial.
        bool det1_full_identify = false;
    } filters;
    int bracket_limit = kDefaultBracketLimit;
    std::string checkpoint_path;
    bool identify = false;
    const ReferenceTable* table = nullptr; // required when identify is set
    // Counting convention: fold the X<->O marking exchange symmetry so that
    // reported totals match the paper's tables (each unordered diagram pair
    // counted once). Raw pair counts are exactly twice these.
    bool halve_by_marking_swap = true;
    int workers = 1;
    // Resource budget: maximum number of outer-loop steps before the run
    // checkpoints (if a path is set) and aborts with ResourceLimit.
    std::optional<long long> max_outer_steps;
    std::string emit_path; // write each found cube in appendix text format

    std::string canonical_text() const;
};

struct SearchStats {
    // Raw counters over all enumerated (x_col, o_col) pairs.
    BigInt total_enumerated = 0;
    BigInt links = 0;
    BigInt trivial_det1 = 0;
    BigInt nontrivial_knots = 0;
    BigInt lifts_found = 0;
    std::map<std::string, std::pair<BigInt, BigInt>> per_label; // label -> (grids, lifts)
    // Runtime metadata.
    BigInt det_reuse_events = 0;
    long long elapsed_ms = 0;

    void merge(const SearchStats& other);
    /// Stats output lines; halve folds the X<->O exchange symmetry.
    std::string to_text(int n, bool halve) const;
};

enum class Classification { Link, TrivialDet1, NontrivialKnot };

/// The pipeline's bucket for one grid, optionally reusing the previous
/// verdict across a knot-type-preserving transition.
Classification classify(const GridDiagram& g,
                        const std::optional<std::pair<GridDiagram, Classification>>& prev);

/// false = provably cannot lift (or excluded by configuration), skip the
/// zeta search. With xo_prefilters the test is a cycle in the stacking
/// constraints, which no valid stacking can satisfy.
bool prefilter(const GridDiagram& g, const SearchConfig::Filters& filters);

/// Streams every size-n grid diagram of the shard in deterministic order,
/// tagged with its transition from the previous grid of the stream.
/// Returning false from the callback stops the enumeration.
void enumerate(int n, std::optional<std::pair<int, int>> shard,
               const std::function<bool(const GridDiagram&, TransitionKind)>& fn);

/// Number of derangements of n elements.
BigInt derangements(int n);

/// Exact value of the printed closed-form grid count (n! * D_n / 2),
/// evaluated through the finite-sum identity for the incomplete gamma
/// function at -1 with all-rational arithmetic.
BigInt count_formula(int n);

/// Raw number of (x_col, o_col) pairs: n! * D_n.
BigInt raw_pair_count(int n);

SearchStats run(const SearchConfig& config);

struct Checkpoint {
    uint64_t config_hash = 0;
    long long next_outer_index = 0;
    SearchStats stats;
};

void checkpoint_save(const Checkpoint& c, const std::string& path);
Checkpoint checkpoint_load(const std::string& path, const SearchConfig& expected);

} // namespace cubelift
