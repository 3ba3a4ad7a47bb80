#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubelift/cube.hpp"
#include "cubelift/grid.hpp"

namespace cubelift {

class LiftError : public std::runtime_error {
public:
    enum class Kind { OrderViolation, NotABadCrossing, SizeLimit, NoLocalMove };
    LiftError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// zeta[k-1] is the bend placed at z-level k.
struct StackAssignment {
    std::vector<int> zeta;
};

struct BadCrossingReport {
    std::vector<LatticeCrossing> bad_yz;
    std::vector<LatticeCrossing> bad_zx;
    bool empty() const { return bad_yz.empty() && bad_zx.empty(); }
    size_t total() const { return bad_yz.size() + bad_zx.size(); }
};

/// A stacked lattice knot: the marking conditions hold by construction and
/// the (x,y)-projection satisfies its crossing condition; the report lists
/// the (y,z)- and (z,x)-crossings that still violate theirs.
struct LatticeEmbedding {
    int n = 0;
    std::vector<Triple> xs, ys, zs;
    BadCrossingReport report;
};

/// Place bend zeta[k] of the partition at z-level k and join consecutive
/// bends with vertical connector segments. For an AtX partition the
/// (x,y)-projection of the result is g itself; for AtO it is g with the
/// markings exchanged (same link, reversed orientation). Throws
/// LiftError{OrderViolation} when the stacking order contradicts the grid's
/// crossing data.
LatticeEmbedding stack(const GridDiagram& g, const BendPartition& p, const StackAssignment& zeta);

BadCrossingReport check_crossing_conditions(const LatticeEmbedding& e);

/// Smallest same-size lift of g (XY-projection equal to g), searching only
/// stackings compatible with the cross-over relation; nullopt when no zeta
/// works.
std::optional<CubeDiagram> find_lift(const GridDiagram& g);

inline constexpr int kAllLiftsSizeLimit = 9;

/// Every same-size lift of g over all n! stack permutations, deduplicated
/// by marking sets. Throws LiftError{SizeLimit} above the size limit.
std::vector<CubeDiagram> all_lifts(const GridDiagram& g, int size_limit = kAllLiftsSizeLimit);

/// Repair one violating crossing by a local size-2 rewiring of the strand
/// through it (a detour across two fresh layers per axis). The crossing
/// must be listed in e.report. The result has size n+2, strictly fewer bad
/// crossings, and an unchanged (x,y)-projection diagram.
LatticeEmbedding fix_bad_crossing(const LatticeEmbedding& e, const LatticeCrossing& crossing);

struct SizeReport {
    int n = 0;       // input grid size
    int twisted = 0; // stabilizations applied
    int bad = 0;     // rotated crossings inserted
    int final_size = 0;
    enum class Branch { Direct, Constructive } branch = Branch::Direct;

    std::string to_string() const;
};

struct GridToCubeResult {
    CubeDiagram cube;
    SizeReport report;
};

/// Always-succeeding construction: a direct same-size lift when one exists,
/// otherwise stabilize away twisted bends, stack along the smallest
/// admissible order and repair every bad crossing. The final size satisfies
/// final = n + twisted + 2*bad for the run's own counts.
GridToCubeResult grid_to_cube(const GridDiagram& g);

} // namespace cubelift
