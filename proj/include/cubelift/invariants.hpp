#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubelift/bigint.hpp"
#include "cubelift/grid.hpp"
#include "cubelift/laurent.hpp"

namespace cubelift {

class InvariantError : public std::runtime_error {
public:
    enum class Kind { TooManyCrossings, NotAKnot, DuplicateLabel };
    InvariantError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// One crossing of a planar diagram. Ports hold arc identifiers in
/// counterclockwise cyclic order N, W, S, E; the over strand runs N-S
/// (ports 0 and 2), the under strand W-E. sign is the usual oriented
/// crossing sign.
struct PlanarCrossing {
    int arcs[4];
    bool over_is_vertical = true;
    int sign = 0;
};

/// Intermediate representation between a grid diagram and the bracket
/// state sum. Every arc id appears exactly twice across the crossing
/// records; components without crossings are counted in free_loops.
struct PlanarCode {
    std::vector<PlanarCrossing> crossings;
    int arc_count = 0;
    int free_loops = 0;
};

PlanarCode planar_code(const GridDiagram& g);

/// Sum of crossing signs.
int writhe(const PlanarCode& pc);

inline constexpr int kDefaultBracketLimit = 24;

/// Kauffman bracket by the 2^c state sum, <unknot> = 1.
LaurentPolynomial kauffman_bracket(const PlanarCode& pc, int crossing_limit = kDefaultBracketLimit);

/// (-A)^{-3w} * <pc>; invariant under stabilization and legal commutation.
LaurentPolynomial normalized_bracket(const PlanarCode& pc, int crossing_limit = kDefaultBracketLimit);

/// Knot/link determinant via the Goeritz matrix of the checkerboard
/// coloring, integer-only (Bareiss elimination). Split diagrams give 0,
/// the unknot gives 1.
BigInt determinant(const GridDiagram& g);

/// Independent determinant route: |normalized bracket at A = exp(i*pi/4)|
/// evaluated exactly in Z[zeta_8].
BigInt bracket_determinant(const GridDiagram& g, int crossing_limit = kDefaultBracketLimit);

struct ReferenceEntry {
    std::string label;
    BigInt det;
    LaurentPolynomial poly;
    std::string source;
};

struct ReferenceTable {
    std::vector<ReferenceEntry> entries;
    const ReferenceEntry* find(const std::string& label) const;
};

/// Line format: label<TAB>determinant<TAB>poly (canonical polynomial text).
std::string export_reference_table(const ReferenceTable& t);
ReferenceTable import_reference_table(const std::string& text);

enum class Chirality { Same, Mirror };

struct IdentifyResult {
    enum class Outcome { Match, Unknot, Ambiguous, Unknown };
    Outcome outcome;
    std::string label;                // for Match
    Chirality chirality = Chirality::Same;
    std::vector<std::string> labels;  // for Ambiguous
};

IdentifyResult identify(const GridDiagram& g, const ReferenceTable& table,
                        int crossing_limit = kDefaultBracketLimit);

} // namespace cubelift
