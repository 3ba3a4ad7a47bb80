#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubelift {

/// Validation failures raised by make_grid and friends.
class GridError : public std::runtime_error {
public:
    enum class Kind { NotAPermutation, SharedCell, TooSmall, InvalidVertex, SizeMismatch };
    GridError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// An n x n grid diagram. Rows and columns are 1-indexed at the interface;
/// x_col[i-1] is the column of the X marking in row i, o_col[i-1] the column
/// of the O marking. Both vectors are permutations of 1..n and never agree
/// in any row. Column segments run from X to O, row segments from O to X,
/// and at a crossing the column segment is the over strand.
struct GridDiagram {
    int n = 0;
    std::vector<int> x_col;
    std::vector<int> o_col;

    int x(int row) const { return x_col[row - 1]; }
    int o(int row) const { return o_col[row - 1]; }
    /// Row of the X marking in column c.
    int x_row(int c) const;
    /// Row of the O marking in column c.
    int o_row(int c) const;

    bool operator==(const GridDiagram& g) const { return x_col == g.x_col && o_col == g.o_col; }
    bool operator<(const GridDiagram& g) const {
        return x_col != g.x_col ? x_col < g.x_col : o_col < g.o_col;
    }
};

GridDiagram make_grid(std::vector<int> x_col, std::vector<int> o_col);

enum class MarkKind { X, O };

struct MarkingRef {
    MarkKind kind;
    int row; // 1..n
};

struct ComponentTrace {
    int count = 0;
    /// Each cycle alternates X and O markings along the oriented link.
    std::vector<std::vector<MarkingRef>> cycles;
};

ComponentTrace trace_components(const GridDiagram& g);

/// A transversal intersection of a row segment's interior with a column
/// segment's interior. The column segment is always the over strand.
struct GridCrossing {
    int row = 0;
    int col = 0;
    int over_segment = 0;  // column index of the vertical (over) segment
    int under_segment = 0; // row index of the horizontal (under) segment
};

std::vector<GridCrossing> crossings(const GridDiagram& g);

enum class BendKind { AtX, AtO };

/// Two segments of the link meeting at a common marking.
struct Bend {
    MarkingRef vertex;
    int arm_row = 0; // row index of the row segment
    int arm_col = 0; // column index of the column segment
};

struct BendPartition {
    BendKind vertex_kind = BendKind::AtX;
    std::vector<Bend> bends; // bends[i-1] is anchored at the row-i marking
};

BendPartition bend_partition(const GridDiagram& g, BendKind kind);

/// Indices (1..n) of the bends that cross over some segment and under another.
std::vector<int> twisted_bends(const GridDiagram& g, const BendPartition& p);

/// edges contains (a,b) when a segment of bend a crosses over a segment of
/// bend b (the over strand being the column segment).
struct CrossOverRelation {
    std::set<std::pair<int, int>> edges;
    bool acyclic = false;
};

CrossOverRelation cross_over_relation(const GridDiagram& g, const BendPartition& p);

/// Split the bend anchored at the given marking; the output is one size
/// larger, represents the same link, and the bend at that vertex is no
/// longer twisted. Throws GridError{InvalidVertex} for out-of-range rows.
GridDiagram stabilize_at(const GridDiagram& g, MarkingRef vertex);

enum class TransitionKind { Commutation, CyclicPermutation, Other };

/// Classifies how g2 is reached from g1: a legal adjacent-column commutation
/// (non-interleaved spans), a cyclic shift of all columns, or anything else.
TransitionKind transition_kind(const GridDiagram& g1, const GridDiagram& g2);

/// Exchange the X and O markings. Same curve with reversed orientation.
GridDiagram swap_markings(const GridDiagram& g);

/// Reflect the grid left-right (columns reversed). The over convention is
/// unchanged while the plane orientation flips, so the result presents the
/// mirror image of the diagram's link.
GridDiagram mirror_grid(const GridDiagram& g);

/// Grid text format: `X={c1,...,cn} O={d1,...,dn}`, no spaces inside the
/// braces; the parser accepts arbitrary whitespace between tokens.
std::string emit_grid_text(const GridDiagram& g);
GridDiagram parse_grid_text(const std::string& text);

/// ASCII debug render, row 1 at the top.
std::string render_grid(const GridDiagram& g);

} // namespace cubelift
