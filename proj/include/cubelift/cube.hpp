#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "cubelift/grid.hpp"

namespace cubelift {

class CubeError : public std::runtime_error {
public:
    enum class Kind { MalformedInput, SyntaxError, LengthMismatch, Invalid };
    CubeError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class CubeMark { X, Y, Z };

using Triple = std::array<int, 3>; // (x, y, z), each 1..n

/// A labeled unit cube of the lattice.
struct MarkingTriple {
    CubeMark kind;
    Triple pos;
};

enum class Axis { XAxis = 0, YAxis = 1, ZAxis = 2 };

/// Which marking kind sits at the right-angle vertex of each kind of flat.
/// The appendix corpus realizes x-flat: Y, y-flat: X, z-flat: Z; the text of
/// the definition reads x-flat: X, y-flat: Y, z-flat: Z.
enum class VertexConvention { Corpus, PaperText };

struct Violation {
    enum class Tag { FlatCount, RightAngle, VertexKind, CrossingXY, CrossingYZ, CrossingZX };
    Tag tag;
    std::string detail;
};

/// A size-n cube diagram: n markings of each kind satisfying the marking
/// conditions (each flat holds one X, one Y, one Z forming an axis-parallel
/// right angle with the conventional vertex kind) and the three crossing
/// conditions.
struct CubeDiagram {
    int n = 0;
    // List order follows the source (text or construction); comparisons are
    // order-insensitive so that the same diagram built two ways compares
    // equal.
    std::vector<Triple> xs, ys, zs;

    bool operator==(const CubeDiagram& c) const;
    bool operator<(const CubeDiagram& c) const;
};

/// Exhaustive validation; empty result means the data is a cube diagram.
/// Throws CubeError{MalformedInput} for out-of-range coordinates or length
/// mismatches.
std::vector<Violation> cube_violations(int n, const std::vector<Triple>& xs,
                                       const std::vector<Triple>& ys,
                                       const std::vector<Triple>& zs,
                                       VertexConvention convention = VertexConvention::Corpus);

/// Marking conditions only (flat counts, right angles, vertex kinds).
std::vector<Violation> marking_violations(int n, const std::vector<Triple>& xs,
                                          const std::vector<Triple>& ys,
                                          const std::vector<Triple>& zs,
                                          VertexConvention convention = VertexConvention::Corpus);

CubeDiagram validate_cube(int n, std::vector<Triple> xs, std::vector<Triple> ys,
                          std::vector<Triple> zs,
                          VertexConvention convention = VertexConvention::Corpus);

/// Oriented link segment between two markings agreeing in two coordinates;
/// orientation runs X -> Y, Y -> Z, Z -> X.
struct OrientedSegment {
    MarkingTriple from, to;
    Axis axis; // the axis along which the segment runs
};

/// The 3n segments of the embedded link: X->Y segments are z-parallel,
/// Y->Z segments y-parallel and Z->X segments x-parallel.
std::vector<OrientedSegment> segments(const CubeDiagram& c);

enum class Plane { XY, YZ, ZX };

/// A projected double point of a lattice embedding, with the coordinate
/// comparison demanded by the crossing conditions. (a, b) is the crossing
/// point in the plane's own coordinates (XY -> (x,y), YZ -> (y,z),
/// ZX -> (z,x)); lower/upper are the transverse coordinates of the strand
/// that must be smaller and of the other strand.
struct LatticeCrossing {
    Plane plane;
    int a = 0, b = 0;
    int lower = 0, upper = 0;
    bool good = false;

    bool operator==(const LatticeCrossing& o) const {
        return plane == o.plane && a == o.a && b == o.b && lower == o.lower && upper == o.upper &&
               good == o.good;
    }
    bool operator<(const LatticeCrossing& o) const {
        auto k = [](const LatticeCrossing& c) {
            return std::tuple<int, int, int, int, int, int>(static_cast<int>(c.plane), c.a, c.b,
                                                            c.lower, c.upper, c.good ? 1 : 0);
        };
        return k(*this) < k(o);
    }
};

/// All projected crossings of a marking set whose coordinates may live on
/// any integer scale (the marking conditions must pin the segment pairings;
/// throws CubeError{Invalid} when a marking has no partner).
std::vector<LatticeCrossing> scan_lattice_crossings(const std::vector<Triple>& xs,
                                                    const std::vector<Triple>& ys,
                                                    const std::vector<Triple>& zs);

/// Project to a grid diagram. Row/column conventions: XY -> (row=x, col=y),
/// YZ -> (row=y, col=z), ZX -> (row=z, col=x). Segments parallel to the
/// dropped axis collapse to the grid-O markings.
GridDiagram project(const CubeDiagram& c, Plane plane);

int component_count(const CubeDiagram& c);

/// Exchange the X and Y marking kinds. The same lattice curve with reversed
/// orientation; maps between the two kind-labeling patterns the appendix
/// data realizes.
CubeDiagram reverse_orientation(const CubeDiagram& c);

/// Appendix text format: `Kname = {X[{a,b,c}, ...], Y[...], Z[...]}`.
struct ParsedCube {
    std::string label;
    std::vector<Triple> xs, ys, zs;
};

ParsedCube parse_cube_text(const std::string& text);
std::string emit_cube_text(const std::string& label, const CubeDiagram& c);

} // namespace cubelift
