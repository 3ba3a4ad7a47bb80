#include "cubelift/cube.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace cubelift {

namespace {

std::array<std::vector<Triple>, 3> sorted_lists(const CubeDiagram& c) {
    std::array<std::vector<Triple>, 3> out{c.xs, c.ys, c.zs};
    for (auto& list : out) std::sort(list.begin(), list.end());
    return out;
}

} // namespace

bool CubeDiagram::operator==(const CubeDiagram& c) const {
    return sorted_lists(*this) == sorted_lists(c);
}

bool CubeDiagram::operator<(const CubeDiagram& c) const {
    return sorted_lists(*this) < sorted_lists(c);
}

namespace {

const char* kind_name(CubeMark k) { return k == CubeMark::X ? "X" : k == CubeMark::Y ? "Y" : "Z"; }
const char* axis_name(int a) { return a == 0 ? "x" : a == 1 ? "y" : "z"; }

std::string triple_str(const Triple& t) {
    std::ostringstream os;
    os << "(" << t[0] << "," << t[1] << "," << t[2] << ")";
    return os.str();
}

// Number of coordinates in which two triples differ; differing_axis is set
// when exactly one.
int diff_count(const Triple& a, const Triple& b, int& differing_axis) {
    int cnt = 0;
    for (int i = 0; i < 3; ++i)
        if (a[i] != b[i]) {
            ++cnt;
            differing_axis = i;
        }
    return cnt;
}

struct SegRec {
    // A segment running along `axis` at fixed transverse coordinates,
    // spanning [lo, hi] on that axis (endpoints at marking centers).
    int axis;
    int lo, hi;
    int fixed[3]; // fixed[axis] unused
    bool contains_open(int v) const { return lo < v && v < hi; }
};

struct TypedSeg {
    int tail_kind; // 0 = X, 1 = Y, 2 = Z; the head kind is the cyclic next
    Triple from, to;
    int axis;
};

// The 3n oriented segments of a marking set: markings of consecutive kinds
// are joined whenever two of their coordinates agree, X -> Y -> Z -> X. The
// appendix data realizes more than one assignment of axes to segment types,
// so the axis of each segment is read off the pair rather than assumed.
// Throws CubeError{Invalid} when the pairing is not a disjoint union of
// closed curves.
std::vector<TypedSeg> pair_all_segments(const std::vector<Triple>& xs,
                                        const std::vector<Triple>& ys,
                                        const std::vector<Triple>& zs) {
    const std::vector<Triple>* lists[3] = {&xs, &ys, &zs};
    std::vector<TypedSeg> out;
    out.reserve(3 * xs.size());
    for (int kind = 0; kind < 3; ++kind) {
        const auto& tails = *lists[kind];
        const auto& heads = *lists[(kind + 1) % 3];
        std::vector<int> head_used(heads.size(), 0);
        for (const Triple& t : tails) {
            int found = -1, axis = -1;
            for (size_t h = 0; h < heads.size(); ++h) {
                int a = -1;
                if (diff_count(t, heads[h], a) == 1) {
                    if (found >= 0)
                        throw CubeError(CubeError::Kind::Invalid,
                                        "marking " + triple_str(t) + " has several segment partners");
                    found = static_cast<int>(h);
                    axis = a;
                }
            }
            if (found < 0)
                throw CubeError(CubeError::Kind::Invalid,
                                "marking " + triple_str(t) + " has no segment partner");
            if (++head_used[found] > 1)
                throw CubeError(CubeError::Kind::Invalid,
                                "marking " + triple_str(heads[found]) + " heads two segments");
            out.push_back({kind, t, heads[found], axis});
        }
    }
    return out;
}

} // namespace

std::vector<Violation> marking_violations(int n, const std::vector<Triple>& xs,
                                          const std::vector<Triple>& ys,
                                          const std::vector<Triple>& zs,
                                          VertexConvention convention) {
    if (static_cast<int>(xs.size()) != n || static_cast<int>(ys.size()) != n ||
        static_cast<int>(zs.size()) != n)
        throw CubeError(CubeError::Kind::MalformedInput, "marking lists must each have length n");
    for (const auto* list : {&xs, &ys, &zs})
        for (const Triple& t : *list)
            for (int a = 0; a < 3; ++a)
                if (t[a] < 1 || t[a] > n)
                    throw CubeError(CubeError::Kind::MalformedInput,
                                    "coordinate out of range in " + triple_str(t));

    std::vector<Violation> out;

    // Marking condition 1: each flat holds exactly one marking of each kind.
    const std::vector<Triple>* lists[3] = {&xs, &ys, &zs};
    bool flat_counts_ok = true;
    for (int kind = 0; kind < 3; ++kind) {
        for (int axis = 0; axis < 3; ++axis) {
            std::vector<int> count(n + 1, 0);
            for (const Triple& t : *lists[kind]) ++count[t[axis]];
            for (int level = 1; level <= n; ++level) {
                if (count[level] != 1) {
                    flat_counts_ok = false;
                    std::ostringstream os;
                    os << count[level] << " " << kind_name(static_cast<CubeMark>(kind))
                       << " markings in " << axis_name(axis) << "-flat " << level;
                    out.push_back({Violation::Tag::FlatCount, os.str()});
                }
            }
        }
    }
    if (!flat_counts_ok) return out; // flat contents are ambiguous below

    // Marking conditions 2 and 3: right angle per flat with the expected
    // vertex kind.
    bool angles_ok = true;
    for (int axis = 0; axis < 3; ++axis) {
        // Marking of each kind per level of this flat family.
        std::vector<std::array<Triple, 3>> per_level(n + 1);
        for (int kind = 0; kind < 3; ++kind)
            for (const Triple& t : *lists[kind]) per_level[t[axis]][kind] = t;
        for (int level = 1; level <= n; ++level) {
            const auto& m = per_level[level];
            int vertex = -1;
            for (int v = 0; v < 3 && vertex < 0; ++v) {
                int a1 = -1, a2 = -1;
                int d1 = diff_count(m[v], m[(v + 1) % 3], a1);
                int d2 = diff_count(m[v], m[(v + 2) % 3], a2);
                if (d1 == 1 && d2 == 1 && a1 != a2) vertex = v;
            }
            std::ostringstream where;
            where << axis_name(axis) << "-flat " << level << ": "
                  << kind_name(CubeMark::X) << triple_str(m[0]) << " "
                  << kind_name(CubeMark::Y) << triple_str(m[1]) << " "
                  << kind_name(CubeMark::Z) << triple_str(m[2]);
            if (vertex < 0) {
                angles_ok = false;
                out.push_back({Violation::Tag::RightAngle,
                               "markings do not form an axis-parallel right angle in " + where.str()});
            } else if (convention == VertexConvention::PaperText &&
                       vertex != axis) { // x-flat: X, y-flat: Y, z-flat: Z
                angles_ok = false;
                out.push_back({Violation::Tag::VertexKind,
                               std::string("vertex is ") + kind_name(static_cast<CubeMark>(vertex)) +
                                   " in " + where.str()});
            }
        }
    }
    if (!angles_ok) return out;

    // The segments must close up into disjoint oriented curves; a failure
    // here is a structural right-angle defect not visible flat by flat.
    try {
        pair_all_segments(xs, ys, zs);
    } catch (const CubeError& e) {
        out.push_back({Violation::Tag::RightAngle, e.what()});
    }
    return out;
}

std::vector<LatticeCrossing> scan_lattice_crossings(const std::vector<Triple>& xs,
                                                    const std::vector<Triple>& ys,
                                                    const std::vector<Triple>& zs) {
    std::vector<SegRec> xpar, ypar, zpar;
    for (const TypedSeg& s : pair_all_segments(xs, ys, zs)) {
        SegRec rec{s.axis, std::min(s.from[s.axis], s.to[s.axis]),
                   std::max(s.from[s.axis], s.to[s.axis]),
                   {s.from[0], s.from[1], s.from[2]}};
        (s.axis == 0 ? xpar : s.axis == 1 ? ypar : zpar).push_back(rec);
    }

    std::vector<LatticeCrossing> out;
    // (x,y): the x-parallel strand must run below (smaller z) the y-parallel.
    for (const SegRec& a : xpar)
        for (const SegRec& b : ypar)
            if (a.contains_open(b.fixed[0]) && b.contains_open(a.fixed[1]))
                out.push_back({Plane::XY, b.fixed[0], a.fixed[1], a.fixed[2], b.fixed[2],
                               a.fixed[2] < b.fixed[2]});
    // (y,z): the y-parallel strand must have smaller x than the z-parallel.
    for (const SegRec& a : ypar)
        for (const SegRec& b : zpar)
            if (a.contains_open(b.fixed[1]) && b.contains_open(a.fixed[2]))
                out.push_back({Plane::YZ, b.fixed[1], a.fixed[2], a.fixed[0], b.fixed[0],
                               a.fixed[0] < b.fixed[0]});
    // (z,x): the z-parallel strand must have smaller y than the x-parallel.
    for (const SegRec& a : zpar)
        for (const SegRec& b : xpar)
            if (a.contains_open(b.fixed[2]) && b.contains_open(a.fixed[0]))
                out.push_back({Plane::ZX, b.fixed[2], a.fixed[0], a.fixed[1], b.fixed[1],
                               a.fixed[1] < b.fixed[1]});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Violation> cube_violations(int n, const std::vector<Triple>& xs,
                                       const std::vector<Triple>& ys,
                                       const std::vector<Triple>& zs,
                                       VertexConvention convention) {
    std::vector<Violation> out = marking_violations(n, xs, ys, zs, convention);
    if (!out.empty()) return out; // segment pairings are ambiguous below

    for (const LatticeCrossing& c : scan_lattice_crossings(xs, ys, zs)) {
        if (c.good) continue;
        static const char* plane_names[] = {"(x,y)", "(y,z)", "(z,x)"};
        static const char* lower_names[] = {"x-parallel", "y-parallel", "z-parallel"};
        static const char* upper_names[] = {"y-parallel", "z-parallel", "x-parallel"};
        int p = static_cast<int>(c.plane);
        std::ostringstream os;
        os << plane_names[p] << " crossing at (" << c.a << "," << c.b << "): " << lower_names[p]
           << " coordinate " << c.lower << " not below " << upper_names[p] << " coordinate "
           << c.upper;
        out.push_back({p == 0   ? Violation::Tag::CrossingXY
                       : p == 1 ? Violation::Tag::CrossingYZ
                                : Violation::Tag::CrossingZX,
                       os.str()});
    }
    return out;
}

CubeDiagram validate_cube(int n, std::vector<Triple> xs, std::vector<Triple> ys,
                          std::vector<Triple> zs, VertexConvention convention) {
    auto v = cube_violations(n, xs, ys, zs, convention);
    if (!v.empty()) {
        std::ostringstream os;
        os << v.size() << " violation(s):";
        for (const auto& viol : v) os << "\n  " << viol.detail;
        throw CubeError(CubeError::Kind::Invalid, os.str());
    }
    return CubeDiagram{n, std::move(xs), std::move(ys), std::move(zs)};
}

std::vector<OrientedSegment> segments(const CubeDiagram& c) {
    std::vector<OrientedSegment> out;
    out.reserve(3 * c.n);
    for (const TypedSeg& s : pair_all_segments(c.xs, c.ys, c.zs)) {
        CubeMark tail = static_cast<CubeMark>(s.tail_kind);
        CubeMark head = static_cast<CubeMark>((s.tail_kind + 1) % 3);
        out.push_back({{tail, s.from}, {head, s.to}, static_cast<Axis>(s.axis)});
    }
    return out;
}

GridDiagram project(const CubeDiagram& c, Plane plane) {
    std::vector<int> x_col(c.n), o_col(c.n);
    switch (plane) {
    case Plane::XY:
        // row = x, col = y; grid X markings are the images of the Z markings,
        // grid O the collapsed X/Y pairs.
        for (const Triple& t : c.zs) x_col[t[0] - 1] = t[1];
        for (const Triple& t : c.xs) o_col[t[0] - 1] = t[1];
        break;
    case Plane::YZ:
        // row = y, col = z; collapsed segments are the x-parallel Z->X ones.
        for (const Triple& t : c.ys) x_col[t[1] - 1] = t[2];
        for (const Triple& t : c.xs) o_col[t[1] - 1] = t[2];
        break;
    case Plane::ZX:
        // row = z, col = x; collapsed segments are the y-parallel Y->Z ones.
        for (const Triple& t : c.xs) x_col[t[2] - 1] = t[0];
        for (const Triple& t : c.ys) o_col[t[2] - 1] = t[0];
        break;
    }
    return make_grid(std::move(x_col), std::move(o_col));
}

int component_count(const CubeDiagram& c) {
    // Successor map along X -> Y -> Z -> X cycles, indexed by X markings.
    std::map<Triple, Triple> next_y, next_z, next_x;
    for (const TypedSeg& s : pair_all_segments(c.xs, c.ys, c.zs))
        (s.tail_kind == 0 ? next_y : s.tail_kind == 1 ? next_z : next_x)[s.from] = s.to;

    std::map<Triple, int> x_index;
    for (int i = 0; i < c.n; ++i) x_index[c.xs[i]] = i;
    std::vector<char> seen(c.n, 0);
    int cycles = 0;
    for (int start = 0; start < c.n; ++start) {
        if (seen[start]) continue;
        ++cycles;
        int xi = start;
        while (!seen[xi]) {
            seen[xi] = 1;
            xi = x_index.at(next_x.at(next_z.at(next_y.at(c.xs[xi]))));
        }
    }
    return cycles;
}

CubeDiagram reverse_orientation(const CubeDiagram& c) {
    return CubeDiagram{c.n, c.ys, c.xs, c.zs};
}

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw CubeError(CubeError::Kind::SyntaxError,
                        msg + " at offset " + std::to_string(pos));
    }
    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    int number() {
        skip_ws();
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s.substr(pos), &used);
        } catch (const std::exception&) {
            fail("expected a number");
        }
        pos += used;
        return v;
    }
};

std::vector<Triple> parse_triple_list(Cursor& c, char kind) {
    c.skip_ws();
    if (c.pos >= c.s.size() || c.s[c.pos] != kind)
        c.fail(std::string("expected marking list '") + kind + "'");
    ++c.pos;
    c.expect('[');
    std::vector<Triple> out;
    while (true) {
        c.expect('{');
        Triple t;
        t[0] = c.number();
        c.expect(',');
        t[1] = c.number();
        c.expect(',');
        t[2] = c.number();
        c.expect('}');
        out.push_back(t);
        if (c.peek(',')) {
            c.expect(',');
            continue;
        }
        break;
    }
    c.expect(']');
    return out;
}

} // namespace

ParsedCube parse_cube_text(const std::string& text) {
    Cursor c{text};
    c.skip_ws();
    size_t name_start = c.pos;
    while (c.pos < c.s.size() && c.s[c.pos] != '=') ++c.pos;
    if (c.pos >= c.s.size()) c.fail("expected '='");
    std::string name = text.substr(name_start, c.pos - name_start);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    if (name.empty()) c.fail("missing diagram name");
    ++c.pos; // '='

    // Appendix knots are written K<label>; links keep their bare names.
    std::string label = name;
    if (label.size() > 1 && label[0] == 'K' && std::isdigit(static_cast<unsigned char>(label[1])))
        label = label.substr(1);

    c.expect('{');
    ParsedCube out;
    out.label = label;
    out.xs = parse_triple_list(c, 'X');
    c.expect(',');
    out.ys = parse_triple_list(c, 'Y');
    c.expect(',');
    out.zs = parse_triple_list(c, 'Z');
    c.expect('}');
    if (out.xs.size() != out.ys.size() || out.ys.size() != out.zs.size())
        throw CubeError(CubeError::Kind::LengthMismatch,
                        "X/Y/Z lists differ in length in " + label);
    return out;
}

std::string emit_cube_text(const std::string& label, const CubeDiagram& c) {
    std::string name = label;
    if (!name.empty() && std::isdigit(static_cast<unsigned char>(name[0]))) name = "K" + name;
    std::ostringstream os;
    os << name << " = {";
    const char* kinds = "XYZ";
    const std::vector<Triple>* lists[3] = {&c.xs, &c.ys, &c.zs};
    for (int k = 0; k < 3; ++k) {
        if (k) os << ", ";
        os << kinds[k] << '[';
        for (size_t i = 0; i < lists[k]->size(); ++i) {
            if (i) os << ", ";
            const Triple& t = (*lists[k])[i];
            os << '{' << t[0] << ", " << t[1] << ", " << t[2] << '}';
        }
        os << ']';
    }
    os << '}';
    return os.str();
}

} // namespace cubelift
