#include "cubelift/grid.hpp"

#include <algorithm>
#include <sstream>

namespace cubelift {

namespace {

bool is_permutation_1n(const std::vector<int>& v) {
    std::vector<char> seen(v.size() + 1, 0);
    for (int x : v) {
        if (x < 1 || x > static_cast<int>(v.size()) || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

struct Span {
    int lo, hi;
    bool contains(int v) const { return lo < v && v < hi; }
};

Span row_span(const GridDiagram& g, int r) {
    return {std::min(g.x(r), g.o(r)), std::max(g.x(r), g.o(r))};
}

Span col_span(const GridDiagram& g, int c) {
    int a = g.x_row(c), b = g.o_row(c);
    return {std::min(a, b), std::max(a, b)};
}

} // namespace

int GridDiagram::x_row(int c) const {
    for (int i = 0; i < n; ++i)
        if (x_col[i] == c) return i + 1;
    return 0;
}

int GridDiagram::o_row(int c) const {
    for (int i = 0; i < n; ++i)
        if (o_col[i] == c) return i + 1;
    return 0;
}

GridDiagram make_grid(std::vector<int> x_col, std::vector<int> o_col) {
    if (x_col.size() != o_col.size())
        throw GridError(GridError::Kind::SizeMismatch, "X and O vectors differ in length");
    int n = static_cast<int>(x_col.size());
    if (n < 2) throw GridError(GridError::Kind::TooSmall, "grid size must be at least 2");
    if (!is_permutation_1n(x_col) || !is_permutation_1n(o_col))
        throw GridError(GridError::Kind::NotAPermutation, "marking vector is not a permutation of 1..n");
    for (int i = 0; i < n; ++i)
        if (x_col[i] == o_col[i])
            throw GridError(GridError::Kind::SharedCell,
                            "X and O share a cell in row " + std::to_string(i + 1));
    return GridDiagram{n, std::move(x_col), std::move(o_col)};
}

ComponentTrace trace_components(const GridDiagram& g) {
    ComponentTrace out;
    std::vector<char> visited(g.n + 1, 0);
    // Inverse of o_col: row of the O marking in each column.
    std::vector<int> o_row(g.n + 1, 0);
    for (int i = 1; i <= g.n; ++i) o_row[g.o(i)] = i;

    for (int start = 1; start <= g.n; ++start) {
        if (visited[start]) continue;
        std::vector<MarkingRef> cycle;
        int r = start;
        do {
            visited[r] = 1;
            cycle.push_back({MarkKind::X, r});
            // Follow the column segment from X in column x(r) to that column's O,
            // then the row segment from O to the X of the same row.
            r = o_row[g.x(r)];
            cycle.push_back({MarkKind::O, r});
        } while (r != start);
        out.cycles.push_back(std::move(cycle));
    }
    out.count = static_cast<int>(out.cycles.size());
    return out;
}

std::vector<GridCrossing> crossings(const GridDiagram& g) {
    std::vector<GridCrossing> out;
    for (int c = 1; c <= g.n; ++c) {
        Span cs = col_span(g, c);
        for (int r = cs.lo + 1; r < cs.hi; ++r) {
            Span rs = row_span(g, r);
            if (rs.contains(c)) out.push_back({r, c, c, r});
        }
    }
    std::sort(out.begin(), out.end(), [](const GridCrossing& a, const GridCrossing& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return out;
}

BendPartition bend_partition(const GridDiagram& g, BendKind kind) {
    BendPartition p;
    p.vertex_kind = kind;
    p.bends.reserve(g.n);
    for (int r = 1; r <= g.n; ++r) {
        int c = kind == BendKind::AtX ? g.x(r) : g.o(r);
        p.bends.push_back({{kind == BendKind::AtX ? MarkKind::X : MarkKind::O, r}, r, c});
    }
    return p;
}

std::vector<int> twisted_bends(const GridDiagram& g, const BendPartition& p) {
    // A bend is twisted when both of its arms are involved in crossings:
    // its column arm passes over something and its row arm under something.
    std::vector<int> row_hits(g.n + 1, 0), col_hits(g.n + 1, 0);
    for (const GridCrossing& x : crossings(g)) {
        ++row_hits[x.under_segment];
        ++col_hits[x.over_segment];
    }
    std::vector<int> out;
    for (int i = 1; i <= g.n; ++i) {
        const Bend& b = p.bends[i - 1];
        if (row_hits[b.arm_row] > 0 && col_hits[b.arm_col] > 0) out.push_back(i);
    }
    return out;
}

CrossOverRelation cross_over_relation(const GridDiagram& g, const BendPartition& p) {
    CrossOverRelation rel;
    // Bend owning each column arm / row arm.
    std::vector<int> col_owner(g.n + 1, 0), row_owner(g.n + 1, 0);
    for (int i = 1; i <= g.n; ++i) {
        col_owner[p.bends[i - 1].arm_col] = i;
        row_owner[p.bends[i - 1].arm_row] = i;
    }
    for (const GridCrossing& x : crossings(g))
        rel.edges.insert({col_owner[x.over_segment], row_owner[x.under_segment]});

    // Cycle detection over the directed edge set.
    std::vector<std::vector<int>> adj(g.n + 1);
    for (auto& [a, b] : rel.edges) adj[a].push_back(b);
    std::vector<int> state(g.n + 1, 0); // 0 unvisited, 1 on stack, 2 done
    bool cyclic = false;
    auto dfs = [&](auto&& self, int v) -> void {
        state[v] = 1;
        for (int w : adj[v]) {
            if (state[w] == 1) {
                cyclic = true;
                return;
            }
            if (state[w] == 0) self(self, w);
            if (cyclic) return;
        }
        state[v] = 2;
    };
    for (int v = 1; v <= g.n && !cyclic; ++v)
        if (state[v] == 0) dfs(dfs, v);
    rel.acyclic = !cyclic;
    return rel;
}

GridDiagram stabilize_at(const GridDiagram& g, MarkingRef vertex) {
    if (vertex.row < 1 || vertex.row > g.n)
        throw GridError(GridError::Kind::InvalidVertex, "no such marking row");
    const int r = vertex.row;
    const bool at_x = vertex.kind == MarkKind::X;
    const int c = at_x ? g.x(r) : g.o(r);
    // Row partner of the vertex (other marking in row r) and column partner
    // (other marking in column c).
    const int a = at_x ? g.o(r) : g.x(r);
    const int b = at_x ? g.o_row(c) : g.x_row(c);

    // Split row r into rows {r, r+1} and column c into columns {c, c+1}.
    // Keep the long arms on the side away from the other arm so the split
    // introduces no new crossing.
    const bool rowO_top = b < r;  // partner-of-row-marking goes to the top row
    const bool colO_right = a < c;

    const int n2 = g.n + 1;
    std::vector<int> x2(n2, 0), o2(n2, 0);
    auto mr = [&](int i) { return i > r ? i + 1 : i; };
    auto mc = [&](int j) { return j > c ? j + 1 : j; };

    for (int i = 1; i <= g.n; ++i) {
        if (i == r) continue;
        int xr = mr(i), xc = mc(g.x(i)), oc = mc(g.o(i));
        if (!at_x && i == b) xc = colO_right ? c + 1 : c; // column partner X
        if (at_x && i == b) oc = colO_right ? c + 1 : c;  // column partner O
        x2[xr - 1] = xc;
        o2[xr - 1] = oc;
    }

    const int row_long = rowO_top ? r + 1 : r;  // new row holding the long row arm
    const int row_unit = rowO_top ? r : r + 1;
    const int col_long = colO_right ? c + 1 : c; // new column holding the long column arm
    const int col_unit = colO_right ? c : c + 1;

    // 2x2 block: the opposite-kind marking sits diagonally across from the
    // empty cell, flanked by the two same-kind markings.
    if (at_x) {
        x2[row_long - 1] = col_unit;
        o2[row_long - 1] = mc(a);
        x2[row_unit - 1] = col_long;
        o2[row_unit - 1] = col_unit;
    } else {
        o2[row_long - 1] = col_unit;
        x2[row_long - 1] = mc(a);
        o2[row_unit - 1] = col_long;
        x2[row_unit - 1] = col_unit;
    }
    return make_grid(std::move(x2), std::move(o2));
}

namespace {

bool spans_commute(Span s1, Span s2) {
    if (s1.hi < s2.lo || s2.hi < s1.lo) return true;                 // disjoint
    if (s1.lo < s2.lo && s2.hi < s1.hi) return true;                 // s2 nested in s1
    if (s2.lo < s1.lo && s1.hi < s2.hi) return true;                 // s1 nested in s2
    return false;
}

} // namespace

TransitionKind transition_kind(const GridDiagram& g1, const GridDiagram& g2) {
    if (g1.n != g2.n) throw GridError(GridError::Kind::SizeMismatch, "grids differ in size");
    const int n = g1.n;
    if (g1 == g2) return TransitionKind::Other;

    // Commutation: both vectors related by swapping values j <-> j+1.
    {
        int j = 0;
        for (int i = 0; i < n && j == 0; ++i) {
            if (g1.x_col[i] != g2.x_col[i]) {
                int lo = std::min(g1.x_col[i], g2.x_col[i]);
                int hi = std::max(g1.x_col[i], g2.x_col[i]);
                if (hi == lo + 1) j = lo;
                else j = -1;
            }
        }
        if (j > 0) {
            auto swapped = [&](int v) { return v == j ? j + 1 : v == j + 1 ? j : v; };
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                ok = g2.x_col[i] == swapped(g1.x_col[i]) && g2.o_col[i] == swapped(g1.o_col[i]);
            if (ok && spans_commute(col_span(g1, j), col_span(g1, j + 1)))
                return TransitionKind::Commutation;
            if (ok) return TransitionKind::Other; // interleaved swap is not a move
        }
    }

    // Cyclic shift of all columns by the same amount.
    {
        int k = g2.x_col[0] - g1.x_col[0];
        if (k < 0) k += n;
        if (k != 0) {
            auto shifted = [&](int v) { return (v - 1 + k) % n + 1; };
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                ok = g2.x_col[i] == shifted(g1.x_col[i]) && g2.o_col[i] == shifted(g1.o_col[i]);
            if (ok) return TransitionKind::CyclicPermutation;
        }
    }
    return TransitionKind::Other;
}

GridDiagram swap_markings(const GridDiagram& g) {
    return GridDiagram{g.n, g.o_col, g.x_col};
}

GridDiagram mirror_grid(const GridDiagram& g) {
    std::vector<int> x2(g.n), o2(g.n);
    for (int i = 0; i < g.n; ++i) {
        x2[i] = g.n + 1 - g.x_col[i];
        o2[i] = g.n + 1 - g.o_col[i];
    }
    return GridDiagram{g.n, std::move(x2), std::move(o2)};
}

std::string emit_grid_text(const GridDiagram& g) {
    std::ostringstream os;
    os << "X={";
    for (int i = 0; i < g.n; ++i) os << (i ? "," : "") << g.x_col[i];
    os << "} O={";
    for (int i = 0; i < g.n; ++i) os << (i ? "," : "") << g.o_col[i];
    os << "}";
    return os.str();
}

GridDiagram parse_grid_text(const std::string& text) {
    auto fail = [&](const std::string& m) -> GridDiagram {
        throw GridError(GridError::Kind::NotAPermutation, "grid text: " + m);
    };
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto expect = [&](const std::string& tok) {
        skip_ws();
        if (text.compare(pos, tok.size(), tok) != 0)
            fail("expected '" + tok + "' at offset " + std::to_string(pos));
        pos += tok.size();
    };
    auto parse_list = [&]() {
        std::vector<int> v;
        expect("{");
        skip_ws();
        while (pos < text.size() && text[pos] != '}') {
            size_t used = 0;
            int val = std::stoi(text.substr(pos), &used);
            v.push_back(val);
            pos += used;
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                skip_ws();
            }
        }
        expect("}");
        return v;
    };
    expect("X");
    expect("=");
    auto xs = parse_list();
    expect("O");
    expect("=");
    auto os_ = parse_list();
    return make_grid(std::move(xs), std::move(os_));
}

std::string render_grid(const GridDiagram& g) {
    std::ostringstream os;
    for (int r = 1; r <= g.n; ++r) {
        for (int c = 1; c <= g.n; ++c) {
            char ch = '.';
            if (g.x(r) == c) ch = 'X';
            else if (g.o(r) == c) ch = 'O';
            os << ch << (c == g.n ? "" : " ");
        }
        os << '\n';
    }
    return os.str();
}

} // namespace cubelift
