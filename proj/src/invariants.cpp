#include "cubelift/invariants.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>

namespace cubelift {

namespace {

// Port indices within a crossing, counterclockwise.
enum Port { N = 0, W = 1, S = 2, E = 3 };

struct Passage {
    int crossing;
    int in_port;
    int out_port;
};

} // namespace

PlanarCode planar_code(const GridDiagram& g) {
    const auto xs = crossings(g);
    const int n = g.n;

    // Crossing lookup per row segment and per column segment.
    std::vector<std::vector<int>> by_row(n + 1), by_col(n + 1);
    for (int k = 0; k < static_cast<int>(xs.size()); ++k) {
        by_row[xs[k].row].push_back(k);
        by_col[xs[k].col].push_back(k);
    }
    for (int r = 1; r <= n; ++r)
        std::sort(by_row[r].begin(), by_row[r].end(),
                  [&](int a, int b) { return xs[a].col < xs[b].col; });
    for (int c = 1; c <= n; ++c)
        std::sort(by_col[c].begin(), by_col[c].end(),
                  [&](int a, int b) { return xs[a].row < xs[b].row; });

    PlanarCode pc;
    pc.crossings.resize(xs.size());
    // Crossing signs: over strand is the column segment, oriented X -> O;
    // under is the row segment, oriented O -> X. sign = cross(over, under).
    for (int k = 0; k < static_cast<int>(xs.size()); ++k) {
        int c = xs[k].col, r = xs[k].row;
        int over_dy = g.o_row(c) > g.x_row(c) ? 1 : -1; // toward increasing row?
        int under_dx = g.x(r) > g.o(r) ? 1 : -1;        // toward increasing column?
        pc.crossings[k].sign = -over_dy * under_dx;     // cross((0,dy),(dx,0)) = -dy*dx
        for (int& a : pc.crossings[k].arcs) a = -1;
    }

    const ComponentTrace trace = trace_components(g);
    int next_arc = 0;
    for (const auto& cycle : trace.cycles) {
        std::vector<Passage> passages;
        // cycle alternates X(r) then O(r') pairs; reconstruct the segments.
        for (size_t i = 0; i < cycle.size(); i += 2) {
            int xrow = cycle[i].row;
            int orow = cycle[i + 1].row;
            // Column segment of column g.x(xrow): from X (row xrow) to O (row orow).
            int c = g.x(xrow);
            bool up = orow > xrow;
            auto list = by_col[c];
            if (!up) std::reverse(list.begin(), list.end());
            for (int k : list) passages.push_back({k, up ? S : N, up ? N : S});
            // Row segment of row orow: from O to X.
            int r = orow;
            bool right = g.x(r) > g.o(r);
            list = by_row[r];
            if (!right) std::reverse(list.begin(), list.end());
            for (int k : list) passages.push_back({k, right ? W : E, right ? E : W});
        }
        if (passages.empty()) {
            ++pc.free_loops;
            continue;
        }
        for (size_t i = 0; i < passages.size(); ++i) {
            const Passage& cur = passages[i];
            const Passage& nxt = passages[(i + 1) % passages.size()];
            int arc = next_arc++;
            pc.crossings[cur.crossing].arcs[cur.out_port] = arc;
            pc.crossings[nxt.crossing].arcs[nxt.in_port] = arc;
        }
    }
    pc.arc_count = next_arc;
    return pc;
}

int writhe(const PlanarCode& pc) {
    int w = 0;
    for (const auto& x : pc.crossings) w += x.sign;
    return w;
}

namespace {

// Global port index helpers for the state sum.
inline int port_id(int crossing, int port) { return 4 * crossing + port; }

// match[p] = port joined to p by an arc of the diagram.
std::vector<int> arc_matching(const PlanarCode& pc) {
    std::vector<int> first(pc.arc_count, -1);
    std::vector<int> match(4 * pc.crossings.size(), -1);
    for (int k = 0; k < static_cast<int>(pc.crossings.size()); ++k) {
        for (int p = 0; p < 4; ++p) {
            int arc = pc.crossings[k].arcs[p];
            int pid = port_id(k, p);
            if (first[arc] < 0) {
                first[arc] = pid;
            } else {
                match[first[arc]] = pid;
                match[pid] = first[arc];
            }
        }
    }
    return match;
}

LaurentPolynomial loop_factor() {
    // d = -A^2 - A^{-2}
    LaurentPolynomial d = LaurentPolynomial::monomial(-1, 2);
    d += LaurentPolynomial::monomial(-1, -2);
    return d;
}

// Remove Reidemeister-I kinks, accumulating the bracket factor of each
// peeled crossing. Keeps values exact while shrinking the state sum.
struct PeeledCode {
    std::vector<int> match;       // matching on surviving ports
    std::vector<int> live;        // surviving crossing indices
    LaurentPolynomial factor;     // product of (-A^{+-3}) factors
    int extra_loops = 0;          // closed loops created by peeling
};

PeeledCode peel_kinks(const PlanarCode& pc) {
    PeeledCode out;
    out.factor = LaurentPolynomial(BigInt(1));
    out.match = arc_matching(pc);
    std::vector<char> dead(pc.crossings.size(), 0);
    auto& match = out.match;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int k = 0; k < static_cast<int>(pc.crossings.size()); ++k) {
            if (dead[k]) continue;
            int kink_pair = -1; // port p such that arc joins p and (p+1)%4
            for (int p = 0; p < 4 && kink_pair < 0; ++p)
                if (match[port_id(k, p)] == port_id(k, (p + 1) % 4)) kink_pair = p;
            if (kink_pair < 0) continue;
            // Pairs {N,E} and {S,W} are the A-side loops (factor -A^3),
            // {N,W} and {S,E} the B-side (factor -A^{-3}).
            int p1 = kink_pair, p2 = (kink_pair + 1) % 4;
            bool a_side = p1 == E || p1 == W;
            out.factor = out.factor * LaurentPolynomial::monomial(-1, a_side ? 3 : -3);
            int q1 = -1, q2 = -1;
            for (int p = 0; p < 4; ++p)
                if (p != p1 && p != p2) (q1 < 0 ? q1 : q2) = p;
            int m1 = match[port_id(k, q1)], m2 = match[port_id(k, q2)];
            if (m1 == port_id(k, q2)) {
                // The whole component closes up.
                ++out.extra_loops;
            } else {
                match[m1] = m2;
                match[m2] = m1;
            }
            dead[k] = 1;
            changed = true;
        }
    }
    for (int k = 0; k < static_cast<int>(pc.crossings.size()); ++k)
        if (!dead[k]) out.live.push_back(k);
    return out;
}

} // namespace

LaurentPolynomial kauffman_bracket(const PlanarCode& pc, int crossing_limit) {
    PeeledCode peeled = peel_kinks(pc);
    const int c = static_cast<int>(peeled.live.size());
    if (c > crossing_limit)
        throw InvariantError(InvariantError::Kind::TooManyCrossings,
                             "diagram has " + std::to_string(c) + " crossings after kink removal, limit " +
                                 std::to_string(crossing_limit));

    const LaurentPolynomial d = loop_factor();
    std::vector<LaurentPolynomial> d_pow(2 * c + pc.free_loops + peeled.extra_loops + 2);
    d_pow[0] = LaurentPolynomial(BigInt(1));
    for (size_t i = 1; i < d_pow.size(); ++i) d_pow[i] = d_pow[i - 1] * d;

    // Local index for live crossings.
    std::vector<int> local(pc.crossings.size(), -1);
    for (int i = 0; i < c; ++i) local[peeled.live[i]] = i;

    // Compact matching over the 4c live ports.
    std::vector<int> match(4 * c, -1);
    for (int i = 0; i < c; ++i) {
        int k = peeled.live[i];
        for (int p = 0; p < 4; ++p) {
            int m = peeled.match[port_id(k, p)];
            match[4 * i + p] = 4 * local[m / 4] + (m % 4);
        }
    }

    // Per-state loop counting: follow the permutation formed by the arc
    // matching and the chosen smoothing pairings.
    LaurentPolynomial sum;
    std::vector<int> smooth(4 * c);
    std::vector<char> seen(4 * c);
    const long long states = 1LL << c;
    // Base loop count from components with no surviving crossings.
    const int base_loops = pc.free_loops + peeled.extra_loops;
    if (c == 0 && base_loops == 0)
        throw std::runtime_error("empty planar code has no bracket");

    for (long long s = 0; s < states; ++s) {
        int a_count = 0;
        for (int i = 0; i < c; ++i) {
            bool a_smooth = (s >> i) & 1;
            if (a_smooth) ++a_count;
            int base = 4 * i;
            if (a_smooth) { // join (N,E) and (W,S)
                smooth[base + N] = base + E;
                smooth[base + E] = base + N;
                smooth[base + W] = base + S;
                smooth[base + S] = base + W;
            } else { // join (N,W) and (S,E)
                smooth[base + N] = base + W;
                smooth[base + W] = base + N;
                smooth[base + S] = base + E;
                smooth[base + E] = base + S;
            }
        }
        std::fill(seen.begin(), seen.end(), 0);
        int loops = base_loops;
        for (int p = 0; p < 4 * c; ++p) {
            if (seen[p]) continue;
            ++loops;
            int q = p;
            do {
                seen[q] = 1;
                q = smooth[q];
                seen[q] = 1;
                q = match[q];
            } while (q != p);
        }
        LaurentPolynomial term = d_pow[loops - 1];
        term.mul_monomial(1, a_count - (c - a_count));
        sum += term;
    }
    return sum * peeled.factor;
}

LaurentPolynomial normalized_bracket(const PlanarCode& pc, int crossing_limit) {
    LaurentPolynomial b = kauffman_bracket(pc, crossing_limit);
    int w = writhe(pc);
    // (-A)^{-3w} = (-1)^{w} A^{-3w}
    b.mul_monomial((w % 2 == 0) ? 1 : -1, -3 * w);
    return b;
}

namespace {

// ---- Goeritz determinant -------------------------------------------------

// |det| of an integer matrix by fraction-free elimination.
BigInt bareiss_abs_det(std::vector<std::vector<BigInt>> m) {
    const int sz = static_cast<int>(m.size());
    if (sz == 0) return 1;
    BigInt prev = 1;
    for (int k = 0; k < sz - 1; ++k) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < sz; ++i)
                if (m[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(m[k], m[piv]); // sign change ignored: absolute value
        }
        for (int i = k + 1; i < sz; ++i)
            for (int j = k + 1; j < sz; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    BigInt det = m[sz - 1][sz - 1];
    return det < 0 ? -det : det;
}

} // namespace

BigInt determinant(const GridDiagram& g) {
    const int n = g.n;
    const auto xs = crossings(g);

    // Split diagrams have determinant 0: check connectivity of the
    // projection (link components joined at crossings).
    {
        const ComponentTrace trace = trace_components(g);
        if (trace.count > 1) {
            std::vector<int> comp_of_row(n + 1, 0);
            for (int ci = 0; ci < trace.count; ++ci)
                for (const MarkingRef& m : trace.cycles[ci])
                    comp_of_row[m.row] = ci;
            std::vector<int> parent(trace.count);
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](int v) {
                while (parent[v] != v) v = parent[v] = parent[parent[v]];
                return v;
            };
            for (const GridCrossing& x : xs)
                parent[find(comp_of_row[x.row])] = find(comp_of_row[g.x_row(x.col)]);
            int groups = 0;
            for (int v = 0; v < trace.count; ++v)
                if (find(v) == v) ++groups;
            if (groups > 1) return 0;
        }
    }

    // Regions of the complement: flood fill over the (n+1)^2 half-integer
    // corner points; an edge between neighbouring corners is blocked when it
    // crosses a segment of the diagram.
    auto row_span = [&](int r) {
        return std::pair<int, int>{std::min(g.x(r), g.o(r)), std::max(g.x(r), g.o(r))};
    };
    auto col_span = [&](int c) {
        int a = g.x_row(c), b = g.o_row(c);
        return std::pair<int, int>{std::min(a, b), std::max(a, b)};
    };

    const int cw = n + 1; // corners per side, corner (i,j) = point (i+1/2, j+1/2), 0-based
    std::vector<int> region(cw * cw, -1);
    auto cid = [&](int i, int j) { return i * cw + j; };
    int region_count = 0;
    std::vector<int> stack;
    for (int i0 = 0; i0 < cw; ++i0)
        for (int j0 = 0; j0 < cw; ++j0) {
            if (region[cid(i0, j0)] >= 0) continue;
            int rid = region_count++;
            stack.push_back(cid(i0, j0));
            region[cid(i0, j0)] = rid;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                int i = v / cw, j = v % cw;
                auto push = [&](int i2, int j2) {
                    if (region[cid(i2, j2)] < 0) {
                        region[cid(i2, j2)] = rid;
                        stack.push_back(cid(i2, j2));
                    }
                };
                // East/west neighbours: crossing column line j+1 / j.
                if (j + 1 < cw) {
                    auto [lo, hi] = col_span(j + 1);
                    if (!(lo <= i && i < hi)) push(i, j + 1);
                }
                if (j - 1 >= 0) {
                    auto [lo, hi] = col_span(j);
                    if (!(lo <= i && i < hi)) push(i, j - 1);
                }
                // North/south neighbours: crossing row line i+1 / i.
                if (i + 1 < cw) {
                    auto [lo, hi] = row_span(i + 1);
                    if (!(lo <= j && j < hi)) push(i + 1, j);
                }
                if (i - 1 >= 0) {
                    auto [lo, hi] = row_span(i);
                    if (!(lo <= j && j < hi)) push(i - 1, j);
                }
            }
        }

    // Checkerboard parity of each corner: segments crossed by a ray running
    // south from the corner (only row segments can cross it).
    std::vector<char> parity(cw * cw, 0);
    for (int j = 0; j < cw; ++j) {
        int count = 0;
        for (int i = 0; i < cw; ++i) {
            if (i > 0) {
                auto [lo, hi] = row_span(i);
                if (lo <= j && j < hi) ++count;
            }
            parity[cid(i, j)] = static_cast<char>(count & 1);
        }
    }

    // White = parity of the outer region (corner (0,0), parity 0).
    std::vector<int> white_index(region_count, -1);
    int white_count = 0;
    for (int i = 0; i < cw; ++i)
        for (int j = 0; j < cw; ++j) {
            int rid = region[cid(i, j)];
            if (parity[cid(i, j)] == 0 && white_index[rid] < 0) white_index[rid] = white_count++;
        }

    // Goeritz matrix over white regions.
    std::vector<std::vector<BigInt>> G(white_count, std::vector<BigInt>(white_count, 0));
    for (const GridCrossing& x : xs) {
        // Quadrant corners: NE = (row, col) in corner indices.
        int ne = cid(x.row, x.col), sw = cid(x.row - 1, x.col - 1);
        int nw = cid(x.row, x.col - 1), se = cid(x.row - 1, x.col);
        int eta;
        int w1, w2;
        if (parity[ne] == 0) {
            eta = 1;
            w1 = white_index[region[ne]];
            w2 = white_index[region[sw]];
        } else {
            eta = -1;
            w1 = white_index[region[nw]];
            w2 = white_index[region[se]];
        }
        if (w1 == w2) continue;
        G[w1][w2] -= eta;
        G[w2][w1] -= eta;
        G[w1][w1] += eta;
        G[w2][w2] += eta;
    }

    // Delete the outer region's row and column.
    int outer = white_index[region[cid(0, 0)]];
    std::vector<std::vector<BigInt>> reduced;
    reduced.reserve(white_count - 1);
    for (int i = 0; i < white_count; ++i) {
        if (i == outer) continue;
        std::vector<BigInt> row;
        row.reserve(white_count - 1);
        for (int j = 0; j < white_count; ++j)
            if (j != outer) row.push_back(G[i][j]);
        reduced.push_back(std::move(row));
    }
    return bareiss_abs_det(std::move(reduced));
}

BigInt bracket_determinant(const GridDiagram& g, int crossing_limit) {
    return magnitude_at_zeta8(normalized_bracket(planar_code(g), crossing_limit));
}

const ReferenceEntry* ReferenceTable::find(const std::string& label) const {
    for (const auto& e : entries)
        if (e.label == label) return &e;
    return nullptr;
}

std::string export_reference_table(const ReferenceTable& t) {
    std::ostringstream os;
    for (const auto& e : t.entries)
        os << e.label << '\t' << e.det.str() << '\t' << e.poly.to_string() << '\n';
    return os.str();
}

ReferenceTable import_reference_table(const std::string& text) {
    ReferenceTable t;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw std::runtime_error("bad reference table line: " + line);
        ReferenceEntry e;
        e.label = line.substr(0, t1);
        e.det = BigInt(line.substr(t1 + 1, t2 - t1 - 1));
        e.poly = LaurentPolynomial::from_string(line.substr(t2 + 1));
        if (t.find(e.label))
            throw InvariantError(InvariantError::Kind::DuplicateLabel, "duplicate label " + e.label);
        t.entries.push_back(std::move(e));
    }
    return t;
}

IdentifyResult identify(const GridDiagram& g, const ReferenceTable& table, int crossing_limit) {
    if (trace_components(g).count != 1)
        throw InvariantError(InvariantError::Kind::NotAKnot, "identify requires a single-component grid");
    const LaurentPolynomial poly = normalized_bracket(planar_code(g), crossing_limit);
    const BigInt det = determinant(g);

    if (poly.is_one() && det == 1) return {IdentifyResult::Outcome::Unknot, "", Chirality::Same, {}};

    const LaurentPolynomial mirror = poly.mirrored();
    std::vector<std::pair<std::string, Chirality>> hits;
    for (const auto& e : table.entries) {
        if (e.det != det) continue;
        if (e.poly == poly) hits.push_back({e.label, Chirality::Same});
        else if (e.poly == mirror) hits.push_back({e.label, Chirality::Mirror});
    }
    if (hits.empty()) return {IdentifyResult::Outcome::Unknown, "", Chirality::Same, {}};
    if (hits.size() == 1) return {IdentifyResult::Outcome::Match, hits[0].first, hits[0].second, {}};
    // The same entry may match both ways (amphichiral); that is still unique.
    bool all_same_label = true;
    for (const auto& h : hits) all_same_label = all_same_label && h.first == hits[0].first;
    if (all_same_label) return {IdentifyResult::Outcome::Match, hits[0].first, Chirality::Same, {}};
    IdentifyResult r{IdentifyResult::Outcome::Ambiguous, "", Chirality::Same, {}};
    for (const auto& h : hits) r.labels.push_back(h.first);
    return r;
}

} // namespace cubelift
