#include "cubelift/search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "cubelift/cube.hpp"
#include "cubelift/lifting.hpp"

namespace cubelift {

std::string SearchConfig::canonical_text() const {
    std::ostringstream os;
    os << "n=" << n;
    os << ";shard=" << (shard ? std::to_string(shard->first) + "/" + std::to_string(shard->second)
                              : std::string("all"));
    os << ";link=" << filters.link_exclusion << ";det=" << filters.determinant_filter
       << ";reuse=" << filters.transition_reuse << ";xo=" << filters.xo_prefilters
       << ";det1id=" << filters.det1_full_identify;
    os << ";identify=" << identify << ";halve=" << halve_by_marking_swap
       << ";limit=" << bracket_limit;
    return os.str();
}

void SearchStats::merge(const SearchStats& other) {
    total_enumerated += other.total_enumerated;
    links += other.links;
    trivial_det1 += other.trivial_det1;
    nontrivial_knots += other.nontrivial_knots;
    lifts_found += other.lifts_found;
    det_reuse_events += other.det_reuse_events;
    elapsed_ms = std::max(elapsed_ms, other.elapsed_ms);
    for (const auto& [label, counts] : other.per_label) {
        auto& mine = per_label[label];
        mine.first += counts.first;
        mine.second += counts.second;
    }
}

namespace {

BigInt halved(const BigInt& v) {
    if (v % 2 != 0)
        throw SearchError(SearchError::Kind::BadConfig,
                          "count " + v.str() + " is odd; marking-swap halving is not exact");
    return v / 2;
}

std::string percent_text(const BigInt& part, const BigInt& whole) {
    if (whole == 0) return "0.0";
    // Exact one-decimal rounding, half away from zero.
    BigInt scaled = (part * 2000 + whole) / (2 * whole);
    std::string digits = scaled.str();
    if (digits.size() == 1) digits = "0" + digits;
    return digits.substr(0, digits.size() - 1) + "." + digits.back();
}

} // namespace

std::string SearchStats::to_text(int n, bool halve) const {
    auto out = [&](const BigInt& v) { return halve ? halved(v) : v; };
    std::ostringstream os;
    BigInt k = out(nontrivial_knots), c = out(lifts_found);
    os << "n=" << n << " total=" << out(total_enumerated).str() << " links=" << out(links).str()
       << " det1=" << out(trivial_det1).str() << " nontrivial=" << k.str()
       << " lifts=" << c.str() << " pct=" << percent_text(c, k) << "\n";
    for (const auto& [label, counts] : per_label)
        os << "label=" << label << " grids=" << out(counts.first).str()
           << " lifts=" << out(counts.second).str() << "\n";
    return os.str();
}

Classification classify(const GridDiagram& g,
                        const std::optional<std::pair<GridDiagram, Classification>>& prev) {
    if (trace_components(g).count > 1) return Classification::Link;
    if (prev && prev->second == Classification::TrivialDet1) {
        TransitionKind t = transition_kind(prev->first, g);
        if (t == TransitionKind::Commutation || t == TransitionKind::CyclicPermutation)
            return Classification::TrivialDet1;
    }
    return determinant(g) == 1 ? Classification::TrivialDet1 : Classification::NontrivialKnot;
}

bool prefilter(const GridDiagram& g, const SearchConfig::Filters& filters) {
    if (filters.link_exclusion && trace_components(g).count > 1) return false;
    if (filters.xo_prefilters) {
        // A cycle among the stacking constraints admits no stacking order at
        // all, so the grid provably cannot lift.
        auto rel = cross_over_relation(g, bend_partition(g, BendKind::AtX));
        if (!rel.acyclic) return false;
    }
    return true;
}

BigInt derangements(int n) {
    BigInt a = 1, b = 0; // D_0, D_1
    if (n == 0) return a;
    for (int k = 2; k <= n; ++k) {
        BigInt c = BigInt(k - 1) * (a + b);
        a = b;
        b = c;
    }
    return b;
}

BigInt raw_pair_count(int n) {
    BigInt f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f * derangements(n);
}

BigInt count_formula(int n) {
    // (n!)^2/4 * (1 + 2(1+n) G(1+n,-1)/(e G(2+n)) - 6 G(3,-1)/(e G(4)))
    // with G(m,-1)/e = (m-1)! * sum_{k=0}^{m-1} (-1)^k/k!, all exact.
    auto gamma_at_minus1_over_e = [](int m) {
        BigRational sum = 0, term = 1; // term = (-1)^k / k!
        for (int k = 0; k <= m - 1; ++k) {
            if (k > 0) term /= -k;
            sum += term;
        }
        BigInt fact = 1;
        for (int k = 2; k <= m - 1; ++k) fact *= k;
        return BigRational(fact) * sum;
    };
    BigInt nfact = 1;
    for (int k = 2; k <= n; ++k) nfact *= k;
    BigInt gamma_np2 = nfact * (n + 1); // Gamma(2+n) = (n+1)!
    BigRational total = 1;
    total += BigRational(2 * (1 + n)) * gamma_at_minus1_over_e(n + 1) / BigRational(gamma_np2);
    total -= BigRational(6) * gamma_at_minus1_over_e(3) / BigRational(6); // Gamma(4) = 6
    total *= BigRational(nfact * nfact, 4);
    if (boost::multiprecision::denominator(total) != 1)
        throw SearchError(SearchError::Kind::BadConfig, "count formula did not evaluate to an integer");
    return boost::multiprecision::numerator(total);
}

namespace {

// Lexicographic derangement stream over 1..n.
std::vector<std::vector<int>> all_derangements(int n) {
    std::vector<int> tau(n);
    std::iota(tau.begin(), tau.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = tau[i] != i + 1;
        if (ok) out.push_back(tau);
    } while (std::next_permutation(tau.begin(), tau.end()));
    return out;
}

GridDiagram grid_from(const std::vector<int>& pi, const std::vector<int>& tau) {
    const int n = static_cast<int>(pi.size());
    std::vector<int> x(n), o(n);
    for (int i = 0; i < n; ++i) {
        x[i] = pi[i];
        o[i] = pi[tau[i] - 1];
    }
    return GridDiagram{n, std::move(x), std::move(o)};
}

std::pair<long long, long long> shard_range(long long total,
                                            std::optional<std::pair<int, int>> shard) {
    if (!shard) return {0, total};
    auto [idx, count] = *shard;
    if (count <= 0 || idx < 0 || idx >= count)
        throw SearchError(SearchError::Kind::BadConfig, "invalid shard specification");
    return {total * idx / count, total * (idx + 1) / count};
}

} // namespace

void enumerate(int n, std::optional<std::pair<int, int>> shard,
               const std::function<bool(const GridDiagram&, TransitionKind)>& fn) {
    const auto taus = all_derangements(n);
    auto [lo, hi] = shard_range(static_cast<long long>(taus.size()), shard);
    std::optional<GridDiagram> prev;
    for (long long ti = lo; ti < hi; ++ti) {
        std::vector<int> pi(n);
        std::iota(pi.begin(), pi.end(), 1);
        do {
            GridDiagram g = grid_from(pi, taus[ti]);
            TransitionKind t = prev ? transition_kind(*prev, g) : TransitionKind::Other;
            if (!fn(g, t)) return;
            prev = std::move(g);
        } while (std::next_permutation(pi.begin(), pi.end()));
    }
}

namespace {

struct ShardRunner {
    const SearchConfig& config;
    const std::vector<std::vector<int>>& taus;
    long long outer_lo, outer_hi;
    SearchStats stats;
    long long next_outer = 0; // first outer index not yet fully processed

    void run_range(long long resume_from) {
        const int n = config.n;
        std::optional<GridDiagram> prev;
        std::optional<Classification> prev_class;
        std::ofstream emit;
        if (!config.emit_path.empty())
            emit.open(config.emit_path, std::ios::app);

        long long steps = 0;
        for (long long ti = std::max(outer_lo, resume_from); ti < outer_hi; ++ti) {
            if (config.max_outer_steps && steps >= *config.max_outer_steps) {
                next_outer = ti;
                throw SearchError(SearchError::Kind::ResourceLimit,
                                  "outer-step budget exhausted at index " + std::to_string(ti));
            }
            ++steps;
            std::vector<int> pi(n);
            std::iota(pi.begin(), pi.end(), 1);
            do {
                GridDiagram g = grid_from(pi, taus[ti]);
                TransitionKind t = prev ? transition_kind(*prev, g) : TransitionKind::Other;
                process(g, t, prev, prev_class, emit);
                prev = std::move(g);
            } while (std::next_permutation(pi.begin(), pi.end()));
            next_outer = ti + 1;
        }
    }

    void process(const GridDiagram& g, TransitionKind t, const std::optional<GridDiagram>& prev,
                 std::optional<Classification>& prev_class, std::ofstream& emit) {
        ++stats.total_enumerated;
        if (trace_components(g).count > 1) {
            ++stats.links;
            prev_class = Classification::Link;
            if (config.filters.link_exclusion) return;
            return; // links are outside the lift statistics either way
        }

        // The determinant defines the buckets, so it is computed even with
        // the filter toggles off; the toggles only change how much work a
        // grid costs, never which bucket it lands in.
        bool is_det1;
        if (config.filters.transition_reuse && prev_class &&
            *prev_class == Classification::TrivialDet1 &&
            (t == TransitionKind::Commutation || t == TransitionKind::CyclicPermutation)) {
            is_det1 = true;
            ++stats.det_reuse_events;
        } else {
            is_det1 = determinant(g) == 1;
        }
        (void)prev;

        if (is_det1) {
            if (config.filters.det1_full_identify && config.table) {
                auto r = identify(g, *config.table, config.bracket_limit);
                if (r.outcome == IdentifyResult::Outcome::Match) {
                    // A determinant-1 nontrivial knot (e.g. 10_124).
                    prev_class = Classification::NontrivialKnot;
                    ++stats.nontrivial_knots;
                    classify_lift(g, r.label, emit);
                    return;
                }
            }
            ++stats.trivial_det1;
            prev_class = Classification::TrivialDet1;
            if (config.filters.determinant_filter) return;
            return; // determinant-1 grids never count toward lift statistics
        }

        prev_class = Classification::NontrivialKnot;
        ++stats.nontrivial_knots;
        std::string label;
        if (config.identify && config.table) {
            auto r = identify(g, *config.table, config.bracket_limit);
            label = r.outcome == IdentifyResult::Outcome::Match ? r.label : "unknown";
            ++stats.per_label[label].first;
        }
        classify_lift(g, label, emit);
    }

    void classify_lift(const GridDiagram& g, const std::string& label, std::ofstream& emit) {
        if (!prefilter(g, config.filters)) return;
        auto lift = find_lift(g);
        if (!lift) return;
        ++stats.lifts_found;
        if (!label.empty()) ++stats.per_label[label].second;
        if (emit.is_open())
            emit << emit_cube_text(label.empty() ? "lift" : label, *lift) << "\n";
    }
};

uint64_t fnv64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

SearchStats run(const SearchConfig& config) {
    if (config.n < 2)
        throw SearchError(SearchError::Kind::BadConfig, "search size must be at least 2");
    if (config.identify && !config.table)
        throw SearchError(SearchError::Kind::BadConfig, "identify requires a reference table");
    const auto t0 = std::chrono::steady_clock::now();
    const auto taus = all_derangements(config.n);
    auto [lo, hi] = shard_range(static_cast<long long>(taus.size()), config.shard);

    long long resume_from = lo;
    SearchStats resumed;
    if (!config.checkpoint_path.empty()) {
        std::ifstream probe(config.checkpoint_path);
        if (probe.good()) {
            Checkpoint c = checkpoint_load(config.checkpoint_path, config);
            resumed = c.stats;
            resume_from = c.next_outer_index;
        }
    }

    SearchStats total = resumed;
    if (config.workers > 1 && !config.shard && config.checkpoint_path.empty()) {
        // Independent workers over contiguous outer blocks; merge is
        // associative and commutative, so ordering does not matter.
        std::vector<ShardRunner> runners;
        runners.reserve(config.workers);
        for (int w = 0; w < config.workers; ++w) {
            auto [wlo, whi] = shard_range(static_cast<long long>(taus.size()),
                                          std::make_pair(w, config.workers));
            runners.push_back(ShardRunner{config, taus, wlo, whi});
        }
        std::vector<std::thread> threads;
        for (auto& r : runners)
            threads.emplace_back([&r] { r.run_range(r.outer_lo); });
        for (auto& th : threads) th.join();
        for (auto& r : runners) total.merge(r.stats);
    } else {
        ShardRunner runner{config, taus, lo, hi};
        try {
            runner.run_range(resume_from);
        } catch (const SearchError& e) {
            if (e.kind() == SearchError::Kind::ResourceLimit && !config.checkpoint_path.empty()) {
                SearchStats partial = resumed;
                partial.merge(runner.stats);
                checkpoint_save({fnv64(config.canonical_text()), runner.next_outer, partial},
                                config.checkpoint_path);
            }
            throw;
        }
        total.merge(runner.stats);
    }

    total.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    return total;
}

// ---------------------------------------------------------------------------
// Checkpoint file: line-oriented text with the magic header CUBECKPT1, the
// config hash, the next outer index, the counters, and an FNV-64 checksum
// of everything above it.
// ---------------------------------------------------------------------------

void checkpoint_save(const Checkpoint& c, const std::string& path) {
    std::ostringstream body;
    body << "CUBECKPT1\n";
    body << "config " << c.config_hash << "\n";
    body << "outer " << c.next_outer_index << "\n";
    body << "total " << c.stats.total_enumerated.str() << "\n";
    body << "links " << c.stats.links.str() << "\n";
    body << "det1 " << c.stats.trivial_det1.str() << "\n";
    body << "nontrivial " << c.stats.nontrivial_knots.str() << "\n";
    body << "lifts " << c.stats.lifts_found.str() << "\n";
    body << "reuse " << c.stats.det_reuse_events.str() << "\n";
    for (const auto& [label, counts] : c.stats.per_label)
        body << "label " << label << " " << counts.first.str() << " " << counts.second.str()
             << "\n";
    std::ofstream out(path, std::ios::trunc);
    out << body.str() << "checksum " << fnv64(body.str()) << "\n";
}

Checkpoint checkpoint_load(const std::string& path, const SearchConfig& expected) {
    std::ifstream in(path);
    if (!in.good())
        throw SearchError(SearchError::Kind::CorruptCheckpoint, "cannot open checkpoint " + path);
    std::ostringstream all;
    all << in.rdbuf();
    std::string text = all.str();
    auto pos = text.rfind("checksum ");
    if (pos == std::string::npos || text.compare(0, 10, "CUBECKPT1\n") != 0)
        throw SearchError(SearchError::Kind::CorruptCheckpoint, "malformed checkpoint file");
    std::string body = text.substr(0, pos);
    uint64_t want = std::stoull(text.substr(pos + 9));
    if (fnv64(body) != want)
        throw SearchError(SearchError::Kind::CorruptCheckpoint, "checkpoint checksum mismatch");

    Checkpoint c;
    std::istringstream is(body);
    std::string line;
    std::getline(is, line); // magic
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "config") {
            ls >> c.config_hash;
        } else if (key == "outer") {
            ls >> c.next_outer_index;
        } else if (key == "label") {
            std::string label, grids, lifts;
            ls >> label >> grids >> lifts;
            c.stats.per_label[label] = {BigInt(grids), BigInt(lifts)};
        } else {
            std::string value;
            ls >> value;
            if (key == "total") c.stats.total_enumerated = BigInt(value);
            else if (key == "links") c.stats.links = BigInt(value);
            else if (key == "det1") c.stats.trivial_det1 = BigInt(value);
            else if (key == "nontrivial") c.stats.nontrivial_knots = BigInt(value);
            else if (key == "lifts") c.stats.lifts_found = BigInt(value);
            else if (key == "reuse") c.stats.det_reuse_events = BigInt(value);
        }
    }
    if (c.config_hash != fnv64(expected.canonical_text()))
        throw SearchError(SearchError::Kind::ConfigMismatch,
                          "checkpoint was written by a different configuration");
    return c;
}

} // namespace cubelift
