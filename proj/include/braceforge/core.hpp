// Finite carriers and Cayley-table groups.
//
// A carrier of size n is the index set {0,...,n-1}; index 0 is reserved for
// the identity of any group structure placed on the carrier.  All checks are
// exhaustive (no sampling) up to a configurable carrier bound; larger
// carriers are rejected outright.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "braceforge/report.hpp"

namespace braceforge {

// ---------------------------------------------------------------------------
// Configuration

namespace detail {
inline int& max_carrier_ref() {
    static int bound = [] {
        if (const char* env = std::getenv("BRACE_FORGE_MAX_N")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return 128;
    }();
    return bound;
}
inline int& thread_cap_ref() {
    static int cap = [] {
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? static_cast<int>(hw) : 1;
    }();
    return cap;
}
}  // namespace detail

inline int max_carrier() { return detail::max_carrier_ref(); }
inline void set_max_carrier(int n) {
    if (n < 1) throw std::invalid_argument("carrier bound must be >= 1");
    detail::max_carrier_ref() = n;
}
inline int thread_cap() { return detail::thread_cap_ref(); }
inline void set_thread_cap(int k) {
    if (k < 1) throw std::invalid_argument("thread cap must be >= 1");
    detail::thread_cap_ref() = k;
}

// ---------------------------------------------------------------------------
// Parallel scan over an outer index range.
//
// Searches [0,n) for the lexicographically first "hit" (violation witness).
// The body is called per outer index and returns an optional witness tuple;
// with several workers the minimum over all hits is taken, so results do not
// depend on scheduling.

namespace detail {

template <class Body>
std::optional<std::vector<int>> scan_outer(int n, Body&& body) {
    int workers = std::min(thread_cap(), n > 0 ? n : 1);
    if (workers <= 1) {
        for (int a = 0; a < n; ++a)
            if (auto w = body(a)) return w;
        return std::nullopt;
    }
    std::vector<std::optional<std::vector<int>>> found(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int a = w; a < n; a += workers) {
                    if (auto hit = body(a)) {
                        found[static_cast<std::size_t>(w)] = std::move(hit);
                        return;
                    }
                }
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errs)
        if (err) std::rethrow_exception(err);
    std::optional<std::vector<int>> best;
    for (auto& f : found)
        if (f && (!best || *f < *best)) best = std::move(f);
    return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Permutations

struct Permutation {
    std::vector<int32_t> image;  // image[a] = where a goes; a bijection

    int size() const { return static_cast<int>(image.size()); }
    int operator()(int a) const { return image[static_cast<std::size_t>(a)]; }

    static Permutation identity(int n) {
        Permutation p;
        p.image.resize(static_cast<std::size_t>(n));
        std::iota(p.image.begin(), p.image.end(), 0);
        return p;
    }

    bool is_identity() const {
        for (int a = 0; a < size(); ++a)
            if (image[static_cast<std::size_t>(a)] != a) return false;
        return true;
    }

    bool is_bijection() const {
        std::vector<char> seen(image.size(), 0);
        for (int32_t v : image) {
            if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
        return true;
    }

    // (p.then(q))(a) = q(p(a))
    Permutation then(const Permutation& q) const {
        Permutation r;
        r.image.resize(image.size());
        for (std::size_t a = 0; a < image.size(); ++a)
            r.image[a] = q.image[static_cast<std::size_t>(image[a])];
        return r;
    }

    Permutation inverse() const {
        Permutation r;
        r.image.resize(image.size());
        for (std::size_t a = 0; a < image.size(); ++a)
            r.image[static_cast<std::size_t>(image[a])] = static_cast<int32_t>(a);
        return r;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation& x, const Permutation& y) {
        return x.image <=> y.image;
    }
};

// ---------------------------------------------------------------------------
// Group tables

struct GroupTable {
    int n = 0;
    std::vector<int32_t> table;  // row-major, table[a*n+b] = a*b
    std::vector<int32_t> inv;    // inv[a]*a = a*inv[a] = 0

    int at(int a, int b) const { return table[static_cast<std::size_t>(a) * n + b]; }
    int inverse(int a) const { return inv[static_cast<std::size_t>(a)]; }
    const int32_t* row(int a) const { return table.data() + static_cast<std::size_t>(a) * n; }

    void set(int a, int b, int v) { table[static_cast<std::size_t>(a) * n + b] = static_cast<int32_t>(v); }

    // Fills inv[] from the table; an element without a two-sided inverse gets
    // -1, which validate_group reports as an axiom failure.
    void compute_inverses() {
        inv.assign(static_cast<std::size_t>(n), -1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (at(a, b) == 0 && at(b, a) == 0) {
                    inv[static_cast<std::size_t>(a)] = static_cast<int32_t>(b);
                    break;
                }
    }

    bool is_abelian() const {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (at(a, b) != at(b, a)) return false;
        return true;
    }

    int element_order(int a) const {
        int x = a, k = 1;
        while (x != 0) {
            x = at(x, a);
            ++k;
        }
        return k;
    }

    friend bool operator==(const GroupTable&, const GroupTable&) = default;
};

inline GroupTable make_cyclic_group(int n) {
    if (n < 1) throw std::invalid_argument("group size must be >= 1");
    GroupTable g;
    g.n = n;
    g.table.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.set(a, b, (a + b) % n);
    g.compute_inverses();
    return g;
}

// Direct product on pair indices (a,b) -> a*|B|+b.
inline GroupTable make_direct_product(const GroupTable& A, const GroupTable& B) {
    GroupTable g;
    g.n = A.n * B.n;
    g.table.resize(static_cast<std::size_t>(g.n) * g.n);
    for (int a1 = 0; a1 < A.n; ++a1)
        for (int b1 = 0; b1 < B.n; ++b1)
            for (int a2 = 0; a2 < A.n; ++a2)
                for (int b2 = 0; b2 < B.n; ++b2)
                    g.set(a1 * B.n + b1, a2 * B.n + b2, A.at(a1, a2) * B.n + B.at(b1, b2));
    g.compute_inverses();
    return g;
}

// ---------------------------------------------------------------------------
// validate_group: exhaustive check of the group axioms.
//
// Checks run in a fixed order (dimensions, closure, identity, inverses,
// associativity) and the report names the first axiom that fails, with the
// lexicographically first witness.

inline Report validate_group(const GroupTable& g) {
    Stopwatch timer;
    Report rep;
    rep.subject = "group";
    if (g.n < 1) {
        rep.structural = "carrier size must be >= 1";
        return rep;
    }
    if (g.n > max_carrier()) {
        rep.structural = "carrier size " + std::to_string(g.n) + " exceeds bound " +
                         std::to_string(max_carrier());
        return rep;
    }
    if (g.table.size() != static_cast<std::size_t>(g.n) * g.n) {
        rep.structural = "table has " + std::to_string(g.table.size()) + " entries, expected " +
                         std::to_string(static_cast<std::size_t>(g.n) * g.n);
        return rep;
    }
    if (g.inv.size() != static_cast<std::size_t>(g.n)) {
        rep.structural = "inverse vector has wrong length";
        return rep;
    }

    // closure
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            if (g.at(a, b) < 0 || g.at(a, b) >= g.n) {
                rep.add("closure", false, {a, b}, "entry out of range");
                return rep;
            }
    rep.add("closure", true);

    // identity at index 0
    for (int a = 0; a < g.n; ++a)
        if (g.at(0, a) != a || g.at(a, 0) != a) {
            rep.add("identity", false, {a}, "row/column 0 must act as identity");
            return rep;
        }
    rep.add("identity", true);

    // two-sided inverses
    for (int a = 0; a < g.n; ++a) {
        int ia = g.inverse(a);
        if (ia < 0 || ia >= g.n || g.at(a, ia) != 0 || g.at(ia, a) != 0) {
            rep.add("inverses", false, {a});
            return rep;
        }
    }
    rep.add("inverses", true);

    // associativity over all triples
    auto witness = detail::scan_outer(g.n, [&](int a) -> std::optional<std::vector<int>> {
        for (int b = 0; b < g.n; ++b) {
            const int32_t* row_ab = g.row(g.at(a, b));
            const int32_t* row_b = g.row(b);
            const int32_t* row_a = g.row(a);
            for (int c = 0; c < g.n; ++c)
                if (row_ab[c] != row_a[row_b[c]]) return std::vector<int>{a, b, c};
        }
        return std::nullopt;
    });
    rep.add("associativity", !witness, witness.value_or(std::vector<int>{}));
    rep.seconds = timer.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// Generating sets

namespace detail {

// Subgroup generated by `gens`, as a sorted element list.
inline std::vector<int> closure(const GroupTable& g, const std::vector<int>& gens) {
    std::vector<char> in(static_cast<std::size_t>(g.n), 0);
    std::vector<int> queue{0};
    in[0] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (int s : gens) {
            int x = g.at(queue[i], s);
            if (!in[static_cast<std::size_t>(x)]) {
                in[static_cast<std::size_t>(x)] = 1;
                queue.push_back(x);
            }
            int y = g.at(s, queue[i]);
            if (!in[static_cast<std::size_t>(y)]) {
                in[static_cast<std::size_t>(y)] = 1;
                queue.push_back(y);
            }
        }
    std::sort(queue.begin(), queue.end());
    return queue;
}

// Greedy generating set: repeatedly adjoin the element of maximal order not
// yet generated (lowest index on ties).  Works for any group; for abelian
// groups the result has minimal length (one generator per invariant factor).
inline std::vector<int> greedy_generators(const GroupTable& g) {
    std::vector<int> gens;
    std::vector<int> gen = {0};
    std::vector<int> order(static_cast<std::size_t>(g.n));
    for (int a = 0; a < g.n; ++a) order[static_cast<std::size_t>(a)] = g.element_order(a);
    while (static_cast<int>(gen.size()) < g.n) {
        std::vector<char> in(static_cast<std::size_t>(g.n), 0);
        for (int x : gen) in[static_cast<std::size_t>(x)] = 1;
        int best = -1;
        for (int a = 0; a < g.n; ++a)
            if (!in[static_cast<std::size_t>(a)] &&
                (best < 0 || order[static_cast<std::size_t>(a)] > order[static_cast<std::size_t>(best)]))
                best = a;
        gens.push_back(best);
        gen = closure(g, gens);
    }
    return gens;
}

}  // namespace detail

// Minimal generating sequence of an abelian group, greedy with lowest-index
// tie-breaking.  Rejects non-abelian input.
inline std::vector<int> abelian_generators(const GroupTable& g) {
    if (!g.is_abelian()) throw std::invalid_argument("abelian_generators: group is not abelian");
    return detail::greedy_generators(g);
}

// ---------------------------------------------------------------------------
// Automorphism search.
//
// Backtracks over images of a generating set rather than over all n!
// bijections: generator images are restricted to elements of equal order,
// each candidate map is completed along the closure's spanning tree and then
// verified on all pairs.  Output is sorted by image sequence.

inline std::vector<Permutation> group_automorphisms(const GroupTable& g) {
    struct Step {
        int elem;
        int prev;
        int gen;  // index into gens; elem = prev * gens[gen]
    };
    std::vector<int> gens = detail::greedy_generators(g);
    if (gens.empty()) return {Permutation::identity(g.n)};

    // spanning tree of the Cayley graph on the chosen generators
    std::vector<Step> tree;
    {
        std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
        seen[0] = 1;
        std::vector<int> queue{0};
        for (std::size_t i = 0; i < queue.size(); ++i)
            for (std::size_t s = 0; s < gens.size(); ++s) {
                int x = g.at(queue[i], gens[s]);
                if (!seen[static_cast<std::size_t>(x)]) {
                    seen[static_cast<std::size_t>(x)] = 1;
                    tree.push_back(Step{x, queue[i], static_cast<int>(s)});
                    queue.push_back(x);
                }
            }
    }

    std::vector<int> order(static_cast<std::size_t>(g.n));
    for (int a = 0; a < g.n; ++a) order[static_cast<std::size_t>(a)] = g.element_order(a);

    std::vector<std::vector<int>> candidates(gens.size());
    for (std::size_t s = 0; s < gens.size(); ++s)
        for (int a = 0; a < g.n; ++a)
            if (order[static_cast<std::size_t>(a)] == order[static_cast<std::size_t>(gens[s])])
                candidates[s].push_back(a);

    std::vector<Permutation> result;
    std::vector<int> pick(gens.size(), 0);
    std::vector<int32_t> map(static_cast<std::size_t>(g.n));
    for (;;) {
        // complete the candidate map along the spanning tree
        map.assign(static_cast<std::size_t>(g.n), -1);
        map[0] = 0;
        for (const Step& st : tree) {
            int img = g.at(map[static_cast<std::size_t>(st.prev)],
                           candidates[static_cast<std::size_t>(st.gen)]
                                     [static_cast<std::size_t>(pick[static_cast<std::size_t>(st.gen)])]);
            map[static_cast<std::size_t>(st.elem)] = static_cast<int32_t>(img);
        }
        Permutation p{map};
        if (p.is_bijection()) {
            bool hom = true;
            for (int a = 0; a < g.n && hom; ++a)
                for (int b = 0; b < g.n; ++b)
                    if (map[static_cast<std::size_t>(g.at(a, b))] !=
                        g.at(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)])) {
                        hom = false;
                        break;
                    }
            if (hom) result.push_back(std::move(p));
        }
        // odometer over candidate assignments
        std::size_t s = 0;
        while (s < gens.size()) {
            if (++pick[s] < static_cast<int>(candidates[s].size())) break;
            pick[s] = 0;
            ++s;
        }
        if (s == gens.size()) break;
    }
    std::sort(result.begin(), result.end());
    return result;
}

// ---------------------------------------------------------------------------
// Group file format.
//
//   group n=<int>
//   <n lines of n space-separated element indices>
//
// The identity must be element 0; trailing garbage is rejected.

namespace detail {

inline bool read_data_line(std::istream& is, std::string& line, int& lineno) {
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    return false;
}

inline bool parse_row(const std::string& line, int n, std::vector<int32_t>& out,
                      std::string& err) {
    std::istringstream ss(line);
    out.clear();
    long v;
    while (ss >> v) out.push_back(static_cast<int32_t>(v));
    if (!ss.eof()) {
        err = "non-numeric data";
        return false;
    }
    if (static_cast<int>(out.size()) != n) {
        err = "expected " + std::to_string(n) + " entries, got " + std::to_string(out.size());
        return false;
    }
    return true;
}

// Parses "<keyword> n=<int>" and any further "key=value" tokens.
inline bool parse_header(const std::string& line, const std::string& keyword, int& n,
                         std::vector<std::pair<std::string, std::string>>& extras,
                         std::string& err) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != keyword) {
        err = "expected header '" + keyword + " n=<int>'";
        return false;
    }
    n = -1;
    extras.clear();
    while (ss >> word) {
        auto eq = word.find('=');
        if (eq == std::string::npos) {
            err = "malformed header token '" + word + "'";
            return false;
        }
        std::string key = word.substr(0, eq), val = word.substr(eq + 1);
        if (key == "n") {
            try {
                n = std::stoi(val);
            } catch (...) {
                err = "bad carrier size '" + val + "'";
                return false;
            }
        } else {
            extras.emplace_back(key, val);
        }
    }
    if (n < 0) {
        err = "header is missing n=<int>";
        return false;
    }
    if (n < 1) {
        err = "carrier size must be >= 1";
        return false;
    }
    return true;
}

inline std::string at_line(int lineno, const std::string& msg) {
    return "line " + std::to_string(lineno) + ": " + msg;
}

// Reads n table rows with range checks; leaves a structural error in err.
inline bool parse_table_rows(std::istream& is, int n, std::vector<int32_t>& table, int& lineno,
                             std::string& err) {
    table.clear();
    table.reserve(static_cast<std::size_t>(n) * n);
    std::string line;
    std::vector<int32_t> row;
    for (int r = 0; r < n; ++r) {
        if (!read_data_line(is, line, lineno)) {
            err = at_line(lineno, "unexpected end of file inside table");
            return false;
        }
        std::string rowerr;
        if (!parse_row(line, n, row, rowerr)) {
            err = at_line(lineno, rowerr);
            return false;
        }
        for (int32_t v : row)
            if (v < 0 || v >= n) {
                err = at_line(lineno, "element index " + std::to_string(v) + " out of range");
                return false;
            }
        table.insert(table.end(), row.begin(), row.end());
    }
    return true;
}

inline bool reject_trailing(std::istream& is, int& lineno, std::string& err) {
    std::string line;
    while (read_data_line(is, line, lineno)) {
        if (line.find_first_not_of(" \t") != std::string::npos) {
            err = at_line(lineno, "trailing garbage");
            return false;
        }
    }
    return true;
}

// Builds a GroupTable from parsed rows, checking that the identity sits at
// index 0 and every element has an inverse (both reported as parse errors,
// not axiom failures: files must contain honest groups).
inline bool table_from_rows(int n, std::vector<int32_t> rows, GroupTable& out, std::string& err) {
    out.n = n;
    out.table = std::move(rows);
    for (int a = 0; a < n; ++a)
        if (out.at(0, a) != a || out.at(a, 0) != a) {
            err = "identity is not element 0";
            return false;
        }
    out.compute_inverses();
    for (int a = 0; a < n; ++a)
        if (out.inv[static_cast<std::size_t>(a)] < 0) {
            err = "element " + std::to_string(a) + " has no inverse";
            return false;
        }
    return true;
}

}  // namespace detail

inline Validated<GroupTable> parse_group(std::istream& is) {
    Validated<GroupTable> out;
    out.report.subject = "group-file";
    int lineno = 0;
    std::string line, err;
    if (!detail::read_data_line(is, line, lineno)) {
        out.report.structural = "empty file";
        return out;
    }
    int n;
    std::vector<std::pair<std::string, std::string>> extras;
    if (!detail::parse_header(line, "group", n, extras, err) || !extras.empty()) {
        out.report.structural = detail::at_line(lineno, err.empty() ? "unexpected header fields" : err);
        return out;
    }
    std::vector<int32_t> rows;
    if (!detail::parse_table_rows(is, n, rows, lineno, err) ||
        !detail::reject_trailing(is, lineno, err)) {
        out.report.structural = err;
        return out;
    }
    GroupTable g;
    if (!detail::table_from_rows(n, std::move(rows), g, err)) {
        out.report.structural = err;
        return out;
    }
    out.report = validate_group(g);
    out.report.subject = "group-file";
    if (out.report.ok()) out.value = std::move(g);
    return out;
}

inline void emit_group(const GroupTable& g, std::ostream& os) {
    os << "group n=" << g.n << '\n';
    for (int a = 0; a < g.n; ++a) {
        for (int b = 0; b < g.n; ++b) os << (b ? " " : "") << g.at(a, b);
        os << '\n';
    }
}

}  // namespace braceforge
