#pragma once

#include "cyclic.hpp"
#include "lie.hpp"

#include <numeric>
#include <optional>
#include <set>

namespace kvlie {

/// Admissible graph with n aerial vertices 0..n-1 and two ground vertices: n stands for x,
/// n+1 for y. Each aerial vertex owns two outgoing edges; the list order of the edges is
/// part of the data (it fixes the signs of symbols and weights).
struct KGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    static constexpr int m = 2;
    int vertex_count() const noexcept { return n + m; }
    int ground(int k) const noexcept { return n + k; }
    bool is_ground(int v) const noexcept { return v >= n; }
    bool operator==(const KGraph&) const = default;
};

inline constexpr int max_graph_order = 6;

/// Conditions i-iv; returns the first violated condition as text, or an empty string.
inline std::string admissibility_violation(const KGraph& g)
{
    if (g.n < 0) return "negative vertex count";
    if (g.edges.size() != 2 * static_cast<std::size_t>(g.n)) return "i: expected 2n edges";
    std::vector<int> out(static_cast<std::size_t>(g.n));
    std::set<std::pair<int, int>> seen;
    for (const auto& [s, t] : g.edges) {
        if (s < 0 || s >= g.vertex_count() || t < 0 || t >= g.vertex_count()) return "i: vertex index out of range";
        if (g.is_ground(s)) return "ii: edge leaves a ground vertex";
        if (s == t) return "iii: edge source equals target";
        if (!seen.insert({s, t}).second) return "iv: repeated edge";
        ++out[static_cast<std::size_t>(s)];
    }
    for (int k : out)
        if (k != 2) return "ii: aerial vertex without exactly two outgoing edges";
    return {};
}

inline void validate(const KGraph& g)
{
    if (auto v = admissibility_violation(g); !v.empty()) throw std::invalid_argument("inadmissible graph: " + v);
}

enum class GraphKind { lie, wheel, other };

namespace detail {

inline std::vector<int> aerial_indegree(const KGraph& g)
{
    std::vector<int> in(static_cast<std::size_t>(g.n));
    for (const auto& [s, t] : g.edges)
        if (!g.is_ground(t)) ++in[static_cast<std::size_t>(t)];
    return in;
}

/// The two targets of aerial vertex v in list order.
inline std::pair<int, int> targets(const KGraph& g, int v)
{
    std::vector<int> t;
    for (const auto& [s, tt] : g.edges)
        if (s == v) t.push_back(tt);
    return {t.at(0), t.at(1)};
}

/// Sign of the permutation that groups the edge list by source without reordering edges of
/// the same source.
inline int edge_order_sign(const KGraph& g)
{
    int inversions = 0;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        for (std::size_t j = i + 1; j < g.edges.size(); ++j)
            if (g.edges[i].first > g.edges[j].first) ++inversions;
    return inversions % 2 ? -1 : 1;
}

inline bool weakly_connected(const KGraph& g)
{
    if (g.n == 0) return true;
    std::vector<int> parent(static_cast<std::size_t>(g.n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        return v;
    };
    for (const auto& [s, t] : g.edges)
        if (!g.is_ground(t)) parent[static_cast<std::size_t>(find(s))] = find(t);
    const int r = find(0);
    for (int v = 1; v < g.n; ++v)
        if (find(v) != r) return false;
    return true;
}

}  // namespace detail

/// Linear graphs (aerial in-degree at most one) that are connected through aerial edges
/// split into Lie type (one root) and wheel type (one oriented cycle).
inline GraphKind graph_kind(const KGraph& g)
{
    if (!admissibility_violation(g).empty() || g.n == 0) return GraphKind::other;
    const auto in = detail::aerial_indegree(g);
    int roots = 0;
    for (int k : in) {
        if (k > 1) return GraphKind::other;
        if (k == 0) ++roots;
    }
    if (!detail::weakly_connected(g)) return GraphKind::other;
    if (roots == 1) return GraphKind::lie;
    if (roots == 0) return GraphKind::wheel;
    return GraphKind::other;
}

namespace detail {

inline LieSeries lie_value(const KGraph& g, int v, const Alphabet& a, int degree)
{
    if (g.is_ground(v)) return LieSeries::generator(a, degree, v - g.n);
    auto [l, r] = targets(g, v);
    return bracket(lie_value(g, l, a, degree), lie_value(g, r, a, degree));
}

inline std::string lie_expression(const KGraph& g, int v)
{
    if (g.is_ground(v)) return v == g.n ? "x" : "y";
    auto [l, r] = targets(g, v);
    return "[" + lie_expression(g, l) + "," + lie_expression(g, r) + "]";
}

inline int lie_root(const KGraph& g)
{
    const auto in = aerial_indegree(g);
    return static_cast<int>(std::find(in.begin(), in.end(), 0) - in.begin());
}

inline void require_kind(const KGraph& g, GraphKind k, const char* what)
{
    if (graph_kind(g) != k) throw std::invalid_argument(std::string(what) + ": graph has the wrong type");
}

}  // namespace detail

/// Iterated bracket read off a Lie type graph: an aerial vertex with targets (a, b) in list
/// order is [a, b]; the grounds are x and y.
inline LieSeries lie_symbol(const KGraph& g)
{
    detail::require_kind(g, GraphKind::lie, "lie_symbol");
    const Alphabet a(2);
    return detail::lie_value(g, detail::lie_root(g), a, g.n + 1) * detail::edge_order_sign(g);
}

/// Bracket expression of a Lie type graph, e.g. "[[x,[x,y]],y]", with the edge-order sign
/// ignored.
inline std::string lie_expression(const KGraph& g)
{
    detail::require_kind(g, GraphKind::lie, "lie_expression");
    return detail::lie_expression(g, detail::lie_root(g));
}

/// Lie type graph of a bracket expression over x and y; aerial vertices numbered in
/// pre-order, each vertex's edges in bracket order.
inline KGraph lie_graph_from_expression(std::string_view text)
{
    const int n = static_cast<int>(std::count(text.begin(), text.end(), '['));
    KGraph g{n, {}};
    std::size_t pos = 0;
    int next = 0;
    auto fail = [&]() -> int { throw std::invalid_argument("malformed bracket expression '" + std::string(text) + "'"); };
    std::vector<std::pair<int, std::pair<int, int>>> nodes;
    auto parse = [&](auto&& self) -> int {
        if (pos >= text.size()) return fail();
        const char c = text[pos++];
        if (c == 'x') return n;
        if (c == 'y') return n + 1;
        if (c != '[') return fail();
        const int v = next++;
        const int l = self(self);
        if (pos >= text.size() || text[pos++] != ',') return fail();
        const int r = self(self);
        if (pos >= text.size() || text[pos++] != ']') return fail();
        nodes.push_back({v, {l, r}});
        return v;
    };
    parse(parse);
    if (pos != text.size()) fail();
    std::sort(nodes.begin(), nodes.end());
    for (const auto& [v, lr] : nodes) {
        g.edges.push_back({v, lr.first});
        g.edges.push_back({v, lr.second});
    }
    validate(g);
    return g;
}

namespace detail {

/// Cycle of a wheel graph starting at its smallest vertex, in edge direction.
inline std::vector<int> wheel_cycle(const KGraph& g)
{
    // peel vertices with no aerial out-edges into remaining vertices, leaving the cycle
    std::vector<bool> gone(static_cast<std::size_t>(g.n), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.n; ++v) {
            if (gone[static_cast<std::size_t>(v)]) continue;
            auto [a, b] = targets(g, v);
            bool leads = (!g.is_ground(a) && !gone[static_cast<std::size_t>(a)]) || (!g.is_ground(b) && !gone[static_cast<std::size_t>(b)]);
            if (!leads) {
                gone[static_cast<std::size_t>(v)] = true;
                changed = true;
            }
        }
    }
    std::vector<int> cycle;
    int start = -1;
    for (int v = 0; v < g.n; ++v)
        if (!gone[static_cast<std::size_t>(v)]) {
            start = v;
            break;
        }
    int v = start;
    do {
        cycle.push_back(v);
        auto [a, b] = targets(g, v);
        v = (!g.is_ground(a) && !gone[static_cast<std::size_t>(a)]) ? a : b;
    } while (v != start);
    return cycle;
}

}  // namespace detail

/// Cyclic word of a wheel graph: a cycle vertex whose edges are (spoke, next) contributes
/// its spoke s, one with (next, spoke) contributes -s; the symbol is tr(s_1 ... s_k) read
/// along the cycle.
inline CycSeries wheel_symbol(const KGraph& g)
{
    detail::require_kind(g, GraphKind::wheel, "wheel_symbol");
    const Alphabet a(2);
    const auto cycle = detail::wheel_cycle(g);
    std::optional<AssocSeries> product;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int v = cycle[i], next = cycle[(i + 1) % cycle.size()];
        auto [first, second] = detail::targets(g, v);
        const bool spoke_first = second == next;
        AssocSeries s = detail::lie_value(g, spoke_first ? first : second, a, g.n).to_assoc();
        if (!spoke_first) s *= -1;
        product = product ? *product * s : s;
    }
    return tr_project(*product) * detail::edge_order_sign(g);
}

/// Canonical key under relabeling of the aerial vertices (grounds fixed), by brute force.
inline std::vector<std::pair<int, int>> canonical_key(const KGraph& g)
{
    std::vector<int> perm(static_cast<std::size_t>(g.n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<int, int>> best;
    bool first = true;
    do {
        std::vector<std::pair<int, int>> e;
        for (const auto& [s, t] : g.edges)
            e.push_back({perm[static_cast<std::size_t>(s)], g.is_ground(t) ? t : perm[static_cast<std::size_t>(t)]});
        std::sort(e.begin(), e.end());
        if (first || e < best) best = std::move(e);
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Order of the group of type-preserving automorphisms (grounds fixed).
inline int automorphism_count(const KGraph& g)
{
    std::vector<std::pair<int, int>> base = g.edges;
    std::sort(base.begin(), base.end());
    std::vector<int> perm(static_cast<std::size_t>(g.n));
    std::iota(perm.begin(), perm.end(), 0);
    int count = 0;
    do {
        std::vector<std::pair<int, int>> e;
        for (const auto& [s, t] : g.edges)
            e.push_back({perm[static_cast<std::size_t>(s)], g.is_ground(t) ? t : perm[static_cast<std::size_t>(t)]});
        std::sort(e.begin(), e.end());
        if (e == base) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

struct LieGraphEntry {
    KGraph graph;
    std::string expression;
    LieSeries symbol;
    int automorphisms = 1;
    bool zero_symbol = false;
};

struct WheelGraphEntry {
    KGraph graph;
    std::vector<std::string> spokes;  // spoke expressions around the cycle
    CycSeries symbol;
    int automorphisms = 1;  // m_Γ
    bool zero_symbol = false;
};

namespace detail {

inline void require_order(int n)
{
    if (n < 1 || n > max_graph_order)
        throw std::out_of_range("graph order must be in 1.." + std::to_string(max_graph_order));
}

/// Unordered binary trees with k internal vertices as canonical bracket strings (children
/// sorted as strings). Two identical leaves under one vertex would be a double edge.
inline const std::vector<std::set<std::string>>& tree_table()
{
    static const std::vector<std::set<std::string>> table = [] {
        std::vector<std::set<std::string>> t(static_cast<std::size_t>(max_graph_order) + 1);
        t[0] = {"x", "y"};
        for (int k = 1; k <= max_graph_order; ++k)
            for (int a = 0; a <= k - 1; ++a)
                for (const auto& A : t[static_cast<std::size_t>(a)])
                    for (const auto& B : t[static_cast<std::size_t>(k - 1 - a)]) {
                        if (a == 0 && k - 1 == 0 && A == B) continue;
                        const auto& [lo, hi] = std::minmax(A, B);
                        t[static_cast<std::size_t>(k)].insert("[" + lo + "," + hi + "]");
                    }
        return t;
    }();
    return table;
}

inline int internal_count(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '[')); }

/// Appends the aerial vertices of a spoke tree to g and returns its root (or ground).
inline int append_tree(KGraph& g, std::string_view s, std::size_t& pos, int& next)
{
    const char c = s[pos++];
    if (c == 'x') return g.n;
    if (c == 'y') return g.n + 1;
    const int v = next++;
    const int l = append_tree(g, s, pos, next);
    ++pos;  // ','
    const int r = append_tree(g, s, pos, next);
    ++pos;  // ']'
    g.edges.push_back({v, l});
    g.edges.push_back({v, r});
    return v;
}

inline KGraph wheel_graph(const std::vector<std::string>& spokes)
{
    int n = static_cast<int>(spokes.size());
    for (const auto& s : spokes) n += internal_count(s);
    KGraph g{n, {}};
    const int k = static_cast<int>(spokes.size());
    int next = k;
    std::vector<std::pair<int, int>> tree_edges;
    for (int i = 0; i < k; ++i) {
        KGraph scratch{n, {}};
        std::size_t pos = 0;
        const int root = append_tree(scratch, spokes[static_cast<std::size_t>(i)], pos, next);
        g.edges.push_back({i, root});
        g.edges.push_back({i, (i + 1) % k});
        tree_edges.insert(tree_edges.end(), scratch.edges.begin(), scratch.edges.end());
    }
    std::stable_sort(tree_edges.begin(), tree_edges.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    g.edges.insert(g.edges.end(), tree_edges.begin(), tree_edges.end());
    return g;
}

}  // namespace detail

/// Geometric Lie type graphs with n aerial vertices: unordered binary trees with x/y leaves.
inline std::vector<LieGraphEntry> enumerate_lie_graphs(int n)
{
    detail::require_order(n);
    std::vector<LieGraphEntry> out;
    for (const auto& s : detail::tree_table()[static_cast<std::size_t>(n)]) {
        LieGraphEntry e{lie_graph_from_expression(s), s, LieSeries(Alphabet(2), n + 1), 1, false};
        e.symbol = lie_symbol(e.graph);
        e.automorphisms = automorphism_count(e.graph);
        e.zero_symbol = e.symbol.is_zero();
        out.push_back(std::move(e));
    }
    return out;
}

/// Geometric wheel type graphs with n aerial vertices: a cycle of k >= 2 vertices, each with a
/// spoke that is a leaf or a Lie tree, up to rotation.
inline std::vector<WheelGraphEntry> enumerate_wheel_graphs(int n)
{
    detail::require_order(n);
    const auto& trees = detail::tree_table();
    std::set<std::vector<std::string>> classes;
    for (int k = 2; k <= n; ++k) {
        // distribute n - k internal vertices over k spokes
        std::vector<std::string> spokes(static_cast<std::size_t>(k));
        auto fill = [&](auto&& self, int i, int left) -> void {
            if (i == k) {
                if (left != 0) return;
                auto best = spokes;
                for (int r = 1; r < k; ++r) {
                    std::vector<std::string> rot(spokes.begin() + r, spokes.end());
                    rot.insert(rot.end(), spokes.begin(), spokes.begin() + r);
                    best = std::min(best, rot);
                }
                classes.insert(best);
                return;
            }
            for (int size = 0; size <= left; ++size)
                for (const auto& t : trees[static_cast<std::size_t>(size)]) {
                    spokes[static_cast<std::size_t>(i)] = t;
                    self(self, i + 1, left - size);
                }
        };
        fill(fill, 0, n - k);
    }
    std::vector<WheelGraphEntry> out;
    for (const auto& spokes : classes) {
        WheelGraphEntry e{detail::wheel_graph(spokes), spokes, CycSeries(Alphabet(2), n), 1, false};
        validate(e.graph);
        e.symbol = wheel_symbol(e.graph);
        e.automorphisms = automorphism_count(e.graph);
        e.zero_symbol = e.symbol.is_zero();
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace kvlie
