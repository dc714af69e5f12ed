#include "cuntz/walkgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cuntz/error.hpp"
#include "graph_util.hpp"

namespace cuntz {

namespace {

bool possible(Complex w, const Tolerances& tol) { return std::abs(w) > tol.zero; }

void require_vertex(const WalkGraph& g, std::size_t c)
{
    if (c >= g.vertex_count())
        throw PreconditionError("vertex index " + std::to_string(c) + " out of range");
}

void require_injective(const WalkGraph& g, const Tolerances& tol)
{
    if (!is_injective(g, tol))
        throw PreconditionError(
            "walk is not injective on possible transitions, so cycle-word suffixes are not unique "
            "(a word such as 1010 can end in the cycle word 0 and also in the two cycle words 10.10); "
            "the frame index set is undefined");
}

detail::Adjacency possible_edges(const WalkGraph& g, const Tolerances& tol)
{
    detail::Adjacency adj(g.vertex_count());
    for (std::size_t c = 0; c < g.vertex_count(); ++c)
        for (std::size_t i = 0; i < g.alphabet_size(); ++i)
            if (possible(g.weight(static_cast<int>(i), c), tol))
                adj[c].push_back(g.target(static_cast<int>(i), c));
    return adj;
}

/// First-return test for a nonempty word at c.
bool is_cycle_word(const WalkGraph& g, std::size_t c, const Word& beta, const Tolerances& tol)
{
    if (beta.empty())
        return false;
    std::size_t v = c;
    for (std::size_t k = 0; k < beta.size(); ++k) {
        const int letter = beta[k];
        if (letter < 0 || static_cast<std::size_t>(letter) >= g.alphabet_size() || !possible(g.weight(letter, v), tol))
            return false;
        v = g.target(letter, v);
        if (v == c && k + 1 < beta.size())
            return false;
    }
    return v == c;
}

} // namespace

WalkGraph::WalkGraph(std::vector<WalkVertex> vertices, std::vector<std::vector<std::size_t>> targets,
                     std::vector<std::vector<Complex>> weights)
    : vertices_(std::move(vertices)), targets_(std::move(targets)), weights_(std::move(weights))
{
    const std::size_t n = vertices_.size();
    if (n == 0)
        throw InputError("walk has no vertices");
    if (targets_.empty())
        throw InputError("walk has an empty alphabet");
    if (weights_.size() != targets_.size())
        throw InputError("walk has " + std::to_string(targets_.size()) + " edge arrays but " +
                         std::to_string(weights_.size()) + " weight arrays");
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (targets_[i].size() != n)
            throw InputError("edges[" + std::to_string(i) + "] has " + std::to_string(targets_[i].size()) +
                             " entries, expected " + std::to_string(n));
        if (weights_[i].size() != n)
            throw InputError("weights[" + std::to_string(i) + "] has " + std::to_string(weights_[i].size()) +
                             " entries, expected " + std::to_string(n));
        for (std::size_t c = 0; c < n; ++c) {
            if (targets_[i][c] >= n)
                throw InputError("edges[" + std::to_string(i) + "][" + std::to_string(c) + "] is out of range");
            if (!std::isfinite(weights_[i][c].real()) || !std::isfinite(weights_[i][c].imag()))
                throw InputError("weights[" + std::to_string(i) + "][" + std::to_string(c) + "] is not finite");
        }
    }
    std::set<std::string> ids;
    for (const auto& v : vertices_)
        if (!ids.insert(v.id).second)
            throw InputError("duplicate vertex id '" + v.id + "'");
}

std::optional<std::size_t> WalkGraph::find(std::string_view id) const
{
    for (std::size_t c = 0; c < vertices_.size(); ++c)
        if (vertices_[c].id == id)
            return c;
    return std::nullopt;
}

std::optional<std::size_t> WalkGraph::find(const RationalPoint& point) const
{
    for (std::size_t c = 0; c < vertices_.size(); ++c)
        if (vertices_[c].point && *vertices_[c].point == point)
            return c;
    return std::nullopt;
}

double WalkGraph::normalization_defect() const
{
    double worst = 0.0;
    for (std::size_t c = 0; c < vertices_.size(); ++c) {
        double mass = 0.0;
        for (const auto& row : weights_)
            mass += std::norm(row[c]);
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    return worst;
}

WalkGraph::Path WalkGraph::follow(std::size_t c, const Word& w) const
{
    Path p{c, Complex{1.0, 0.0}};
    for (Letter letter : w) {
        if (letter < 0 || static_cast<std::size_t>(letter) >= alphabet_size())
            throw PreconditionError("letter " + std::to_string(letter) + " outside the alphabet");
        p.weight *= weight(letter, p.end);
        p.end = target(letter, p.end);
    }
    return p;
}

bool operator==(const WalkGraph& a, const WalkGraph& b)
{
    if (a.vertices_.size() != b.vertices_.size() || a.targets_ != b.targets_ || a.weights_ != b.weights_ ||
        a.reversing_ != b.reversing_)
        return false;
    for (std::size_t c = 0; c < a.vertices_.size(); ++c)
        if (a.vertices_[c].id != b.vertices_[c].id || a.vertices_[c].point != b.vertices_[c].point)
            return false;
    return true;
}

// --- structural properties -------------------------------------------------

bool is_irreducible(const WalkGraph& g, const Tolerances& tol)
{
    const auto adj = possible_edges(g, tol);
    for (std::size_t c = 0; c < g.vertex_count(); ++c) {
        const auto seen = detail::reachable_from(adj, c);
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            return false;
    }
    return true;
}

bool is_injective(const WalkGraph& g, const Tolerances& tol)
{
    for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
        std::vector<bool> hit(g.vertex_count(), false);
        for (std::size_t c = 0; c < g.vertex_count(); ++c) {
            if (!possible(g.weight(static_cast<int>(i), c), tol))
                continue;
            const std::size_t t = g.target(static_cast<int>(i), c);
            if (hit[t])
                return false;
            hit[t] = true;
        }
    }
    return true;
}

bool is_separating(const WalkGraph& g, const Tolerances& tol)
{
    const std::size_t n = g.vertex_count();
    const auto pair = [n](std::size_t a, std::size_t b) { return a * n + b; };
    detail::Adjacency adj(n * n);
    std::vector<bool> self_loop(n * n, false);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
                const int letter = static_cast<int>(i);
                if (!possible(g.weight(letter, a), tol) || !possible(g.weight(letter, b), tol))
                    continue;
                const std::size_t from = pair(a, b);
                const std::size_t to = pair(g.target(letter, a), g.target(letter, b));
                adj[from].push_back(to);
                if (from == to)
                    self_loop[from] = true;
            }

    std::size_t count = 0;
    const auto comp = detail::strongly_connected_components(adj, count);
    std::vector<std::size_t> comp_size(count, 0);
    for (auto id : comp)
        ++comp_size[id];

    // Pairs lying on a directed cycle, then everything that can reach them.
    detail::Adjacency reverse(n * n);
    for (std::size_t v = 0; v < adj.size(); ++v)
        for (auto w : adj[v])
            reverse[w].push_back(v);
    std::vector<bool> doomed(n * n, false);
    std::vector<std::size_t> todo;
    for (std::size_t v = 0; v < n * n; ++v)
        if (comp_size[comp[v]] > 1 || self_loop[v]) {
            doomed[v] = true;
            todo.push_back(v);
        }
    while (!todo.empty()) {
        const std::size_t v = todo.back();
        todo.pop_back();
        for (auto w : reverse[v])
            if (!doomed[w]) {
                doomed[w] = true;
                todo.push_back(w);
            }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && doomed[pair(a, b)])
                return false;
    return true;
}

std::size_t sigma_fixed_dimension(const WalkGraph& g, const Tolerances& tol)
{
    const std::size_t n = g.vertex_count();
    const auto dim = static_cast<Eigen::Index>(n * n);
    // Phi acts on vec(T) with index c * n + c'.
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t cp = 0; cp < n; ++cp)
            for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
                const int letter = static_cast<int>(i);
                const Complex coeff = g.weight(letter, cp) * std::conj(g.weight(letter, c));
                if (coeff == Complex{})
                    continue;
                const std::size_t row = c * n + cp;
                const std::size_t col = g.target(letter, c) * n + g.target(letter, cp);
                phi(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += coeff;
            }
    phi -= Eigen::MatrixXcd::Identity(dim, dim);
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(phi);
    const auto& sv = svd.singularValues();
    const double cutoff = tol.rank * std::max(1.0, sv.size() ? sv(0) : 0.0);
    std::size_t nullity = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) <= cutoff)
            ++nullity;
    return nullity;
}

WalkReport analyze(const WalkGraph& g, const Tolerances& tol)
{
    WalkReport r;
    r.normalization_defect = g.normalization_defect();
    r.normalized = r.normalization_defect < tol.numeric;
    if (!r.normalized)
        throw PreconditionError("walk is not normalized: max |sum_i |nu_i(c)|^2 - 1| = " +
                                std::to_string(r.normalization_defect));
    r.irreducible = is_irreducible(g, tol);
    r.injective = is_injective(g, tol);
    r.separating = is_separating(g, tol);
    r.reversing = g.reversing();
    r.sigma_fixed_dim = sigma_fixed_dimension(g, tol);
    r.simple = r.sigma_fixed_dim == 1;
    return r;
}

// --- words -----------------------------------------------------------------

std::vector<CycleWord> enumerate_cycle_words(const WalkGraph& g, std::size_t c, std::size_t max_length,
                                             const Tolerances& tol)
{
    require_vertex(g, c);
    struct Partial {
        Word word;
        std::size_t at;
        Complex weight;
    };
    std::vector<CycleWord> out;
    std::vector<Partial> layer{{Word{}, c, Complex{1.0, 0.0}}};
    for (std::size_t len = 1; len <= max_length && !layer.empty(); ++len) {
        std::vector<Partial> next;
        for (const auto& p : layer)
            for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
                const int letter = static_cast<int>(i);
                if (!possible(g.weight(letter, p.at), tol))
                    continue;
                const Complex w = p.weight * g.weight(letter, p.at);
                const std::size_t to = g.target(letter, p.at);
                if (to == c)
                    out.push_back({p.word.appended(letter), w, c});
                else
                    next.push_back({p.word.appended(letter), to, w});
            }
        layer = std::move(next);
    }
    return out;
}

double first_passage_mass(const WalkGraph& g, std::size_t t, std::size_t c, std::size_t max_length,
                          const Tolerances& tol)
{
    require_vertex(g, t);
    require_vertex(g, c);
    // Taboo propagation: mass still travelling after k letters without visiting c.
    std::vector<double> mass(g.vertex_count(), 0.0);
    mass[t] = 1.0;
    double arrived = 0.0;
    for (std::size_t len = 1; len <= max_length; ++len) {
        std::vector<double> next(g.vertex_count(), 0.0);
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            if (mass[v] == 0.0)
                continue;
            for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
                const Complex w = g.weight(static_cast<int>(i), v);
                if (!possible(w, tol))
                    continue;
                next[g.target(static_cast<int>(i), v)] += mass[v] * std::norm(w);
            }
        }
        arrived += next[c];
        next[c] = 0.0;
        mass = std::move(next);
    }
    return arrived;
}

bool ends_in_cycle_word(const WalkGraph& g, std::size_t c, const Word& w, const Tolerances& tol)
{
    require_vertex(g, c);
    require_injective(g, tol);
    for (std::size_t len = 1; len <= w.size(); ++len)
        if (is_cycle_word(g, c, w.suffix(len), tol))
            return true;
    return false;
}

CycleDecomposition decompose_cycles(const WalkGraph& g, std::size_t c, const Word& w, const Tolerances& tol)
{
    require_vertex(g, c);
    require_injective(g, tol);
    CycleDecomposition out;
    Word rest = w;
    while (true) {
        bool stripped = false;
        for (std::size_t len = 1; len <= rest.size(); ++len) {
            Word tail = rest.suffix(len);
            if (is_cycle_word(g, c, tail, tol)) {
                rest = rest.prefix(rest.size() - len);
                out.cycles.insert(out.cycles.begin(), std::move(tail));
                stripped = true;
                break;
            }
        }
        if (!stripped)
            break;
    }
    out.head = std::move(rest);
    return out;
}

void visit_word_tree(const WalkGraph& g, std::size_t c, std::size_t max_length,
                     const std::function<bool(const Word&, bool)>& visit, const Tolerances& tol)
{
    require_vertex(g, c);
    require_injective(g, tol);
    std::vector<Word> cycles;
    for (auto& cw : enumerate_cycle_words(g, c, max_length, tol))
        cycles.push_back(std::move(cw.word));

    std::vector<Word> stack{Word{}};
    while (!stack.empty()) {
        Word w = std::move(stack.back());
        stack.pop_back();
        const bool in_frame = std::none_of(cycles.begin(), cycles.end(), [&](const Word& b) { return w.ends_with(b); });
        if (!visit(w, in_frame) || w.size() == max_length)
            continue;
        for (std::size_t i = g.alphabet_size(); i-- > 0;)
            stack.push_back(w.appended(static_cast<Letter>(i)));
    }
}

std::vector<Word> enumerate_frame_words(const WalkGraph& g, std::size_t c, std::size_t max_length,
                                        const Tolerances& tol)
{
    std::vector<Word> out;
    visit_word_tree(g, c, max_length, [&](const Word& w, bool in_frame) {
        if (in_frame)
            out.push_back(w);
        return true;
    }, tol);
    std::stable_sort(out.begin(), out.end(), LengthLexLess{});
    return out;
}

WalkGraph build_periodic_walk(const FilterSystem& fs, const RationalPoint& v0, const Word& beta, const Tolerances& tol)
{
    if (!is_irreducible(beta))
        throw PreconditionError("word '" + beta.display() + "' is not irreducible");
    if (beta.max_letter() >= static_cast<Letter>(fs.filter_count()))
        throw PreconditionError("word '" + beta.display() + "' uses letters outside the alphabet");

    const std::size_t p = beta.size();
    std::vector<RationalPoint> orbit{v0};
    for (std::size_t k = 0; k < p; ++k) {
        const RationalPoint next = spectral_map(fs, beta[k], orbit.back());
        const Complex nu = transition_weight(fs, beta[k], next);
        if (std::abs(std::abs(nu) - 1.0) > tol.zero)
            throw PreconditionError("not a periodic unit orbit: |nu_" + std::to_string(beta[k]) + "(" +
                                    orbit.back().to_string() + ")| = " + std::to_string(std::abs(nu)));
        orbit.push_back(next);
    }
    if (orbit.back() != v0)
        throw PreconditionError("not a periodic unit orbit: the orbit of " + v0.to_string() + " along '" +
                                beta.display() + "' ends at " + orbit.back().to_string());
    orbit.pop_back();
    if (std::set<RationalPoint>(orbit.begin(), orbit.end()).size() != orbit.size())
        throw PreconditionError("not a periodic unit orbit: orbit points repeat before closing");

    std::vector<WalkVertex> vertices;
    for (const auto& pt : orbit)
        vertices.push_back({pt.to_string(), pt});
    std::vector<std::vector<std::size_t>> targets(fs.filter_count(), std::vector<std::size_t>(p));
    std::vector<std::vector<Complex>> weights(fs.filter_count(), std::vector<Complex>(p));
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t i = 0; i < fs.filter_count(); ++i) {
            const bool on_cycle = static_cast<Letter>(i) == beta[k];
            targets[i][k] = on_cycle ? (k + 1) % p : k;
            weights[i][k] = on_cycle ? Complex{1.0, 0.0} : Complex{};
        }
    WalkGraph g(std::move(vertices), std::move(targets), std::move(weights));
    g.set_reversing(true);
    return g;
}

} // namespace cuntz
