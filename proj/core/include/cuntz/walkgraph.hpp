#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuntz/model.hpp"
#include "cuntz/numeric.hpp"
#include "cuntz/rational.hpp"
#include "cuntz/word.hpp"

namespace cuntz {

struct WalkVertex {
    std::string id;
    std::optional<RationalPoint> point;
};

/// Finite random walk (M, {g_i}, {nu_i}): V_i^* e_c = nu_i(c) e_{g_i(c)}.
///
/// The edge map is total; a zero weight marks an impossible transition and its
/// target carries no meaning.
class WalkGraph {
public:
    /// targets[i][c] = g_i(c) as a vertex index, weights[i][c] = nu_i(c).
    WalkGraph(std::vector<WalkVertex> vertices, std::vector<std::vector<std::size_t>> targets,
              std::vector<std::vector<Complex>> weights);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t alphabet_size() const { return targets_.size(); }
    const std::vector<WalkVertex>& vertices() const { return vertices_; }
    const WalkVertex& vertex(std::size_t c) const { return vertices_[c]; }

    std::size_t target(int letter, std::size_t c) const { return targets_[static_cast<std::size_t>(letter)][c]; }
    Complex weight(int letter, std::size_t c) const { return weights_[static_cast<std::size_t>(letter)][c]; }
    const std::vector<std::vector<std::size_t>>& targets() const { return targets_; }
    const std::vector<std::vector<Complex>>& weights() const { return weights_; }

    std::optional<std::size_t> find(std::string_view id) const;
    std::optional<std::size_t> find(const RationalPoint& point) const;

    /// Set by builders that can compute V_i e_{g_i(c)} = conj(nu_i(c)) e_c directly.
    std::optional<bool> reversing() const { return reversing_; }
    void set_reversing(std::optional<bool> value) { reversing_ = value; }

    /// max_c |sum_i |nu_i(c)|^2 - 1|
    double normalization_defect() const;

    /// Follows a word from c: endpoint and path weight nu_w(c).
    struct Path {
        std::size_t end;
        Complex weight;
    };
    Path follow(std::size_t c, const Word& w) const;

    friend bool operator==(const WalkGraph& a, const WalkGraph& b);

private:
    std::vector<WalkVertex> vertices_;
    std::vector<std::vector<std::size_t>> targets_;
    std::vector<std::vector<Complex>> weights_;
    std::optional<bool> reversing_;
};

struct WalkReport {
    bool normalized = false;
    bool irreducible = false;
    bool injective = false;
    bool separating = false;
    std::optional<bool> reversing;
    std::size_t sigma_fixed_dim = 0;
    bool simple = false;
    double normalization_defect = 0.0;
};

/// All structural properties of a normalized walk. Throws PreconditionError when
/// the walk is not normalized.
WalkReport analyze(const WalkGraph& g, const Tolerances& tol = default_tolerances);

bool is_irreducible(const WalkGraph& g, const Tolerances& tol = default_tolerances);
/// g_i is one-to-one on vertices where nu_i is nonzero, for every letter i.
bool is_injective(const WalkGraph& g, const Tolerances& tol = default_tolerances);
/// Decided on the ordered-pair product graph (diagonal included): separating iff no
/// off-diagonal pair reaches a pair that lies on a directed cycle.
bool is_separating(const WalkGraph& g, const Tolerances& tol = default_tolerances);
/// Dimension of {T : sum_i nu_i(c') conj(nu_i(c)) T_{g_i(c), g_i(c')} = T_{c,c'}}.
std::size_t sigma_fixed_dimension(const WalkGraph& g, const Tolerances& tol = default_tolerances);

struct CycleWord {
    Word word;
    Complex weight;
    std::size_t base = 0;
};

/// First-return words at c with nonzero weight, |w| <= max_length, length-lex ordered.
std::vector<CycleWord> enumerate_cycle_words(const WalkGraph& g, std::size_t c, std::size_t max_length,
                                             const Tolerances& tol = default_tolerances);

/// sum of |nu_w(t)|^2 over words reaching c for the first time with |w| <= max_length.
double first_passage_mass(const WalkGraph& g, std::size_t t, std::size_t c, std::size_t max_length,
                          const Tolerances& tol = default_tolerances);

/// True iff some nonempty suffix of w is a cycle word for c. Requires an injective walk.
bool ends_in_cycle_word(const WalkGraph& g, std::size_t c, const Word& w, const Tolerances& tol = default_tolerances);

/// Unique factorization w = w0 b1 ... bn into a word w0 not ending in a cycle word
/// and cycle words b_k for c. Requires an injective walk.
struct CycleDecomposition {
    Word head;
    std::vector<Word> cycles;
};
CycleDecomposition decompose_cycles(const WalkGraph& g, std::size_t c, const Word& w,
                                    const Tolerances& tol = default_tolerances);

/// Omega_c^(0): words of length <= max_length that do not end in a cycle word for c,
/// length-lex ordered, empty word first. Requires an injective walk.
std::vector<Word> enumerate_frame_words(const WalkGraph& g, std::size_t c, std::size_t max_length,
                                        const Tolerances& tol = default_tolerances);

/// Depth-first visit of every word of length <= max_length, prefixes before their
/// extensions. `visit(w, in_frame_set)` returns false to skip the extensions of w;
/// in_frame_set is true iff w does not end in a cycle word for c. Requires an
/// injective walk.
void visit_word_tree(const WalkGraph& g, std::size_t c, std::size_t max_length,
                     const std::function<bool(const Word&, bool)>& visit, const Tolerances& tol = default_tolerances);

/// Walk on the orbit v0, g_{b0}(v0), ... of a unit periodic spectral point with the
/// 0/1 weights of the periodic-point construction. Throws PreconditionError unless the
/// orbit closes along `beta` with |nu| = 1 at every step.
WalkGraph build_periodic_walk(const FilterSystem& fs, const RationalPoint& v0, const Word& beta,
                              const Tolerances& tol = default_tolerances);

} // namespace cuntz
