#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace cuntz::detail {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Strongly connected components (iterative Tarjan). Returns the component id of
/// every vertex; ids are in reverse topological order of the condensation.
inline std::vector<std::size_t> strongly_connected_components(const Adjacency& adj, std::size_t& count)
{
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = adj.size();
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call; // (vertex, next edge)
    std::size_t next_index = 0;
    count = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge == 0 && index[v] == unvisited) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (edge < adj[v].size()) {
                const std::size_t w = adj[v][edge++];
                if (index[w] == unvisited)
                    call.emplace_back(w, 0);
                else if (on_stack[w])
                    low[v] = std::min(low[v], index[w]);
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
            const std::size_t done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

/// Vertices reachable from `start` (inclusive).
inline std::vector<bool> reachable_from(const Adjacency& adj, std::size_t start)
{
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::size_t> todo{start};
    seen[start] = true;
    while (!todo.empty()) {
        const std::size_t v = todo.back();
        todo.pop_back();
        for (std::size_t w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

} // namespace cuntz::detail
