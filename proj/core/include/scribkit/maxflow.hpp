#pragma once

#include <vector>

namespace scribkit {

// Dinic's max-flow on a graph with implicit source and sink terminals.
// Capacities may be +infinity for hard terminal links.
class MaxFlowGraph {
public:
    explicit MaxFlowGraph(int node_count);

    int node_count() const { return n_; }

    // Adds to the capacities of source->node and node->sink.
    void add_terminal_edges(int node, double cap_source, double cap_sink);
    void add_edge(int from, int to, double cap_forward, double cap_backward);

    // Returns the max-flow value, equal to the min-cut capacity.
    double solve();

    // After solve(): true if the node stays reachable from the source in the
    // residual graph.
    bool in_source_set(int node) const;

private:
    struct Arc {
        int to;
        int rev;
        double cap;
    };

    void add_arc_pair(int from, int to, double cap_forward, double cap_backward);
    bool build_levels();
    double push(int u, double limit);

    int n_;
    int source_;
    int sink_;
    std::vector<std::vector<Arc>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;
    std::vector<char> source_side_;
    bool solved_ = false;
};

}  // namespace scribkit
