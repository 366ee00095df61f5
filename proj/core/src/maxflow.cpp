#include "scribkit/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "scribkit/error.hpp"

namespace scribkit {

MaxFlowGraph::MaxFlowGraph(int node_count)
    : n_(node_count), source_(node_count), sink_(node_count + 1),
      adj_(static_cast<std::size_t>(node_count) + 2) {
    if (node_count < 0) {
        throw ParameterError("MaxFlowGraph: negative node count");
    }
}

void MaxFlowGraph::add_arc_pair(int from, int to, double cap_forward, double cap_backward) {
    if (!(cap_forward >= 0.0) || !(cap_backward >= 0.0)) {
        throw ParameterError("MaxFlowGraph: capacities must be non-negative");
    }
    auto& a = adj_[static_cast<std::size_t>(from)];
    auto& b = adj_[static_cast<std::size_t>(to)];
    a.push_back({to, static_cast<int>(b.size()), cap_forward});
    b.push_back({from, static_cast<int>(a.size()) - 1, cap_backward});
    solved_ = false;
}

void MaxFlowGraph::add_terminal_edges(int node, double cap_source, double cap_sink) {
    if (node < 0 || node >= n_) {
        throw ParameterError("MaxFlowGraph: node index out of range");
    }
    if (cap_source > 0.0) {
        add_arc_pair(source_, node, cap_source, 0.0);
    }
    if (cap_sink > 0.0) {
        add_arc_pair(node, sink_, cap_sink, 0.0);
    }
}

void MaxFlowGraph::add_edge(int from, int to, double cap_forward, double cap_backward) {
    if (from < 0 || from >= n_ || to < 0 || to >= n_ || from == to) {
        throw ParameterError("MaxFlowGraph: invalid edge endpoints");
    }
    add_arc_pair(from, to, cap_forward, cap_backward);
}

bool MaxFlowGraph::build_levels() {
    level_.assign(adj_.size(), -1);
    std::deque<int> q;
    level_[static_cast<std::size_t>(source_)] = 0;
    q.push_back(source_);
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (const Arc& e : adj_[static_cast<std::size_t>(u)]) {
            if (e.cap > 0.0 && level_[static_cast<std::size_t>(e.to)] < 0) {
                level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(u)] + 1;
                q.push_back(e.to);
            }
        }
    }
    return level_[static_cast<std::size_t>(sink_)] >= 0;
}

double MaxFlowGraph::push(int u, double limit) {
    if (u == sink_) {
        return limit;
    }
    auto& arcs = adj_[static_cast<std::size_t>(u)];
    for (std::size_t& i = it_[static_cast<std::size_t>(u)]; i < arcs.size(); ++i) {
        Arc& e = arcs[i];
        if (e.cap <= 0.0 ||
            level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(u)] + 1) {
            continue;
        }
        const double got = push(e.to, std::min(limit, e.cap));
        if (got > 0.0) {
            e.cap -= got;
            adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += got;
            return got;
        }
    }
    return 0.0;
}

double MaxFlowGraph::solve() {
    double flow = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    while (build_levels()) {
        it_.assign(adj_.size(), 0);
        while (true) {
            const double f = push(source_, inf);
            if (f <= 0.0) {
                break;
            }
            if (std::isinf(f)) {
                throw NumericError("MaxFlowGraph: infinite-capacity source-sink path");
            }
            flow += f;
        }
    }
    // build_levels() left the residual reachability from the last BFS.
    source_side_.assign(adj_.size(), 0);
    for (std::size_t v = 0; v < adj_.size(); ++v) {
        source_side_[v] = level_[v] >= 0 ? 1 : 0;
    }
    solved_ = true;
    return flow;
}

bool MaxFlowGraph::in_source_set(int node) const {
    if (!solved_) {
        throw ParameterError("MaxFlowGraph: solve() has not been called");
    }
    return source_side_[static_cast<std::size_t>(node)] != 0;
}

}  // namespace scribkit
