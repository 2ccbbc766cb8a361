/*
 * Copyright 2026 The platoon-game Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "platoon/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace platoon {

namespace {

std::string describe(const Edge& e)
{
    return e.tail + "->" + e.head;
}

} // namespace

RoadNetwork::RoadNetwork(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId root)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), root_(std::move(root))
{
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        if (nodes_[k].empty())
            throw NetworkError("empty node id");
        if (!node_pos_.emplace(nodes_[k], k).second)
            throw NetworkError("duplicate node '" + nodes_[k] + "'");
    }
    if (!node_pos_.contains(root_))
        throw NetworkError("root '" + root_ + "' is not a node");

    std::size_t root_out = 0;
    lengths_.resize(static_cast<Eigen::Index>(edges_.size()));
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const Edge& e = edges_[k];
        if (!node_pos_.contains(e.tail) || !node_pos_.contains(e.head))
            throw NetworkError("edge " + describe(e) + " references an unknown node", k);
        if (!(std::isfinite(e.length) && e.length > 0.0))
            throw NetworkError("edge " + describe(e) + " must have a finite positive length", k);
        if (e.head == root_)
            throw NetworkError("edge " + describe(e) + " enters the root", k);
        if (!parent_edge_.emplace(e.head, k).second)
            throw NetworkError("edge " + describe(e) + " gives node '" + e.head + "' a second parent", k);
        if (e.tail == root_ && ++root_out > 1)
            throw NetworkError("edge " + describe(e) + " gives the root out-degree > 1", k);
        lengths_(static_cast<Eigen::Index>(k)) = e.length;
    }
    if (root_out != 1)
        throw NetworkError("root '" + root_ + "' must have exactly one outgoing edge");

    // One parent per non-root node; the graph is a tree iff every node walks up to the root.
    for (const NodeId& node : nodes_) {
        if (node == root_)
            continue;
        if (!parent_edge_.contains(node))
            throw NetworkError("node '" + node + "' is unreachable from the root");
        std::unordered_set<NodeId> seen{node};
        NodeId cur = node;
        while (cur != root_) {
            auto it = parent_edge_.find(cur);
            if (it == parent_edge_.end())
                throw NetworkError("node '" + node + "' is unreachable from the root");
            cur = edges_[it->second].tail;
            if (!seen.insert(cur).second)
                throw NetworkError("cycle through node '" + cur + "'", it->second);
        }
    }
}

bool RoadNetwork::has_node(std::string_view node) const
{
    return node_pos_.contains(NodeId(node));
}

EdgeIndex RoadNetwork::edge_index(std::string_view tail, std::string_view head) const
{
    auto it = parent_edge_.find(NodeId(head));
    if (it == parent_edge_.end() || edges_[it->second].tail != tail)
        throw std::out_of_range("no edge " + std::string(tail) + "->" + std::string(head));
    return it->second;
}

RoadNetwork build_network(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId root)
{
    return RoadNetwork(std::move(nodes), std::move(edges), std::move(root));
}

RoadNetwork fig3_network()
{
    std::vector<NodeId> nodes;
    for (int k = 1; k <= 13; ++k)
        nodes.push_back("v" + std::to_string(k));
    std::vector<Edge> edges{
        {"v1", "v2", 80000.0},   {"v2", "v3", 80000.0},  {"v3", "v4", 120000.0},
        {"v3", "v5", 160000.0},  {"v2", "v6", 80000.0},  {"v6", "v7", 80000.0},
        {"v6", "v8", 80000.0},   {"v8", "v9", 20000.0},  {"v8", "v10", 20000.0},
        {"v8", "v11", 24000.0},  {"v10", "v12", 24000.0}, {"v10", "v13", 24000.0},
    };
    return RoadNetwork(std::move(nodes), std::move(edges), "v1");
}

Route route_to(const RoadNetwork& network, std::string_view destination)
{
    if (!network.has_node(destination))
        throw std::invalid_argument("unknown node '" + std::string(destination) + "'");
    if (destination == network.root())
        throw std::invalid_argument("destination equals the root '" + network.root() + "'");

    Route route{NodeId(destination), {}, 0.0};
    NodeId cur(destination);
    while (cur != network.root()) {
        EdgeIndex e = network.parent_edge_.at(cur);
        route.edges.push_back(e);
        cur = network.edges_[e].tail;
    }
    std::reverse(route.edges.begin(), route.edges.end());
    for (EdgeIndex e : route.edges)
        route.length += network.edges_[e].length;
    return route;
}

std::vector<EdgeIndex> edges_of(const RoadNetwork& network, std::span<const NodeId> destinations)
{
    std::vector<EdgeIndex> out;
    for (const NodeId& d : destinations) {
        Route r = route_to(network, d);
        out.insert(out.end(), r.edges.begin(), r.edges.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t count_on_edge(const RoadNetwork& network, EdgeIndex e, std::span<const NodeId> destinations)
{
    if (e >= network.edge_count())
        throw std::out_of_range("unknown edge index " + std::to_string(e));
    std::size_t n = 0;
    for (const NodeId& d : destinations) {
        Route r = route_to(network, d);
        n += static_cast<std::size_t>(std::count(r.edges.begin(), r.edges.end(), e));
    }
    return n;
}

Eigen::MatrixXd route_incidence(const RoadNetwork& network, std::span<const Route> routes)
{
    Eigen::MatrixXd incidence =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(routes.size()),
                              static_cast<Eigen::Index>(network.edge_count()));
    for (std::size_t k = 0; k < routes.size(); ++k)
        for (EdgeIndex e : routes[k].edges)
            incidence(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(e)) = 1.0;
    return incidence;
}

} // namespace platoon
