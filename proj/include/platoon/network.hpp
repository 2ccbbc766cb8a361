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

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace platoon {

using NodeId = std::string;
using EdgeIndex = std::size_t;

/// Invalid road network; `edge` is set when a specific edge is at fault.
class NetworkError : public std::invalid_argument
{
public:
    explicit NetworkError(const std::string& what, std::optional<std::size_t> edge = std::nullopt)
        : std::invalid_argument(what), edge(edge)
    {
    }

    std::optional<std::size_t> edge;
};

/// A directed road segment. Lengths are meters.
struct Edge
{
    NodeId tail;
    NodeId head;
    double length = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Unique root-to-destination path, stored as edge indices in travel order.
struct Route
{
    NodeId destination;
    std::vector<EdgeIndex> edges;
    double length = 0.0;
};

/**
 * Directed tree road network rooted at the common origin.
 *
 * Construction validates the tree shape: every non-root node has exactly one
 * incoming edge, the root has in-degree 0 and out-degree 1, every node is
 * reachable from the root and all lengths are finite and strictly positive.
 * Instances are immutable afterwards.
 */
class RoadNetwork
{
public:
    /// Throws NetworkError naming the offending node or edge.
    RoadNetwork(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId root);

    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const NodeId& root() const noexcept { return root_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool has_node(std::string_view node) const;

    /// Index of the edge (tail, head); throws std::out_of_range if absent.
    EdgeIndex edge_index(std::string_view tail, std::string_view head) const;

    /// Edge lengths indexed by EdgeIndex.
    const Eigen::VectorXd& lengths() const noexcept { return lengths_; }

    friend bool operator==(const RoadNetwork& a, const RoadNetwork& b)
    {
        return a.root_ == b.root_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    friend Route route_to(const RoadNetwork& network, std::string_view destination);

    std::vector<NodeId> nodes_;
    std::vector<Edge> edges_;
    NodeId root_;
    Eigen::VectorXd lengths_;
    std::unordered_map<NodeId, std::size_t> node_pos_;
    // incoming edge of each non-root node
    std::unordered_map<NodeId, EdgeIndex> parent_edge_;
};

RoadNetwork build_network(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId root);

/// The thirteen-node evaluation network (preset `paper-fig3`).
RoadNetwork fig3_network();

/// Throws std::invalid_argument for unknown nodes or destination == root.
Route route_to(const RoadNetwork& network, std::string_view destination);

/// P(M): sorted union of the route edge sets of the given destinations.
std::vector<EdgeIndex> edges_of(const RoadNetwork& network, std::span<const NodeId> destinations);

/// n(e, M): how many of the given destinations' routes traverse edge e.
std::size_t count_on_edge(const RoadNetwork& network, EdgeIndex e, std::span<const NodeId> destinations);

/**
 * Route incidence matrix: entry (k, e) is 1 when route k traverses edge e.
 * Per-edge counts for a vehicle subset M are then `incidence.transpose() * indicator(M)`.
 */
Eigen::MatrixXd route_incidence(const RoadNetwork& network, std::span<const Route> routes);

} // namespace platoon
