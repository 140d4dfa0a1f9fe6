// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "troprelu/dbm.hpp"
#include "troprelu/subdivision.hpp"
#include "troprelu/tropical.hpp"

namespace troprelu {

struct DenseLayer {
    Matrix weights;  // outputs x inputs
    std::vector<double> bias;
    bool relu = true;
};

class Network {
  public:
    Network() = default;
    Network(std::size_t inputs, std::vector<DenseLayer> layers);

    [[nodiscard]] std::size_t inputs() const { return inputs_; }
    [[nodiscard]] std::size_t outputs() const { return layers_.empty() ? inputs_ : layers_.back().bias.size(); }
    [[nodiscard]] const std::vector<DenseLayer>& layers() const { return layers_; }
    // Neuron count of layer l; layer 0 is the input.
    [[nodiscard]] std::size_t width(std::size_t l) const { return l == 0 ? inputs_ : layers_[l - 1].bias.size(); }

    struct Trace {
        std::vector<Point> pre;   // pre[l] for l >= 1; pre[0] is the input
        std::vector<Point> post;  // post[0] is the input
    };
    [[nodiscard]] Trace trace(const Point& x) const;
    [[nodiscard]] Point evaluate(const Point& x) const;

  private:
    std::size_t inputs_{0};
    std::vector<DenseLayer> layers_;
};

enum class ChainMode { box, zone, external };
enum class Domain { zone, octagon };
enum class Track { io, all };

const char* to_string(ChainMode m);
const char* to_string(Domain d);
const char* to_string(Track t);

struct AnalysisOptions {
    ChainMode mode = ChainMode::zone;
    Domain domain = Domain::zone;
    Track track = Track::io;
    double eps = kDefaultEps;
    // Cuts of the input box; applied at the first layer.
    std::optional<SubdivisionGrid> subdivision;
    SubdivisionConfig subdivision_config;
    bool keep_layer_zones = false;
};

// A neuron value: layer 0 is the input, `pre` selects the value before activation.
struct VarRef {
    std::size_t layer{0};
    std::size_t neuron{0};
    bool pre = false;
    bool operator==(const VarRef&) const = default;
};

std::string var_name(const VarRef& v, std::size_t num_layers);

struct LayerBounds {
    std::vector<Interval> pre;
    std::vector<Interval> post;
};

struct LayerZone {
    std::vector<VarRef> vars;
    Dbm zone;
};

struct AnalysisResult {
    std::vector<VarRef> vars;  // coordinates of polyhedron, zone and octagon
    TropInternal polyhedron;
    Dbm zone;
    std::optional<OctDbm> octagon;
    std::vector<VarRef> external_vars;
    std::optional<TropExternal> external;
    std::vector<LayerBounds> bounds;      // bounds[0] is the input box
    std::vector<LayerZone> layer_zones;   // closed zone of (tracked, pre-activation) per layer
    std::size_t cells = 1;
    std::vector<std::size_t> generator_counts;  // per layer, after filtering

    [[nodiscard]] std::optional<std::size_t> index_of(const VarRef& v) const;
    // Coordinates of a concrete trace in the order of `vars`.
    [[nodiscard]] Point project_trace(const Network::Trace& t) const;
    [[nodiscard]] Point project_external_trace(const Network::Trace& t) const;
};

TropInternal relu_internal(const TropInternal& hull, std::span<const std::size_t> coords, double eps = kDefaultEps);
// Appends the rows of y = max(0, h) for each pair, with the zone rows implied by the bounds of h.
TropExternal relu_external(const TropExternal& ext, std::span<const std::size_t> h_dims,
                           std::span<const std::size_t> y_dims, std::span<const Interval> h_bounds);
// Octagon over the variables of `o` followed by one new variable max(0, v) per entry of `coords`.
OctDbm relu_octagon(const OctDbm& o, std::span<const std::size_t> coords);

AnalysisResult analyze(const Network& net, const Box& input_box, const AnalysisOptions& opts = {});

} // namespace troprelu
