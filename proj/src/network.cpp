// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "troprelu/layer_abs.hpp"

namespace troprelu {

Network::Network(std::size_t inputs, std::vector<DenseLayer> layers) : inputs_(inputs), layers_(std::move(layers)) {
    require(inputs_ > 0, ErrorCode::invalid_argument, "network needs at least one input");
    std::size_t prev = inputs_;
    for (const DenseLayer& l : layers_) {
        require(l.weights.cols() == prev, ErrorCode::dimension_mismatch, "layer weight columns differ from its input");
        require(l.weights.rows() == l.bias.size() && !l.bias.empty(), ErrorCode::dimension_mismatch,
                "layer weight rows differ from its bias");
        prev = l.bias.size();
    }
}

Network::Trace Network::trace(const Point& x) const {
    require(x.size() == inputs_, ErrorCode::dimension_mismatch, "trace: input dimension");
    Trace t;
    t.pre.push_back(x);
    t.post.push_back(x);
    for (const DenseLayer& l : layers_) {
        const Point& in = t.post.back();
        Point pre(l.bias);
        for (std::size_t i = 0; i < pre.size(); ++i) {
            for (std::size_t j = 0; j < in.size(); ++j) {
                pre[i] += l.weights(i, j) * in[j];
            }
        }
        Point post = pre;
        if (l.relu) {
            for (double& v : post) {
                v = std::max(0.0, v);
            }
        }
        t.pre.push_back(std::move(pre));
        t.post.push_back(std::move(post));
    }
    return t;
}

Point Network::evaluate(const Point& x) const { return trace(x).post.back(); }

const char* to_string(ChainMode m) {
    switch (m) {
    case ChainMode::box: return "box";
    case ChainMode::zone: return "zone";
    case ChainMode::external: return "external";
    }
    return "?";
}

const char* to_string(Domain d) { return d == Domain::zone ? "zone" : "octagon"; }
const char* to_string(Track t) { return t == Track::io ? "io" : "all"; }

std::string var_name(const VarRef& v, std::size_t num_layers) {
    const std::string idx = std::to_string(v.neuron + 1);
    if (v.layer == 0) {
        return "x" + idx;
    }
    if (v.pre) {
        return "pre" + std::to_string(v.layer) + "_" + idx;
    }
    if (v.layer == num_layers) {
        return "y" + idx;
    }
    return "n" + std::to_string(v.layer) + "_" + idx;
}

std::optional<std::size_t> AnalysisResult::index_of(const VarRef& v) const {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - vars.begin());
}

namespace {

Point project_refs(const std::vector<VarRef>& refs, const Network::Trace& t) {
    Point p;
    p.reserve(refs.size());
    for (const VarRef& v : refs) {
        p.push_back(v.pre ? t.pre.at(v.layer).at(v.neuron) : t.post.at(v.layer).at(v.neuron));
    }
    return p;
}

} // namespace

Point AnalysisResult::project_trace(const Network::Trace& t) const { return project_refs(vars, t); }
Point AnalysisResult::project_external_trace(const Network::Trace& t) const { return project_refs(external_vars, t); }

TropInternal relu_internal(const TropInternal& hull, std::span<const std::size_t> coords, double eps) {
    std::vector<Point> gens = hull.generators();
    for (std::size_t k : coords) {
        require(k < hull.dim(), ErrorCode::bad_index, "relu_internal: coordinate out of range");
    }
    for (Point& g : gens) {
        for (std::size_t k : coords) {
            g[k] = std::max(0.0, g[k]);
        }
    }
    return extreme_filter(TropInternal(hull.dim(), std::move(gens)), eps);
}

TropExternal relu_external(const TropExternal& ext, std::span<const std::size_t> h_dims,
                           std::span<const std::size_t> y_dims, std::span<const Interval> h_bounds) {
    require(h_dims.size() == y_dims.size() && h_dims.size() == h_bounds.size(), ErrorCode::dimension_mismatch,
            "relu_external: h, y and bounds must pair up");
    TropExternal r = ext;
    for (std::size_t t = 0; t < h_dims.size(); ++t) {
        require(h_dims[t] < ext.dim() && y_dims[t] < ext.dim(), ErrorCode::bad_index,
                "relu_external: dimension out of range");
        const std::size_t h = h_dims[t] + 1;
        const std::size_t y = y_dims[t] + 1;
        // max(0, h) <= y
        TropRow below = TropRow::empty(ext.dim());
        below.lhs[0] = MaxPlus::one();
        below.lhs[h] = MaxPlus::one();
        below.rhs[y] = MaxPlus::one();
        r.add(std::move(below));
        // y <= max(0, h)
        TropRow above = TropRow::empty(ext.dim());
        above.lhs[y] = MaxPlus::one();
        above.rhs[0] = MaxPlus::one();
        above.rhs[h] = MaxPlus::one();
        r.add(std::move(above));
        // y - h <= -min(0, hlo)
        TropRow slope = TropRow::empty(ext.dim());
        slope.lhs[y] = MaxPlus::one();
        slope.rhs[h] = MaxPlus(-std::min(0.0, h_bounds[t].lo));
        r.add(std::move(slope));
        // y <= max(0, hhi)
        TropRow cap = TropRow::empty(ext.dim());
        cap.lhs[y] = MaxPlus::one();
        cap.rhs[0] = MaxPlus(std::max(0.0, h_bounds[t].hi));
        r.add(std::move(cap));
    }
    return r;
}

OctDbm relu_octagon(const OctDbm& o, std::span<const std::size_t> coords) {
    const std::size_t n = o.dim();
    const std::size_t k = coords.size();
    std::vector<std::size_t> ident(n);
    std::iota(ident.begin(), ident.end(), 0);
    OctDbm r = oct_embed(o, n + k, ident);

    // Upper bounds of s_a v_a + s_b v_b and of s v over the closed input octagon.
    auto slot = [&](int s, std::size_t v) { return s > 0 ? o.pos(v) : o.neg(v); };
    auto ub2 = [&](int sa, std::size_t a, int sb, std::size_t b) { return o(slot(sa, a), o.bar(slot(sb, b))); };
    auto ub1 = [&](int s, std::size_t a) { return o(slot(s, a), o.bar(slot(s, a))) / 2; };
    auto rslot = [&](int s, std::size_t v) { return s > 0 ? r.pos(v) : r.neg(v); };
    // Tightens s_a w_a + s_b w_b <= c in the result.
    auto put2 = [&](int sa, std::size_t a, int sb, std::size_t b, double c) {
        r.tighten(rslot(sa, a), r.bar(rslot(sb, b)), c);
    };

    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t h = coords[t];
        require(h < n, ErrorCode::bad_index, "relu_octagon: coordinate out of range");
        const std::size_t y = n + t;
        const double h_hi = ub1(1, h);
        const double h_lo = -ub1(-1, h);
        r.tighten_upper(y, std::max(0.0, h_hi));
        r.tighten_lower(y, std::max(0.0, h_lo));
        for (std::size_t v = 0; v < n; ++v) {
            for (int s : {1, -1}) {
                // y + s v = max(h + s v, s v)
                put2(1, y, s, v, std::max(ub2(1, h, s, v), ub1(s, v)));
                put2(-1, y, -s, v, std::min(ub2(-1, h, -s, v), ub1(-s, v)));
            }
        }
    }
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) {
                continue;
            }
            const std::size_t ha = coords[a];
            const std::size_t hb = coords[b];
            const std::size_t ya = n + a;
            const std::size_t yb = n + b;
            // y_a + y_b = max(h_a + h_b, h_a, h_b, 0)
            put2(1, ya, 1, yb, std::max({ub2(1, ha, 1, hb), ub1(1, ha), ub1(1, hb), 0.0}));
            put2(-1, ya, -1, yb, std::min({ub2(-1, ha, -1, hb), ub1(-1, ha), ub1(-1, hb), 0.0}));
            // y_a - y_b = min(max(h_a - h_b, -h_b), max(h_a, 0))
            put2(1, ya, -1, yb, std::min(std::max(ub2(1, ha, -1, hb), ub1(-1, hb)), std::max(ub1(1, ha), 0.0)));
        }
    }
    auto closed = oct_close(std::move(r));
    require(closed.has_value(), ErrorCode::empty_abstraction, "relu_octagon: empty result");
    return *closed;
}

namespace {

Interval hull_of(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Dbm close_or_throw(Dbm d, const char* what) {
    auto c = dbm_close(std::move(d));
    require(c.has_value(), ErrorCode::empty_abstraction, what);
    return *c;
}

OctDbm close_or_throw(OctDbm o, const char* what) {
    auto c = oct_close(std::move(o));
    require(c.has_value(), ErrorCode::empty_abstraction, what);
    return *c;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
    std::vector<std::size_t> r(to - from);
    std::iota(r.begin(), r.end(), from);
    return r;
}

Interval padded(Interval iv) {
    const double pad = 1e-6 * iv.width();
    return {iv.lo - pad, iv.hi + pad};
}

void meet_domains(Dbm& z, OctDbm& o) {
    auto o2 = oct_intersect(o, OctDbm::from_zone(z));
    require(o2.has_value(), ErrorCode::empty_abstraction, "octagon meet is empty");
    o = std::move(*o2);
    auto z2 = dbm_intersect(z, oct_zone_part(o));
    require(z2.has_value(), ErrorCode::empty_abstraction, "zone meet is empty");
    z = std::move(*z2);
}

} // namespace

AnalysisResult analyze(const Network& net, const Box& input_box, const AnalysisOptions& opts) {
    const std::size_t m = net.inputs();
    require(input_box.size() == m, ErrorCode::dimension_mismatch, "analyze: input box dimension");
    for (const Interval& iv : input_box.dims) {
        require(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi, ErrorCode::invalid_argument,
                "analyze: input box must be finite and non-empty");
    }
    const bool octagon = opts.domain == Domain::octagon;
    const bool subdivided = opts.subdivision.has_value();
    if (subdivided) {
        require(opts.subdivision->dims() == m, ErrorCode::dimension_mismatch, "analyze: grid dimension");
    }
    const std::size_t num_layers = net.layers().size();

    AnalysisResult res;
    for (std::size_t j = 0; j < m; ++j) {
        res.vars.push_back({0, j, false});
    }
    Dbm zone = close_or_throw(Dbm::from_box(input_box), "input box is empty");
    std::optional<OctDbm> oct;
    if (octagon) {
        oct = OctDbm::from_box(input_box);
    }
    TropInternal hull = zone_to_internal(zone, opts.eps);
    res.bounds.push_back({input_box.dims, input_box.dims});

    const bool external = opts.mode == ChainMode::external;
    TropExternal ext(m);
    std::vector<VarRef> ext_vars = res.vars;

    for (std::size_t l = 1; l <= num_layers; ++l) {
        const DenseLayer& layer = net.layers()[l - 1];
        const std::size_t in = net.width(l - 1);
        const std::size_t out = net.width(l);
        const std::size_t nv = res.vars.size();
        const std::size_t dim = nv + out;
        const std::vector<std::size_t> prior_map = range(0, nv);
        std::vector<std::size_t> layer_map = range(nv - in, nv);
        for (std::size_t i = 0; i < out; ++i) {
            layer_map.push_back(nv + i);
        }
        const std::vector<std::size_t> pre_coords = range(nv, dim);

        Box current;
        for (std::size_t j = nv - in; j < nv; ++j) {
            Interval iv{zone.lower(j), zone.upper(j)};
            if (oct) {
                iv.lo = std::max(iv.lo, oct->lower(j));
                iv.hi = std::min(iv.hi, oct->upper(j));
            }
            current.dims.push_back(iv);
        }

        const bool split_here = l == 1 && subdivided;
        std::vector<Box> cells{current};
        if (split_here) {
            cells = opts.subdivision->cells(opts.subdivision_config.cell_budget);
            res.cells = cells.size();
        }

        std::vector<std::size_t> keep = opts.track == Track::all ? range(0, nv) : range(0, m);
        const std::size_t kept_prior = keep.size();
        for (std::size_t c : pre_coords) {
            keep.push_back(c);
        }
        std::vector<std::size_t> keep_oct(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(kept_prior));
        for (std::size_t i = 0; i < out; ++i) {
            keep_oct.push_back(layer.relu ? dim + i : nv + i);
        }

        std::vector<Point> gens;
        std::optional<OctDbm> oct_join_acc;
        std::optional<Dbm> zone_join_acc;
        std::vector<Interval> pre_bounds;

        for (const Box& cell : cells) {
            const AffineLayer affine{layer.weights, layer.bias, cell};
            const ZoneAbsConstants k = zone_constants(affine);

            Dbm prior = split_here ? Dbm::from_box(cell)
                                   : (opts.mode == ChainMode::box ? dbm_box_only(zone) : zone);
            auto joined = dbm_intersect(dbm_embed(prior, dim, prior_map), dbm_embed(zone_dbm(k), dim, layer_map));
            require(joined.has_value(), ErrorCode::empty_abstraction, "layer " + std::to_string(l) + " is empty");
            Dbm w = *joined;

            std::optional<OctDbm> wo;
            if (octagon) {
                OctDbm oprior = split_here ? OctDbm::from_box(cell)
                                           : (opts.mode == ChainMode::box ? oct_box_only(*oct) : *oct);
                auto ojoined = oct_intersect(oct_embed(oprior, dim, prior_map),
                                             oct_embed(oct_dbm(oct_constants(affine)), dim, layer_map));
                require(ojoined.has_value(), ErrorCode::empty_abstraction,
                        "layer " + std::to_string(l) + " octagon is empty");
                wo = *ojoined;
                if (opts.mode != ChainMode::box) {
                    meet_domains(w, *wo);
                }
            }

            TropInternal g;
            if (opts.mode == ChainMode::box) {
                g = zone_internal(k, opts.eps);
                if (nv > in) {
                    std::vector<Interval> ranges;
                    for (std::size_t v = 0; v < nv - in; ++v) {
                        ranges.push_back(padded({prior.lower(v), prior.upper(v)}));
                    }
                    g = extreme_filter(emb_internal_box(g, ranges, range(0, nv - in)), opts.eps);
                }
            } else {
                g = zone_to_internal(w, opts.eps);
            }

            std::vector<Interval> cell_pre;
            for (std::size_t c : pre_coords) {
                Interval iv{w.lower(c), w.upper(c)};
                if (wo) {
                    iv.lo = std::max(iv.lo, wo->lower(c));
                    iv.hi = std::min(iv.hi, wo->upper(c));
                }
                cell_pre.push_back(iv);
            }
            if (pre_bounds.empty()) {
                pre_bounds = cell_pre;
            } else {
                for (std::size_t i = 0; i < out; ++i) {
                    pre_bounds[i] = hull_of(pre_bounds[i], cell_pre[i]);
                }
            }

            if (layer.relu) {
                g = relu_internal(g, pre_coords, opts.eps);
            }
            const TropInternal part = proj_internal(g, keep, opts.eps);
            gens.insert(gens.end(), part.generators().begin(), part.generators().end());

            if (wo) {
                const OctDbm after = layer.relu ? relu_octagon(*wo, pre_coords) : *wo;
                OctDbm projected = oct_project(after, keep_oct);
                oct_join_acc = oct_join_acc ? oct_join(*oct_join_acc, projected) : projected;
            }
            if (opts.keep_layer_zones) {
                zone_join_acc = zone_join_acc ? dbm_join(*zone_join_acc, w) : w;
            }
        }

        std::vector<VarRef> next_vars;
        for (std::size_t v : range(0, kept_prior)) {
            next_vars.push_back(res.vars[v]);
        }
        for (std::size_t i = 0; i < out; ++i) {
            next_vars.push_back({l, i, false});
        }

        if (opts.keep_layer_zones) {
            std::vector<VarRef> zvars = res.vars;
            for (std::size_t i = 0; i < out; ++i) {
                zvars.push_back({l, i, true});
            }
            res.layer_zones.push_back({std::move(zvars), *zone_join_acc});
        }

        if (external) {
            const AffineLayer whole{layer.weights, layer.bias, current};
            TropExternal rows = zone_external(zone_constants(whole));
            if (split_here) {
                rows = intersect_external(rows, subdivide_constraints(whole, *opts.subdivision,
                                                                      opts.subdivision_config));
            }
            const std::size_t offset = ext_vars.size() - in;
            ext = intersect_external(emb_external(ext, out, ext.dim()), emb_external(rows, offset, 0));
            for (std::size_t i = 0; i < out; ++i) {
                ext_vars.push_back({l, i, true});
            }
            const std::size_t pre_start = ext.dim() - out;
            ext = emb_external(ext, out, ext.dim());
            for (std::size_t i = 0; i < out; ++i) {
                ext_vars.push_back({l, i, false});
            }
            const std::vector<std::size_t> hs = range(pre_start, pre_start + out);
            const std::vector<std::size_t> ys = range(pre_start + out, pre_start + 2 * out);
            if (layer.relu) {
                ext = relu_external(ext, hs, ys, pre_bounds);
            } else {
                for (std::size_t i = 0; i < out; ++i) {
                    for (bool up : {true, false}) {
                        TropRow row = TropRow::empty(ext.dim());
                        row.lhs[(up ? hs[i] : ys[i]) + 1] = MaxPlus::one();
                        row.rhs[(up ? ys[i] : hs[i]) + 1] = MaxPlus::one();
                        ext.add(std::move(row));
                    }
                }
            }
        }

        hull = extreme_filter(TropInternal(next_vars.size(), std::move(gens)), opts.eps);
        zone = close_or_throw(internal_to_zone(hull), "enclosing zone is empty");
        if (oct_join_acc) {
            oct = close_or_throw(*oct_join_acc, "octagon is empty");
            meet_domains(zone, *oct);
        }
        res.vars = std::move(next_vars);
        res.generator_counts.push_back(hull.size());

        LayerBounds lb;
        lb.pre = pre_bounds;
        for (std::size_t i = 0; i < out; ++i) {
            const std::size_t v = res.vars.size() - out + i;
            lb.post.push_back({zone.lower(v), zone.upper(v)});
        }
        res.bounds.push_back(std::move(lb));
    }

    res.polyhedron = std::move(hull);
    res.zone = std::move(zone);
    res.octagon = std::move(oct);
    if (external) {
        res.external = std::move(ext);
        res.external_vars = std::move(ext_vars);
    }
    return res;
}

} // namespace troprelu
