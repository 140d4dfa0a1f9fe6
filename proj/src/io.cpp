// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "troprelu/version.hpp"

namespace troprelu {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

class TokenStream {
  public:
    explicit TokenStream(std::vector<std::string_view> tokens) : tokens_(std::move(tokens)) {}

    double next_double(const char* what) {
        require(pos_ < tokens_.size(), ErrorCode::malformed, std::string("unexpected end of file reading ") + what);
        const std::string_view t = tokens_[pos_++];
        double v = 0;
        auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        require(ec == std::errc() && end == t.data() + t.size() && std::isfinite(v), ErrorCode::malformed,
                std::string("bad number '") + std::string(t) + "' reading " + what);
        return v;
    }

    std::size_t next_count(const char* what, bool allow_zero) {
        const double v = next_double(what);
        require(v == std::floor(v) && v >= (allow_zero ? 0 : 1) && v < 1e7, ErrorCode::malformed,
                std::string("bad ") + what);
        return static_cast<std::size_t>(v);
    }

    [[nodiscard]] std::size_t remaining() const { return tokens_.size() - pos_; }

  private:
    std::vector<std::string_view> tokens_;
    std::size_t pos_{0};
};

Box parse_box(const ordered_json& j, const char* what) {
    require(j.is_array(), ErrorCode::malformed, std::string(what) + " must be an array of [lo, hi] pairs");
    Box box;
    for (const auto& iv : j) {
        require(iv.is_array() && iv.size() == 2 && iv[0].is_number() && iv[1].is_number(), ErrorCode::malformed,
                std::string(what) + " entries must be [lo, hi] number pairs");
        const double lo = iv[0].get<double>();
        const double hi = iv[1].get<double>();
        require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, ErrorCode::malformed,
                std::string(what) + " entries need finite lo <= hi");
        box.dims.push_back({lo, hi});
    }
    return box;
}

std::vector<double> parse_numbers(const ordered_json& j, const std::string& what) {
    require(j.is_array(), ErrorCode::malformed, what + " must be an array of numbers");
    std::vector<double> v;
    for (const auto& x : j) {
        require(x.is_number(), ErrorCode::malformed, what + " must be an array of numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v + 0.0) : ordered_json(nullptr); }

ordered_json intervals_json(const std::vector<Interval>& ivs) {
    ordered_json a = ordered_json::array();
    for (const Interval& iv : ivs) {
        a.push_back({number_or_null(iv.lo), number_or_null(iv.hi)});
    }
    return a;
}

} // namespace

Network parse_sherlock_text(std::string_view text, bool strict) {
    std::vector<std::string_view> tokens;
    bool output_relu = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        const std::string_view body = trim(line);
        if (!body.empty() && body.front() == '#') {
            if (trim(body.substr(1)) == "output-relu") {
                output_relu = true;
            }
            continue;
        }
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
            }
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
                ++j;
            }
            if (j > i) {
                tokens.push_back(line.substr(i, j - i));
            }
            i = j;
        }
    }

    require(!tokens.empty(), ErrorCode::empty_input, "network file is empty");
    TokenStream ts(std::move(tokens));
    const std::size_t inputs = ts.next_count("input count", false);
    const std::size_t outputs = ts.next_count("output count", false);
    const std::size_t hidden = ts.next_count("hidden layer count", true);
    std::vector<std::size_t> sizes{inputs};
    for (std::size_t h = 0; h < hidden; ++h) {
        sizes.push_back(ts.next_count("hidden layer size", false));
    }
    sizes.push_back(outputs);

    std::vector<DenseLayer> layers;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        DenseLayer layer;
        layer.weights = Matrix(sizes[l], sizes[l - 1]);
        layer.bias.resize(sizes[l]);
        layer.relu = l + 1 < sizes.size() || output_relu;
        for (std::size_t i = 0; i < sizes[l]; ++i) {
            for (std::size_t j = 0; j < sizes[l - 1]; ++j) {
                layer.weights(i, j) = ts.next_double("weight");
            }
            layer.bias[i] = ts.next_double("bias");
        }
        layers.push_back(std::move(layer));
    }
    if (strict) {
        require(ts.remaining() == 0, ErrorCode::malformed,
                std::to_string(ts.remaining()) + " trailing token(s) after the last layer");
    }
    return Network(inputs, std::move(layers));
}

Network parse_sherlock(const std::string& path, bool strict) {
    try {
        return parse_sherlock_text(read_file(path), strict);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::io) {
            throw;
        }
        throw Error(e.code(), path + ": " + e.what());
    }
}

std::string serialize_sherlock(const Network& net) {
    std::ostringstream out;
    const auto& layers = net.layers();
    require(!layers.empty(), ErrorCode::invalid_argument, "serialize_sherlock: network has no layers");
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        require(layers[l].relu, ErrorCode::invalid_argument, "serialize_sherlock: hidden layers must use ReLU");
    }
    if (layers.back().relu) {
        out << "# output-relu\n";
    }
    out << net.inputs() << "\n" << net.outputs() << "\n" << layers.size() - 1 << "\n";
    for (std::size_t l = 1; l < layers.size(); ++l) {
        out << net.width(l) << "\n";
    }
    for (const DenseLayer& layer : layers) {
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            for (std::size_t j = 0; j < layer.weights.cols(); ++j) {
                out << format_double(layer.weights(i, j)) << "\n";
            }
            out << format_double(layer.bias[i]) << "\n";
        }
    }
    return out.str();
}

SpecFile parse_spec_text(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed, std::string("spec is not valid JSON: ") + e.what());
    }
    require(j.is_object() && j.contains("input_box"), ErrorCode::malformed, "spec needs an \"input_box\" member");
    SpecFile spec;
    spec.input_box = parse_box(j["input_box"], "input_box");
    require(spec.input_box.size() > 0, ErrorCode::malformed, "input_box is empty");
    if (j.contains("assertions")) {
        require(j["assertions"].is_array(), ErrorCode::malformed, "\"assertions\" must be an array");
        std::size_t index = 0;
        for (const auto& a : j["assertions"]) {
            ++index;
            require(a.is_object(), ErrorCode::malformed, "assertion entries must be objects");
            LinearAssertion la;
            la.name = a.contains("name") && a["name"].is_string() ? a["name"].get<std::string>()
                                                                  : "assertion" + std::to_string(index);
            require(a.contains("in_coeffs") && a.contains("out_coeffs"), ErrorCode::malformed,
                    "assertion '" + la.name + "' needs in_coeffs and out_coeffs");
            la.in_coeffs = parse_numbers(a["in_coeffs"], "in_coeffs");
            la.out_coeffs = parse_numbers(a["out_coeffs"], "out_coeffs");
            if (a.contains("const")) {
                require(a["const"].is_number(), ErrorCode::malformed, "const must be a number");
                la.constant = a["const"].get<double>();
            }
            if (a.contains("restrict_box")) {
                la.restrict_box = parse_box(a["restrict_box"], "restrict_box");
            }
            spec.assertions.push_back(std::move(la));
        }
    }
    return spec;
}

SpecFile parse_spec(const std::string& path) {
    try {
        return parse_spec_text(read_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::io) {
            throw;
        }
        throw Error(e.code(), path + ": " + e.what());
    }
}

SubdivisionGrid parse_subdivision(std::string_view text, const Box& box) {
    std::vector<std::size_t> counts(box.size(), 1);
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view item = trim(text.substr(start, end - start));
        start = end + 1;
        if (item.empty()) {
            continue;
        }
        const auto colon = item.find(':');
        require(colon != std::string_view::npos, ErrorCode::invalid_argument,
                "subdivision entry '" + std::string(item) + "' must look like x1:4");
        std::string_view var = trim(item.substr(0, colon));
        std::string_view num = trim(item.substr(colon + 1));
        if (!var.empty() && var.front() == 'x') {
            var.remove_prefix(1);
        }
        std::size_t index = 0;
        std::size_t cells = 0;
        auto r1 = std::from_chars(var.data(), var.data() + var.size(), index);
        auto r2 = std::from_chars(num.data(), num.data() + num.size(), cells);
        require(r1.ec == std::errc() && r1.ptr == var.data() + var.size() && r2.ec == std::errc() &&
                    r2.ptr == num.data() + num.size(),
                ErrorCode::invalid_argument, "subdivision entry '" + std::string(item) + "' must look like x1:4");
        require(index >= 1 && index <= box.size(), ErrorCode::bad_index,
                "subdivision names input " + std::to_string(index) + " of " + std::to_string(box.size()));
        require(cells >= 1, ErrorCode::invalid_argument, "subdivision needs at least one cell");
        counts[index - 1] = cells;
    }
    return SubdivisionGrid::uniform(box, counts);
}

std::size_t RunOutcome::unknown_count() const {
    return static_cast<std::size_t>(std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) {
        return v.status == VerdictStatus::unknown;
    }));
}

RunOutcome run_analysis(const Network& net, const SpecFile& spec, const AnalysisOptions& opts) {
    require(spec.input_box.size() == net.inputs(), ErrorCode::dimension_mismatch,
            "spec input box has " + std::to_string(spec.input_box.size()) + " dimensions, network has " +
                std::to_string(net.inputs()) + " inputs");
    for (const LinearAssertion& a : spec.assertions) {
        a.validate(net.inputs(), net.outputs());
    }
    RunOutcome run;
    run.network = net;
    run.spec = spec;
    run.options = opts;
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    run.result = analyze(net, spec.input_box, opts);
    const auto t1 = clock::now();
    for (const LinearAssertion& a : spec.assertions) {
        if (opts.subdivision) {
            run.verdicts.push_back(check_with_subdivision(a, net, spec.input_box, *opts.subdivision, opts));
        } else {
            run.verdicts.push_back(check(a, run.result, opts.eps));
        }
    }
    const auto t2 = clock::now();
    run.analysis_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    run.check_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    return run;
}

std::string report_json(const RunOutcome& run, bool with_timings) {
    const Network& net = run.network;
    const std::size_t layers = net.layers().size();
    const AnalysisResult& r = run.result;
    ordered_json j;
    j["tool"] = "troprelu";
    j["version"] = kVersion;

    ordered_json jn;
    jn["path"] = run.network_path;
    jn["inputs"] = net.inputs();
    jn["outputs"] = net.outputs();
    ordered_json sizes = ordered_json::array();
    for (std::size_t l = 0; l <= layers; ++l) {
        sizes.push_back(net.width(l));
    }
    jn["layer_sizes"] = sizes;
    jn["output_relu"] = !net.layers().empty() && net.layers().back().relu;
    j["network"] = jn;

    ordered_json jc;
    jc["mode"] = to_string(run.options.mode);
    jc["domain"] = to_string(run.options.domain);
    jc["track"] = to_string(run.options.track);
    jc["eps"] = run.options.eps;
    if (run.options.subdivision) {
        ordered_json cells = ordered_json::array();
        for (std::size_t i = 0; i < run.options.subdivision->dims(); ++i) {
            cells.push_back(run.options.subdivision->cells_along(i));
        }
        jc["subdivision"] = cells;
    } else {
        jc["subdivision"] = nullptr;
    }
    jc["cell_budget"] = run.options.subdivision_config.cell_budget;
    j["config"] = jc;

    j["input_box"] = intervals_json(run.spec.input_box.dims);

    ordered_json jb = ordered_json::array();
    for (std::size_t l = 1; l < r.bounds.size(); ++l) {
        ordered_json e;
        e["layer"] = l;
        e["pre"] = intervals_json(r.bounds[l].pre);
        e["post"] = intervals_json(r.bounds[l].post);
        jb.push_back(e);
    }
    j["bounds"] = jb;

    ordered_json jo = ordered_json::array();
    const auto& out = r.bounds.back().post;
    for (std::size_t i = 0; i < out.size(); ++i) {
        ordered_json e;
        e["name"] = var_name({layers, i, false}, layers);
        e["lo"] = number_or_null(out[i].lo);
        e["hi"] = number_or_null(out[i].hi);
        jo.push_back(e);
    }
    j["outputs"] = jo;

    ordered_json vars = ordered_json::array();
    for (const VarRef& v : r.vars) {
        vars.push_back(var_name(v, layers));
    }
    j["variables"] = vars;
    ordered_json gens = ordered_json::array();
    for (const Point& g : r.polyhedron.generators()) {
        gens.push_back(g);
    }
    j["generators"] = gens;
    ordered_json zone = ordered_json::array();
    for (std::size_t a = 0; a < r.zone.slots(); ++a) {
        ordered_json row = ordered_json::array();
        for (std::size_t b = 0; b < r.zone.slots(); ++b) {
            row.push_back(number_or_null(r.zone(a, b)));
        }
        zone.push_back(row);
    }
    j["enclosing_zone"] = zone;
    if (r.external) {
        j["external_rows"] = r.external->rows().size();
    }

    ordered_json ja = ordered_json::array();
    std::size_t verified = 0;
    for (std::size_t k = 0; k < run.verdicts.size(); ++k) {
        const Verdict& v = run.verdicts[k];
        ordered_json e;
        e["name"] = run.spec.assertions[k].name;
        e["status"] = to_string(v.status);
        e["minimum"] = number_or_null(v.minimum);
        e["method"] = v.method;
        e["cells"] = v.cells;
        ja.push_back(e);
        verified += v.status == VerdictStatus::verified ? 1 : 0;
    }
    j["assertions"] = ja;
    ordered_json js;
    js["assertions"] = run.verdicts.size();
    js["verified"] = verified;
    js["unknown"] = run.verdicts.size() - verified;
    js["generators"] = r.polyhedron.size();
    j["summary"] = js;
    if (with_timings) {
        ordered_json jt;
        jt["analysis_ms"] = run.analysis_ms;
        jt["check_ms"] = run.check_ms;
        j["timings"] = jt;
    }
    return j.dump(2) + "\n";
}

namespace {

// Corners of {a <= x <= b, c <= y <= d, e <= x - y <= f}, counter-clockwise.
std::vector<Point> zone_corners_2d(const Dbm& z) {
    struct Line {
        double a, b, c;
    };
    const std::vector<Line> lines{{1, 0, z(1, 0)},  {1, 0, -z(0, 1)}, {0, 1, z(2, 0)},
                                  {0, 1, -z(0, 2)}, {1, -1, z(1, 2)}, {1, -1, -z(2, 1)}};
    std::vector<Point> pts;
    for (std::size_t p = 0; p < lines.size(); ++p) {
        for (std::size_t q = p + 1; q < lines.size(); ++q) {
            const Line& l1 = lines[p];
            const Line& l2 = lines[q];
            const double det = l1.a * l2.b - l1.b * l2.a;
            if (std::abs(det) < 1e-12 || !std::isfinite(l1.c) || !std::isfinite(l2.c)) {
                continue;
            }
            const Point pt{(l1.c * l2.b - l1.b * l2.c) / det, (l1.a * l2.c - l1.c * l2.a) / det};
            if (!dbm_contains(z, pt, 1e-9)) {
                continue;
            }
            bool dup = false;
            for (const Point& o : pts) {
                dup = dup || (std::abs(o[0] - pt[0]) < 1e-9 && std::abs(o[1] - pt[1]) < 1e-9);
            }
            if (!dup) {
                pts.push_back(pt);
            }
        }
    }
    if (pts.empty()) {
        return pts;
    }
    double cx = 0;
    double cy = 0;
    for (const Point& p : pts) {
        cx += p[0];
        cy += p[1];
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Point& u, const Point& v) {
        return std::atan2(u[1] - cy, u[0] - cx) < std::atan2(v[1] - cy, v[0] - cx);
    });
    return pts;
}

} // namespace

std::string csv_text(const RunOutcome& run, const std::vector<std::string>& dims) {
    const AnalysisResult& r = run.result;
    const std::size_t layers = run.network.layers().size();
    require(!dims.empty(), ErrorCode::invalid_argument, "csv: no dimensions given");
    std::vector<std::size_t> idx;
    for (const std::string& d : dims) {
        std::optional<std::size_t> found;
        for (std::size_t k = 0; k < r.vars.size(); ++k) {
            if (var_name(r.vars[k], layers) == d) {
                found = k;
            }
        }
        require(found.has_value(), ErrorCode::bad_index, "csv: '" + d + "' is not a tracked variable");
        idx.push_back(*found);
    }
    std::ostringstream out;
    out << "kind";
    for (const std::string& d : dims) {
        out << "," << d;
    }
    out << "\n";
    const TropInternal proj = proj_internal(r.polyhedron, idx, run.options.eps);
    for (const Point& g : proj.generators()) {
        out << "generator";
        for (double v : g) {
            out << "," << format_double(v);
        }
        out << "\n";
    }
    if (idx.size() == 2) {
        for (const Point& c : zone_corners_2d(dbm_project(r.zone, idx))) {
            out << "zone_corner," << format_double(c[0]) << "," << format_double(c[1]) << "\n";
        }
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::io, "cannot write '" + path + "'");
    out << text;
    require(static_cast<bool>(out), ErrorCode::io, "failed writing '" + path + "'");
}

} // namespace troprelu
