#include "tubeflow/tube_io.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>

#include "json.hpp"

#include "tubeflow/canonical.hpp"

namespace tubeflow {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw std::runtime_error(origin + ": " + message);
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw std::runtime_error(origin + ":" + std::to_string(line) + ":" +
                                 std::to_string(col) + ": " + e.what());
    }
}

const json& member(const json& j, const char* key, const std::string& where,
                   const std::string& origin) {
    if (!j.is_object()) fail(origin, where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(origin, where + ": missing \"" + key + "\"");
    return *it;
}

double number(const json& j, const std::string& where, const std::string& origin) {
    if (!j.is_number()) fail(origin, where + ": expected a number");
    return j.get<double>();
}

std::string text_of(const json& j, const std::string& where, const std::string& origin) {
    if (!j.is_string()) fail(origin, where + ": expected a string");
    return j.get<std::string>();
}

Vec2 point(const json& j, const std::string& where, const std::string& origin) {
    if (!j.is_array() || j.size() != 2)
        fail(origin, where + ": expected [x, y]");
    return {number(j[0], where + "[0]", origin), number(j[1], where + "[1]", origin)};
}

std::vector<double> number_array(const json& j, const std::string& where,
                                 const std::string& origin) {
    if (!j.is_array()) fail(origin, where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], where + "[" + std::to_string(i) + "]", origin));
    return out;
}

std::array<double, 4> coeffs(const json& j, const std::string& where,
                             const std::string& origin) {
    std::vector<double> v = number_array(j, where, origin);
    if (v.size() != 4) fail(origin, where + ": expected 4 polynomial coefficients");
    return {v[0], v[1], v[2], v[3]};
}

CurvePiece piece_from_json(const json& j, const std::string& where,
                           const std::string& origin) {
    std::string type = text_of(member(j, "type", where, origin), where + ".type", origin);
    PieceGeometry g;
    if (type == "line") {
        g = LinePiece{point(member(j, "start", where, origin), where + ".start", origin),
                      point(member(j, "end", where, origin), where + ".end", origin)};
    } else if (type == "arc") {
        g = ArcPiece{point(member(j, "center", where, origin), where + ".center", origin),
                     number(member(j, "radius", where, origin), where + ".radius", origin),
                     number(member(j, "angle0", where, origin), where + ".angle0", origin),
                     number(member(j, "angle1", where, origin), where + ".angle1", origin)};
    } else if (type == "cubic") {
        CubicPiece c;
        c.x = coeffs(member(j, "x", where, origin), where + ".x", origin);
        c.y = coeffs(member(j, "y", where, origin), where + ".y", origin);
        g = c;
    } else {
        fail(origin, where + ".type: unknown piece type \"" + type + "\"");
    }
    double span = j.contains("span") ? number(j.at("span"), where + ".span", origin)
                                     : natural_length(g);
    if (!(span > 0.0)) fail(origin, where + ".span: must be positive");
    return {g, span};
}

json piece_to_json(const CurvePiece& p) {
    json j;
    if (const auto* line = std::get_if<LinePiece>(&p.geometry)) {
        j["type"] = "line";
        j["start"] = {line->start.x, line->start.y};
        j["end"] = {line->end.x, line->end.y};
    } else if (const auto* arc = std::get_if<ArcPiece>(&p.geometry)) {
        j["type"] = "arc";
        j["center"] = {arc->center.x, arc->center.y};
        j["radius"] = arc->radius;
        j["angle0"] = arc->angle0;
        j["angle1"] = arc->angle1;
    } else {
        const auto& cubic = std::get<CubicPiece>(p.geometry);
        j["type"] = "cubic";
        j["x"] = cubic.x;
        j["y"] = cubic.y;
    }
    j["span"] = p.s_length;
    return j;
}

RadiusProfile profile_from_json(const json& j, double s0, double s1,
                                const std::string& where, const std::string& origin) {
    std::string kind = text_of(member(j, "kind", where, origin), where + ".kind", origin);
    try {
        if (kind == "constant")
            return RadiusProfile::constant(
                number(member(j, "value", where, origin), where + ".value", origin), s0, s1);
        if (kind == "knots") {
            RadiusProfile p = RadiusProfile::piecewise_linear(
                number_array(member(j, "s", where, origin), where + ".s", origin),
                number_array(member(j, "r", where, origin), where + ".r", origin));
            if (p.knots_s().front() > s0 || p.knots_s().back() < s1)
                fail(origin, where + ": knots span [" + format_number(p.knots_s().front()) +
                                 ", " + format_number(p.knots_s().back()) +
                                 "] but the curve domain is [" + format_number(s0) + ", " +
                                 format_number(s1) + "]");
            return p;
        }
    } catch (const std::invalid_argument& e) {
        fail(origin, where + ": " + e.what());
    }
    fail(origin, where + ".kind: expected \"constant\" or \"knots\", got \"" + kind + "\"");
}

json profile_to_json(const RadiusProfile& p) {
    const auto& s = p.knots_s();
    const auto& r = p.knots_r();
    if (s.size() == 2 && r[0] == r[1]) return {{"kind", "constant"}, {"value", r[0]}};
    return {{"kind", "knots"}, {"s", s}, {"r", r}};
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

} // namespace

std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

VirtualTube tube_from_json(const std::string& text, const std::string& origin) {
    json j = parse_text(text, origin);
    if (!j.is_object()) fail(origin, "top level: expected an object");

    std::string name =
        j.contains("name") ? text_of(j.at("name"), "name", origin) : std::string{};
    double s_begin = j.contains("s_begin") ? number(j.at("s_begin"), "s_begin", origin) : 0.0;

    const json& jc = member(j, "curve", "top level", origin);
    if (!jc.is_array() || jc.empty()) fail(origin, "curve: expected a nonempty array");
    std::vector<CurvePiece> pieces;
    pieces.reserve(jc.size());
    for (std::size_t i = 0; i < jc.size(); ++i)
        pieces.push_back(piece_from_json(jc[i], "curve[" + std::to_string(i) + "]", origin));
    GeneratingCurve curve{std::move(pieces), s_begin};
    double s0 = curve.s_begin();
    double s1 = curve.s_end();

    RadiusProfile upper = profile_from_json(member(j, "radius_upper", "top level", origin),
                                            s0, s1, "radius_upper", origin);
    RadiusProfile lower = profile_from_json(member(j, "radius_lower", "top level", origin),
                                            s0, s1, "radius_lower", origin);
    VirtualTube tube{std::move(curve), std::move(upper), std::move(lower), std::move(name)};

    if (j.contains("modification") && !j.at("modification").is_null()) {
        const json& jm = j.at("modification");
        ModificationParams mp;
        mp.alpha = number(member(jm, "alpha", "modification", origin),
                          "modification.alpha", origin);
        mp.beta = number(member(jm, "beta", "modification", origin),
                         "modification.beta", origin);
        try {
            tube = modify_tube(tube, mp);
        } catch (const std::invalid_argument& e) {
            fail(origin, std::string("modification: ") + e.what());
        }
    }

    try {
        tube.validate();
    } catch (const std::exception& e) {
        fail(origin, std::string("invalid tube: ") + e.what());
    }
    return tube;
}

VirtualTube load_tube(const std::filesystem::path& file) {
    return tube_from_json(read_file(file), file.string());
}

std::string tube_to_json(const VirtualTube& tube) {
    json j;
    j["name"] = tube.name();
    j["s_begin"] = tube.curve().s_begin();
    json arr = json::array();
    for (const CurvePiece& p : tube.curve().pieces()) arr.push_back(piece_to_json(p));
    j["curve"] = std::move(arr);
    j["radius_upper"] = profile_to_json(tube.profile(Side::upper));
    j["radius_lower"] = profile_to_json(tube.profile(Side::lower));
    return j.dump(2) + "\n";
}

void save_tube(const VirtualTube& tube, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << tube_to_json(tube);
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

VirtualTube resolve_tube_ref(const std::string& ref, const std::filesystem::path& base_dir) {
    if (is_canonical_name(ref)) return canonical_tube(ref[0]);
    std::filesystem::path p{ref};
    if (p.is_relative()) p = base_dir / p;
    return load_tube(p);
}

ScenarioFile load_scenario(const std::filesystem::path& file) {
    std::string origin = file.string();
    json j = parse_text(read_file(file), origin);
    if (!j.is_object()) fail(origin, "top level: expected an object");

    bool has_one = j.contains("tube");
    bool has_many = j.contains("tubes");
    if (has_one == has_many)
        fail(origin, "top level: give exactly one of \"tube\" or \"tubes\"");

    ScenarioFile out;
    std::filesystem::path base = file.parent_path();
    if (has_one) {
        out.tubes.push_back(
            resolve_tube_ref(text_of(j.at("tube"), "tube", origin), base));
    } else {
        const json& jt = j.at("tubes");
        if (!jt.is_array() || jt.empty()) fail(origin, "tubes: expected a nonempty array");
        for (std::size_t i = 0; i < jt.size(); ++i)
            out.tubes.push_back(resolve_tube_ref(
                text_of(jt[i], "tubes[" + std::to_string(i) + "]", origin), base));
    }

    CampaignOptions& o = out.options;
    auto opt_number = [&](const json& ctx, const char* key, const std::string& where,
                          double fallback) {
        if (!ctx.contains(key)) return fallback;
        return number(ctx.at(key), where, origin);
    };
    auto opt_count = [&](const char* key, int fallback) {
        if (!j.contains(key)) return fallback;
        const json& v = j.at(key);
        if (!v.is_number_integer()) fail(origin, std::string(key) + ": expected an integer");
        auto n = v.get<std::int64_t>();
        if (n < 1) fail(origin, std::string(key) + ": must be at least 1");
        return static_cast<int>(n);
    };

    o.n_robots = opt_count("robots", o.n_robots);
    o.trials = opt_count("trials", o.trials);
    if (j.contains("seed")) {
        const json& v = j.at("seed");
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            fail(origin, "seed: expected a nonnegative integer");
        o.seed = v.get<std::uint64_t>();
    }
    o.dt = opt_number(j, "dt", "dt", o.dt);
    o.t_max = opt_number(j, "t_max", "t_max", o.t_max);
    if (!(o.dt > 0.0)) fail(origin, "dt: must be positive");
    if (!(o.t_max > 0.0)) fail(origin, "t_max: must be positive");
    if (j.contains("record_trajectories")) {
        const json& v = j.at("record_trajectories");
        if (!v.is_boolean()) fail(origin, "record_trajectories: expected a boolean");
        o.record_trajectories = v.get<bool>();
    }

    if (j.contains("gains")) {
        const json& g = j.at("gains");
        if (!g.is_object()) fail(origin, "gains: expected an object");
        ControllerGains& k = o.gains;
        k.k_line = opt_number(g, "k_line", "gains.k_line", k.k_line);
        k.k_avoid = opt_number(g, "k_avoid", "gains.k_avoid", k.k_avoid);
        k.k_keep = opt_number(g, "k_keep", "gains.k_keep", k.k_keep);
        k.safety_radius = opt_number(g, "safety_radius", "gains.safety_radius", k.safety_radius);
        k.avoidance_radius =
            opt_number(g, "avoidance_radius", "gains.avoidance_radius", k.avoidance_radius);
        k.weight_cap = opt_number(g, "weight_cap", "gains.weight_cap", k.weight_cap);
        k.weight_floor = opt_number(g, "weight_floor", "gains.weight_floor", k.weight_floor);
        if (!(k.safety_radius > 0.0) || !(k.avoidance_radius > k.safety_radius))
            fail(origin, "gains: need 0 < safety_radius < avoidance_radius");
    }
    if (j.contains("flow")) {
        const json& f = j.at("flow");
        if (!f.is_object()) fail(origin, "flow: expected an object");
        o.flow.cross_speed = opt_number(f, "cross_speed", "flow.cross_speed", o.flow.cross_speed);
        o.flow.resistance = opt_number(f, "resistance", "flow.resistance", o.flow.resistance);
        o.flow.total_mass = opt_number(f, "total_mass", "flow.total_mass", o.flow.total_mass);
    }
    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        if (!q.is_object()) fail(origin, "quadrature: expected an object");
        auto grid = [&](const char* key, int fallback) {
            if (!q.contains(key)) return fallback;
            const json& v = q.at(key);
            if (!v.is_number_integer() || v.get<std::int64_t>() < 2)
                fail(origin, std::string("quadrature.") + key + ": expected an integer >= 2");
            return static_cast<int>(v.get<std::int64_t>());
        };
        o.quadrature.n_s = grid("n_s", o.quadrature.n_s);
        o.quadrature.n_lambda = grid("n_lambda", o.quadrature.n_lambda);
    }
    return out;
}

std::string dof_report_to_json(const DofReport& report) {
    json j;
    j["tube"] = report.tube_name;
    j["energy_j"] = report.energy;
    j["average_width_m"] = report.average_width;
    j["dof_m_per_j"] = report.dof;
    j["params"] = {{"cross_speed", report.params.cross_speed},
                   {"resistance", report.params.resistance},
                   {"total_mass", report.params.total_mass}};
    j["quadrature"] = {{"n_s", report.quadrature.n_s},
                       {"n_lambda", report.quadrature.n_lambda}};
    json elements = json::array();
    for (const ElementEnergy& e : report.per_element_energy)
        elements.push_back({{"side", side_name(e.side)},
                            {"lambda", e.lambda_center},
                            {"energy_j", e.energy}});
    j["per_element"] = std::move(elements);
    return j.dump(2) + "\n";
}

std::string dof_report_to_csv(const DofReport& report) {
    std::string out =
        "tube,energy_j,average_width_m,dof_m_per_j,n_s,n_lambda,resistance,cross_speed,total_mass\n";
    out += report.tube_name;
    out += ',';
    out += format_number(report.energy);
    out += ',';
    out += format_number(report.average_width);
    out += ',';
    out += format_number(report.dof);
    out += ',';
    out += std::to_string(report.quadrature.n_s);
    out += ',';
    out += std::to_string(report.quadrature.n_lambda);
    out += ',';
    out += format_number(report.params.resistance);
    out += ',';
    out += format_number(report.params.cross_speed);
    out += ',';
    out += format_number(report.params.total_mass);
    out += '\n';
    return out;
}

} // namespace tubeflow
