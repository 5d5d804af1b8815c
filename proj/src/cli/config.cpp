#include "mcmimo/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace mcmimo::cli {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

void read_number(const json& obj, const char* key, const std::string& where, double& out) {
    if (obj.contains(key)) out = number(obj, key, where);
}

std::uint64_t count(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where + "." + key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(where + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Point3 point(const json& v, const std::string& where) {
    const auto xs = numbers(v, where);
    if (xs.size() != 3) throw ConfigError(where + " must have three coordinates");
    return {xs[0], xs[1], xs[2]};
}

json point_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

ExplicitTopology parse_explicit(const json& obj) {
    const std::string where = "topology.explicit";
    only_keys(obj, where, {"transmitters", "receivers"});
    ExplicitTopology out;
    if (!obj.contains("transmitters") || !obj.at("transmitters").is_array())
        throw ConfigError(where + ".transmitters must be an array");
    if (!obj.contains("receivers") || !obj.at("receivers").is_array())
        throw ConfigError(where + ".receivers must be an array");
    for (const auto& t : obj.at("transmitters")) out.transmitters.push_back(point(t, where + ".transmitters[]"));
    for (const auto& r : obj.at("receivers")) {
        only_keys(r, where + ".receivers[]", {"center", "radius"});
        if (!r.contains("center")) throw ConfigError(where + ".receivers[] needs a center");
        Receiver rx;
        rx.center = point(r.at("center"), where + ".receivers[].center");
        read_number(r, "radius", where + ".receivers[]", rx.radius);
        out.receivers.push_back(rx);
    }
    return out;
}

ParametricTopology parse_parametric(const json& obj) {
    const std::string where = "topology.parametric";
    only_keys(obj, where, {"d1", "d_c1c2", "omega_deg", "omega_grid", "t2", "radius"});
    ParametricTopology out;
    read_number(obj, "d1", where, out.d1);
    read_number(obj, "radius", where, out.radius);
    if (obj.contains("d_c1c2")) out.d_c1c2 = numbers(obj.at("d_c1c2"), where + ".d_c1c2");
    if (obj.contains("omega_deg") && obj.contains("omega_grid"))
        throw ConfigError(where + ": give omega_deg or omega_grid, not both");
    if (obj.contains("omega_deg")) {
        out.omega_deg = numbers(obj.at("omega_deg"), where + ".omega_deg");
    } else if (obj.contains("omega_grid")) {
        const auto& g = obj.at("omega_grid");
        only_keys(g, where + ".omega_grid", {"start", "stop", "points"});
        double start = 0.0, stop = 180.0;
        std::uint64_t points = 13;
        read_number(g, "start", where + ".omega_grid", start);
        read_number(g, "stop", where + ".omega_grid", stop);
        if (g.contains("points")) points = count(g, "points", where + ".omega_grid");
        if (points == 0) throw ConfigError(where + ".omega_grid.points must be positive");
        for (std::uint64_t k = 0; k < points; ++k)
            out.omega_deg.push_back(points == 1 ? start
                                                : start + (stop - start) * static_cast<double>(k) /
                                                              static_cast<double>(points - 1));
    } else {
        out.omega_deg = default_omega_grid();
    }
    if (obj.contains("t2")) out.t2 = point(obj.at("t2"), where + ".t2");
    return out;
}

void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive and finite");
}

}  // namespace

std::vector<double> default_omega_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 12; ++k) grid.push_back(15.0 * k);
    return grid;
}

std::string canonical_method(const std::string& name) {
    if (name == "transient") return "volterra";
    if (name == "asymptotic" || name == "volterra" || name == "series" || name == "montecarlo")
        return name;
    throw ConfigError("unknown method '" + name +
                      "' (expected asymptotic, volterra, transient, series or montecarlo)");
}

ScenarioConfig parse_config(const json& doc) {
    only_keys(doc, "config", {"medium", "topology", "solver", "montecarlo", "sweep", "output"});
    ScenarioConfig c;
    try {
        if (doc.contains("medium")) {
            const auto& m = doc.at("medium");
            only_keys(m, "medium", {"diffusion_coefficient", "molecules_per_release"});
            read_number(m, "diffusion_coefficient", "medium", c.diffusion_coefficient);
            read_number(m, "molecules_per_release", "medium", c.molecules_per_release);
        }

        if (!doc.contains("topology")) throw ConfigError("missing topology section");
        const auto& t = doc.at("topology");
        only_keys(t, "topology", {"explicit", "parametric"});
        if (t.contains("explicit") == t.contains("parametric"))
            throw ConfigError("topology needs exactly one of explicit or parametric");
        if (t.contains("explicit"))
            c.topology = parse_explicit(t.at("explicit"));
        else
            c.topology = parse_parametric(t.at("parametric"));

        if (doc.contains("solver")) {
            const auto& s = doc.at("solver");
            only_keys(s, "solver", {"dt", "t_max", "scheme", "report_times"});
            read_number(s, "dt", "solver", c.solver.dt);
            read_number(s, "t_max", "solver", c.solver.t_max);
            if (s.contains("scheme")) {
                if (!s.at("scheme").is_string()) throw ConfigError("solver.scheme must be a string");
                try {
                    c.solver.scheme = volterra::quadrature_from_string(s.at("scheme").get<std::string>());
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("solver.scheme: ") + e.what());
                }
            }
            if (s.contains("report_times")) c.solver.report_times = numbers(s.at("report_times"), "solver.report_times");
        }
        if (c.solver.report_times.empty()) c.solver.report_times = {c.solver.t_max};

        if (doc.contains("montecarlo")) {
            const auto& m = doc.at("montecarlo");
            only_keys(m, "montecarlo",
                      {"dt_sim", "record_dt", "t_max", "particles", "seed", "boundary_correction"});
            read_number(m, "dt_sim", "montecarlo", c.montecarlo.dt_sim);
            read_number(m, "record_dt", "montecarlo", c.montecarlo.record_dt);
            if (m.contains("t_max")) c.montecarlo.t_max = number(m, "t_max", "montecarlo");
            if (m.contains("particles")) c.montecarlo.particles = count(m, "particles", "montecarlo");
            if (m.contains("seed")) c.montecarlo.seed = count(m, "seed", "montecarlo");
            if (m.contains("boundary_correction")) {
                if (!m.at("boundary_correction").is_boolean())
                    throw ConfigError("montecarlo.boundary_correction must be true or false");
                c.montecarlo.boundary_correction = m.at("boundary_correction").get<bool>();
            }
        }

        if (doc.contains("sweep")) {
            const auto& s = doc.at("sweep");
            only_keys(s, "sweep", {"methods"});
            if (s.contains("methods")) {
                if (!s.at("methods").is_array()) throw ConfigError("sweep.methods must be an array");
                c.methods.clear();
                for (const auto& m : s.at("methods")) {
                    if (!m.is_string()) throw ConfigError("sweep.methods must hold strings");
                    c.methods.push_back(canonical_method(m.get<std::string>()));
                }
            }
        }

        if (doc.contains("output")) {
            const auto& o = doc.at("output");
            only_keys(o, "output", {"directory"});
            if (o.contains("directory")) {
                if (!o.at("directory").is_string()) throw ConfigError("output.directory must be a string");
                c.output_directory = o.at("directory").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    check(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& c) {
    json doc;
    doc["medium"] = {{"diffusion_coefficient", c.diffusion_coefficient},
                     {"molecules_per_release", c.molecules_per_release}};
    if (const auto* e = std::get_if<ExplicitTopology>(&c.topology)) {
        json tx = json::array(), rx = json::array();
        for (const auto& t : e->transmitters) tx.push_back(point_json(t));
        for (const auto& r : e->receivers) rx.push_back({{"center", point_json(r.center)}, {"radius", r.radius}});
        doc["topology"]["explicit"] = {{"transmitters", tx}, {"receivers", rx}};
    } else {
        const auto& p = std::get<ParametricTopology>(c.topology);
        json par = {{"d1", p.d1}, {"d_c1c2", p.d_c1c2}, {"omega_deg", p.omega_deg}, {"radius", p.radius}};
        if (p.t2) par["t2"] = point_json(*p.t2);
        doc["topology"]["parametric"] = par;
    }
    doc["solver"] = {{"dt", c.solver.dt},
                     {"t_max", c.solver.t_max},
                     {"scheme", volterra::to_string(c.solver.scheme)},
                     {"report_times", c.solver.report_times}};
    doc["montecarlo"] = {{"dt_sim", c.montecarlo.dt_sim},
                         {"record_dt", c.montecarlo.record_dt},
                         {"particles", c.montecarlo.particles},
                         {"seed", c.montecarlo.seed},
                         {"boundary_correction", c.montecarlo.boundary_correction}};
    if (c.montecarlo.t_max) doc["montecarlo"]["t_max"] = *c.montecarlo.t_max;
    doc["sweep"]["methods"] = c.methods;
    doc["output"]["directory"] = c.output_directory;
    return doc;
}

void check(const ScenarioConfig& c) {
    require_positive(c.diffusion_coefficient, "medium.diffusion_coefficient");
    require_positive(c.molecules_per_release, "medium.molecules_per_release");
    require_positive(c.solver.dt, "solver.dt");
    require_positive(c.solver.t_max, "solver.t_max");
    if (c.solver.t_max < c.solver.dt) throw ConfigError("solver.t_max must be at least solver.dt");
    for (double t : c.solver.report_times)
        if (!(t > 0.0) || t > c.solver.t_max * (1.0 + 1e-12))
            throw ConfigError("solver.report_times must lie in (0, solver.t_max]");
    require_positive(c.montecarlo.dt_sim, "montecarlo.dt_sim");
    require_positive(c.montecarlo.record_dt, "montecarlo.record_dt");
    require_positive(c.mc_t_max(), "montecarlo.t_max");
    if (c.montecarlo.particles == 0) throw ConfigError("montecarlo.particles must be positive");
    if (c.methods.empty()) throw ConfigError("sweep.methods must not be empty");
    for (const auto& m : c.methods) (void)canonical_method(m);
    if (const auto* p = std::get_if<ParametricTopology>(&c.topology)) {
        require_positive(p->d1, "topology.parametric.d1");
        require_positive(p->radius, "topology.parametric.radius");
        if (p->d_c1c2.empty()) throw ConfigError("topology.parametric.d_c1c2 must not be empty");
        for (double d : p->d_c1c2) require_positive(d, "topology.parametric.d_c1c2 entries");
        if (p->omega_deg.empty()) throw ConfigError("topology.parametric.omega_deg must not be empty");
        for (double w : p->omega_deg)
            if (!(w >= 0.0 && w <= 180.0))
                throw ConfigError("topology.parametric.omega_deg entries must lie in [0, 180]");
    }
}

std::vector<ScenarioPoint> expand(const ScenarioConfig& c) {
    if (const auto* e = std::get_if<ExplicitTopology>(&c.topology)) {
        Topology t{e->transmitters, e->receivers, c.diffusion_coefficient, c.molecules_per_release};
        return {ScenarioPoint{0.0, 0.0, std::move(t)}};
    }
    const auto& p = std::get<ParametricTopology>(c.topology);
    const ScenarioParams params{p.radius, c.diffusion_coefficient, c.molecules_per_release};
    std::vector<ScenarioPoint> points;
    for (double w : p.omega_deg) {
        const double omega = std::min(w * std::numbers::pi / 180.0, std::numbers::pi);
        for (double d : p.d_c1c2) {
            Topology t = p.t2 ? build_mimo_scenario(p.d1, d, omega, *p.t2, params)
                              : build_sito_scenario(p.d1, d, omega, params);
            points.push_back({w, d, std::move(t)});
        }
    }
    return points;
}

}  // namespace mcmimo::cli
