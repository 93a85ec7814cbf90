#pragma once

#include <json.hpp>

#include "oun/cylinder.hpp"
#include "oun/oracle.hpp"

namespace oun {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Declarative domain description; `build` turns it into a ConvexDomain.
struct DomainConfig {
    std::string kind = "slab";  // halfspace | ball | slab | cylinder | wholespace
    Point vec = {1.0};          // direction (halfspace/slab) or center (ball)
    double scalar = 1.0;        // offset, half-width or radius
    int dim = 1;                // wholespace only
    std::shared_ptr<DomainConfig> base;  // cylinder only
    int extra_dims = 1;

    ConvexDomain build() const {
        try {
            if (kind == "halfspace") return ConvexDomain::half_space(vec, scalar);
            if (kind == "ball") return ConvexDomain::ball(vec, scalar);
            if (kind == "slab") return ConvexDomain::slab(vec, scalar);
            if (kind == "wholespace") return ConvexDomain::whole_space(dim);
            if (kind == "cylinder") {
                if (!base) throw ConfigError("cylinder domain needs a base");
                return ConvexDomain::cylinder(base->build(), extra_dims);
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("bad domain parameters: ") + e.what());
        }
        throw ConfigError("unknown domain kind '" + kind + "'");
    }
};

/// Named right-hand sides with compiled-in derivatives.
struct RhsConfig {
    std::string name = "one";
    int axis = 0;
    std::vector<double> coeffs;  // poly1d / radial_poly
    Point center;                // gauss_bump
    double width = 1.0;
    Point cvec;   // affine / exp_linear
    double c0 = 1.0;
    std::vector<Point> directions;  // cylindrical
    std::string profile = "cubic_neumann";

    AnalyticFunction build(int dim) const {
        try {
            return build_impl(dim);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("bad rhs parameters: ") + e.what());
        }
    }

    AnalyticFunction build_impl(int dim) const {
        if (name == "one") return fn_one(dim);
        if (name == "coord") return fn_coord(dim, axis);
        if (name == "square") return fn_square(dim, axis);
        if (name == "cubic_neumann") return fn_cubic_neumann(dim, axis);
        if (name == "poly1d") return fn_poly1d(dim, axis, coeffs);
        if (name == "gauss_bump") {
            Point c = center;
            c.resize(static_cast<std::size_t>(dim), 0.0);
            return fn_gauss_bump(c, width);
        }
        if (name == "affine") {
            Point c = cvec;
            c.resize(static_cast<std::size_t>(dim), 0.0);
            return fn_affine(c, c0);
        }
        if (name == "exp_linear") {
            Point c = cvec;
            c.resize(static_cast<std::size_t>(dim), 0.0);
            return fn_exp_linear(c);
        }
        if (name == "disk_neumann") return fn_disk_neumann();
        if (name == "cylindrical") {
            RhsConfig prof;
            prof.name = profile;
            prof.coeffs = coeffs;
            const int k = static_cast<int>(directions.size());
            if (k == 0) throw ConfigError("cylindrical rhs needs directions");
            return CylindricalFunction(directions, prof.build(k), dim).as_analytic();
        }
        throw ConfigError("unknown rhs name '" + name + "'");
    }

    /// Radial profile r -> f(r) for the radial solver.
    std::function<double(double)> build_radial() const {
        if (name == "one") return [](double) { return 1.0; };
        if (name == "radial_poly" || name == "poly1d") {
            const std::vector<double> c = coeffs;
            return [c](double r) {
                double s = 0.0;
                for (std::size_t j = c.size(); j-- > 0;) s = s * r + c[j];
                return s;
            };
        }
        throw ConfigError("rhs '" + name + "' has no radial form (use one/radial_poly)");
    }
};

struct OracleConfig {
    std::uint64_t seed = 42;
    double dt = 1e-3;
    std::size_t n_paths = 100000;
    double t_max = 0.0;  // 0: use 20/lambda
    Point x0 = {0.0};
    bool antithetic = false;
    std::string reflection = "symmetrized";  // or "projection"
    bool compare_pde = true;
};

/// One experiment run: command, inputs, resolutions, outputs.
struct ExperimentConfig {
    std::string command = "verify";  // solve | verify | sweep | equivalence | oracle
    DomainConfig domain;
    RhsConfig rhs;
    double lambda = 1.0;
    std::vector<int> resolution = {257};
    double truncation = 8.0;
    int quad_resolution = 256;
    int n_radial = 257;
    int dims_lo = 1, dims_hi = 5;  // sweep range
    int extra_dims = 1;            // equivalence
    int profile_resolution = 65;   // sweep
    int free_resolution = 9;       // sweep
    OracleConfig oracle;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json (tabular artifacts)

    void validate() const {
        if (command != "solve" && command != "verify" && command != "sweep" &&
            command != "equivalence" && command != "oracle")
            throw ConfigError("unknown command '" + command + "'");
        if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
        if (resolution.empty()) throw ConfigError("resolution must not be empty");
        for (int r : resolution)
            if (r < 8) throw ConfigError("resolution entries must be >= 8");
        if (quad_resolution < 8) throw ConfigError("quad_resolution must be >= 8");
        if (n_radial < 32) throw ConfigError("n_radial must be >= 32");
        if (dims_lo < 1 || dims_hi > 6 || dims_lo > dims_hi)
            throw ConfigError("dims must satisfy 1 <= lo <= hi <= 6");
        if (extra_dims < 1) throw ConfigError("extra_dims must be >= 1");
        if (!(oracle.dt > 0.0)) throw ConfigError("oracle.dt must be positive");
        if (oracle.n_paths == 0) throw ConfigError("oracle.n_paths must be positive");
        if (oracle.reflection != "symmetrized" && oracle.reflection != "projection")
            throw ConfigError("oracle.reflection must be symmetrized or projection");
        if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
        if (!(truncation >= 4.0)) throw ConfigError("truncation should be >= 4");
    }
};

// ---- JSON (de)serialization; missing keys keep their defaults -------------

inline void to_json(nlohmann::json& j, const DomainConfig& d) {
    j = nlohmann::json{{"kind", d.kind}};
    if (d.kind == "wholespace") {
        j["dim"] = d.dim;
    } else if (d.kind == "cylinder") {
        if (d.base) {
            nlohmann::json jb;
            to_json(jb, *d.base);
            j["base"] = jb;
        }
        j["extra_dims"] = d.extra_dims;
    } else {
        j[d.kind == "ball" ? "center" : "direction"] = d.vec;
        j[d.kind == "ball" ? "radius" : (d.kind == "slab" ? "half_width" : "offset")] = d.scalar;
    }
}

inline void from_json(const nlohmann::json& j, DomainConfig& d) {
    d.kind = j.value("kind", d.kind);
    if (j.contains("direction")) d.vec = j.at("direction").get<Point>();
    if (j.contains("center")) d.vec = j.at("center").get<Point>();
    if (j.contains("offset")) d.scalar = j.at("offset").get<double>();
    if (j.contains("half_width")) d.scalar = j.at("half_width").get<double>();
    if (j.contains("radius")) d.scalar = j.at("radius").get<double>();
    if (j.contains("dim")) d.dim = j.at("dim").get<int>();
    if (j.contains("extra_dims")) d.extra_dims = j.at("extra_dims").get<int>();
    if (j.contains("base")) {
        d.base = std::make_shared<DomainConfig>();
        from_json(j.at("base"), *d.base);
    }
}

inline void to_json(nlohmann::json& j, const RhsConfig& r) {
    j = nlohmann::json{{"name", r.name}};
    if (r.name == "poly1d" || r.name == "radial_poly" || r.name == "cylindrical") j["coeffs"] = r.coeffs;
    if (r.name == "coord" || r.name == "square" || r.name == "cubic_neumann" || r.name == "poly1d")
        j["axis"] = r.axis;
    if (r.name == "gauss_bump") {
        j["center"] = r.center;
        j["width"] = r.width;
    }
    if (r.name == "affine" || r.name == "exp_linear") {
        j["cvec"] = r.cvec;
        j["c0"] = r.c0;
    }
    if (r.name == "cylindrical") {
        j["directions"] = r.directions;
        j["profile"] = r.profile;
    }
}

inline void from_json(const nlohmann::json& j, RhsConfig& r) {
    r.name = j.value("name", r.name);
    r.axis = j.value("axis", r.axis);
    if (j.contains("coeffs")) r.coeffs = j.at("coeffs").get<std::vector<double>>();
    if (j.contains("center")) r.center = j.at("center").get<Point>();
    r.width = j.value("width", r.width);
    if (j.contains("cvec")) r.cvec = j.at("cvec").get<Point>();
    r.c0 = j.value("c0", r.c0);
    if (j.contains("directions")) r.directions = j.at("directions").get<std::vector<Point>>();
    r.profile = j.value("profile", r.profile);
}

inline void to_json(nlohmann::json& j, const OracleConfig& o) {
    j = nlohmann::json{{"seed", o.seed},           {"dt", o.dt},
                       {"n_paths", o.n_paths},     {"t_max", o.t_max},
                       {"x0", o.x0},               {"antithetic", o.antithetic},
                       {"reflection", o.reflection}, {"compare_pde", o.compare_pde}};
}

inline void from_json(const nlohmann::json& j, OracleConfig& o) {
    o.seed = j.value("seed", o.seed);
    o.dt = j.value("dt", o.dt);
    o.n_paths = j.value("n_paths", o.n_paths);
    o.t_max = j.value("t_max", o.t_max);
    if (j.contains("x0")) o.x0 = j.at("x0").get<Point>();
    o.antithetic = j.value("antithetic", o.antithetic);
    o.reflection = j.value("reflection", o.reflection);
    o.compare_pde = j.value("compare_pde", o.compare_pde);
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{{"command", c.command},
                       {"domain", c.domain},
                       {"rhs", c.rhs},
                       {"lambda", c.lambda},
                       {"resolution", c.resolution},
                       {"truncation", c.truncation},
                       {"quad_resolution", c.quad_resolution},
                       {"n_radial", c.n_radial},
                       {"dims", {c.dims_lo, c.dims_hi}},
                       {"extra_dims", c.extra_dims},
                       {"profile_resolution", c.profile_resolution},
                       {"free_resolution", c.free_resolution},
                       {"oracle", c.oracle},
                       {"out", c.out_dir},
                       {"format", c.format}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    c.command = j.value("command", c.command);
    if (j.contains("domain")) from_json(j.at("domain"), c.domain);
    if (j.contains("rhs")) from_json(j.at("rhs"), c.rhs);
    c.lambda = j.value("lambda", c.lambda);
    if (j.contains("resolution")) {
        if (j.at("resolution").is_number())
            c.resolution = {j.at("resolution").get<int>()};
        else
            c.resolution = j.at("resolution").get<std::vector<int>>();
    }
    c.truncation = j.value("truncation", c.truncation);
    c.quad_resolution = j.value("quad_resolution", c.quad_resolution);
    c.n_radial = j.value("n_radial", c.n_radial);
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        if (d.is_array() && d.size() == 2) {
            c.dims_lo = d[0].get<int>();
            c.dims_hi = d[1].get<int>();
        }
    }
    c.extra_dims = j.value("extra_dims", c.extra_dims);
    c.profile_resolution = j.value("profile_resolution", c.profile_resolution);
    c.free_resolution = j.value("free_resolution", c.free_resolution);
    if (j.contains("oracle")) from_json(j.at("oracle"), c.oracle);
    c.out_dir = j.value("out", c.out_dir);
    c.format = j.value("format", c.format);
}

inline std::string canonical_dump(const ExperimentConfig& c) {
    nlohmann::json j;
    to_json(j, c);
    return j.dump(2);
}

/// Fingerprint of the experiment inputs; the output directory is not part of
/// the experiment, so runs into different directories hash identically.
inline std::string config_hash(const ExperimentConfig& c) {
    ExperimentConfig keyed = c;
    keyed.out_dir.clear();
    return hex64(fnv1a64(canonical_dump(keyed)));
}

inline ExperimentConfig parse_config(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig c;
    from_json(j, c);
    return c;
}

}  // namespace oun
