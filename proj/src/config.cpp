#include "narlab/config.hpp"

#include <set>
#include <sstream>

#include "json.hpp"
#include "narlab/hyperbolic.hpp"

namespace narlab {

namespace {

using json = nlohmann::json;

struct Ctx {
    std::vector<ConfigError>& errors;
    void add(const std::string& path, const std::string& message) {
        errors.push_back({path, message});
    }
};

void check_keys(Ctx& ctx, const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) ctx.add(path + "/" + it.key(), "unknown key");
    }
}

bool get_number(Ctx& ctx, const json& obj, const std::string& path, const std::string& key,
                double& out, bool required = false) {
    if (!obj.contains(key)) {
        if (required) ctx.add(path + "/" + key, "missing required key");
        return false;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        ctx.add(path + "/" + key, "expected a number");
        return false;
    }
    out = v.get<double>();
    return true;
}

bool get_int(Ctx& ctx, const json& obj, const std::string& path, const std::string& key,
             std::int64_t& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        ctx.add(path + "/" + key, "expected an integer");
        return false;
    }
    out = v.get<std::int64_t>();
    return true;
}

bool get_string(Ctx& ctx, const json& obj, const std::string& path, const std::string& key,
                std::string& out, bool required = false) {
    if (!obj.contains(key)) {
        if (required) ctx.add(path + "/" + key, "missing required key");
        return false;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
        ctx.add(path + "/" + key, "expected a string");
        return false;
    }
    out = v.get<std::string>();
    return true;
}

bool get_vector(Ctx& ctx, const json& obj, const std::string& path, const std::string& key,
                std::vector<double>& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_array()) {
        ctx.add(path + "/" + key, "expected an array of numbers");
        return false;
    }
    std::vector<double> tmp;
    for (const auto& e : v) {
        if (!e.is_number()) {
            ctx.add(path + "/" + key, "expected an array of numbers");
            return false;
        }
        tmp.push_back(e.get<double>());
    }
    out = std::move(tmp);
    return true;
}

// weight: number or [re, im]
bool get_weight(Ctx& ctx, const json& obj, const std::string& path, cplx& out) {
    if (!obj.contains("weight")) return true;  // default 1
    const json& v = obj.at("weight");
    if (v.is_number()) {
        out = {v.get<double>(), 0.0};
        return true;
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        out = {v[0].get<double>(), v[1].get<double>()};
        return true;
    }
    ctx.add(path + "/weight", "expected a number or [re, im]");
    return false;
}

void parse_quadrature(Ctx& ctx, const json& obj, const std::string& path, QuadratureSpec& q) {
    check_keys(ctx, obj, path, {"engine", "rel_tol", "abs_tol", "max_evals", "truncation_radius",
                                "seed"});
    std::string engine;
    if (get_string(ctx, obj, path, "engine", engine)) {
        try {
            q.engine = QuadratureSpec::engine_from_string(engine);
        } catch (const std::exception& e) {
            ctx.add(path + "/engine", e.what());
        }
    }
    get_number(ctx, obj, path, "rel_tol", q.rel_tol);
    get_number(ctx, obj, path, "abs_tol", q.abs_tol);
    std::int64_t n;
    if (get_int(ctx, obj, path, "max_evals", n)) q.max_evals = n;
    get_number(ctx, obj, path, "truncation_radius", q.truncation_radius);
    if (get_int(ctx, obj, path, "seed", n)) q.seed = static_cast<std::uint64_t>(n);
    if (!(q.rel_tol > 0.0)) ctx.add(path + "/rel_tol", "must be positive");
    if (!(q.abs_tol > 0.0)) ctx.add(path + "/abs_tol", "must be positive");
    if (q.max_evals < 1000) ctx.add(path + "/max_evals", "must be at least 1000");
    if (!(q.truncation_radius > 0.0)) ctx.add(path + "/truncation_radius", "must be positive");
}

void parse_schedule(Ctx& ctx, const json& obj, const std::string& path, Schedule& s) {
    check_keys(ctx, obj, path, {"a0", "ratio", "steps", "tol"});
    get_number(ctx, obj, path, "a0", s.a0);
    get_number(ctx, obj, path, "ratio", s.ratio);
    std::int64_t n;
    if (get_int(ctx, obj, path, "steps", n)) s.steps = static_cast<int>(n);
    get_number(ctx, obj, path, "tol", s.tol);
    try {
        s.validate();
    } catch (const std::exception& e) {
        ctx.add(path, e.what());
    }
}

void parse_cap(Ctx& ctx, const json& obj, const std::string& path, Cap& cap) {
    check_keys(ctx, obj, path, {"center", "angular_radius"});
    get_vector(ctx, obj, path, "center", cap.center);
    get_number(ctx, obj, path, "angular_radius", cap.angular_radius);
    if (!(cap.angular_radius > 0.0)) ctx.add(path + "/angular_radius", "must be positive");
}

void parse_sector(Ctx& ctx, const json& obj, const std::string& path, Sector& sec) {
    check_keys(ctx, obj, path, {"alpha", "cap1", "cap2", "theta_interval"});
    get_number(ctx, obj, path, "alpha", sec.alpha);
    if (!(sec.alpha > 0.0)) ctx.add(path + "/alpha", "must be positive");
    if (obj.contains("cap1")) parse_cap(ctx, obj.at("cap1"), path + "/cap1", sec.cap1);
    if (obj.contains("cap2")) parse_cap(ctx, obj.at("cap2"), path + "/cap2", sec.cap2);
    if (obj.contains("theta_interval")) {
        std::vector<double> iv;
        get_vector(ctx, obj, path, "theta_interval", iv);
        if (iv.size() == 2 && iv[1] > iv[0]) {
            sec.theta_lo = iv[0];
            sec.theta_hi = iv[1];
        } else {
            ctx.add(path + "/theta_interval", "expected [lo, hi] with hi > lo");
        }
    }
}

void parse_ray(Ctx& ctx, const json& obj, const std::string& path, Ray& ray) {
    check_keys(ctx, obj, path, {"alpha", "omega", "zeta", "theta"});
    get_number(ctx, obj, path, "alpha", ray.alpha);
    if (!(ray.alpha > 0.0)) ctx.add(path + "/alpha", "must be positive");
    get_vector(ctx, obj, path, "omega", ray.omega);
    get_vector(ctx, obj, path, "zeta", ray.zeta);
    get_number(ctx, obj, path, "theta", ray.theta);
}

void parse_measure(Ctx& ctx, const json& v, const std::string& path, ExperimentConfig& cfg) {
    auto registered = registered_density_names();
    auto name_known = [&](const std::string& name) {
        std::string base = name.substr(0, name.find(':'));
        for (const auto& r : registered)
            if (r.substr(0, r.find(':')) == base) return true;
        return false;
    };
    auto unknown_msg = [&](const std::string& name) {
        std::ostringstream os;
        os << "unknown density '" << name << "'; registered:";
        for (const auto& r : registered) os << " " << r;
        return os.str();
    };
    if (v.is_string()) {
        std::string name = v.get<std::string>();
        if (!name_known(name)) {
            ctx.add(path, unknown_msg(name));
            return;
        }
        cfg.densities.push_back({name, {1.0, 0.0}});
        return;
    }
    if (!v.is_object()) {
        ctx.add(path, "expected a string or an object");
        return;
    }
    check_keys(ctx, v, path, {"atoms", "densities"});
    if (v.contains("densities")) {
        const json& ds = v.at("densities");
        if (!ds.is_array()) {
            ctx.add(path + "/densities", "expected an array");
        } else {
            for (size_t i = 0; i < ds.size(); ++i) {
                std::string p = path + "/densities/" + std::to_string(i);
                ExperimentConfig::DensitySpec spec;
                if (ds[i].is_string()) {
                    spec.name = ds[i].get<std::string>();
                } else if (ds[i].is_object()) {
                    check_keys(ctx, ds[i], p, {"name", "weight"});
                    get_string(ctx, ds[i], p, "name", spec.name, true);
                    get_weight(ctx, ds[i], p, spec.weight);
                } else {
                    ctx.add(p, "expected a string or an object");
                    continue;
                }
                if (!spec.name.empty() && !name_known(spec.name)) {
                    ctx.add(p, unknown_msg(spec.name));
                    continue;
                }
                if (!spec.name.empty()) cfg.densities.push_back(std::move(spec));
            }
        }
    }
    if (v.contains("atoms")) {
        const json& as = v.at("atoms");
        if (!as.is_array()) {
            ctx.add(path + "/atoms", "expected an array");
        } else {
            for (size_t i = 0; i < as.size(); ++i) {
                std::string p = path + "/atoms/" + std::to_string(i);
                if (!as[i].is_object()) {
                    ctx.add(p, "expected an object");
                    continue;
                }
                check_keys(ctx, as[i], p, {"X", "Z", "weight"});
                ExperimentConfig::AtomSpec atom;
                get_vector(ctx, as[i], p, "X", atom.X);
                get_vector(ctx, as[i], p, "Z", atom.Z);
                get_weight(ctx, as[i], p, atom.weight);
                cfg.atoms.push_back(std::move(atom));
            }
        }
    }
}

}  // namespace

ParseResult parse_config(const std::string& json_text) {
    ParseResult out;
    Ctx ctx{out.errors};

    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& e) {
        ctx.add("", std::string("invalid JSON: ") + e.what());
        return out;
    }
    if (!doc.is_object()) {
        ctx.add("", "top-level value must be an object");
        return out;
    }

    ExperimentConfig cfg;
    check_keys(ctx, doc, "",
               {"kind", "space", "beta", "measure", "n0", "quadrature", "schedule", "sector",
                "apertures", "seed", "a_grid", "kernel_tol", "ray", "sample_count",
                "ray_sample_count", "sequence_count", "consistency_tol", "x0", "alpha1", "alpha2",
                "alpha_grid", "point_count", "residual_tol_analytic", "residual_tol_kernel"});

    get_string(ctx, doc, "", "kind", cfg.kind, true);
    static const std::set<std::string> kinds = {"kernel-check", "limit",   "hl-check",
                                                "fatou",        "two-ray", "diffop-residual"};
    if (!cfg.kind.empty() && !kinds.count(cfg.kind))
        ctx.add("/kind",
                "unknown kind; expected one of kernel-check, limit, hl-check, fatou, two-ray, "
                "diffop-residual");

    get_string(ctx, doc, "", "space", cfg.space, true);
    int dv = -1, k = -1;
    if (!cfg.space.empty()) {
        try {
            if (cfg.space.rfind("hyperbolic:", 0) == 0) {
                int l = std::stoi(cfg.space.substr(11));
                HypSpace h = make_hyp_space(l);
                dv = h.boundary.dim_v();
                k = 0;
            } else {
                HTypeGroup g = HTypeGroup::from_preset(cfg.space);
                dv = g.dim_v();
                k = g.k();
            }
        } catch (const std::exception& e) {
            ctx.add("/space", e.what());
        }
    }
    if (cfg.kind == "two-ray" && cfg.space.rfind("hyperbolic:", 0) != 0)
        ctx.add("/space", "two-ray requires a hyperbolic:l space");

    if (get_number(ctx, doc, "", "beta", cfg.beta) && !(cfg.beta > 0.0))
        ctx.add("/beta", "beta must be positive");

    if (doc.contains("measure")) parse_measure(ctx, doc.at("measure"), "/measure", cfg);
    bool needs_measure = cfg.kind == "limit" || cfg.kind == "hl-check" || cfg.kind == "fatou" ||
                         cfg.kind == "two-ray";
    if (needs_measure && cfg.atoms.empty() && cfg.densities.empty())
        ctx.add("/measure", "this experiment kind requires a measure");

    if (doc.contains("n0")) {
        const json& n0 = doc.at("n0");
        if (!n0.is_object()) {
            ctx.add("/n0", "expected an object with X and Z arrays");
        } else {
            check_keys(ctx, n0, "/n0", {"X", "Z"});
            get_vector(ctx, n0, "/n0", "X", cfg.n0_X);
            get_vector(ctx, n0, "/n0", "Z", cfg.n0_Z);
        }
    }

    if (dv >= 0) {
        if (!cfg.n0_X.empty() && static_cast<int>(cfg.n0_X.size()) != dv)
            ctx.add("/n0/X", "dimension mismatch: expected " + std::to_string(dv));
        if (!cfg.n0_Z.empty() && static_cast<int>(cfg.n0_Z.size()) != k)
            ctx.add("/n0/Z", "dimension mismatch: expected " + std::to_string(k));
        for (size_t i = 0; i < cfg.atoms.size(); ++i) {
            if (static_cast<int>(cfg.atoms[i].X.size()) != dv)
                ctx.add("/measure/atoms/" + std::to_string(i) + "/X",
                        "dimension mismatch: expected " + std::to_string(dv));
            if (static_cast<int>(cfg.atoms[i].Z.size()) != k)
                ctx.add("/measure/atoms/" + std::to_string(i) + "/Z",
                        "dimension mismatch: expected " + std::to_string(k));
        }
    }

    if (doc.contains("quadrature"))
        parse_quadrature(ctx, doc.at("quadrature"), "/quadrature", cfg.quadrature);
    if (doc.contains("schedule")) parse_schedule(ctx, doc.at("schedule"), "/schedule", cfg.schedule);
    if (doc.contains("sector")) {
        cfg.sector_given = true;
        parse_sector(ctx, doc.at("sector"), "/sector", cfg.sector);
    }
    if (doc.contains("ray")) {
        cfg.ray_given = true;
        parse_ray(ctx, doc.at("ray"), "/ray", cfg.ray);
        if (dv >= 0 && static_cast<int>(cfg.ray.omega.size()) != dv)
            ctx.add("/ray/omega", "dimension mismatch: expected " + std::to_string(dv));
        if (dv >= 0 && k > 0 && static_cast<int>(cfg.ray.zeta.size()) != k)
            ctx.add("/ray/zeta", "dimension mismatch: expected " + std::to_string(k));
    }
    if (cfg.kind == "limit" && !cfg.ray_given) ctx.add("/ray", "limit experiments require a ray");

    if (doc.contains("apertures")) {
        get_vector(ctx, doc, "", "apertures", cfg.apertures);
        for (double a : cfg.apertures)
            if (!(a > 0.0)) ctx.add("/apertures", "all apertures must be positive");
        if (cfg.apertures.empty()) ctx.add("/apertures", "must be non-empty");
    }

    std::int64_t n;
    if (get_int(ctx, doc, "", "seed", n)) cfg.seed = static_cast<std::uint64_t>(n);
    get_vector(ctx, doc, "", "a_grid", cfg.a_grid);
    for (double a : cfg.a_grid)
        if (!(a > 0.0)) ctx.add("/a_grid", "all a values must be positive");
    get_number(ctx, doc, "", "kernel_tol", cfg.kernel_tol);
    if (!(cfg.kernel_tol > 0.0)) ctx.add("/kernel_tol", "must be positive");
    if (get_int(ctx, doc, "", "sample_count", n)) cfg.sample_count = static_cast<int>(n);
    if (cfg.sample_count < 1) ctx.add("/sample_count", "must be >= 1");
    if (get_int(ctx, doc, "", "ray_sample_count", n)) cfg.ray_sample_count = static_cast<int>(n);
    if (cfg.ray_sample_count < 1) ctx.add("/ray_sample_count", "must be >= 1");
    if (get_int(ctx, doc, "", "sequence_count", n)) cfg.sequence_count = static_cast<int>(n);
    if (cfg.sequence_count < 2) ctx.add("/sequence_count", "must be >= 2");
    get_number(ctx, doc, "", "consistency_tol", cfg.consistency_tol);
    if (!(cfg.consistency_tol > 0.0)) ctx.add("/consistency_tol", "must be positive");
    get_number(ctx, doc, "", "x0", cfg.x0);
    get_number(ctx, doc, "", "alpha1", cfg.alpha1);
    get_number(ctx, doc, "", "alpha2", cfg.alpha2);
    if (cfg.kind == "two-ray" && cfg.alpha1 == cfg.alpha2)
        ctx.add("/alpha2", "alpha1 and alpha2 must be distinct");
    get_vector(ctx, doc, "", "alpha_grid", cfg.alpha_grid);
    if (get_int(ctx, doc, "", "point_count", n)) cfg.point_count = static_cast<int>(n);
    if (cfg.point_count < 1) ctx.add("/point_count", "must be >= 1");
    get_number(ctx, doc, "", "residual_tol_analytic", cfg.residual_tol_analytic);
    get_number(ctx, doc, "", "residual_tol_kernel", cfg.residual_tol_kernel);
    if (!(cfg.residual_tol_analytic > 0.0)) ctx.add("/residual_tol_analytic", "must be positive");
    if (!(cfg.residual_tol_kernel > 0.0)) ctx.add("/residual_tol_kernel", "must be positive");

    if (!out.errors.empty()) return out;
    out.config = std::move(cfg);
    return out;
}

}  // namespace narlab
