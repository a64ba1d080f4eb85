#include "rvflight/scenario.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "rvflight/errors.hpp"
#include "rvflight/models.hpp"

namespace rvflight {

const char* to_string(Parameterization p) {
    switch (p) {
        case Parameterization::rv: return "rv";
        case Parameterization::rvl: return "rvl";
        case Parameterization::rvh: return "rvh";
        case Parameterization::spherical: return "spherical";
        case Parameterization::cartesian: return "cartesian";
    }
    return "unknown";
}

Parameterization parse_parameterization(const std::string& name, const std::string& field) {
    for (Parameterization p : kAllParameterizations) {
        if (name == to_string(p)) return p;
    }
    throw ConfigError(field, "unknown parameterization '" + name + "'");
}

// -- YAML parsing ----------------------------------------------------------------

namespace {

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

double scalar_double(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) throw ConfigError(field, "expected a number");
    const std::string& s = node.Scalar();
    double value = 0.0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(field, "expected a number, got '" + s + "'");
    }
    if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
    return value;
}

double get_double(const YAML::Node& parent, const std::string& key, const std::string& path,
                  std::optional<double> fallback = std::nullopt) {
    const YAML::Node node = parent[key];
    if (!node) {
        if (fallback) return *fallback;
        throw ConfigError(join(path, key), "missing");
    }
    return scalar_double(node, join(path, key));
}

double get_positive(const YAML::Node& parent, const std::string& key, const std::string& path,
                    std::optional<double> fallback = std::nullopt) {
    const double v = get_double(parent, key, path, fallback);
    if (!(v > 0.0)) throw ConfigError(join(path, key), "must be positive");
    return v;
}

double get_nonnegative(const YAML::Node& parent, const std::string& key, const std::string& path,
                       std::optional<double> fallback = std::nullopt) {
    const double v = get_double(parent, key, path, fallback);
    if (v < 0.0) throw ConfigError(join(path, key), "must be non-negative");
    return v;
}

std::string get_string(const YAML::Node& parent, const std::string& key, const std::string& path,
                       std::optional<std::string> fallback = std::nullopt) {
    const YAML::Node node = parent[key];
    if (!node) {
        if (fallback) return *fallback;
        throw ConfigError(join(path, key), "missing");
    }
    if (!node.IsScalar()) throw ConfigError(join(path, key), "expected a string");
    return node.Scalar();
}

bool get_bool(const YAML::Node& parent, const std::string& key, const std::string& path, bool fallback) {
    const YAML::Node node = parent[key];
    if (!node) return fallback;
    try {
        return node.as<bool>();
    } catch (const YAML::Exception&) {
        throw ConfigError(join(path, key), "expected true or false");
    }
}

std::vector<double> get_vector(const YAML::Node& parent, const std::string& key, const std::string& path,
                               std::size_t n) {
    const std::string field = join(path, key);
    const YAML::Node node = parent[key];
    if (!node) throw ConfigError(field, "missing");
    if (!node.IsSequence() || node.size() != n) {
        throw ConfigError(field, "expected a list of " + std::to_string(n) + " numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(scalar_double(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Vec3 get_vec3(const YAML::Node& parent, const std::string& key, const std::string& path) {
    const auto v = get_vector(parent, key, path, 3);
    return Vec3(v[0], v[1], v[2]);
}

UnitQuaternion get_quaternion(const YAML::Node& parent, const std::string& key, const std::string& path) {
    const auto q = get_vector(parent, key, path, 4);
    try {
        return UnitQuaternion(q[0], q[1], q[2], q[3]);
    } catch (const DomainError&) {
        throw ConfigError(join(path, key), "quaternion must have unit norm");
    }
}

YAML::Node section(const YAML::Node& root, const std::string& key, bool required) {
    const YAML::Node node = root[key];
    if (!node) {
        if (required) throw ConfigError(key, "missing section");
        return YAML::Node(YAML::NodeType::Map);
    }
    if (!node.IsMap()) throw ConfigError(key, "expected a mapping");
    return node;
}

/// radius from either `r` or `altitude`.
double get_radius(const YAML::Node& node, const std::string& path, const CentralBody& body) {
    if (node["r"] && node["altitude"]) throw ConfigError(join(path, "r"), "give either r or altitude, not both");
    if (node["r"]) return get_positive(node, "r", path);
    const double r = body.radius + get_double(node, "altitude", path);
    if (!(r > 0.0)) throw ConfigError(join(path, "altitude"), "radius must be positive");
    return r;
}

std::vector<Parameterization> get_parameterizations(const YAML::Node& root, const std::string& key,
                                                    std::vector<Parameterization> fallback) {
    const YAML::Node node = root[key];
    if (!node) return fallback;
    if (!node.IsSequence()) throw ConfigError(key, "expected a list");
    std::vector<Parameterization> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string field = key + "[" + std::to_string(i) + "]";
        if (!node[i].IsScalar()) throw ConfigError(field, "expected a name");
        const Parameterization p = parse_parameterization(node[i].Scalar(), field);
        if (std::find(out.begin(), out.end(), p) != out.end()) throw ConfigError(field, "listed twice");
        out.push_back(p);
    }
    return out;
}

InitialCondition parse_initial(const YAML::Node& node, const CentralBody& body) {
    const std::string path = "initial_state";
    const std::string form = get_string(node, "form", path);
    InitialCondition ic;
    if (form == "rv") {
        ic.form = InitialForm::rv;
        TenParameterState s;
        s.r = get_radius(node, path, body);
        s.v = get_positive(node, "v", path);
        s.qa = get_quaternion(node, "qa", path);
        s.qb = get_quaternion(node, "qb", path);
        ic.rv = s;
        ic.cartesian = rv_to_cartesian(s);
    } else if (form == "rvh") {
        ic.form = InitialForm::rvh;
        RvhState s;
        s.r = get_radius(node, path, body);
        s.v = get_positive(node, "v", path);
        s.qa = get_quaternion(node, "qa", path);
        s.eps_b3 = get_double(node, "eps_b3", path);
        s.eta_b = get_double(node, "eta_b", path);
        if (std::abs(std::hypot(s.eps_b3, s.eta_b) - 1.0) > UnitQuaternion::kNormTolerance) {
            throw ConfigError(join(path, "eta_b"), "(eps_b3, eta_b) must have unit norm");
        }
        ic.rvh = s;
        ic.cartesian = rvh_to_cartesian(s);
    } else if (form == "cartesian") {
        ic.form = InitialForm::cartesian;
        ic.cartesian.position = get_vec3(node, "position", path);
        ic.cartesian.velocity = get_vec3(node, "velocity", path);
        if (!(ic.cartesian.position.norm() > 0.0)) throw ConfigError(join(path, "position"), "must be nonzero");
        if (!(ic.cartesian.velocity.norm() > 0.0)) throw ConfigError(join(path, "velocity"), "must be nonzero");
    } else if (form == "spherical") {
        ic.form = InitialForm::spherical;
        SphericalState s;
        s.r = get_radius(node, path, body);
        s.lon = get_double(node, "lon", path);
        s.lat = get_double(node, "lat", path);
        s.v = get_positive(node, "v", path);
        s.gamma = get_double(node, "gamma", path);
        s.psi = get_double(node, "psi", path);
        if (std::abs(s.lat) > 0.5 * std::numbers::pi) throw ConfigError(join(path, "lat"), "must be within [-pi/2, pi/2]");
        if (std::abs(s.gamma) > 0.5 * std::numbers::pi) throw ConfigError(join(path, "gamma"), "must be within [-pi/2, pi/2]");
        ic.spherical = s;
        ic.cartesian = spherical_to_cartesian(s);
    } else {
        throw ConfigError(join(path, "form"), "expected rv, rvh, cartesian or spherical");
    }
    return ic;
}

ControlProfile parse_controls(const YAML::Node& node, const Vehicle& vehicle) {
    const std::string path = "controls";
    const std::string mode_name = get_string(node, "bank_mode", path, std::string("sigma"));
    BankMode mode = BankMode::sigma;
    if (mode_name == "beta") {
        mode = BankMode::beta;
    } else if (mode_name != "sigma") {
        throw ConfigError(join(path, "bank_mode"), "expected sigma or beta");
    }
    std::vector<ControlKnot> knots;
    const YAML::Node profile = node["profile"];
    if (profile) {
        if (!profile.IsSequence()) throw ConfigError(join(path, "profile"), "expected a list of knots");
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const std::string kp = join(path, "profile[" + std::to_string(i) + "]");
            const YAML::Node k = profile[i];
            if (!k.IsMap()) throw ConfigError(kp, "expected a mapping");
            ControlKnot knot;
            knot.t = get_double(k, "t", kp);
            knot.alpha = get_double(k, "alpha", kp, 0.0);
            knot.bank = get_double(k, "bank", kp, 0.0);
            if (k["thrust"]) knot.thrust = get_nonnegative(k, "thrust", kp);
            if (!knots.empty() && !(knot.t > knots.back().t)) {
                throw ConfigError(join(kp, "t"), "knot times must increase strictly");
            }
            knots.push_back(knot);
        }
    }
    return ControlProfile(std::move(knots), mode, vehicle.thrust);
}

IntegratorConfig parse_integrator(const YAML::Node& node) {
    const std::string path = "integrator";
    IntegratorConfig c;
    const std::string method = get_string(node, "method", path, std::string("rk45"));
    if (method == "rk4") {
        c.method = Method::rk4;
    } else if (method == "rk45") {
        c.method = Method::rk45;
    } else {
        throw ConfigError(join(path, "method"), "expected rk4 or rk45");
    }
    c.step = get_positive(node, "step", path, c.step);
    c.initial_step = get_nonnegative(node, "initial_step", path, c.initial_step);
    c.rel_tol = get_positive(node, "rel_tol", path, c.rel_tol);
    c.abs_tol = get_positive(node, "abs_tol", path, c.abs_tol);
    c.renormalize = get_bool(node, "renormalize", path, c.renormalize);
    const double max_steps = get_positive(node, "max_steps", path, static_cast<double>(c.max_steps));
    c.max_steps = static_cast<std::size_t>(max_steps);
    c.sample_interval = get_nonnegative(node, "sample_interval", path, c.sample_interval);
    return c;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("<document>", std::string("YAML syntax error: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("<document>", "expected a mapping at top level");

    ScenarioConfig cfg;
    cfg.name = get_string(root, "name", "", std::string("scenario"));

    const YAML::Node body = section(root, "body", false);
    cfg.env.body.mu = get_positive(body, "mu", "body", cfg.env.body.mu);
    cfg.env.body.radius = get_positive(body, "radius", "body", cfg.env.body.radius);
    cfg.env.body.spin_rate = get_double(body, "spin_rate", "body", cfg.env.body.spin_rate);

    const YAML::Node atm = section(root, "atmosphere", false);
    cfg.env.atmosphere.rho0 = get_nonnegative(atm, "rho0", "atmosphere", cfg.env.atmosphere.rho0);
    cfg.env.atmosphere.scale_height = get_positive(atm, "scale_height", "atmosphere", cfg.env.atmosphere.scale_height);

    const YAML::Node aero = section(root, "aero", false);
    cfg.env.aero.reference_area = get_positive(aero, "reference_area", "aero", cfg.env.aero.reference_area);
    cfg.env.aero.cl_alpha = get_double(aero, "cl_alpha", "aero", cfg.env.aero.cl_alpha);
    cfg.env.aero.cd0 = get_nonnegative(aero, "cd0", "aero", cfg.env.aero.cd0);
    cfg.env.aero.k = get_nonnegative(aero, "k", "aero", cfg.env.aero.k);

    const YAML::Node vehicle = section(root, "vehicle", true);
    cfg.env.vehicle.mass = get_positive(vehicle, "mass", "vehicle");
    cfg.env.vehicle.thrust = get_nonnegative(vehicle, "thrust", "vehicle", 0.0);
    cfg.env.vehicle.thrust_offset = get_double(vehicle, "thrust_offset", "vehicle", 0.0);

    const YAML::Node initial = section(root, "initial_state", true);
    cfg.initial = parse_initial(initial, cfg.env.body);
    cfg.t0 = get_double(initial, "t0", "initial_state", 0.0);

    cfg.controls = parse_controls(section(root, "controls", false), cfg.env.vehicle);
    cfg.integrator = parse_integrator(section(root, "integrator", false));

    const YAML::Node stop = section(root, "stop", true);
    cfg.stop.t_final = get_double(stop, "t_final", "stop");
    if (!(cfg.stop.t_final > cfg.t0)) throw ConfigError("stop.t_final", "must exceed initial_state.t0");
    if (stop["radius"] && stop["altitude"]) throw ConfigError("stop.radius", "give either radius or altitude, not both");
    if (stop["radius"]) {
        cfg.stop.radius_target = get_positive(stop, "radius", "stop");
    } else if (stop["altitude"]) {
        cfg.stop.radius_target = cfg.env.body.radius + get_double(stop, "altitude", "stop");
        if (!(*cfg.stop.radius_target > 0.0)) throw ConfigError("stop.altitude", "radius must be positive");
    }

    cfg.parameterizations = get_parameterizations(root, "parameterizations", {Parameterization::rv});
    if (cfg.parameterizations.empty()) throw ConfigError("parameterizations", "must not be empty");
    cfg.expect_singularity = get_parameterizations(root, "expect_singularity", {});

    const YAML::Node output = section(root, "output", false);
    cfg.output_dir = get_string(output, "dir", "output", std::string());

    // Bank-reference compatibility.
    const auto& knots = cfg.controls.knots();
    const bool lift = cfg.env.aero.cl_alpha != 0.0 &&
                      std::any_of(knots.begin(), knots.end(), [](const ControlKnot& k) { return k.alpha != 0.0; });
    const bool thrust = cfg.env.vehicle.thrust != 0.0 ||
                        std::any_of(knots.begin(), knots.end(),
                                    [](const ControlKnot& k) { return k.thrust.value_or(0.0) != 0.0; });
    const bool may_lift = lift || thrust;
    for (Parameterization p : cfg.parameterizations) {
        if (p == Parameterization::rvl && cfg.controls.bank_mode() != BankMode::sigma) {
            throw ConfigError("controls.bank_mode", "rvl needs a sigma bank profile");
        }
        if (p == Parameterization::spherical && may_lift && cfg.controls.bank_mode() != BankMode::beta) {
            throw ConfigError("controls.bank_mode", "spherical needs a beta bank profile when lift or thrust is present");
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

// -- initial states --------------------------------------------------------------

TenParameterState initial_rv(const ScenarioConfig& cfg) {
    if (cfg.initial.rv) return *cfg.initial.rv;
    return cartesian_to_rv(cfg.initial.cartesian);
}

TenParameterState initial_rvl(const ScenarioConfig& cfg) {
    const TenParameterState rv = initial_rv(cfg);
    const double sigma0 = cfg.controls.at(cfg.t0).bank;
    return sigma0 == 0.0 ? rv : rotate_velocity_frame(rv, sigma0);
}

RvhState initial_rvh(const ScenarioConfig& cfg) {
    if (cfg.initial.rvh) return *cfg.initial.rvh;
    return cartesian_to_rvh(cfg.initial.cartesian);
}

SphericalState initial_spherical(const ScenarioConfig& cfg) {
    if (cfg.initial.spherical) return *cfg.initial.spherical;
    return cartesian_to_spherical(cfg.initial.cartesian);
}

// -- runs ------------------------------------------------------------------------

namespace {

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

void fill_cartesian(CsvRow& row, double t, const CartesianState& c, const Environment& env) {
    row[col_t] = t;
    row[col_x] = c.position.x();
    row[col_y] = c.position.y();
    row[col_z] = c.position.z();
    row[col_vx] = c.velocity.x();
    row[col_vy] = c.velocity.y();
    row[col_vz] = c.velocity.z();
    const double r = c.position.norm();
    const double v = c.velocity.norm();
    row[col_r] = r;
    row[col_v] = v;
    row[col_h_mag] = c.position.cross(c.velocity).norm();
    row[col_energy] = 0.5 * v * v - env.body.mu / r;
}

void fill_quat(CsvRow& row, std::size_t first, const Eigen::Vector4d& q) {
    for (std::size_t i = 0; i < 4; ++i) row[first + i] = q[static_cast<int>(i)];
}

template <class F>
std::optional<double> guarded(F&& f) {
    try {
        return f();
    } catch (const SingularityError&) {
        return std::nullopt;
    }
}

/// Angle from g1 to `lift` about b1, evaluated in E.
std::optional<double> geometric_beta(const CartesianState& c, const Vec3& lift) {
    const Vec3 h = c.position.cross(c.velocity);
    const double hn = h.norm();
    if (!(hn > 1e-12 * c.position.norm() * c.velocity.norm())) return std::nullopt;
    const Vec3 g2 = -h / hn;
    const Vec3 g1 = g2.cross(c.velocity.normalized());
    return std::atan2(lift.dot(g2), lift.dot(g1));
}

template <class Model, class RowFn>
ParameterizationRun execute(Parameterization p, const Model& model, const typename Model::Vector& x0,
                            const ScenarioConfig& cfg, RowFn&& row_fn) {
    ParameterizationRun run;
    run.param = p;
    run.guard_expected =
        std::find(cfg.expect_singularity.begin(), cfg.expect_singularity.end(), p) != cfg.expect_singularity.end();
    const auto start = std::chrono::steady_clock::now();
    const auto res = propagate(model, x0, cfg.t0, cfg.integrator, cfg.stop, cfg.controls.breakpoints());
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.stop = res.stop.kind;
    run.t_event = res.stop.t_event;
    run.message = res.stop.message;
    run.steps = res.steps;
    run.derivative_evals = res.derivative_evals;
    for (std::size_t i = 0; i < res.trajectory.t.size(); ++i) {
        const double t = res.trajectory.t[i];
        const auto& x = res.trajectory.x[i];
        const CartesianState c = model.to_cartesian(x);
        CsvRow row;
        fill_cartesian(row, t, c, cfg.env);
        const ControlInput u = cfg.controls.at(t);
        row[col_alpha] = u.alpha;
        row_fn(row, x, u, c);
        if (row[col_norm_qa] || row[col_norm_qb]) {
            double drift = 0.0;
            if (row[col_norm_qa]) drift = std::max(drift, std::abs(*row[col_norm_qa] - 1.0));
            if (row[col_norm_qb]) drift = std::max(drift, std::abs(*row[col_norm_qb] - 1.0));
            run.max_norm_drift = std::max(run.max_norm_drift.value_or(0.0), drift);
        }
        run.t.push_back(t);
        run.cartesian.push_back(c);
        run.rows.push_back(row);
    }
    return run;
}

void fill_ten(CsvRow& row, const std::array<double, 10>& x) {
    row[col_r] = x[0];
    row[col_v] = x[5];
    fill_quat(row, col_eps_a1, Eigen::Vector4d(x[1], x[2], x[3], x[4]));
    fill_quat(row, col_eps_b1, Eigen::Vector4d(x[6], x[7], x[8], x[9]));
    row[col_norm_qa] = Eigen::Vector4d(x[1], x[2], x[3], x[4]).norm();
    row[col_norm_qb] = Eigen::Vector4d(x[6], x[7], x[8], x[9]).norm();
}

ParameterizationRun run_one(Parameterization p, const ScenarioConfig& cfg) {
    const BankMode mode = cfg.controls.bank_mode();
    switch (p) {
        case Parameterization::rv: {
            RvModel model(cfg.env, cfg.controls);
            return execute(p, model, RvModel::pack(initial_rv(cfg)), cfg,
                           [&](CsvRow& row, const RvModel::Vector& x, const ControlInput& u, const CartesianState&) {
                               fill_ten(row, x);
                               const Dcm cba = c_ba(RvModel::unpack(x));
                               if (mode == BankMode::sigma) {
                                   row[col_sigma] = u.bank;
                                   row[col_beta] = guarded([&] { return beta_from_sigma(u.bank, cba); });
                               } else {
                                   row[col_beta] = u.bank;
                                   row[col_sigma] = guarded([&] { return wrap_angle(u.bank - rvl_beta(cba)); });
                               }
                           });
        }
        case Parameterization::rvl: {
            RvlModel model(cfg.env, cfg.controls);
            return execute(p, model, RvlModel::pack(initial_rvl(cfg)), cfg,
                           [&](CsvRow& row, const RvlModel::Vector& x, const ControlInput&, const CartesianState&) {
                               fill_ten(row, x);
                               row[col_beta] = guarded([&] { return rvl_beta(c_ba(RvlModel::unpack(x))); });
                           });
        }
        case Parameterization::rvh: {
            RvhState s0;
            try {
                s0 = initial_rvh(cfg);
            } catch (const SingularityError& e) {
                ParameterizationRun run;
                run.param = p;
                run.guard_expected = std::find(cfg.expect_singularity.begin(), cfg.expect_singularity.end(), p) !=
                                     cfg.expect_singularity.end();
                run.stop = StopKind::singularity_guard;
                run.t_event = cfg.t0;
                run.message = e.what();
                return run;
            }
            RvhModel model(cfg.env, cfg.controls);
            return execute(p, model, RvhModel::pack(s0), cfg,
                           [&](CsvRow& row, const RvhModel::Vector& x, const ControlInput& u, const CartesianState&) {
                               row[col_r] = x[0];
                               row[col_v] = x[5];
                               fill_quat(row, col_eps_a1, Eigen::Vector4d(x[1], x[2], x[3], x[4]));
                               fill_quat(row, col_eps_b1, Eigen::Vector4d(0.0, 0.0, x[6], x[7]));
                               row[col_norm_qa] = Eigen::Vector4d(x[1], x[2], x[3], x[4]).norm();
                               row[col_norm_qb] = std::hypot(x[6], x[7]);
                               const Dcm cba = c_ba(RvhModel::unpack(x));
                               if (mode == BankMode::sigma) {
                                   row[col_sigma] = u.bank;
                                   row[col_beta] = guarded([&] { return beta_from_sigma(u.bank, cba); });
                               } else {
                                   row[col_beta] = u.bank;
                                   row[col_sigma] = guarded([&] { return wrap_angle(u.bank - rvl_beta(cba)); });
                               }
                           });
        }
        case Parameterization::spherical: {
            SphericalModel model(cfg.env, cfg.controls);
            return execute(p, model, SphericalModel::pack(initial_spherical(cfg)), cfg,
                           [&](CsvRow& row, const SphericalModel::Vector& x, const ControlInput& u,
                               const CartesianState&) {
                               row[col_r] = x[0];
                               row[col_v] = x[3];
                               if (mode == BankMode::beta) row[col_beta] = u.bank;
                           });
        }
        case Parameterization::cartesian: {
            TransportedCartesianModel model(cfg.env, cfg.controls);
            return execute(p, model, TransportedCartesianModel::pack(initial_rv(cfg)), cfg,
                           [&](CsvRow& row, const TransportedCartesianModel::Vector& x, const ControlInput& u,
                               const CartesianState& c) {
                               if (mode == BankMode::beta) {
                                   row[col_beta] = u.bank;
                                   return;
                               }
                               row[col_sigma] = u.bank;
                               const Vec3 b1 = c.velocity.normalized();
                               const Vec3 b2(x[6], x[7], x[8]);
                               const Vec3 lift = std::cos(u.bank) * b2 + std::sin(u.bank) * b1.cross(b2);
                               row[col_beta] = geometric_beta(c, lift);
                           });
        }
    }
    throw DomainError("unknown parameterization");
}

nlohmann::json cartesian_json(const CartesianState& c) {
    return {{"position", {c.position.x(), c.position.y(), c.position.z()}},
            {"velocity", {c.velocity.x(), c.velocity.y(), c.velocity.z()}},
            {"r", c.position.norm()},
            {"v", c.velocity.norm()}};
}

}  // namespace

ErrorSeries position_error(const ParameterizationRun& run, const ParameterizationRun& reference) {
    ErrorSeries out;
    out.param = run.param;
    const auto& rt = reference.t;
    if (rt.empty()) return out;
    for (std::size_t i = 0; i < run.t.size(); ++i) {
        const double t = run.t[i];
        if (t < rt.front() || t > rt.back()) continue;
        const auto it = std::lower_bound(rt.begin(), rt.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - rt.begin());
        Vec3 ref;
        if (rt[j] == t) {
            ref = reference.cartesian[j].position;
        } else {
            const double w = (t - rt[j - 1]) / (rt[j] - rt[j - 1]);
            ref = (1.0 - w) * reference.cartesian[j - 1].position + w * reference.cartesian[j].position;
        }
        const double e = (run.cartesian[i].position - ref).norm();
        out.t.push_back(t);
        out.e_r.push_back(e);
        out.max_e_r = std::max(out.max_e_r, e);
    }
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
    ScenarioResult result;
    const auto& selection = options.selection.empty() ? cfg.parameterizations : options.selection;
    for (Parameterization p : selection) {
        try {
            result.runs.push_back(run_one(p, cfg));
        } catch (const Error& e) {
            ParameterizationRun run;
            run.param = p;
            run.stop = StopKind::step_failure;
            run.message = e.what();
            if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) run.t_event = ie->time();
            result.runs.push_back(std::move(run));
        }
    }

    for (const auto& run : result.runs) {
        if (run.stop == StopKind::step_failure) {
            result.exit_code = 4;
        } else if (run.stop == StopKind::singularity_guard && !run.guard_expected && result.exit_code == 0) {
            result.exit_code = 3;
        }
    }

    if (options.compare && !result.runs.empty()) {
        ComparisonReport report;
        const ParameterizationRun* ref = &result.runs.front();
        for (const auto& run : result.runs) {
            if (run.param == Parameterization::cartesian) ref = &run;
        }
        if (ref->param != Parameterization::cartesian) {
            for (const auto& run : result.runs) {
                if (run.param == Parameterization::rv) ref = &run;
            }
        }
        report.reference = ref->param;
        for (const auto& run : result.runs) {
            if (&run != ref) report.errors.push_back(position_error(run, *ref));
        }
        result.comparison = std::move(report);
    }

    if (!options.output_dir.empty()) {
        std::filesystem::create_directories(options.output_dir);
        for (const auto& run : result.runs) {
            const auto path = std::filesystem::path(options.output_dir) / (cfg.name + "_" + to_string(run.param) + ".csv");
            write_trajectory_csv(path.string(), run.rows);
        }
        if (result.comparison) {
            const auto path = std::filesystem::path(options.output_dir) / (cfg.name + "_comparison.json");
            std::ofstream out(path);
            if (!out) throw Error("cannot write '" + path.string() + "'");
            out << comparison_json(result) << '\n';
        }
    }
    return result;
}

std::string comparison_json(const ScenarioResult& result) {
    nlohmann::json j;
    j["runs"] = nlohmann::json::array();
    for (const auto& run : result.runs) {
        nlohmann::json r;
        r["parameterization"] = to_string(run.param);
        r["stop"] = to_string(run.stop);
        r["t_event"] = run.t_event;
        r["message"] = run.message;
        r["guard_expected"] = run.guard_expected;
        r["steps"] = run.steps;
        r["derivative_evals"] = run.derivative_evals;
        r["wall_seconds"] = run.wall_seconds;
        r["samples"] = run.t.size();
        if (!run.cartesian.empty()) r["final_state"] = cartesian_json(run.cartesian.back());
        if (run.max_norm_drift) {
            r["max_norm_drift"] = *run.max_norm_drift;
            nlohmann::json drift = nlohmann::json::array();
            for (const auto& row : run.rows) {
                double d = 0.0;
                if (row[col_norm_qa]) d = std::max(d, std::abs(*row[col_norm_qa] - 1.0));
                if (row[col_norm_qb]) d = std::max(d, std::abs(*row[col_norm_qb] - 1.0));
                drift.push_back(d);
            }
            r["norm_drift"] = {{"t", run.t}, {"drift", drift}};
        }
        j["runs"].push_back(r);
    }
    if (result.comparison) {
        nlohmann::json c;
        c["reference"] = to_string(result.comparison->reference);
        c["errors"] = nlohmann::json::array();
        for (const auto& e : result.comparison->errors) {
            c["errors"].push_back({{"parameterization", to_string(e.param)},
                                   {"max_e_r", e.max_e_r},
                                   {"t", e.t},
                                   {"e_r", e.e_r}});
        }
        j["comparison"] = c;
    }
    j["exit_code"] = result.exit_code;
    return j.dump(2);
}

}  // namespace rvflight
