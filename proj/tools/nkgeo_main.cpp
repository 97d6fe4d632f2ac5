// nkgeo: geodesics and tensor verification on the nearly Kahler S^3 x S^3.
//
// Subcommands: sample, classify, closedness, verify, identities.
// Points are eight comma-separated reals (two unit quaternions), velocities
// eight comma-separated reals (U then V, tangent at the start point).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nkgeo/nkgeo.hpp"

namespace {

using nlohmann::json;
using namespace nkgeo;

std::string fmt17(double v) {
    if (v == 0.0) v = 0.0;  // print negative zero as 0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_reals(const std::string& text, size_t want, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            const double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InvalidInput(std::string(what) + ": malformed number '" + item + "'");
        }
    }
    if (out.size() != want)
        throw InvalidInput(std::string(what) + ": expected " + std::to_string(want) +
                           " comma-separated reals, got " + std::to_string(out.size()));
    return out;
}

NKPoint parse_point(const std::string& text) {
    const auto v = parse_reals(text, 8, "start point");
    const Quat p{v[0], v[1], v[2], v[3]};
    const Quat q{v[4], v[5], v[6], v[7]};
    if (std::abs(p.norm() - 1.0) > 1e-6 || std::abs(q.norm() - 1.0) > 1e-6)
        throw InvalidInput("start point components must be unit quaternions (within 1e-6)");
    return {UnitQuat::normalized(p), UnitQuat::normalized(q)};
}

NKTangent parse_velocity(const NKPoint& start, const std::string& text) {
    const auto v = parse_reals(text, 8, "velocity");
    try {
        return NKTangent(start, Quat{v[0], v[1], v[2], v[3]}, Quat{v[4], v[5], v[6], v[7]});
    } catch (const NotTangent&) {
        throw InvalidInput("velocity is not tangent to the start point");
    }
}

const char* case_name(GeodesicCase c) {
    switch (c) {
        case GeodesicCase::Constant: return "Constant";
        case GeodesicCase::Case1: return "Case1";
        case GeodesicCase::Case2: return "Case2";
        case GeodesicCase::Case3: return "Case3";
    }
    return "?";
}

const char* eigen_name(PEigenClass c) {
    switch (c) {
        case PEigenClass::MinusOne: return "MinusOne";
        case PEigenClass::PlusOne: return "PlusOne";
        case PEigenClass::Neither: return "Neither";
    }
    return "?";
}

json im_json(const ImQuat& v) { return json::array({v.x, v.y, v.z}); }
json quat_json(const Quat& q) { return json::array({q.w, q.x, q.y, q.z}); }

json factor_json(const FactorConstants& k) {
    return {{"a", k.a}, {"b", k.b},     {"c", k.c},        {"A", k.A},
            {"B", k.B}, {"phi", k.phi}, {"theta", k.theta}};
}

json constants_json(const GeodesicParams& gp) {
    return {{"c1", im_json(gp.c1)},         {"c2", im_json(gp.c2)},
            {"c3", im_json(gp.c3())},       {"d1", gp.d1},
            {"h", quat_json(gp.h.q())},     {"x_factor", factor_json(gp.x_factor)},
            {"y_factor", factor_json(gp.y_factor)}};
}

json check_json(const Check& c) {
    json j = {{"name", c.name}, {"max_dev", c.max_dev}, {"tol", c.tol}, {"pass", c.pass}};
    if (c.lower_bound) j["lower_bound"] = true;
    return j;
}

void emit(const std::string& out_path, const std::string& body) {
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot open output file: " + out_path);
    f << body;
    if (!f.good()) throw IoError("write failed: " + out_path);
}

struct CurveArgs {
    std::string start_text = "1,0,0,0,1,0,0,0";
    std::string velocity_text;
};

void add_curve_options(CLI::App* cmd, CurveArgs& args) {
    cmd->add_option("--start", args.start_text,
                    "start point (p,q) as 8 comma-separated reals, default (1,1)");
    cmd->add_option("--velocity", args.velocity_text,
                    "initial velocity (U,V) as 8 comma-separated reals")
        ->required();
}

// --- sample -----------------------------------------------------------------

int run_sample(const CurveArgs& cargs, double t_end, int samples, double step, bool with_oracle,
               const std::string& format, const std::string& out_path) {
    if (samples < 2) throw InvalidInput("--samples must be at least 2");
    if (!(t_end > 0.0)) throw InvalidInput("--t-end must be positive");
    if (!(step > 0.0)) throw InvalidInput("--step must be positive");

    const NKPoint start = parse_point(cargs.start_text);
    const NKTangent vel = parse_velocity(start, cargs.velocity_text);
    const GeodesicCurve curve = make_geodesic(start, vel);

    IntegratorState st;
    st.alpha = vel.alpha();
    st.beta = vel.beta();

    struct Row {
        double t;
        NKPoint closed;
        NKPoint oracle;
        double dev;
    };
    std::vector<Row> rows;
    rows.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
        Row row{t, eval(curve, t), NKPoint::origin(), 0.0};
        if (with_oracle) {
            st = advance_to(st, t, step, Projection::Renormalize);
            row.oracle = state_point(start, st);
            row.dev = distance_r8(row.closed, row.oracle);
        }
        rows.push_back(row);
    }

    std::string body;
    if (format == "json") {
        json out = {{"case", case_name(curve.params.kind)},
                    {"constants", constants_json(curve.params)},
                    {"speed", curve.speed}};
        json js = json::array();
        for (const Row& r : rows) {
            json row = {{"t", r.t},
                        {"x", quat_json(r.closed.p.q())},
                        {"y", quat_json(r.closed.q.q())}};
            if (with_oracle) {
                row["ox"] = quat_json(r.oracle.p.q());
                row["oy"] = quat_json(r.oracle.q.q());
                row["dev"] = r.dev;
            }
            js.push_back(row);
        }
        out["samples"] = js;
        body = out.dump(2) + "\n";
    } else {
        std::string csv = "t,x0,x1,x2,x3,y0,y1,y2,y3";
        if (with_oracle) csv += ",ox0,ox1,ox2,ox3,oy0,oy1,oy2,oy3,dev";
        csv += "\n";
        for (const Row& r : rows) {
            csv += fmt17(r.t);
            for (double v : point_components(r.closed)) csv += "," + fmt17(v);
            if (with_oracle) {
                for (double v : point_components(r.oracle)) csv += "," + fmt17(v);
                csv += "," + fmt17(r.dev);
            }
            csv += "\n";
        }
        body = csv;
    }
    emit(out_path, body);
    return 0;
}

// --- classify ---------------------------------------------------------------

int run_classify(const CurveArgs& cargs, const std::string& format, const std::string& out_path) {
    const NKPoint start = parse_point(cargs.start_text);
    const NKTangent vel = parse_velocity(start, cargs.velocity_text);
    const GeodesicCurve curve = make_geodesic(start, vel);
    const GeodesicParams& gp = curve.params;

    std::string body;
    if (format == "json") {
        json out = {{"case", case_name(gp.kind)},
                    {"constants", constants_json(gp)},
                    {"speed", curve.speed},
                    {"euclidean_coincident", is_euclidean_geodesic(gp)},
                    {"p_eigenvector", eigen_name(p_eigenvector_class(gp))}};
        body = out.dump(2) + "\n";
    } else {
        std::ostringstream os;
        const auto im = [](const ImQuat& v) {
            return fmt17(v.x) + " " + fmt17(v.y) + " " + fmt17(v.z);
        };
        const auto fac = [](const FactorConstants& k) {
            return "a=" + fmt17(k.a) + " b=" + fmt17(k.b) + " c=" + fmt17(k.c) +
                   " A=" + fmt17(k.A) + " B=" + fmt17(k.B) + " phi=" + fmt17(k.phi) +
                   " theta=" + fmt17(k.theta);
        };
        os << "case: " << case_name(gp.kind) << "\n"
           << "speed: " << fmt17(curve.speed) << "\n"
           << "c1: " << im(gp.c1) << "\n"
           << "c2: " << im(gp.c2) << "\n"
           << "c3: " << im(gp.c3()) << "\n"
           << "d1: " << fmt17(gp.d1) << "\n"
           << "h: " << fmt17(gp.h.q().w) << " " << fmt17(gp.h.q().x) << " " << fmt17(gp.h.q().y)
           << " " << fmt17(gp.h.q().z) << "\n"
           << "x-factor: " << fac(gp.x_factor) << "\n"
           << "y-factor: " << fac(gp.y_factor) << "\n"
           << "euclidean-coincident: " << (is_euclidean_geodesic(gp) ? "true" : "false") << "\n"
           << "p-eigenvector: "
           << (p_eigenvector_class(gp) == PEigenClass::MinusOne  ? "-1"
               : p_eigenvector_class(gp) == PEigenClass::PlusOne ? "+1"
                                                                 : "none")
           << "\n";
        body = os.str();
    }
    emit(out_path, body);
    return 0;
}

// --- closedness ---------------------------------------------------------------

int run_closedness(const CurveArgs& cargs, long long max_den, const std::string& format,
                   const std::string& out_path) {
    if (max_den < 1) throw InvalidInput("--max-denominator must be at least 1");
    const NKPoint start = parse_point(cargs.start_text);
    const NKTangent vel = parse_velocity(start, cargs.velocity_text);
    const GeodesicParams gp = derive_params(start, vel);
    const ClosednessReport rep = closedness_report(gp, max_den);

    const bool case3 = gp.kind == GeodesicCase::Case3;
    const char* label_x = case3 ? "B/A" : "a/a~";

    std::string body;
    if (format == "json") {
        const auto ratio_json = [](const std::optional<Rational>& r) -> json {
            if (!r) return nullptr;
            return {{"num", r->num}, {"den", r->den}};
        };
        json out = {{"case", case_name(gp.kind)},
                    {"closed", rep.closed},
                    {"period", rep.closed ? json(rep.period) : json(nullptr)},
                    {"ratio_x", ratio_json(rep.ratio_x)},
                    {"ratio_y", ratio_json(rep.ratio_y)},
                    {"max_denominator", max_den}};
        body = out.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "case: " << case_name(gp.kind) << "\n"
           << "closed: " << (rep.closed ? "true" : "false") << "\n";
        if (rep.closed) os << "period: " << fmt17(rep.period) << "\n";
        const auto show = [&](const char* label, const std::optional<Rational>& r, bool relevant) {
            if (!relevant) return;
            if (r)
                os << "ratio " << label << ": " << r->num << "/" << r->den << "\n";
            else
                os << "ratio " << label << ": no rational approximation within cap " << max_den
                   << "\n";
        };
        show(label_x, rep.ratio_x,
             gp.kind == GeodesicCase::Case2 || case3);
        show("B~/A~", rep.ratio_y, case3);
        body = os.str();
    }
    emit(out_path, body);
    return 0;
}

// --- verify / identities ------------------------------------------------------

int run_verify(std::uint64_t seed, const std::string& only, bool inject_j_bug,
               const std::string& format, const std::string& out_path) {
    if (!only.empty() && only != "identities" && only != "geodesics" && only != "oracle")
        throw InvalidInput("--only must be one of: identities, geodesics, oracle");

    JOperator jop;
    if (inject_j_bug)
        jop = [](const NKTangent& t) {
            const Quat& p = t.base().p.q();
            const Quat& q = t.base().q.q();
            const Quat pv = p * q.conjugate() * t.v();
            const Quat qu = q * p.conjugate() * t.u();
            return NKTangent{t.base(), (pv * 2.0 - t.u()) / kSqrt3, (t.v() + qu * 2.0) / kSqrt3};
        };

    std::vector<Check> checks;
    const auto append = [&checks](std::vector<Check> more) {
        for (auto& c : more) checks.push_back(std::move(c));
    };
    if (only.empty() || only == "identities") append(identity_checks(seed, 1000, 100, jop));
    if (only.empty() || only == "geodesics") append(geodesic_checks(seed));
    if (only.empty() || only == "oracle") append(oracle_checks(seed));

    size_t passed = 0;
    for (const auto& c : checks) passed += c.pass ? 1 : 0;
    const bool ok = passed == checks.size();

    std::string body;
    if (format == "json") {
        json out = {{"pass", ok}, {"seed", seed}, {"checks", json::array()}};
        for (const auto& c : checks) out["checks"].push_back(check_json(c));
        body = out.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (const auto& c : checks) {
            char line[160];
            std::snprintf(line, sizeof line, "[%s] %-48s %s=%-12.4g %s=%.4g\n",
                          c.pass ? "PASS" : "FAIL", c.name.c_str(),
                          c.lower_bound ? "value" : "max_dev", c.max_dev,
                          c.lower_bound ? "min" : "tol", c.tol);
            os << line;
        }
        os << passed << "/" << checks.size() << " checks passed\n";
        body = os.str();
    }
    emit(out_path, body);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesics and verification suites for the nearly Kahler S^3 x S^3"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "evaluate a geodesic on a uniform time grid");
    CurveArgs sample_args;
    add_curve_options(sample, sample_args);
    double t_end = 10.0;
    int samples = 100;
    double step = 1e-3;
    bool with_oracle = false;
    std::string sample_format = "csv", sample_out;
    sample->add_option("--t-end", t_end, "end of the time interval (default 10)");
    sample->add_option("--samples", samples, "number of rows, endpoints included (default 100)");
    sample->add_option("--step", step, "oracle integrator step (default 1e-3)");
    sample->add_flag("--oracle", with_oracle, "add RK4 oracle columns and an R^8 deviation column");
    sample->add_option("--format", sample_format, "csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sample->add_option("--out", sample_out, "output path (stdout when omitted)");

    // classify
    auto* classify = app.add_subcommand("classify", "derive the case and closed-form constants");
    CurveArgs classify_args;
    add_curve_options(classify, classify_args);
    std::string classify_format = "text", classify_out;
    classify->add_option("--format", classify_format, "text or json (default text)")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    classify->add_option("--out", classify_out, "output path (stdout when omitted)");

    // closedness
    auto* closed = app.add_subcommand("closedness", "decide closedness and report the period");
    CurveArgs closed_args;
    add_curve_options(closed, closed_args);
    long long max_den = 1'000'000;
    std::string closed_format = "text", closed_out;
    closed->add_option("--max-denominator", max_den,
                       "denominator cap for the rationality test (default 1e6)");
    closed->add_option("--format", closed_format, "text or json (default text)")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    closed->add_option("--out", closed_out, "output path (stdout when omitted)");

    // verify
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    std::uint64_t seed = 42;
    std::string only, verify_format = "text", verify_out;
    bool inject_j_bug = false;
    verify->add_option("--seed", seed, "seed for the randomized suites (default 42)");
    verify->add_option("--only", only, "run a single suite: identities, geodesics or oracle");
    verify->add_option("--format", verify_format, "text or json (default text)")
        ->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--out", verify_out, "output path (stdout when omitted)");
    verify->add_flag("--inject-j-sign-bug", inject_j_bug)->group("");  // test fixture

    // identities
    auto* identities = app.add_subcommand("identities", "run the tensor identity suite alone");
    std::uint64_t id_seed = 42;
    std::string id_format = "text", id_out;
    identities->add_option("--seed", id_seed, "seed for the randomized suite (default 42)");
    identities->add_option("--format", id_format, "text or json (default text)")
        ->check(CLI::IsMember({"text", "json"}));
    identities->add_option("--out", id_out, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sample)
            return run_sample(sample_args, t_end, samples, step, with_oracle, sample_format,
                              sample_out);
        if (*classify) return run_classify(classify_args, classify_format, classify_out);
        if (*closed) return run_closedness(closed_args, max_den, closed_format, closed_out);
        if (*verify) return run_verify(seed, only, inject_j_bug, verify_format, verify_out);
        if (*identities) return run_verify(id_seed, "identities", false, id_format, id_out);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
