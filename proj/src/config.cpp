#include "fracstep/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "fracstep/csv.hpp"
#include "fracstep/expr.hpp"

namespace fracstep {

using nlohmann::json;

namespace {

double parse_real(std::string_view s, std::string_view whole) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw DomainError("malformed complex number '" + std::string(whole) + "'");
    }
    return v;
}

// from_chars rejects a leading '+'.
double parse_signed(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            throw DomainError("malformed complex number '" + std::string(whole) + "'");
        }
    }
    return parse_real(s, whole);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(where) + " must be an object");
    }
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* name : allowed) {
            ok = ok || item.key() == name;
        }
        if (!ok) {
            throw ConfigError("unknown field '" + item.key() + "' in " + where);
        }
    }
}

double get_number(const json& v, const char* what) {
    if (!v.is_number()) {
        throw ConfigError(std::string(what) + " must be a number");
    }
    return v.get<double>();
}

Complex get_complex(const json& v, const char* what) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        try {
            return parse_complex(v.get<std::string>());
        } catch (const DomainError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    }
    throw ConfigError(std::string(what) + " must be a number or an \"RE+IMi\" string");
}

ComplexParam get_param(const json& v, const char* what) {
    ComplexParam p;
    if (v.is_object()) {
        reject_unknown(v, {"modulus", "phase_over_pi_alpha"}, what);
        if (!v.contains("modulus")) {
            throw ConfigError(std::string(what) + " needs a modulus");
        }
        p.modulus = get_number(v["modulus"], "modulus");
        p.phase = v.contains("phase_over_pi_alpha")
                      ? get_number(v["phase_over_pi_alpha"], "phase_over_pi_alpha")
                      : 0.0;
        return p;
    }
    p.value = get_complex(v, what);
    return p;
}

std::string get_expr_field(const json& v, const char* where) {
    reject_unknown(v, {"expr"}, where);
    if (!v.contains("expr") || !v["expr"].is_string()) {
        throw ConfigError(std::string(where) + ".expr must be a string");
    }
    return v["expr"].get<std::string>();
}

ProblemConfig parse_problem(const json& p) {
    if (!p.is_object() || !p.contains("tag") || !p["tag"].is_string()) {
        throw ConfigError("problem needs a string tag");
    }
    ProblemConfig out;
    const std::string tag = p["tag"].get<std::string>();
    if (tag == "mlf_decay") {
        reject_unknown(p, {"tag"}, "problem");
        out.tag = ProblemTag::MlfDecay;
    } else if (tag == "linear_complex") {
        reject_unknown(p, {"tag", "lambda"}, "problem");
        out.tag = ProblemTag::LinearComplex;
        if (!p.contains("lambda")) {
            throw ConfigError("linear_complex needs lambda");
        }
        out.lambda = get_param(p["lambda"], "lambda");
    } else if (tag == "nonlinear_square") {
        reject_unknown(p, {"tag", "mu"}, "problem");
        out.tag = ProblemTag::NonlinearSquare;
        if (!p.contains("mu")) {
            throw ConfigError("nonlinear_square needs mu");
        }
        out.mu = get_param(p["mu"], "mu");
    } else if (tag == "expr") {
        reject_unknown(p, {"tag", "rhs", "exact", "u0"}, "problem");
        out.tag = ProblemTag::Expr;
        if (!p.contains("rhs")) {
            throw ConfigError("expr problem needs rhs");
        }
        out.rhs_expr = get_expr_field(p["rhs"], "rhs");
        if (p.contains("exact")) {
            out.exact_expr = get_expr_field(p["exact"], "exact");
        }
        if (p.contains("u0")) {
            out.u0 = get_complex(p["u0"], "u0");
        } else if (out.exact_expr.empty()) {
            throw ConfigError("expr problem needs u0 or an exact solution");
        }
        try {
            expr::parse(out.rhs_expr);
            if (!out.exact_expr.empty()) {
                expr::parse(out.exact_expr);
            }
        } catch (const ParseError& e) {
            throw ConfigError(std::string("expression: ") + e.what());
        }
    } else {
        throw ConfigError("unknown problem tag '" + tag + "'");
    }
    return out;
}

std::size_t get_count(const json& v, const char* what) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError(std::string(what) + " must be a positive integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

Complex parse_complex(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        throw DomainError("empty complex number");
    }
    if (text.back() != 'i') {
        return parse_signed(text, whole);
    }
    text.remove_suffix(1);
    // Split at the last sign that does not belong to an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t p = text.size(); p-- > 1;) {
        if ((text[p] == '+' || text[p] == '-') && text[p - 1] != 'e' && text[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    const std::string_view re_part = split == std::string_view::npos ? "" : text.substr(0, split);
    std::string_view im_part = split == std::string_view::npos ? text : text.substr(split);
    double im = 0.0;
    if (im_part.empty() || im_part == "+") {
        im = 1.0;
    } else if (im_part == "-") {
        im = -1.0;
    } else {
        im = parse_signed(im_part, whole);
    }
    const double re = re_part.empty() ? 0.0 : parse_signed(re_part, whole);
    return {re, im};
}

std::string format_complex(Complex z) {
    std::string out = csv::format(z.real());
    const std::string im = csv::format(z.imag());
    if (im.front() != '-') {
        out += '+';
    }
    return out + im + 'i';
}

Complex ComplexParam::resolve(double alpha) const {
    if (modulus) {
        return rotated_lambda(*modulus, phase, alpha);
    }
    return value;
}

ProblemSpec RunConfig::build_problem(double alpha) const {
    switch (problem.tag) {
        case ProblemTag::MlfDecay:
            return mlf_decay(alpha);
        case ProblemTag::LinearComplex:
            return linear_complex(alpha, problem.lambda.resolve(alpha));
        case ProblemTag::NonlinearSquare:
            return nonlinear_square(alpha, problem.mu.resolve(alpha));
        case ProblemTag::Expr: {
            const auto rhs = std::make_shared<const expr::Expression>(problem.rhs_expr);
            ProblemSpec p;
            p.alpha = alpha;
            if (expr::depends_on_u(rhs->root())) {
                p.rhs = GeneralRhs{[rhs](double t, Complex u) { return (*rhs)(t, u); }, {}};
            } else {
                p.rhs = LinearRhs{Complex{0.0, 0.0},
                                  [rhs](double t) { return (*rhs)(t, Complex{0.0, 0.0}); }};
            }
            if (!problem.exact_expr.empty()) {
                const auto exact = std::make_shared<const expr::Expression>(problem.exact_expr);
                p.exact = [exact](double t) { return (*exact)(t, Complex{0.0, 0.0}); };
            }
            p.u0 = problem.u0 ? *problem.u0 : p.exact(0.0);
            return p;
        }
    }
    throw ConfigError("unknown problem tag");
}

StartMode RunConfig::start_mode() const {
    if (starting) {
        return *starting;
    }
    return problem.tag != ProblemTag::Expr || !problem.exact_expr.empty() ? StartMode::Exact
                                                                          : StartMode::Bootstrap;
}

RunConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(doc, {"problem", "alpha", "schemes", "grid", "starting", "newton"}, "config");

    RunConfig cfg;
    if (!doc.contains("problem")) {
        throw ConfigError("config needs a problem");
    }
    cfg.problem = parse_problem(doc["problem"]);

    if (!doc.contains("alpha")) {
        throw ConfigError("config needs alpha");
    }
    const json& a = doc["alpha"];
    if (a.is_array()) {
        for (const auto& v : a) {
            cfg.alphas.push_back(get_number(v, "alpha"));
        }
    } else {
        cfg.alphas.push_back(get_number(a, "alpha"));
    }
    if (cfg.alphas.empty()) {
        throw ConfigError("alpha list is empty");
    }
    for (double v : cfg.alphas) {
        if (!(v > 0.0 && v < 1.0)) {
            throw ConfigError("alpha values must lie in (0,1)");
        }
    }

    if (!doc.contains("schemes") || !doc["schemes"].is_array() || doc["schemes"].empty()) {
        throw ConfigError("config needs a nonempty schemes list");
    }
    for (const auto& s : doc["schemes"]) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
            throw ConfigError("each scheme must be a pair [k, i]");
        }
        const SchemeId id{s[0].get<int>(), s[1].get<int>()};
        if (!id.valid()) {
            throw ConfigError("invalid scheme " + to_string(id));
        }
        cfg.schemes.push_back(id);
    }

    if (!doc.contains("grid")) {
        throw ConfigError("config needs a grid");
    }
    const json& g = doc["grid"];
    reject_unknown(g, {"T", "M", "M_list"}, "grid");
    if (g.contains("T")) {
        cfg.T = get_number(g["T"], "grid.T");
        if (!(cfg.T > 0.0)) {
            throw ConfigError("grid.T must be positive");
        }
    }
    if (g.contains("M") == g.contains("M_list")) {
        throw ConfigError("grid needs exactly one of M and M_list");
    }
    if (g.contains("M")) {
        cfg.M_list.push_back(get_count(g["M"], "grid.M"));
        cfg.single_M = true;
    } else {
        if (!g["M_list"].is_array() || g["M_list"].empty()) {
            throw ConfigError("grid.M_list must be a nonempty list");
        }
        for (const auto& m : g["M_list"]) {
            cfg.M_list.push_back(get_count(m, "grid.M_list entry"));
        }
        for (std::size_t k = 1; k < cfg.M_list.size(); ++k) {
            if (cfg.M_list[k] <= cfg.M_list[k - 1]) {
                throw ConfigError("grid.M_list must be strictly increasing");
            }
        }
    }

    if (doc.contains("starting")) {
        const json& s = doc["starting"];
        if (s == "exact") {
            cfg.starting = StartMode::Exact;
        } else if (s == "bootstrap") {
            cfg.starting = StartMode::Bootstrap;
        } else {
            throw ConfigError("starting must be \"exact\" or \"bootstrap\"");
        }
    }
    if (doc.contains("newton")) {
        const json& n = doc["newton"];
        reject_unknown(n, {"tol", "max_iter", "fd_step_scale"}, "newton");
        if (n.contains("tol")) {
            cfg.newton.tol = get_number(n["tol"], "newton.tol");
        }
        if (n.contains("max_iter")) {
            cfg.newton.max_iter = get_count(n["max_iter"], "newton.max_iter");
        }
        if (n.contains("fd_step_scale")) {
            cfg.newton.fd_step_scale = get_number(n["fd_step_scale"], "newton.fd_step_scale");
        }
        try {
            cfg.newton.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    if (cfg.start_mode() == StartMode::Exact && cfg.problem.tag == ProblemTag::Expr &&
        cfg.problem.exact_expr.empty()) {
        throw ConfigError("exact starting values need exact.expr");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fracstep
