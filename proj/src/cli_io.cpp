#include "sbd/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "sbd/assembly.hpp"
#include "sbd/scenarios.hpp"
#include "sbd/verification.hpp"

namespace sbd {

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::MmsFull: return "mms-full";
    case Scenario::MmsReduced: return "mms-reduced";
    case Scenario::Filtration: return "filtration";
    case Scenario::Custom: return "custom";
    }
    return "?";
}

Scenario parse_scenario(const std::string& name) {
    for (Scenario s : {Scenario::MmsFull, Scenario::MmsReduced, Scenario::Filtration, Scenario::Custom})
        if (to_string(s) == name) return s;
    throw ValidationError("unknown scenario '" + name + "' (mms-full, mms-reduced, filtration, custom)");
}

const std::vector<std::string>& bc_segments() {
    static const std::vector<std::string> names{"ff_left",  "ff_right", "ff_top",    "tr_left",    "tr_right",
                                                "pm_left",  "pm_right", "pm_bottom", "gamma_left", "gamma_right"};
    return names;
}

namespace {

// ---------------------------------------------------------------- lexing

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        if (line[k] == '"') quoted = !quoted;
        if (!quoted && (line[k] == '#' || line[k] == ';')) return line.substr(0, k);
    }
    return line;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
    return v;
}

std::optional<int> to_int(const std::string& s) {
    int v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_identifier(const std::string& s) {
    return !s.empty() && std::isalpha(static_cast<unsigned char>(s[0])) &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

// ------------------------------------------------------------- schema

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"run", {"scenario", "model", "output", "closure_defect"}},
        {"geometry", {"Lx", "Ly", "y_gamma_pm", "y_gamma_ff", "nx", "ny"}},
        {"params", {"mu", "mu_eff", "alpha", "beta", "K_tr", "K_pm"}},
        {"closure", {"profile", "lambda1", "lambda2"}},
        {"grids", {"nx"}},
        {"solver", {"method", "tol"}},
        {"bc", {}},
    };
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Table = std::map<std::string, Entry>;  // "section.key" -> entry

struct Diagnostics {
    std::string source;
    std::vector<std::string> problems;

    void add(int line, const std::string& key, const std::string& msg) {
        std::string s = source + ":";
        if (line > 0) s += std::to_string(line) + ":";
        problems.push_back(s + " " + key + ": " + msg);
    }
};

enum class SegmentType { Stokes, Darcy, Gamma };

SegmentType segment_type(const std::string& name) {
    if (name.rfind("gamma_", 0) == 0) return SegmentType::Gamma;
    if (name.rfind("pm_", 0) == 0) return SegmentType::Darcy;
    return SegmentType::Stokes;
}

struct KindRule {
    std::size_t nargs;
    const char* function;  // accepted function name, or nullptr
};

const std::map<std::string, KindRule>& kinds_for(SegmentType t) {
    static const std::map<std::string, KindRule> stokes{
        {"velocity", {2, "exact"}}, {"no-slip", {0, nullptr}}, {"traction", {2, nullptr}}, {"do-nothing", {0, nullptr}}};
    static const std::map<std::string, KindRule> darcy{{"pressure", {1, "exact"}},
                                                       {"flux", {1, nullptr}},
                                                       {"inflow", {1, "parabola"}},
                                                       {"no-flow", {0, nullptr}}};
    static const std::map<std::string, KindRule> gamma{{"dirichlet", {2, nullptr}}, {"neumann", {2, nullptr}}};
    return t == SegmentType::Stokes ? stokes : t == SegmentType::Darcy ? darcy : gamma;
}

/// Parses `kind` or `kind(a, b)`; the error string is empty on success.
std::string parse_bc_expr(const std::string& text, BcSetting& out) {
    const std::string s = trim(text);
    const auto open = s.find('(');
    out = {};
    if (open == std::string::npos) {
        out.kind = s;
        return is_identifier(s) ? "" : "malformed boundary expression '" + s + "'";
    }
    if (s.back() != ')') return "missing ')' in '" + s + "'";
    out.kind = trim(s.substr(0, open));
    if (!is_identifier(out.kind)) return "malformed boundary expression '" + s + "'";
    std::string args = s.substr(open + 1, s.size() - open - 2);
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= args.size(); ++k)
        if (k == args.size() || args[k] == ',') {
            parts.push_back(trim(args.substr(start, k - start)));
            start = k + 1;
        }
    if (parts.size() == 1 && parts[0].empty()) parts.clear();
    for (const std::string& a : parts) {
        if (auto v = to_double(a)) {
            out.values.push_back(*v);
        } else if (is_identifier(a) && parts.size() == 1) {
            out.function = a;
        } else {
            return "argument '" + a + "' is neither a number nor a function name";
        }
    }
    return "";
}

std::string bc_expr_string(const BcSetting& b) {
    if (!b.function.empty()) return b.kind + "(" + b.function + ")";
    if (b.values.empty()) return b.kind;
    std::string s = b.kind + "(";
    for (std::size_t k = 0; k < b.values.size(); ++k) s += (k ? ", " : "") + fmt(b.values[k]);
    return s + ")";
}

std::string tensor_string(const SymTensor2& t) { return fmt(t.xx) + " " + fmt(t.xy) + " " + fmt(t.yy); }

RunConfig defaults_for(Scenario s) {
    RunConfig c;
    c.scenario = s;
    switch (s) {
    case Scenario::MmsFull:
    case Scenario::Custom:
        c.model = Model::Full;
        c.geometry = mms_geometry(Model::Full, 10);
        c.params = mms_params();
        break;
    case Scenario::MmsReduced:
        c.model = Model::Reduced;
        c.geometry = mms_geometry(Model::Reduced, 10);
        c.params = mms_params();
        break;
    case Scenario::Filtration: {
        const FiltrationConfig f;
        c.model = Model::Full;
        c.geometry = filtration_geometry(f, Model::Full);
        c.params = f.params;
        break;
    }
    }
    return c;
}

Model parse_model(const std::string& s) {
    if (s == "full") return Model::Full;
    if (s == "reduced") return Model::Reduced;
    throw ValidationError("unknown model '" + s + "' (full, reduced)");
}

SymTensor2 parse_tensor(const std::string& s) {
    const auto w = split_ws(s);
    std::vector<double> v;
    for (const auto& x : w) {
        auto d = to_double(x);
        if (!d) throw ValidationError("'" + x + "' is not a number");
        v.push_back(*d);
    }
    if (v.size() == 1) return SymTensor2::isotropic(v[0]);
    if (v.size() == 3) return {v[0], v[1], v[2]};
    throw ValidationError("tensor needs one value (isotropic) or three (xx xy yy)");
}

double parse_number(const std::string& s) {
    auto d = to_double(s);
    if (!d) throw ValidationError("'" + s + "' is not a number");
    return *d;
}

int parse_integer(const std::string& s) {
    auto d = to_int(s);
    if (!d) throw ValidationError("'" + s + "' is not an integer");
    return *d;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ValidationError("'" + s + "' is not a boolean");
}

struct KeyedProblem {
    std::string key;
    std::string message;
};

GeometryConfig level_geometry(const RunConfig& c, int nx) {
    GeometryConfig g = c.geometry;
    g.ny = static_cast<int>(std::lround(double(nx) * c.geometry.ny / c.geometry.nx));
    g.nx = nx;
    return g;
}

FiltrationConfig filtration_config(const RunConfig& c, int nx) {
    FiltrationConfig f;
    f.h = c.geometry.Lx / nx;
    f.Lx = c.geometry.Lx;
    f.Ly = c.geometry.Ly;
    f.y_gamma_pm = c.geometry.y_gamma_pm;
    f.y_gamma_ff = c.geometry.y_gamma_ff;
    f.params = c.params;
    f.solver.method = c.method;
    f.solver.tol = c.tol;
    return f;
}

std::vector<KeyedProblem> semantic_problems(const RunConfig& c) {
    std::vector<KeyedProblem> out;
    for (const std::string& p : check_params(c.params)) out.push_back({"params", p});
    if (c.profile.kind == ProfileKind::Custom && !(c.profile.lambda1 > c.profile.lambda2 && c.profile.lambda2 >= 0.0))
        out.push_back({"closure.lambda1", "closure profile requires lambda1 > lambda2 >= 0"});
    if (c.scenario == Scenario::MmsFull && c.model != Model::Full)
        out.push_back({"run.model", "scenario mms-full needs model = full"});
    if (c.scenario == Scenario::MmsReduced && c.model != Model::Reduced)
        out.push_back({"run.model", "scenario mms-reduced needs model = reduced"});
    if (c.closure_defect && c.scenario != Scenario::MmsReduced)
        out.push_back({"run.closure_defect", "only meaningful for scenario mms-reduced"});
    if (!(c.tol > 0.0)) out.push_back({"solver.tol", "tolerance must be positive"});
    if (c.output.empty()) out.push_back({"run.output", "output directory must not be empty"});

    if (!c.bc.empty() && c.scenario != Scenario::Custom)
        out.push_back({"bc", "boundary settings apply to scenario custom only"});
    for (const auto& [seg, b] : c.bc) {
        const std::string key = "bc." + seg;
        if (std::find(bc_segments().begin(), bc_segments().end(), seg) == bc_segments().end()) {
            out.push_back({key, "unknown boundary segment"});
            continue;
        }
        const auto& kinds = kinds_for(segment_type(seg));
        auto it = kinds.find(b.kind);
        if (it == kinds.end()) {
            std::string list;
            for (const auto& [k, r] : kinds) list += (list.empty() ? "" : ", ") + k;
            out.push_back({key, "kind '" + b.kind + "' not allowed here (" + list + ")"});
            continue;
        }
        if (!b.function.empty()) {
            if (!it->second.function || b.function != it->second.function)
                out.push_back({key, "unknown function '" + b.function + "' for " + b.kind});
        } else if (b.values.size() != it->second.nargs) {
            out.push_back({key, b.kind + " takes " + std::to_string(it->second.nargs) + " value(s)"});
        }
    }

    std::vector<int> nxs = c.levels.empty() ? std::vector<int>{c.geometry.nx} : c.levels;
    if (c.levels.size() == 1 || c.levels.size() == 2)
        out.push_back({"grids.nx", "a convergence study needs at least three levels"});
    for (std::size_t k = 1; k < c.levels.size(); ++k)
        if (c.levels[k] != 2 * c.levels[k - 1]) out.push_back({"grids.nx", "each level must double the previous one"});
    if (c.geometry.nx < 1) {
        out.push_back({"geometry.nx", "must be positive"});
        return out;
    }
    for (int nx : nxs) {
        try {
            if (c.scenario == Scenario::Filtration) {
                const FiltrationConfig f = filtration_config(c, nx);
                build_grid(filtration_geometry(f, Model::Full), Model::Full);
                build_grid(filtration_geometry(f, Model::Reduced), Model::Reduced);
            } else {
                const GeometryConfig g = level_geometry(c, nx);
                if (double(nx) * c.geometry.ny / c.geometry.nx != g.ny)
                    throw ValidationError("nx = " + std::to_string(nx) + " does not keep the nx : ny ratio integral");
                build_grid(g, c.model);
            }
        } catch (const ValidationError& e) {
            out.push_back({c.levels.empty() ? "geometry" : "grids.nx", e.what()});
        }
    }
    return out;
}

void apply(RunConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = unquote(raw);
    if (key == "run.model") c.model = parse_model(v);
    else if (key == "run.output") c.output = v;
    else if (key == "run.closure_defect") c.closure_defect = parse_bool(v);
    else if (key == "geometry.Lx") c.geometry.Lx = parse_number(v);
    else if (key == "geometry.Ly") c.geometry.Ly = parse_number(v);
    else if (key == "geometry.y_gamma_pm") c.geometry.y_gamma_pm = parse_number(v);
    else if (key == "geometry.y_gamma_ff") c.geometry.y_gamma_ff = parse_number(v);
    else if (key == "geometry.nx") c.geometry.nx = parse_integer(v);
    else if (key == "geometry.ny") c.geometry.ny = parse_integer(v);
    else if (key == "params.mu") c.params.mu = parse_number(v);
    else if (key == "params.mu_eff") c.params.mu_eff = parse_number(v);
    else if (key == "params.alpha") c.params.alpha = parse_number(v);
    else if (key == "params.beta") c.params.beta = parse_tensor(v);
    else if (key == "params.K_tr") c.params.K_tr = parse_tensor(v);
    else if (key == "params.K_pm") c.params.K_pm = parse_tensor(v);
    else if (key == "closure.profile") {
        if (v == "custom") c.profile.kind = ProfileKind::Custom;
        else {
            const auto l = closure_params(parse_profile_kind(v));
            c.profile = {parse_profile_kind(v), l[0], l[1]};
        }
    } else if (key == "closure.lambda1") c.profile.lambda1 = parse_number(v);
    else if (key == "closure.lambda2") c.profile.lambda2 = parse_number(v);
    else if (key == "grids.nx") {
        c.levels.clear();
        for (const auto& w : split_ws(v)) c.levels.push_back(parse_integer(w));
    } else if (key == "solver.method") c.method = parse_solve_method(v);
    else if (key == "solver.tol") c.tol = parse_number(v);
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
    Diagnostics diag{source, {}};
    Table table;
    std::string section;
    int lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                diag.add(lineno, line, "malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) diag.add(lineno, section, "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            diag.add(lineno, section.empty() ? line : section, "expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const std::string path = section + "." + key;
        if (section.empty()) {
            diag.add(lineno, key, "key outside of any section");
            continue;
        }
        auto sec = schema().find(section);
        if (sec == schema().end()) continue;  // already reported
        const bool known = section == "bc" ? std::find(bc_segments().begin(), bc_segments().end(), key) !=
                                                 bc_segments().end()
                                           : sec->second.count(key) > 0;
        if (!known) {
            diag.add(lineno, path, "unknown key");
            continue;
        }
        if (value.empty()) {
            diag.add(lineno, path, "missing value");
            continue;
        }
        if (table.count(path)) {
            diag.add(lineno, path, "duplicate key (first set on line " + std::to_string(table[path].line) + ")");
            continue;
        }
        table[path] = {value, lineno};
    }

    Scenario scenario = Scenario::MmsFull;
    if (auto it = table.find("run.scenario"); it != table.end()) {
        try {
            scenario = parse_scenario(unquote(it->second.value));
        } catch (const ValidationError& e) {
            diag.add(it->second.line, it->first, e.what());
        }
    }
    RunConfig c = defaults_for(scenario);
    for (const auto& [path, e] : table) {
        if (path == "run.scenario") continue;
        if (path.rfind("bc.", 0) == 0) {
            BcSetting b;
            const std::string err = parse_bc_expr(e.value, b);
            if (!err.empty()) diag.add(e.line, path, err);
            else c.bc[path.substr(3)] = b;
            continue;
        }
        try {
            apply(c, path, e.value);
        } catch (const ValidationError& ex) {
            diag.add(e.line, path, ex.what());
        }
    }
    if (c.profile.kind == ProfileKind::Custom && (!table.count("closure.lambda1") || !table.count("closure.lambda2")))
        diag.add(table.count("closure.profile") ? table["closure.profile"].line : 0, "closure.profile",
                 "custom profile needs lambda1 and lambda2");
    if (c.profile.kind != ProfileKind::Custom && (table.count("closure.lambda1") || table.count("closure.lambda2")))
        diag.add(table.count("closure.lambda1") ? table["closure.lambda1"].line : table["closure.lambda2"].line,
                 "closure.lambda1", "lambda values are fixed unless profile = custom");

    if (diag.problems.empty()) {
        for (const KeyedProblem& p : semantic_problems(c)) {
            int line = 0;
            if (auto it = table.find(p.key); it != table.end()) line = it->second.line;
            else
                for (const auto& [path, e] : table)
                    if (path.rfind(p.key + ".", 0) == 0 && (line == 0 || e.line < line)) line = e.line;
            diag.add(line, p.key, p.message);
        }
    }
    if (!diag.problems.empty()) {
        std::string msg = "invalid configuration " + source + ":";
        for (const auto& p : diag.problems) msg += "\n  " + p;
        throw ValidationError(msg, diag.problems);
    }
    return c;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open configuration file '" + path.string() + "'");
    return parse_config(in, path.string());
}

std::vector<std::string> check_config(const RunConfig& c) {
    std::vector<std::string> out;
    for (const KeyedProblem& p : semantic_problems(c)) out.push_back(p.key + ": " + p.message);
    return out;
}

void serialize_config(const RunConfig& c, std::ostream& os) {
    os << "[run]\n"
       << "scenario = " << to_string(c.scenario) << "\n"
       << "model = " << to_string(c.model) << "\n"
       << "output = \"" << c.output << "\"\n"
       << "closure_defect = " << (c.closure_defect ? "true" : "false") << "\n\n";
    os << "[geometry]\n"
       << "Lx = " << fmt(c.geometry.Lx) << "\nLy = " << fmt(c.geometry.Ly) << "\ny_gamma_pm = "
       << fmt(c.geometry.y_gamma_pm) << "\ny_gamma_ff = " << fmt(c.geometry.y_gamma_ff) << "\nnx = " << c.geometry.nx
       << "\nny = " << c.geometry.ny << "\n\n";
    os << "[params]\n"
       << "mu = " << fmt(c.params.mu) << "\nmu_eff = " << fmt(c.params.mu_eff) << "\nalpha = " << fmt(c.params.alpha)
       << "\nbeta = " << tensor_string(c.params.beta) << "\nK_tr = " << tensor_string(c.params.K_tr)
       << "\nK_pm = " << tensor_string(c.params.K_pm) << "\n\n";
    os << "[closure]\n";
    if (c.profile.kind == ProfileKind::Custom)
        os << "profile = custom\nlambda1 = " << fmt(c.profile.lambda1) << "\nlambda2 = " << fmt(c.profile.lambda2)
           << "\n\n";
    else
        os << "profile = " << to_string(c.profile.kind) << "\n\n";
    if (!c.levels.empty()) {
        os << "[grids]\nnx =";
        for (int n : c.levels) os << ' ' << n;
        os << "\n\n";
    }
    os << "[solver]\nmethod = " << to_string(c.method) << "\ntol = " << fmt(c.tol) << "\n";
    if (!c.bc.empty()) {
        os << "\n[bc]\n";
        for (const auto& [seg, b] : c.bc) os << seg << " = " << bc_expr_string(b) << "\n";
    }
}

// ------------------------------------------------------------ boundary data

namespace {

StokesBC stokes_bc(const RunConfig& c, const std::string& seg) {
    auto it = c.bc.find(seg);
    if (it == c.bc.end()) return StokesBC::no_slip();
    const BcSetting& b = it->second;
    if (b.kind == "no-slip") return StokesBC::no_slip();
    if (b.kind == "do-nothing") return StokesBC::do_nothing();
    if (b.function == "exact") {
        const MmsExact ex(c.geometry.y_gamma_pm);
        return StokesBC::velocity([ex](double x, double y) { return Vec2{ex.u(x, y), ex.v(x, y)}; });
    }
    const Vec2 g{b.values.at(0), b.values.at(1)};
    auto data = [g](double, double) { return g; };
    return b.kind == "velocity" ? StokesBC::velocity(data) : StokesBC::traction(data);
}

DarcyBC darcy_bc(const RunConfig& c, const std::string& seg) {
    auto it = c.bc.find(seg);
    if (it == c.bc.end()) return DarcyBC::no_flow();
    const BcSetting& b = it->second;
    if (b.kind == "no-flow") return DarcyBC::no_flow();
    if (b.function == "exact") {
        const MmsExact ex(c.geometry.y_gamma_pm);
        return DarcyBC::pressure([ex](double x, double y) { return ex.p_pm(x, y); });
    }
    if (b.function == "parabola") return DarcyBC::normal_flux([](double x, double) { return -filtration_inflow(x); });
    const double g = b.values.at(0);
    if (b.kind == "pressure") return DarcyBC::pressure([g](double, double) { return g; });
    if (b.kind == "inflow") return DarcyBC::normal_flux([g](double, double) { return -g; });
    return DarcyBC::normal_flux([g](double, double) { return g; });
}

GammaEndBC gamma_bc(const RunConfig& c, const std::string& seg) {
    auto it = c.bc.find(seg);
    if (it == c.bc.end()) return GammaEndBC::dirichlet(0.0, 0.0);
    const BcSetting& b = it->second;
    if (b.kind == "neumann") return GammaEndBC::neumann(b.values.at(0), b.values.at(1));
    return GammaEndBC::dirichlet(b.values.at(0), b.values.at(1));
}

}  // namespace

BoundarySpec build_boundary_spec(const RunConfig& c) {
    BoundarySpec b;
    b.ff_left = stokes_bc(c, "ff_left");
    b.ff_right = stokes_bc(c, "ff_right");
    b.ff_top = stokes_bc(c, "ff_top");
    b.tr_left = stokes_bc(c, "tr_left");
    b.tr_right = stokes_bc(c, "tr_right");
    b.pm_left = darcy_bc(c, "pm_left");
    b.pm_right = darcy_bc(c, "pm_right");
    b.pm_bottom = darcy_bc(c, "pm_bottom");
    return b;
}

GammaBoundarySpec build_gamma_spec(const RunConfig& c) { return {gamma_bc(c, "gamma_left"), gamma_bc(c, "gamma_right")}; }

// ------------------------------------------------------------------- output

namespace {

struct CellVelocity {
    std::vector<double> u, v;  // nx * ny, x fastest
};

CellVelocity cell_velocities(const Solution& s, const PhysicalParams& prm) {
    const StaggeredGrid& g = s.grid();
    const int nx = g.nx(), ny = g.ny(), npm = g.pm_rows();
    CellVelocity c{std::vector<double>(std::size_t(nx) * ny, 0.0), std::vector<double>(std::size_t(nx) * ny, 0.0)};
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = i + std::size_t(nx) * j;
            if (j >= npm) {
                c.u[k] = 0.5 * (s.u(i, j) + s.u(i + 1, j));
                c.v[k] = 0.5 * (s.v(i, j) + s.v(i, j + 1));
                continue;
            }
            // Darcy: v = -K grad p / mu, centred differences inside, one-sided at the edges.
            const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
            const int jl = std::max(j - 1, 0), jr = std::min(j + 1, npm - 1);
            const double px = (s.p(ir, j) - s.p(il, j)) / ((ir - il) * g.hx());
            const double py = jr > jl ? (s.p(i, jr) - s.p(i, jl)) / ((jr - jl) * g.hy()) : 0.0;
            const Vec2 q = prm.K_pm.apply({px, py});
            c.u[k] = -q[0] / prm.mu;
            c.v[k] = -q[1] / prm.mu;
        }
    return c;
}

void put(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    os << buf;
}

}  // namespace

void write_vtk(const Solution& s, const PhysicalParams& prm, std::ostream& os) {
    const StaggeredGrid& g = s.grid();
    const int nx = g.nx(), ny = g.ny();
    const CellVelocity cv = cell_velocities(s, prm);
    os << "# vtk DataFile Version 3.0\n"
       << "sbd " << (g.reduced() ? "reduced" : "full") << " solution\n"
       << "ASCII\nDATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << nx + 1 << ' ' << ny + 1 << " 1\n"
       << "ORIGIN 0 0 0\nSPACING ";
    put(os, g.hx());
    os << ' ';
    put(os, g.hy());
    os << " 1\n";
    os << "CELL_DATA " << std::size_t(nx) * ny << "\nSCALARS p double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            put(os, s.p(i, j));
            os << '\n';
        }
    os << "SCALARS region int 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) os << static_cast<int>(g.region_of_row(j)) << '\n';
    os << "POINT_DATA " << std::size_t(nx + 1) * (ny + 1) << "\nVECTORS velocity double\n";
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            double u = 0.0, v = 0.0;
            int n = 0;
            for (int jj = j - 1; jj <= j; ++jj)
                for (int ii = i - 1; ii <= i; ++ii) {
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    u += cv.u[ii + std::size_t(nx) * jj];
                    v += cv.v[ii + std::size_t(nx) * jj];
                    ++n;
                }
            put(os, u / n);
            os << ' ';
            put(os, v / n);
            os << " 0\n";
        }
}

void write_vtk(const Solution& s, const PhysicalParams& prm, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_vtk(s, prm, os);
    if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_gamma_csv(const Solution& s, std::ostream& os) {
    const StaggeredGrid& g = s.grid();
    if (!g.reduced()) throw ValidationError("gamma fields need a reduced-model solution");
    os << "s,U,V,P\n" << std::setprecision(17);
    for (int i = 0; i < g.nx(); ++i) os << g.cell_x(i) << ',' << s.Vt(i) << ',' << s.Vn(i) << ',' << s.P(i) << '\n';
}

std::filesystem::path output_directory(const std::string& fallback) {
    if (const char* env = std::getenv("SBD_OUTPUT_DIR"); env && *env) return env;
    return fallback;
}

// ----------------------------------------------------------------- pipeline

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

void print_orders(const ConvergenceReport& rep, std::ostream& log) {
    log << std::left << std::setw(8) << "field";
    for (const LevelResult& lv : rep.levels) log << std::setw(13) << ("h=1/" + std::to_string(lv.nx));
    log << "slope\n";
    for (const auto& [f, ord] : rep.orders) {
        log << std::setw(8) << to_string(f) << std::setw(13) << "-";
        for (double o : ord.pairwise) log << std::setw(13) << std::setprecision(4) << o;
        log << std::setprecision(4) << ord.slope << '\n';
    }
    log << std::right;
}

void run_mms(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    MmsOptions opt;
    opt.profile = c.profile;
    opt.closure_defect = c.closure_defect;
    opt.solver.method = c.method;
    opt.solver.tol = c.tol;
    const std::string tag = c.model == Model::Full ? "full" : "reduced";
    if (!c.levels.empty()) {
        std::vector<GeometryConfig> grids;
        for (int nx : c.levels) grids.push_back(level_geometry(c, nx));
        const ConvergenceReport rep = convergence_study(c.model, grids, c.params, opt);
        auto os = open_out(out / ("convergence_" + tag + ".csv"));
        write_convergence_csv(rep, os);
        print_orders(rep, log);
        return;
    }
    MmsProblem pb = build_mms_problem(c.model, c.geometry, c.params, opt);
    SolveReport sr = solve(pb.system, opt.solver);
    const Solution sol(pb.grid, std::move(sr.x));
    auto os = open_out(out / ("errors_" + tag + ".csv"));
    os << "field,error\n" << std::setprecision(17);
    for (FieldId f : fields_for(c.model)) {
        const FieldSample fs = sample_field(sol, f, pb.exact);
        const double e = l2_error(fs.numeric, fs.exact, fs.weight);
        os << to_string(f) << ',' << e << '\n';
        log << to_string(f) << "  L2 error " << std::setprecision(6) << e << '\n';
    }
    write_vtk(sol, c.params, out / "solution.vtk");
    if (c.model == Model::Reduced) {
        auto gs = open_out(out / "gamma_fields.csv");
        write_gamma_csv(sol, gs);
    }
}

void run_filtration_levels(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    const std::vector<int> nxs = c.levels.empty() ? std::vector<int>{c.geometry.nx} : c.levels;
    for (int nx : nxs) {
        const FiltrationConfig f = filtration_config(c, nx);
        const FiltrationReport rep = run_filtration(f, {c.profile});
        const std::string sfx = "_h" + std::to_string(nx);
        auto dv = open_out(out / ("deviations" + sfx + ".csv"));
        write_deviations_csv(rep, dv);
        auto pr = open_out(out / ("profile" + sfx + ".csv"));
        write_profile_csv(rep, pr);
        const ProfileRun& r = rep.runs.front();
        auto gs = open_out(out / ("gamma_fields" + sfx + ".csv"));
        write_gamma_csv(r.reduced.solution, gs);
        write_vtk(rep.full.solution, c.params, out / ("full" + sfx + ".vtk"));
        write_vtk(r.reduced.solution, c.params, out / ("reduced" + sfx + ".vtk"));
        log << "h=1/" << nx << " " << to_string(r.profile.kind) << std::setprecision(5) << "  eps_u "
            << r.deviations.eps_u << "  eps_v " << r.deviations.eps_v << "  eps_p " << r.deviations.eps_p
            << "  mass imbalance full " << filtration_mass_imbalance(rep.full.solution) << " reduced "
            << filtration_mass_imbalance(r.reduced.solution) << '\n';
    }
}

void run_custom(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    const StaggeredGrid grid = build_grid(c.geometry, c.model);
    const BoundarySpec bcs = build_boundary_spec(c);
    LinearSystem sys = c.model == Model::Full
                           ? assemble_full(grid, c.params, {}, bcs)
                           : assemble_reduced(grid, c.params, c.profile, {}, bcs, build_gamma_spec(c));
    SolverOptions so;
    so.method = c.method;
    so.tol = c.tol;
    SolveReport sr = solve(sys, so);
    const Solution sol(grid, std::move(sr.x));
    write_vtk(sol, c.params, out / "solution.vtk");
    if (c.model == Model::Reduced) {
        auto gs = open_out(out / "gamma_fields.csv");
        write_gamma_csv(sol, gs);
    }
    log << sys.size() << " unknowns, relative residual " << std::setprecision(3) << sr.relative_residual << '\n';
}

}  // namespace

void execute_config(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    if (auto problems = check_config(c); !problems.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ValidationError(msg, problems);
    }
    std::filesystem::create_directories(out);
    switch (c.scenario) {
    case Scenario::MmsFull:
    case Scenario::MmsReduced: run_mms(c, out, log); break;
    case Scenario::Filtration: run_filtration_levels(c, out, log); break;
    case Scenario::Custom: run_custom(c, out, log); break;
    }
}

}  // namespace sbd
