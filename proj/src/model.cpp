#include "hive/model.hpp"
#include "hive/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace hive {

using json = nlohmann::json;

namespace {

constexpr double kSimplexTol = 1e-12;

double require_number(const json& node, const std::string& key, const std::string& where)
{
    if (!node.contains(key))
        throw MalformedDocument(where + ": missing key '" + key + "'");
    const auto& v = node.at(key);
    if (!v.is_number())
        throw MalformedDocument(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::vector<double> require_array(const json& node, const std::string& key, const std::string& where)
{
    if (!node.contains(key))
        throw MalformedDocument(where + ": missing key '" + key + "'");
    const auto& v = node.at(key);
    if (!v.is_array())
        throw MalformedDocument(where + "." + key + ": expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw MalformedDocument(where + "." + key + "[" + std::to_string(i) + "]: expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

void require_positive(double value, const std::string& field)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainViolation(field + " must be finite and > 0 (got " + std::to_string(value) + ")");
}

json vector_to_json(const Vector& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

} // namespace

std::string to_string(ValueRule rule)
{
    return rule == ValueRule::gradient ? "gradient" : "own_effect";
}

HiveConfig parse_config(const std::string& document, const ParseOptions& options)
{
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw MalformedDocument("config: top level must be an object");

    for (const char* key : {"families", "resources", "preferences", "sigma", "budget"})
        if (!doc.contains(key)) throw MalformedDocument(std::string("config: missing key '") + key + "'");

    const json& fams = doc.at("families");
    const json& res = doc.at("resources");
    if (!fams.is_array() || fams.empty()) throw MalformedDocument("families: expected a non-empty array");
    if (!res.is_array() || res.empty()) throw MalformedDocument("resources: expected a non-empty array");

    const int S = static_cast<int>(fams.size());
    const int M = static_cast<int>(res.size());

    HiveConfig cfg;
    cfg.A.resize(S);
    cfg.c.resize(S);
    cfg.eta.resize(S);
    cfg.rho.resize(S);
    cfg.alpha.resize(S, M);
    cfg.gamma.resize(S, S);
    cfg.R.resize(M);

    for (int m = 0; m < M; ++m) {
        const std::string where = "resources[" + std::to_string(m) + "]";
        const json& r = res[m];
        if (!r.is_object()) throw MalformedDocument(where + ": expected an object");
        cfg.resource_names.push_back(r.value("name", "resource" + std::to_string(m + 1)));
        cfg.R[m] = require_number(r, "R", where);
    }

    for (int j = 0; j < S; ++j) {
        const std::string where = "families[" + std::to_string(j) + "]";
        const json& f = fams[j];
        if (!f.is_object()) throw MalformedDocument(where + ": expected an object");
        cfg.family_names.push_back(f.value("name", "family" + std::to_string(j + 1)));
        cfg.A[j] = require_number(f, "A", where);
        cfg.c[j] = require_number(f, "c", where);
        cfg.eta[j] = require_number(f, "eta", where);
        cfg.rho[j] = require_number(f, "rho", where);

        auto alpha = require_array(f, "alpha", where);
        if (static_cast<int>(alpha.size()) != M)
            throw DimensionMismatch(where + ".alpha: length " + std::to_string(alpha.size()) +
                                    " but there are " + std::to_string(M) + " resources");
        for (int m = 0; m < M; ++m) cfg.alpha(j, m) = alpha[m];

        auto gamma = require_array(f, "gamma", where);
        if (static_cast<int>(gamma.size()) != S)
            throw DimensionMismatch(where + ".gamma: length " + std::to_string(gamma.size()) +
                                    " but there are " + std::to_string(S) + " families");
        for (int k = 0; k < S; ++k) cfg.gamma(j, k) = gamma[k];
    }

    const json& pref = doc.at("preferences");
    std::vector<double> w;
    if (pref.is_array()) {
        w = require_array(doc, "preferences", "config");
    } else if (pref.is_object()) {
        w = require_array(pref, "w", "preferences");
    } else {
        throw MalformedDocument("preferences: expected an array of weights");
    }
    if (static_cast<int>(w.size()) != S)
        throw DimensionMismatch("preferences: length " + std::to_string(w.size()) + " but there are " +
                                std::to_string(S) + " families");
    cfg.w = Eigen::Map<Vector>(w.data(), S);

    cfg.sigma = require_number(doc, "sigma", "config");
    cfg.B = require_number(doc, "budget", "config");

    if (doc.contains("marginal_value")) {
        const auto rule = doc.at("marginal_value");
        if (!rule.is_string()) throw MalformedDocument("marginal_value: expected a string");
        const auto s = rule.get<std::string>();
        if (s == "gradient")
            cfg.value_rule = ValueRule::gradient;
        else if (s == "own_effect")
            cfg.value_rule = ValueRule::own_effect;
        else
            throw DomainViolation("marginal_value: expected 'gradient' or 'own_effect', got '" + s + "'");
    }
    if (doc.contains("initial_population")) {
        auto n0 = require_array(doc, "initial_population", "config");
        if (static_cast<int>(n0.size()) != S)
            throw DimensionMismatch("initial_population: length " + std::to_string(n0.size()) +
                                    " but there are " + std::to_string(S) + " families");
        cfg.initial_population = Vector(Eigen::Map<Vector>(n0.data(), S));
    }
    if (doc.contains("gamma_fixed")) {
        const json& gf = doc.at("gamma_fixed");
        if (!gf.is_array()) throw MalformedDocument("gamma_fixed: expected an array of [j, k] pairs");
        for (const auto& pair : gf) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
                throw MalformedDocument("gamma_fixed: entries must be [j, k] with 1-based integer indices");
            const int j = pair[0].get<int>() - 1;
            const int k = pair[1].get<int>() - 1;
            if (j < 0 || j >= S || k < 0 || k >= S || j == k)
                throw DomainViolation("gamma_fixed: index out of range or on the diagonal");
            cfg.gamma_fixed.emplace_back(j, k);
        }
    }

    if (options.renormalize) {
        if ((cfg.w.array() > 0.0).all()) cfg.w /= cfg.w.sum();
        for (int j = 0; j < S; ++j) {
            const double s = cfg.alpha.row(j).sum();
            if (s > 0.0 && (cfg.alpha.row(j).array() > 0.0).all()) cfg.alpha.row(j) /= s;
        }
    }

    check_invariants(cfg);
    return cfg;
}

HiveConfig load_config(const std::string& path, const ParseOptions& options)
{
    std::ifstream in(path);
    if (!in) throw MalformedDocument("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), options);
}

std::string serialize_config(const HiveConfig& cfg)
{
    json doc;
    json fams = json::array();
    for (int j = 0; j < cfg.families(); ++j) {
        json f;
        f["name"] = cfg.family_names.size() > static_cast<std::size_t>(j) ? cfg.family_names[j]
                                                                          : "family" + std::to_string(j + 1);
        f["A"] = cfg.A[j];
        f["c"] = cfg.c[j];
        f["eta"] = cfg.eta[j];
        f["rho"] = cfg.rho[j];
        f["alpha"] = vector_to_json(cfg.alpha.row(j).transpose());
        f["gamma"] = vector_to_json(cfg.gamma.row(j).transpose());
        fams.push_back(f);
    }
    json res = json::array();
    for (int m = 0; m < cfg.resources(); ++m) {
        json r;
        r["name"] = cfg.resource_names.size() > static_cast<std::size_t>(m) ? cfg.resource_names[m]
                                                                            : "resource" + std::to_string(m + 1);
        r["R"] = cfg.R[m];
        res.push_back(r);
    }
    doc["families"] = fams;
    doc["resources"] = res;
    doc["preferences"] = vector_to_json(cfg.w);
    doc["sigma"] = cfg.sigma;
    doc["budget"] = cfg.B;
    doc["marginal_value"] = to_string(cfg.value_rule);
    if (cfg.initial_population) doc["initial_population"] = vector_to_json(*cfg.initial_population);
    if (!cfg.gamma_fixed.empty()) {
        json gf = json::array();
        for (auto [j, k] : cfg.gamma_fixed) gf.push_back({j + 1, k + 1});
        doc["gamma_fixed"] = gf;
    }
    return doc.dump(2);
}

void check_invariants(const HiveConfig& cfg)
{
    const int S = cfg.families();
    const int M = cfg.resources();
    if (S < 1) throw DimensionMismatch("at least one family is required");
    if (M < 1) throw DimensionMismatch("at least one resource is required");
    if (cfg.c.size() != S || cfg.eta.size() != S || cfg.rho.size() != S || cfg.w.size() != S)
        throw DimensionMismatch("per-family vectors must all have length S = " + std::to_string(S));
    if (cfg.alpha.rows() != S || cfg.alpha.cols() != M)
        throw DimensionMismatch("alpha must be S x M");
    if (cfg.gamma.rows() != S || cfg.gamma.cols() != S) throw DimensionMismatch("gamma must be S x S");

    auto fam = [&](int j, const char* field) {
        return "families[" + std::to_string(j) + "]." + field;
    };
    for (int j = 0; j < S; ++j) {
        require_positive(cfg.A[j], fam(j, "A"));
        require_positive(cfg.c[j], fam(j, "c"));
        require_positive(cfg.eta[j], fam(j, "eta"));
        require_positive(cfg.rho[j], fam(j, "rho"));
        require_positive(cfg.w[j], "preferences[" + std::to_string(j) + "]");
        for (int m = 0; m < M; ++m)
            require_positive(cfg.alpha(j, m), fam(j, "alpha") + "[" + std::to_string(m) + "]");
        const double row = cfg.alpha.row(j).sum();
        if (std::abs(row - 1.0) > kSimplexTol)
            throw DomainViolation(fam(j, "alpha") + " must sum to 1 (sum = " + std::to_string(row) + ")");
        if (cfg.gamma(j, j) != 0.0) throw DomainViolation(fam(j, "gamma") + " must have a zero own entry");
        for (int k = 0; k < S; ++k)
            if (!std::isfinite(cfg.gamma(j, k)))
                throw DomainViolation(fam(j, "gamma") + "[" + std::to_string(k) + "] must be finite");
    }
    for (int m = 0; m < M; ++m) require_positive(cfg.R[m], "resources[" + std::to_string(m) + "].R");
    const double wsum = cfg.w.sum();
    if (std::abs(wsum - 1.0) > kSimplexTol)
        throw DomainViolation("preferences must sum to 1 (sum = " + std::to_string(wsum) + ")");
    require_positive(cfg.B, "budget");
    require_positive(cfg.sigma, "sigma");
    if (cfg.initial_population) {
        if (cfg.initial_population->size() != S) throw DimensionMismatch("initial_population must have length S");
        for (int j = 0; j < S; ++j)
            if (!((*cfg.initial_population)[j] >= 0.0) || !std::isfinite((*cfg.initial_population)[j]))
                throw DomainViolation("initial_population[" + std::to_string(j) + "] must be finite and >= 0");
    }
}

double externality_norm(const HiveConfig& cfg)
{
    double norm = 0.0;
    for (int j = 0; j < cfg.families(); ++j) {
        double row = 0.0;
        for (int k = 0; k < cfg.families(); ++k)
            if (k != j) row += std::abs(cfg.gamma(j, k));
        norm = std::max(norm, row);
    }
    return norm;
}

double eta_max(const HiveConfig& cfg) { return cfg.eta.maxCoeff(); }

ValidationReport validate(const HiveConfig& cfg)
{
    ValidationReport rep;
    try {
        check_invariants(cfg);
    } catch (const DomainError& e) {
        rep.ok = false;
        rep.messages.emplace_back(e.what());
        return rep;
    }
    rep.eta_max = eta_max(cfg);
    rep.externality_norm = externality_norm(cfg);
    rep.weak_ext_bound = (1.0 - rep.eta_max) / (1.0 + cfg.sigma * rep.eta_max);
    rep.weak_ext_applicable = rep.eta_max < 1.0;
    rep.weak_ext_satisfied = rep.externality_norm < rep.weak_ext_bound;
    rep.budget_feasible_nonempty = cfg.B > 0.0 && (cfg.c.array() > 0.0).all();

    if (!rep.weak_ext_applicable) {
        rep.messages.push_back("eta_max = " + std::to_string(rep.eta_max) +
                               " >= 1: weak-externality bound inapplicable (increasing-returns regime)");
    } else if (!rep.weak_ext_satisfied) {
        rep.messages.push_back("externality norm " + std::to_string(rep.externality_norm) +
                               " exceeds weak-externality bound " + std::to_string(rep.weak_ext_bound));
    }
    return rep;
}

double budget_cost(const HiveConfig& cfg, const Vector& N) { return cfg.c.dot(N); }

double budget_utilization(const HiveConfig& cfg, const Vector& N) { return budget_cost(cfg, N) / cfg.B; }

Vector omega_centroid(const HiveConfig& cfg)
{
    const int S = cfg.families();
    return (cfg.B / (S + 1.0)) * cfg.c.cwiseInverse();
}

Vector default_start(const HiveConfig& cfg)
{
    return cfg.initial_population ? *cfg.initial_population : omega_centroid(cfg);
}

ParamSelector ParamSelector::parse(const std::string& text)
{
    static const std::regex two(R"(^\s*gamma\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*$)");
    static const std::regex one(R"(^\s*(eta|w|R|A|c)\s*\[\s*(\d+)\s*\]\s*$)");
    std::smatch m;
    ParamSelector sel;
    if (std::regex_match(text, m, two)) {
        sel.kind = Kind::gamma_entry;
        sel.i = std::stoi(m[1]) - 1;
        sel.j = std::stoi(m[2]) - 1;
        if (sel.i < 0 || sel.j < 0 || sel.i == sel.j)
            throw DomainViolation("parameter '" + text + "': gamma indices are 1-based and off-diagonal");
        return sel;
    }
    if (std::regex_match(text, m, one)) {
        const std::string name = m[1];
        sel.i = std::stoi(m[2]) - 1;
        if (sel.i < 0) throw DomainViolation("parameter '" + text + "': indices are 1-based");
        if (name == "eta") sel.kind = Kind::eta;
        else if (name == "w") sel.kind = Kind::w;
        else if (name == "R") sel.kind = Kind::R;
        else if (name == "A") sel.kind = Kind::A;
        else sel.kind = Kind::c;
        return sel;
    }
    if (text == "gamma") {
        sel.kind = Kind::gamma_uniform;
        return sel;
    }
    if (text == "B" || text == "budget") {
        sel.kind = Kind::B;
        return sel;
    }
    if (text == "sigma") {
        sel.kind = Kind::sigma;
        return sel;
    }
    throw DomainViolation("unrecognized parameter selector '" + text + "'");
}

std::string ParamSelector::to_string() const
{
    auto idx = [](int v) { return std::to_string(v + 1); };
    switch (kind) {
    case Kind::gamma_entry: return "gamma[" + idx(i) + "," + idx(j) + "]";
    case Kind::gamma_uniform: return "gamma";
    case Kind::eta: return "eta[" + idx(i) + "]";
    case Kind::w: return "w[" + idx(i) + "]";
    case Kind::R: return "R[" + idx(i) + "]";
    case Kind::A: return "A[" + idx(i) + "]";
    case Kind::c: return "c[" + idx(i) + "]";
    case Kind::B: return "B";
    case Kind::sigma: return "sigma";
    }
    return "?";
}

namespace {

void check_family_index(const HiveConfig& cfg, int i, const ParamSelector& sel)
{
    if (i < 0 || i >= cfg.families())
        throw DomainViolation("parameter " + sel.to_string() + ": family index out of range");
}

} // namespace

double ParamSelector::get(const HiveConfig& cfg) const
{
    switch (kind) {
    case Kind::gamma_entry:
        check_family_index(cfg, i, *this);
        check_family_index(cfg, j, *this);
        return cfg.gamma(i, j);
    case Kind::gamma_uniform: {
        // first non-fixed off-diagonal entry
        for (int a = 0; a < cfg.families(); ++a)
            for (int b = 0; b < cfg.families(); ++b) {
                if (a == b) continue;
                if (std::find(cfg.gamma_fixed.begin(), cfg.gamma_fixed.end(), std::make_pair(a, b)) !=
                    cfg.gamma_fixed.end())
                    continue;
                return cfg.gamma(a, b);
            }
        return 0.0;
    }
    case Kind::eta: check_family_index(cfg, i, *this); return cfg.eta[i];
    case Kind::w: check_family_index(cfg, i, *this); return cfg.w[i];
    case Kind::A: check_family_index(cfg, i, *this); return cfg.A[i];
    case Kind::c: check_family_index(cfg, i, *this); return cfg.c[i];
    case Kind::R:
        if (i < 0 || i >= cfg.resources()) throw DomainViolation("parameter " + to_string() + ": resource index out of range");
        return cfg.R[i];
    case Kind::B: return cfg.B;
    case Kind::sigma: return cfg.sigma;
    }
    return 0.0;
}

HiveConfig ParamSelector::apply(const HiveConfig& cfg, double value) const
{
    HiveConfig out = cfg;
    get(cfg);  // range checks
    switch (kind) {
    case Kind::gamma_entry: out.gamma(i, j) = value; break;
    case Kind::gamma_uniform:
        for (int a = 0; a < cfg.families(); ++a)
            for (int b = 0; b < cfg.families(); ++b) {
                if (a == b) continue;
                if (std::find(cfg.gamma_fixed.begin(), cfg.gamma_fixed.end(), std::make_pair(a, b)) !=
                    cfg.gamma_fixed.end())
                    continue;
                out.gamma(a, b) = value;
            }
        break;
    case Kind::eta: out.eta[i] = value; break;
    case Kind::w: {
        if (!(value > 0.0 && value < 1.0) && cfg.families() > 1)
            throw DomainViolation("parameter " + to_string() + ": weight must lie in (0, 1)");
        const double rest_old = 1.0 - cfg.w[i];
        const double rest_new = 1.0 - value;
        for (int k = 0; k < cfg.families(); ++k)
            out.w[k] = (k == i) ? value : cfg.w[k] * rest_new / rest_old;
        if (cfg.families() == 1) out.w[0] = 1.0;
        break;
    }
    case Kind::A: out.A[i] = value; break;
    case Kind::c: out.c[i] = value; break;
    case Kind::R: out.R[i] = value; break;
    case Kind::B: out.B = value; break;
    case Kind::sigma: out.sigma = value; break;
    }
    return out;
}

} // namespace hive
