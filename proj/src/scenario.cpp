#include "curved/scenario.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "curved/csvio.hpp"

namespace curved {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

struct RawScenario {
    std::map<std::string, KeyValue> keys;
    std::vector<KeyValue> bodies; // repeated `body =` lines
};

RawScenario tokenize(const std::string& text) {
    RawScenario raw;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const size_t hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ScenarioError(lineno, "empty key");
        if (value.empty()) throw ScenarioError(lineno, "empty value for '" + key + "'");
        if (key == "body") {
            raw.bodies.push_back({value, lineno, true});
        } else {
            if (raw.keys.count(key))
                throw ScenarioError(lineno, "duplicate key '" + key + "'");
            raw.keys[key] = {value, lineno, false};
        }
    }
    return raw;
}

double to_number(const KeyValue& kv, const std::string& key) {
    try {
        return parse_double(kv.value);
    } catch (const std::exception&) {
        throw ScenarioError(kv.line, "value of '" + key + "' is not a number: '" + kv.value +
                                         "'");
    }
}

std::vector<double> to_numbers(const KeyValue& kv, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(kv.value);
    std::string tok;
    while (ss >> tok) {
        try {
            out.push_back(parse_double(tok));
        } catch (const std::exception&) {
            throw ScenarioError(kv.line, "value of '" + key + "' has a bad number: '" + tok +
                                             "'");
        }
    }
    return out;
}

struct RawReader {
    RawScenario& raw;

    std::optional<double> number(const std::string& key) {
        auto it = raw.keys.find(key);
        if (it == raw.keys.end()) return std::nullopt;
        it->second.used = true;
        return to_number(it->second, key);
    }
    std::optional<std::vector<double>> numbers(const std::string& key) {
        auto it = raw.keys.find(key);
        if (it == raw.keys.end()) return std::nullopt;
        it->second.used = true;
        return to_numbers(it->second, key);
    }
    std::optional<std::string> text(const std::string& key) {
        auto it = raw.keys.find(key);
        if (it == raw.keys.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }
    int line(const std::string& key) const {
        auto it = raw.keys.find(key);
        return it == raw.keys.end() ? 0 : it->second.line;
    }
    double require(const std::string& key) {
        auto v = number(key);
        if (!v) throw ScenarioError(0, "missing required key '" + key + "'");
        return *v;
    }
};

AnsatzTag tag_from_name(const std::string& name, int line) {
    for (AnsatzTag t : {AnsatzTag::PositiveElliptic, AnsatzTag::PositiveEllipticElliptic,
                        AnsatzTag::NegativeElliptic, AnsatzTag::NegativeHyperbolic,
                        AnsatzTag::NegativeEllipticHyperbolic, AnsatzTag::Parabolic})
        if (ansatz_name(t) == name) return t;
    throw ScenarioError(line, "unknown ansatz class '" + name + "'");
}

void read_family(Scenario& sc, RawReader& r, RawScenario& raw) {
    const auto fname = r.text("family");
    if (!fname) throw ScenarioError(0, "model = family needs a 'family' key");
    const auto fam = family_from_name(*fname);
    if (!fam) throw ScenarioError(r.line("family"), "unknown family '" + *fname + "'");

    FamilyParams p;
    p.m = r.number("m").value_or(1.0);
    p.gamma = r.number("gamma").value_or(0.0);
    p.zeta = r.number("zeta").value_or(0.0);
    p.h = r.number("h");

    // momentum constants under their usual letters; the generic keys
    // mom_wx / mom_yz always work
    auto wx = r.number("mom_wx"), yz = r.number("mom_yz");
    if (auto v = r.number("c1")) wx = v;
    if (auto v = r.number("b")) wx = v;
    if (auto v = r.number("d1")) wx = v;
    if (auto v = r.number("c2")) yz = v;
    if (auto v = r.number("d2")) yz = v;
    if (auto v = r.number("a")) {
        if (*fam == Family::NhEulerian3 || *fam == Family::NhBinary)
            yz = v;
        else
            throw ScenarioError(r.line("a"), "key 'a' only applies to the nh families");
    }
    if (auto v = r.number("c")) {
        switch (*fam) {
            case Family::PeLagrangian: wx = v; break;
            case Family::NhBinary:
            case Family::NhEulerian3: yz = v; break;
            default:
                throw ScenarioError(r.line("c"),
                                    "key 'c' is ambiguous here; use c1/c2 or d1/d2");
        }
    }
    if (wx) p.mom_wx = *wx;
    if (yz) p.mom_yz = *yz;

    FamilySpec spec{*fam, p};
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw ScenarioError(r.line("family"), e.what());
    }

    // state under the family's own variable names (z0/v0, r0/s0, ...)
    const auto names = family_state_names(*fam);
    const std::string k1 = std::string(names[0]) + "0";
    const std::string k2 = std::string(names[1]) + "0";
    const auto s1 = r.number(k1), s2 = r.number(k2);
    if (!s1) throw ScenarioError(0, "missing initial state key '" + k1 + "'");
    if (!s2) throw ScenarioError(0, "missing initial state key '" + k2 + "'");
    sc.family_state = {*s1, *s2};
    if (!family_in_domain(spec, sc.family_state))
        throw ScenarioError(raw.keys.at(k1).line, "initial state outside the family domain");

    sc.family = spec;
    sc.space = family_space(*fam);
    sc.label = std::string(family_name(*fam));
}

void read_criterion(Scenario& sc, RawReader& r, RawScenario& raw) {
    const auto cname = r.text("class");
    if (!cname) throw ScenarioError(0, "model = class needs a 'class' key");
    const AnsatzTag tag = tag_from_name(*cname, r.line("class"));

    const auto masses = r.numbers("masses");
    if (!masses) throw ScenarioError(0, "missing 'masses'");
    auto phases_wx = r.numbers("phases_wx").value_or(std::vector<double>{});
    auto phases_yz = r.numbers("phases_yz").value_or(std::vector<double>{});
    const double mom_wx = r.number("c_wx").value_or(0.0);
    const double mom_yz = r.number("c_yz").value_or(0.0);

    Ansatz a;
    try {
        a = make_ansatz(tag, *masses, phases_wx, phases_yz, mom_wx, mom_yz);
    } catch (const std::exception& e) {
        throw ScenarioError(r.line("class"), e.what());
    }

    const auto state = r.numbers("state");
    if (!state) throw ScenarioError(0, "missing 'state'");
    if (static_cast<int>(state->size()) != core_dim(a))
        throw ScenarioError(raw.keys.at("state").line,
                            "'state' needs " + std::to_string(core_dim(a)) +
                                " values for this class");
    sc.ansatz = std::move(a);
    sc.criterion_core = *state;
    sc.space = ansatz_space(tag);
    sc.label = std::string(ansatz_name(tag));
}

void read_full(Scenario& sc, RawReader& r, RawScenario& raw) {
    const auto sp = r.text("space");
    if (!sp) throw ScenarioError(0, "model = full needs a 'space' key");
    if (*sp == "S3")
        sc.space = Space::sphere();
    else if (*sp == "H3")
        sc.space = Space::hyperbolic();
    else
        throw ScenarioError(r.line("space"), "space must be S3 or H3");

    if (raw.bodies.empty()) throw ScenarioError(0, "model = full needs 'body' lines");
    for (const KeyValue& kv : raw.bodies) {
        const std::vector<double> vals = to_numbers(kv, "body");
        if (vals.size() != 9)
            throw ScenarioError(kv.line, "body needs 9 numbers: m w x y z dw dx dy dz");
        if (!(vals[0] > 0)) throw ScenarioError(kv.line, "body mass must be positive");
        sc.masses.push_back(vals[0]);
        sc.positions.push_back({vals[1], vals[2], vals[3], vals[4]});
        sc.velocities.push_back({vals[5], vals[6], vals[7], vals[8]});
    }
    try {
        make_configuration(sc.space, sc.masses, sc.positions, sc.velocities);
    } catch (const std::exception& e) {
        throw ScenarioError(raw.bodies.front().line, e.what());
    }
    sc.label = "full";
}

} // namespace

Scenario parse_scenario_text(const std::string& text) {
    RawScenario raw = tokenize(text);
    RawReader r{raw};
    Scenario sc;

    const auto model = r.text("model");
    if (!model) throw ScenarioError(0, "missing required key 'model'");
    if (*model == "full") {
        sc.kind = Scenario::Kind::Full;
        read_full(sc, r, raw);
    } else if (*model == "family") {
        sc.kind = Scenario::Kind::Family;
        read_family(sc, r, raw);
    } else if (*model == "class") {
        sc.kind = Scenario::Kind::Criterion;
        read_criterion(sc, r, raw);
    } else {
        throw ScenarioError(r.line("model"), "model must be full, family or class");
    }

    if (sc.kind != Scenario::Kind::Full) {
        if (!raw.bodies.empty())
            throw ScenarioError(raw.bodies.front().line,
                                "'body' lines only belong to model = full");
        if (auto sp = r.text("space")) {
            const Space want = *sp == "S3" ? Space::sphere() : Space::hyperbolic();
            if (*sp != "S3" && *sp != "H3")
                throw ScenarioError(r.line("space"), "space must be S3 or H3");
            if (!(want == sc.space))
                throw ScenarioError(r.line("space"),
                                    "space does not match the chosen family/class");
        }
    }

    sc.alpha0 = r.number("alpha0").value_or(0.0);
    sc.beta0 = r.number("beta0").value_or(0.0);

    if (auto v = r.number("rel_tol")) sc.settings.rel_tol = *v;
    if (auto v = r.number("abs_tol")) sc.settings.abs_tol = *v;
    if (auto v = r.number("h_init")) sc.settings.h_init = *v;
    if (auto v = r.number("h_min")) sc.settings.h_min = *v;
    if (auto v = r.number("h_max")) sc.settings.h_max = *v;
    if (auto v = r.number("project_every"))
        sc.settings.project_every = static_cast<int>(*v);
    if (auto v = r.number("t_end")) sc.settings.t_end = *v;
    if (auto v = r.number("samples")) sc.samples = static_cast<int>(*v);
    if (auto v = r.text("out")) sc.out_dir = *v;
    if (auto v = r.text("label")) sc.label = *v;

    try {
        sc.settings.validate();
        if (sc.samples < 2) throw std::invalid_argument("samples must be >= 2");
    } catch (const std::exception& e) {
        throw ScenarioError(0, e.what());
    }

    for (const auto& [key, kv] : raw.keys)
        if (!kv.used) throw ScenarioError(kv.line, "unknown key '" + key + "'");
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(0, "cannot open scenario file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

} // namespace curved
