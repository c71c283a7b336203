#include "tbpc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tbpc::cli {

namespace {

std::string where(std::size_t line, const std::string& field) {
    std::string s = line > 0 ? "line " + std::to_string(line) : std::string("scenario");
    if (!field.empty()) s += ", field '" + field + "'";
    return s;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Entry {
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

/// section -> key -> entry
class Document {
public:
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::map<std::string, std::size_t> section_lines;

    const Entry* find(const std::string& section, const std::string& key) {
        auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    bool has_section(const std::string& section) const { return sections.count(section) > 0; }

    double number(const std::string& section, const std::string& key, std::optional<double> fallback) {
        const Entry* e = find(section, key);
        if (!e) {
            if (fallback) return *fallback;
            throw ScenarioError(0, key, "[" + section + "] missing required field '" + key + "'");
        }
        return parse_number(*e, key);
    }

    std::size_t count(const std::string& section, const std::string& key, std::size_t fallback) {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        std::size_t v = 0;
        const auto* end = e->value.data() + e->value.size();
        auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
        if (ec != std::errc() || ptr != end) throw ScenarioError(e->line, key, "expected a non-negative integer, got '" + e->value + "'");
        return v;
    }

    std::string text(const std::string& section, const std::string& key, const std::string& fallback) {
        const Entry* e = find(section, key);
        return e ? e->value : fallback;
    }

    std::vector<double> numbers(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) throw ScenarioError(0, key, "[" + section + "] missing required field '" + key + "'");
        std::vector<double> out;
        for (const auto& item : split_list(e->value)) out.push_back(parse_number(Entry{item, e->line}, key));
        return out;
    }

    static double parse_number(const Entry& e, const std::string& key) {
        double v = 0.0;
        const auto* end = e.value.data() + e.value.size();
        auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
        if (ec != std::errc() || ptr != end) throw ScenarioError(e.line, key, "expected a number, got '" + e.value + "'");
        return v;
    }

    void reject_unused() const {
        for (const auto& [section, keys] : sections)
            for (const auto& [key, entry] : keys)
                if (!entry.used) throw ScenarioError(entry.line, key, "unknown field in [" + section + "]");
    }
};

const std::set<std::string> kSections{"scenario", "model", "domain", "profile", "grid", "solvers",
                                      "spectral", "oracle", "greens", "checks", "output"};

Document tokenize(std::string_view text) {
    Document doc;
    std::string section;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ScenarioError(lineno, "", "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.count(section)) throw ScenarioError(lineno, section, "unknown section");
            if (doc.section_lines.count(section)) throw ScenarioError(lineno, section, "duplicate section");
            doc.section_lines[section] = lineno;
            doc.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ScenarioError(lineno, "", "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) throw ScenarioError(lineno, key, "field outside of any section");
        if (key.empty()) throw ScenarioError(lineno, "", "empty key");
        auto& keys = doc.sections[section];
        if (keys.count(key)) throw ScenarioError(lineno, key, "duplicate field in [" + section + "]");
        keys[key] = Entry{value, lineno};
    }
    return doc;
}

template <class T>
T choose(const Entry* e, const std::string& key, const std::vector<std::pair<std::string, T>>& options, T fallback) {
    if (!e) return fallback;
    for (const auto& [name, v] : options)
        if (name == e->value) return v;
    std::string allowed;
    for (const auto& [name, v] : options) allowed += (allowed.empty() ? "" : ", ") + name;
    throw ScenarioError(e->line, key, "unknown value '" + e->value + "' (expected one of: " + allowed + ")");
}

ModelParams parse_model(Document& doc) {
    ModelParams p;
    std::optional<ModelParams> base;
    if (const Entry* e = doc.find("model", "preset")) {
        if (e->value != "paper-2015") throw ScenarioError(e->line, "preset", "unknown preset '" + e->value + "'");
        base = ModelParams::paper_2015();
    }
    auto get = [&](const char* key, double ModelParams::*member) {
        std::optional<double> fallback;
        if (base) fallback = (*base).*member;
        p.*member = doc.number("model", key, fallback);
    };
    get("eta", &ModelParams::eta);
    get("delta", &ModelParams::delta);
    get("rho", &ModelParams::rho);
    get("theta", &ModelParams::theta);
    get("horizon", &ModelParams::horizon);
    get("d", &ModelParams::diffusivity);
    try {
        p.validate();
    } catch (const Error& err) {
        const std::string msg = err.what();
        const std::string field = msg.substr(0, msg.find(' '));
        const Entry* e = doc.find("model", field == "diffusivity" ? "d" : field);
        throw ScenarioError(e ? e->line : 0, field, msg);
    }
    return p;
}

SpatialDomain parse_domain(Document& doc) {
    const auto kind = choose<SpatialDomain::Kind>(doc.find("domain", "kind"), "kind",
                                                  {{"bounded", SpatialDomain::Kind::Bounded},
                                                   {"unbounded", SpatialDomain::Kind::Unbounded}},
                                                  SpatialDomain::Kind::Bounded);
    try {
        if (kind == SpatialDomain::Kind::Bounded)
            return SpatialDomain::bounded(doc.number("domain", "lo", -1.0), doc.number("domain", "hi", 1.0));
        return SpatialDomain::unbounded(doc.number("domain", "halfwidth", 1.0));
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& err) {
        throw ScenarioError(doc.section_lines.count("domain") ? doc.section_lines["domain"] : 0, "domain", err.what());
    }
}

InitialProfile parse_profile(Document& doc) {
    enum class Kind { Constant, Bump, Tabulated };
    const auto kind = choose<Kind>(doc.find("profile", "kind"), "kind",
                                   {{"constant", Kind::Constant}, {"bump", Kind::Bump}, {"tabulated", Kind::Tabulated}},
                                   Kind::Constant);
    try {
        if (kind == Kind::Tabulated)
            return InitialProfile::tabulated(doc.numbers("profile", "positions"), doc.numbers("profile", "values"));
        const double level = doc.number("profile", "level", kPaperInitialLevel);
        return kind == Kind::Bump ? InitialProfile::centered_bump(level) : InitialProfile::constant(level);
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& err) {
        throw ScenarioError(doc.section_lines.count("profile") ? doc.section_lines["profile"] : 0, "profile", err.what());
    }
}

}  // namespace

ScenarioError::ScenarioError(std::size_t line, std::string field, std::string message, const std::string& source)
    : Error(ErrorCode::Parse, (source.empty() ? "" : source + ": ") + where(line, field) + ": " + message),
      line_(line),
      field_(std::move(field)),
      message_(std::move(message)) {}

std::optional<Provenance> solver_from_name(std::string_view name) {
    for (auto p : {Provenance::AspatialClosedForm, Provenance::SpectralLocal, Provenance::SpectralGlobal,
                   Provenance::GreensLocal, Provenance::GreensGlobal, Provenance::FdOracleLocal,
                   Provenance::FdOracleGlobal})
        if (to_string(p) == name) return p;
    return std::nullopt;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"local_equals_global", "aggregate_decay", "upper_bound",
                                                "longrun_cleanup"};
    return names;
}

void Scenario::validate() const {
    if (solvers.empty()) throw ScenarioError(0, "run", "[solvers] needs at least one solver");
    for (auto s : solvers) {
        const bool spectral_solver = s == Provenance::SpectralLocal || s == Provenance::SpectralGlobal;
        const bool greens_solver = s == Provenance::GreensLocal || s == Provenance::GreensGlobal;
        if (spectral_solver && !domain.is_bounded())
            throw ScenarioError(0, std::string(to_string(s)), "spectral solvers need a bounded domain");
        if (greens_solver && domain.is_bounded())
            throw ScenarioError(0, std::string(to_string(s)), "greens solvers need an unbounded domain");
    }
    for (const auto& c : checks)
        if (std::find(check_names().begin(), check_names().end(), c) == check_names().end())
            throw ScenarioError(0, c, "unknown check");
    if (nx < 3 || nt < 2) throw ScenarioError(0, "nx", "grid needs nx >= 3 and nt >= 2");
    if (horizons.empty()) throw ScenarioError(0, "horizons", "need at least one horizon");
    for (double h : horizons)
        if (!(h > 0.0)) throw ScenarioError(0, "horizons", "horizons must be positive");
    try {
        params.validate();
        sweep.validate();
        kernel.validate();
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& err) {
        throw ScenarioError(0, "", err.what());
    }
    if (spectral.modes < 1) throw ScenarioError(0, "modes", "need at least one mode");
}

Scenario parse_scenario(std::string_view text) {
    Document doc = tokenize(text);
    Scenario s;
    s.name = doc.text("scenario", "name", "scenario");
    if (!doc.has_section("model")) throw ScenarioError(0, "model", "missing [model] section");
    s.params = parse_model(doc);
    s.domain = parse_domain(doc);
    s.profile = parse_profile(doc);
    s.nx = doc.count("grid", "nx", 201);
    s.nt = doc.count("grid", "nt", 201);

    if (const Entry* e = doc.find("solvers", "run")) {
        for (const auto& name : split_list(e->value)) {
            const auto p = solver_from_name(name);
            if (!p) throw ScenarioError(e->line, "run", "unknown solver '" + name + "'");
            if (std::find(s.solvers.begin(), s.solvers.end(), *p) != s.solvers.end())
                throw ScenarioError(e->line, "run", "solver '" + name + "' listed twice");
            s.solvers.push_back(*p);
        }
    }
    s.spectral.form = choose<spectral::GlobalForm>(doc.find("solvers", "global_form"), "global_form",
                                                   {{"exact", spectral::GlobalForm::Exact},
                                                    {"printed", spectral::GlobalForm::Printed}},
                                                   spectral::GlobalForm::Exact);

    s.spectral.modes = doc.count("spectral", "modes", s.spectral.modes);
    s.spectral.basis = choose<spectral::CosineBasis>(doc.find("spectral", "basis"), "basis",
                                                     {{"full-neumann", spectral::CosineBasis::FullNeumann},
                                                      {"paper-even", spectral::CosineBasis::PaperEven}},
                                                     s.spectral.basis);

    s.sweep.nx = s.nx;
    s.sweep.nt = s.nt;
    s.sweep.relaxation = doc.number("oracle", "relaxation", s.sweep.relaxation);
    s.sweep.max_iters = doc.count("oracle", "max_iters", s.sweep.max_iters);
    s.sweep.convergence_tol = doc.number("oracle", "tolerance", s.sweep.convergence_tol);

    s.kernel.method = choose<greens::KernelMethod>(doc.find("greens", "method"), "method",
                                                   {{"gauss-hermite", greens::KernelMethod::GaussHermite},
                                                    {"adaptive", greens::KernelMethod::Adaptive},
                                                    {"monte-carlo", greens::KernelMethod::MonteCarlo}},
                                                   s.kernel.method);
    s.kernel.order = doc.count("greens", "order", s.kernel.order);
    s.kernel.tolerance = doc.number("greens", "tolerance", s.kernel.tolerance);
    s.kernel.samples = doc.count("greens", "samples", s.kernel.samples);

    if (const Entry* e = doc.find("checks", "run")) s.checks = split_list(e->value);
    if (doc.find("checks", "horizons")) s.horizons = doc.numbers("checks", "horizons");

    s.output_dir = doc.text("output", "directory", s.output_dir.string());
    s.seed = doc.count("output", "seed", s.seed);
    s.kernel.seed = s.seed;
    s.parallel = choose<bool>(doc.find("output", "parallel"), "parallel", {{"true", true}, {"false", false}}, false);

    doc.reject_unused();
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read scenario file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const ScenarioError& err) {
        throw ScenarioError(err.line(), err.field(), err.message(), path.string());
    }
}

Scenario preset_scenario(std::string_view preset) {
    if (preset != "paper-2015") throw ScenarioError(0, "preset", "unknown preset '" + std::string(preset) + "'");
    Scenario s;
    s.name = "paper-2015";
    s.params = ModelParams::paper_2015();
    s.domain = SpatialDomain::bounded(-1.0, 1.0);
    s.profile = InitialProfile::constant(kPaperInitialLevel);
    s.solvers = {Provenance::AspatialClosedForm, Provenance::SpectralLocal, Provenance::SpectralGlobal,
                 Provenance::FdOracleGlobal};
    s.checks = check_names();
    s.output_dir = "out/paper-2015";
    return s;
}

}  // namespace tbpc::cli
