#include "itosynth/model_file.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "itosynth/errors.hpp"
#include "itosynth/expression.hpp"

namespace itosynth {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

class ValueParser {
public:
    ValueParser(const std::string& s, const std::string& where) : s_(s), where_(where) {}

    ConfigValue parse() {
        skip();
        ConfigValue v = value();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ModelError(where_ + ": " + what); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    ConfigValue value() {
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') return string();
        if (c == '[') return array();
        if (s_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            return true;
        }
        if (s_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            return false;
        }
        return number();
    }

    std::string string() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
            out += s_[pos_++];
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    double number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a value");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    ConfigValue array() {
        ++pos_;
        skip();
        std::vector<double> flat;
        std::vector<std::vector<double>> nested;
        bool is_nested = false;
        while (true) {
            skip();
            if (pos_ >= s_.size()) fail("unterminated array");
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            if (s_[pos_] == '[') {
                is_nested = true;
                auto inner = array();
                if (!std::holds_alternative<std::vector<double>>(inner)) fail("arrays nest at most two levels");
                nested.push_back(std::get<std::vector<double>>(inner));
            } else {
                if (is_nested) fail("mixed array");
                flat.push_back(number());
            }
            skip();
            if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        }
        if (is_nested) {
            if (!flat.empty()) fail("mixed array");
            return nested;
        }
        return flat;
    }

    const std::string& s_;
    std::string where_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<Atom> read_atoms(const ConfigDocument& doc, const std::string& table) {
    std::vector<Atom> atoms;
    if (!doc.has(table, "atoms")) return atoms;
    for (const auto& p : doc.pairs(table, "atoms")) {
        if (p.size() != 2) throw ModelError("[" + table + "] atoms: expected [location, mass] pairs");
        atoms.push_back({p[0], p[1]});
    }
    return atoms;
}

RegimeKind parse_regime_kind(const std::string& s) {
    if (s == "convergent") return RegimeKind::convergent;
    if (s == "divergent") return RegimeKind::divergent;
    throw ModelError("unknown regime '" + s + "' (expected convergent or divergent)");
}

void check_version(const ConfigDocument& doc, int expected, const std::string& origin) {
    const double v = doc.number_or("", "version", -1.0);
    if (v != expected)
        throw ModelError(origin + ": unsupported or missing version (expected version = " + std::to_string(expected) + ")");
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& origin) {
    ConfigDocument doc;
    doc.origin_ = origin;
    doc.tables_[""];
    std::string table;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ModelError(where + ": bad table header");
            table = trim(std::string_view(line).substr(1, line.size() - 2));
            if (table.empty()) throw ModelError(where + ": empty table name");
            doc.tables_[table];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ModelError(where + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ModelError(where + ": empty key");
        const std::string rhs = trim(std::string_view(line).substr(eq + 1));
        auto& t = doc.tables_[table];
        if (t.count(key)) throw ModelError(where + ": duplicate key '" + key + "'");
        t[key] = ValueParser(rhs, where).parse();
    }
    return doc;
}

bool ConfigDocument::has(const std::string& table, const std::string& key) const {
    const auto it = tables_.find(table);
    return it != tables_.end() && it->second.count(key) > 0;
}

const ConfigValue& ConfigDocument::get(const std::string& table, const std::string& key) const {
    const auto it = tables_.find(table);
    if (it == tables_.end() || !it->second.count(key))
        throw ModelError(origin_ + ": missing key '" + (table.empty() ? key : table + "." + key) + "'");
    return it->second.at(key);
}

double ConfigDocument::number(const std::string& table, const std::string& key) const {
    const auto& v = get(table, key);
    if (const double* d = std::get_if<double>(&v)) return *d;
    throw ModelError(origin_ + ": '" + key + "' must be a number");
}

double ConfigDocument::number_or(const std::string& table, const std::string& key, double fallback) const {
    return has(table, key) ? number(table, key) : fallback;
}

std::string ConfigDocument::string(const std::string& table, const std::string& key) const {
    const auto& v = get(table, key);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw ModelError(origin_ + ": '" + key + "' must be a string");
}

std::string ConfigDocument::string_or(const std::string& table, const std::string& key,
                                      const std::string& fallback) const {
    return has(table, key) ? string(table, key) : fallback;
}

std::vector<double> ConfigDocument::numbers(const std::string& table, const std::string& key) const {
    const auto& v = get(table, key);
    if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
    if (const double* d = std::get_if<double>(&v)) return {*d};
    throw ModelError(origin_ + ": '" + key + "' must be an array of numbers");
}

std::vector<std::vector<double>> ConfigDocument::pairs(const std::string& table, const std::string& key) const {
    const auto& v = get(table, key);
    if (const auto* a = std::get_if<std::vector<std::vector<double>>>(&v)) return *a;
    if (const auto* a = std::get_if<std::vector<double>>(&v)) {
        if (a->empty()) return {};
        return {*a};
    }
    throw ModelError(origin_ + ": '" + key + "' must be an array of pairs");
}

ModelSpec parse_model(const std::string& text, const std::string& origin) {
    const ConfigDocument doc = ConfigDocument::parse(text, origin);
    check_version(doc, kModelFormatVersion, origin);
    const double c = doc.number_or("", "c", 0.0);
    const double r = doc.number_or("", "r", 0.0);
    if (!(c >= 0.0) || !(r >= 0.0)) throw ModelError(origin + ": c and r must be nonnegative");

    const std::string mkind = doc.string("m", "kind");
    std::optional<SpeedMeasure> m;
    if (mkind == "canonical") {
        if (doc.has("m", "atoms")) throw ModelError(origin + ": canonical m takes no atoms");
        m = SpeedMeasure::canonical(doc.number("m", "alpha"));
    } else if (mkind == "density") {
        m = SpeedMeasure::from_expression(Expression::parse(doc.string("m", "density")), read_atoms(doc, "m"));
    } else {
        throw ModelError(origin + ": unknown [m] kind '" + mkind + "'");
    }

    const std::string jkind = doc.string_or("j", "kind", "zero");
    JumpMeasure j;
    if (jkind == "zero") {
        j = JumpMeasure::zero();
    } else if (jkind == "canonical") {
        j = JumpMeasure::canonical(doc.number("j", "beta"));
    } else if (jkind == "density") {
        j = JumpMeasure::from_expression(Expression::parse(doc.string("j", "density")), read_atoms(doc, "j"));
    } else if (jkind == "atoms") {
        j = JumpMeasure::atoms(read_atoms(doc, "j"));
    } else {
        throw ModelError(origin + ": unknown [j] kind '" + jkind + "'");
    }

    ModelSpec spec{doc.string_or("", "name", ""), BoundaryTriple{*m, j_c_to_J(j, c), r}, std::nullopt, fnv1a(text)};
    if (doc.has_table("regime")) {
        ScalingRegime reg;
        reg.kind = parse_regime_kind(doc.string("regime", "kind"));
        reg.alpha = doc.number("regime", "alpha");
        reg.K = {doc.number_or("regime", "k", 1.0), doc.number_or("regime", "p", 0.0)};
        reg.beta = doc.number_or("regime", "beta", 0.5);
        reg.L = {doc.number_or("regime", "l_k", 1.0), doc.number_or("regime", "l_p", 0.0)};
        if (!(reg.alpha > 0.0) || !(reg.K.k > 0.0) || !(reg.L.k > 0.0))
            throw ModelError(origin + ": regime alpha, k and l_k must be positive");
        spec.regime = reg;
    }
    return spec;
}

ModelSpec load_model(const std::filesystem::path& path) { return parse_model(read_file(path), path.string()); }

void ExperimentSpec::validate() const {
    if (lambdas.empty()) throw ModelError("experiment: empty lambda ladder");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0)) throw ModelError("experiment: lambdas must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw ModelError("experiment: lambda ladder must increase");
    }
    if (replicates < 100) throw ModelError("experiment: replicates must be >= 100");
    if (times.empty()) throw ModelError("experiment: need at least one observation time");
    for (double t : times)
        if (!(t > 0.0)) throw ModelError("experiment: observation times must be positive");
    if (eps.empty()) throw ModelError("experiment: empty eps ladder");
    for (double e : eps)
        if (!(e > 0.0)) throw ModelError("experiment: eps values must be positive");
}

ExperimentSpec parse_experiment(const std::string& text, const std::filesystem::path& base_dir,
                                const std::string& origin) {
    const ConfigDocument doc = ConfigDocument::parse(text, origin);
    check_version(doc, kExperimentFormatVersion, origin);
    ExperimentSpec spec;
    const std::filesystem::path model = doc.string("", "model");
    spec.model = model.is_absolute() ? model : base_dir / model;
    if (doc.has("", "regime")) spec.regime = parse_regime_kind(doc.string("", "regime"));
    spec.lambdas = doc.numbers("", "lambdas");
    if (doc.has("", "times")) spec.times = doc.numbers("", "times");
    spec.replicates = static_cast<std::size_t>(doc.number_or("", "replicates", 1000.0));
    if (doc.has("", "eps")) spec.eps = doc.numbers("", "eps");
    spec.seed = static_cast<std::uint64_t>(doc.number_or("", "seed", 1.0));
    const std::filesystem::path out = doc.string_or("", "output", "out");
    spec.output = out.is_absolute() ? out : base_dir / out;
    spec.j1_pairs = static_cast<std::size_t>(doc.number_or("", "j1_pairs", 10.0));
    spec.level = doc.number_or("", "level", 0.01);
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    return parse_experiment(read_file(path), path.parent_path(), path.string());
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace itosynth
