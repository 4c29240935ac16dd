#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "itosynth/boundary.hpp"

namespace itosynth {

/// Values of the structured-text subset used by model and experiment files:
/// strings, numbers, booleans, arrays of numbers and arrays of number pairs.
using ConfigValue = std::variant<std::string, double, bool, std::vector<double>, std::vector<std::vector<double>>>;

/// Parsed `key = value` lines grouped by `[table]` headers ("" is the root).
class ConfigDocument {
public:
    static ConfigDocument parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& table, const std::string& key) const;
    bool has_table(const std::string& table) const { return tables_.count(table) > 0; }
    const ConfigValue& get(const std::string& table, const std::string& key) const;

    double number(const std::string& table, const std::string& key) const;
    double number_or(const std::string& table, const std::string& key, double fallback) const;
    std::string string(const std::string& table, const std::string& key) const;
    std::string string_or(const std::string& table, const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& table, const std::string& key) const;
    std::vector<std::vector<double>> pairs(const std::string& table, const std::string& key) const;

private:
    std::string origin_;
    std::map<std::string, std::map<std::string, ConfigValue>> tables_;
};

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kExperimentFormatVersion = 1;

struct ModelSpec {
    std::string name;
    BoundaryTriple triple;
    std::optional<ScalingRegime> regime;
    /// FNV-1a of the file text.
    std::uint64_t hash = 0;
};

/// Model file, version 1:
///
///   version = 1
///   name = "eq12"                  optional
///   c = 0.0                        c >= 0
///   r = 0.0                        r >= 0
///   [m]
///   kind = "canonical" | "density"
///   alpha = 0.5                    canonical
///   density = "(2*x+1)/x"          density, Expression grammar
///   atoms = [[1.0, 0.5]]           optional (location, mass) pairs
///   [j]
///   kind = "zero" | "canonical" | "density" | "atoms"
///   beta = 0.5                     canonical
///   density = "0.5*x^(-1.5)"       density
///   atoms = [[2.0, 0.5]]           atoms, optional for density
///   [regime]                       optional
///   kind = "convergent" | "divergent"
///   alpha = 0.5
///   k = 1.0, p = 0.0               K(x) = k (log(e + x))^p
///   beta = 0.5                     divergent
///   l_k = 1.0, l_p = 0.0           L(x) = l_k (log(e + x))^l_p
ModelSpec parse_model(const std::string& text, const std::string& origin = "<string>");
ModelSpec load_model(const std::filesystem::path& path);

/// Experiment file, version 1:
///
///   version = 1
///   model = "eq12.toml"            relative to the experiment file
///   regime = "divergent"           optional, defaults to the model's regime
///   lambdas = [4, 16, 64]
///   times = [1.0]                  the first entry is the observation time t*
///   replicates = 2000              >= 100
///   eps = [0.1, 0.05]
///   seed = 7
///   output = "out"
///   j1_pairs = 10                  optional
struct ExperimentSpec {
    std::filesystem::path model;
    std::optional<RegimeKind> regime;
    std::vector<double> lambdas;
    std::vector<double> times{1.0};
    std::size_t replicates = 1000;
    std::vector<double> eps{0.05};
    std::uint64_t seed = 1;
    std::filesystem::path output = "out";
    std::size_t j1_pairs = 10;
    double level = 0.01;

    void validate() const;
};

ExperimentSpec parse_experiment(const std::string& text, const std::filesystem::path& base_dir,
                                const std::string& origin = "<string>");
ExperimentSpec load_experiment(const std::filesystem::path& path);

std::uint64_t fnv1a(std::string_view text);

}  // namespace itosynth
