#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "itosynth/excursion.hpp"
#include "itosynth/synthesis.hpp"

namespace itosynth {

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// `t,x` rows of an excursion or a knot list.
void write_path_csv(std::ostream& os, const Excursion& e);
void write_knots_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<double>& xs);
/// `s,eta` rows: both limits at every jump and the value at the horizon.
void write_eta_csv(std::ostream& os, const Staircase& eta);

struct ResultRow {
    double lambda = 0.0;
    double stat = 0.0;
    double pvalue = 0.0;
    std::size_t n = 0;
};
/// `lambda,stat,pvalue,n`
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::string model_path;
    std::uint64_t model_hash = 0;
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> strings;
};

/// JSON with the library version, the command, the seed and the model hash.
std::string manifest_json(const Manifest& m);
void write_manifest(const std::filesystem::path& path, const Manifest& m);

std::string hex64(std::uint64_t x);

}  // namespace itosynth
