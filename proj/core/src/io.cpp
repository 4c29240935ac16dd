#include "itosynth/io.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "itosynth/errors.hpp"
#include "itosynth/version.hpp"

namespace itosynth {

std::string format_double(double x) {
    char buf[40];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string hex64(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

void write_knots_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<double>& xs) {
    os << "t,x\n";
    for (std::size_t i = 0; i < ts.size() && i < xs.size(); ++i)
        os << format_double(ts[i]) << ',' << format_double(xs[i]) << '\n';
}

void write_path_csv(std::ostream& os, const Excursion& e) { write_knots_csv(os, e.times, e.values); }

void write_eta_csv(std::ostream& os, const Staircase& eta) {
    os << "s,eta\n";
    os << "0," << format_double(eta(0.0)) << '\n';
    for (double s : eta.jump_times()) {
        if (s > eta.horizon()) break;
        os << format_double(s) << ',' << format_double(eta.left(s)) << '\n';
        os << format_double(s) << ',' << format_double(eta(s)) << '\n';
    }
    os << format_double(eta.horizon()) << ',' << format_double(eta(eta.horizon())) << '\n';
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "lambda,stat,pvalue,n\n";
    for (const auto& r : rows)
        os << format_double(r.lambda) << ',' << format_double(r.stat) << ',' << format_double(r.pvalue) << ','
           << r.n << '\n';
}

std::string manifest_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["library"] = "itosynth";
    j["version"] = kVersion;
    j["command"] = m.command;
    j["seed"] = m.seed;
    j["model_path"] = m.model_path;
    j["model_hash"] = hex64(m.model_hash);
    for (const auto& [k, v] : m.numbers) j["parameters"][k] = v;
    for (const auto& [k, v] : m.strings) j["parameters"][k] = v;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
    std::ofstream out(path);
    if (!out) throw ModelError("cannot write " + path.string());
    out << manifest_json(m);
}

}  // namespace itosynth
