#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "itosynth/boundary.hpp"
#include "itosynth/io.hpp"
#include "itosynth/model_file.hpp"
#include "itosynth/rng.hpp"
#include "itosynth/statistics.hpp"
#include "itosynth/synthesis.hpp"

namespace itosynth {

/// X_lambda(t) samples from the native triple, X(u(lambda) t) / lambda, with
/// every eps of the ladder given in scaled units (native truncation eps * lambda).
/// Result[k][i] is replicate i at eps_ladder[k].
std::vector<std::vector<double>> sample_rescaled(const BoundaryTriple& b, const ScalingRegime& reg, double lambda,
                                                 double t, std::span<const double> eps_ladder, std::size_t N,
                                                 RngStream rng, const SynthesisOptions& options = {});

/// X(t) samples of a triple at a single eps.
std::vector<double> sample_marginal(const BoundaryTriple& b, double t, double eps, std::size_t N, RngStream rng,
                                    const SynthesisOptions& options = {});

struct IdentityReport {
    double lambda = 0.0;
    double t = 0.0;
    KsResult ks;
    std::size_t n = 0;
};

/// Two-sample KS between X(u t) / lambda under b and X_lambda(t) under the
/// scaled triple, both truncated at eps in scaled units.
IdentityReport scaling_identity_check(const BoundaryTriple& b, const ScalingRegime& reg, double lambda, double t,
                                      std::size_t N, RngStream rng, double eps, const SynthesisOptions& options = {});

struct LadderRow {
    double lambda = 0.0;
    KsResult ks;
    std::size_t n = 0;
    /// Mean J1 distance to independent limit paths (divergent regime only).
    double j1_mean = 0.0;
};

struct VerifyReport {
    RegimeKind regime = RegimeKind::convergent;
    std::string reference;
    double t = 0.0;
    double level = 0.0;  // Bonferroni-corrected
    std::vector<LadderRow> rows;
    bool trend = false;
    bool accepted = false;
    bool pass = false;

    std::vector<ResultRow> results() const;
};

/// KS of X_lambda(t*) against the limit law at t* = spec.times.front() on the
/// lambda ladder. The reference is |N(0, t*)| when the limit speed measure has
/// alpha = 1/2, and a limit-triple sample otherwise. With two or more eps the
/// cdf is extrapolated from the two finest. Passes when the KS distance
/// decreases from the first to the last lambda and the last p-value exceeds
/// spec.level / #lambdas.
VerifyReport verify_convergent(const BoundaryTriple& b, const ScalingRegime& reg, const ExperimentSpec& spec,
                               const SynthesisOptions& options = {});

/// Two-sample KS of X_lambda(t*) against one limit-triple sample at the
/// finest eps, with J1 distances between spec.j1_pairs rescaled and limit
/// paths on [0, t*]. Passes when the KS distance decreases from the first to
/// the last lambda. Throws RegimeError unless beta < min(1, 1 / alpha).
VerifyReport verify_divergent(const BoundaryTriple& b, const ScalingRegime& reg, const ExperimentSpec& spec,
                              const SynthesisOptions& options = {});

/// Dispatches on reg.kind.
VerifyReport verify(const BoundaryTriple& b, const ScalingRegime& reg, const ExperimentSpec& spec,
                    const SynthesisOptions& options = {});

}  // namespace itosynth
