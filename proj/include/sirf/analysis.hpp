#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "sirf/equilibria.hpp"
#include "sirf/infection_rate.hpp"
#include "sirf/model.hpp"

namespace sirf {

struct AnalyzeOptions {
    int grid_points = 4096;     // crossing scan resolution
    double tol = 1e-12;         // bisection bracket width target
    double tie_tol = 1e-8;      // classification dead band
    int positivity_grid = 10001;
};

/// Everything the analyze pipeline establishes about one model.
struct Analysis {
    PositivityCheck positivity;
    Equilibrium disease_free;
    std::vector<Equilibrium> endemic; // sorted by R
    std::vector<double> possible_tangencies;
    Certificates certificates;
    AnalyzeOptions options;
};

/// Run the full pipeline: positivity sampling, crossing scan with
/// classification, disease-free classification, certificates.  When the
/// positivity check fails, the uniqueness/global certificates are demoted
/// to inconclusive/unknown since every rule assumes f > 0.
Analysis analyze(const Model& m, const AnalyzeOptions& opt = {});

/// Equilibria in report order: disease-free first (id 0), then the endemic
/// list sorted by R (ids 1..).  Basin outcome ids index this list.
std::vector<Equilibrium> all_equilibria(const Analysis& a);

/// Serialize the analysis next to its model echo.  Deterministic: the same
/// model and options produce byte-identical JSON.  The layout is published
/// in schema/analysis_report.schema.json.
nlohmann::ordered_json analysis_report(const Analysis& a, const Model& m);

} // namespace sirf
