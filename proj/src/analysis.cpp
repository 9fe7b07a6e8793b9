#include "sirf/analysis.hpp"

#include <string>

namespace sirf {

namespace {

using Json = nlohmann::ordered_json;

Json equilibrium_json(const Equilibrium& e, int id) {
    Json j;
    j["id"] = id;
    j["kind"] = e.kind == Equilibrium::Kind::DiseaseFree ? "disease-free" : "endemic";
    j["I"] = e.I;
    j["R"] = e.R;
    j["classification"] = to_string(e.classification);
    j["f_value"] = e.f_value;
    j["f_deriv"] = e.f_deriv;
    j["g_deriv"] = e.g_deriv;
    j["stability_margin"] = e.stability_margin;
    j["residual"] = e.residual;
    Json eig = Json::array();
    for (const auto& ev : e.eigenvalues) {
        eig.push_back(Json{{"re", ev.real()}, {"im", ev.imag()}});
    }
    j["eigenvalues"] = eig;
    return j;
}

} // namespace

Analysis analyze(const Model& m, const AnalyzeOptions& opt) {
    Analysis a;
    a.options = opt;
    a.positivity = check_positive(m.f(), m.k(), opt.positivity_grid);

    FinderOptions fopt;
    fopt.grid_points = opt.grid_points;
    fopt.tol = opt.tol;
    fopt.tie_tol = opt.tie_tol;
    FinderResult found = find_endemic_equilibria(m, fopt);
    a.endemic = std::move(found.equilibria);
    a.possible_tangencies = std::move(found.possible_tangencies);

    a.disease_free = disease_free_equilibrium(m, opt.tie_tol);
    a.certificates = global_certificates(m, a.endemic, opt.grid_points, opt.tie_tol);

    if (!a.positivity.positive) {
        // every certificate rule assumes f > 0 on [0, 1]
        a.certificates.uniqueness = UniquenessVerdict::Inconclusive;
        a.certificates.uniqueness_reason =
            "f is not strictly positive on the sampled grid; hypotheses fail";
        a.certificates.uniqueness_heuristic = true;
        a.certificates.global = GlobalVerdict::Unknown;
        a.certificates.global_rule =
            "f is not strictly positive on the sampled grid; hypotheses fail";
        a.certificates.global_heuristic = true;
    }
    return a;
}

std::vector<Equilibrium> all_equilibria(const Analysis& a) {
    std::vector<Equilibrium> out;
    out.reserve(a.endemic.size() + 1);
    out.push_back(a.disease_free);
    out.insert(out.end(), a.endemic.begin(), a.endemic.end());
    return out;
}

Json analysis_report(const Analysis& a, const Model& m) {
    Json r;
    r["schema"] = "sirf-analysis-report/1";

    r["model"] = Json{{"k", m.k()}, {"f", m.f().spec()}};

    r["settings"] = Json{{"grid_points", a.options.grid_points},
                         {"tol", a.options.tol},
                         {"tie_tol", a.options.tie_tol},
                         {"positivity_grid", a.options.positivity_grid},
                         {"pole", m.pole()}};

    r["positivity"] = Json{{"positive", a.positivity.positive},
                           {"min_value", a.positivity.min_value},
                           {"min_at_r", a.positivity.min_at_r},
                           {"grid_points", a.positivity.grid_points},
                           {"heuristic", true}};

    Json eq;
    eq["disease_free"] = equilibrium_json(a.disease_free, 0);
    Json endemic = Json::array();
    for (std::size_t i = 0; i < a.endemic.size(); ++i) {
        endemic.push_back(equilibrium_json(a.endemic[i], static_cast<int>(i) + 1));
    }
    eq["endemic"] = endemic;
    eq["endemic_count"] = a.endemic.size();
    Json tang = Json::array();
    for (double t : a.possible_tangencies) tang.push_back(t);
    eq["possible_tangencies"] = tang;
    r["equilibria"] = eq;

    const Certificates& c = a.certificates;
    Json existence{{"exists", c.existence.exists},
                   {"witness_r", nullptr},
                   {"rule", c.existence.rule},
                   {"heuristic", c.existence.heuristic}};
    if (c.existence.witness_r) existence["witness_r"] = *c.existence.witness_r;
    r["certificates"] =
        Json{{"existence", existence},
             {"uniqueness", Json{{"verdict", to_string(c.uniqueness)},
                                 {"reason", c.uniqueness_reason},
                                 {"heuristic", c.uniqueness_heuristic}}},
             {"global", Json{{"verdict", to_string(c.global)},
                             {"rule", c.global_rule},
                             {"heuristic", c.global_heuristic}}},
             {"hypotheses",
              "all rules assume f > 0 and continuously differentiable; "
              "positivity is sampled on [0,1] only and smoothness is not "
              "machine-checked"}};

    Json violations = Json::array();
    for (std::size_t idx : saddle_successor_violations(a.endemic)) {
        violations.push_back(idx);
    }
    r["consistency"] = Json{{"saddle_successor_violations", violations}};

    r["notes"] = Json::array(
        {"positivity and monotonicity checks sample a finite grid; they are "
         "heuristics, not proofs",
         "crossings closer together than the scan grid spacing may be missed",
         "possible_tangencies lists grid points where |f - g| < 1e-8 without "
         "a sign change; the sign-based finder cannot decide these"});

    return r;
}

} // namespace sirf
