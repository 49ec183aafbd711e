#include "ineq/json_io.hpp"

#include <fstream>
#include <sstream>

namespace ineq {

PotentialSpec measure_from_json(const json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "power_law") return PotentialSpec::power_law(j.at("p").get<double>());
    if (fam == "gaussian") return PotentialSpec::gaussian();
    if (fam == "double_exp") return PotentialSpec::double_exp();
    if (fam == "uniform")
        return PotentialSpec::uniform(j.at("a").get<double>(),
                                      j.at("b").get<double>());
    if (fam == "custom") {
        std::vector<PotentialSpec::Term> terms;
        for (const auto& t : j.at("terms"))
            terms.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
        double lo = -kInf, hi = kInf, smooth = 0.0;
        if (j.contains("support")) {
            const auto& s = j.at("support");
            if (!s.at(0).is_null()) lo = s.at(0).get<double>();
            if (!s.at(1).is_null()) hi = s.at(1).get<double>();
        }
        if (j.contains("smooth")) smooth = j.at("smooth").get<double>();
        return PotentialSpec::custom(terms, lo, hi, smooth);
    }
    throw std::invalid_argument(
        "unknown measure family '" + fam +
        "' (supported: power_law, gaussian, double_exp, uniform, custom)");
}

YoungFn phi_from_json(const json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "power") return YoungFn::power(j.at("q").get<double>());
    if (fam == "scaled_power")
        return YoungFn::scaled_power(j.at("q").get<double>(),
                                     j.at("c").get<double>());
    if (fam == "plus_square")
        return YoungFn::plus_square(phi_from_json(j.at("base")));
    throw std::invalid_argument(
        "unknown young family '" + fam +
        "' (supported: power, scaled_power, plus_square)");
}

json load_spec(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return json::parse(arg);
    std::ifstream in(arg);
    if (!in)
        throw std::runtime_error("cannot open spec file: " + arg);
    json j;
    in >> j;
    return j;
}

json encode_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json report_json(const CriterionReport& rep) {
    static const char* names[] = {"hardy", "poincare", "log_sobolev", "mlsi_q",
                                  "mlsi_phi"};
    return json{{"kind", names[static_cast<int>(rep.kind)]},
                {"b_plus", encode_real(rep.b_plus)},
                {"b_minus", encode_real(rep.b_minus)},
                {"lower_bound", encode_real(rep.lower_bound)},
                {"upper_bound", encode_real(rep.upper_bound)},
                {"argmax_location", encode_real(rep.argmax_location)},
                {"finite", rep.finite},
                {"grid_evidence_only", rep.grid_evidence_only}};
}

json classification_json(const Classification& c) {
    const char* verdict = c.verdict == Verdict::yes           ? "yes"
                          : c.verdict == Verdict::no          ? "no"
                                                              : "inapplicable";
    return json{{"verdict", verdict},
                {"limsup_estimate", encode_real(c.limsup_estimate)},
                {"slope", encode_real(c.slope)},
                {"hypothesis_checks",
                 json{{"drift", c.hyp_drift_ok},
                      {"curvature", c.hyp_curvature_ok},
                      {"failure", c.hypothesis_failure}}}};
}

} // namespace ineq
