#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ineq/concentration.hpp"
#include "ineq/json_io.hpp"
#include "ineq/oracle.hpp"

using namespace ineq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInapplicable = 2;

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << report.dump(2) << "\n";
    }
}

json wrap(const std::string& command, const json& inputs, const json& results) {
    return json{{"schema_version", 1},
                {"command", command},
                {"inputs", inputs},
                {"results", results}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"criterion constants for functional inequalities on R"};
    app.require_subcommand(1);

    std::string measure_arg, nu_arg, phi_arg, out_path, curve_path, mode;
    std::string which = "poincare", kappa_source = "theorem";
    double q = 3.0, p = 2.0, x = 5.0, a = 1.0;
    int grid_size = 2000, n_coords = 20;
    std::int64_t samples = 100000;
    std::uint64_t seed = 42;

    const auto add_measure = [&](CLI::App* cmd) {
        cmd->add_option("--measure", measure_arg, "measure spec (inline JSON or file)")
            ->required();
        cmd->add_option("--nu", nu_arg, "energy measure spec (defaults to --measure)");
        cmd->add_option("--json", out_path, "write the JSON report here");
    };

    auto* hardy_cmd = app.add_subcommand("hardy", "Muckenhoupt criterion");
    add_measure(hardy_cmd);
    hardy_cmd->add_option("--p", p, "Hardy exponent (> 1)");

    auto* poincare_cmd = app.add_subcommand("poincare", "spectral gap criterion");
    add_measure(poincare_cmd);

    auto* ls_cmd = app.add_subcommand("logsobolev", "log-Sobolev criterion");
    add_measure(ls_cmd);

    auto* mlsi_cmd = app.add_subcommand("mlsi", "modified log-Sobolev machinery");
    add_measure(mlsi_cmd);
    mlsi_cmd->add_option("--phi", phi_arg, "Young function spec");
    mlsi_cmd->add_option("--q", q, "power exponent (>= 2)");
    mlsi_cmd->add_option("--mode", mode, "bounds | classify | gauge-curve")
        ->default_val("bounds");
    mlsi_cmd->add_option("--curve", curve_path, "CSV output for gauge-curve");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force variational oracles");
    add_measure(oracle_cmd);
    oracle_cmd->add_option("--which", which, "poincare | hardy | mlsi | beta");
    oracle_cmd->add_option("--p", p, "Hardy exponent");
    oracle_cmd->add_option("--q", q, "power exponent for mlsi/beta");
    oracle_cmd->add_option("--x", x, "right endpoint for beta");
    oracle_cmd->add_option("--a", a, "mass constraint for beta");
    oracle_cmd->add_option("--grid-size", grid_size, "node count");
    oracle_cmd->add_option("--samples", samples, "sample count");
    oracle_cmd->add_option("--seed", seed, "RNG seed");

    auto* conc_cmd = app.add_subcommand("concentration", "Herbst bounds and simulation");
    add_measure(conc_cmd);
    conc_cmd->add_option("--mode", mode, "bound | simulate")->default_val("bound");
    conc_cmd->add_option("--q", q, "H_q exponent");
    conc_cmd->add_option("--kappa-source", kappa_source, "theorem | manual:VALUE");
    conc_cmd->add_option("--n", n_coords, "number of coordinates");
    conc_cmd->add_option("--samples", samples, "Monte Carlo samples");
    conc_cmd->add_option("--seed", seed, "RNG seed");
    conc_cmd->add_option("--out", curve_path, "CSV curve output");

    auto* bench_cmd = app.add_subcommand("bench", "benchmark matrix");
    std::string out_dir = "bench-out";
    bench_cmd->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (hardy_cmd->parsed() || poincare_cmd->parsed() || ls_cmd->parsed()) {
            const json mj = load_spec(measure_arg);
            const PotentialSpec mu = measure_from_json(mj);
            const PotentialSpec nu =
                nu_arg.empty() ? mu : measure_from_json(load_spec(nu_arg));
            CriterionReport rep;
            std::string cmd;
            if (hardy_cmd->parsed()) {
                rep = muckenhoupt(mu, nu, p);
                cmd = "hardy";
            } else if (poincare_cmd->parsed()) {
                rep = poincare_bounds(mu, nu);
                cmd = "poincare";
            } else {
                rep = bobkov_gotze(mu, nu);
                cmd = "logsobolev";
            }
            emit(wrap(cmd, json{{"measure", mj}}, report_json(rep)), out_path);
            return kExitOk;
        }

        if (mlsi_cmd->parsed()) {
            const json mj = load_spec(measure_arg);
            const PotentialSpec mu = measure_from_json(mj);
            const PotentialSpec nu =
                nu_arg.empty() ? mu : measure_from_json(load_spec(nu_arg));
            const bool with_phi = !phi_arg.empty();
            json inputs{{"measure", mj}, {"mode", mode}};
            if (with_phi) inputs["phi"] = load_spec(phi_arg);
            else inputs["q"] = q;

            if (mode == "classify") {
                const Classification c =
                    with_phi ? classify_phi(mu, phi_from_json(load_spec(phi_arg)),
                                            ClassifyMode::critphi_sufficient)
                             : classify_q(mu, q);
                emit(wrap("mlsi-classify", inputs, classification_json(c)),
                     out_path);
                return c.verdict == Verdict::inapplicable ? kExitInapplicable
                                                          : kExitOk;
            }
            if (mode == "gauge-curve") {
                const YoungFn phi = with_phi
                                        ? phi_from_json(load_spec(phi_arg))
                                        : YoungFn::plus_square(YoungFn::power(q));
                const double m = mu.median();
                std::ofstream csv(curve_path.empty() ? "gauge-curve.csv"
                                                     : curve_path);
                csv << "x,integrand,gauge,bound\n";
                const double K = mu.quantile(0.95) - m;
                for (int k = 1; k <= 24; ++k) {
                    const double xk = mu.quantile(1.0 - std::pow(2.0, -k));
                    if (!(xk > m)) continue;
                    const double t = mu.tail(xk, Side::right);
                    const double g = orlicz_gauge(
                        phi, [&](double u) { return nu.density(u); }, m, xk);
                    double bound = std::nan("");
                    try {
                        bound = gauge_upper_bound(phi, mu, xk, K);
                    } catch (const std::exception&) {
                    }
                    csv << xk << "," << t * std::log(1.0 / t) * g << "," << g
                        << "," << bound << "\n";
                }
                emit(wrap("mlsi-gauge-curve", inputs,
                          json{{"curve", curve_path}}),
                     out_path);
                return kExitOk;
            }
            // bounds
            json results;
            if (with_phi) {
                const auto res = c_phi(phi_from_json(load_spec(phi_arg)), mu, nu);
                results = report_json(res.report);
                results["kappa_upper"] = encode_real(res.kappa_upper);
                results["kappa_lower"] = encode_real(res.kappa_lower);
            } else {
                const auto res = b_q(mu, nu, q);
                results = report_json(res.report);
                results["kappa_upper"] = encode_real(res.kappa_upper);
                results["kappa_lower"] = encode_real(res.kappa_lower);
                results["has_certificate"] = res.has_certificate;
                if (res.has_certificate)
                    results["epsilon"] = encode_real(res.certificate.epsilon);
            }
            emit(wrap("mlsi-bounds", inputs, results), out_path);
            return kExitOk;
        }

        if (oracle_cmd->parsed()) {
            const json mj = load_spec(measure_arg);
            const PotentialSpec mu = measure_from_json(mj);
            const PotentialSpec nu =
                nu_arg.empty() ? mu : measure_from_json(load_spec(nu_arg));
            json results;
            if (which == "poincare") {
                const auto est = best_poincare_ratio(
                    mu, nu, mu.quantile_nodes(grid_size));
                results = json{{"value", encode_real(est.value)},
                               {"grid_size", est.grid_size}};
            } else if (which == "hardy") {
                const auto est = best_hardy_ratio(mu, nu, p);
                results = json{{"value", encode_real(est.value)}};
            } else if (which == "mlsi") {
                ModifiedH h{YoungFn::power(q)};
                const auto est = best_mlsi_ratio(
                    mu, nu, h, MlsiFamily::random_smooth,
                    static_cast<int>(samples), seed);
                results = json{{"value", encode_real(est.value)}};
            } else if (which == "beta") {
                const double v = beta_oracle(
                    YoungFn::power(q), [&](double u) { return nu.density(u); },
                    mu.median(), x, a, grid_size);
                results = json{{"value", encode_real(v)}};
            } else {
                throw std::invalid_argument("unknown oracle '" + which + "'");
            }
            emit(wrap("oracle-" + which, json{{"measure", mj}}, results),
                 out_path);
            return kExitOk;
        }

        if (conc_cmd->parsed()) {
            const json mj = load_spec(measure_arg);
            const PotentialSpec mu = measure_from_json(mj);
            ModifiedH h{YoungFn::power(q)};
            double kappa;
            if (kappa_source.rfind("manual:", 0) == 0) {
                kappa = std::stod(kappa_source.substr(7));
            } else {
                const auto res = b_q(mu, mu, q);
                kappa = res.kappa_upper;
                if (!std::isfinite(kappa))
                    throw std::runtime_error(
                        "no finite certified kappa for this measure");
            }
            const double w = 1.0 / std::sqrt(static_cast<double>(n_coords));
            std::vector<double> weights(n_coords, w);
            double budget = 0.0;
            for (double wi : weights) budget += h(wi);
            std::vector<double> rg;
            for (int i = 1; i <= 20; ++i) rg.push_back(0.25 * i);
            json results{{"kappa", encode_real(kappa)},
                         {"budget_a", budget}};
            if (mode == "simulate") {
                const auto curve = monte_carlo_tail(mu, n_coords, weights,
                                                    budget, h, kappa, rg,
                                                    samples, seed);
                if (!curve_path.empty()) {
                    std::ofstream csv(curve_path);
                    csv << "r,bound,empirical,ci_low,ci_high\n";
                    for (std::size_t i = 0; i < curve.r.size(); ++i)
                        csv << curve.r[i] << "," << curve.bound[i] << ","
                            << curve.empirical[i] << "," << curve.ci_low[i]
                            << "," << curve.ci_high[i] << "\n";
                }
                results["pass"] = curve.pass;
            } else {
                const auto prof = make_profile(kappa, budget, h);
                json rows = json::array();
                for (double r : rg)
                    rows.push_back(json{{"r", r},
                                        {"bound", herbst_tail(prof, r)}});
                results["curve"] = rows;
                results["enlargement_K"] = encode_real(prof.enlargement_K);
            }
            emit(wrap("concentration", json{{"measure", mj}}, results),
                 out_path);
            return kExitOk;
        }

        if (bench_cmd->parsed()) {
            const struct { const char* name; PotentialSpec mu; } measures[] = {
                {"gaussian", PotentialSpec::gaussian()},
                {"double_exp", PotentialSpec::double_exp()},
                {"power_law_1.5", PotentialSpec::power_law(1.5)},
                {"power_law_1.2", PotentialSpec::power_law(1.2)},
                {"power_law_3", PotentialSpec::power_law(3.0)},
            };
            std::ofstream csv(out_dir + "-summary.csv");
            csv << "measure,inequality,finite,lower,upper\n";
            for (const auto& row : measures) {
                const auto poi = poincare_bounds(row.mu, row.mu);
                csv << row.name << ",poincare," << poi.finite << ","
                    << poi.lower_bound << "," << poi.upper_bound << "\n";
                const auto ls = bobkov_gotze(row.mu, row.mu);
                csv << row.name << ",log_sobolev," << ls.finite << ","
                    << ls.lower_bound << "," << ls.upper_bound << "\n";
                for (double qq : {2.0, 3.0}) {
                    const auto bq = b_q(row.mu, row.mu, qq);
                    csv << row.name << ",mlsi_h" << qq << ","
                        << bq.report.finite << "," << bq.kappa_lower << ","
                        << bq.kappa_upper << "\n";
                }
            }
            std::cout << "wrote " << out_dir << "-summary.csv\n";
            return kExitOk;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
