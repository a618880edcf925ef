#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "builtin_examples.hpp"
#include "classeq/config.hpp"
#include "classeq/equilibrium.hpp"
#include "classeq/oracle.hpp"
#include "classeq/report.hpp"

namespace {

using namespace classeq;

struct CommonOpts {
    std::string config_path;
    std::string json_path;
    std::string csv_path;
    bool oracle = false;
    int grid = 401;
    std::uint64_t seed = 42;
};

Classifier parse_classifier(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw config_error("classifier must be \"delta1,delta0\" (got \"" + text + "\")");
    }
    try {
        const double d1 = std::stod(text.substr(0, comma));
        const double d0 = std::stod(text.substr(comma + 1));
        if (d1 < 0.0 || d1 > 1.0 || d0 < 0.0 || d0 > 1.0) {
            throw config_error("classifier probabilities must lie in [0,1] (got \"" + text +
                               "\")");
        }
        return {d1, d0};
    } catch (const std::invalid_argument&) {
        throw config_error("classifier must be \"delta1,delta0\" (got \"" + text + "\")");
    }
}

void emit(const RunReport& report, const CommonOpts& opts) {
    std::cout << report.render_text();
    if (!opts.json_path.empty()) {
        std::ofstream out(opts.json_path);
        if (!out) throw config_error("cannot write json file: " + opts.json_path);
        out << report.json().dump(2) << "\n";
    }
}

void add_confusion(RunReport& report, const std::string& sec, const ConfusionFractions& cf) {
    report.add_value(sec, "tp", cf.tp, "pi*(phi*d1 + (1-phi)*(1-d0))");
    report.add_value(sec, "fn", cf.fn, "pi*(phi*(1-d1) + (1-phi)*d0)");
    report.add_value(sec, "fp", cf.fp, "(1-pi)*(phi*(1-d0) + (1-phi)*d1)");
    report.add_value(sec, "tn", cf.tn, "(1-pi)*(phi*d0 + (1-phi)*(1-d1))");
}

int cmd_designer(const CommonOpts& opts, double reward) {
    const auto cfg = load_scenario_config(opts.config_path);
    const auto s = build_scenario(cfg);
    RunReport report("designer");
    report.set_inputs(to_json(cfg));
    const auto br = designer_best_response(reward, s);
    const std::string sec = "best response";
    report.add_value(sec, "reward", reward, "input");
    report.add_text(sec, "payoff alignment", to_string(accuracy_alignment(s.designer)));
    if (br.everything_optimal) {
        report.add_text(sec, "argmax", "all classifiers are payoff-equivalent");
    }
    const auto c = br.classifiers.front();
    report.add_value(sec, "delta1", c.delta1, "argmax of the expected payoff");
    report.add_value(sec, "delta0", c.delta0, "argmax of the expected payoff");
    report.add_value(sec, "payoff", br.payoff, "expected cell payoff");
    if (br.classifiers.size() > 1 && !br.everything_optimal) {
        std::vector<std::vector<nlohmann::json>> rows;
        for (const auto& alt : br.classifiers) {
            rows.push_back({RunReport::cell(alt.delta1, "co-optimal classifier"),
                            RunReport::cell(alt.delta0, "co-optimal classifier")});
        }
        report.add_table(sec, {"delta1", "delta0"}, rows);
    }
    const double pi = prevalence(c, s.accuracy, reward, *s.distribution);
    report.add_value(sec, "prevalence", pi, "F(r*rho)");
    add_confusion(report, "confusion fractions", confusion_fractions(pi, c, s.accuracy));
    if (opts.oracle) {
        const auto grid = grid_designer_argmax(reward, s, opts.grid);
        const std::string osec = "lattice cross-check";
        report.add_value(osec, "lattice delta1", grid.classifier.delta1, "exhaustive scan");
        report.add_value(osec, "lattice delta0", grid.classifier.delta0, "exhaustive scan");
        report.add_value(osec, "lattice payoff", grid.payoff, "exhaustive scan");
        report.add_value(osec, "payoff gap vs lattice", br.payoff - grid.payoff,
                         "analytic - lattice");
    }
    emit(report, opts);
    return 0;
}

int cmd_rewards(const CommonOpts& opts, const std::optional<std::string>& classifier_text) {
    const auto cfg = load_scenario_config(opts.config_path);
    const auto s = build_scenario(cfg);
    RunReport report("rewards");
    report.set_inputs(to_json(cfg));
    const auto roots = solve_k_roots(s);
    const auto mc = median_optimal_k(s);
    const std::string sec = "threshold roots";
    report.add_value(sec, "k0", roots.k0, "k = t - F(k)/f(k)");
    report.add_value(sec, "k1", roots.k1, "k = t + (1-F(k))/f(k)");
    report.add_value(sec, "residual k0", roots.residual_k0, "implicit equation residual");
    report.add_value(sec, "residual k1", roots.residual_k1, "implicit equation residual");
    report.add_value(sec, "cutpoint", mc.cutpoint_value,
                     "k0*F(k0) + k1*(1-F(k1)) + t*(F(k1)-F(k0))");
    report.add_value(sec, "median cost", mc.median_cost, "distribution median");
    report.add_text(sec, "median branch", mc.branch == KBranch::K1 ? "k1" : "k0");
    report.add_value(sec, "k_mu", mc.k_star, "median's preferred threshold");
    report.add_value(sec, "democratic compliance", s.distribution->cdf(mc.k_star), "F(k_mu)");
    if (classifier_text) {
        const auto c = parse_classifier(*classifier_text);
        const std::string csec = "classifier";
        report.add_value(csec, "rho", responsiveness(c, s.accuracy),
                         "(d1 + d0 - 1)*(2*phi - 1)");
        report.add_text(csec, "kind", to_string(classify_responsiveness(c, s.accuracy)));
        const auto cr = condorcet_reward(c, s);
        if (cr.null_indifference) {
            report.add_text(csec, "majority reward",
                            "all rewards tie for a null classifier (reported as 0)");
        } else {
            report.add_value(csec, "majority reward", cr.reward, "k_mu / rho");
            report.add_value(csec, "welfare-optimal reward", sw_optimal_reward(c, s), "t / rho");
            report.add_value(csec, "compliance at the majority reward",
                             prevalence(c, s.accuracy, cr.reward, *s.distribution), "F(k_mu)");
        }
    }
    emit(report, opts);
    return 0;
}

void add_equilibria_table(RunReport& report, const Scenario& s,
                          const std::vector<EquilibriumOutcome>& outcomes, bool with_oracle,
                          int grid) {
    const std::string sec = "equilibria";
    std::vector<std::vector<nlohmann::json>> rows;
    for (const auto& eq : outcomes) {
        rows.push_back({RunReport::cell(eq.classifier.delta1, "equilibrium classifier"),
                        RunReport::cell(eq.classifier.delta0, "equilibrium classifier"),
                        RunReport::cell(eq.reward, "k_mu / rho"),
                        RunReport::cell(eq.prevalence, "F(r*rho)"),
                        RunReport::cell(eq.social_welfare, "t*F(x) - E[g; g<=x]"),
                        RunReport::cell(eq.median_payoff, "median conditional payoff"),
                        RunReport::cell(eq.designer_payoff, "expected cell payoff"),
                        to_string(eq.kind)});
    }
    report.add_table(sec, {"delta1", "delta0", "reward", "prevalence", "welfare",
                           "median payoff", "designer payoff", "kind"},
                     rows);
    if (with_oracle) {
        for (size_t i = 0; i < outcomes.size(); ++i) {
            const auto lattice = grid_designer_argmax(outcomes[i].reward, s, grid);
            std::ostringstream label;
            label << "row " << i + 1 << " payoff gap vs lattice";
            report.add_value("lattice cross-check", label.str(),
                             outcomes[i].designer_payoff - lattice.payoff,
                             "equilibrium - lattice");
        }
    }
}

int cmd_equilibria(const CommonOpts& opts) {
    const auto cfg = load_scenario_config(opts.config_path);
    const auto s = build_scenario(cfg);
    RunReport report("equilibria");
    report.set_inputs(to_json(cfg));
    const auto nrep = null_equilibrium_exists(s);
    const std::string nsec = "null existence";
    report.add_value(nsec, "interval low", nrep.interval_low, "dB*(1-phi)/(dB*(1-phi)+dA*phi)");
    report.add_value(nsec, "interval high", nrep.interval_high, "dB*phi/(dA*(1-phi)+dB*phi)");
    report.add_value(nsec, "sincere prevalence", nrep.sincere_prevalence, "F(0)");
    report.add_text(nsec, "null equilibrium exists", nrep.exists ? "yes" : "no");
    if (!nrep.note.empty()) report.add_text(nsec, "note", nrep.note);
    std::vector<std::string> log;
    const auto outcomes = find_equilibria(s, &log);
    if (outcomes.empty()) {
        report.add_text("equilibria", "result",
                        "no pure-strategy equilibrium: the designer's best response and the "
                        "majority reward chase each other");
    }
    add_equilibria_table(report, s, outcomes, opts.oracle, opts.grid);
    for (const auto& line : log) report.add_warning(line);
    emit(report, opts);
    if (!opts.csv_path.empty()) {
        std::ofstream out(opts.csv_path);
        if (!out) throw config_error("cannot write csv file: " + opts.csv_path);
        out << "delta1,delta0,reward,prevalence,welfare,median_payoff,designer_payoff,kind\n";
        for (const auto& eq : outcomes) {
            out << eq.classifier.delta1 << "," << eq.classifier.delta0 << "," << eq.reward
                << "," << eq.prevalence << "," << eq.social_welfare << "," << eq.median_payoff
                << "," << eq.designer_payoff << "," << to_string(eq.kind) << "\n";
        }
    }
    return 0;
}

int cmd_compare(const CommonOpts& opts, double reward) {
    const auto cfg = load_scenario_config(opts.config_path);
    const auto s = build_scenario(cfg);
    RunReport report("compare");
    report.set_inputs(to_json(cfg));
    const auto cmp = exogenous_comparison(s, reward);
    add_equilibria_table(report, s, cmp.equilibria, false, opts.grid);
    const std::string sec = "fixed reward";
    report.add_value(sec, "reward", cmp.fixed_reward, "input");
    report.add_value(sec, "delta1", cmp.classifier.delta1, "argmax of the expected payoff");
    report.add_value(sec, "delta0", cmp.classifier.delta0, "argmax of the expected payoff");
    report.add_value(sec, "designer payoff", cmp.designer_payoff, "expected cell payoff");
    report.add_value(sec, "median payoff", cmp.median_payoff, "median conditional payoff");
    report.add_value(sec, "welfare", cmp.social_welfare, "t*F(x) - E[g; g<=x]");
    report.add_value(sec, "compliance", cmp.prevalence, "F(r*rho)");
    emit(report, opts);
    return 0;
}

int cmd_reproduce(const CommonOpts& opts, const std::string& example) {
    RunReport report("reproduce " + example);
    const int status = tools::run_builtin_example(example, report, opts.csv_path);
    emit(report, opts);
    if (status != 0) {
        std::cerr << "reproduction failed: " << report.failed_checks()
                  << " reference cell(s) outside tolerance\n";
    }
    return status;
}

int cmd_simulate(const CommonOpts& opts, const std::string& classifier_text, double reward,
                 std::uint64_t agents) {
    const auto cfg = load_scenario_config(opts.config_path);
    const auto s = build_scenario(cfg);
    const auto c = parse_classifier(classifier_text);
    RunReport report("simulate");
    report.set_inputs(to_json(cfg));
    const auto sim = simulate_population(c, reward, s, agents, opts.seed);
    const double pi = prevalence(c, s.accuracy, reward, *s.distribution);
    const auto cf = confusion_fractions(pi, c, s.accuracy);
    const std::string sec = "simulation";
    report.add_value(sec, "agents", double(sim.n_agents), "input");
    report.add_value(sec, "seed", double(sim.seed), "input");
    report.add_value(sec, "empirical prevalence", sim.empirical_prevalence, "sample mean");
    report.add_value(sec, "analytic prevalence", pi, "F(r*rho)");
    report.add_value(sec, "mean net transfer", sim.mean_net_transfer, "r*(d - mean d)");
    add_confusion(report, "analytic confusion", cf);
    const std::string esec = "empirical confusion";
    report.add_value(esec, "tp", sim.empirical_confusion.tp, "sample fraction");
    report.add_value(esec, "fn", sim.empirical_confusion.fn, "sample fraction");
    report.add_value(esec, "fp", sim.empirical_confusion.fp, "sample fraction");
    report.add_value(esec, "tn", sim.empirical_confusion.tn, "sample fraction");
    if (!opts.csv_path.empty()) {
        const auto trace = simulate_population_trace(c, reward, s, agents, opts.seed);
        std::ofstream out(opts.csv_path);
        if (!out) throw config_error("cannot write csv file: " + opts.csv_path);
        out << "cost,behavior,signal,decision,net_transfer\n";
        for (const auto& rec : trace) {
            out << rec.cost << "," << rec.behavior << "," << rec.signal << "," << rec.decision
                << "," << rec.net_transfer << "\n";
        }
    }
    emit(report, opts);
    return 0;
}

int cmd_check_dist(const CommonOpts& opts, int grid_points) {
    const auto cfg = load_scenario_config(opts.config_path);
    const auto s = build_scenario(cfg);
    RunReport report("check-dist");
    report.set_inputs(to_json(cfg));
    const auto& d = *s.distribution;
    std::vector<double> grid;
    const double lo = d.median() - 6.0 * d.scale();
    const double hi = d.median() + 6.0 * d.scale();
    for (int i = 0; i < grid_points; ++i) {
        grid.push_back(lo + (hi - lo) * double(i) / (grid_points - 1));
    }
    const auto lc = verify_log_concavity(d, grid);
    const std::string sec = "log-concavity";
    report.add_text(sec, "distribution", d.name());
    report.add_value(sec, "grid points", double(lc.points.size()), "input");
    report.add_value(sec, "violations", double(lc.failures),
                     "pdf^2 >= cdf*pdf' and pdf^2 >= -pdf'*(1-cdf)");
    for (const auto& pt : lc.points) {
        if (!pt.ok()) {
            std::ostringstream os;
            os << "violation at x = " << pt.x << " (cdf-side margin " << pt.cdf_side_margin
               << ", survival-side margin " << pt.survival_side_margin << ")";
            report.add_warning(os.str());
        }
    }
    emit(report, opts);
    return lc.all_ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classeq: equilibrium workbench for reward-based classification games"};
    app.require_subcommand(1);

    CommonOpts opts;
    double reward = 0.0;
    std::uint64_t agents = 1000000;
    std::string classifier_text;
    std::optional<std::string> optional_classifier;
    std::string example;
    int dist_grid = 121;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        if (needs_config) {
            sub->add_option("--config", opts.config_path, "scenario config (JSON)")->required();
        }
        sub->add_option("--json", opts.json_path, "write the full-precision report here");
        sub->add_option("--csv", opts.csv_path, "write CSV output here");
        sub->add_option("--grid", opts.grid, "lattice resolution for cross-checks");
        sub->add_option("--seed", opts.seed, "simulation seed");
        sub->add_flag("--oracle", opts.oracle, "append brute-force cross-checks");
    };

    auto* designer = app.add_subcommand("designer", "designer best-response classifier");
    add_common(designer);
    designer->add_option("--reward", reward, "fixed reward")->required();

    auto* rewards = app.add_subcommand("rewards", "threshold roots and the majority reward");
    add_common(rewards);
    std::string rewards_classifier;
    rewards->add_option("--classifier", rewards_classifier, "delta1,delta0");

    auto* equilibria = app.add_subcommand("equilibria", "enumerate and verify equilibria");
    add_common(equilibria);

    auto* compare = app.add_subcommand("compare", "equilibrium versus a fixed reward");
    add_common(compare);
    compare->add_option("--reward", reward, "fixed reward")->required();

    auto* reproduce = app.add_subcommand("reproduce", "run a bundled reference scenario");
    add_common(reproduce, false);
    reproduce->add_option("--example", example, "bundled example name")->required();

    auto* simulate = app.add_subcommand("simulate", "finite-population draw");
    add_common(simulate);
    simulate->add_option("--classifier", classifier_text, "delta1,delta0")->required();
    simulate->add_option("--reward", reward, "fixed reward")->required();
    simulate->add_option("--agents", agents, "number of agents");

    auto* check_dist = app.add_subcommand("check-dist", "distribution shape diagnostics");
    add_common(check_dist);
    check_dist->add_option("--points", dist_grid, "grid points for the shape checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (designer->parsed()) return cmd_designer(opts, reward);
        if (rewards->parsed()) {
            if (!rewards_classifier.empty()) optional_classifier = rewards_classifier;
            return cmd_rewards(opts, optional_classifier);
        }
        if (equilibria->parsed()) return cmd_equilibria(opts);
        if (compare->parsed()) return cmd_compare(opts, reward);
        if (reproduce->parsed()) return cmd_reproduce(opts, example);
        if (simulate->parsed()) return cmd_simulate(opts, classifier_text, reward, agents);
        if (check_dist->parsed()) return cmd_check_dist(opts, dist_grid);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const degenerate_denominator_error& e) {
        std::cerr << "solver degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const bracket_failure_error& e) {
        std::cerr << "solver degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const null_classifier_error& e) {
        std::cerr << "solver degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
