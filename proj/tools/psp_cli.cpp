// Command-line front end: classification, scheduling, bounds, experiments
// and the verification oracles.
//
// Exit codes: 0 success, 2 invalid input, 1 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "psp/psp.hpp"

namespace {

using psp::io::Json;

struct ParamArgs {
    double ell = 0.0;
    double r = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--ell", ell, "Minimum duration (fraction of the horizon)")->required();
        app->add_option("--r", r, "Maximum duration (fraction of the horizon)")->required();
    }
    [[nodiscard]] psp::SystemParams params() const { return {ell, r}; }
};

void print(const Json& doc) { std::cout << psp::io::dump(doc); }

int cmd_classify(const ParamArgs& p, const std::string& demands_path) {
    const psp::SystemParams params = p.params();
    psp::SlotPlan plan = psp::classify(params);
    if (!demands_path.empty()) {
        plan = psp::classify(params, psp::io::read_demands(demands_path));
    }
    print(psp::io::plan_to_json(plan, psp::good_region(params)));
    return 0;
}

int cmd_schedule(const ParamArgs& p, const std::string& demands_path, const std::string& algo,
                 const std::string& out_path, const std::string& profile_path) {
    const psp::SystemParams params = p.params();
    const psp::DemandSet demands = psp::io::read_demands(demands_path);
    const auto algorithm = psp::algorithm_from_string(algo);
    if (!algorithm || (*algorithm != psp::Algorithm::PspFill && *algorithm != psp::Algorithm::Greedy)) {
        throw psp::ParameterError("--algo must be psp or greedy");
    }
    const psp::Policy policy = psp::schedule(*algorithm, demands, params);
    const psp::BoundCertificate cert = psp::certify(policy, demands, params);
    const psp::StepFunction profile = psp::power_profile(policy);

    Json doc;
    doc["algorithm"] = std::string(psp::to_string(policy.algorithm));
    doc["plan"] = psp::io::plan_to_json(policy.plan, psp::good_region(params));
    doc["certificate"] = psp::io::certificate_to_json(cert);
    doc["stacked_height"] = psp::io::number(psp::stacked_height(policy));
    if (out_path.empty()) {
        doc["policy"] = psp::io::policy_to_json(policy);
    } else {
        psp::io::write_text_file(out_path, psp::io::dump(psp::io::policy_to_json(policy)));
    }
    if (!profile_path.empty()) {
        psp::io::write_text_file(profile_path, psp::io::profile_to_csv(profile));
    }
    print(doc);
    return 0;
}

int cmd_bounds(const ParamArgs& p, const std::string& demands_path) {
    const psp::BoundCertificate cert =
        psp::theoretical_bounds(psp::io::read_demands(demands_path), p.params());
    print(psp::io::certificate_to_json(cert));
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
    const psp::ExperimentConfig cfg =
        psp::io::config_from_json(Json::parse(psp::io::read_text_file(config_path), nullptr, true, true));
    const psp::ExperimentResult result = psp::run_experiment(cfg);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    psp::io::write_text_file(dir / "result.json", psp::io::dump(psp::io::result_to_json(result)));
    psp::io::write_text_file(dir / "curve.csv", psp::io::curve_csv(result));
    std::cout << psp::io::curve_csv(result);
    return 0;
}

int cmd_oracle_search(const ParamArgs& p, double w) {
    const psp::SystemParams params = p.params();
    Json doc;
    doc["w"] = w;
    doc["achievable"] = psp::is_achievable(w, params);
    doc["achievable_by_search"] = psp::oracle::achievable_by_search(w, params);
    doc["largest_achievable"] = psp::io::number(psp::largest_achievable(w, params));
    if (psp::is_achievable(w, params)) {
        doc["decomposition"] = psp::io::numbers(psp::decompose(w, params));
    }
    print(doc);
    return 0;
}

int cmd_oracle_brute(const ParamArgs& p, const std::string& demands_path, const psp::oracle::GridSearchConfig& cfg) {
    const psp::SystemParams params = p.params();
    const psp::DemandSet demands = psp::io::read_demands(demands_path);
    const psp::oracle::BruteForceResult brute = psp::oracle::brute_force_peak(demands, params, cfg);
    const psp::BoundCertificate cert = psp::certify(psp::schedule_psp(demands, params), demands, params);

    Json doc;
    doc["brute_force_peak"] = psp::io::number(brute.peak);
    doc["a_bar"] = psp::io::number(cert.a_bar);
    doc["psp_peak"] = psp::io::number(*cert.achieved_peak);
    doc["upper"] = psp::io::number(cert.upper);
    doc["grid_error"] = psp::io::number(psp::oracle::grid_error_budget(demands, params, cfg));
    doc["placements_per_demand"] = brute.candidates_per_demand;
    doc["witness"] = psp::io::assignments_to_json(brute.witness);
    print(doc);
    return 0;
}

int cmd_oracle_filling(const ParamArgs& p, std::vector<double> widths, std::size_t random_count, std::uint64_t seed,
                       double delta) {
    const psp::SystemParams params = p.params();
    if (widths.empty()) {
        psp::Rng rng(seed);
        for (std::size_t i = 0; i < random_count; ++i) {
            widths.push_back(params.ell() + (params.r() - params.ell()) * rng.uniform01());
        }
    }
    const psp::oracle::Filling filling = psp::oracle::build_filling(widths, params, delta);
    const psp::oracle::FillingReport report = psp::oracle::verify_filling(filling, params);

    Json doc;
    doc["k0"] = report.k0;
    doc["z_star"] = psp::io::number(report.z_star);
    doc["rows"] = filling.rows.size();
    Json rows = Json::array();
    for (const auto& row : filling.rows) {
        Json r = Json::array();
        for (const auto& rect : row) {
            r.push_back({{"tau", psp::io::number(rect.tau)}, {"width", psp::io::number(rect.width)}});
        }
        rows.push_back(std::move(r));
    }
    doc["layout"] = std::move(rows);
    Json issues = Json::array();
    for (const auto& issue : report.issues) {
        issues.push_back({{"row", issue.row}, {"check", std::string(psp::oracle::to_string(issue.check))},
                          {"detail", issue.detail}});
    }
    doc["issues"] = std::move(issues);
    doc["ok"] = report.ok();
    print(doc);
    return report.ok() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peak-power scheduling of malleable energy demands over a unit horizon"};
    app.require_subcommand(1);

    ParamArgs classify_args;
    std::string classify_demands;
    auto* classify = app.add_subcommand("classify", "Instance case, slot layout and good-region membership");
    classify_args.attach(classify);
    classify->add_option("--demands", classify_demands, "Demand file (CSV id,energy or JSON array)");

    ParamArgs schedule_args;
    std::string schedule_demands;
    std::string algo = "psp";
    std::string out_path;
    std::string profile_path;
    auto* schedule = app.add_subcommand("schedule", "Build and certify a policy");
    schedule_args.attach(schedule);
    schedule->add_option("--demands", schedule_demands, "Demand file")->required();
    schedule->add_option("--algo", algo, "psp or greedy")->check(CLI::IsMember({"psp", "greedy"}));
    schedule->add_option("--out", out_path, "Write the policy JSON here instead of stdout");
    schedule->add_option("--profile", profile_path, "Write the power profile CSV here");

    ParamArgs bounds_args;
    std::string bounds_demands;
    auto* bounds = app.add_subcommand("bounds", "Lower bound and guaranteed upper bound on the optimal peak");
    bounds_args.attach(bounds);
    bounds->add_option("--demands", bounds_demands, "Demand file")->required();

    std::string config_path;
    std::string out_dir;
    auto* experiment = app.add_subcommand("experiment", "Repeated random runs with confidence intervals");
    experiment->add_option("--config", config_path, "Experiment config JSON")->required();
    experiment->add_option("--out", out_dir, "Output directory")->required();

    auto* oracle = app.add_subcommand("oracle", "Verification oracles");
    oracle->require_subcommand(1);

    ParamArgs search_args;
    double search_w = 1.0;
    auto* search = oracle->add_subcommand("search", "Achievability by formula and by enumeration");
    search_args.attach(search);
    search->add_option("--w", search_w, "Length to test")->required();

    ParamArgs brute_args;
    std::string brute_demands;
    psp::oracle::GridSearchConfig grid;
    auto* brute = oracle->add_subcommand("brute", "Exhaustive grid optimum for up to 4 demands");
    brute_args.attach(brute);
    brute->add_option("--demands", brute_demands, "Demand file")->required();
    brute->add_option("--tau-step", grid.tau_step, "Start-time grid step");
    brute->add_option("--s-step", grid.s_step, "Duration grid step");

    ParamArgs filling_args;
    std::vector<double> widths;
    std::size_t random_count = 8;
    std::uint64_t seed = 1;
    double delta = 1e-3;
    auto* filling = oracle->add_subcommand("filling", "Build a filling and check its row structure");
    filling_args.attach(filling);
    filling->add_option("--widths", widths, "Rectangle widths (default: random draws in [ell, r])");
    filling->add_option("--count", random_count, "Number of random widths");
    filling->add_option("--seed", seed, "Seed for random widths");
    filling->add_option("--delta", delta, "Rectangle height");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*classify) {
            return cmd_classify(classify_args, classify_demands);
        }
        if (*schedule) {
            return cmd_schedule(schedule_args, schedule_demands, algo, out_path, profile_path);
        }
        if (*bounds) {
            return cmd_bounds(bounds_args, bounds_demands);
        }
        if (*experiment) {
            return cmd_experiment(config_path, out_dir);
        }
        if (*search) {
            return cmd_oracle_search(search_args, search_w);
        }
        if (*brute) {
            return cmd_oracle_brute(brute_args, brute_demands, grid);
        }
        if (*filling) {
            return cmd_oracle_filling(filling_args, widths, random_count, seed, delta);
        }
    } catch (const psp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
