// Copyright 2026 The cvsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cvsteer <command> [--in PATH] [--out PATH] [--seed N] [--n N]
//                   [--dark-noise-db X] [--format json|csv] [--perturb REL]
//                   [--gains gx,gp|optimal]
//
// Exit codes: 0 success, 1 analysis or tolerance failure, 2 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cvsteer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

struct RunConfig {
    std::string input_path;
    std::string output_path;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::optional<double> dark_noise_db;
    std::string format = "json";
    std::optional<double> perturb;
    std::string gains = "optimal";
    std::size_t draws = 1000;
    // simulate overrides
    std::optional<double> r1, r2, relative_phase, transmittance, eta_prep, eta_det_a, eta_det_b;
};

class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string &path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file '" + path + "'");
    out << text;
}

std::string dump(const nlohmann::json &j) { return j.dump(2) + "\n"; }

cvsteer::CovarianceMatrix read_covariance(const std::string &path) {
    return cvsteer::io::covariance_from_json(nlohmann::json::parse(read_input(path)));
}

cvsteer::GainPair parse_gains(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw InputError("--gains: expected 'gx,gp' or 'optimal', got '" + text + "'");
    try {
        std::size_t used = 0;
        const std::string gx = text.substr(0, comma);
        const std::string gp = text.substr(comma + 1);
        cvsteer::GainPair g{std::stod(gx, &used), 0.0};
        if (used != gx.size()) throw std::invalid_argument(gx);
        g.g_p = std::stod(gp, &used);
        if (used != gp.size()) throw std::invalid_argument(gp);
        return g;
    } catch (const std::exception &) {
        throw InputError("--gains: cannot parse '" + text + "'");
    }
}

int cmd_simulate(const RunConfig &cfg) {
    cvsteer::SourceParams p;
    if (!cfg.input_path.empty()) {
        p = cvsteer::io::source_params_from_json(nlohmann::json::parse(read_input(cfg.input_path)));
    }
    if (cfg.r1) p.r1 = *cfg.r1;
    if (cfg.r2) p.r2 = *cfg.r2;
    if (cfg.relative_phase) p.relative_phase = *cfg.relative_phase;
    if (cfg.transmittance) p.transmittance = *cfg.transmittance;
    if (cfg.eta_prep) p.eta_prep = *cfg.eta_prep;
    if (cfg.eta_det_a) p.eta_det_a = *cfg.eta_det_a;
    if (cfg.eta_det_b) p.eta_det_b = *cfg.eta_det_b;
    if (cfg.dark_noise_db) p.dark_noise = cvsteer::dark_noise_from_clearance(*cfg.dark_noise_db);
    write_output(cfg.output_path, dump(cvsteer::io::to_json(cvsteer::build_epr_source(p))));
    return kExitOk;
}

int cmd_analyze(const RunConfig &cfg) {
    const auto state = read_covariance(cfg.input_path);
    nlohmann::json out = cvsteer::io::to_json(cvsteer::criteria_report(state));
    if (cfg.gains != "optimal") {
        const auto g = parse_gains(cfg.gains);
        out["fixed_gains"] = {{"g_x", g.g_x},
                              {"g_p", g.g_p},
                              {"product_b_given_a", cvsteer::reid_product(state, cvsteer::Direction::BGivenA, g)},
                              {"product_a_given_b", cvsteer::reid_product(state, cvsteer::Direction::AGivenB, g)}};
    }
    write_output(cfg.output_path, dump(out));
    return kExitOk;
}

int cmd_sample(const RunConfig &cfg) {
    const auto state = read_covariance(cfg.input_path);
    const double dark = cfg.dark_noise_db ? cvsteer::dark_noise_from_clearance(*cfg.dark_noise_db) : 0.0;
    const auto batches = cvsteer::campaign_batches(state, cfg.n, cfg.seed, dark);
    if (cfg.format == "csv") {
        std::ostringstream ss;
        cvsteer::io::write_samples_csv(ss, batches);
        write_output(cfg.output_path, ss.str());
    } else {
        const auto ms = cvsteer::measurement_set_from_batches(batches, cfg.seed, dark);
        write_output(cfg.output_path, dump(cvsteer::io::to_json(ms)));
    }
    return kExitOk;
}

int cmd_reconstruct(const RunConfig &cfg) {
    const auto ms = cvsteer::io::measurement_set_from_text(read_input(cfg.input_path));
    const auto rec = cvsteer::reconstruct(ms);
    for (const auto &w : rec.warnings) std::cerr << "warning: " << w << "\n";
    write_output(cfg.output_path, dump(cvsteer::io::to_json(rec)));
    return kExitOk;
}

int cmd_fit(const RunConfig &cfg) {
    const auto fit = cvsteer::fit_efficiency(read_covariance(cfg.input_path));
    write_output(cfg.output_path, dump(cvsteer::io::to_json(fit)));
    if (!fit.converged) {
        std::cerr << "error: fit did not converge within the evaluation cap\n";
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_repro(const RunConfig &cfg) {
    cvsteer::ReproOptions opt;
    opt.dark_noise_db = cfg.dark_noise_db;
    opt.perturb = cfg.perturb;
    opt.seed = cfg.seed;
    if (cfg.n > 0) opt.n = cfg.n;
    opt.draws = cfg.draws;
    const auto report = cvsteer::run_repro(opt);
    std::cout << cvsteer::format_repro_table(report);
    if (!cfg.output_path.empty()) write_output(cfg.output_path, dump(cvsteer::repro_to_json(report)));
    if (!report.all_pass()) {
        for (const auto &r : report.rows) {
            if (!r.pass()) std::cerr << "FAIL: " << r.quantity << "\n";
        }
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"cvsteer: two-mode Gaussian EPR-steering simulation and analysis"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_io = [&](CLI::App *sub, bool input_required) {
        auto *in = sub->add_option("--in", cfg.input_path, "Input file ('-' for stdin)");
        if (input_required) in->required();
        sub->add_option("--out", cfg.output_path, "Output file (default: stdout)");
    };

    auto *simulate = app.add_subcommand("simulate", "Forward-model the EPR source and write its covariance matrix");
    add_io(simulate, false);
    simulate->add_option("--r1", cfg.r1, "Squeezing parameter of source 1");
    simulate->add_option("--r2", cfg.r2, "Squeezing parameter of source 2");
    simulate->add_option("--phase", cfg.relative_phase, "Relative phase in radians");
    simulate->add_option("--transmittance", cfg.transmittance, "Beamsplitter power transmittance");
    simulate->add_option("--eta-prep", cfg.eta_prep, "Preparation efficiency");
    simulate->add_option("--eta-det-a", cfg.eta_det_a, "Detection efficiency, Alice");
    simulate->add_option("--eta-det-b", cfg.eta_det_b, "Detection efficiency, Bob");
    simulate->add_option("--dark-noise-db", cfg.dark_noise_db, "Detector dark-noise clearance below vacuum [dB]");

    auto *analyze = app.add_subcommand("analyze", "Evaluate Reid and Duan criteria for a covariance matrix");
    add_io(analyze, true);
    analyze->add_option("--gains", cfg.gains, "Fixed gains 'gx,gp' or 'optimal'");

    auto *sample = app.add_subcommand("sample", "Simulate the six-setting homodyne campaign");
    add_io(sample, true);
    sample->add_option("--n", cfg.n, "Samples per setting")->required()->check(CLI::Range(std::size_t{2}, SIZE_MAX));
    sample->add_option("--seed", cfg.seed, "Campaign seed");
    sample->add_option("--dark-noise-db", cfg.dark_noise_db, "Detector dark-noise clearance below vacuum [dB]");
    sample->add_option("--format", cfg.format, "json (MeasurementSet) or csv (raw samples)")
        ->check(CLI::IsMember({"json", "csv"}));

    auto *recon = app.add_subcommand("reconstruct", "Reconstruct the covariance matrix from six variances");
    add_io(recon, true);

    auto *fit = app.add_subcommand("fit", "Fit the overall efficiency of the loss model");
    add_io(fit, true);

    auto *repro = app.add_subcommand("repro", "Reproduce the published numbers from the built-in dataset");
    repro->add_option("--out", cfg.output_path, "Write the JSON report here");
    repro->add_option("--seed", cfg.seed, "Seed for the sampled and perturbation studies");
    repro->add_option("--n", cfg.n, "Samples per setting for the dark-noise rerun");
    repro->add_option("--dark-noise-db", cfg.dark_noise_db, "Add a sampled dark-noise study at this clearance [dB]");
    repro->add_option("--perturb", cfg.perturb, "Add an input-perturbation study at this relative error")
        ->check(CLI::Range(0.0, 0.999));
    repro->add_option("--draws", cfg.draws, "Perturbation draws")->check(CLI::Range(std::size_t{1}, SIZE_MAX));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*simulate) return cmd_simulate(cfg);
        if (*analyze) return cmd_analyze(cfg);
        if (*sample) return cmd_sample(cfg);
        if (*recon) return cmd_reconstruct(cfg);
        if (*fit) return cmd_fit(cfg);
        if (*repro) return cmd_repro(cfg);
    } catch (const cvsteer::InconsistentDataError &e) {
        std::cerr << "error: " << e.what() << " [entry " << e.entry() << "]\n";
        return kExitFailure;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const cvsteer::DegenerateInputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitInput;
}
