// Command-line frontend for the pairwise-distance change-point toolkit:
// simulate scenario data, detect single or multiple change-points, turn
// price tables into returns, and replicate the benchmark experiments.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdcp/datagen.hpp"
#include "pdcp/ingest.hpp"
#include "pdcp/multi.hpp"
#include "pdcp/parallel.hpp"
#include "pdcp/permutation.hpp"
#include "pdcp/report.hpp"
#include "pdcp/rng.hpp"
#include "pdcp/scan.hpp"

namespace {

using pdcp::CandidateSet;
using pdcp::DistanceSpec;
using pdcp::ObservationMatrix;

struct InputOptions {
    std::string input_path;
    int example_id = 0;
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<std::size_t> taus;
    double beta = 0.6;
};

struct DistanceOptions {
    std::string kind = "l2";
    double exp_scale = 2.0;
    std::vector<std::size_t> block_sizes;
};

struct DeltaOptions {
    double delta = 0.0;  // 0 = derive from rule
    std::string rule = "fixed";
};

void add_input_options(CLI::App* cmd, InputOptions& opt, bool allow_file) {
    if (allow_file) cmd->add_option("--input", opt.input_path, "CSV file of observations (rows in time order)");
    cmd->add_option("--example", opt.example_id, "simulated scenario id (1-16)")->check(CLI::Range(1, 16));
    cmd->add_option("--n", opt.n, "override scenario length");
    cmd->add_option("--d", opt.d, "override scenario dimension");
    cmd->add_option("--tau", opt.taus, "true change-point(s) for the scenario")->delimiter(',');
    cmd->add_option("--beta", opt.beta, "sparsity exponent for examples 5-6");
}

void add_distance_options(CLI::App* cmd, DistanceOptions& opt) {
    cmd->add_option("--distance", opt.kind, "distance kind: l2, l1, exp, block_l1, block_exp")
        ->check(CLI::IsMember({"l2", "l1", "exp", "block_l1", "block_exp"}));
    cmd->add_option("--exp-scale", opt.exp_scale, "lambda in psi(t) = 1 - exp(-t/lambda)");
    cmd->add_option("--block-sizes", opt.block_sizes, "comma-separated block sizes (block kinds)")
        ->delimiter(',');
}

void add_delta_options(CLI::App* cmd, DeltaOptions& opt) {
    cmd->add_option("--delta", opt.delta, "fraction of the sequence excluded at each end");
    cmd->add_option("--delta-rule", opt.rule, "fixed: max(0.05, 2/n); sqrt: 1/sqrt(n)")
        ->check(CLI::IsMember({"fixed", "sqrt"}));
}

DistanceSpec make_distance_spec(const DistanceOptions& opt) {
    DistanceSpec spec;
    spec.kind = pdcp::distance_kind_from_string(opt.kind);
    spec.exp_scale = opt.exp_scale;
    spec.block_sizes = opt.block_sizes;
    return spec;
}

double resolve_delta(const DeltaOptions& opt, std::size_t n) {
    if (opt.delta != 0.0) return opt.delta;
    return opt.rule == "sqrt" ? CandidateSet::sqrt_delta(n) : CandidateSet::default_delta(n);
}

ObservationMatrix load_input(const InputOptions& opt, std::uint64_t seed) {
    const bool have_file = !opt.input_path.empty();
    const bool have_example = opt.example_id != 0;
    if (have_file == have_example)
        throw std::runtime_error("exactly one of --input and --example must be given");
    if (have_file) return pdcp::load_matrix_csv(opt.input_path);
    pdcp::ScenarioSpec spec;
    spec.example_id = opt.example_id;
    spec.n = opt.n;
    spec.d = opt.d;
    spec.taus = opt.taus;
    spec.beta = opt.beta;
    spec.seed = seed;
    return pdcp::make_scenario(spec).data;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << j.dump(2) << '\n';
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text;
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

int run_pipeline(const std::function<void(std::string&)>& body) {
    std::string stage = "startup";
    try {
        body(stage);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pdcp: error in stage '" << stage << "': " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairwise-distance change-point detection"};
    app.require_subcommand(1);

    // ---- simulate ----------------------------------------------------
    InputOptions sim_in;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    std::string sim_meta;
    auto* sim = app.add_subcommand("simulate", "generate scenario data as CSV");
    add_input_options(sim, sim_in, false);
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "output CSV path (default stdout)");
    sim->add_option("--meta-out", sim_meta, "JSON sidecar with true change-point metadata");

    // ---- detect ------------------------------------------------------
    InputOptions det_in;
    DistanceOptions det_dist;
    DeltaOptions det_delta;
    double det_alpha = 0.05;
    std::size_t det_B = 199;
    std::uint64_t det_seed = 0;
    unsigned det_threads = 0;
    std::string det_out;
    std::string det_curve;
    std::string det_reps;
    bool det_timing = false;
    auto* det = app.add_subcommand("detect", "single change-point scan with permutation test");
    add_input_options(det, det_in, true);
    add_distance_options(det, det_dist);
    add_delta_options(det, det_delta);
    det->add_option("--alpha", det_alpha, "test level");
    det->add_option("--permutations", det_B, "Monte-Carlo replicates B");
    det->add_option("--seed", det_seed, "RNG seed");
    det->add_option("--threads", det_threads, "worker threads (0 = hardware)");
    det->add_option("--out", det_out, "report JSON path (default stdout)");
    det->add_option("--curve-out", det_curve, "write the divergence curve as CSV");
    det->add_option("--dump-replicates", det_reps, "write permutation replicates as CSV");
    det->add_flag("--timing", det_timing, "include elapsed_ms in the report");

    // ---- detect-multi --------------------------------------------------
    InputOptions multi_in;
    DistanceOptions multi_dist;
    double multi_alpha = 0.05;
    std::size_t multi_B = 199;
    std::size_t multi_min_seg = 3;
    std::size_t multi_max_depth = 0;
    std::uint64_t multi_seed = 0;
    unsigned multi_threads = 0;
    std::string multi_out;
    std::string multi_csv;
    bool multi_timing = false;
    auto* multi = app.add_subcommand("detect-multi", "hierarchical multiple change-point detection");
    add_input_options(multi, multi_in, true);
    add_distance_options(multi, multi_dist);
    multi->add_option("--alpha", multi_alpha, "test level");
    multi->add_option("--permutations", multi_B, "conditional permutation replicates B");
    multi->add_option("--min-seg", multi_min_seg, "minimum segment size on either side of a split");
    multi->add_option("--max-depth", multi_max_depth, "recursion depth cap (0 = unlimited)");
    multi->add_option("--seed", multi_seed, "RNG seed");
    multi->add_option("--threads", multi_threads, "worker threads (0 = hardware)");
    multi->add_option("--out", multi_out, "report JSON path (default stdout)");
    multi->add_option("--points-out", multi_csv, "flat CSV of change-points (location,p_value,depth)");
    multi->add_flag("--timing", multi_timing, "include elapsed_ms in the report");

    // ---- returns -------------------------------------------------------
    std::string ret_input;
    std::string ret_out;
    std::string ret_drop_list;
    bool ret_keep_missing = false;
    auto* ret = app.add_subcommand("returns", "weekly prices to week-to-week returns");
    ret->add_option("--input", ret_input, "price CSV (rows = weeks, columns = assets)")->required();
    ret->add_option("--out", ret_out, "returns CSV path (default stdout)");
    ret->add_option("--drop-list", ret_drop_list, "sidecar listing excluded assets");
    ret->add_flag("--keep-missing", ret_keep_missing, "fail on missing prices instead of dropping assets");

    // ---- bench ---------------------------------------------------------
    InputOptions bench_in;
    DistanceOptions bench_dist;
    DeltaOptions bench_delta;
    double bench_alpha = 0.05;
    std::size_t bench_B = 199;
    std::size_t bench_reps = 500;
    std::uint64_t bench_seed = 0;
    unsigned bench_threads = 0;
    std::vector<std::size_t> bench_dims;
    std::string bench_n_rule = "fixed";
    double bench_tol_frac = 0.0;
    std::string bench_out;
    std::string bench_json;
    auto* bench = app.add_subcommand("bench", "replicate a scenario and tabulate |tau_hat - tau|");
    add_input_options(bench, bench_in, false);
    add_distance_options(bench, bench_dist);
    add_delta_options(bench, bench_delta);
    bench->add_option("--alpha", bench_alpha, "test level");
    bench->add_option("--permutations", bench_B, "Monte-Carlo replicates B");
    bench->add_option("--reps", bench_reps, "independent datasets per configuration");
    bench->add_option("--seed", bench_seed, "base RNG seed");
    bench->add_option("--threads", bench_threads, "worker threads (0 = hardware)");
    bench->add_option("--dims", bench_dims, "sweep these dimensions instead of a single run")->delimiter(',');
    bench->add_option("--n-rule", bench_n_rule, "sweep length rule: fixed keeps n, plus-d uses n+d")
        ->check(CLI::IsMember({"fixed", "plus-d"}));
    bench->add_option("--success-tol-frac", bench_tol_frac,
                      "|tau_hat - tau| <= frac*n also counts as a success (0 = exact only)");
    bench->add_option("--out", bench_out, "summary CSV path (default stdout)");
    bench->add_option("--json-out", bench_json, "summary JSON path");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        return run_pipeline([&](std::string& stage) {
            stage = "simulate";
            if (sim_in.example_id == 0) throw std::runtime_error("--example is required");
            pdcp::ScenarioSpec spec;
            spec.example_id = sim_in.example_id;
            spec.n = sim_in.n;
            spec.d = sim_in.d;
            spec.taus = sim_in.taus;
            spec.beta = sim_in.beta;
            spec.seed = sim_seed;
            const pdcp::ScenarioData data = pdcp::make_scenario(spec);

            stage = "write-output";
            if (sim_out.empty() || sim_out == "-")
                pdcp::write_matrix_csv(data.data, std::cout);
            else
                pdcp::write_matrix_csv(data.data, sim_out);
            if (!sim_meta.empty()) {
                nlohmann::json meta;
                meta["example"] = spec.example_id;
                meta["n"] = data.data.n;
                meta["d"] = data.data.d;
                meta["tau"] = data.taus;
                meta["seed"] = spec.seed;
                meta["description"] = data.description;
                write_json(meta, sim_meta);
            }
        });
    }

    if (det->parsed()) {
        return run_pipeline([&](std::string& stage) {
            const auto start = std::chrono::steady_clock::now();
            stage = "load-input";
            const ObservationMatrix data = load_input(det_in, det_seed);

            stage = "validate-config";
            const DistanceSpec spec = make_distance_spec(det_dist);
            spec.validate(data.d);
            const double delta = resolve_delta(det_delta, data.n);
            const CandidateSet cand = CandidateSet::from_delta(data.n, delta);
            pdcp::PermutationConfig cfg;
            cfg.replicates = det_B;
            cfg.alpha = det_alpha;
            cfg.seed = det_seed;
            cfg.validate();
            if (static_cast<double>(det_B + 1) < 1.0 / det_alpha)
                std::cerr << "pdcp: warning: B = " << det_B << " cannot reject at alpha = " << det_alpha
                          << " (need B >= 1/alpha - 1)\n";

            stage = "distance-matrix";
            const pdcp::DistanceMatrix D = pdcp::pairwise_matrix(data, spec, det_threads);

            stage = "scan";
            const pdcp::ScanResult scan_result = pdcp::scan(D, cand);

            stage = "significance-test";
            const pdcp::TestOutcome outcome = pdcp::permutation_test(D, cand, cfg, det_threads);

            stage = "write-output";
            std::optional<double> elapsed;
            if (det_timing) {
                elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                              .count();
            }
            write_json(pdcp::single_report(spec, data.n, data.d, delta, scan_result, outcome, det_seed,
                                           det_B, elapsed),
                       det_out);
            if (!det_curve.empty()) {
                std::ofstream os(det_curve);
                if (!os) throw std::runtime_error("cannot open " + det_curve + " for writing");
                scan_result.write_curve_csv(os);
            }
            if (!det_reps.empty()) {
                std::string text = "replicate,s_perm\n";
                for (std::size_t b = 0; b < outcome.replicates.size(); ++b)
                    text += std::to_string(b) + "," + format_double(outcome.replicates[b]) + "\n";
                write_text(text, det_reps);
            }
        });
    }

    if (multi->parsed()) {
        return run_pipeline([&](std::string& stage) {
            const auto start = std::chrono::steady_clock::now();
            stage = "load-input";
            const ObservationMatrix data = load_input(multi_in, multi_seed);

            stage = "validate-config";
            const DistanceSpec spec = make_distance_spec(multi_dist);
            spec.validate(data.d);
            pdcp::MultiConfig cfg;
            cfg.min_seg = multi_min_seg;
            cfg.replicates = multi_B;
            cfg.alpha = multi_alpha;
            cfg.seed = multi_seed;
            cfg.max_depth = multi_max_depth;
            cfg.validate();

            stage = "hierarchical-detection";
            const pdcp::DetectionReport report = pdcp::detect_multiple(data, spec, cfg, multi_threads);

            stage = "write-output";
            std::optional<double> elapsed;
            if (multi_timing) {
                elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                              .count();
            }
            write_json(pdcp::multi_report(spec, data.n, data.d, report, multi_seed, elapsed), multi_out);
            if (!multi_csv.empty()) {
                std::string text = "location,p_value,depth\n";
                for (const pdcp::ChangePoint& cp : report.change_points)
                    text += std::to_string(cp.location) + "," + format_double(cp.p_value) + "," +
                            std::to_string(cp.depth) + "\n";
                write_text(text, multi_csv);
            }
        });
    }

    if (ret->parsed()) {
        return run_pipeline([&](std::string& stage) {
            stage = "load-prices";
            const pdcp::PriceTable table = pdcp::PriceTable::load_csv(ret_input);

            stage = "compute-returns";
            const pdcp::ReturnsResult result = pdcp::prices_to_returns(table, !ret_keep_missing);

            stage = "write-output";
            if (ret_out.empty() || ret_out == "-")
                pdcp::write_matrix_csv(result.returns, std::cout);
            else
                pdcp::write_matrix_csv(result.returns, ret_out);
            if (!result.dropped_assets.empty()) {
                const std::string path =
                    !ret_drop_list.empty()
                        ? ret_drop_list
                        : (ret_out.empty() || ret_out == "-" ? std::string("dropped_assets.txt")
                                                             : ret_out + ".dropped.txt");
                std::string text;
                for (const std::string& a : result.dropped_assets) text += a + "\n";
                write_text(text, path);
                std::cerr << "pdcp: dropped " << result.dropped_assets.size()
                          << " asset(s) with missing prices, listed in " << path << '\n';
            }
        });
    }

    if (bench->parsed()) {
        return run_pipeline([&](std::string& stage) {
            stage = "validate-config";
            if (bench_in.example_id == 0) throw std::runtime_error("--example is required");
            const DistanceSpec spec = make_distance_spec(bench_dist);
            if (bench_in.example_id >= 13)
                throw std::runtime_error("bench tabulates single change-point scenarios (examples 1-12)");
            pdcp::PermutationConfig pcfg;
            pcfg.replicates = bench_B;
            pcfg.alpha = bench_alpha;
            pcfg.validate();

            std::vector<std::size_t> dims = bench_dims;
            if (dims.empty()) dims.push_back(bench_in.d);  // 0 = scenario default

            struct SweepRow {
                std::size_t d = 0, n = 0, tau = 0;
                std::size_t detected = 0;
                std::size_t bins[5] = {0, 0, 0, 0, 0};  // |diff| = 0,1,2,3,>=4 among detected
                std::size_t success_tol = 0;
            };
            std::vector<SweepRow> rows;

            stage = "replicate";
            for (std::size_t dim : dims) {
                pdcp::ScenarioSpec sc;
                sc.example_id = bench_in.example_id;
                sc.d = dim;
                sc.n = bench_in.n;
                sc.taus = bench_in.taus;
                sc.beta = bench_in.beta;
                if (!bench_dims.empty() && bench_n_rule == "plus-d") {
                    const std::size_t base = bench_in.n != 0 ? bench_in.n : 50;
                    sc.n = base + dim;
                    sc.taus = {sc.n / 2};
                }

                // resolve defaults once so every replicate sees the same shape
                sc.seed = 0;
                const pdcp::ScenarioData probe = pdcp::make_scenario(sc);
                SweepRow row;
                row.d = probe.data.d;
                row.n = probe.data.n;
                row.tau = probe.taus.front();

                const double delta = resolve_delta(bench_delta, row.n);
                const CandidateSet cand = CandidateSet::from_delta(row.n, delta);
                spec.validate(probe.data.d);

                std::vector<std::uint8_t> detected(bench_reps, 0);
                std::vector<std::int64_t> diffs(bench_reps, 0);
                pdcp::parallel_for(bench_reps, bench_threads, [&](std::size_t r) {
                    pdcp::ScenarioSpec rep_spec = sc;
                    rep_spec.seed = pdcp::rng::derive_seed(bench_seed, {pdcp::rng::fnv1a("bench-data"), r});
                    const pdcp::ScenarioData data = pdcp::make_scenario(rep_spec);
                    const pdcp::DistanceMatrix D = pdcp::pairwise_matrix(data.data, spec, 1);
                    const pdcp::ScanResult scan_result = pdcp::scan(D, cand);
                    pdcp::PermutationConfig cfg = pcfg;
                    cfg.seed = pdcp::rng::derive_seed(bench_seed, {pdcp::rng::fnv1a("bench-test"), r});
                    const pdcp::TestOutcome outcome = pdcp::permutation_test(D, cand, cfg, 1);
                    detected[r] = outcome.reject ? 1 : 0;
                    diffs[r] = static_cast<std::int64_t>(scan_result.t_hat) -
                               static_cast<std::int64_t>(data.taus.front());
                });

                for (std::size_t r = 0; r < bench_reps; ++r) {
                    if (!detected[r]) continue;
                    ++row.detected;
                    const std::size_t a = static_cast<std::size_t>(std::llabs(diffs[r]));
                    ++row.bins[a >= 4 ? 4 : a];
                    if (static_cast<double>(a) <= bench_tol_frac * static_cast<double>(row.n))
                        ++row.success_tol;
                }
                rows.push_back(row);
            }

            stage = "write-output";
            std::string csv =
                "distance,example,d,n,tau,reps,detected,hit0,hit1,hit2,hit3,hit4plus,exact_rate,total_"
                "rate,success_tol_rate\n";
            nlohmann::json jrows = nlohmann::json::array();
            for (const SweepRow& row : rows) {
                const double reps = static_cast<double>(bench_reps);
                csv += bench_dist.kind + "," + std::to_string(bench_in.example_id) + "," +
                       std::to_string(row.d) + "," + std::to_string(row.n) + "," + std::to_string(row.tau) +
                       "," + std::to_string(bench_reps) + "," + std::to_string(row.detected);
                for (int b = 0; b < 5; ++b) csv += "," + std::to_string(row.bins[b]);
                csv += "," + format_double(row.bins[0] / reps) + "," + format_double(row.detected / reps) +
                       "," + format_double(row.success_tol / reps) + "\n";
                jrows.push_back({{"distance", bench_dist.kind},
                                 {"example", bench_in.example_id},
                                 {"d", row.d},
                                 {"n", row.n},
                                 {"tau", row.tau},
                                 {"reps", bench_reps},
                                 {"detected", row.detected},
                                 {"hits", {row.bins[0], row.bins[1], row.bins[2], row.bins[3], row.bins[4]}},
                                 {"exact_rate", row.bins[0] / reps},
                                 {"total_rate", row.detected / reps},
                                 {"success_tol_rate", row.success_tol / reps}});
            }
            write_text(csv, bench_out);
            if (!bench_json.empty()) write_json(jrows, bench_json);
        });
    }

    return 0;
}
