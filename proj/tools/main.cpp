#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cubt/backward.hpp"
#include "cubt/benchmark.hpp"
#include "cubt/datagen.hpp"
#include "cubt/errors.hpp"
#include "cubt/eval.hpp"
#include "cubt/pipeline.hpp"
#include "cubt/treeio.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct FitOptions {
    std::string data_path;
    int minsize = 1;
    double mindev = 0.8;
    double mindist = 0.0;
    double delta = 0.2;
    int k = 0;  // 0 = unset
    double eta_quantile = -1.0;
    bool standardize = false;
};

cubt::Params to_params(const FitOptions& o) {
    cubt::Params p;
    p.minsize = o.minsize;
    p.mindev = o.mindev;
    p.mindist = o.mindist;
    p.delta = o.delta;
    if (o.k > 0) p.k = o.k;
    if (o.eta_quantile >= 0.0) p.eta_quantile = o.eta_quantile;
    p.standardize = o.standardize;
    return p;
}

void add_fit_flags(CLI::App* cmd, FitOptions& o) {
    cmd->add_option("--data", o.data_path, "input CSV")->required();
    cmd->add_option("--minsize", o.minsize, "smallest node still split");
    cmd->add_option("--mindev", o.mindev, "required gain as a share of the root deviance");
    cmd->add_option("--mindist", o.mindist, "pruning threshold (0 skips pruning)");
    cmd->add_option("--delta", o.delta, "trimming share of the dissimilarity kernel");
    cmd->add_option("--k", o.k, "target number of clusters");
    cmd->add_option("--eta-quantile", o.eta_quantile,
                    "joining threshold as a quantile of the leaf dissimilarities");
    cmd->add_flag("--standardize", o.standardize, "rescale columns to mean 0, variance 1");
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        cubt::write_text_file(path, text);
}

std::string assignments_csv(const std::vector<int>& labels) {
    std::string out = "row,cluster\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += std::to_string(i) + ',' + std::to_string(labels[i]) + '\n';
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"binary-tree clustering toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "draw a labeled synthetic sample");
    std::string gen_model = "M1";
    double gen_sigma = 0.0;
    int gen_per_group = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--model", gen_model, "M1, M2, M3, M4 or cart")->required();
    gen->add_option("--sigma", gen_sigma, "group noise level (M1, M2, M4)");
    gen->add_option("--per-group", gen_per_group, "points per group (0 = model default)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output CSV (default stdout)");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "run the full grow/prune/join pipeline");
    FitOptions fit_opt;
    std::string fit_tree_out = "cubt_tree.json";
    std::string fit_result_out = "cubt_result.json";
    std::string fit_dot_out = "cubt_tree.dot";
    std::string fit_assign_out;
    add_fit_flags(fit_cmd, fit_opt);
    fit_cmd->add_option("--tree-out", fit_tree_out, "write the joined tree as JSON");
    fit_cmd->add_option("--dot-out", fit_dot_out, "write the joined tree as DOT");
    fit_cmd->add_option("--result-out", fit_result_out,
                        "write the full result (snapshots, trace) as JSON");
    fit_cmd->add_option("--assignments-out", fit_assign_out, "write the assignments as CSV");

    // predict
    auto* pred = app.add_subcommand("predict", "route new rows through a fitted tree");
    std::string pred_tree, pred_data, pred_out;
    bool pred_standardize = false;
    pred->add_option("--tree", pred_tree, "tree JSON from fit")->required();
    pred->add_option("--data", pred_data, "input CSV")->required();
    pred->add_option("--out", pred_out, "output CSV (default stdout)");
    pred->add_flag("--standardize", pred_standardize,
                   "rescale the input by its own column statistics, as fit --standardize does");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "replicate the synthetic study");
    std::string bench_config, bench_rows_out, bench_agg_out, bench_write_config;
    int bench_threads = -1, bench_replicates = 0;
    bool bench_quiet = false;
    bench->add_option("--config", bench_config, "benchmark config JSON (default: built-in)");
    bench->add_option("--rows-out", bench_rows_out, "write one CSV row per run");
    bench->add_option("--aggregates-out", bench_agg_out, "write per-setting aggregates CSV");
    bench->add_option("--threads", bench_threads, "worker threads (0 = all cores)");
    bench->add_option("--replicates", bench_replicates, "override the replicate count");
    bench->add_option("--write-default-config", bench_write_config,
                      "write the built-in config JSON and exit");
    bench->add_flag("--quiet", bench_quiet, "suppress the summary table");

    // export
    auto* exp = app.add_subcommand("export", "render a fitted tree");
    std::string exp_tree, exp_data, exp_out, exp_format = "dot";
    exp->add_option("--tree", exp_tree, "tree JSON from fit")->required();
    exp->add_option("--format", exp_format, "dot or json")
        ->check(CLI::IsMember({"dot", "json"}));
    exp->add_option("--data", exp_data, "training CSV, for column names in dot output");
    exp->add_option("--out", exp_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (gen->parsed()) {
        cubt::ModelSpec spec;
        spec.model = cubt::model_from_name(gen_model);
        spec.sigma = gen_sigma;
        spec.per_group = gen_per_group;
        spec.seed = gen_seed;
        const cubt::Dataset data = cubt::generate(spec);
        if (gen_out.empty()) {
            cubt::write_csv(data, std::cout);
        } else {
            cubt::write_csv(data, gen_out);
            std::cerr << "wrote " << data.n_rows << " rows to " << gen_out << "\n";
        }
        return kExitOk;
    }

    if (fit_cmd->parsed()) {
        const cubt::Dataset data = cubt::read_csv(fit_opt.data_path);
        cubt::ClusterResult result;
        try {
            result = cubt::fit(data, to_params(fit_opt));
        } catch (const cubt::KTooLarge& e) {
            std::cerr << "error: " << e.what()
                      << "\nhint: the tree has fewer leaves than --k even after the mindev "
                         "fallback; lower --mindist or --minsize, or reduce --k\n";
            return kExitData;
        }
        if (!fit_tree_out.empty()) cubt::save_tree(result.tree, fit_tree_out);
        if (!fit_dot_out.empty())
            cubt::write_text_file(fit_dot_out, cubt::export_dot(result.tree, &data));
        if (!fit_result_out.empty())
            cubt::write_text_file(fit_result_out, cubt::result_to_json(result));
        if (!fit_assign_out.empty())
            cubt::write_text_file(fit_assign_out, assignments_csv(result.assignments));
        std::cout << "k_found=" << result.k_found
                  << " leaves=" << result.tree.leaf_count();
        if (data.has_labels())
            std::cout << " mce=" << cubt::format_double(cubt::mce(data.labels, result.assignments));
        for (const auto& w : result.tree.warnings) std::cout << " warning=" << w;
        std::cout << "\n";
        return kExitOk;
    }

    if (pred->parsed()) {
        const cubt::ClusterTree tree = cubt::load_tree(pred_tree);
        cubt::Dataset data = cubt::read_csv(pred_data);
        if (pred_standardize) data = cubt::standardize_dataset(data);
        const std::vector<int> labels = cubt::predict_labels(tree, data);
        write_or_print(pred_out, assignments_csv(labels));
        return kExitOk;
    }

    if (bench->parsed()) {
        if (!bench_write_config.empty()) {
            cubt::write_text_file(bench_write_config, cubt::desk_scale_config().to_json());
            return kExitOk;
        }
        cubt::BenchmarkConfig config =
            bench_config.empty() ? cubt::desk_scale_config()
                                 : cubt::BenchmarkConfig::from_json(
                                       cubt::read_text_file(bench_config));
        if (bench_threads >= 0) config.threads = bench_threads;
        if (bench_replicates > 0) config.replicates = bench_replicates;
        const cubt::BenchmarkReport report = cubt::run_benchmark(config);
        if (!bench_rows_out.empty()) cubt::write_text_file(bench_rows_out, report.rows_csv());
        if (!bench_agg_out.empty())
            cubt::write_text_file(bench_agg_out, report.aggregates_csv());
        if (!bench_quiet) std::cout << report.summary_table();
        return kExitOk;
    }

    if (exp->parsed()) {
        const cubt::ClusterTree tree = cubt::load_tree(exp_tree);
        if (exp_format == "json") {
            write_or_print(exp_out, cubt::tree_to_json(tree));
        } else {
            std::optional<cubt::Dataset> data;
            if (!exp_data.empty()) data = cubt::read_csv(exp_data);
            write_or_print(exp_out, cubt::export_dot(tree, data ? &*data : nullptr));
        }
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cubt::InvalidParam& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cubt::KOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cubt::UnknownModel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cubt::BadSigma& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cubt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
