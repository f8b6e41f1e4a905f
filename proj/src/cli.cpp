#include "hretan/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hretan/dataset.hpp"
#include "hretan/error.hpp"
#include "hretan/evaluation.hpp"
#include "hretan/hierarchy.hpp"
#include "hretan/report_io.hpp"

namespace hretan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return in;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

struct Inputs {
    FeatureDag dag;
    ClosureTable closure;
    Dataset data;
};

Inputs load_inputs(const RunConfig& cfg) {
    if (cfg.hierarchy_path.empty()) throw ConfigError("--hierarchy is required");
    if (cfg.data_path.empty()) throw ConfigError("--data is required");
    Inputs in;
    {
        auto s = open_input(cfg.hierarchy_path);
        in.dag = load_hierarchy(s);
    }
    in.closure = build_closure(in.dag);
    {
        auto s = open_input(cfg.data_path);
        in.data = load_dataset(s);
    }
    return in;
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
    const auto in = load_inputs(cfg);
    const auto violations = validate_consistency(in.data, in.closure);
    for (const auto& v : violations) out << v.instance << '\t' << v.feature << '\t' << v.ancestor << '\n';
    out << violations.size() << " violations\n";
    if (cfg.strict && !violations.empty())
        throw SchemaError(std::to_string(violations.size()) + " hierarchy-consistency violations");
    return 0;
}

int run_eval(const RunConfig& cfg, std::ostream& out) {
    const auto in = load_inputs(cfg);
    const auto violations = validate_consistency(in.data, in.closure);
    if (cfg.strict && !violations.empty())
        throw SchemaError(std::to_string(violations.size()) + " hierarchy-consistency violations");

    CrossValidationOptions opts;
    opts.folds = cfg.folds;
    opts.seed = cfg.seed;
    opts.positive_class = cfg.positive_class;
    opts.pipeline.mi = cfg.mi_mode;
    opts.threads = cfg.threads;
    if (!cfg.dump_structure_dir.empty()) {
        fs::create_directories(cfg.dump_structure_dir);
        const auto& schema = in.data.features();
        opts.on_prediction = [&cfg, &schema](std::size_t fold, std::size_t index, const Prediction& pred) {
            const auto name = "fold" + std::to_string(fold) + "_instance" + std::to_string(index) + ".json";
            write_file(fs::path(cfg.dump_structure_dir) / name, dump(forest_to_json(pred.structure, schema)));
        };
    }

    auto report = cross_validate(in.data, cfg.algorithm, in.closure, opts);
    report.dataset = cfg.dataset_name.empty() ? fs::path(cfg.data_path).stem().string() : cfg.dataset_name;

    if (!cfg.folds_out_path.empty())
        write_file(cfg.folds_out_path, dump(to_json(stratified_folds(in.data, cfg.folds, cfg.seed))));
    if (cfg.out_path.empty()) out << dump(to_json(report));
    else write_file(cfg.out_path, dump(to_json(report)));
    out << summary_line(report) << '\n';
    return 0;
}

std::map<std::string, double> load_imbalance_overrides(const std::string& path) {
    std::map<std::string, double> overrides;
    auto in = open_input(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(lineno, "expected 'dataset,imbalance_degree'");
        const auto name = line.substr(0, comma);
        const auto value = line.substr(comma + 1);
        if (lineno == 1 && name == "dataset") continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            overrides[name] = v;
        } catch (const std::exception&) {
            throw ParseError(lineno, "invalid imbalance degree '" + value + "'");
        }
    }
    return overrides;
}

int run_correlate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.reports_dir.empty()) throw ConfigError("--reports is required");
    if (!fs::is_directory(cfg.reports_dir)) throw ConfigError("'" + cfg.reports_dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.reports_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    const auto overrides = cfg.imbalance_csv.empty() ? std::map<std::string, double>{}
                                                     : load_imbalance_overrides(cfg.imbalance_csv);

    struct Point {
        std::string dataset;
        double imbalance;
        double gmean;
    };
    std::map<std::string, std::vector<Point>> by_algorithm;
    for (const auto& file : files) {
        auto in = open_input(file.string());
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw SchemaError(file.filename().string() + ": " + e.what());
        }
        const auto report = report_from_json(j);
        if (cfg.algorithm_filter && report.algorithm != *cfg.algorithm_filter) continue;
        auto it = overrides.find(report.dataset);
        const double imbalance = it != overrides.end() ? it->second : report.imbalance_degree;
        by_algorithm[std::string(algorithm_name(report.algorithm))].push_back({report.dataset, imbalance, report.gmean});
    }
    if (by_algorithm.empty()) throw InsufficientDataError("no reports found in '" + cfg.reports_dir + "'");

    json results = json::array();
    std::ostringstream scatter;
    scatter << "algorithm,dataset,imbalance_degree,gmean\n";
    for (const auto& [algo, points] : by_algorithm) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& p : points) {
            xy.emplace_back(p.imbalance, p.gmean);
            scatter << algo << ',' << p.dataset << ',' << json(p.imbalance).dump() << ',' << json(p.gmean).dump() << '\n';
        }
        auto entry = to_json(pearson_and_fit(xy));
        entry["algorithm"] = algo;
        results.push_back(entry);
        out << algo << " r=" << entry["r"].get<double>() << " n=" << points.size() << '\n';
    }
    const json doc{{"spec_version", kReportFormatVersion}, {"results", results}};
    if (cfg.out_path.empty()) out << dump(doc);
    else write_file(cfg.out_path, dump(doc));
    if (!cfg.scatter_path.empty()) write_file(cfg.scatter_path, scatter.str());
    return 0;
}

int run_synth(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out_path.empty()) throw ConfigError("--out is required");
    const auto data = generate(cfg.synth);
    std::ostringstream h, d;
    write_hierarchy(h, data.dag);
    write_dataset(d, data.dataset);
    const fs::path dir(cfg.out_path);
    write_file(dir / "hierarchy.tsv", h.str());
    write_file(dir / "dataset.csv", d.str());
    const auto counts = data.dataset.class_counts();
    out << "wrote " << data.dag.size() << " features, " << data.dag.parent_edges().size() << " edges, "
        << data.dataset.size() << " instances (" << counts[0] << " " << data.dataset.labels()[0] << " / "
        << counts[1] << " " << data.dataset.labels()[1] << ") to " << dir.string() << '\n';
    return 0;
}

int exit_code(ErrorCategory category) {
    switch (category) {
    case ErrorCategory::Input: return 1;
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Contract: return 3;
    }
    return 3;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
        case Command::Validate: return run_validate(config, out);
        case Command::Eval: return run_eval(config, out);
        case Command::Correlate: return run_correlate(config, out);
        case Command::Synth: return run_synth(config, out);
        }
        throw ContractError("unknown command");
    } catch (const Error& e) {
        const int code = exit_code(e.category());
        report_error(err, e.kind(), e.what(), code);
        return code;
    } catch (const fs::filesystem_error& e) {
        report_error(err, "io_error", e.what(), 2);
        return 2;
    } catch (const std::exception& e) {
        report_error(err, "internal_error", e.what(), 3);
        return 3;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical redundancy eliminated TAN classifiers"};
    app.require_subcommand(1);
    RunConfig cfg;

    const std::map<std::string, AlgorithmKind> algorithms{{"tan", AlgorithmKind::Tan},
                                                          {"hre-tan", AlgorithmKind::HreTan},
                                                          {"hre-tan-mix", AlgorithmKind::HreTanMix},
                                                          {"hre-tan-plus", AlgorithmKind::HreTanPlus},
                                                          {"hre-tan+", AlgorithmKind::HreTanPlus}};
    const std::map<std::string, MiMode> mi_modes{{"conditional", MiMode::Conditional},
                                                 {"unconditional", MiMode::Unconditional}};

    auto* validate = app.add_subcommand("validate", "Check a dataset for hierarchy-consistency violations");
    validate->add_option("--hierarchy", cfg.hierarchy_path, "hierarchy TSV (child<TAB>parent)")->required();
    validate->add_option("--data", cfg.data_path, "dataset CSV")->required();
    validate->add_flag("--strict", cfg.strict, "exit 1 if any violation is found");

    auto* eval = app.add_subcommand("eval", "Stratified cross-validation of one algorithm");
    eval->add_option("--hierarchy", cfg.hierarchy_path, "hierarchy TSV")->required();
    eval->add_option("--data", cfg.data_path, "dataset CSV")->required();
    eval->add_option("--algorithm", cfg.algorithm, "tan | hre-tan | hre-tan-mix | hre-tan-plus")
        ->required()
        ->transform(CLI::CheckedTransformer(algorithms, CLI::ignore_case));
    eval->add_option("--folds", cfg.folds, "fold count")->capture_default_str()->check(CLI::Range(2, 1000000));
    eval->add_option("--seed", cfg.seed, "fold shuffling seed")->capture_default_str();
    eval->add_option("--positive-class", cfg.positive_class, "positive label (default: lexicographically greater)");
    eval->add_option("--mi", cfg.mi_mode, "conditional | unconditional")
        ->transform(CLI::CheckedTransformer(mi_modes, CLI::ignore_case));
    eval->add_flag("--strict", cfg.strict, "refuse datasets with consistency violations");
    eval->add_option("--out", cfg.out_path, "report JSON path (default: stdout)");
    eval->add_option("--dump-structure", cfg.dump_structure_dir, "write each learned forest as JSON here");
    eval->add_option("--folds-out", cfg.folds_out_path, "write the fold assignment JSON here");
    eval->add_option("--dataset-name", cfg.dataset_name, "dataset name in the report (default: file stem)");
    eval->add_option("--threads", cfg.threads, "worker threads (0 = OpenMP default)");

    auto* correlate = app.add_subcommand("correlate", "Pearson correlation of GMean against imbalance degree");
    correlate->add_option("--reports", cfg.reports_dir, "directory of report JSON files")->required();
    correlate->add_option("--imbalance-csv", cfg.imbalance_csv, "CSV of dataset,imbalance_degree overrides");
    correlate->add_option("--out", cfg.out_path, "result JSON path (default: stdout)");
    correlate->add_option("--scatter", cfg.scatter_path, "scatter CSV path");
    std::string algorithm_filter;
    correlate->add_option("--algorithm", algorithm_filter, "only use reports of this algorithm")
        ->check(CLI::IsMember(algorithms, CLI::ignore_case));

    auto* synth = app.add_subcommand("synth", "Generate a synthetic hierarchy and dataset");
    synth->add_option("--out", cfg.out_path, "output directory")->required();
    synth->add_option("--features", cfg.synth.n_features)->capture_default_str();
    synth->add_option("--instances", cfg.synth.n_instances)->capture_default_str();
    synth->add_option("--max-parents", cfg.synth.max_parents)->capture_default_str();
    synth->add_option("--depth", cfg.synth.depth)->capture_default_str();
    synth->add_option("--imbalance", cfg.synth.imbalance)->capture_default_str();
    synth->add_option("--strength", cfg.synth.dependence_strength, "dependence strength in [0, 1]")
        ->capture_default_str();
    synth->add_option("--seed", cfg.synth.seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, "config_error", e.what(), 2);
        return 2;
    }

    if (validate->parsed()) cfg.command = Command::Validate;
    else if (eval->parsed()) cfg.command = Command::Eval;
    else if (correlate->parsed()) cfg.command = Command::Correlate;
    else cfg.command = Command::Synth;
    if (!algorithm_filter.empty()) cfg.algorithm_filter = parse_algorithm(CLI::detail::to_lower(algorithm_filter));
    return run(cfg, out, err);
}

} // namespace hretan::cli
