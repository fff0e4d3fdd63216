// scp: secondary carrier prediction pipeline driver.
//
// Subcommands: scenario | dataset | import | sample | train | evaluate |
// roc-plot | events. All randomness flows from --seed; identical
// configuration and seed reproduce identical output files byte for byte.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scp/pipeline.hpp"
#include "scp/svg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_config = true) {
    if (with_config) {
        cmd->add_option("--config", opts.config_path, "pipeline config JSON");
        cmd->add_option("--preset", opts.preset, "preset name (d1, d2a-d2d, d3a-d3c)");
    }
    cmd->add_option("--seed", opts.seed, "root seed (default 0)");
    cmd->add_option("--out", opts.out_dir, "output directory (default '.')");
}

scp::PipelineConfig resolve_config(const CommonOpts& opts) {
    scp::PipelineConfig cfg;
    if (!opts.config_path.empty() && !opts.preset.empty())
        throw scp::ConfigError("--config and --preset are mutually exclusive");
    if (!opts.preset.empty()) {
        cfg = scp::pipeline_preset(opts.preset);
    } else if (!opts.config_path.empty()) {
        cfg = scp::pipeline_config_from_json(scp::load_json_file(opts.config_path));
    }
    if (opts.seed) cfg.seed = *opts.seed;
    cfg.scenario.seed = cfg.seed;
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw scp::DataError("cannot create output directory: " + dir);
}

std::string hash_of(const scp::PipelineConfig& cfg) {
    return scp::config_hash_hex(scp::to_json(cfg));
}

void write_roc_csv(const scp::RocCurve& curve, const std::string& path, int fold,
                   const std::string& config_hash, std::uint64_t seed) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw scp::DataError("cannot open for writing: " + path);
    f << "# config_hash=" << config_hash << " seed=" << seed << "\n";
    f << "# fold=" << fold << " auroc=" << scp::format_double(curve.auroc) << "\n";
    f << "fpr,tpr,threshold\n";
    for (const auto& p : curve.points)
        f << scp::format_double(p.fpr) << "," << scp::format_double(p.tpr) << ","
          << scp::format_double(p.threshold) << "\n";
}

scp::RocCurve read_roc_csv(const std::string& path, std::string* label_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw scp::DataError("cannot open: " + path);
    scp::RocCurve curve;
    std::string line;
    bool have_header = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto fold_pos = line.find("fold=");
            if (fold_pos != std::string::npos && label_out)
                *label_out = line.substr(fold_pos);
            const auto auroc_pos = line.find("auroc=");
            if (auroc_pos != std::string::npos)
                curve.auroc = scp::parse_double(line.substr(auroc_pos + 6));
            continue;
        }
        if (!have_header) {
            have_header = true;
            continue;
        }
        const auto fields = scp::detail::split_csv_line(line);
        if (fields.size() != 3) throw scp::DataError(path + ": expected 3 fields per ROC row");
        scp::RocPoint p;
        p.fpr = scp::parse_double(fields[0]);
        p.tpr = scp::parse_double(fields[1]);
        p.threshold = fields[2] == "inf" ? std::numeric_limits<double>::infinity()
                                         : scp::parse_double(fields[2]);
        curve.points.push_back(p);
    }
    if (curve.points.empty()) throw scp::DataError(path + ": no ROC points");
    return curve;
}

void write_mean_roc_csv(const scp::MeanRoc& mean, const std::string& path,
                        const std::string& config_hash, std::uint64_t seed) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw scp::DataError("cannot open for writing: " + path);
    f << "# config_hash=" << config_hash << " seed=" << seed << "\n";
    f << "# mean auroc=" << scp::format_double(mean.auroc_mean)
      << " std=" << scp::format_double(mean.auroc_std) << "\n";
    f << "fpr,tpr\n";
    for (const auto& p : mean.grid)
        f << scp::format_double(p.fpr) << "," << scp::format_double(p.tpr) << "\n";
}

void render_cv_svg(const scp::CrossValidationResult& cv, const std::string& path,
                   const std::string& title, const std::string& config_hash,
                   std::uint64_t seed) {
    scp::RocSvgPlot plot;
    char label[64];
    for (std::size_t i = 0; i < cv.fold_curves.size(); ++i) {
        std::snprintf(label, sizeof(label), "fold %zu (AUROC=%.3f)", i,
                      cv.fold_curves[i].auroc);
        plot.add_curve(cv.fold_curves[i], label);
    }
    std::snprintf(label, sizeof(label), "mean (AUROC=%.3f)", cv.mean.auroc_mean);
    plot.add_mean(cv.mean, label);
    plot.render_file(path, title,
                     {"config_hash=" + config_hash + " seed=" + std::to_string(seed)});
}

scp::Json evaluation_summary(const scp::CrossValidationResult& cv,
                             const scp::PipelineConfig& cfg, const std::string& model_name) {
    scp::Json summary;
    summary["format"] = "scp-summary";
    summary["version"] = 1;
    summary["model"] = model_name;
    summary["k"] = cfg.cv_folds;
    summary["seed"] = cfg.seed;
    summary["config_hash"] = hash_of(cfg);
    scp::Json folds = scp::Json::array();
    for (const auto& c : cv.fold_curves) folds.push_back(c.auroc);
    summary["fold_aurocs"] = std::move(folds);
    summary["auroc_mean"] = cv.mean.auroc_mean;
    summary["auroc_std"] = cv.mean.auroc_std;
    summary["config"] = scp::to_json(cfg);
    return summary;
}

// Runs one cross-validation and writes roc_<tag>_fold*.csv, roc_<tag>_mean.csv,
// summary_<tag>.json, and optionally roc_<tag>.svg.
void evaluate_and_write(const scp::Dataset& ds, const scp::PipelineConfig& cfg,
                        const scp::ModelSpec& spec, const std::string& tag, bool svg,
                        const std::string& out_dir) {
    const auto cv = scp::cross_validate(ds, spec, cfg.cv_folds, cfg.seed, cfg.sampling);
    const std::string hash = hash_of(cfg);
    for (std::size_t i = 0; i < cv.fold_curves.size(); ++i)
        write_roc_csv(cv.fold_curves[i],
                      out_dir + "/roc_" + tag + "_fold" + std::to_string(i) + ".csv",
                      static_cast<int>(i), hash, cfg.seed);
    write_mean_roc_csv(cv.mean, out_dir + "/roc_" + tag + "_mean.csv", hash, cfg.seed);
    scp::Json summary = evaluation_summary(cv, cfg, tag);
    scp::save_file_or_throw(out_dir + "/summary_" + tag + ".json", summary);
    if (svg)
        render_cv_svg(cv, out_dir + "/roc_" + tag + ".svg", "ROC (" + tag + ")", hash, cfg.seed);
    std::cout << tag << ": mean AUROC " << scp::format_double(cv.mean.auroc_mean) << " (std "
              << scp::format_double(cv.mean.auroc_std) << ") over " << cfg.cv_folds
              << " folds\n";
}

void print_class_report(const scp::ClassCounts& counts) {
    std::cout << "labels: ones=" << counts.ones << " zeros=" << counts.zeros << " ratio=";
    if (counts.zeros == 0)
        std::cout << "inf (no zero-labeled rows)";
    else
        std::cout << scp::format_double(counts.ratio());
    std::cout << "\n";
    if (counts.ones == 0)
        std::cout << "warning: all labels are 0; lower the label threshold "
                     "(labeling.alpha_db) or densify micro stations\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secondary carrier prediction pipeline"};
    app.require_subcommand(1);

    // scenario
    CommonOpts scenario_opts;
    auto* cmd_scenario = app.add_subcommand("scenario", "generate a deployment scenario JSON");
    add_common(cmd_scenario, scenario_opts);

    // dataset
    CommonOpts dataset_opts;
    std::string dataset_scenario_path;
    auto* cmd_dataset =
        app.add_subcommand("dataset", "build a labeled feature dataset from a scenario");
    cmd_dataset->add_option("--scenario", dataset_scenario_path, "scenario JSON path")
        ->required();
    add_common(cmd_dataset, dataset_opts);

    // import
    CommonOpts import_opts;
    std::string import_in;
    auto* cmd_import =
        app.add_subcommand("import", "import an external channel-measurement CSV");
    cmd_import->add_option("--in", import_in, "measurement CSV path")->required();
    add_common(cmd_import, import_opts);

    // sample
    CommonOpts sample_opts;
    std::string sample_in;
    auto* cmd_sample = app.add_subcommand("sample", "hybrid-balance a dataset CSV");
    cmd_sample->add_option("--in", sample_in, "dataset CSV path")->required();
    add_common(cmd_sample, sample_opts);

    // train
    CommonOpts train_opts;
    std::string train_in;
    int train_threads = 1;
    auto* cmd_train = app.add_subcommand("train", "fit a model on a dataset CSV");
    cmd_train->add_option("--in", train_in, "dataset CSV path")->required();
    cmd_train->add_option("--threads", train_threads, "worker threads for tree fitting");
    add_common(cmd_train, train_opts);

    // evaluate
    CommonOpts eval_opts;
    std::string eval_in;
    bool eval_svg = false;
    bool eval_map_baseline = false;
    int eval_threads = 1;
    auto* cmd_evaluate =
        app.add_subcommand("evaluate", "k-fold cross-validated ROC evaluation");
    cmd_evaluate->add_option("--in", eval_in, "dataset CSV path")->required();
    cmd_evaluate->add_flag("--svg", eval_svg, "also render an SVG ROC plot");
    cmd_evaluate->add_flag("--map-baseline", eval_map_baseline,
                           "also evaluate the univariate MAP baseline");
    cmd_evaluate->add_option("--threads", eval_threads, "worker threads for tree fitting");
    add_common(cmd_evaluate, eval_opts);

    // roc-plot
    std::vector<std::string> plot_inputs;
    std::string plot_out = "roc.svg";
    std::string plot_title = "ROC";
    auto* cmd_plot = app.add_subcommand("roc-plot", "render ROC CSVs into an SVG");
    cmd_plot->add_option("--in", plot_inputs, "ROC CSV paths")->required();
    cmd_plot->add_option("--out", plot_out, "output SVG path");
    cmd_plot->add_option("--title", plot_title, "plot title");

    // events
    std::string events_trace;
    scp::EventConfig event_cfg;
    auto* cmd_events =
        app.add_subcommand("events", "evaluate A1-A5 events and the A5+TTT trigger");
    cmd_events->add_option("--trace", events_trace, "trace CSV path")->required();
    cmd_events->add_option("--gamma", event_cfg.gamma_dbm, "A1/A2/A4 threshold (dBm)");
    cmd_events->add_option("--delta", event_cfg.delta_db, "A3 offset (dB)");
    cmd_events->add_option("--gamma1", event_cfg.gamma1_dbm, "A5 SCell threshold (dBm)");
    cmd_events->add_option("--gamma2", event_cfg.gamma2_dbm, "A5 PCell threshold (dBm)");
    cmd_events->add_option("--ttt", event_cfg.ttt_s, "time-to-trigger (s)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (cmd_scenario->parsed()) {
            const auto cfg = resolve_config(scenario_opts);
            const scp::Scenario sc = scp::generate_scenario(cfg.scenario);
            ensure_out_dir(scenario_opts.out_dir);
            scp::Json doc = scp::to_json(sc);
            doc["config_hash"] = hash_of(cfg);
            const std::string path = scenario_opts.out_dir + "/scenario.json";
            scp::save_file_or_throw(path, doc);
            std::cout << "wrote " << path << " (" << sc.base_stations.size() << " BSs, "
                      << sc.ues.size() << " UEs)\n";
        } else if (cmd_dataset->parsed()) {
            const auto cfg = resolve_config(dataset_opts);
            const scp::Scenario sc =
                scp::scenario_from_json(scp::load_json_file(dataset_scenario_path));
            const auto result = scp::build_dataset(sc, cfg);
            ensure_out_dir(dataset_opts.out_dir);
            const std::string path = dataset_opts.out_dir + "/dataset.csv";
            scp::write_dataset_csv(result.dataset, path,
                                   {"config_hash=" + hash_of(cfg),
                                    "seed=" + std::to_string(sc.seed),
                                    "qualifying_ues=" + std::to_string(result.n_qualifying) +
                                        "/" + std::to_string(result.n_ues_total)});
            std::cout << "wrote " << path << " (" << result.dataset.size() << " rows)\n";
            print_class_report(result.class_counts());
        } else if (cmd_import->parsed()) {
            scp::ImportConfig icfg;
            if (!import_opts.config_path.empty()) {
                const scp::Json doc = scp::load_json_file(import_opts.config_path);
                scp::require_keys(doc,
                                  {"version", "n_antennas", "n_subcarriers", "radius",
                                   "micro_positions", "receiver_position", "features",
                                   "bounds", "features_db"},
                                  "import config");
                if (doc.value("version", 1) != 1)
                    throw scp::ConfigError("import config: unsupported version");
                if (doc.contains("n_antennas")) icfg.n_antennas = doc.at("n_antennas").get<int>();
                if (doc.contains("n_subcarriers"))
                    icfg.n_subcarriers = doc.at("n_subcarriers").get<int>();
                if (doc.contains("radius")) icfg.rule.radius = doc.at("radius").get<double>();
                if (doc.contains("micro_positions"))
                    for (const scp::Json& p : doc.at("micro_positions"))
                        icfg.rule.micro_positions_normalized.push_back(
                            {p.at(0).get<double>(), p.at(1).get<double>()});
                if (doc.contains("receiver_position")) {
                    const scp::Json& p = doc.at("receiver_position");
                    icfg.receiver_position = {p.at(0).get<double>(), p.at(1).get<double>()};
                }
                if (doc.contains("features")) {
                    icfg.features.enabled.clear();
                    for (const scp::Json& f : doc.at("features"))
                        icfg.features.enabled.push_back(
                            scp::feature_from_name(f.get<std::string>()));
                }
                if (doc.contains("bounds")) {
                    const scp::Json& b = doc.at("bounds");
                    icfg.bounds = scp::GeoBounds{
                        b.at("x_min").get<double>(), b.at("x_max").get<double>(),
                        b.at("y_min").get<double>(), b.at("y_max").get<double>()};
                }
                if (doc.contains("features_db"))
                    icfg.features_db = doc.at("features_db").get<bool>();
            }
            std::ifstream f(import_in, std::ios::binary);
            if (!f) throw scp::DataError("cannot open: " + import_in);
            const scp::Dataset ds = scp::import_cfr_csv(f, icfg, import_in);
            ensure_out_dir(import_opts.out_dir);
            const std::string path = import_opts.out_dir + "/dataset.csv";
            scp::write_dataset_csv(ds, path, {"imported_from=" + import_in});
            std::cout << "wrote " << path << " (" << ds.size() << " rows)\n";
            print_class_report(ds.class_counts());
        } else if (cmd_sample->parsed()) {
            const auto cfg = resolve_config(sample_opts);
            scp::Dataset ds = scp::read_dataset_csv_file(sample_in);
            ds.tag_rows();
            const scp::Dataset balanced = scp::hybrid_sample(ds, cfg.seed, cfg.sampling.smote);
            ensure_out_dir(sample_opts.out_dir);
            const std::string path = sample_opts.out_dir + "/dataset_balanced.csv";
            scp::write_dataset_csv(balanced, path,
                                   {"config_hash=" + hash_of(cfg),
                                    "seed=" + std::to_string(cfg.seed)});
            std::cout << "wrote " << path << " (" << balanced.size() << " rows)\n";
            print_class_report(balanced.class_counts());
        } else if (cmd_train->parsed()) {
            const auto cfg = resolve_config(train_opts);
            const scp::Dataset ds = scp::read_dataset_csv_file(train_in);
            ensure_out_dir(train_opts.out_dir);
            scp::Json doc;
            std::string path;
            if (cfg.model.kind == scp::ModelSpec::Kind::kForest) {
                scp::ForestHyperparams hp = cfg.model.forest;
                hp.n_threads = train_threads;
                const auto model = scp::fit_forest(ds, hp, cfg.seed);
                doc = scp::to_json(model);
                path = train_opts.out_dir + "/model_forest.json";
            } else {
                const auto col = static_cast<std::size_t>(cfg.model.map_feature_index);
                if (col >= ds.dim())
                    throw scp::ConfigError("train: MAP feature index out of range");
                std::vector<double> xs;
                for (const auto& row : ds.rows)
                    xs.push_back(scp::detail::map_feature_value(row[col],
                                                                cfg.model.map_feature_db));
                doc = scp::to_json(scp::fit_map(xs, ds.labels));
                path = train_opts.out_dir + "/model_map.json";
            }
            doc["config_hash"] = hash_of(cfg);
            scp::save_file_or_throw(path, doc);
            std::cout << "wrote " << path << "\n";
        } else if (cmd_evaluate->parsed()) {
            auto cfg = resolve_config(eval_opts);
            cfg.model.forest.n_threads = eval_threads;
            const scp::Dataset ds = scp::read_dataset_csv_file(eval_in);
            ensure_out_dir(eval_opts.out_dir);
            const std::string main_tag =
                cfg.model.kind == scp::ModelSpec::Kind::kForest ? "forest" : "map";
            evaluate_and_write(ds, cfg, cfg.model, main_tag, eval_svg, eval_opts.out_dir);
            if (eval_map_baseline && cfg.model.kind != scp::ModelSpec::Kind::kMap) {
                scp::ModelSpec map_spec = cfg.model;
                map_spec.kind = scp::ModelSpec::Kind::kMap;
                evaluate_and_write(ds, cfg, map_spec, "map", eval_svg, eval_opts.out_dir);
            }
        } else if (cmd_plot->parsed()) {
            scp::RocSvgPlot plot;
            for (const auto& path : plot_inputs) {
                std::string label = fs::path(path).stem().string();
                scp::RocCurve curve = read_roc_csv(path, &label);
                plot.add_curve(curve, label);
            }
            plot.render_file(plot_out, plot_title);
            std::cout << "wrote " << plot_out << "\n";
        } else if (cmd_events->parsed()) {
            std::ifstream f(events_trace, std::ios::binary);
            if (!f) throw scp::DataError("cannot open: " + events_trace);
            const scp::RsrpTrace trace = scp::read_rsrp_trace_csv(f, events_trace);
            const auto occurrences = scp::evaluate_events(trace, event_cfg);
            for (const auto& occ : occurrences) {
                std::cout << scp::to_string(occ.kind) << " t_start="
                          << scp::format_double(occ.t_start)
                          << " t_end=" << scp::format_double(occ.t_end)
                          << (occ.open_ended ? " (open)" : "") << "\n";
            }
            const auto trigger = scp::handover_trigger(trace, event_cfg);
            if (trigger)
                std::cout << "handover trigger at t=" << scp::format_double(*trigger) << "\n";
            else
                std::cout << "no handover trigger (A5 never held for TTT)\n";
        }
    } catch (const scp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const scp::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
