// Command-line front end for the whole pipeline.
//
//   sentiforge ingest news|reddit|klines   fetch and persist raw records
//   sentiforge score news|reddit           sentiment tables from raw CSVs
//   sentiforge fuse                        merge everything into merged.csv
//   sentiforge experiment list|run         the experiment matrix
//   sentiforge report                      rebuild summary/plots from results
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 training
// divergence.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sentiforge/csv.hpp"
#include "sentiforge/fuse.hpp"
#include "sentiforge/ingest.hpp"
#include "sentiforge/pipeline.hpp"
#include "sentiforge/runner.hpp"
#include "sentiforge/time.hpp"

namespace fs = std::filesystem;
using namespace sentiforge;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value ? std::string(value) : fallback;
}

struct ScorerPaths {
    std::string data_dir = env_or("SENTIFORGE_DATA_DIR", "data");
    std::string external_store;  // optional

    void add_options(CLI::App* app) {
        app->add_option("--data-dir", data_dir,
                        "directory holding the lexicon assets")
            ->capture_default_str();
        app->add_option("--external", external_store,
                        "external-score CSV (key,value) for the flair channel");
    }

    pipeline::Scorers build(std::optional<sentiment::VaderScorer>& vader,
                            std::optional<sentiment::PatternScorer>& pattern,
                            std::optional<sentiment::ExternalScoreStore>& store) const {
        vader.emplace(data_dir + "/vader_lexicon.txt",
                      data_dir + "/vader_emoji_lexicon.txt");
        pattern.emplace(data_dir + "/pattern_lexicon.csv",
                        data_dir + "/pattern_modifiers.txt");
        pipeline::Scorers scorers;
        scorers.vader = &*vader;
        scorers.pattern = &*pattern;
        if (!external_store.empty()) {
            store.emplace(sentiment::ExternalScoreStore::load(external_store, "flair"));
            scorers.external = &*store;
        }
        return scorers;
    }
};

ingest::FetchOptions fetch_options_from(const std::string& fixtures,
                                        double min_interval_ms) {
    ingest::FetchOptions options = ingest::options_from_env();
    if (!fixtures.empty()) options.fixtures_dir = fixtures;
    options.retry.min_request_interval =
        std::chrono::milliseconds(static_cast<long>(min_interval_ms));
    return options;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"cryptocurrency sentiment and price forecasting pipeline"};
    app.require_subcommand(1);

    // ---------------------------------------------------------- ingest ----
    auto* ingest_cmd = app.add_subcommand("ingest", "fetch raw source data");
    ingest_cmd->require_subcommand(1);
    ingest_cmd->fallthrough();

    std::string fixtures = env_or("SENTIFORGE_FIXTURES_DIR", "");
    double pace_ms = 1000.0;
    ingest_cmd->add_option("--fixtures", fixtures,
                           "read from a local fixture directory instead of HTTP");
    ingest_cmd->add_option("--pace-ms", pace_ms,
                           "minimum milliseconds between requests per host")
        ->capture_default_str();

    auto* news_cmd = ingest_cmd->add_subcommand("news", "fetch news articles");
    std::string news_query = "bitcoin cryptocurrency";
    std::string news_from, news_to, news_out;
    std::string news_base;
    news_cmd->add_option("--query", news_query, "search keywords")
        ->capture_default_str();
    news_cmd->add_option("--from", news_from, "first day, YYYY-MM-DD")->required();
    news_cmd->add_option("--to", news_to, "last day inclusive, YYYY-MM-DD")
        ->required();
    news_cmd->add_option("--out", news_out, "output CSV path")->required();
    news_cmd->add_option("--base-url", news_base, "news search host override");

    auto* reddit_cmd = ingest_cmd->add_subcommand("reddit", "fetch submissions");
    std::string subreddit = "Bitcoin";
    std::string reddit_keyword = "Bitcoin";
    std::string reddit_from, reddit_to, reddit_out;
    reddit_cmd->add_option("--subreddit", subreddit, "")->capture_default_str();
    reddit_cmd->add_option("--keyword", reddit_keyword, "")->capture_default_str();
    reddit_cmd->add_option("--from", reddit_from, "range start (ISO-8601)")
        ->required();
    reddit_cmd->add_option("--to", reddit_to, "range end, exclusive")->required();
    reddit_cmd->add_option("--out", reddit_out, "output CSV path")->required();

    auto* klines_cmd = ingest_cmd->add_subcommand("klines", "fetch hourly candles");
    std::string pair_name = "BTCUSDT";
    std::string klines_from, klines_to, klines_out, gaps_out;
    klines_cmd->add_option("--pair", pair_name, "BTCUSDT | LTCUSD | ETHUSD")
        ->capture_default_str();
    klines_cmd->add_option("--from", klines_from, "range start (ISO-8601)")
        ->required();
    klines_cmd->add_option("--to", klines_to, "range end, exclusive")->required();
    klines_cmd->add_option("--out", klines_out, "output CSV path")->required();
    klines_cmd->add_option("--gaps", gaps_out, "write missing hours to this file");

    // ----------------------------------------------------------- score ----
    auto* score_cmd = app.add_subcommand("score", "compute sentiment tables");
    score_cmd->require_subcommand(1);
    ScorerPaths news_scorers, reddit_scorers;

    auto* score_news = score_cmd->add_subcommand("news", "daily news sentiment");
    std::string score_news_in, score_news_out;
    score_news->add_option("--in", score_news_in, "news CSV from ingest")
        ->required();
    score_news->add_option("--out", score_news_out, "daily sentiment CSV")
        ->required();
    news_scorers.add_options(score_news);

    auto* score_reddit =
        score_cmd->add_subcommand("reddit", "hourly reddit sentiment");
    std::string score_reddit_in, score_reddit_out;
    score_reddit->add_option("--in", score_reddit_in, "reddit CSV from ingest")
        ->required();
    score_reddit->add_option("--out", score_reddit_out, "hourly sentiment CSV")
        ->required();
    reddit_scorers.add_options(score_reddit);

    // ------------------------------------------------------------ fuse ----
    auto* fuse_cmd = app.add_subcommand("fuse", "merge into the feature table");
    std::string gnews_path, reddit_path, btc_path, ltc_path, eth_path;
    std::string merged_out, fills_out;
    fuse_cmd->add_option("--gnews", gnews_path, "daily news sentiment CSV")
        ->required();
    fuse_cmd->add_option("--reddit", reddit_path, "hourly reddit sentiment CSV")
        ->required();
    fuse_cmd->add_option("--btc", btc_path, "BTCUSDT ohlcv CSV")->required();
    fuse_cmd->add_option("--ltc", ltc_path, "LTCUSD ohlcv CSV")->required();
    fuse_cmd->add_option("--eth", eth_path, "ETHUSD ohlcv CSV")->required();
    fuse_cmd->add_option("--out", merged_out, "merged.csv path")->required();
    fuse_cmd->add_option("--fills", fills_out, "fill report path");

    // ------------------------------------------------------ experiment ----
    auto* experiment_cmd = app.add_subcommand("experiment", "experiment matrix");
    experiment_cmd->require_subcommand(1);

    auto* list_cmd = experiment_cmd->add_subcommand("list", "show the 17 configs");

    auto* run_cmd = experiment_cmd->add_subcommand("run", "run experiments");
    std::string data_path, out_dir, config_path;
    int run_id = 0;
    bool run_all = false;
    int parallel = 1;
    runner::RunOverrides overrides;
    overrides.seed = static_cast<std::uint64_t>(
        std::stoull(env_or("SENTIFORGE_SEED", "42")));
    std::optional<long> opt_lookback, opt_epochs, opt_stride, opt_max_rows;
    double train_fraction = 0.8;
    std::optional<double> opt_lr;

    run_cmd->add_option("--data", data_path, "merged.csv input")->required();
    run_cmd->add_option("--out", out_dir, "report output directory")->required();
    run_cmd->add_option("--id", run_id, "experiment id (1..17)");
    run_cmd->add_flag("--all", run_all, "run all 17 experiments");
    run_cmd->add_option("--config", config_path,
                        "key-value config file overriding the built-ins");
    run_cmd->add_option("--lookback-hours", opt_lookback,
                        "desk-scale lookback override");
    run_cmd->add_option("--epochs", opt_epochs, "training epoch override");
    run_cmd->add_option("--stride", opt_stride, "window stride (default 1)");
    run_cmd->add_option("--max-rows", opt_max_rows, "truncate the merged table");
    run_cmd->add_option("--seed", overrides.seed, "RNG seed")
        ->capture_default_str();
    run_cmd->add_option("--train-fraction", train_fraction,
                        "chronological train share")
        ->capture_default_str();
    run_cmd->add_option("--learning-rate", opt_lr, "Adam learning rate");
    run_cmd->add_option("--parallel", parallel,
                        "run independent experiments on N threads")
        ->capture_default_str();
    bool save_models = false;
    run_cmd->add_flag("--save-models", save_models,
                      "write trained parameters (SFNN1 + JSON sidecar)");

    // ---------------------------------------------------------- report ----
    auto* report_cmd =
        app.add_subcommand("report", "rebuild summary and plots from a results dir");
    std::string results_dir;
    report_cmd->add_option("--results", results_dir, "directory written by run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    // ------------------------------------------------------------------ //

    if (news_cmd->parsed()) {
        auto options = fetch_options_from(fixtures, pace_ms);
        if (!news_base.empty()) options.news_base_url = news_base;
        WarningTally warnings;
        options.warnings = &warnings;
        std::vector<NewsArticle> articles;
        const std::int64_t from = utc::parse_day(news_from);
        const std::int64_t to = utc::parse_day(news_to);
        if (from > to) throw ConfigError("--from is after --to");
        for (std::int64_t day = from; day <= to; ++day) {
            auto batch = ingest::fetch_news(news_query, day, options);
            articles.insert(articles.end(), batch.begin(), batch.end());
        }
        save_news(articles, news_out);
        std::cout << "wrote " << articles.size() << " articles to " << news_out
                  << " (" << warnings.count() << " skipped)\n";
        return 0;
    }

    if (reddit_cmd->parsed()) {
        auto options = fetch_options_from(fixtures, pace_ms);
        WarningTally warnings;
        options.warnings = &warnings;
        const auto posts = ingest::fetch_reddit_posts(
            subreddit, reddit_keyword, utc::parse_timestamp(reddit_from),
            utc::parse_timestamp(reddit_to), options);
        save_reddit(posts, reddit_out);
        std::cout << "wrote " << posts.size() << " posts to " << reddit_out << " ("
                  << warnings.count() << " skipped)\n";
        return 0;
    }

    if (klines_cmd->parsed()) {
        auto options = fetch_options_from(fixtures, pace_ms);
        const auto result = ingest::fetch_klines(
            pair_from_string(pair_name), utc::parse_timestamp(klines_from),
            utc::parse_timestamp(klines_to), options);
        save_ohlcv(result.bars, klines_out);
        if (!gaps_out.empty()) {
            csv::Table gaps;
            gaps.header = {"missing_hour"};
            for (std::int64_t hour : result.gap_hours) {
                gaps.rows.push_back({utc::format_timestamp(hour)});
            }
            csv::write_file(gaps_out, gaps);
        }
        std::cout << "wrote " << result.bars.size() << " bars to " << klines_out
                  << " (" << result.gap_hours.size() << " gap hours)\n";
        return 0;
    }

    if (score_news->parsed()) {
        std::optional<sentiment::VaderScorer> vader;
        std::optional<sentiment::PatternScorer> pattern;
        std::optional<sentiment::ExternalScoreStore> store;
        const auto scorers = news_scorers.build(vader, pattern, store);
        WarningTally warnings;
        const auto daily = pipeline::score_news_daily(load_news(score_news_in),
                                                      scorers, &warnings);
        pipeline::save_daily_sentiment(daily, score_news_out);
        std::cout << "wrote " << daily.size() << " daily rows to " << score_news_out
                  << " (" << warnings.count() << " empty days)\n";
        if (store) {
            std::cout << store->missing_key_warnings()
                      << " external-score lookups missed\n";
        }
        return 0;
    }

    if (score_reddit->parsed()) {
        std::optional<sentiment::VaderScorer> vader;
        std::optional<sentiment::PatternScorer> pattern;
        std::optional<sentiment::ExternalScoreStore> store;
        const auto scorers = reddit_scorers.build(vader, pattern, store);
        const auto hourly =
            pipeline::score_reddit_hourly(load_reddit(score_reddit_in), scorers);
        pipeline::save_hourly_sentiment(hourly, score_reddit_out);
        std::cout << "wrote " << hourly.size() << " hourly rows to "
                  << score_reddit_out << "\n";
        return 0;
    }

    if (fuse_cmd->parsed()) {
        const auto merged = fuse::merge_all(
            fuse::expand_daily_to_hourly(pipeline::load_daily_sentiment(gnews_path)),
            pipeline::load_hourly_sentiment(reddit_path), load_ohlcv(btc_path),
            load_ohlcv(ltc_path), load_ohlcv(eth_path));
        fuse::save_merged(merged.rows, merged_out);
        if (!fills_out.empty()) fuse::save_fill_report(merged.fills, fills_out);
        std::cout << "wrote " << merged.rows.size() << " hourly rows to "
                  << merged_out << " (" << merged.fills.size() << " fills)\n";
        return 0;
    }

    if (list_cmd->parsed()) {
        const auto& reference = runner::reference_metrics();
        std::cout << "id  architecture  lookback  units  features  notes   "
                  << "reported test RMSE (" << runner::kReferenceMetricsCaveat
                  << ")\n";
        for (const auto& config : runner::builtin_matrix()) {
            int marks = 0;
            for (bool b : config.mask.flags) marks += b;
            std::string notes;
            for (std::size_t i = 0; i < config.notes.size(); ++i) {
                if (i) notes += ",";
                notes += std::to_string(config.notes[i]);
            }
            std::printf("%2d  %-12s  %8d  %5d  %8d  %-6s  %g\n", config.id,
                        runner::to_string(config.architecture).c_str(),
                        config.lookback_days, config.units, marks, notes.c_str(),
                        reference.at(config.id).test_rmse);
        }
        return 0;
    }

    if (run_cmd->parsed()) {
        if (opt_lookback) overrides.lookback_hours = *opt_lookback;
        if (opt_epochs) overrides.epochs = static_cast<int>(*opt_epochs);
        if (opt_stride) overrides.stride = *opt_stride;
        if (opt_max_rows) overrides.max_rows = *opt_max_rows;
        if (opt_lr) overrides.learning_rate = *opt_lr;
        overrides.train_fraction = train_fraction;
        if (save_models) overrides.save_model_dir = out_dir + "/models";

        std::vector<runner::ExperimentConfig> configs;
        if (!config_path.empty()) {
            configs.push_back(runner::load_config_file(config_path));
        } else if (run_all) {
            configs = runner::builtin_matrix();
        } else if (run_id >= 1 && run_id <= 17) {
            configs.push_back(runner::builtin_matrix()[run_id - 1]);
        } else {
            throw ConfigError("pass --id 1..17, --all, or --config FILE");
        }

        const auto table = fuse::load_merged(data_path);
        const auto results = runner::run_many(configs, table, overrides, parallel);
        const std::string summary = runner::emit_report(results, out_dir);
        for (const auto& result : results) {
            std::printf(
                "experiment %2d: train RMSE %10.4f  test RMSE %10.4f  "
                "train MAE %10.4f  test MAE %10.4f  (%.1fs)\n",
                result.config_id, result.metrics.train_rmse,
                result.metrics.test_rmse, result.metrics.train_mae,
                result.metrics.test_mae, result.wall_seconds);
        }
        std::cout << "summary: " << summary << "\n";
        return 0;
    }

    if (report_cmd->parsed()) {
        // Rebuild results from the per-experiment dumps.
        std::vector<runner::ExperimentResult> results;
        for (const auto& entry : fs::directory_iterator(results_dir)) {
            if (!entry.is_directory()) continue;
            const std::string name = entry.path().filename().string();
            if (name.rfind("experiment_", 0) != 0) continue;
            runner::ExperimentResult result;
            result.config_id = std::stoi(name.substr(11));

            std::ifstream meta_in(entry.path() / "meta.json");
            if (meta_in) {
                const auto meta = nlohmann::json::parse(meta_in);
                result.seed = meta.value("seed", std::uint64_t{0});
                result.architecture_label = meta.value("architecture", "");
                result.wall_seconds = meta.value("wall_seconds", 0.0);
                result.epoch_loss = meta.value("epoch_loss", std::vector<double>{});
            }
            const csv::Table preds =
                csv::read_file((entry.path() / "predictions.csv").string());
            for (const csv::Row& row : preds.rows) {
                runner::PredictionPoint point;
                point.timestamp = utc::parse_timestamp(row.at(0));
                point.actual = csv::parse_double(row.at(1));
                point.predicted = csv::parse_double(row.at(2));
                if (row.at(3) == "train") result.train_predictions.push_back(point);
                else result.test_predictions.push_back(point);
            }
            auto metrics_of = [](const std::vector<runner::PredictionPoint>& pts) {
                Eigen::VectorXd pred(pts.size()), actual(pts.size());
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    pred[static_cast<Eigen::Index>(i)] = pts[i].predicted;
                    actual[static_cast<Eigen::Index>(i)] = pts[i].actual;
                }
                return std::make_pair(nn::rmse<double>(pred, actual),
                                      nn::mae<double>(pred, actual));
            };
            std::tie(result.metrics.train_rmse, result.metrics.train_mae) =
                metrics_of(result.train_predictions);
            std::tie(result.metrics.test_rmse, result.metrics.test_mae) =
                metrics_of(result.test_predictions);
            results.push_back(std::move(result));
        }
        if (results.empty()) {
            throw DataError("no experiment_* directories under " + results_dir);
        }
        std::cout << "rebuilt " << runner::emit_report(results, results_dir)
                  << " from " << results.size() << " experiments\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const TrainingDiverged& e) {
        std::cerr << "training diverged: " << e.what() << "\n";
        return 4;
    } catch (const RetryableError& e) {
        std::cerr << "transient failure: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
