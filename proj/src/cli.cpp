#include "volharvest/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "volharvest/analytics.hpp"
#include "volharvest/backtest.hpp"
#include "volharvest/error.hpp"
#include "volharvest/price_io.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest::cli {

namespace {

using Record = nlohmann::ordered_json;

enum class Format { table, delimited, structured };

struct Options {
    std::string formula;
    std::string format_name = "table";
    std::string output;
    std::uint64_t seed = 42;
    int workers = 0;
    std::int64_t paths = 10000;
    std::int64_t steps = 250;

    double p = 0.5;
    double mu = 0.98;
    double r = 0.04;
    double rho = 0.0;
    double rho2 = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
    double sigma = 0.02;
    double sigma1 = 0.02;
    double sigma2 = 0.02;
    double theta = 0.5;
    int rounds = 2;
    double swing = 0.1;
    double half_spread = 0.0;
    int days_per_year = 250;
    double daily_vol = 0.0075;

    std::string market = "binomial";
    std::string mode = "ensemble";
    std::vector<std::string> strategies;
    std::vector<std::int64_t> grid{250, 1000, 4000};
    std::vector<std::string> inputs;
    std::string assets;
    std::string dump;
    std::string histogram;

    // Set after parsing from option counts.
    bool has_mu = false;
    bool has_sigma = false;
    bool has_half_spread = false;
    bool has_steps = false;

    Format format() const {
        if (format_name == "delimited") return Format::delimited;
        if (format_name == "structured-record") return Format::structured;
        return Format::table;
    }
};

std::string fmt_number(double v, int digits = 10) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string leaf_text(const Record& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "";
    return j.dump();
}

void flatten(const Record& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
    } else {
        rows.emplace_back(prefix, leaf_text(j));
    }
}

void print_table(const Record& j, std::ostream& out, int depth = 0) {
    const std::string pad(std::size_t(depth) * 2, ' ');
    auto scalar = [](const Record& v) { return v.is_number_float() ? fmt_number(v.get<double>()) : leaf_text(v); };
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_structured()) {
                out << pad << it.key() << ":\n";
                print_table(it.value(), out, depth + 1);
            } else {
                out << pad << it.key() << ": " << scalar(it.value()) << '\n';
            }
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            out << pad << "[" << i << "]\n";
            print_table(j[i], out, depth + 1);
        }
    } else {
        out << pad << scalar(j) << '\n';
    }
}

using TablePrinter = std::function<void(const Record&, std::ostream&)>;

void emit(const Record& record, const Options& opt, std::ostream& out, const TablePrinter& table = {}) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!opt.output.empty()) {
        file.open(opt.output);
        if (!file) throw DataError("cannot write '" + opt.output + "'");
        sink = &file;
    }
    switch (opt.format()) {
        case Format::structured: *sink << record.dump(2) << '\n'; break;
        case Format::delimited: {
            std::vector<std::pair<std::string, std::string>> rows;
            flatten(record, "", rows);
            *sink << "key,value\n";
            for (const auto& [k, v] : rows) *sink << k << ',' << v << '\n';
            break;
        }
        case Format::table:
            if (table) {
                table(record, *sink);
            } else {
                print_table(record, *sink);
            }
            break;
    }
}

BinomialParams binomial_from(const Options& o) {
    BinomialParams b{o.p, o.mu, o.r, o.rho, o.steps, false};
    b.normalized = std::abs(o.mu + 0.5 * o.r - 1.0) < 1e-12;
    return b;
}

GaussianParams gaussian_from(const Options& o) {
    GaussianParams g{o.mu1, o.mu2, o.sigma1, o.sigma2, o.rho, o.steps};
    if (o.has_sigma) g.sigma1 = g.sigma2 = o.sigma;
    if (o.has_mu) g.mu1 = g.mu2 = o.mu;
    return g;
}

// Expansion rates read mu as a net drift; market params carry gross returns.
GaussianParams net_drift(GaussianParams g) {
    g.mu1 -= 1.0;
    g.mu2 -= 1.0;
    return g;
}

Record binomial_record(const BinomialParams& b) {
    return {{"kind", "binomial"}, {"p", b.p}, {"mu", b.mu}, {"r", b.r}, {"rho", b.rho}, {"steps", b.steps}};
}

Record gaussian_record(const GaussianParams& g) {
    return {{"kind", "gaussian"}, {"mu1", g.mu1},       {"mu2", g.mu2}, {"sigma1", g.sigma1},
            {"sigma2", g.sigma2}, {"rho", g.rho},       {"steps", g.steps}};
}

Record summary_record(const std::string& name, const DistributionSummary& s) {
    return {{"strategy", name},
            {"count", s.count},
            {"ruin_count", s.ruin_count},
            {"mean", s.mean},
            {"std_error", s.std_error},
            {"median", s.median},
            {"mode_estimate", s.mode_estimate},
            {"q05", s.q05},
            {"q25", s.q25},
            {"q75", s.q75},
            {"q95", s.q95},
            {"prob_below_one", s.prob_below_one},
            {"log_growth_mean", s.log_growth_mean},
            {"log_growth_median", s.log_growth_median}};
}

Record comparison_record(const PairedComparison& c) {
    return {{"strategy_a", c.strategy_a},
            {"strategy_b", c.strategy_b},
            {"n_pairs", c.n_pairs},
            {"ruined_a", c.ruined_a},
            {"ruined_b", c.ruined_b},
            {"prob_a_ge_b", c.prob_a_ge_b},
            {"mean_difference", c.mean_difference},
            {"log_growth_differential", c.log_growth_differential},
            {"differential_std_error", c.differential_std_error}};
}

// ---------------------------------------------------------------- analytics

void print_table1(const Record& rec, std::ostream& out) {
    out << "game        round  P[R>1]    P[R=1]    P[R<1]    P[R>=1]\n";
    auto pct = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%-10s", (fmt_number(100.0 * v, 6) + "%").c_str());
        return std::string(buf);
    };
    for (const auto& row : rec["rows"]) {
        char head[32];
        std::snprintf(head, sizeof head, "%-11s %-6d ", row["game"].get<std::string>().c_str(), row["round"].get<int>());
        out << head << pct(row["p_above"]) << pct(row["p_at"]) << pct(row["p_below"]) << pct(row["p_at_least"])
            << '\n';
    }
}

int cmd_analytics(const Options& o, std::ostream& out) {
    Record rec{{"command", "analytics"}, {"formula", o.formula}};
    TablePrinter table;
    const std::string& f = o.formula;
    if (f == "table1") {
        rec["governing"] = "exact enumeration of fair-coin outcomes, win/loss size swing";
        rec["swing"] = o.swing;
        Record rows = Record::array();
        for (int round = 1; round <= o.rounds; ++round) {
            for (GameKind g : {GameKind::imbalanced, GameKind::balanced}) {
                const OutcomeRow row = outcome_table(round, g, o.swing);
                rows.push_back({{"game", g == GameKind::balanced ? "balanced" : "imbalanced"},
                                {"round", round},
                                {"p_above", row.prob_above()},
                                {"p_at", row.prob_at()},
                                {"p_below", row.prob_below()},
                                {"p_at_least", row.prob_at_least()}});
            }
        }
        rec["rows"] = rows;
        table = print_table1;
    } else if (f == "joint") {
        const JointBernoulli j = joint_bernoulli(o.p, o.rho);
        rec["governing"] = "beta1 = p(1-p)rho + p^2; beta2 = 2p(1-p)(1-rho); beta3 = p(1-p)rho + (1-p)^2";
        rec["p"] = o.p;
        rec["rho"] = o.rho;
        rec["beta1"] = j.beta1;
        rec["beta2"] = j.beta2;
        rec["beta3"] = j.beta3;
    } else if (f == "fair-median") {
        rec["governing"] = "(1 - r^2)^(rounds/2)";
        rec["r"] = o.r;
        rec["rounds"] = o.rounds;
        rec["median"] = fair_game_median(o.r, o.rounds);
    } else if (f == "modal" || f == "expected") {
        const BinomialParams b = binomial_from(o);
        rec["market"] = binomial_record(b);
        if (f == "modal") {
            rec["governing"] =
                "imbalanced (mu+r)^(pM) mu^((1-p)M); balanced (mu+r)^(beta1 M) (mu+r/2)^(beta2 M) mu^(beta3 M)";
            rec["balanced"] = balanced_modal_value(b);
            rec["imbalanced"] = imbalanced_modal_value(b);
            rec["ratio"] = b.normalized ? Record(modal_ratio(b)) : Record(nullptr);
        }
        rec["expected_value"] = binomial_expected_value(b);
        if (f == "expected") rec["governing"] = "(mu + r p)^M";
    } else if (f == "bonus") {
        rec["governing"] = "sigma^2 (1 - rho) / 4";
        rec["sigma"] = o.sigma;
        rec["rho"] = o.rho;
        rec["bonus"] = rebalancing_bonus(o.sigma, o.rho);
    } else if (f == "growth") {
        const GaussianParams g = net_drift(gaussian_from(o));
        rec["governing"] =
            "theta mu1 + (1-theta) mu2 - [theta^2 sigma1^2 + (1-theta)^2 sigma2^2]/2 - theta(1-theta) sigma1 sigma2 rho";
        rec["market"] = gaussian_record(gaussian_from(o));
        rec["theta"] = o.theta;
        rec["balanced"] = log_growth_balanced(o.theta, g);
        rec["asset1"] = log_growth_asset(g.mu1, g.sigma1);
        rec["asset2"] = log_growth_asset(g.mu2, g.sigma2);
    } else if (f == "optimal-theta") {
        const GaussianParams g = net_drift(gaussian_from(o));
        const double t = optimal_theta(g);
        rec["governing"] = "clamp((mu1 - mu2 + sigma2^2 - rho sigma1 sigma2) / (sigma1^2 + sigma2^2 - 2 rho sigma1 sigma2), 0, 1)";
        rec["market"] = gaussian_record(gaussian_from(o));
        rec["theta"] = t;
        rec["growth"] = log_growth_balanced(t, g);
    } else if (f == "shannon") {
        const ShannonGrowth s = shannon_growth(o.mu1, o.sigma1);
        rec["governing"] = "mu1/2 - sigma1^2/8, window sigma1^2/4 < mu1 <= sigma1^2/2";
        rec["mu1"] = o.mu1;
        rec["sigma1"] = o.sigma1;
        rec["growth"] = s.growth;
        rec["in_window"] = s.in_window;
        rec["asset_growth"] = log_growth_asset(o.mu1, o.sigma1);
    } else if (f == "cost") {
        const CostModel c{o.half_spread, o.days_per_year, o.daily_vol};
        rec["governing"] = "2 x trading_days x daily_vol x half_spread";
        rec["half_spread"] = c.half_spread;
        rec["trading_days_per_year"] = c.trading_days_per_year;
        rec["assumed_daily_vol"] = c.assumed_daily_vol;
        rec["annual_cost"] = estimate_annual_cost(c);
        table = [](const Record& r, std::ostream& os) {
            print_table(r, os);
            os << "annual_cost_bps: " << fmt_number(r["annual_cost"].get<double>() * 1e4) << '\n';
        };
    } else {
        throw PreconditionError("unknown formula '" + f +
                                "' (expected table1, joint, fair-median, modal, expected, bonus, growth, "
                                "optimal-theta, shannon, cost)");
    }
    emit(rec, o, out, table);
    return 0;
}

// ---------------------------------------------------------------- simulate

void write_dump(const std::string& path, const std::vector<PathEnsemble>& ensembles) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << "path_index,strategy,terminal_wealth\n";
    char buf[40];
    for (const auto& e : ensembles) {
        const std::string name = e.strategy.name();
        for (std::size_t i = 0; i < e.survivors(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", e.terminal_wealth[i]);
            f << e.path_index[i] << ',' << name << ',' << buf << '\n';
        }
    }
}

void write_histogram(const std::string& path, const std::vector<PathEnsemble>& ensembles) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << "strategy,lower,upper,density\n";
    for (const auto& e : ensembles) {
        const std::string name = e.strategy.name();
        for (const auto& bin : density_histogram(e.terminal_wealth))
            f << name << ',' << fmt_number(bin.lower, 12) << ',' << fmt_number(bin.upper, 12) << ','
              << fmt_number(bin.density, 12) << '\n';
    }
}

Market market_from(const Options& o) {
    if (o.market == "binomial") return binomial_from(o);
    if (o.market == "gaussian") return gaussian_from(o);
    throw PreconditionError("unknown market '" + o.market + "' (expected binomial or gaussian)");
}

Record market_record(const Market& m) {
    if (const auto* b = std::get_if<BinomialParams>(&m)) return binomial_record(*b);
    return gaussian_record(std::get<GaussianParams>(m));
}

int cmd_simulate(const Options& o, std::ostream& out) {
    Record rec{{"command", "simulate"}, {"mode", o.mode}, {"seed", o.seed}, {"paths", o.paths}};

    if (o.mode == "ensemble") {
        const Market market = market_from(o);
        rec["market"] = market_record(market);
        std::vector<StrategySpec> strategies;
        for (const auto& s : o.strategies) strategies.push_back(StrategySpec::parse(s));
        if (strategies.empty()) strategies = {StrategySpec::balanced(o.theta), StrategySpec::imbalanced(1)};

        EnsembleOptions eo;
        eo.workers = o.workers;
        std::vector<PathEnsemble> ensembles;
        Record summaries = Record::array();
        for (const auto& s : strategies) {
            ensembles.push_back(run_ensemble(market, s, o.paths, o.seed, eo));
            summaries.push_back(summary_record(s.name(), summarize(ensembles.back())));
        }
        rec["summaries"] = summaries;
        if (ensembles.size() >= 2) rec["comparison"] = comparison_record(compare_ensembles(ensembles[0], ensembles[1]));

        if (const auto* b = std::get_if<BinomialParams>(&market)) {
            Record a{{"balanced_modal", balanced_modal_value(*b)},
                     {"imbalanced_modal", imbalanced_modal_value(*b)},
                     {"expected_value", binomial_expected_value(*b)}};
            rec["analytic"] = a;
        } else {
            const GaussianParams g = net_drift(std::get<GaussianParams>(market));
            Record a{{"balanced_growth_expansion", log_growth_balanced(o.theta, g)},
                     {"asset1_growth_expansion", log_growth_asset(g.mu1, g.sigma1)},
                     {"rebalancing_bonus", rebalancing_bonus(g.sigma1, g.rho)}};
            rec["analytic"] = a;
        }
        if (!o.dump.empty()) write_dump(o.dump, ensembles);
        if (!o.histogram.empty()) write_histogram(o.histogram, ensembles);
    } else if (o.mode == "ratio") {
        const Market market = market_from(o);
        rec["market"] = market_record(market);
        rec["rho1"] = o.rho;
        rec["rho2"] = o.rho2;
        Record points = Record::array();
        for (const auto& pt : correlation_ratio_experiment(market, o.rho, o.rho2, o.grid, o.paths, o.seed, o.workers))
            points.push_back({{"steps", pt.steps},
                              {"median_ratio", pt.median_ratio},
                              {"mean_log_ratio", pt.mean_log_ratio},
                              {"predicted_ratio", pt.predicted_ratio}});
        rec["points"] = points;
    } else if (o.mode == "shannon") {
        const std::int64_t steps = o.has_steps ? o.steps : 4000;
        const ShannonDemo demo = shannon_demo(o.mu1, o.sigma1, steps, o.paths, o.seed, o.workers);
        rec["market"] = gaussian_record(demo.market);
        rec["analytic_growth"] = demo.analytic.growth;
        rec["in_window"] = demo.analytic.in_window;
        if (!demo.warning.empty()) rec["warning"] = demo.warning;
        rec["summaries"] = Record::array({summary_record("balanced(0.5) with cash", demo.balanced),
                                          summary_record("asset only", demo.asset_only)});
        rec["comparison"] = comparison_record(demo.comparison);
    } else {
        throw PreconditionError("unknown mode '" + o.mode + "' (expected ensemble, ratio or shannon)");
    }
    emit(rec, o, out);
    return 0;
}

// ---------------------------------------------------------------- backtest

std::vector<PriceSeries> load_inputs(const Options& o) {
    if (o.inputs.empty()) throw PreconditionError("--input is required");
    std::vector<PriceSeries> all;
    for (const auto& path : o.inputs) {
        auto series = read_price_file(path);
        for (auto& s : series) {
            for (const auto& existing : all)
                if (existing.asset_id == s.asset_id) throw DataError("asset '" + s.asset_id + "' appears twice");
            all.push_back(std::move(s));
        }
    }
    return all;
}

int cmd_backtest(const Options& o, std::ostream& out, std::ostream& err) {
    std::vector<ReturnSeries> returns;
    for (const auto& s : load_inputs(o)) returns.push_back(to_returns(s));

    std::optional<CostModel> cost;
    if (o.has_half_spread) cost = CostModel{o.half_spread, o.days_per_year, o.daily_vol};
    const UniverseResult result = run_universe(returns, cost, StrategySpec::balanced(o.theta), o.workers);
    for (const auto& f : result.failures) err << "pair " << f.asset_a << "/" << f.asset_b << " failed: " << f.message << '\n';

    Record rec{{"command", "backtest"},
               {"assets", returns.size()},
               {"pairs", result.reports.size() + result.failures.size()},
               {"reported", result.reports.size()},
               {"failed", result.failures.size()},
               {"positive_differential", result.positive_differential},
               {"theta", o.theta},
               {"half_spread", cost ? Record(cost->half_spread) : Record(nullptr)}};

    if (!o.output.empty()) {
        std::ofstream f(o.output);
        if (!f) throw DataError("cannot write '" + o.output + "'");
        write_report_csv(f, result.reports);
        rec["report"] = o.output;
        Options console = o;
        console.output.clear();
        emit(rec, console, out);
    } else if (o.format() == Format::delimited) {
        write_report_csv(out, result.reports);
    } else {
        Record rows = Record::array();
        for (const auto& r : result.reports)
            rows.push_back({{"asset_a", r.asset_a},
                            {"asset_b", r.asset_b},
                            {"n_days", r.n_days},
                            {"ann_rebalanced", r.ann_return_rebalanced},
                            {"ann_initial_balanced", r.ann_return_initial_balanced},
                            {"ann_differential", r.ann_differential},
                            {"turnover", r.turnover},
                            {"est_annual_cost_flat", r.est_annual_cost_flat},
                            {"est_annual_cost_turnover", r.est_annual_cost_turnover}});
        rec["reports"] = rows;
        emit(rec, o, out, [](const Record& r, std::ostream& os) {
            os << "pairs with positive differential: " << r["positive_differential"].get<std::size_t>() << " of "
               << r["pairs"].get<std::size_t>() << '\n';
            os << "asset_a    asset_b    days   rebal(bps)   init(bps)    diff(bps)    turnover\n";
            for (const auto& row : r["reports"]) {
                char line[160];
                std::snprintf(line, sizeof line, "%-10s %-10s %-6lld %-12.2f %-12.2f %-12.2f %.4f\n",
                              row["asset_a"].get<std::string>().c_str(), row["asset_b"].get<std::string>().c_str(),
                              static_cast<long long>(row["n_days"].get<std::int64_t>()),
                              row["ann_rebalanced"].get<double>() * 1e4,
                              row["ann_initial_balanced"].get<double>() * 1e4,
                              row["ann_differential"].get<double>() * 1e4, row["turnover"].get<double>());
                os << line;
            }
        });
    }
    return 0;
}

// ---------------------------------------------------------------- kelly

int cmd_kelly(const Options& o, std::ostream& out) {
    Record rec{{"command", "kelly"}};
    KellyInputs in;
    if (!o.inputs.empty()) {
        const auto series = load_inputs(o);
        std::string first = series.size() > 0 ? series[0].asset_id : "";
        std::string second = series.size() > 1 ? series[1].asset_id : "";
        if (!o.assets.empty()) {
            const auto comma = o.assets.find(',');
            if (comma == std::string::npos) throw PreconditionError("--assets expects 'a,b'");
            first = o.assets.substr(0, comma);
            second = o.assets.substr(comma + 1);
        }
        auto find = [&](const std::string& id) -> const PriceSeries& {
            for (const auto& s : series)
                if (s.asset_id == id) return s;
            throw DataError("asset '" + id + "' not found in input");
        };
        if (first.empty() || second.empty()) throw DataError("kelly needs two assets in the input");
        const AlignedPair pair = align(to_returns(find(first)), to_returns(find(second)));
        const auto& a = pair.a.observations;
        const auto& b = pair.b.observations;
        if (a.size() < 2) throw DataError("kelly needs at least two aligned returns");
        const double n = double(a.size());
        double ma = 0.0;
        double mb = 0.0;
        for (std::size_t t = 0; t < a.size(); ++t) {
            ma += a[t].gross_return - 1.0;
            mb += b[t].gross_return - 1.0;
        }
        ma /= n;
        mb /= n;
        double saa = 0.0;
        double sab = 0.0;
        double sbb = 0.0;
        for (std::size_t t = 0; t < a.size(); ++t) {
            const double da = a[t].gross_return - 1.0 - ma;
            const double db = b[t].gross_return - 1.0 - mb;
            saa += da * da;
            sab += da * db;
            sbb += db * db;
        }
        in = {ma, mb, saa / (n - 1.0), sab / (n - 1.0), sbb / (n - 1.0)};
        rec["assets"] = Record::array({first, second});
        rec["observations"] = a.size();
    } else {
        in = {o.mu1, o.mu2, o.sigma1 * o.sigma1, o.rho * o.sigma1 * o.sigma2, o.sigma2 * o.sigma2};
    }
    rec["governing"] = "w = Sigma^-1 mu (explicit 2x2 inverse)";
    rec["moments"] = {{"mu1", in.mu1}, {"mu2", in.mu2}, {"cov11", in.cov11}, {"cov12", in.cov12}, {"cov22", in.cov22}};
    const KellyWeights w = kelly_weights(in);
    rec["w1"] = w.w1;
    rec["w2"] = w.w2;
    rec["residual"] = kelly_residual(in, w);
    emit(rec, o, out);
    return 0;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format_name, "table | delimited | structured-record")
        ->check(CLI::IsMember({"table", "delimited", "structured-record"}));
    cmd->add_option("--output", o.output, "Write data to this file instead of stdout");
    cmd->add_option("--workers", o.workers, "Thread bound (never changes results)")->check(CLI::NonNegativeNumber);
}

void add_binomial(CLI::App* cmd, Options& o) {
    cmd->add_option("--p", o.p, "Up probability");
    cmd->add_option("--mu", o.mu, "Base gross return");
    cmd->add_option("--r", o.r, "Swing size");
    cmd->add_option("--rho", o.rho, "Driver correlation");
    cmd->add_option("--steps", o.steps, "Number of periods");
}

void add_gaussian(CLI::App* cmd, Options& o) {
    cmd->add_option("--mu1", o.mu1);
    cmd->add_option("--mu2", o.mu2);
    cmd->add_option("--sigma1", o.sigma1);
    cmd->add_option("--sigma2", o.sigma2);
    cmd->add_option("--sigma", o.sigma, "Sets sigma1 and sigma2");
    cmd->add_option("--theta", o.theta, "Weight of asset 1");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Volatility harvesting analytics, Monte Carlo and backtests", "volharvest"};
    app.require_subcommand(1);
    Options o;

    auto* analytics = app.add_subcommand("analytics", "Closed-form values");
    analytics->add_option("formula", o.formula,
                          "table1 | joint | fair-median | modal | expected | bonus | growth | optimal-theta | shannon | cost")
        ->required();
    add_common(analytics, o);
    add_binomial(analytics, o);
    add_gaussian(analytics, o);
    analytics->add_option("--rounds", o.rounds);
    analytics->add_option("--swing", o.swing, "Win/loss size for table1");
    analytics->add_option("--half-spread", o.half_spread);
    analytics->add_option("--days", o.days_per_year, "Trading days per year");
    analytics->add_option("--daily-vol", o.daily_vol);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensembles");
    add_common(simulate, o);
    add_binomial(simulate, o);
    add_gaussian(simulate, o);
    simulate->add_option("--seed", o.seed);
    simulate->add_option("--paths", o.paths)->check(CLI::PositiveNumber);
    simulate->add_option("--market", o.market, "binomial | gaussian");
    simulate->add_option("--mode", o.mode, "ensemble | ratio | shannon");
    simulate->add_option("--strategy", o.strategies, "balanced[:theta] | imbalanced[:asset] | initial-balanced[:theta]");
    simulate->add_option("--rho2", o.rho2, "Second correlation (ratio mode)");
    simulate->add_option("--grid", o.grid, "Horizons (ratio mode)")->delimiter(',');
    simulate->add_option("--dump", o.dump, "Per-path terminal wealth file");
    simulate->add_option("--histogram", o.histogram, "Density histogram file");

    auto* backtest = app.add_subcommand("backtest", "Rebalanced vs initial-balanced pair backtests");
    add_common(backtest, o);
    backtest->add_option("--input", o.inputs, "Price file(s)")->required();
    backtest->add_option("--half-spread", o.half_spread);
    backtest->add_option("--theta", o.theta);
    backtest->add_option("--days", o.days_per_year);
    backtest->add_option("--daily-vol", o.daily_vol);

    auto* kelly = app.add_subcommand("kelly", "Kelly weights for two assets");
    add_common(kelly, o);
    kelly->add_option("--mu1", o.mu1);
    kelly->add_option("--mu2", o.mu2);
    kelly->add_option("--sigma1", o.sigma1);
    kelly->add_option("--sigma2", o.sigma2);
    kelly->add_option("--rho", o.rho);
    kelly->add_option("--input", o.inputs, "Price file; moments are estimated from daily returns");
    kelly->add_option("--assets", o.assets, "Two asset columns 'a,b'");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    for (auto* cmd : {analytics, simulate}) {
        if (!cmd->parsed()) continue;
        o.has_mu = cmd->count("--mu") > 0;
        o.has_sigma = cmd->count("--sigma") > 0;
        o.has_steps = cmd->count("--steps") > 0;
    }
    for (auto* cmd : {analytics, backtest})
        if (cmd->parsed()) o.has_half_spread = cmd->count("--half-spread") > 0;

    try {
        if (analytics->parsed()) return cmd_analytics(o, out);
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (backtest->parsed()) return cmd_backtest(o, out, err);
        if (kelly->parsed()) return cmd_kelly(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace volharvest::cli
