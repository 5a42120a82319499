#include "rgg1d/cli.hpp"

#include "rgg1d/cluster_laws.hpp"
#include "rgg1d/component_counts.hpp"
#include "rgg1d/laplace_check.hpp"
#include "rgg1d/mc_engine.hpp"
#include "rgg1d/series.hpp"
#include "rgg1d/stats_compare.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

namespace rgg1d::cli {

namespace {

constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    std::string subcommand;
    std::string lambda{"1"};  // a number, or min:max:step for sweep
    double epsilon{1.0};
    double length{4.0};
    std::string n;            // integer, or a comma list for sweep
    unsigned m{2};
    std::uint64_t samples{100000};
    std::uint64_t seed{1};
    unsigned threads{1};
    std::string scenario{"complete"};
    std::string curve{"mean"};
    std::string law{"B"};
    unsigned points{41};
    double x_max{0.0};
    std::string format{"csv"};
    std::string out;
};

// ---------------------------------------------------------------------------
// Output documents

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Document {
    std::string command;
    std::vector<Table> tables;
    nlohmann::json json_override;  // used verbatim for JSON when set
};

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        return std::stod(format_number(*d));  // mirror the CSV digits
    }
    if (const auto* l = std::get_if<long>(&c)) return *l;
    return std::get<std::string>(c);
}

void write_csv(const Document& doc, std::ostream& os) {
    for (std::size_t t = 0; t < doc.tables.size(); ++t) {
        const Table& table = doc.tables[t];
        if (t > 0) os << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
            os << '\n';
        }
    }
}

// Same 9 significant digits as the CSV.
void round_floats(nlohmann::json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        j = std::isfinite(v) ? nlohmann::json(std::stod(format_number(v))) : nlohmann::json(nullptr);
    } else if (j.is_structured()) {
        for (auto& child : j) round_floats(child);
    }
}

void write_json(const Document& doc, std::ostream& os) {
    nlohmann::json j;
    if (!doc.json_override.is_null()) {
        j = doc.json_override;
        round_floats(j);
    } else {
        for (const auto& table : doc.tables) {
            auto rows = nlohmann::json::array();
            for (const auto& row : table.rows) {
                nlohmann::json obj;
                for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
                rows.push_back(obj);
            }
            j[table.name] = rows;
        }
    }
    j["schema_version"] = kSchemaVersion;
    j["command"] = doc.command;
    os << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Argument helpers

double parse_double(const std::string& text, const char* flag) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("--") + flag + ": not a number: '" + text + "'");
    }
}

void require_positive(double v, const char* flag) {
    if (!(std::isfinite(v) && v > 0.0))
        throw UsageError(std::string("--") + flag + " must be a finite positive number");
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 1) return {parse_double(parts[0], "lambda")};
    if (parts.size() != 3) throw UsageError("--lambda grid must be min:max:step");
    const double lo = parse_double(parts[0], "lambda");
    const double hi = parse_double(parts[1], "lambda");
    const double step = parse_double(parts[2], "lambda");
    require_positive(lo, "lambda");
    require_positive(step, "lambda");
    if (hi < lo) throw UsageError("--lambda grid needs min <= max");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-12)) + 1;
    std::vector<double> grid;
    for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

std::vector<unsigned> parse_list(const std::string& text) {
    std::vector<unsigned> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
        const double v = parse_double(p, "n");
        if (v < 0 || v != std::floor(v)) throw UsageError("--n entries must be non-negative integers");
        out.push_back(static_cast<unsigned>(v));
    }
    return out;
}

std::optional<unsigned> parse_count(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto list = parse_list(text);
    if (list.size() != 1) throw UsageError("--n expects a single integer for this subcommand");
    return list.front();
}

double scalar_lambda(const RunSpec& spec) {
    const double lam = parse_double(spec.lambda, "lambda");
    require_positive(lam, "lambda");
    return lam;
}

IntervalModel model_of(const RunSpec& spec) {
    return IntervalModel{ModelParams{scalar_lambda(spec), spec.epsilon}, spec.length};
}

SampleConfig sample_config(const RunSpec& spec) {
    if (spec.samples < 1) throw UsageError("--samples must be >= 1");
    if (spec.threads < 1) throw UsageError("--threads must be >= 1");
    return {spec.seed, spec.samples, spec.threads};
}

void warn_precision(std::ostream& err, const DistributionTable& t, const char* what) {
    if (t.precision_warning())
        err << "warning: " << what << " cancellation estimate " << format_number(t.max_cancellation)
            << " exceeds " << format_number(kCancellationTolerance) << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands

Document distribution_doc(const std::string& command, const DistributionTable& table,
                          std::optional<unsigned> n_max) {
    Document doc{command, {{"pmf", {"n", "p"}, {}}}, {}};
    for (unsigned n = 0; n <= table.support_max; ++n) {
        if (n_max && n > *n_max) break;
        doc.tables[0].rows.push_back({static_cast<long>(n), table.probs[n]});
    }
    return doc;
}

Document cmd_pmf(const RunSpec& spec, std::ostream& err) {
    const auto table = pmf_beta0_table(model_of(spec));
    warn_precision(err, table, "pmf");
    return distribution_doc("pmf", table, parse_count(spec.n));
}

Document cmd_incomplete(const RunSpec& spec, std::ostream& err) {
    const auto table = pmf_incomplete_table(model_of(spec));
    warn_precision(err, table, "incomplete");
    return distribution_doc("incomplete", table, parse_count(spec.n));
}

Document cmd_circle(const RunSpec& spec, std::ostream& err) {
    const IntervalModel model = model_of(spec);
    const auto table = pmf_circle_table(model);
    warn_precision(err, table, "circle");
    Document doc = distribution_doc("circle", table, parse_count(spec.n));
    doc.tables[0].columns.push_back("alternative_formula");
    for (auto& row : doc.tables[0].rows)
        row.push_back(pmf_circle_alternative(model, static_cast<unsigned>(std::get<long>(row[0]))).value);
    return doc;
}

Document cmd_moments(const RunSpec& spec) {
    const IntervalModel model = model_of(spec);
    if (spec.m < 1) throw UsageError("--m must be >= 1");
    Document doc{"moments", {{"moments", {"m", "moment"}, {}}}, {}};
    for (unsigned m = 1; m <= spec.m; ++m)
        doc.tables[0].rows.push_back({static_cast<long>(m), moment_beta0(model, m)});
    return doc;
}

Document cmd_coverage(const RunSpec& spec) {
    const auto check = coverage_prob_closed(model_of(spec));
    Document doc{"coverage", {{"coverage", {"quadrature", "closed_form", "mismatch"}, {}}}, {}};
    doc.tables[0].rows.push_back({check.reference, check.value, std::string(check.mismatch ? "true" : "false")});
    return doc;
}

Document cmd_density(const RunSpec& spec) {
    const ModelParams params{scalar_lambda(spec), spec.epsilon};
    params.validate();
    if (spec.points < 2) throw UsageError("--points must be >= 2");
    Document doc{"density", {}, {}};
    std::function<double(double)> density;
    double mean = 0.0;
    if (spec.law == "B") {
        const MixedLaw law = law_B(params);
        density = law.density;
        mean = mean_B(params);
        doc.tables.push_back({"atom", {"location", "mass"}, {{law.atom_location, law.atom_mass}}});
    } else if (spec.law == "U") {
        const unsigned n = parse_count(spec.n).value_or(1);
        if (n < 1) throw UsageError("--n must be >= 1 for the U law");
        density = [params, n](double x) { return density_U(params, n, x); };
        mean = n * (mean_B(params) + 1.0 / params.lambda);
    } else {
        throw UsageError("--law must be B or U");
    }
    const double x_max = spec.x_max > 0.0 ? spec.x_max : params.epsilon + 8.0 * mean;
    Table grid{"density", {"x", "density"}, {}};
    for (unsigned k = 0; k < spec.points; ++k) {
        const double x = x_max * k / (spec.points - 1);
        grid.rows.push_back({x, density(x)});
    }
    doc.tables.push_back(std::move(grid));
    return doc;
}

Document cmd_laplace_check(const RunSpec& spec) {
    const ModelParams params{scalar_lambda(spec), spec.epsilon};
    params.validate();
    const unsigned n_max = parse_count(spec.n).value_or(3);
    Table table{"laplace_check", {"quantity", "order", "s", "closed", "numeric", "residual", "error_bound"}, {}};
    for (double s : {0.5, 1.0, 2.0}) {
        for (unsigned n = 0; n <= n_max; ++n) {
            auto p = [&](double x) { return count_prob(params, x, n).value; };
            const auto num = numeric_laplace(p, s, lattice_spec(params, n, s));
            const double closed = laplace_pn_closed(params, n, s);
            table.rows.push_back({std::string("p_n"), static_cast<long>(n), s, closed, num.value,
                                  num.value - closed, num.error_bound});
        }
        for (unsigned m = 1; m <= spec.m; ++m) {
            auto moment = [&](double x) { return x > 0.0 ? moment_beta0({params, x}, m) : 0.0; };
            QuadratureSpec q = lattice_spec(params, m, s);
            q.f_bound = moment(2.0 * q.upper_cut);
            const auto num = numeric_laplace(moment, s, q);
            const double closed = laplace_moment_closed(params, m, s);
            table.rows.push_back({std::string("moment"), static_cast<long>(m), s, closed, num.value,
                                  num.value - closed, num.error_bound});
        }
    }
    return {"laplace-check", {std::move(table)}, {}};
}

Document cmd_simulate(const RunSpec& spec) {
    const ModelParams params{scalar_lambda(spec), spec.epsilon};
    params.validate();
    const Scenario scenario = parse_scenario(spec.scenario);
    const SampleConfig config = sample_config(spec);
    if (!is_continuous(scenario)) {
        const auto dist = estimate_distribution(params, scenario, spec.length, config);
        Table table{"distribution", {"outcome", "count", "estimate", "std_error"}, {}};
        for (const auto& [n, count] : dist.counts)
            table.rows.push_back({n, static_cast<long>(count), dist.estimate(n), dist.std_error(n)});
        return {"simulate", {std::move(table)}, {}};
    }
    const unsigned order = parse_count(spec.n).value_or(1);
    const auto sample = estimate_sample(params, scenario, order, config);
    Table table{"summary", {"statistic", "value"}, {}};
    const auto& v = sample.values;
    double sum = 0.0;
    for (double x : v) sum += x;
    table.rows.push_back({std::string("count"), static_cast<long>(v.size())});
    table.rows.push_back({std::string("mean"), sum / static_cast<double>(v.size())});
    if (scenario == Scenario::b_law)
        table.rows.push_back({std::string("singleton_fraction"),
                              static_cast<double>(sample.singleton_count) / static_cast<double>(v.size())});
    for (int q = 1; q <= 9; ++q) {
        const auto idx = static_cast<std::size_t>(std::floor(q / 10.0 * static_cast<double>(v.size() - 1)));
        table.rows.push_back({"q" + std::to_string(q * 10), v[idx]});
    }
    return {"simulate", {std::move(table)}, {}};
}

Document report_doc(const ComparisonReport& report) {
    Document doc{"compare", {}, to_json(report)};
    Table outcomes{"per_outcome", {"outcome", "analytic", "empirical", "z"}, {}};
    for (const auto& o : report.per_outcome) outcomes.rows.push_back({o.outcome, o.analytic, o.empirical, o.z});
    Table summary{"summary", {"metric", "value"}, {}};
    summary.rows.push_back({std::string("max_abs_z"), report.max_abs_z});
    summary.rows.push_back({std::string("chi_square"), report.chi_square});
    summary.rows.push_back({std::string("dof"), static_cast<long>(report.dof)});
    summary.rows.push_back({std::string("ks"), report.ks_statistic ? Cell(*report.ks_statistic) : Cell(std::string())});
    summary.rows.push_back({std::string("ks_bound"), report.ks_bound ? Cell(*report.ks_bound) : Cell(std::string())});
    summary.rows.push_back({std::string("verdict"), std::string(report.pass ? "pass" : "fail")});
    if (!report.per_outcome.empty()) doc.tables.push_back(std::move(outcomes));
    doc.tables.push_back(std::move(summary));
    return doc;
}

Document cmd_compare(const RunSpec& spec) {
    const IntervalModel model = model_of(spec);
    model.validate();
    const ModelParams& params = model.params;
    const Scenario scenario = parse_scenario(spec.scenario);
    const SampleConfig config = sample_config(spec);
    if (is_continuous(scenario)) {
        const unsigned order = parse_count(spec.n).value_or(1);
        const auto sample = estimate_sample(params, scenario, order, config);
        if (scenario == Scenario::b_law) {
            const MixedLaw law = law_B(params);
            return report_doc(compare_continuous(sample.values, law.cdf,
                                                 [&law](double x) { return law.cdf_left(x); }));
        }
        if (order < 1) throw UsageError("--n must be >= 1 for the U law");
        return report_doc(compare_continuous(sample.values, [&](double x) { return cdf_U(params, order, x); }));
    }
    std::vector<double> analytic;
    switch (scenario) {
    case Scenario::complete: analytic = pmf_beta0_table(model).probs; break;
    case Scenario::incomplete: analytic = pmf_incomplete_table(model).probs; break;
    case Scenario::circle: analytic = pmf_circle_table(model).probs; break;
    default: {
        const double c = coverage_prob(model);
        analytic = {1.0 - c, c};
    }
    }
    const auto dist = estimate_distribution(params, scenario, model.length, config);
    return report_doc(compare_pmf(dist, analytic));
}

Document cmd_sweep(const RunSpec& spec) {
    const auto grid = parse_grid(spec.lambda);
    if (!(spec.epsilon > 0.0) || !(spec.length > 0.0)) throw UsageError("--epsilon and --length must be > 0");
    Table table{"sweep", {"lambda"}, {}};
    std::vector<unsigned> ns;
    if (spec.curve == "mean" || spec.curve == "var") {
        table.columns.push_back(spec.curve);
    } else if (spec.curve == "pmf") {
        ns = spec.n.empty() ? std::vector<unsigned>{0, 1, 2, 3} : parse_list(spec.n);
        for (unsigned n : ns) table.columns.push_back("p" + std::to_string(n));
    } else {
        throw UsageError("--curve must be mean, var or pmf");
    }
    for (double lam : grid) {
        const IntervalModel model{{lam, spec.epsilon}, spec.length};
        std::vector<Cell> row{lam};
        if (spec.curve == "mean")
            row.emplace_back(mean_beta0(model));
        else if (spec.curve == "var")
            row.emplace_back(var_beta0(model));
        else
            for (unsigned n : ns) row.emplace_back(pmf_beta0(model, n).value);
        table.rows.push_back(std::move(row));
    }
    return {"sweep", {std::move(table)}, {}};
}

void add_model_options(CLI::App* sub, RunSpec& spec, bool with_length = true) {
    sub->add_option("--lambda", spec.lambda, "Poisson intensity (points per unit length)");
    sub->add_option("--epsilon", spec.epsilon, "connection radius");
    if (with_length) sub->add_option("--length", spec.length, "domain length L (circumference for circle)");
}

void add_output_options(CLI::App* sub, RunSpec& spec) {
    sub->add_option("--format", spec.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", spec.out, "output file (default: standard output)");
}

void add_sim_options(CLI::App* sub, RunSpec& spec) {
    sub->add_option("--scenario", spec.scenario, "complete|incomplete|circle|coverage|B|U");
    sub->add_option("--samples", spec.samples, "number of replications");
    sub->add_option("--seed", spec.seed, "64-bit seed");
    sub->add_option("--threads", spec.threads, "worker threads (output does not depend on it)");
    sub->add_option("--n", spec.n, "order n of U_n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunSpec spec;
    CLI::App app{"Cluster counts, coverage and cluster-length laws of the 1-D Poisson random geometric graph"};
    app.require_subcommand(1);

    auto* pmf = app.add_subcommand("pmf", "Pr(complete clusters = n) on [0, L]. CSV columns: n,p");
    add_model_options(pmf, spec);
    pmf->add_option("--n", spec.n, "largest n to print");
    auto* incomplete = app.add_subcommand("incomplete", "Pr(incomplete clusters = n) on [0, L]. CSV columns: n,p");
    add_model_options(incomplete, spec);
    incomplete->add_option("--n", spec.n, "largest n to print");
    auto* circle = app.add_subcommand(
        "circle", "Pr(clusters on a circle of circumference L = n). CSV columns: n,p,alternative_formula");
    add_model_options(circle, spec);
    circle->add_option("--n", spec.n, "largest n to print");
    auto* moments = app.add_subcommand("moments", "E[beta0^m] for m = 1..M. CSV columns: m,moment");
    add_model_options(moments, spec);
    moments->add_option("--m", spec.m, "highest moment order M");
    auto* coverage = app.add_subcommand(
        "coverage", "Pr([0, L] covered). CSV columns: quadrature,closed_form,mismatch");
    add_model_options(coverage, spec);
    auto* density = app.add_subcommand(
        "density", "Density of B or U_n on a grid. CSV: table location,mass (B only), then x,density");
    add_model_options(density, spec, false);
    density->add_option("--law", spec.law, "B or U")->check(CLI::IsMember({"B", "U"}));
    density->add_option("--n", spec.n, "order n of U_n");
    density->add_option("--points", spec.points, "grid points");
    density->add_option("--x-max", spec.x_max, "grid end (default eps + 8 * mean)");
    auto* laplace = app.add_subcommand(
        "laplace-check",
        "Closed-form vs numeric Laplace transforms. CSV columns: quantity,order,s,closed,numeric,residual,error_bound");
    add_model_options(laplace, spec, false);
    laplace->add_option("--n", spec.n, "highest p_n order (default 3)");
    laplace->add_option("--m", spec.m, "highest moment order (default 2)");
    auto* simulate = app.add_subcommand(
        "simulate",
        "Monte Carlo tallies. CSV columns: outcome,count,estimate,std_error (B/U: statistic,value)");
    add_model_options(simulate, spec);
    add_sim_options(simulate, spec);
    auto* compare = app.add_subcommand(
        "compare", "Monte Carlo vs analytic. CSV: outcome,analytic,empirical,z then metric,value");
    add_model_options(compare, spec);
    add_sim_options(compare, spec);
    auto* sweep = app.add_subcommand(
        "sweep", "Curves over a lambda grid. CSV columns: lambda,mean | lambda,var | lambda,p<n>...");
    sweep->add_option("--lambda", spec.lambda, "grid min:max:step (inclusive)");
    sweep->add_option("--epsilon", spec.epsilon, "connection radius");
    sweep->add_option("--length", spec.length, "domain length L");
    sweep->add_option("--curve", spec.curve, "mean, var or pmf")->check(CLI::IsMember({"mean", "var", "pmf"}));
    sweep->add_option("--n", spec.n, "comma list of n for the pmf curve (default 0,1,2,3)");

    for (auto* sub : app.get_subcommands({})) add_output_options(sub, spec);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        spec.subcommand = app.get_subcommands().front()->get_name();
        if (spec.subcommand != "sweep") {
            require_positive(spec.epsilon, "epsilon");
            require_positive(spec.length, "length");
            scalar_lambda(spec);
        }

        Document doc;
        const std::string& c = spec.subcommand;
        if (c == "pmf") doc = cmd_pmf(spec, err);
        else if (c == "incomplete") doc = cmd_incomplete(spec, err);
        else if (c == "circle") doc = cmd_circle(spec, err);
        else if (c == "moments") doc = cmd_moments(spec);
        else if (c == "coverage") doc = cmd_coverage(spec);
        else if (c == "density") doc = cmd_density(spec);
        else if (c == "laplace-check") doc = cmd_laplace_check(spec);
        else if (c == "simulate") doc = cmd_simulate(spec);
        else if (c == "compare") doc = cmd_compare(spec);
        else doc = cmd_sweep(spec);

        std::ostringstream buffer;
        if (spec.format == "json")
            write_json(doc, buffer);
        else
            write_csv(doc, buffer);
        if (spec.out.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(spec.out, std::ios::binary);
            if (!file) throw UsageError("cannot open --out file '" + spec.out + "'");
            file << buffer.str();
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}

}  // namespace rgg1d::cli
