// starmetric command-line tool: law checking, residuum evaluation, index
// queries, topology checks, and membership-grid emission over star-metric
// spaces. All randomized subcommands take --seed (default: STARMETRIC_SEED
// environment variable, then 0) and are reproducible given it.
//
// Exit codes: 0 = pass, 1 = a checked law or cross-check failed,
// 2 = usage, configuration, or data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "starmetric/starmetric.hpp"

namespace sm = starmetric;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("STARMETRIC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw sm::usage_error("STARMETRIC_SEED is not an unsigned integer");
        }
    }
    return 0;
}

json config_json(const sm::SpaceConfig& config) {
    return {{"tdefiner", config.tdefiner},
            {"construction", config.construction},
            {"arity", config.arity},
            {"pseudometric", config.pseudometric}};
}

// Inline point list: coordinates separated by ',', points by ';'
// (a bare comma list is a list of scalar points when arity is 1).
sm::PointSet parse_inline_points(const std::string& text, std::size_t arity) {
    sm::PointSet points;
    std::stringstream stream(text);
    std::string chunk;
    if (arity == 1) {
        while (std::getline(stream, chunk, ',')) {
            double v = 0.0;
            if (!sm::detail::parse_double(chunk, v))
                throw sm::usage_error("--points: \"" + chunk + "\" is not a number");
            points.push_back(sm::scalar_point(v));
        }
    } else {
        while (std::getline(stream, chunk, ';')) {
            std::stringstream inner(chunk);
            std::string cell;
            std::vector<double> coords;
            while (std::getline(inner, cell, ',')) {
                double v = 0.0;
                if (!sm::detail::parse_double(cell, v))
                    throw sm::usage_error("--points: \"" + cell + "\" is not a number");
                coords.push_back(v);
            }
            points.push_back(sm::Point{std::move(coords)});
        }
    }
    if (points.empty()) throw sm::usage_error("--points: no points given");
    for (const auto& p : points)
        if (p.arity() != arity)
            throw sm::usage_error("--points: point " + sm::format_point(p) + " has arity " +
                                  std::to_string(p.arity()) + ", expected " +
                                  std::to_string(arity));
    return points;
}

sm::PointSet generate_points(std::size_t count, std::size_t arity, std::uint64_t seed,
                             double lo, double hi) {
    sm::Rng rng(seed);
    sm::PointSet points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> coords(arity);
        for (auto& c : coords) c = rng.uniform(lo, hi);
        points.push_back(sm::Point{std::move(coords)});
    }
    return points;
}

sm::DataFormat parse_format(const std::string& name, const std::filesystem::path& path) {
    if (name == "csv") return sm::DataFormat::csv;
    if (name == "json") return sm::DataFormat::json;
    if (name.empty()) return sm::format_from_extension(path);
    throw sm::usage_error("unknown format \"" + name + "\" (expected csv or json)");
}

void print_report_summary(const sm::LawReport& report, std::ostream& err) {
    err << report.suite << "\n";
    for (const auto& check : report.checks) {
        err << "  [" << (check.pass ? "PASS" : "FAIL") << "] " << check.law << " ("
            << check.samples_tested << " samples)";
        if (!check.note.empty()) err << " -- " << check.note;
        err << "\n";
        if (!check.pass) err << "    witness: " << check.witness.dump() << "\n";
    }
}

struct CommonFlags {
    sm::SpaceConfig space;
    std::uint64_t seed = 0;
    std::string config_file;
};

// JSON config file provides defaults; explicit command-line flags win.
void apply_config_file(CLI::App* cmd, CommonFlags& flags, std::uint64_t* seed_target) {
    if (flags.config_file.empty()) return;
    std::ifstream in(flags.config_file);
    if (!in) throw sm::usage_error("cannot open config file \"" + flags.config_file + "\"");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw sm::usage_error("config file \"" + flags.config_file + "\": " + e.what());
    }
    auto unset = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt && opt->count() == 0;
    };
    try {
        if (doc.contains("tdefiner") && unset("--tdefiner"))
            flags.space.tdefiner = doc["tdefiner"].get<std::string>();
        if (doc.contains("construction") && unset("--construction"))
            flags.space.construction = doc["construction"].get<std::string>();
        if (doc.contains("arity") && unset("--arity"))
            flags.space.arity = doc["arity"].get<std::size_t>();
        if (doc.contains("pseudometric") && unset("--pseudometric"))
            flags.space.pseudometric = doc["pseudometric"].get<bool>();
        if (seed_target && doc.contains("seed") && unset("--seed"))
            *seed_target = doc["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw sm::usage_error("config file \"" + flags.config_file + "\": " + e.what());
    }
}

void add_space_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--tdefiner", flags.space.tdefiner,
                    "t-definer name: lukasiewicz, max, s, p")
        ->default_val("lukasiewicz");
    cmd->add_option("--construction", flags.space.construction,
                    "induced, signed_line, product_max, product_T, euclidean_L")
        ->default_val("induced");
    cmd->add_option("--arity", flags.space.arity, "point dimension (products only)")
        ->default_val(1);
    cmd->add_flag("--pseudometric", flags.space.pseudometric,
                  "check the weak identity axiom M1' instead of M1");
    cmd->add_option("--config", flags.config_file, "JSON config file; flags win over it");
}

// ---------------------------------------------------------------------------
// check-laws
// ---------------------------------------------------------------------------

struct CheckLawsArgs {
    CommonFlags common;
    std::string points_inline;
    std::string data_file;
    std::string format;
    std::size_t generate = 0;
    std::uint64_t seed = 0;
    std::size_t budget = 1'000'000;
    std::size_t tdefiner_samples = 1000;
    std::string force_tdefiner;
};

int run_check_laws(CLI::App* cmd, CheckLawsArgs& args) {
    apply_config_file(cmd, args.common, &args.seed);
    const sm::StarMetricSpace space = sm::make_space(args.common.space);

    sm::PointSet points;
    if (!args.points_inline.empty()) {
        points = parse_inline_points(args.points_inline, space.arity);
    } else if (!args.data_file.empty()) {
        points = sm::ingest(args.data_file, parse_format(args.format, args.data_file)).points;
    } else if (args.generate > 0) {
        points = generate_points(args.generate, space.arity, args.seed, 0.0, 100.0);
    } else {
        throw sm::usage_error("check-laws needs --points, --data, or --generate");
    }
    if (points.front().arity() != space.arity)
        throw sm::usage_error("dataset arity " + std::to_string(points.front().arity()) +
                              " does not match space arity " + std::to_string(space.arity));
    sm::validate_points(space, points);

    const sm::ToleranceConfig cfg;
    const sm::TDefiner* check_star = nullptr;
    if (!args.force_tdefiner.empty()) check_star = &sm::find_tdefiner(args.force_tdefiner);

    auto triples = sm::grid_triples(0.0, 10.0, 8);
    for (auto& t : sm::sample_triples(args.seed, args.tdefiner_samples, 0.0, 10.0))
        triples.push_back(t);
    const sm::LawReport tdefiner_report = sm::check_tdefiner_axioms(
        check_star ? *check_star : space.star, triples, cfg);

    sm::MetricCheckOptions options;
    options.pseudometric_mode = args.common.space.pseudometric;
    options.triple_budget = args.budget;
    options.seed = args.seed;
    options.override_star = check_star;
    const sm::LawReport metric_report =
        sm::check_star_metric_axioms(space, points, cfg, options);

    const bool pass = tdefiner_report.passed() && metric_report.passed();
    json out = {{"command", "check-laws"},
                {"config", config_json(args.common.space)},
                {"seed", args.seed},
                {"points", points.size()},
                {"reports", json::array({tdefiner_report.to_json(), metric_report.to_json()})},
                {"pass", pass}};
    if (check_star) out["force_tdefiner"] = check_star->name;
    std::cout << out.dump(2) << "\n";
    print_report_summary(tdefiner_report, std::cerr);
    print_report_summary(metric_report, std::cerr);
    return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// residuum
// ---------------------------------------------------------------------------

struct ResiduumArgs {
    std::string tdefiner = "lukasiewicz";
    double a = 0.0;
    double b = 0.0;
    std::string method = "closed";
};

int run_residuum(const ResiduumArgs& args) {
    const sm::TDefiner& star = sm::find_tdefiner(args.tdefiner);
    const sm::ToleranceConfig cfg;
    std::cout.precision(17);
    if (args.method == "closed") {
        if (!star.has_closed_residuum())
            throw sm::usage_error("t-definer \"" + star.name + "\" has no closed-form residuum");
        std::cout << sm::residuum(star, args.a, args.b, cfg) << "\n";
    } else if (args.method == "numeric") {
        std::cout << sm::residuum_numeric(star, args.a, args.b, cfg) << "\n";
    } else if (args.method == "both") {
        const double closed = sm::residuum(star, args.a, args.b, cfg);
        const double numeric = sm::residuum_numeric(star, args.a, args.b, cfg);
        std::cout << "closed " << closed << "\n";
        std::cout << "numeric " << numeric << "\n";
        std::cout << "discrepancy " << std::abs(closed - numeric) << "\n";
    } else {
        throw sm::usage_error("unknown method \"" + args.method +
                              "\" (expected closed, numeric, both)");
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// query
// ---------------------------------------------------------------------------

struct QueryArgs {
    CommonFlags common;
    std::string data_file;
    std::string queries_file;
    std::string format;
    std::size_t k = 0;
    double radius = 0.0;
    std::size_t leaf_size = 16;
    std::uint64_t seed = 0;
    bool audit = false;
};

json skips_json(const std::vector<sm::SkipEvent>& skips) {
    json rows = json::array();
    for (const auto& ev : skips) {
        rows.push_back({{"first_item", ev.first_item},
                        {"last_item", ev.last_item},
                        {"side", ev.inner_side ? "inner" : "outer"},
                        {"lower_bound", ev.lower_bound},
                        {"threshold", ev.threshold},
                        {"points_skipped", ev.last_item - ev.first_item}});
    }
    return rows;
}

bool replay_skips(const sm::VpTree& tree, const sm::Point& q,
                  const std::vector<sm::SkipEvent>& skips, bool strict) {
    for (const auto& ev : skips) {
        for (std::size_t idx : tree.subtree_items(ev.first_item, ev.last_item)) {
            const double d = tree.space().dist(q, tree.point(idx));
            if (strict ? !(d > ev.threshold) : !(d >= ev.threshold)) return false;
        }
    }
    return true;
}

int run_query(CLI::App* cmd, QueryArgs& args) {
    apply_config_file(cmd, args.common, &args.seed);
    if ((args.k == 0) == (args.radius == 0.0))
        throw sm::usage_error("query needs exactly one of --k or --radius");
    const sm::StarMetricSpace space = sm::make_space(args.common.space);

    if (args.data_file.empty() || args.queries_file.empty())
        throw sm::usage_error("query needs --data and --queries");
    const sm::PointSet points =
        sm::ingest(args.data_file, parse_format(args.format, args.data_file)).points;
    const sm::PointSet queries =
        sm::ingest(args.queries_file, parse_format(args.format, args.queries_file)).points;
    if (points.front().arity() != queries.front().arity())
        throw sm::usage_error("dataset arity " + std::to_string(points.front().arity()) +
                              " does not match query arity " +
                              std::to_string(queries.front().arity()));
    if (points.front().arity() != space.arity)
        throw sm::usage_error("dataset arity " + std::to_string(points.front().arity()) +
                              " does not match space arity " + std::to_string(space.arity));
    sm::validate_points(space, points);
    sm::validate_points(space, queries);

    const sm::VpTree tree(points, space, args.leaf_size, args.seed);

    json results = json::array();
    bool all_match = true;
    for (const auto& q : queries) {
        sm::QueryAudit audit;
        json row;
        row["query"] = q.coords;
        auto neighbors_json = [](const std::vector<sm::Neighbor>& neighbors) {
            json rows = json::array();
            for (const auto& nb : neighbors)
                rows.push_back(
                    {{"index", nb.index}, {"point", nb.point.coords}, {"distance", nb.distance}});
            return rows;
        };
        if (args.k > 0) {
            const sm::KnnResult found = tree.knn(q, args.k, args.audit ? &audit : nullptr);
            row["neighbors"] = neighbors_json(found.neighbors);
            row["short_result"] = found.short_result;
            row["distance_evaluations"] = found.distance_evaluations;
            if (args.audit) {
                const sm::KnnResult oracle = sm::brute_force(points, space, q, args.k);
                bool match = found.neighbors.size() == oracle.neighbors.size();
                for (std::size_t i = 0; match && i < found.neighbors.size(); ++i)
                    match = found.neighbors[i].distance == oracle.neighbors[i].distance;
                row["oracle_match"] = match;
                row["pruning_sound"] = replay_skips(tree, q, audit.skips, /*strict=*/true);
                row["skips"] = skips_json(audit.skips);
                all_match = all_match && match && row["pruning_sound"].get<bool>();
            }
        } else {
            const auto found = tree.range_query(q, args.radius, args.audit ? &audit : nullptr);
            row["members"] = neighbors_json(found);
            row["distance_evaluations"] = audit.distance_evaluations;
            if (args.audit) {
                const auto oracle = sm::brute_force_range(points, space, q, args.radius);
                bool match = found.size() == oracle.size();
                for (std::size_t i = 0; match && i < found.size(); ++i)
                    match = found[i].distance == oracle[i].distance;
                row["oracle_match"] = match;
                row["pruning_sound"] = replay_skips(tree, q, audit.skips, /*strict=*/false);
                row["skips"] = skips_json(audit.skips);
                all_match = all_match && match && row["pruning_sound"].get<bool>();
            }
        }
        results.push_back(std::move(row));
    }

    json out = {{"command", "query"},
                {"config", config_json(args.common.space)},
                {"seed", args.seed},
                {"leaf_size", args.leaf_size},
                {"results", std::move(results)},
                {"pass", all_match}};
    if (args.k > 0)
        out["k"] = args.k;
    else
        out["radius"] = args.radius;
    std::cout << out.dump(2) << "\n";
    return all_match ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// ball-grid
// ---------------------------------------------------------------------------

struct BallGridArgs {
    CommonFlags common;
    std::string center = "0,0";
    double radius = 1.0;
    std::vector<double> window{-1.5, 1.5, -1.5, 1.5};
    std::size_t resolution = 301;
    std::string format = "pgm";
    std::string output;
};

int run_ball_grid(CLI::App* cmd, BallGridArgs& args) {
    apply_config_file(cmd, args.common, nullptr);
    const sm::StarMetricSpace space = sm::make_space(args.common.space);
    if (space.arity != 2)
        throw sm::usage_error("ball-grid needs a 2-dimensional space (got arity " +
                              std::to_string(space.arity) + ")");
    const sm::PointSet centers = parse_inline_points(args.center, 2);
    if (centers.size() != 1) throw sm::usage_error("--center must be a single 2D point");
    if (args.window.size() != 4)
        throw sm::usage_error("--window must be xmin,xmax,ymin,ymax");
    const sm::Window window{args.window[0], args.window[1], args.window[2], args.window[3]};
    if (args.output.empty()) throw sm::usage_error("ball-grid needs --output");

    const sm::MembershipGrid grid =
        sm::ball_grid(space, centers.front(), args.radius, window, args.resolution);

    std::ostringstream content;
    if (args.format == "pgm") {
        sm::write_pgm(grid, content);
    } else if (args.format == "csv") {
        sm::write_grid_csv(grid, content);
    } else {
        throw sm::usage_error("unknown grid format \"" + args.format +
                              "\" (expected pgm or csv)");
    }
    sm::write_file_atomic(args.output, content.str());

    std::size_t inside = 0, outside = 0, boundary = 0;
    for (std::uint8_t cell : grid.cells) {
        if (cell == 1)
            ++inside;
        else if (cell == 2)
            ++boundary;
        else
            ++outside;
    }
    json out = {{"command", "ball-grid"},
                {"config", config_json(args.common.space)},
                {"output", args.output},
                {"format", args.format},
                {"resolution", args.resolution},
                {"radius", args.radius},
                {"cells", {{"inside", inside}, {"outside", outside}, {"boundary", boundary}}}};
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

// ---------------------------------------------------------------------------
// topology-check
// ---------------------------------------------------------------------------

struct TopologyArgs {
    CommonFlags common;
    std::string data_file;
    std::string format;
    std::size_t generate = 0;
    std::uint64_t seed = 0;
    std::size_t pairs = 100;
    std::size_t trials = 10;
};

int run_topology_check(CLI::App* cmd, TopologyArgs& args) {
    apply_config_file(cmd, args.common, &args.seed);
    const sm::StarMetricSpace space = sm::make_space(args.common.space);
    const sm::ToleranceConfig cfg;

    sm::PointSet points;
    if (!args.data_file.empty()) {
        points = sm::ingest(args.data_file, parse_format(args.format, args.data_file)).points;
    } else {
        points = generate_points(args.generate ? args.generate : 200, space.arity, args.seed,
                                 0.0, 100.0);
    }
    if (points.front().arity() != space.arity)
        throw sm::usage_error("dataset arity does not match space arity");
    sm::validate_points(space, points);
    if (points.size() < 2) throw sm::usage_error("topology-check needs at least two points");

    sm::LawReport report;
    report.suite = "topology(" + space.name + ")";
    report.abs_tol = cfg.abs_tol;
    report.numeric_residuum_tol = cfg.numeric_residuum_tol;
    report.sampling_seed = args.seed;
    sm::Rng rng(args.seed);
    const std::size_t n = points.size();

    sm::LawCheck separation{"hausdorff separation"};
    sm::LawCheck witness{"interior witness"};
    for (std::size_t t = 0; t < args.pairs; ++t) {
        const sm::Point& a = points[rng.index(n)];
        const sm::Point& b = points[rng.index(n)];
        if (space.dist(a, b) <= 0.0) continue;
        ++separation.samples_tested;
        const double s = sm::separation_radius(space, a, b, cfg);
        const sm::Ball ball_a{&space, a, s};
        const sm::Ball ball_b{&space, b, s};
        for (const auto& c : points) {
            if (sm::ball_contains(ball_a, c) && sm::ball_contains(ball_b, c)) {
                if (separation.pass) {
                    separation.pass = false;
                    separation.witness = {{"a", a.coords}, {"b", b.coords}, {"c", c.coords},
                                          {"s", s}};
                }
            }
        }

        // Interior witness around a random member of a random ball.
        const double d_ab = space.dist(a, b);
        const sm::Ball ball{&space, a, d_ab * 1.5};
        const double eps = sm::interior_witness(ball, b, cfg);
        ++witness.samples_tested;
        for (const auto& z : points) {
            if (space.dist(b, z) < eps && !(space.dist(a, z) < ball.radius)) {
                if (witness.pass) {
                    witness.pass = false;
                    witness.witness = {{"center", a.coords},
                                       {"y", b.coords},
                                       {"z", z.coords},
                                       {"eps", eps},
                                       {"radius", ball.radius}};
                }
            }
        }
    }

    sm::LawCheck normal{"normal separation"};
    for (std::size_t t = 0; t < args.trials; ++t) {
        sm::PointSet A, B;
        const std::size_t size_a = 1 + rng.index(3);
        const std::size_t size_b = 1 + rng.index(3);
        for (std::size_t i = 0; i < size_a; ++i) A.push_back(points[rng.index(n)]);
        for (std::size_t i = 0; i < size_b; ++i) B.push_back(points[rng.index(n)]);
        bool overlap = false;
        for (const auto& a : A)
            for (const auto& b : B) overlap = overlap || a == b;
        if (overlap) continue;
        ++normal.samples_tested;
        const sm::NormalSeparation sep = sm::normal_separation(space, A, B, cfg);
        for (const auto& c : points) {
            bool in_u = false, in_v = false;
            for (const auto& ball : sep.u_balls) in_u = in_u || sm::ball_contains(ball, c);
            for (const auto& ball : sep.v_balls) in_v = in_v || sm::ball_contains(ball, c);
            if (in_u && in_v && normal.pass) {
                normal.pass = false;
                normal.witness = {{"c", c.coords}};
            }
        }
    }

    report.checks = {std::move(separation), std::move(witness), std::move(normal)};

    // Product configurations also get the ball-inclusion chain.
    const bool is_product = args.common.space.construction == "product_max" ||
                            args.common.space.construction == "product_T";
    if (is_product) {
        const sm::TDefiner& star = space.star;
        const bool signed_factors = star.name == "lukasiewicz" || star.name == "s";
        std::vector<sm::StarMetricSpace> factors;
        for (std::size_t i = 0; i < args.common.space.arity; ++i)
            factors.push_back(signed_factors ? sm::signed_line_space(star)
                                             : sm::induced_metric(star, cfg));
        const sm::Point& center = points[rng.index(n)];
        const double r = rng.uniform(1.0, 50.0);
        sm::LawReport chain =
            sm::product_ball_inclusion_check(factors, star, center, r, points, cfg);
        for (auto& check : chain.checks) report.checks.push_back(std::move(check));
        report.metadata = chain.metadata;
    }

    std::cout << report.to_json().dump(2) << "\n";
    print_report_summary(report, std::cerr);
    return report.passed() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// compare-tdefiners
// ---------------------------------------------------------------------------

struct CompareArgs {
    std::string first;
    std::string second;
    double lo = 0.0;
    double hi = 10.0;
    std::size_t steps = 100;
};

int run_compare(const CompareArgs& args) {
    const sm::TDefiner& star1 = sm::find_tdefiner(args.first);
    const sm::TDefiner& star2 = sm::find_tdefiner(args.second);
    const auto samples = sm::grid_pairs(args.lo, args.hi, args.steps);
    const sm::ComparisonResult result = sm::compare(star1, star2, samples);

    auto violation_json = [](const std::optional<sm::OrderViolation>& v) {
        if (!v) return json(nullptr);
        return json{{"a", v->a}, {"b", v->b}, {"lhs", v->lhs}, {"rhs", v->rhs}};
    };
    json out = {{"command", "compare-tdefiners"},
                {"first", star1.name},
                {"second", star2.name},
                {"samples", samples.size()},
                {"verdict", sm::to_string(result.verdict)},
                {"le_violation", violation_json(result.le_violation)},
                {"ge_violation", violation_json(result.ge_violation)}};
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"star-metric spaces: generalized triangle inequalities, residuums, "
                 "topology procedures, and a residuum-pruned VP-tree index"};
    app.require_subcommand(1);

    CheckLawsArgs check_args;
    CLI::App* check_cmd = app.add_subcommand(
        "check-laws", "check t-definer and star-metric axioms over a dataset");
    add_space_flags(check_cmd, check_args.common);
    check_cmd->add_option("--points", check_args.points_inline,
                          "inline points: coords ',' separated, points ';' separated");
    check_cmd->add_option("--data", check_args.data_file, "dataset file (csv or json)");
    check_cmd->add_option("--format", check_args.format, "data format; default by extension");
    check_cmd->add_option("--generate", check_args.generate,
                          "generate N seeded points uniform in [0,100]^arity");
    check_cmd->add_option("--seed", check_args.seed, "random seed")->default_val(default_seed());
    check_cmd->add_option("--budget", check_args.budget, "triangle-triple budget")
        ->default_val(1'000'000);
    check_cmd->add_option("--tdefiner-samples", check_args.tdefiner_samples,
                          "random triples for the t-definer axiom suite");
    check_cmd->add_option("--force-tdefiner", check_args.force_tdefiner,
                          "check the axioms against this t-definer instead of the space's own");

    ResiduumArgs residuum_args;
    CLI::App* residuum_cmd =
        app.add_subcommand("residuum", "evaluate a -o b = min{c : c*a >= b}");
    residuum_cmd->add_option("--tdefiner", residuum_args.tdefiner, "t-definer name")
        ->default_val("lukasiewicz");
    residuum_cmd->add_option("a", residuum_args.a, "first argument")->required();
    residuum_cmd->add_option("b", residuum_args.b, "second argument")->required();
    residuum_cmd->add_option("--method", residuum_args.method, "closed, numeric, or both")
        ->default_val("closed");

    QueryArgs query_args;
    CLI::App* query_cmd =
        app.add_subcommand("query", "k-nearest-neighbor / range queries via the VP-tree");
    add_space_flags(query_cmd, query_args.common);
    query_cmd->add_option("--data", query_args.data_file, "dataset file")->required();
    query_cmd->add_option("--queries", query_args.queries_file, "queries file")->required();
    query_cmd->add_option("--format", query_args.format, "data format; default by extension");
    query_cmd->add_option("--k", query_args.k, "number of neighbors");
    query_cmd->add_option("--radius", query_args.radius, "range-query radius (strict)");
    query_cmd->add_option("--leaf-size", query_args.leaf_size, "VP-tree leaf size")
        ->default_val(16);
    query_cmd->add_option("--seed", query_args.seed, "build seed")->default_val(default_seed());
    query_cmd->add_flag("--audit", query_args.audit,
                        "record pruning decisions and cross-check against brute force");

    BallGridArgs grid_args;
    CLI::App* grid_cmd =
        app.add_subcommand("ball-grid", "emit a ball-membership raster (PGM or CSV)");
    add_space_flags(grid_cmd, grid_args.common);
    grid_cmd->add_option("--center", grid_args.center, "ball center, e.g. 0,0")
        ->default_val("0,0");
    grid_cmd->add_option("--radius", grid_args.radius, "ball radius")->default_val(1.0);
    grid_cmd->add_option("--window", grid_args.window, "xmin,xmax,ymin,ymax")
        ->delimiter(',')
        ->expected(4);
    grid_cmd->add_option("--resolution", grid_args.resolution, "cells per axis")
        ->default_val(301);
    grid_cmd->add_option("--format", grid_args.format, "pgm or csv")->default_val("pgm");
    grid_cmd->add_option("--output", grid_args.output, "output file")->required();

    TopologyArgs topo_args;
    CLI::App* topo_cmd = app.add_subcommand(
        "topology-check",
        "separation radii, interior witnesses, normal separation, ball-inclusion chain");
    add_space_flags(topo_cmd, topo_args.common);
    topo_cmd->add_option("--data", topo_args.data_file, "dataset file");
    topo_cmd->add_option("--format", topo_args.format, "data format; default by extension");
    topo_cmd->add_option("--generate", topo_args.generate,
                         "generate N seeded points instead of --data");
    topo_cmd->add_option("--seed", topo_args.seed, "random seed")->default_val(default_seed());
    topo_cmd->add_option("--pairs", topo_args.pairs, "random pairs for separation checks")
        ->default_val(100);
    topo_cmd->add_option("--trials", topo_args.trials, "normal-separation trials")
        ->default_val(10);

    CompareArgs compare_args;
    CLI::App* compare_cmd =
        app.add_subcommand("compare-tdefiners", "pointwise order of two t-definers on a grid");
    compare_cmd->add_option("--first", compare_args.first, "first t-definer")->required();
    compare_cmd->add_option("--second", compare_args.second, "second t-definer")->required();
    compare_cmd->add_option("--grid-lo", compare_args.lo, "grid lower bound")->default_val(0.0);
    compare_cmd->add_option("--grid-hi", compare_args.hi, "grid upper bound")->default_val(10.0);
    compare_cmd->add_option("--grid-steps", compare_args.steps, "grid steps per axis")
        ->default_val(100);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (check_cmd->parsed()) return run_check_laws(check_cmd, check_args);
        if (residuum_cmd->parsed()) return run_residuum(residuum_args);
        if (query_cmd->parsed()) return run_query(query_cmd, query_args);
        if (grid_cmd->parsed()) return run_ball_grid(grid_cmd, grid_args);
        if (topo_cmd->parsed()) return run_topology_check(topo_cmd, topo_args);
        if (compare_cmd->parsed()) return run_compare(compare_args);
    } catch (const sm::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sm::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sm::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << " (bracket [" << e.bracket_lo() << ", "
                  << e.bracket_hi() << "])\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
