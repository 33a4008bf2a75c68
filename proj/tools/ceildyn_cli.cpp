#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "ceildyn/arith.hpp"
#include "ceildyn/chain.hpp"
#include "ceildyn/harness.hpp"
#include "ceildyn/magnitude.hpp"
#include "ceildyn/mult.hpp"
#include "ceildyn/padic.hpp"
#include "ceildyn/squaring.hpp"
#include "ceildyn/window.hpp"

using namespace ceildyn;

namespace {

struct Options {
    std::string num;
    std::string den;
    std::string r;
    std::string map = "g";
    std::string kind = "theta_d3";
    std::vector<std::int64_t> offsets;
    std::uint64_t window = 0;
    bool auto_grow = false;
    std::uint64_t max_steps = 0;
    std::uint64_t scan = 0;
    std::uint64_t depth = 0;
    std::uint64_t p = 3;
    std::uint64_t k = 1;
    unsigned workers = 1;
    std::string format = "table";
    std::string cache;
};

ExperimentConfig to_config(const std::string& command, const Options& o) {
    ExperimentConfig c;
    c.command = command;
    if (!o.num.empty()) c.num = o.num;
    if (!o.den.empty()) c.den = o.den;
    if (!o.r.empty()) c.r = o.r;
    c.offsets = o.offsets;
    c.scan = o.scan;
    c.depth = o.depth;
    c.window = o.window;
    c.auto_grow = o.auto_grow;
    c.max_steps = o.max_steps;
    c.workers = o.workers;
    c.format = parse_format(o.format);
    c.cache_dir = o.cache;
    c.extra = "map=" + o.map + ";kind=" + o.kind + ";p=" + std::to_string(o.p) + ";k=" + std::to_string(o.k);
    c.validate();
    return c;
}

Rational start_value(const Options& o) {
    if (o.num.empty()) throw std::invalid_argument("--num is required");
    BigInt n(o.num);
    BigInt d(o.den.empty() ? "1" : o.den);
    return Rational::normalize(n, d);
}

std::uint64_t need_den(const Options& o) {
    if (o.den.empty()) throw std::invalid_argument("--den is required");
    BigInt d(o.den);
    if (d < 2 || !d.fits_ulong_p()) throw std::invalid_argument("--den must be an integer >= 2");
    return d.get_ui();
}

Rational need_r(const Options& o) {
    if (o.r.empty()) throw std::invalid_argument("--r l/d is required");
    return Rational::parse(o.r);
}

Row row_from(const std::string& input, const StoppingReport& rep) {
    Row row;
    row.input = input;
    if (rep.resolved()) row.theta = rep.steps();
    else row.unresolved = true;
    if (rep.reached) row.reached = rep.reached->get_str();
    if (rep.decimal_digits && rep.reached && *rep.decimal_digits > 60) {
        row.reached.reset();
        row.digits = rep.decimal_digits;
    }
    return row;
}

std::string cmd_traj(const Options& o) {
    const Rational x0 = start_value(o);
    const std::uint64_t cap = o.max_steps ? o.max_steps : 100;
    MapSpec map = Squaring{};
    if (!o.r.empty()) map = ApproxMultiply{need_r(o)};
    Trajectory t = trajectory(x0, map, cap);
    std::ostringstream out;
    out << "0 " << t.start.to_string() << '\n';
    for (std::size_t i = 0; i < t.steps.size(); ++i) out << i + 1 << ' ' << t.steps[i].to_string() << '\n';
    if (t.truncated) out << "truncated\n";
    return out.str();
}

std::string cmd_theta(const Options& o) {
    const Rational x0 = start_value(o);
    const OutputFormat fmt = parse_format(o.format);
    if (!o.r.empty()) {
        const std::uint64_t cap = o.max_steps ? o.max_steps : 100000;
        return format_rows({row_from(x0.to_string(), stopping_time_mult(need_r(o), floor(x0), cap))}, fmt);
    }
    if (o.window > 0) {
        if (x0.is_integer()) return format_rows({row_from(x0.to_string(), stopping_time_exact(x0, 0))}, fmt);
        const std::uint64_t d = x0.den().get_ui();
        return format_rows({row_from(x0.to_string(), stopping_time_windowed(x0.num(), d, o.window, o.auto_grow))}, fmt);
    }
    const std::uint64_t cap = o.max_steps ? o.max_steps : 64;
    return format_rows({row_from(x0.to_string(), stopping_time_exact(x0, cap))}, fmt);
}

std::string cmd_theta2(const Options& o) {
    if (o.num.empty()) throw std::invalid_argument("--num l is required");
    const BigInt l(o.num);
    Denominator2Result res = theta_denominator2(l);
    Row row;
    row.input = Rational::normalize(2 * l + 1, 2).to_string();
    row.index = l;
    row.theta = res.steps;
    if (decimal_digits(res.reached) > 60) row.digits = decimal_digits(res.reached);
    else row.reached = res.reached.get_str();
    return format_rows({row}, parse_format(o.format));
}

std::string cmd_census(const Options& o) {
    const std::uint64_t d = need_den(o);
    const std::uint64_t x = o.scan ? o.scan : 1000;
    const std::uint64_t M = o.window ? o.window : 25;
    const OutputFormat fmt = parse_format(o.format);
    SquaringCensus c = squaring_census(d, x, M, o.workers);
    if (fmt == OutputFormat::table) {
        std::ostringstream out;
        for (const auto& [theta, count] : c.histogram) out << "theta=" << theta << " count=" << count << '\n';
        out << "unresolved=" << c.unresolved.size();
        for (auto l : c.unresolved) out << ' ' << l;
        out << '\n';
        return out.str();
    }
    std::vector<Row> rows;
    for (std::size_t i = 0; i < c.theta.size(); ++i) {
        Row row;
        row.input = std::to_string(i + 1) + "/" + std::to_string(d);
        row.index = BigInt(static_cast<unsigned long>(i + 1));
        row.theta = c.theta[i];
        row.unresolved = !c.theta[i];
        rows.push_back(std::move(row));
    }
    return format_rows(rows, fmt);
}

std::string cmd_dist(const Options& o) {
    const std::uint64_t d = need_den(o);
    const std::uint64_t depth = o.depth ? o.depth : 5;
    const std::uint64_t scan = o.scan ? o.scan : 100000;
    StopDistribution dist = stop_distribution(d, scan, depth, o.workers);
    std::ostringstream out;
    for (std::uint64_t j = 0; j <= depth; ++j) {
        out << j << ' ' << dist.probabilities[j].to_string() << ' '
            << Rational::normalize(BigInt(static_cast<unsigned long>(dist.empirical_counts[j])), BigInt(static_cast<unsigned long>(scan))).to_string()
            << '\n';
    }
    out << "tail " << dist.unresolved_mass.to_string() << ' '
        << Rational::normalize(BigInt(static_cast<unsigned long>(dist.empirical_tail)), BigInt(static_cast<unsigned long>(scan))).to_string()
        << '\n';
    return out.str();
}

std::string cmd_chains(const Options& o) {
    const std::uint64_t d = need_den(o);
    if (o.num.empty()) throw std::invalid_argument("--num is required");
    const BigInt l(o.num);
    const std::uint64_t m = o.depth ? o.depth : 10;
    Chain c = chain_of(l, d, m);
    std::ostringstream out;
    out << "chain";
    for (auto q : c.denominators) out << ' ' << q;
    out << "\nbreaks";
    for (auto [j, ratio] : c.break_points()) out << ' ' << j << ':' << ratio;
    DigitLawReport laws = verify_digit_laws(l, d, m);
    out << "\ndigit_laws " << (laws.holds ? "hold" : "fail " + laws.law) << " steps=" << laws.steps_checked << '\n';
    if (c.complete()) {
        while (c.denominators.size() > 1 && c.denominators[c.denominators.size() - 2] == 1) c.denominators.pop_back();
        ApCount ap = ap_count_for_chain(c, 0);
        out << "classes " << ap.predicted.get_str() << " mod " << ap.modulus.get_str() << '\n';
    }
    return out.str();
}

std::string cmd_alpha(const Options& o) {
    const std::uint64_t d = need_den(o);
    AlphaValue a = alpha_d(d);
    std::ostringstream out;
    out.precision(12);
    out << "alpha=" << a.value << " (" << a.symbolic << ") beta=" << beta_d(d) << '\n';
    return out.str();
}

std::string cmd_padic_tree(const Options& o) {
    const std::uint64_t L = o.depth ? o.depth : 4;
    PrefixTree t = omega_prefix_tree(o.p, o.k, L, o.workers);
    if (parse_format(o.format) == OutputFormat::json) return tree_to_json(t) + "\n";
    std::ostringstream out;
    out.precision(10);
    for (std::size_t l = 0; l < t.levels.size(); ++l) out << "level=" << l + 1 << " size=" << t.levels[l].size() << '\n';
    MeasureBounds mb = hausdorff_measure_bounds(o.p, o.k);
    out << "branching=" << t.branching() << " box_dimension=" << box_dimension_estimate(t)
        << " hausdorff_dimension=" << hausdorff_dimension(o.p, o.k) << " measure=[" << mb.lower << ", " << mb.upper << "]\n";
    return out.str();
}

PeriodicallyLinearMap chosen_map(const Options& o) {
    if (o.map == "two-exception") return two_exception_example();
    if (o.map == "custom") {
        const Rational r = need_r(o);
        return make_map(r.num().get_si(), r.den().get_si(), o.offsets);
    }
    const Rational r = need_r(o);
    if (o.map == "g") return conjugate_g(r);
    if (o.map == "ceil") return ceiling_map(r);
    throw std::invalid_argument("unknown --map '" + o.map + "' (g, ceil, two-exception, custom)");
}

std::string cmd_exceptional(const Options& o) {
    const PeriodicallyLinearMap h = chosen_map(o);
    const std::uint64_t depth = o.depth ? o.depth : 8;
    const std::int64_t x = o.scan ? static_cast<std::int64_t>(o.scan) : 100;
    std::ostringstream out;
    out << describe(MapSpec{h}) << '\n';
    ExceptionalCensus census = exceptional_census(h, BigInt(static_cast<long>(x)), depth);
    out << "sieve_survivors=" << census.count << " bound=" << census.count_bound << '\n';
    const std::uint64_t cap = o.max_steps ? o.max_steps : 10000;
    CertifiedCount cc = certified_exceptional_count(h, x, cap);
    out << "certified=" << cc.exceptional << " unresolved=" << cc.unresolved << '\n';
    if (h.modulus() == 2) {
        for (const auto& cand : exceptional_denominator2(h, depth)) {
            out << (cand.parity ? "odd" : "even") << ' ';
            if (cand.candidate) out << cand.candidate->get_str() << (cand.certified ? " certified" : " uncertified");
            else out << "none";
            out << '\n';
        }
    }
    return out.str();
}

std::string cmd_sigma(const Options& o) {
    const std::uint64_t d = need_den(o);
    const std::uint64_t k = o.depth ? o.depth : 3;
    SigmaSets s = sigma_prime(d, k);
    std::ostringstream out;
    out << "corrected=" << s.corrected.size() << " literal=" << s.literal.size()
        << " literal_not_exceptional=" << s.literal_not_exceptional.size();
    for (const auto& n : s.literal_not_exceptional) out << ' ' << n.get_str();
    out << '\n';
    const BigInt x = pow_ui(d, k);
    if (x.fits_slong_p()) out << "lower_bound " << (lower_bound_check(d, x.get_si()) ? "holds" : "fails") << '\n';
    return out.str();
}

std::string cmd_mahler(const Options& o) {
    if (o.num.empty()) throw std::invalid_argument("--num is required");
    const std::uint64_t cap = o.max_steps ? o.max_steps : 1000;
    auto w = mahler_witness(BigInt(o.num), cap);
    Row row;
    row.input = o.num;
    row.index = BigInt(o.num);
    if (auto* j = std::get_if<std::uint64_t>(&w)) row.theta = *j;
    else row.unresolved = true;
    return format_rows({row}, parse_format(o.format));
}

std::string cmd_floorcheck(const Options& o) {
    const std::uint64_t d_max = o.den.empty() ? 8 : BigInt(o.den).get_ui();
    const std::uint64_t m_max = o.scan ? o.scan : 100;
    const std::uint64_t horizon = o.max_steps ? o.max_steps : 10000;
    std::uint64_t checked = 0, failures = 0;
    std::ostringstream out;
    for (std::uint64_t d = 1; d <= d_max; ++d) {
        for (std::uint64_t m = 1; m <= m_max; ++m) {
            FloorShiftReport rep = floor_shift_check(d, BigInt(static_cast<unsigned long>(m)), horizon);
            ++checked;
            if (!rep.holds) {
                ++failures;
                out << "fail d=" << d << " m=" << m << '\n';
            }
        }
    }
    out << "checked=" << checked << " failures=" << failures << '\n';
    return out.str();
}

std::string cmd_records(const Options& o) {
    const RecordKind kind = parse_record_kind(o.kind);
    const std::uint64_t bound = o.scan ? o.scan : 2000;
    RecordList rl = records(kind, bound, o.window ? o.window : 25, o.workers);
    std::vector<Row> rows;
    for (const auto& [arg, value] : rl.entries) {
        Row row;
        row.input = arg.get_str();
        row.index = arg;
        row.theta = value;
        rows.push_back(std::move(row));
    }
    std::string text = format_rows(rows, parse_format(o.format));
    if (parse_format(o.format) == OutputFormat::table) {
        text += "unresolved=" + std::to_string(rl.unresolved.size());
        for (const auto& a : rl.unresolved) text += " " + a.get_str();
        text += "\n";
    }
    return text;
}

std::string cmd_magnitude(const Options& o) {
    const Rational x0 = start_value(o);
    if (o.max_steps == 0) throw std::invalid_argument("--max-steps is required");
    MagnitudeTracker m = track_magnitude(x0.num(), x0.den().get_ui(), o.max_steps);
    std::ostringstream out;
    out.precision(10);
    out << "log10=" << m.log10_value << " error=" << m.error_bound;
    if (m.digit_count) out << " digits=" << m.digit_count->get_str();
    out << " log10_digits=" << m.log10_digit_count << "+-" << m.log10_digit_count_error << '\n';
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experiments with x*ceil(x), r*ceil(x) and their relatives"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--num", o.num, "numerator (or integer argument)");
        sub->add_option("--den", o.den, "denominator");
        sub->add_option("--r", o.r, "multiplier l/d");
        sub->add_option("--window", o.window, "digit window M");
        sub->add_flag("--auto-grow", o.auto_grow, "double the window until resolved");
        sub->add_option("--max-steps", o.max_steps, "step budget");
        sub->add_option("--scan", o.scan, "range bound");
        sub->add_option("--depth", o.depth, "depth or level count");
        sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", o.format, "json|csv|bfile|table")->check(CLI::IsMember({"json", "csv", "bfile", "table"}));
        sub->add_option("--cache", o.cache, "result cache directory");
    };

    struct Entry {
        const char* name;
        const char* help;
        std::string (*run)(const Options&);
    };
    const Entry entries[] = {
        {"traj", "print a trajectory", cmd_traj},
        {"theta", "stopping time of one start", cmd_theta},
        {"theta2", "stopping time of (2l+1)/2 in closed form", cmd_theta2},
        {"census", "stopping times of l/d for l <= scan", cmd_census},
        {"dist", "exact and empirical stopping distribution", cmd_dist},
        {"chains", "denominator chain of l/d", cmd_chains},
        {"alpha", "density exponents for d", cmd_alpha},
        {"padic-tree", "prefix tree of the p-adic exceptional set", cmd_padic_tree},
        {"exceptional", "exceptional set of a periodically linear map", cmd_exceptional},
        {"sigma", "digit-restricted exceptional sets of l*ceil(x/d), l = 1", cmd_sigma},
        {"mahler", "first j with ceil(3x/2) iterate = 3 mod 4", cmd_mahler},
        {"floorcheck", "floor/ceiling shift identity for r = (d+1)/d", cmd_floorcheck},
        {"records", "record stopping times", cmd_records},
        {"magnitude", "log10 of a deep iterate", cmd_magnitude},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub);
        subs.emplace_back(sub, &e);
    }
    for (auto& [sub, e] : subs) {
        const std::string name = e->name;
        if (name == "exceptional") {
            sub->add_option("--map", o.map, "g | ceil | two-exception | custom");
            sub->add_option("--offsets", o.offsets, "offsets l_0..l_{d-1} for --map custom");
        }
        if (name == "records") sub->add_option("--kind", o.kind, "theta_d3 | theta_succ | theta_mult");
        if (name == "padic-tree") {
            sub->add_option("--p", o.p, "prime");
            sub->add_option("--k", o.k, "pole order");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, e] : subs) {
            if (!sub->parsed()) continue;
            ExperimentConfig config = to_config(e->name, o);
            std::cout << cached_run(config, [&] { return e->run(o); });
            return 0;
        }
    } catch (const InvariantViolation& ex) {
        std::cerr << "internal assertion failed: " << ex.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "invalid argument: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 2;
}
