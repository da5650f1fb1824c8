// Batch subcommands behind the shiftlab executable. Each runner resolves its
// configuration, computes, and returns a manifest plus named output files;
// writing them to disk is a separate step so runs can be inspected in memory.
#pragma once

#include "shiftlab/dsl.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/shiftlab.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace shiftlab::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kVerificationFailed = 3 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InsufficientHorizon:
    case ErrorKind::HorizonExhausted:
    case ErrorKind::NoCertificate: return kRuntime;
    default: return kValidation;
    }
}

inline constexpr const char *kSchema = "shiftlab-manifest/1";

struct Options {
    std::string command;
    dsl::Config config;
    std::optional<Index> horizon; // overrides the config key
    std::uint64_t seed = 0;
    std::string format = "csv";   // tabular outputs: csv | json
    unsigned threads = 1;
};

struct Result {
    int exit = kOk;
    io::Json manifest;
    std::map<std::string, std::string> files; // file name → contents
};

/// min(hardware threads, SHIFTLAB_THREADS) with a floor of 1.
inline unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("SHIFTLAB_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception &) {
            throw Error(ErrorKind::InvalidArgument, std::string("SHIFTLAB_THREADS must be a positive integer, got '") + env + "'");
        }
    }
    return n;
}

/// Reads config keys with defaults and records the values actually used.
class Resolver {
public:
    Resolver(const dsl::Config &cfg, std::set<std::string> allowed) : cfg_(cfg), allowed_(std::move(allowed)) {
        for (const auto &[key, value] : cfg_.values())
            if (!allowed_.count(key))
                throw Error(ErrorKind::InvalidArgument, cfg_.where(key) + "unknown key '" + key + "' for this command");
    }

    std::string text(const std::string &key, const std::string &fallback) {
        return note(key, cfg_.get(key, fallback));
    }

    template <class F>
    auto parsed(const std::string &key, const std::string &fallback, F &&parse) {
        auto v = cfg_.with_line_or(key, fallback, std::forward<F>(parse));
        note(key, cfg_.get(key, fallback));
        return v;
    }

    Index index(const std::string &key, Index fallback, Index min = 0) {
        const Index v = cfg_.index_or(key, fallback);
        if (v < min)
            throw Error(ErrorKind::InvalidArgument, cfg_.where(key) + key + " must be >= " + std::to_string(min));
        note(key, std::to_string(v));
        return v;
    }

    double real(const std::string &key, double fallback) {
        const double v = cfg_.real_or(key, fallback);
        std::ostringstream s;
        s.precision(17);
        s << v;
        note(key, s.str());
        return v;
    }

    double p(double fallback = 2.0) {
        const double v = real("p", fallback);
        if (!(v >= 1.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, cfg_.where("p") + "p must lie in [1, inf)");
        return v;
    }

    void override_value(const std::string &key, const std::string &value) { used_[key] = value; }

    const std::map<std::string, std::string> &used() const { return used_; }

    io::Json json() const {
        io::Json j = io::Json::object();
        for (const auto &[k, v] : used_) j[k] = v;
        return j;
    }

private:
    std::string note(const std::string &key, std::string value) {
        used_[key] = value;
        return value;
    }

    const dsl::Config &cfg_;
    std::set<std::string> allowed_;
    std::map<std::string, std::string> used_;
};

namespace detail {

inline Index horizon_of(Resolver &r, const Options &opt, Index fallback, Index min = 2) {
    if (opt.horizon) {
        if (*opt.horizon < min)
            throw Error(ErrorKind::InvalidArgument, "--horizon must be >= " + std::to_string(min));
        r.override_value("horizon", std::to_string(*opt.horizon));
        return *opt.horizon;
    }
    return r.index("horizon", fallback, min);
}

inline io::Json base_manifest(const Options &opt, const Resolver &r) {
    return io::Json{{"schema", kSchema}, {"command", opt.command}, {"seed", opt.seed}, {"config", r.json()}};
}

/// Adds a table either as CSV or as a JSON array of row objects.
inline void add_table(Result &res, const Options &opt, const std::string &stem, const std::string &csv,
                      const std::vector<std::string> &header) {
    if (opt.format == "json") {
        io::Json rows = io::Json::array();
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            const auto cells = dsl::split(line, ',');
            io::Json row = io::Json::object();
            for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cells[k];
            rows.push_back(row);
        }
        res.files[stem + ".json"] = rows.dump(2);
    } else {
        res.files[stem + ".csv"] = csv;
    }
}

inline void add_vector(Result &res, const Options &opt, const SeqVector &x, Index limit) {
    add_table(res, opt, "vector_blocks", io::vector_blocks_csv(x, limit), {"index", "coef", "divisor_lo", "divisor_hi"});
}

inline io::Json stage_json(const TMStage &s) {
    return {{"t", s.t}, {"k", s.k}, {"m", s.m}, {"m_hat", s.m_hat}, {"alpha", s.alpha},
            {"beta", s.beta}, {"gamma", s.gamma}, {"x", s.x}, {"eps", s.eps.get_str()}};
}

} // namespace detail

// ---------------------------------------------------------------- density

inline Result cmd_density(const Options &opt) {
    Resolver r(opt.config, {"sets", "horizon", "trace_step", "ideal", "delta"});
    const std::string sets_text = r.text("sets", "evens | odds | squares | interval-union base=2");
    const Index N = detail::horizon_of(r, opt, 100'000);
    const Index step = r.index("trace_step", std::max<Index>(1, N / 100), 1);
    const auto ideal = r.parsed("ideal", "Z", [](const std::string &v) { return dsl::parse_ideal(v); });
    const double delta = r.real("delta", 0.05);
    if (!(delta > 0)) throw Error(ErrorKind::InvalidArgument, opt.config.where("delta") + "delta must be positive");
    std::vector<NatSet> sets;
    for (const auto &part : dsl::split(sets_text, '|')) {
        try {
            sets.push_back(dsl::parse_set(part));
        } catch (const Error &e) {
            throw Error(e.kind(), opt.config.where("sets") + e.detail());
        }
    }

    Result res;
    res.manifest = detail::base_manifest(opt, r);
    const std::vector<std::string> header{"set", "n", "count", "mu"};
    io::CsvWriter trace(header);
    io::Json summary = io::Json::array();
    for (const auto &s : sets) {
        const auto tr = density_trace(s, N);
        for (Index n = 0; n <= N; n += step) trace.add(s.name(), n, tr.values[n].num, tr.values[n].to_double());
        if (N % step != 0) trace.add(s.name(), N, tr.values[N].num, tr.values[N].to_double());
        summary.push_back({{"set", s.name()},
                           {"upper_density_estimate", io::fraction_json(tr.running_sup_tail)},
                           {"lower_density_estimate", io::fraction_json(tr.running_inf_tail)},
                           {"upper_log_density_estimate", upper_log_density_estimate(s, N)},
                           {"ideal", ideal.name()},
                           {"membership", to_string(in_ideal_at_horizon(ideal, s, std::max<Index>(N, 4), delta))}});
    }
    detail::add_table(res, opt, "density_trace", trace.str(), header);
    res.manifest["results"] = {{"horizon", N}, {"sets", summary}};
    return res;
}

// ---------------------------------------------------------------- criterion

inline Result cmd_criterion(const Options &opt) {
    Resolver r(opt.config, {"weight", "p", "horizon"});
    const auto w = r.parsed("weight", "constant 2", [](const std::string &v) { return dsl::parse_weight(v); });
    const double p = r.p();
    const Index N = detail::horizon_of(r, opt, 100'000);
    const auto rep = bayart_ruzsa_report(w, p, N);
    Result res;
    res.manifest = detail::base_manifest(opt, r);
    res.manifest["results"] = {{"weight", w.name()},
                               {"p", p},
                               {"horizon", N},
                               {"classification", to_string(rep.classification)},
                               {"partial_sum", std::isfinite(rep.partial_sum) ? io::Json(rep.partial_sum) : io::Json("inf")},
                               {"log_partial_sum", rep.log_partial_sum}};
    return res;
}

// ---------------------------------------------------------------- construct

namespace detail {

inline Result construct_fhc(const Options &opt, Resolver &r) {
    const auto w = r.parsed("weight", "constant 2", [](const std::string &v) { return dsl::parse_weight(v); });
    const double p = r.p();
    const Index N = horizon_of(r, opt, 100'000);
    FhcOptions fo;
    fo.targets = r.index("targets", 3, 1);
    fo.window = r.index("window", 0);
    fo.space = Space::lp(p);
    const Rational radius = r.parsed("radius", "1/1000", [](const std::string &v) { return parse_rational(v); });
    if (radius <= 0) throw Error(ErrorKind::InvalidArgument, opt.config.where("radius") + "radius must be positive");
    const Index limit = r.index("blocks_limit", 1000);
    const TargetEnumeration targets(TargetMode::Generic, p);
    Index reach = fo.window;
    for (Index i = 0; i < fo.targets; ++i) reach = std::max<Index>(reach, targets.target(i).size());
    const auto fhc = fhc_schedule(targets, w, N + reach + 1, fo);

    Result res;
    res.manifest = base_manifest(opt, r);
    io::Json served = io::Json::array();
    for (Index i = 0; i < fhc.targets; ++i) {
        const Cylinder u(std::max<Index>(fo.window, support_bound(fhc.served[i])), fhc.served[i], radius);
        auto [lo, hi] = density_window(visit_flags(w, fhc.y, u, N), N);
        served.push_back({{"index", i},
                          {"target", io::rationals_json(fhc.served[i])},
                          {"visit_lower_density", io::fraction_json(lo)},
                          {"visit_upper_density", io::fraction_json(hi)},
                          {"positive", lo.num > 0}});
    }
    res.manifest["results"] = {{"construction", "fhc"},
                               {"weight", w.name()},
                               {"period", fhc.period},
                               {"scheduled_density", fhc.scheduled_density.get_str()},
                               {"targets", served},
                               {"log_tail_bound_at_horizon", fhc.y.certificate().log_tail_bound(N)},
                               {"norm_upper", p_norm(w, fhc.y, p, N).upper}};
    add_vector(res, opt, fhc.y, limit);
    return res;
}

inline BairePoint resolve_point(Resolver &r, const Options &opt, Index stages) {
    const std::string text = r.text("point", "diagonal");
    if (dsl::trim(text) == "random") {
        std::mt19937_64 rng(opt.seed);
        BairePoint x;
        for (Index n = 0; n < stages; ++n) x.push_back(std::uniform_int_distribution<Index>(0, n)(rng));
        return x;
    }
    BairePoint x = opt.config.with_line_or("point", text, [&](const std::string &v) { return dsl::parse_point(v, stages); });
    if (!delta_check(x)) throw Error(ErrorKind::InvalidArgument, opt.config.where("point") + "point violates x_n <= n");
    return x;
}

inline Result construct_tm(const Options &opt, Resolver &r) {
    const auto w = r.parsed("weight", "constant 2", [](const std::string &v) { return dsl::parse_weight(v); });
    const double p = r.p();
    const Index stages = r.index("stages", 5, 1);
    const Index H = horizon_of(r, opt, 4'000'000);
    const Index samples = r.index("checks", 40, 1);
    const Index limit = r.index("blocks_limit", 1000);
    const BairePoint x = resolve_point(r, opt, stages);

    const auto setup = tm_prepare(w, stages, H, p, opt.threads);
    TMOptions to;
    to.stages = stages;
    const TMSchedule sched = tm_build_schedule(x, setup.stats, to);
    const SeqVector &y = setup.fhc.y;
    const auto z = tm_f(x, y, sched, w);

    Index checked = 0, passed = 0;
    io::Json failures = io::Json::array();
    for (Index t = 0; t < sched.size(); ++t) {
        const auto &s = sched.stages[t];
        const Index start = sched.gamma_prev(t) + (s.x + 1) * s.m_hat;
        const Index step = std::max<Index>(1, s.m / samples);
        for (Index u = 0; u < s.m; u += step) {
            const Index n = start + u;
            if (tm_iota(sched, n) == 0) continue;
            for (Index i = 0; i <= t; ++i) {
                const bool ok = tm_claim_equivalence_check(w, z, y, sched, i, n, Arithmetic::Exact);
                ++checked;
                passed += ok;
                if (!ok && failures.size() < 10) failures.push_back({{"i", i}, {"n", n}});
            }
        }
    }
    const auto dom = tm_norm_domination_check(w, z, y, sched);
    const auto zd = tm_zero_density_check(z, sched, sched.length() - 1);
    bool formula = true;
    io::Json zstages = io::Json::array();
    for (const auto &st : zd.stages) {
        formula = formula && st.block_ratio == st.formula;
        zstages.push_back({{"t", st.t},
                           {"block_ratio", st.block_ratio.get_str()},
                           {"formula", st.formula.get_str()},
                           {"measured_min", io::fraction_json(st.measured_min)},
                           {"gamma_ok", st.gamma_ok}});
    }
    io::Json stage_rows = io::Json::array();
    io::Json densities = io::Json::array();
    for (const auto &s : sched.stages) stage_rows.push_back(stage_json(s));
    for (Index j = 0; j < setup.stats.count(); ++j)
        densities.push_back({{"j", j}, {"lower", io::fraction_json(setup.stats.lower_density[j])},
                             {"upper", io::fraction_json(setup.stats.upper_density[j])}});

    Result res;
    res.manifest = base_manifest(opt, r);
    const bool ok = checked > 0 && passed == checked && dom.holds && formula;
    res.manifest["results"] = {
        {"construction", "tm"},
        {"weight", w.name()},
        {"point", x},
        {"visit_horizon", H},
        {"visit_densities", densities},
        {"stages", stage_rows},
        {"length", sched.length()},
        {"claim_equivalence", {{"checked", checked}, {"passed", passed},
                               {"pass_rate", checked ? static_cast<double>(passed) / static_cast<double>(checked) : 0.0},
                               {"failures", failures}}},
        {"norm_domination", {{"holds", dom.holds}, {"checked", dom.checked}}},
        {"zero_density", {{"horizon", zd.horizon}, {"lower_estimate", io::fraction_json(zd.lower_estimate)},
                          {"stages", zstages}}},
        {"norm_upper_z", p_norm(w, z, p).upper},
        {"norm_upper_y", p_norm(w, y, p, sched.stages.back().alpha).upper},
        {"status", ok ? "pass" : "fail"}};
    add_vector(res, opt, z, limit);
    res.exit = ok ? kOk : kVerificationFailed;
    return res;
}

inline Result construct_eq(const Options &opt, Resolver &r) {
    const auto w = r.parsed("weight", "constant 2", [](const std::string &v) { return dsl::parse_weight(v); });
    const double p = r.p();
    const Index i_max = r.index("i_max", 5), j_max = r.index("j_max", 8);
    const Index H = horizon_of(r, opt, 4'000'000);
    const auto phi = r.parsed("lscsm", "cardinality", [](const std::string &v) { return dsl::parse_lscsm(dsl::trim(v)); });
    const Index limit = r.index("blocks_limit", 1000);

    const TargetEnumeration targets(TargetMode::Generic, p);
    EqOptions eo;
    eo.stages = pairing::pair(i_max, j_max) + 1;
    FhcOptions fo;
    fo.space = Space::lp(p);
    fo.targets = 0;
    for (Index t = 0; t < eo.stages; ++t) fo.targets = std::max(fo.targets, pairing::unpair(t).first + 1);
    for (Index i = 0; i < fo.targets; ++i) fo.window = std::max(fo.window, targets.m(i));
    const auto fhc = fhc_schedule(targets, w, H, fo);
    const auto blocks = eq_build_blocks(fhc.y, targets, phi, w, eo);
    const auto z = eq_vector(fhc.y, blocks);

    io::Json rows = io::Json::array();
    Index violations = 0;
    for (Index i = 0; i <= i_max; ++i)
        for (Index j = 0; j <= j_max; ++j) {
            const auto *st = blocks.find(i, j);
            const auto row = eq_error(w, z, targets, *st, p);
            violations += !row.holds;
            rows.push_back({{"i", row.i}, {"j", row.j}, {"t", row.t}, {"g", row.g}, {"error", row.error},
                            {"bound", row.bound}, {"holds", row.holds}, {"block_size", st->F.size()},
                            {"phi", st->phi}});
        }
    Result res;
    res.manifest = base_manifest(opt, r);
    res.manifest["results"] = {{"construction", "eq"},
                               {"weight", w.name()},
                               {"lscsm", phi.name()},
                               {"stages", eo.stages},
                               {"op_norm", blocks.op_norm},
                               {"pairs", rows},
                               {"violations", violations},
                               {"norm_upper_z", p_norm(w, z, p).upper},
                               {"status", violations == 0 ? "pass" : "fail"}};
    add_vector(res, opt, z, limit);
    res.exit = violations == 0 ? kOk : kVerificationFailed;
    return res;
}

inline std::function<Index(Index)> parse_h(const std::string &name) {
    if (name == "two_adic") return two_adic_h;
    if (name == "identity") return [](Index i) { return i; };
    throw Error(ErrorKind::InvalidArgument, "unknown h '" + name + "' (two_adic | identity)");
}

inline Result construct_ne_plan(const Options &opt, Resolver &r) {
    const double p = r.p();
    const Index i_max = r.index("i_max", 1, 1);
    const auto h = r.parsed("h", "two_adic", [](const std::string &v) { return parse_h(dsl::trim(v)); });
    const TargetEnumeration targets(TargetMode::NeRescaled, p);
    const auto plan = ne_index_plan(i_max, h, targets);

    const std::vector<std::string> header{"i", "h", "m", "n", "q", "integral", "length_identity", "first_term",
                                          "second_term", "third_term", "fourth_term", "chain_ok"};
    io::CsvWriter csv(header);
    io::Json rows = io::Json::array();
    for (const auto &row : plan.rows) {
        csv.add(row.i, row.h, row.m, row.n.get_str(), row.q.get_str(), row.integral, row.length_identity,
                std::exp(row.log_first_term), row.second_term, row.third_term, row.fourth_term.get_str(), row.chain_ok);
        rows.push_back({{"i", row.i},
                        {"h", row.h},
                        {"m", row.m},
                        {"n", row.n.get_str()},
                        {"exponent", row.exponent.get_str()},
                        {"J_lo", row.j_lo.to_string()},
                        {"J_hi", row.j_hi.to_string()},
                        {"r", row.r.to_string()},
                        {"q", row.q.get_str()},
                        {"integral", row.integral},
                        {"length_identity", row.length_identity},
                        {"log_first_term", row.log_first_term},
                        {"second_term", row.second_term},
                        {"third_term", row.third_term},
                        {"fourth_term", row.fourth_term.get_str()},
                        {"chain_ok", row.chain_ok}});
    }
    const bool ok = plan.disjoint && plan.strictly_increasing;
    Result res;
    res.manifest = base_manifest(opt, r);
    res.manifest["results"] = {{"construction", "ne_plan"},
                               {"n_0", plan.rows.front().n.get_str()},
                               {"rows", rows},
                               {"disjoint", plan.disjoint},
                               {"strictly_increasing", plan.strictly_increasing},
                               {"norm_bound_sum", plan.norm_bound_sum},
                               {"status", ok ? "pass" : "fail"}};
    add_table(res, opt, "ne_plan", csv.str(), header);
    res.exit = ok ? kOk : kVerificationFailed;
    return res;
}

inline Result construct_ne_scaled(const Options &opt, Resolver &r) {
    const double p = r.p();
    const Index count = r.index("blocks", 4, 1), ratio = r.index("ratio", 24, 1), first = r.index("first", 1, 1);
    const Index N = horizon_of(r, opt, 1'000'000);
    const Rational eps = r.parsed("radius", "1/1000000000", [](const std::string &v) { return parse_rational(v); });
    if (eps <= 0) throw Error(ErrorKind::InvalidArgument, opt.config.where("radius") + "radius must be positive");
    const Index limit = r.index("blocks_limit", 1000);
    const auto w = WeightSequence::fratio(p);
    const TargetEnumeration targets(TargetMode::NeRescaled, p);
    const auto ne = ne_vector_scaled(p, ne_default_scaled_schedule(count, ratio, first), targets);
    const auto visits = ne_visit_report(w, ne, targets, N, eps);

    io::Json sched = io::Json::array();
    for (std::size_t b = 0; b < ne.schedule.size(); ++b)
        sched.push_back({{"start", ne.schedule[b].start}, {"len", ne.schedule[b].len}, {"target", ne.schedule[b].target},
                         {"r", ne.r[b]}, {"q", ne.q[b]}, {"m", ne.m[b]}});
    io::Json rows = io::Json::array();
    bool ok = true;
    for (const auto &v : visits) {
        const bool reached = v.block_end.num > 0;
        const bool holds = v.block_end.to_double() >= v.expected - 0.05;
        if (reached) ok = ok && holds;
        rows.push_back({{"target", v.target}, {"m", v.m}, {"block_end_density", io::fraction_json(v.block_end)},
                        {"window_upper_density", io::fraction_json(v.window_upper)}, {"expected", v.expected},
                        {"within_tolerance", holds}, {"block_ended_by_horizon", reached}});
    }
    Result res;
    res.manifest = base_manifest(opt, r);
    res.manifest["results"] = {{"construction", "ne_scaled"},
                               {"weight", w.name()},
                               {"schedule", sched},
                               {"visits", rows},
                               {"norm", p_norm(w, ne.z, p).upper},
                               {"certificate", "finite support"},
                               {"status", ok ? "pass" : "fail"}};
    add_vector(res, opt, ne.z, limit);
    res.exit = ok ? kOk : kVerificationFailed;
    return res;
}

} // namespace detail

inline Result cmd_construct(const Options &opt) {
    const std::string which = dsl::trim(opt.config.get("construction", ""));
    static const std::map<std::string, std::set<std::string>> keys{
        {"fhc", {"weight", "p", "horizon", "targets", "window", "radius", "blocks_limit"}},
        {"tm", {"weight", "p", "stages", "horizon", "checks", "point", "blocks_limit"}},
        {"eq", {"weight", "p", "i_max", "j_max", "horizon", "lscsm", "blocks_limit"}},
        {"ne_plan", {"p", "i_max", "h"}},
        {"ne_scaled", {"p", "blocks", "ratio", "first", "horizon", "radius", "blocks_limit"}}};
    auto it = keys.find(which);
    if (it == keys.end())
        throw Error(ErrorKind::InvalidArgument, opt.config.where("construction") + "construction must be one of fhc, tm, eq, ne_plan, ne_scaled");
    auto allowed = it->second;
    allowed.insert("construction");
    Resolver r(opt.config, allowed);
    r.text("construction", which);
    if (which == "fhc") return detail::construct_fhc(opt, r);
    if (which == "tm") return detail::construct_tm(opt, r);
    if (which == "eq") return detail::construct_eq(opt, r);
    if (which == "ne_plan") return detail::construct_ne_plan(opt, r);
    return detail::construct_ne_scaled(opt, r);
}

// ---------------------------------------------------------------- verify

inline Result cmd_verify(const Options &opt) {
    Resolver r(opt.config, {"suites", "M", "families", "instances", "family", "family_bound"});
    const std::string suites_text = r.text("suites", "hat lscsm algebra");
    const Index M = r.index("M", 10);
    if (M > 16) throw Error(ErrorKind::InvalidArgument, opt.config.where("M") + "M must be <= 16");
    const Index families = r.index("families", 100);
    const Index instances = r.index("instances", 1000);
    std::vector<FiniteFamily> extra;
    if (opt.config.has("family")) {
        const Index bound = r.index("family_bound", M);
        extra.push_back(opt.config.with_line("family", [&](const std::string &v) {
            io::Json j;
            try {
                j = io::Json::parse(v);
            } catch (const io::Json::parse_error &e) {
                throw Error(ErrorKind::InvalidArgument, std::string("family is not JSON: ") + e.what());
            }
            return io::family_from_json(j, static_cast<unsigned>(bound));
        }));
        r.text("family", opt.config.get("family", ""));
    }
    std::set<std::string> wanted;
    {
        std::istringstream in(suites_text);
        std::string s;
        while (in >> s) {
            if (s != "hat" && s != "lscsm" && s != "algebra")
                throw Error(ErrorKind::InvalidArgument, opt.config.where("suites") + "unknown suite '" + s + "'");
            wanted.insert(s);
        }
    }
    // Suites are independent; run them on separate threads within the budget.
    std::vector<verify::SuiteResult> hat, lscsm, algebra;
    {
        std::vector<std::jthread> pool;
        auto launch = [&](auto &&job) {
            if (opt.threads > 1) pool.emplace_back(job);
            else job();
        };
        if (wanted.count("hat"))
            launch([&] { hat = {verify::hat_suite(opt.seed, static_cast<unsigned>(M), static_cast<unsigned>(families), extra)}; });
        if (wanted.count("lscsm"))
            launch([&] { lscsm = {verify::lscsm_suite(opt.seed + 1, static_cast<unsigned>(instances))}; });
        if (wanted.count("algebra"))
            launch([&] { algebra = verify::algebra_suites(opt.seed + 2, static_cast<unsigned>(instances)); });
    }
    std::vector<verify::SuiteResult> all;
    for (auto *v : {&hat, &lscsm, &algebra}) all.insert(all.end(), v->begin(), v->end());

    io::Json suites = io::Json::array();
    bool ok = true;
    for (const auto &s : all) {
        ok = ok && s.ok();
        io::Json row{{"suite", s.name}, {"checked", s.checked}, {"passed", s.passed}, {"ok", s.ok()}};
        row["first_failure"] = s.first_failure ? io::Json(*s.first_failure) : io::Json(nullptr);
        suites.push_back(row);
    }
    Result res;
    res.manifest = detail::base_manifest(opt, r);
    res.manifest["results"] = {{"suites", suites}, {"status", ok ? "pass" : "fail"}};
    res.exit = ok ? kOk : kVerificationFailed;
    return res;
}

// ---------------------------------------------------------------- driver

inline Result run(const Options &opt) {
    if (opt.format != "csv" && opt.format != "json")
        throw Error(ErrorKind::InvalidArgument, "--format must be csv or json");
    if (opt.command == "density") return cmd_density(opt);
    if (opt.command == "criterion") return cmd_criterion(opt);
    if (opt.command == "construct") return cmd_construct(opt);
    if (opt.command == "verify") return cmd_verify(opt);
    throw Error(ErrorKind::InvalidArgument, "unknown subcommand '" + opt.command + "'");
}

/// Writes manifest.json, resolved.cfg and every output file into dir.
inline std::vector<std::filesystem::path> write_outputs(const Result &res, const std::filesystem::path &dir) {
    std::vector<std::filesystem::path> written;
    io::Json manifest = res.manifest;
    io::Json outputs = io::Json::array();
    for (const auto &[name, text] : res.files) outputs.push_back(name);
    outputs.push_back("resolved.cfg");
    manifest["outputs"] = outputs;
    manifest["exit_code"] = res.exit;
    for (const auto &[name, text] : res.files) {
        io::write_text(dir / name, text);
        written.push_back(dir / name);
    }
    std::string cfg = "# replay: shiftlab " + manifest.value("command", std::string()) + " --config resolved.cfg --seed " +
                      std::to_string(manifest.value("seed", std::uint64_t{0})) + "\n";
    for (const auto &[k, v] : manifest["config"].items()) cfg += k + " = " + v.get<std::string>() + "\n";
    io::write_text(dir / "resolved.cfg", cfg);
    written.push_back(dir / "resolved.cfg");
    io::write_json(dir / "manifest.json", manifest);
    written.push_back(dir / "manifest.json");
    return written;
}

} // namespace shiftlab::cli
