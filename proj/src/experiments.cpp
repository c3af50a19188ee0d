#include "mumimo/experiments.hpp"

#include "mumimo/bounds.hpp"
#include "mumimo/errors.hpp"
#include "mumimo/montecarlo.hpp"
#include "mumimo/specfun.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mumimo::exp {

using nlohmann::json;

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };

struct PointValue {
    double value = 0.0;
    double ci95 = 0.0;
    std::int64_t trials = 0;
};

bool is_rate(BoundKind k) { return k != BoundKind::GapBound; }

std::optional<PointValue> evaluate_fixed(const SystemParams& p, const FeedbackScheme& s, BoundKind kind,
                                         const timecorr::FadingProcess& process, std::int64_t trials,
                                         std::uint64_t seed, int workers)
{
    switch (kind) {
    case BoundKind::Ideal:
        return PointValue{bounds::zf_ideal_rate(p.snr, p.m)};
    case BoundKind::GapBound:
        return PointValue{bounds::scheme_gap(p, s, process).gap_bits};
    case BoundKind::Lower:
        return PointValue{bounds::lower_rate(p.snr, p.m, bounds::scheme_gap(p, s, process).gap_bits)};
    case BoundKind::LowerDetect: {
        if (!s.alpha()) return std::nullopt;
        if (!std::holds_alternative<timecorr::BlockIid>(process) || p.delay != 0)
            throw DomainError("error-detection bound is only defined for static block fading");
        return PointValue{*bounds::scheme_detect_lower(p, s)};
    }
    case BoundKind::GenieUpper: {
        mc::SimConfig cfg;
        cfg.params = p;
        cfg.scheme = s;
        cfg.process = process;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.workers = workers;
        const mc::EstimateWithCI e = mc::simulate_genie_rate(cfg);
        return PointValue{e.mean, e.ci95_halfwidth, e.trials};
    }
    case BoundKind::Ceiling: {
        if (p.delay < 1 || !timecorr::is_regular(process)) return std::nullopt;
        return PointValue{timecorr::regular_ceiling(p.m, timecorr::prediction_error(process, 0.0))};
    }
    }
    return std::nullopt;
}

std::string format_double(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s)
{
    double x = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw IoError("malformed number in CSV: " + s);
    return x;
}

template <class Int> Int parse_int(const std::string& s)
{
    Int x = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw IoError("malformed integer in CSV: " + s);
    return x;
}

// Rethrows the active exception with the failing row prepended, keeping its category.
[[noreturn]] void rethrow_with_context(const std::string& where)
{
    try {
        throw;
    } catch (const CapacityError& e) {
        throw CapacityError(where + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(where + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(where + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(where + ": " + e.what());
    }
}

json encode_double(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double decode_double(const json& j)
{
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        throw DomainError("sweep JSON: unexpected string for a number: " + s);
    }
    return j.get<double>();
}

std::string ser_name(QamSerMode m) { return m == QamSerMode::Exact ? "exact" : "bound"; }
std::string rvq_name(RvqStrategy s) { return s == RvqStrategy::Explicit ? "explicit" : "distributional"; }

json scheme_to_json(const FeedbackScheme& s)
{
    json j;
    j["kind"] = s.name();
    if (s.beta_fb) j["beta_fb"] = encode_double(*s.beta_fb);
    std::visit(overloaded{
        [](const scheme::Perfect&) {},
        [](const scheme::AnalogAwgn&) {},
        [&](const scheme::Tdd& t) { if (t.beta_tdd) j["beta_tdd"] = encode_double(*t.beta_tdd); },
        [&](const scheme::DigitalErrorFree& d) {
            if (d.bits) j["bits"] = *d.bits;
            j["rvq"] = rvq_name(d.strategy);
        },
        [&](const scheme::DigitalQam& q) {
            j["alpha"] = q.alpha;
            j["alpha_grid"] = q.alpha_grid;
            j["ser"] = ser_name(q.ser);
        },
        [&](const scheme::MacAnalog& m) { j["l"] = m.l; },
        [&](const scheme::MacDigital& m) {
            j["l"] = m.l;
            j["alpha"] = m.alpha;
            j["alpha_grid"] = m.alpha_grid;
        },
    }, s.kind);
    return j;
}

FeedbackScheme scheme_from_json(const json& j)
{
    FeedbackScheme s;
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("beta_fb")) s.beta_fb = decode_double(j.at("beta_fb"));
    if (kind == "perfect") {
        s.kind = scheme::Perfect{};
    } else if (kind == "analog") {
        s.kind = scheme::AnalogAwgn{};
    } else if (kind == "tdd") {
        scheme::Tdd t;
        if (j.contains("beta_tdd")) t.beta_tdd = decode_double(j.at("beta_tdd"));
        s.kind = t;
    } else if (kind == "digital") {
        scheme::DigitalErrorFree d;
        if (j.contains("bits")) d.bits = j.at("bits").get<double>();
        d.strategy = j.value("rvq", std::string("distributional")) == "explicit" ? RvqStrategy::Explicit
                                                                                : RvqStrategy::Distributional;
        s.kind = d;
    } else if (kind == "qam") {
        scheme::DigitalQam q;
        q.alpha = j.at("alpha").get<double>();
        q.alpha_grid = j.value("alpha_grid", std::vector<double>{});
        q.ser = j.value("ser", std::string("exact")) == "bound" ? QamSerMode::Bound : QamSerMode::Exact;
        s.kind = q;
    } else if (kind == "mac-analog") {
        s.kind = scheme::MacAnalog{j.at("l").get<int>()};
    } else if (kind == "mac-digital") {
        scheme::MacDigital m;
        m.l = j.at("l").get<int>();
        m.alpha = j.at("alpha").get<double>();
        m.alpha_grid = j.value("alpha_grid", std::vector<double>{});
        s.kind = m;
    } else {
        throw DomainError("unknown scheme kind: " + kind);
    }
    return s;
}

json process_to_json(const timecorr::FadingProcess& p)
{
    json j;
    j["kind"] = timecorr::process_name(p);
    if (const auto* jk = std::get_if<timecorr::Jakes>(&p)) j["doppler"] = jk->doppler;
    if (const auto* gm = std::get_if<timecorr::GaussMarkov>(&p)) j["r"] = gm->r;
    if (const auto* t = std::get_if<timecorr::Tabulated>(&p)) {
        j["xi"] = t->xi;
        j["density"] = t->density;
    }
    return j;
}

timecorr::FadingProcess process_from_json(const json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "iid") return timecorr::BlockIid{};
    if (kind == "jakes") return timecorr::Jakes{j.at("doppler").get<double>()};
    if (kind == "gauss-markov") return timecorr::GaussMarkov{j.at("r").get<double>()};
    if (kind == "tabulated")
        return timecorr::make_tabulated(j.at("xi").get<std::vector<double>>(), j.at("density").get<std::vector<double>>());
    throw DomainError("unknown process kind: " + kind);
}

} // namespace

std::string to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::SnrDb: return "snr_db";
    case SweepAxis::BetaFb: return "beta_fb";
    case SweepAxis::Beta1: return "beta1";
    case SweepAxis::GroupSize: return "L";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s)
{
    for (SweepAxis a : {SweepAxis::SnrDb, SweepAxis::BetaFb, SweepAxis::Beta1, SweepAxis::GroupSize})
        if (to_string(a) == s) return a;
    throw DomainError("unknown sweep axis: " + s);
}

void SweepSpec::validate() const
{
    if (axis_values.empty()) throw DomainError("sweep: axis range is empty");
    if (schemes.empty()) throw DomainError("sweep: no schemes");
    if (outputs.empty()) throw DomainError("sweep: no outputs");
    if (processes.empty()) throw DomainError("sweep: no fading process");
    fixed.validate();
    for (BoundKind k : outputs)
        if (k == BoundKind::GenieUpper && trials < 1) throw DomainError("sweep: genie bounds need trials >= 1");
    if (axis == SweepAxis::GroupSize)
        for (const auto& s : schemes)
            if (s.group_size() == 0) throw DomainError("sweep: the L axis needs multiple-access schemes only");
    for (const auto& s : schemes) {
        const auto* grid = s.alpha_grid();
        if (grid && !grid->empty())
            for (double a : *grid)
                if (!(a >= 1.0)) throw DomainError("sweep: alpha grid values must be >= 1");
    }
}

std::optional<EnvelopePoint> envelope_over_alpha(const SystemParams& p, const FeedbackScheme& s, BoundKind kind,
                                                 const std::vector<double>& alpha_grid,
                                                 const timecorr::FadingProcess& process, std::int64_t trials,
                                                 std::uint64_t seed, int workers)
{
    if (alpha_grid.empty()) throw DomainError("envelope_over_alpha: empty alpha grid");
    const bool minimize = !is_rate(kind);
    std::optional<EnvelopePoint> best;
    for (double alpha : alpha_grid) {
        std::optional<PointValue> v;
        try {
            v = evaluate_fixed(p, s.with_alpha(alpha), kind, process, trials, seed, workers);
        } catch (const CapacityError&) {
            throw;
        } catch (const DomainError&) {
            continue; // scheme undefined at this alpha (e.g. constellation below 2 points)
        }
        if (!v) continue;
        const bool better = !best || (minimize ? v->value < best->value : v->value > best->value);
        if (better) best = EnvelopePoint{v->value, v->ci95, alpha, v->trials};
    }
    return best;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    std::vector<double> groups = spec.snr_db_groups;
    if (spec.axis == SweepAxis::SnrDb || groups.empty()) groups = {linear_to_db(spec.fixed.snr)};

    std::vector<ResultRow> rows;
    for (double group_db : groups) {
        for (const auto& process : spec.processes) {
            for (double v : spec.axis_values) {
                for (const FeedbackScheme& base : spec.schemes) {
                    SystemParams p = spec.fixed;
                    FeedbackScheme s = base;
                    double snr_db = group_db;
                    p.snr = db_to_linear(group_db);
                    switch (spec.axis) {
                    case SweepAxis::SnrDb:
                        snr_db = v;
                        p.snr = db_to_linear(v);
                        break;
                    case SweepAxis::BetaFb:
                        p.beta_fb = v;
                        s.beta_fb.reset();
                        break;
                    case SweepAxis::Beta1:
                        p.beta1 = v;
                        break;
                    case SweepAxis::GroupSize: {
                        const int l = static_cast<int>(std::lround(v));
                        if (auto* a = std::get_if<scheme::MacAnalog>(&s.kind)) a->l = l;
                        if (auto* d = std::get_if<scheme::MacDigital>(&s.kind)) d->l = l;
                        break;
                    }
                    }

                    for (BoundKind kind : spec.outputs) {
                        std::ostringstream where;
                        where << "sweep row [scheme=" << s.name() << ", bound=" << to_string(kind)
                              << ", process=" << timecorr::process_name(process) << ", " << to_string(spec.axis)
                              << "=" << v;
                        if (spec.axis != SweepAxis::SnrDb) where << ", snr_db=" << snr_db;
                        where << "]";
                        std::optional<PointValue> value;
                        double alpha = s.alpha().value_or(0.0);
                        try {
                            if (s.is_envelope()) {
                                auto env = envelope_over_alpha(p, s, kind, *s.alpha_grid(), process, spec.trials,
                                                               spec.seed, spec.workers);
                                if (env) {
                                    value = PointValue{env->value, env->ci95, env->trials};
                                    alpha = env->best_alpha;
                                }
                            } else {
                                value = evaluate_fixed(p, s, kind, process, spec.trials, spec.seed, spec.workers);
                            }
                            if (value && is_rate(kind) && spec.frame_length > 0.0) {
                                const double eff = bounds::frame_efficiency(p, s, spec.frame_length);
                                value->value *= eff;
                                value->ci95 *= eff;
                            }
                        } catch (...) {
                            rethrow_with_context(where.str());
                        }
                        if (!value) continue;

                        ResultRow r;
                        r.experiment_id = spec.experiment_id;
                        r.figure_tag = spec.figure_tag;
                        r.scheme = s.name();
                        r.m = p.m;
                        r.l = s.group_size();
                        r.beta1 = p.beta1;
                        r.beta2 = p.beta2;
                        r.beta_fb = std::holds_alternative<scheme::Perfect>(s.kind) ? kPerfect : s.resolved_beta_fb(p);
                        r.alpha = alpha;
                        r.process = timecorr::process_name(process);
                        r.process_param = timecorr::process_param(process);
                        r.delay = p.delay;
                        r.snr_db = snr_db;
                        r.bound_kind = to_string(kind);
                        r.value_bits = value->value;
                        r.ci95 = value->ci95;
                        r.trials = value->trials;
                        r.seed = kind == BoundKind::GenieUpper ? spec.seed : 0;
                        rows.push_back(std::move(r));
                    }
                }
            }
        }
    }
    return rows;
}

std::vector<std::string> figure_tags() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"}; }

SweepSpec figure_preset(const std::string& tag)
{
    SweepSpec s;
    s.experiment_id = tag;
    s.figure_tag = tag;
    s.fixed.m = 4;
    s.fixed.beta1 = kPerfect;
    s.fixed.beta2 = kPerfect;
    s.trials = 20000;
    s.seed = 1;
    const auto snr_axis = make_grid(0.0, 30.0, 2.0);
    const FeedbackScheme analog{scheme::AnalogAwgn{}, std::nullopt};
    const FeedbackScheme digital{scheme::DigitalErrorFree{}, std::nullopt};
    auto qam_envelope = [](double beta_fb_max) {
        scheme::DigitalQam q;
        q.alpha_grid = make_grid(1.0, beta_fb_max, 0.1);
        return FeedbackScheme{q, std::nullopt};
    };

    // Doppler values for 3 and 10 km/h at 2 GHz with 1 ms frames, and matching one-frame correlations.
    constexpr double f_slow = 0.0056;
    constexpr double f_fast = 0.0185;
    auto gm_for = [](double f) { return timecorr::GaussMarkov{specfun::bessel_j0(2.0 * std::numbers::pi * f)}; };

    if (tag == "fig2") {
        s.fixed.beta_fb = 1.0;
        s.axis_values = snr_axis;
        s.schemes = {analog, digital, qam_envelope(1.0)};
        s.outputs = {BoundKind::Ideal, BoundKind::Lower, BoundKind::LowerDetect, BoundKind::GenieUpper};
    } else if (tag == "fig3") {
        s.fixed.beta_fb = 2.0;
        s.axis_values = snr_axis;
        s.schemes = {analog, digital, qam_envelope(2.0)};
        s.outputs = {BoundKind::Ideal, BoundKind::GenieUpper};
    } else if (tag == "fig4") {
        s.axis = SweepAxis::BetaFb;
        s.axis_values = make_grid(1.0, 5.0, 0.5);
        s.snr_db_groups = {10.0, 20.0};
        s.schemes = {analog, digital, qam_envelope(5.0)};
        s.outputs = {BoundKind::Ideal, BoundKind::Lower, BoundKind::GenieUpper};
    } else if (tag == "fig5") {
        s.fixed.beta_fb = 1.0;
        s.axis_values = snr_axis;
        s.schemes = {{scheme::MacAnalog{2}, std::nullopt}, {scheme::MacAnalog{4}, std::nullopt}};
        s.outputs = {BoundKind::Ideal, BoundKind::Lower, BoundKind::GenieUpper};
    } else if (tag == "fig6") {
        s.axis_values = snr_axis;
        scheme::MacDigital md;
        md.l = 4;
        md.alpha = 4.0;
        s.schemes = {{scheme::MacAnalog{2}, 3.0}, {md, 8.0}};
        s.outputs = {BoundKind::Ideal, BoundKind::Lower};
        s.trials = 0;
    } else if (tag == "fig7" || tag == "fig8" || tag == "fig9") {
        s.fixed.beta1 = 1.0;
        s.fixed.beta_fb = kPerfect;
        s.schemes = {{scheme::Perfect{}, std::nullopt}};
        s.trials = 0;
        if (tag == "fig7") {
            s.fixed.delay = 0;
            s.axis_values = make_grid(0.0, 40.0, 2.0);
            s.processes = {timecorr::Jakes{f_fast}, gm_for(f_fast), timecorr::BlockIid{}};
            s.outputs = {BoundKind::Ideal, BoundKind::Lower};
        } else if (tag == "fig8") {
            s.fixed.delay = 1;
            s.axis_values = make_grid(0.0, 60.0, 2.0);
            s.processes = {timecorr::Jakes{f_slow}, gm_for(f_slow), timecorr::Jakes{f_fast}, gm_for(f_fast)};
            s.outputs = {BoundKind::Ideal, BoundKind::Lower, BoundKind::Ceiling};
        } else {
            s.fixed.delay = 1;
            s.axis = SweepAxis::Beta1;
            s.axis_values = make_grid(1.0, 30.0, 1.0);
            s.snr_db_groups = {10.0, 15.0};
            s.processes = {timecorr::Jakes{f_fast}, gm_for(f_fast)};
            s.outputs = {BoundKind::Ideal, BoundKind::Lower};
        }
    } else {
        throw DomainError("unknown figure tag: " + tag);
    }
    return s;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        out << r.experiment_id << ',' << r.figure_tag << ',' << r.scheme << ',' << r.m << ',' << r.l << ','
            << format_double(r.beta1) << ',' << format_double(r.beta2) << ',' << format_double(r.beta_fb) << ','
            << format_double(r.alpha) << ',' << r.process << ',' << format_double(r.process_param) << ','
            << r.delay << ',' << format_double(r.snr_db) << ',' << r.bound_kind << ','
            << format_double(r.value_bits) << ',' << format_double(r.ci95) << ',' << r.trials << ',' << r.seed
            << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError("CSV: missing or unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 18) throw IoError("CSV: expected 18 fields, got " + std::to_string(f.size()));
        ResultRow r;
        r.experiment_id = f[0];
        r.figure_tag = f[1];
        r.scheme = f[2];
        r.m = parse_int<int>(f[3]);
        r.l = parse_int<int>(f[4]);
        r.beta1 = parse_double(f[5]);
        r.beta2 = parse_double(f[6]);
        r.beta_fb = parse_double(f[7]);
        r.alpha = parse_double(f[8]);
        r.process = f[9];
        r.process_param = parse_double(f[10]);
        r.delay = parse_int<int>(f[11]);
        r.snr_db = parse_double(f[12]);
        r.bound_kind = f[13];
        r.value_bits = parse_double(f[14]);
        r.ci95 = parse_double(f[15]);
        r.trials = parse_int<std::int64_t>(f[16]);
        r.seed = parse_int<std::uint64_t>(f[17]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string sweep_to_json(const SweepSpec& spec)
{
    json j;
    j["experiment_id"] = spec.experiment_id;
    j["figure_tag"] = spec.figure_tag;
    j["axis"] = to_string(spec.axis);
    j["axis_values"] = spec.axis_values;
    j["snr_db_groups"] = spec.snr_db_groups;
    const SystemParams& p = spec.fixed;
    j["fixed"] = {{"M", p.m},
                  {"snr", encode_double(p.snr)},
                  {"beta1", encode_double(p.beta1)},
                  {"beta2", encode_double(p.beta2)},
                  {"beta_fb", encode_double(p.beta_fb)},
                  {"gamma", encode_double(p.gamma)},
                  {"beta_up", encode_double(p.beta_up)},
                  {"delay", p.delay}};
    j["schemes"] = json::array();
    for (const auto& s : spec.schemes) j["schemes"].push_back(scheme_to_json(s));
    j["processes"] = json::array();
    for (const auto& pr : spec.processes) j["processes"].push_back(process_to_json(pr));
    j["outputs"] = json::array();
    for (BoundKind k : spec.outputs) j["outputs"].push_back(to_string(k));
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["frame_length"] = spec.frame_length;
    return j.dump(2);
}

SweepSpec sweep_from_json(const std::string& text)
{
    SweepSpec s;
    try {
        const json j = json::parse(text);
        s.experiment_id = j.at("experiment_id").get<std::string>();
        s.figure_tag = j.at("figure_tag").get<std::string>();
        s.axis = sweep_axis_from_string(j.at("axis").get<std::string>());
        s.axis_values = j.at("axis_values").get<std::vector<double>>();
        s.snr_db_groups = j.at("snr_db_groups").get<std::vector<double>>();
        const json& f = j.at("fixed");
        s.fixed.m = f.at("M").get<int>();
        s.fixed.snr = decode_double(f.at("snr"));
        s.fixed.beta1 = decode_double(f.at("beta1"));
        s.fixed.beta2 = decode_double(f.at("beta2"));
        s.fixed.beta_fb = decode_double(f.at("beta_fb"));
        s.fixed.gamma = decode_double(f.at("gamma"));
        s.fixed.beta_up = decode_double(f.at("beta_up"));
        s.fixed.delay = f.at("delay").get<int>();
        s.schemes.clear();
        for (const auto& js : j.at("schemes")) s.schemes.push_back(scheme_from_json(js));
        s.processes.clear();
        for (const auto& jp : j.at("processes")) s.processes.push_back(process_from_json(jp));
        s.outputs.clear();
        for (const auto& jo : j.at("outputs")) s.outputs.push_back(bound_kind_from_string(jo.get<std::string>()));
        s.trials = j.at("trials").get<std::int64_t>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.frame_length = j.value("frame_length", 0.0);
    } catch (const json::exception& e) {
        throw IoError(std::string("sweep JSON: ") + e.what());
    }
    return s;
}

void write_outputs(const std::string& path, const SweepSpec& spec, const std::vector<ResultRow>& rows)
{
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw IoError("cannot open output file: " + path);
    write_csv(csv, rows);
    if (!csv) throw IoError("failed writing: " + path);
    std::ofstream side(path + ".json", std::ios::binary);
    if (!side) throw IoError("cannot open output file: " + path + ".json");
    side << sweep_to_json(spec) << '\n';
    if (!side) throw IoError("failed writing: " + path + ".json");
}

timecorr::FadingProcess parse_process(const std::string& text)
{
    if (text == "iid") return timecorr::BlockIid{};
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("process must be iid, jakes:F, gm:r or table:path");
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    if (kind == "table") return timecorr::load_spectrum_table(arg);
    double x = 0.0;
    try {
        x = parse_double(arg);
    } catch (const IoError&) {
        throw DomainError("process parameter is not a number: " + arg);
    }
    if (kind == "jakes") return timecorr::Jakes{x};
    if (kind == "gm") return timecorr::GaussMarkov{x};
    throw DomainError("unknown process kind: " + kind);
}

std::vector<double> parse_range(const std::string& text)
{
    std::vector<double> parts;
    std::string cell;
    std::istringstream ss(text);
    try {
        while (std::getline(ss, cell, ':')) parts.push_back(parse_double(cell));
    } catch (const IoError&) {
        throw DomainError("malformed range: " + text);
    }
    if (parts.size() == 1) return parts;
    if (parts.size() == 3) return make_grid(parts[0], parts[1], parts[2]);
    throw DomainError("range must be start:stop:step or a single value: " + text);
}

} // namespace mumimo::exp
