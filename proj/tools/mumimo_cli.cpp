#include "mumimo/bounds.hpp"
#include "mumimo/errors.hpp"
#include "mumimo/experiments.hpp"
#include "mumimo/specfun.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace mumimo;

namespace {

struct LinkOptions {
    std::string scheme = "analog";
    int m = 4;
    int l = 0;
    double beta1 = kPerfect;
    double beta2 = kPerfect;
    double beta_fb = 1.0;
    std::string alpha = "1";
    double gamma = 1.0;
    double beta_up = kPerfect;
    double bits = -1.0;
    std::string ser = "exact";
    std::string snr_db = "0:30:2";
    std::string process = "iid";
    int delay = 0;
    std::string out;
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    int workers = 0;
};

void add_link_flags(CLI::App* cmd, LinkOptions& o)
{
    cmd->add_option("--scheme", o.scheme, "perfect|analog|tdd|digital|qam|mac-analog|mac-digital")
        ->check(CLI::IsMember({"perfect", "analog", "tdd", "digital", "qam", "mac-analog", "mac-digital"}));
    cmd->add_option("--m", o.m, "BS antennas (= users)");
    cmd->add_option("--l", o.l, "users per feedback group (MAC schemes); default M");
    cmd->add_option("--beta1", o.beta1, "common training length / M (inf = perfect)");
    cmd->add_option("--beta2", o.beta2, "dedicated training length / M (inf = perfect)");
    cmd->add_option("--beta-fb", o.beta_fb, "feedback channel uses per coefficient");
    cmd->add_option("--alpha", o.alpha, "quantizer scaling; a range gives the envelope");
    cmd->add_option("--gamma", o.gamma, "uplink/downlink power ratio");
    cmd->add_option("--beta-up", o.beta_up, "uplink pilots for the MAC estimate (inf = perfect)");
    cmd->add_option("--bits", o.bits, "fixed RVQ bits for the digital scheme");
    cmd->add_option("--ser", o.ser, "QAM symbol error model")->check(CLI::IsMember({"exact", "bound"}));
    cmd->add_option("--snr-db", o.snr_db, "start:stop:step or a single value");
    cmd->add_option("--process", o.process, "iid | jakes:F | gm:r | table:path");
    cmd->add_option("--delay", o.delay, "feedback delay in frames")->check(CLI::Range(0, 1));
    cmd->add_option("--out", o.out, "CSV output path (a .json sidecar is written next to it)");
}

FeedbackScheme build_scheme(const LinkOptions& o)
{
    const std::vector<double> alphas = exp::parse_range(o.alpha);
    const bool envelope = alphas.size() > 1;
    const int l = o.l > 0 ? o.l : o.m;
    FeedbackScheme s;
    if (o.scheme == "perfect") {
        s.kind = scheme::Perfect{};
    } else if (o.scheme == "analog") {
        s.kind = scheme::AnalogAwgn{};
    } else if (o.scheme == "tdd") {
        s.kind = scheme::Tdd{};
    } else if (o.scheme == "digital") {
        scheme::DigitalErrorFree d;
        if (o.bits >= 0.0) d.bits = o.bits;
        s.kind = d;
    } else if (o.scheme == "qam") {
        scheme::DigitalQam q;
        q.alpha = alphas.front();
        if (envelope) q.alpha_grid = alphas;
        q.ser = o.ser == "bound" ? QamSerMode::Bound : QamSerMode::Exact;
        s.kind = q;
    } else if (o.scheme == "mac-analog") {
        s.kind = scheme::MacAnalog{l};
    } else {
        scheme::MacDigital md;
        md.l = l;
        md.alpha = alphas.front();
        if (envelope) md.alpha_grid = alphas;
        s.kind = md;
    }
    return s;
}

exp::SweepSpec build_spec(const LinkOptions& o, const std::string& id)
{
    exp::SweepSpec spec;
    spec.experiment_id = id;
    spec.fixed.m = o.m;
    spec.fixed.beta1 = o.beta1;
    spec.fixed.beta2 = o.beta2;
    spec.fixed.beta_fb = o.beta_fb;
    spec.fixed.gamma = o.gamma;
    spec.fixed.beta_up = o.beta_up;
    spec.fixed.delay = o.delay;
    spec.axis_values = exp::parse_range(o.snr_db);
    spec.schemes = {build_scheme(o)};
    spec.processes = {exp::parse_process(o.process)};
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.workers = o.workers;
    return spec;
}

void emit(const std::string& out, const exp::SweepSpec& spec, const std::vector<exp::ResultRow>& rows)
{
    if (out.empty()) {
        exp::write_csv(std::cout, rows);
    } else {
        exp::write_outputs(out, spec, rows);
        std::cerr << rows.size() << " rows written to " << out << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rate bounds and Monte Carlo estimates for zero-forcing MU-MIMO downlinks with CSIT feedback"};
    app.require_subcommand(1);

    LinkOptions bound_opts;
    auto* bound = app.add_subcommand("bound", "closed-form ideal, gap and lower-bound rows");
    add_link_flags(bound, bound_opts);

    LinkOptions sim_opts;
    auto* sim = app.add_subcommand("sim", "genie-aided Monte Carlo upper bound rows with 95% CI");
    add_link_flags(sim, sim_opts);
    sim->add_option("--trials", sim_opts.trials, "channel realizations per point")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_opts.seed, "master seed");
    sim->add_option("--workers", sim_opts.workers, "worker threads (0 = hardware concurrency)");

    std::string fig_tag;
    std::int64_t fig_trials = -1;
    std::uint64_t fig_seed = 1;
    std::string fig_out;
    int fig_workers = 0;
    auto* figure = app.add_subcommand("figure", "run a figure preset");
    figure->add_option("--tag", fig_tag, "fig2..fig9")->required()->check(CLI::IsMember(exp::figure_tags()));
    figure->add_option("--trials", fig_trials, "override trials per Monte Carlo point");
    figure->add_option("--seed", fig_seed, "master seed");
    figure->add_option("--out", fig_out, "CSV output path");
    figure->add_option("--workers", fig_workers, "worker threads (0 = hardware concurrency)");

    int mmse_l = 2;
    int mmse_m = 4;
    std::string mmse_rho = "0:30:10";
    std::string mmse_method = "closed";
    std::int64_t mmse_trials = 200000;
    std::uint64_t mmse_seed = 1;
    auto* mmse = app.add_subcommand("mmse", "average Wishart MMSE over a range of rho");
    mmse->add_option("--l", mmse_l, "Wishart dimension");
    mmse->add_option("--m", mmse_m, "degrees of freedom");
    mmse->add_option("--rho-db", mmse_rho, "start:stop:step or a single value");
    mmse->add_option("--method", mmse_method, "closed|mc|auto")->check(CLI::IsMember({"closed", "mc", "auto"}));
    mmse->add_option("--trials", mmse_trials, "Monte Carlo draws")->check(CLI::PositiveNumber);
    mmse->add_option("--seed", mmse_seed, "Monte Carlo seed");

    std::string fn;
    std::vector<double> fn_args;
    auto* specfun_cmd = app.add_subcommand("specfun", "evaluate a special function");
    specfun_cmd->add_option("--fn", fn, "expint|expint_scaled|beta|lnbeta|lngamma|digamma|qtail|j0")->required();
    specfun_cmd->add_option("--args", fn_args, "arguments, e.g. --args 1 0.5")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*bound) {
            exp::SweepSpec spec = build_spec(bound_opts, "bound");
            spec.trials = 0;
            spec.outputs = {BoundKind::Ideal, BoundKind::GapBound, BoundKind::Lower};
            const bool static_link = std::holds_alternative<timecorr::BlockIid>(spec.processes.front()) &&
                                     spec.fixed.delay == 0;
            if (static_link) spec.outputs.push_back(BoundKind::LowerDetect);
            if (spec.fixed.delay > 0) spec.outputs.push_back(BoundKind::Ceiling);
            emit(bound_opts.out, spec, exp::run_sweep(spec));
        } else if (*sim) {
            exp::SweepSpec spec = build_spec(sim_opts, "sim");
            spec.outputs = {BoundKind::Ideal, BoundKind::GenieUpper};
            emit(sim_opts.out, spec, exp::run_sweep(spec));
        } else if (*figure) {
            exp::SweepSpec spec = exp::figure_preset(fig_tag);
            const bool sampled = spec.trials > 0;
            if (fig_trials >= 0 && sampled) spec.trials = fig_trials;
            spec.seed = fig_seed;
            spec.workers = fig_workers;
            emit(fig_out, spec, exp::run_sweep(spec));
        } else if (*mmse) {
            const bounds::MmseMethod method = mmse_method == "closed" ? bounds::MmseMethod::ClosedForm
                                             : mmse_method == "mc"   ? bounds::MmseMethod::MonteCarlo
                                                                     : bounds::MmseMethod::Auto;
            std::cout << "rho_db,rho,L,M,method,mmse,std_error\n";
            std::cout.precision(12);
            for (double db : exp::parse_range(mmse_rho)) {
                const double rho = db_to_linear(db);
                const bounds::WishartMmse r = bounds::wishart_mmse(rho, mmse_l, mmse_m, method, mmse_trials, mmse_seed);
                std::cout << db << ',' << rho << ',' << mmse_l << ',' << mmse_m << ',' << (r.method_used == bounds::MmseMethod::ClosedForm ? "closed" : "mc") << ','
                          << r.value << ',' << r.std_error << '\n';
            }
        } else if (*specfun_cmd) {
            const specfun::SpecFunResult r = specfun::evaluate(fn, fn_args);
            std::cout.precision(17);
            std::cout << r.value << ' ' << r.abs_error_estimate << '\n';
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
