#include "fraclps/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fraclps/banach.hpp"
#include "fraclps/cli/config.hpp"
#include "fraclps/cli/verify.hpp"
#include "fraclps/errors.hpp"
#include "fraclps/fracderiv.hpp"
#include "fraclps/hilbert.hpp"
#include "fraclps/semigroup.hpp"
#include "fraclps/squarefuncs.hpp"

namespace fraclps::cli {

namespace fs = std::filesystem;

void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw fs::filesystem_error("cannot write", tmp, std::make_error_code(std::errc::io_error));
        os << content;
        os.flush();
        if (!os) throw fs::filesystem_error("cannot write", tmp, std::make_error_code(std::errc::io_error));
    }
    fs::rename(tmp, target);
}

namespace {

struct Request {
    std::string command;
    std::string kind;
    std::string config;
    std::string input;
    std::string out;
    std::optional<std::uint64_t> seed;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

RunConfig effective_config(const Request& rq) {
    RunConfig cfg = rq.config.empty() ? RunConfig{} : load_config(rq.config);
    if (rq.seed) {
        cfg.seed = *rq.seed;
        cfg.probe.seed = *rq.seed;
    }
    if (!rq.out.empty()) cfg.out = rq.out;
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string join_path(const RunConfig& cfg, const std::string& name) { return (fs::path(cfg.out) / name).string(); }

// Provenance lines shared by every sidecar.
std::string meta_header(const std::string& command, const std::string& target, const RunConfig& cfg,
                        const std::string& input_bytes) {
    std::ostringstream os;
    os << "command=" << command << '\n'
       << "target=" << target << '\n'
       << "version=" << kVersion << '\n'
       << "modules=grid/1,semigroup/1,fracderiv/1,squarefuncs/1,banach/1,hilbert/1,cli/1\n"
       << "config_hash=" << hex64(fnv1a(cfg.canonical())) << '\n';
    if (!input_bytes.empty()) os << "input_hash=" << hex64(fnv1a(input_bytes)) << '\n';
    os << "seed=" << cfg.seed << '\n'
       << "sw_near_nodes=" << cfg.near_nodes << '\n'
       << "sw_far_nodes=" << cfg.far_nodes << '\n'
       << "subordination_nodes=" << cfg.subordination_nodes << '\n';
    return os.str();
}

std::string field_csv(const Field& f) {
    std::ostringstream os;
    write_field_csv(os, f);
    return os.str();
}

int compute(const Request& rq, std::ostream& out) {
    const RunConfig cfg = effective_config(rq);
    if (rq.input.empty()) throw ConfigError("compute needs --input");
    const std::string bytes = read_file(rq.input);
    std::istringstream is(bytes);
    const Field f = read_field_csv(is, cfg.r);
    const std::string& kind = rq.kind;
    const std::string header = meta_header("compute", kind, cfg, bytes);

    if (kind == "semigroup") {
        Field result = f;
        if (cfg.route == "spectral") {
            result = poisson_apply(f, cfg.t);
        } else if (cfg.route == "subordination") {
            result = subordinate_poisson(f, cfg.t, SubordinationQuad(cfg.subordination_nodes),
                                         cfg.tolerance.value_or(1e-8));
        } else {
            throw ConfigError("route must be spectral or subordination for compute semigroup");
        }
        atomic_write(join_path(cfg, "semigroup.csv"), field_csv(result));
        atomic_write(join_path(cfg, "semigroup.meta"),
                     header + "route=" + cfg.route + "\nt=" + num(cfg.t) + "\n");
        out << "compute semigroup: wrote " << join_path(cfg, "semigroup.csv") << '\n';
        return kOk;
    }

    const bool many = cfg.alpha.size() > 1;
    for (std::size_t i = 0; i < cfg.alpha.size(); ++i) {
        const double a = cfg.alpha[i];
        const FracOrder ord = FracOrder::of(a);
        const std::string stem = many ? kind + "_" + std::to_string(i) : kind;
        if (kind == "fracderiv") {
            Field result = f;
            if (cfg.route == "spectral") {
                result = frac_derivative_spectral(f, cfg.t, ord);
            } else if (cfg.route == "quadrature") {
                result = frac_derivative_quadrature(f, cfg.t, ord, SWBudget{cfg.near_nodes, cfg.far_nodes},
                                                    cfg.tolerance.value_or(1e-6));
            } else {
                throw ConfigError("route must be spectral or quadrature for compute fracderiv");
            }
            atomic_write(join_path(cfg, stem + ".csv"), field_csv(result));
            atomic_write(join_path(cfg, stem + ".meta"),
                         header + "route=" + cfg.route + "\nalpha=" + num(a) + "\nm=" + std::to_string(ord.m) +
                             "\nt=" + num(cfg.t) + "\n");
            out << "compute fracderiv alpha=" << num(a) << ": wrote " << join_path(cfg, stem + ".csv") << '\n';
            continue;
        }
        const TimeGrid tg = cfg.explicit_time_grid() ? TimeGrid(cfg.t_min, cfg.t_max, cfg.count)
                                                     : square_time_grid(f, cfg.q, a);
        SquareFunctionReport rep;
        if (kind == "gfun") {
            rep = g_function(f, ord, cfg.q, tg);
        } else if (kind == "area") {
            rep = area_function(f, ord, cfg.q, tg);
        } else {
            rep = gstar_function(f, ord, cfg.q, cfg.lambda, tg);
        }
        std::ostringstream csv, meta;
        write_report_csv(csv, rep);
        write_report_sidecar(meta, rep);
        atomic_write(join_path(cfg, stem + ".csv"), csv.str());
        atomic_write(join_path(cfg, stem + ".meta"), header + meta.str());
        out << "compute " << kind << " alpha=" << num(a) << ": wrote " << join_path(cfg, stem + ".csv")
            << " max=" << num(rep.max()) << (rep.truncation_flag ? " (truncation flag set)" : "") << '\n';
    }
    return kOk;
}

int verify(const Request& rq, std::ostream& out) {
    const RunConfig cfg = effective_config(rq);
    const std::vector<CheckRow> rows = run_suite(rq.kind, cfg);
    write_table(out, rows);
    std::ostringstream csv;
    write_verify_csv(csv, rows);
    const auto passed = std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
    atomic_write(join_path(cfg, "verify.csv"), csv.str());
    atomic_write(join_path(cfg, "verify.meta"), meta_header("verify", rq.kind, cfg, "") + "passed=" +
                                                    std::to_string(passed) + "\ntotal=" +
                                                    std::to_string(rows.size()) + "\n");
    return passed == static_cast<long>(rows.size()) ? kOk : kVerifyFail;
}

int probe(const Request& rq, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = effective_config(rq);
    if (rq.kind == "hilbert-convergence") {
        const auto& hs = cfg.hilbert;
        std::string bytes;
        std::optional<LineSample> input;
        if (!rq.input.empty()) {
            bytes = read_file(rq.input);
            std::istringstream is(bytes);
            input = read_line_sample_csv(is, cfg.r);
            if (!input->support_margin_ok()) {
                err << "warning: input is nonzero within a quarter window of the edge\n";
            }
        }
        const LineSample finest = input ? *input : gaussian_line_sample(hs.half_width, hs.intervals);
        if (finest.intervals() % (1 << hs.levels) != 0) {
            throw ConfigError("hilbert.levels must leave an even interval count at the coarsest level");
        }
        std::vector<ConvergenceRow> rows;
        std::optional<ConvergenceReport> last;
        for (int lv = hs.levels - 1; lv >= 0; --lv) {
            const LineSample f = coarsen(finest, 1 << lv);
            ConvergenceReport rep = convergence_probe(f, eps_sequence_for(f, hs.multiples), hs.threshold);
            rows.push_back({f.intervals(), f.step(), rep.median_osc, rep.fraction_below});
            if (lv == 0) last = std::move(rep);
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].median_osc < rows[i - 1].median_osc;
        std::ostringstream study, profile;
        write_study_csv(study, rows);
        write_convergence_csv(profile, finest, *last);
        atomic_write(join_path(cfg, "hilbert-convergence.csv"), study.str());
        atomic_write(join_path(cfg, "hilbert-convergence-profile.csv"), profile.str());
        atomic_write(join_path(cfg, "hilbert-convergence.meta"),
                     meta_header("probe", rq.kind, cfg, bytes) + "levels=" + std::to_string(rows.size()) +
                         "\nmedian_osc_decreasing=" + (decreasing ? "1" : "0") + "\n");
        out << "hilbert-convergence levels=" << rows.size() << " finest_median_osc=" << num(rows.back().median_osc)
            << " decreasing=" << (decreasing ? "yes" : "no") << '\n';
        return kOk;
    }

    const ProbeConfig& pc = cfg.probe;
    const ProbeResult res = rq.kind == "cotype" ? run_cotype_probe(pc) : run_type_probe(pc);
    std::ostringstream csv;
    write_probe_csv(csv, res);
    const std::string verdict = res.verdict(pc);
    atomic_write(join_path(cfg, rq.kind + ".csv"), csv.str());
    atomic_write(join_path(cfg, rq.kind + ".meta"),
                 meta_header("probe", rq.kind, cfg, "") + "trend=" + num(res.trend()) + "\ngrowth_exponent=" +
                     num(res.growth_exponent) + "\nverdict=" + verdict + "\n");
    out << rq.kind << " r=" << num(pc.r) << " q=" << num(pc.q) << " p=" << num(pc.lebesgue_exponent())
        << " alpha=" << num(pc.alpha) << " trend=" << fixed(res.trend())
        << " growth_exponent=" << fixed(res.growth_exponent) << " verdict=" << verdict << '\n';
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson semigroups, fractional derivatives, square functions and Hilbert transforms on grids", "fraclps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Request rq;
    std::uint64_t seed = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", rq.config, "key=value settings file");
        sub->add_option("--out", rq.out, "output directory (default: config key out, else .)");
        sub->add_option("--seed", seed, "random seed, overrides the config");
    };
    CLI::App* c = app.add_subcommand("compute", "semigroup, derivative or square-function values of an input field");
    c->add_option("--kind", rq.kind, "what to compute")
        ->required()
        ->check(CLI::IsMember({"semigroup", "fracderiv", "gfun", "area", "gstar"}));
    c->add_option("--input", rq.input, "field CSV")->required();
    common(c);
    CLI::App* v = app.add_subcommand("verify", "run a verification suite and print the pass/fail table");
    v->add_option("--suite", rq.kind, "suite name")->check(CLI::IsMember(suite_names()))->default_val("all");
    common(v);
    CLI::App* p = app.add_subcommand("probe", "cotype/type probes and the Hilbert convergence probe");
    p->add_option("--kind", rq.kind, "probe kind")
        ->required()
        ->check(CLI::IsMember({"cotype", "type", "hilbert-convergence"}));
    p->add_option("--input", rq.input, "line-sample CSV (hilbert-convergence only)");
    common(p);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (e.get_name() == "CallForVersion" ? std::string(kVersion) + "\n" : app.help());
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kConfig;
    }
    for (CLI::App* sub : {c, v, p}) {
        if (sub->parsed()) rq.command = sub->get_name();
        if (sub->parsed() && sub->count("--seed")) rq.seed = seed;
    }

    try {
        if (rq.command == "compute") return compute(rq, out);
        if (rq.command == "verify") return verify(rq, out);
        return probe(rq, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << '\n';
        return kAccuracy;
    } catch (const fs::filesystem_error& e) {
        err << "output error: " << e.what() << '\n';
        return kInput;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    }
}

}  // namespace fraclps::cli
