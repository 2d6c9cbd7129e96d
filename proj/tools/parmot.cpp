#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "parmot/json_io.hpp"
#include "parmot/kernel_cache.hpp"
#include "parmot/specialize.hpp"

namespace fs = std::filesystem;
using namespace parmot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolated = 2;
constexpr int kExitInconclusive = 3;

struct RunConfig {
    int genus = 1;
    std::vector<std::string> divisor;  // "x:n[:n']"
    int delta = -1;                    // explicit delta for kernel commands without divisor
    int r_max = 2;
    int z_max = 40;
    int tail_window = 5;
    int j_max = 0;
    std::string query;   // inline JSON or @file
    std::string output;  // path or empty for stdout
    std::string format = "json";
    std::string cache_dir;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Json parse_json_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') return Json::parse(slurp(arg.substr(1)));
    return Json::parse(arg);
}

Rational parse_rational(const Json& j) {
    Rational r;
    if (j.is_number_integer()) {
        r = Rational((long)j.get<long long>());
    } else {
        r = Rational(j.get<std::string>());
        r.canonicalize();
    }
    return r;
}

DivisorSpec parse_divisor(const std::vector<std::string>& entries) {
    DivisorSpec d;
    for (auto& e : entries) {
        DivisorSpec::Point p;
        std::string rest = e;
        auto c1 = rest.find(':');
        if (c1 == std::string::npos) throw std::invalid_argument("divisor entry needs x:n[:n']");
        p.label = rest.substr(0, c1);
        rest = rest.substr(c1 + 1);
        auto c2 = rest.find(':');
        p.n = std::stoi(c2 == std::string::npos ? rest : rest.substr(0, c2));
        p.nprime = c2 == std::string::npos ? p.n : std::stoi(rest.substr(c2 + 1));
        d.points.push_back(p);
    }
    d.validate();
    return d;
}

GenFunParams make_params(const RunConfig& cfg) {
    GenFunParams p;
    p.g = cfg.genus;
    if (!cfg.divisor.empty()) {
        DivisorSpec d = parse_divisor(cfg.divisor);
        for (auto& pt : d.points) p.points.push_back(pt.label);
        p.delta = cfg.delta >= 0 ? cfg.delta : d.delta_full();
    } else {
        p.delta = std::max(cfg.delta, 0);
    }
    p.trunc = {cfg.r_max, cfg.z_max};
    p.j_max = cfg.j_max;
    return p;
}

void emit(const RunConfig& cfg, const Json& j) {
    std::string text = j.dump(2);
    text += "\n";
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        out << text;
    }
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        out << text;
    }
}

// -- kernel disk cache -------------------------------------------------------

void install_cache(const RunConfig& cfg) {
    std::string dir = cfg.cache_dir;
    if (dir.empty()) {
        const char* env = std::getenv("PARMOT_CACHE");
        if (env) dir = env;
    }
    if (dir.empty()) return;
    fs::create_directories(dir);

    auto path_for = [dir](const GenFunParams& p) {
        return fs::path(dir) /
               ("kernel-" + content_hash(std::string(kCodeVersion) + "|" + p.cache_key()) +
                ".json");
    };

    KernelLoader loader = [path_for](const GenFunParams& p, Kernels& out) -> bool {
        fs::path f = path_for(p);
        if (!fs::exists(f)) {
            std::cerr << "[cache] miss " << p.cache_key() << "\n";
            return false;
        }
        try {
            Json j = Json::parse(slurp(f.string()));
            if (j.at("version").get<std::string>() != kCodeVersion ||
                j.at("key").get<std::string>() != p.cache_key())
                throw std::runtime_error("stale entry");
            int nv = p.ring().nvars();
            out.h_univ = series_from_json(j.at("h_univ"), nv, p.points);
            out.h_sch = series_from_json(j.at("h_sch"), nv, p.points);
            out.log_omega_sch = series_from_json(j.at("log_omega_sch"), nv, p.points);
            std::cerr << "[cache] hit " << p.cache_key() << "\n";
            return true;
        } catch (const std::exception& ex) {
            std::cerr << "[cache] corrupt entry for " << p.cache_key() << " (" << ex.what()
                      << "), recomputing\n";
            return false;
        }
    };
    KernelSaver saver = [path_for](const GenFunParams& p, const Kernels& k) {
        Json j;
        j["version"] = kCodeVersion;
        j["key"] = p.cache_key();
        RingCtx ctx = p.ring();
        j["h_univ"] = series_to_json(k.h_univ, ctx, p.points, true);
        j["h_sch"] = series_to_json(k.h_sch, ctx, p.points, true);
        j["log_omega_sch"] = series_to_json(k.log_omega_sch, ctx, p.points, true);
        std::ofstream out(path_for(p), std::ios::binary);
        out << j.dump();
    };
    set_kernel_cache_hooks(loader, saver);
}

// -- query parsing -----------------------------------------------------------

StackQuery parse_query(const RunConfig& cfg, const Json& j) {
    StackQuery q;
    q.g = cfg.genus;
    q.divisor = parse_divisor(cfg.divisor);
    q.trunc = {cfg.r_max, cfg.z_max};
    q.tail_window = cfg.tail_window;

    std::map<std::string, int> point_index;
    for (int i = 0; i < (int)q.divisor.points.size(); ++i)
        point_index[q.divisor.points[i].label] = i;

    std::string kind = j.value("kind", "full");
    if (kind == "full") q.kind = QueryKind::Full;
    else if (kind == "semistable-full") q.kind = QueryKind::SemistableFull;
    else if (kind == "semistable-partial") q.kind = QueryKind::SemistablePartial;
    else if (kind == "nonpositive-graded") q.kind = QueryKind::NonpositiveGraded;
    else throw std::invalid_argument("unknown query kind: " + kind);

    if (j.contains("eps")) q.eps = parse_rational(j.at("eps"));
    q.d = j.value("d", 0LL);

    q.gamma.r = j.at("gamma").at("r").get<int>();
    for (auto& entry : j.at("gamma").at("parts")) {
        int x = entry.at(0).is_string() ? point_index.at(entry.at(0).get<std::string>())
                                        : entry.at(0).get<int>();
        q.gamma.parts[{x, entry.at(1).get<int>()}] = entry.at(2).get<int>();
    }
    q.gamma.validate();

    if (j.contains("zeta")) {
        for (auto& [label, flags] : j.at("zeta").items()) {
            int x = point_index.at(label);
            for (auto& [jstr, vec] : flags.items()) {
                std::vector<Rational> coeffs;
                for (auto& v : vec) coeffs.push_back(parse_rational(v));
                q.zeta.entries[{x, std::stoi(jstr)}] = coeffs;
            }
        }
    }
    if (j.contains("sigma")) {
        Weights w;
        for (auto& [label, flags] : j.at("sigma").items()) {
            int x = point_index.at(label);
            for (auto& [jstr, v] : flags.items()) w.sigma[{x, std::stoi(jstr)}] = parse_rational(v);
        }
        q.sigma = w;
    }
    return q;
}

Json class_result_json(const StackQuery& q, const ClassResult& r) {
    RingCtx ctx(q.g);
    Json j;
    j["value"] = r.value.to_string(ctx);
    j["value_struct"] = fraction_struct(r.value);
    j["provenance"] = {{"r_max", r.trunc_used.r_max},
                       {"z_max", r.trunc_used.z_max},
                       {"tail_window", r.tail_window}};
    if (r.witness_n >= 0) j["provenance"]["witness_N"] = r.witness_n;
    if (r.experimental_genus_zero) j["provenance"]["experimental"] = "genus 0";
    return j;
}

// -- selftest ----------------------------------------------------------------

int run_selftest(const RunConfig& cfg) {
    Json out;
    Json checks = Json::array();
    bool all_ok = true, any_inconclusive = false;

    auto record = [&](const std::string& name, bool ok) {
        checks.push_back({{"name", name}, {"status", ok ? "pass" : "fail"}});
        if (!ok) all_ok = false;
    };

    // lambda-ring basics
    {
        RingCtx ctx(1);
        int n = ctx.nvars();
        LaurentPoly q = LaurentPoly::gen_pow(n, ctx.qh(), 2);
        ScalarFraction f = ScalarFraction(LaurentPoly::constant(n, 1) + q) /
                           ScalarFraction(q - LaurentPoly::constant(n, 1));
        record("psi composition psi2.psi3=psi6", f.psi(2).psi(3) == f.psi(6));

        Trunc t{3, 6};
        GradedSeries a(t, n);
        a.add_term(GammaExponent(1), 0, ScalarFraction(q));
        a.add_term(GammaExponent(1), 1, f);
        a.add_term(GammaExponent(2), 2, f * f);
        GradedSeries back = pleth_log(pleth_exp(a));
        record("Exp/Log round-trip", back == a);
    }

    // Macdonald symmetry at small sizes
    {
        bool ok = true;
        for (int m = 0; m <= 4 && ok; ++m) {
            for (auto& mu : partitions_of(m)) {
                const SymFunc& h1 = hhl_modified_macdonald(mu);
                const SymFunc& h2 = hhl_modified_macdonald(mu.conjugate());
                for (auto& [lam, c] : h1.terms) {
                    auto it = h2.terms.find(lam);
                    if (it == h2.terms.end() || !(it->second.swapped() == c)) ok = false;
                }
            }
        }
        record("Macdonald symmetry |mu|<=4", ok);
    }

    // Mellit identity, desk scale
    {
        GenFunParams p;
        p.g = 1;
        p.delta = 0;
        p.trunc = {2, cfg.z_max};
        MellitReport rep = check_mellit(p, cfg.tail_window);
        if (rep.inconclusive) any_inconclusive = true;
        record("Mellit identity g=1 delta=0 D=0 rmax=2", rep.all_equal && !rep.inconclusive);

        GenFunParams p2;
        p2.g = 1;
        p2.delta = 1;
        p2.points = {"p"};
        p2.trunc = {2, cfg.z_max};
        MellitReport rep2 = check_mellit(p2, cfg.tail_window);
        if (rep2.inconclusive) any_inconclusive = true;
        record("Mellit identity g=1 delta=1 |D|=1 rmax=2", rep2.all_equal && !rep2.inconclusive);
    }

    // rank-1 oracle
    {
        bool ok = true;
        for (int g = 1; g <= 2 && ok; ++g) {
            StackQuery q;
            q.g = g;
            q.divisor.points = {{"p", 2, 2}};
            q.kind = QueryKind::Full;
            q.eps = 1;
            q.d = -1;
            q.gamma.r = 1;
            q.gamma.parts[{0, 1}] = 1;
            q.zeta.entries[{0, 1}] = {Rational(1), Rational(1)};
            q.trunc = {1, cfg.z_max};
            q.tail_window = cfg.tail_window;
            RingCtx ctx(g);
            int n = ctx.nvars();
            ScalarFraction expect =
                ScalarFraction(LaurentPoly::gen_pow(n, ctx.qh(), 2 * g) * l_univ_at(ctx, 0, 0)) /
                ScalarFraction(LaurentPoly::gen_pow(n, ctx.qh(), 2) - LaurentPoly::constant(n, 1));
            ok = conn_class(q).value == expect;
        }
        record("rank-1 Jacobian-torsor oracle g=1,2", ok);
    }

    out["checks"] = checks;
    out["ok"] = all_ok;
    emit(cfg, out);
    if (any_inconclusive) return kExitInconclusive;
    return all_ok ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact generating-function engine for irregular parabolic moduli classes"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--genus", cfg.genus, "curve genus")->capture_default_str();
    app.add_option("--divisor", cfg.divisor, "divisor entry x:n[:n'] (repeatable)");
    app.add_option("--delta", cfg.delta, "irregularity weight (kernel commands without divisor)");
    app.add_option("--rmax", cfg.r_max, "w-rank truncation")->capture_default_str();
    app.add_option("--zmax", cfg.z_max, "z-degree truncation")->capture_default_str();
    app.add_option("--tail-window", cfg.tail_window, "vanishing-tail certificate window")
        ->capture_default_str();
    app.add_option("--jmax", cfg.j_max, "flag-index cap (default: rmax)");
    app.add_option("--query", cfg.query, "query JSON (inline or @file)");
    app.add_option("--output", cfg.output, "output path (default stdout)");
    app.add_option("--format", cfg.format, "json or csv (ddp tables only)")->capture_default_str();
    app.add_option("--cache", cfg.cache_dir, "kernel cache directory (or PARMOT_CACHE)");

    std::string omega_which = "univ";
    auto* cmd_omega = app.add_subcommand("omega", "emit a truncated generating function");
    cmd_omega->add_option("--which", omega_which, "univ|hlv|sch|epoly|ppoly")
        ->capture_default_str();
    auto* cmd_kernels = app.add_subcommand("kernels", "emit both kernels with certificates");
    auto* cmd_mellit = app.add_subcommand("check-mellit", "kernel z=1 identity report");
    auto* cmd_conn = app.add_subcommand("conn-class", "stack class via the z=1 drivers");
    long graded_n = -1;
    auto* cmd_graded = app.add_subcommand("graded-class", "stack class via graded extraction");
    cmd_graded->add_option("--N", graded_n, "explicit shift (default: stabilized with witness)");
    int ddp_n = 2, ddp_r = 1;
    auto* cmd_ddp = app.add_subcommand("ddp", "Poincare table and palindromicity");
    cmd_ddp->add_option("--n", ddp_n, "pole order n")->capture_default_str();
    cmd_ddp->add_option("--r", ddp_r, "rank r")->capture_default_str();
    auto* cmd_epoly = app.add_subcommand("epoly", "E-polynomial of a stack class");
    auto* cmd_poincare = app.add_subcommand("poincare", "virtual Poincare polynomial");
    auto* cmd_selftest = app.add_subcommand("selftest", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        install_cache(cfg);

        if (cmd_omega->parsed()) {
            GenFunParams p = make_params(cfg);
            OmegaKind kind;
            if (omega_which == "univ") kind = OmegaKind::Univ;
            else if (omega_which == "hlv") kind = OmegaKind::Hlv;
            else if (omega_which == "sch") kind = OmegaKind::Sch;
            else if (omega_which == "epoly") kind = OmegaKind::EPoly;
            else if (omega_which == "ppoly") kind = OmegaKind::PPoly;
            else throw std::invalid_argument("unknown --which " + omega_which);
            GradedSeries s = build_omega(kind, p);
            emit(cfg, series_to_json(s, p.ring(), p.points));
            return kExitOk;
        }
        if (cmd_kernels->parsed()) {
            GenFunParams p = make_params(cfg);
            Kernels k = dt_kernels(p);
            EvalZOneResult cu = eval_z_one(k.h_univ, cfg.tail_window);
            EvalZOneResult cs = eval_z_one(k.h_sch, cfg.tail_window);
            Json j;
            j["h_univ"] = series_to_json(k.h_univ, p.ring(), p.points);
            j["h_sch"] = series_to_json(k.h_sch, p.ring(), p.points);
            j["certificates"] = {{"h_univ_ok", cu.ok()}, {"h_sch_ok", cs.ok()}};
            emit(cfg, j);
            return (cu.ok() && cs.ok()) ? kExitOk : kExitInconclusive;
        }
        if (cmd_mellit->parsed()) {
            GenFunParams p = make_params(cfg);
            MellitReport rep = check_mellit(p, cfg.tail_window);
            emit(cfg, mellit_report_to_json(rep, p.points));
            if (rep.inconclusive) return kExitInconclusive;
            return rep.all_equal ? kExitOk : kExitViolated;
        }
        if (cmd_conn->parsed() || cmd_epoly->parsed() || cmd_poincare->parsed()) {
            if (cfg.query.empty()) throw std::invalid_argument("--query is required");
            StackQuery q = parse_query(cfg, parse_json_arg(cfg.query));
            ClassResult r = conn_class(q);
            Json j = class_result_json(q, r);
            if (cmd_epoly->parsed() || cmd_poincare->parsed()) {
                SpecTarget target =
                    cmd_poincare->parsed() ? SpecTarget::P : SpecTarget::E;
                ScalarFraction sp = specialize_value(r.value, target, RingCtx(q.g));
                j["specialized"] = uv_text(sp, RingCtx(q.g));
                j["target"] = cmd_poincare->parsed() ? "P" : "E";
            }
            emit(cfg, j);
            return kExitOk;
        }
        if (cmd_graded->parsed()) {
            if (cfg.query.empty()) throw std::invalid_argument("--query is required");
            StackQuery q = parse_query(cfg, parse_json_arg(cfg.query));
            Json j;
            if (graded_n >= 0) {
                ScalarFraction v = graded_class(q, graded_n);
                j["value"] = v.to_string(RingCtx(q.g));
                j["provenance"] = {{"N", graded_n}};
            } else {
                ClassResult r = graded_class_stabilized(q);
                j = class_result_json(q, r);
            }
            emit(cfg, j);
            return kExitOk;
        }
        if (cmd_ddp->parsed()) {
            Trunc t{cfg.r_max, cfg.z_max};
            DdpResult r = ddp_poincare(cfg.genus, ddp_n, ddp_r, t, cfg.tail_window);
            RingCtx ctx(cfg.genus);
            if (cfg.format == "csv") {
                std::ostringstream os;
                os << "g,n,r,d_val,palindromic,H\n";
                os << cfg.genus << "," << ddp_n << "," << ddp_r << "," << r.d_val << ","
                   << (r.palindromic ? "true" : "false") << ",\"" << r.h.to_string(ctx)
                   << "\"\n";
                emit_text(cfg, os.str());
            } else {
                Json j;
                j["H"] = r.h.to_string(ctx);
                j["palindromic"] = r.palindromic;
                j["d_val"] = r.d_val;
                j["palindromic_support"] = r.palindromic_support;
                j["h_is_polynomial"] = r.h_is_polynomial;
                emit(cfg, j);
            }
            return r.palindromic ? kExitOk : kExitViolated;
        }
        if (cmd_selftest->parsed()) return run_selftest(cfg);
    } catch (const std::out_of_range& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& ex) {
        // certificate failures surface as inconclusive
        std::cerr << "inconclusive: " << ex.what() << "\n";
        return kExitInconclusive;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
