// Command-line driver: computes partial results, period lattices and
// verification reports for the built-in examples (or an external surface).
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "periods/engine.hpp"

using namespace periods;

namespace {

struct CliOptions {
    std::string example;
    std::string surface_file;
    long digits = 0, terms = 0;
    std::string preset = "desk";
    std::string target = "both";
    std::string weights;
    std::string format = "table";
    std::string cache_dir;
    unsigned long seed = 1;
    int jobs = 1;
    bool verify = false;
    bool chart_check = false;
};

PrecisionContext make_ctx(const CliOptions& o) {
    PrecisionContext ctx = o.preset == "paper" ? PrecisionContext::paper()
                                               : PrecisionContext::desk();
    if (o.digits > 0) ctx.digits = o.digits;
    if (o.terms > 0) ctx.series_order = o.terms;
    return PrecisionContext(ctx.digits, ctx.series_order);
}

RunConfig make_config(const CliOptions& o) {
    RunConfig cfg;
    cfg.ctx = make_ctx(o);
    cfg.target = o.target == "x" ? RunConfig::Target::X
                 : o.target == "xhat" ? RunConfig::Target::Xhat
                                      : RunConfig::Target::Both;
    if (!o.weights.empty() && o.weights != "generic") {
        std::istringstream in(o.weights);
        std::string tok;
        while (std::getline(in, tok, ',')) cfg.weights.push_back(std::stol(tok));
        cfg.generic_combo = false;
    }
    cfg.seed = o.seed;
    cfg.cache_dir = o.cache_dir;
    cfg.jobs = o.jobs;
    cfg.chart_check = o.chart_check;
    return cfg;
}

std::string fmt_complex(const Complex& v, long digits) {
    std::string re = v.re.str(digits);
    std::string im = v.im.abs().str(digits);
    return re + (v.im.sign() < 0 ? " - " : " + ") + im + "*I";
}

nlohmann::json lattice_json(const PeriodLattice& lat, long digits) {
    nlohmann::json j;
    j["rank"] = lat.rank;
    auto& arr = j["basis"] = nlohmann::json::array();
    for (const auto& b : lat.basis) arr.push_back({b.re.str(digits), b.im.str(digits)});
    return j;
}

int run_main(const CliOptions& opt, const std::string& mode) {
    RunConfig cfg = make_config(opt);
    ExampleSpec ex;
    try {
        if (!opt.surface_file.empty()) {
            std::ifstream in(opt.surface_file);
            if (!in) throw InputError("cannot open " + opt.surface_file);
            std::stringstream ss;
            ss << in.rdbuf();
            ex.id = opt.surface_file;
            ex.self_product = true;
            ex.s1 = parse_surface_record(ss.str());
            ex.s2 = ex.s1;
            ex.k = ex.s1.k;
            for (const auto& f : ex.s1.fibers)
                ex.fibers.push_back({f.location, f.kodaira_n, f.kodaira_n});
        } else {
            ex = load_example(opt.example);
        }
    } catch (const EngineError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 4;
    }

    RunResult res;
    try {
        res = run_example(ex, cfg);
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }

    long digits = 40;
    bool verify_fail = false;
    std::vector<CheckResult> verification;
    if (opt.verify) {
        if (ex.id == "type2-swap-bc") {
            auto cmp = compare_section4(res, load_section4_tables(), res.weights[0],
                                        cfg.ctx.prec_bits());
            for (auto& c : cmp.items) verification.push_back(c);
        }
        if (!ex.ref_xhat.empty() && res.lat_xhat.rank > 0)
            verification.push_back(compare_lattice(res.lat_xhat, ex.ref_xhat, 28,
                                                   cfg.ctx.prec_bits(), "lattice-xhat"));
        if (!ex.ref_x.empty() && res.lat_x.rank > 0)
            verification.push_back(
                compare_lattice(res.lat_x, ex.ref_x, 28, cfg.ctx.prec_bits(), "lattice-x"));
        if (ex.modular && res.lat_xhat.rank > 0)
            for (auto& c : verify_modular(res.lat_xhat, *ex.modular, cfg.ctx.prec_bits()))
                verification.push_back(c);
        if (ex.generic_index && res.index_x_over_xhat) {
            bool ok = *ex.generic_index == *res.index_x_over_xhat;
            verification.push_back({"generic-index", res.index_x_over_xhat->get_str(), ok});
        }
        for (const auto& c : verification) verify_fail = verify_fail || !c.pass;
    }

    if (opt.format == "json") {
        nlohmann::json j;
        j["example"] = res.example_id;
        j["digits"] = cfg.ctx.digits;
        j["series_order"] = cfg.ctx.series_order;
        j["points"] = nlohmann::json::array();
        for (const auto& p : res.points) {
            nlohmann::json pj;
            pj["name"] = p.name;
            pj["types"] = {p.n1, p.n2};
            pj["M"] = p.M.str();
            pj["N"] = p.N.str();
            pj["Theta"] = p.Theta.str();
            j["points"].push_back(pj);
        }
        j["weights"] = nlohmann::json::array();
        for (const auto& w : res.weights) {
            nlohmann::json wj;
            wj["n"] = w.n;
            wj["q"] = nlohmann::json::array();
            for (const auto& qv : w.q) {
                nlohmann::json row;
                for (const auto& v : qv) row.push_back({v.re.str(digits), v.im.str(digits)});
                wj["q"].push_back(row);
            }
            wj["r"] = nlohmann::json::array();
            for (const auto& rv : w.r) {
                nlohmann::json row;
                for (const auto& v : rv) row.push_back({v.re.str(digits), v.im.str(digits)});
                wj["r"].push_back(row);
            }
            if (w.lat_xhat.rank) wj["lattice_xhat"] = lattice_json(w.lat_xhat, digits);
            if (w.lat_x.rank) wj["lattice_x"] = lattice_json(w.lat_x, digits);
            j["weights"].push_back(wj);
        }
        if (res.lat_xhat.rank) j["lattice_xhat"] = lattice_json(res.lat_xhat, digits);
        if (res.lat_x.rank) j["lattice_x"] = lattice_json(res.lat_x, digits);
        if (res.index_x_over_xhat) j["index"] = res.index_x_over_xhat->get_str();
        j["combo"] = res.combo_coeffs;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : res.checks)
            j["checks"].push_back({{"name", c.name}, {"detail", c.detail}, {"pass", c.pass}});
        j["verification"] = nlohmann::json::array();
        for (const auto& c : verification)
            j["verification"].push_back({{"name", c.name}, {"detail", c.detail}, {"pass", c.pass}});
        std::cout << j.dump(1) << "\n";
    } else if (opt.format == "csv") {
        std::cout << "kind,name,re,im\n";
        for (size_t j = 0; j < res.weights.size(); j++)
            for (size_t i = 0; i < res.weights[j].q.size(); i++)
                for (size_t c = 0; c < res.weights[j].q[i].size(); c++) {
                    const auto& v = res.weights[j].q[i][c];
                    std::cout << "q(w" << res.weights[j].n << ")," << res.interval_names[i] << "["
                              << c << "]," << v.re.str(digits) << "," << v.im.str(digits) << "\n";
                }
        for (const auto& b : res.lat_xhat.basis)
            std::cout << "lattice_xhat,," << b.re.str(digits) << "," << b.im.str(digits) << "\n";
        for (const auto& b : res.lat_x.basis)
            std::cout << "lattice_x,," << b.re.str(digits) << "," << b.im.str(digits) << "\n";
    } else {
        std::cout << "example " << res.example_id << "  (digits " << cfg.ctx.digits << ", terms "
                  << cfg.ctx.series_order << ")\n";
        std::cout << "points:";
        for (size_t p = 0; p < res.points.size(); p++)
            std::cout << "  " << res.points[p].name << "=(I" << res.points[p].n1 << ",I"
                      << res.points[p].n2 << ")";
        std::cout << "\n\n";
        if (mode == "partials" || mode == "verify") {
            for (const auto& w : res.weights) {
                std::cout << "weight " << w.n << ":\n";
                for (size_t i = 0; i < w.q.size(); i++) {
                    std::cout << "  q^" << res.interval_names[i] << ":\n";
                    for (const auto& v : w.q[i]) std::cout << "    " << fmt_complex(v, digits) << "\n";
                }
                for (size_t i = 0; i < w.r.size(); i++) {
                    std::cout << "  r^" << res.interval_names[i] << " (adapted):\n";
                    for (const auto& v : w.r[i]) std::cout << "    " << fmt_complex(v, digits) << "\n";
                }
            }
            for (const auto& p : res.points) {
                std::cout << "M_" << p.name << ":\n" << p.M.str() << "\n";
                std::cout << "N_" << p.name << ":\n" << p.N.str() << "\n";
                std::cout << "Theta_" << p.name << ":\n" << p.Theta.str() << "\n";
            }
        }
        if (mode == "lattice" || mode == "verify") {
            auto show = [&](const char* tag, const PeriodLattice& lat) {
                if (!lat.rank) return;
                std::cout << tag << " rank " << lat.rank << ", basis:\n";
                for (const auto& b : lat.basis) std::cout << "  " << fmt_complex(b, 31) << "\n";
            };
            std::cout << "weight combination c =";
            for (long c : res.combo_coeffs) std::cout << " " << c;
            std::cout << "\n";
            show("I(Xhat)", res.lat_xhat);
            show("I(X)", res.lat_x);
            if (res.index_x_over_xhat)
                std::cout << "index [I(X) : I(Xhat)] = " << res.index_x_over_xhat->get_str()
                          << "\n";
        }
        std::cout << "\nconsistency checks:\n";
        for (const auto& c : res.checks)
            std::cout << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail
                      << "\n";
        if (opt.verify) {
            std::cout << "\nverification against reference data:\n";
            for (const auto& c : verification)
                std::cout << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail
                          << "\n";
        }
    }
    if (!res.all_checks_pass()) return 2;
    if (verify_fail) return 2;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"period lattices of fiber products of elliptic surfaces"};
    app.require_subcommand(1);
    CliOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_example) {
        if (needs_example)
            cmd->add_option("example", opt.example, "catalog example id (see `list`)");
        cmd->add_option("--surface", opt.surface_file,
                        "compute the self-product of a surface file instead");
        cmd->add_option("--digits", opt.digits, "working decimal precision");
        cmd->add_option("--terms", opt.terms, "series truncation length");
        cmd->add_option("--preset", opt.preset, "desk (200,140) or paper (1000,350)")
            ->check(CLI::IsMember({"desk", "paper"}));
        cmd->add_option("--target", opt.target, "x, xhat or both")
            ->check(CLI::IsMember({"x", "xhat", "both"}));
        cmd->add_option("--weights", opt.weights, "comma list of weights, or 'generic'");
        cmd->add_option("--format", opt.format, "table, json or csv")
            ->check(CLI::IsMember({"table", "json", "csv"}));
        cmd->add_option("--cache-dir", opt.cache_dir, "checkpoint directory");
        cmd->add_option("--seed", opt.seed, "seed for generic weight coefficients");
        cmd->add_option("--jobs", opt.jobs, "parallel interval workers");
        cmd->add_flag("--chart-check", opt.chart_check,
                      "recompute one interval in the other chart");
    };

    auto* list = app.add_subcommand("list", "list the built-in examples");
    auto* partials = app.add_subcommand("partials", "interval vectors and matrices");
    add_common(partials, true);
    auto* lattice = app.add_subcommand("lattice", "full pipeline to period lattices");
    add_common(lattice, true);
    auto* verify = app.add_subcommand("verify", "lattice run plus reference comparison");
    add_common(verify, true);
    auto* cache = app.add_subcommand("cache", "inspect or clear the cache");
    std::string cache_op = "list";
    cache->add_option("op", cache_op, "list or clear")->check(CLI::IsMember({"list", "clear"}));
    cache->add_option("--cache-dir", opt.cache_dir, "checkpoint directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& ex : list_examples()) {
                std::cout << ex.id << "  type " << (ex.type == 'I' ? "I" : ex.type == '2' ? "II" : "III")
                          << "  k=" << ex.k << "  fibers";
                for (const auto& f : ex.fibers)
                    std::cout << " I" << f.n1 << (f.n2 != f.n1 ? "xI" + std::to_string(f.n2) : "")
                              << "@" << f.location.str();
                std::cout << "\n";
            }
            return 0;
        }
        if (cache->parsed()) {
            if (opt.cache_dir.empty()) {
                std::cerr << "cache: --cache-dir required\n";
                return 4;
            }
            namespace fs = std::filesystem;
            if (!fs::exists(opt.cache_dir)) {
                std::cout << "(empty)\n";
                return 0;
            }
            for (const auto& e : fs::directory_iterator(opt.cache_dir)) {
                if (cache_op == "clear") fs::remove(e.path());
                else std::cout << e.path().filename().string() << "\n";
            }
            return 0;
        }
        std::string mode = partials->parsed() ? "partials" : lattice->parsed() ? "lattice" : "verify";
        if (verify->parsed()) opt.verify = true;
        if (opt.example.empty() && opt.surface_file.empty()) {
            std::cerr << "error: example id or --surface required\n";
            return 4;
        }
        return run_main(opt, mode);
    } catch (const EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
