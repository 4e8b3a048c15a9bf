// Batch CLI over the library: Davenport constants with witnesses, conjecture
// sweeps, elasticity of orders from class data, the quadratic pipeline, and
// the reproduce-paper golden suite.
//
// Exit codes: 0 ok; 1 violations found or golden FAIL; 2 bad input or
// unsupported case; 3 size guard; 4 internal invariant failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dav/cache.hpp"
#include "dav/conjectures.hpp"
#include "dav/golden.hpp"
#include "dav/json_io.hpp"
#include "dav/orders.hpp"

using namespace dav;

namespace {

struct Ctx {
    int jobs = 1;
    bool no_cache = false;
    bool json_out = false;
    bool timing = false;
    long long max_group_order = 255;
    std::string h_table_path;
    std::string cache_path;
    std::string command_echo;

    HTable table = HTable::bundled();
    std::optional<FileDCache> cache;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    ZerosumOptions zopt() {
        ZerosumOptions o;
        o.max_group_order = max_group_order;
        o.cache = cache ? &*cache : nullptr;
        return o;
    }

    QuadPipelineOptions qopt() {
        QuadPipelineOptions o;
        o.table = &table;
        o.zerosum = zopt();
        return o;
    }

    void finish_report(json& rep) {
        if (cache) rep["cache"] = {{"hits", cache->hits()}, {"misses", cache->misses()}};
        if (timing) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            rep["timing_ms"] = ms;
        }
    }
};

std::string default_cache_path() {
    if (const char* env = std::getenv("DAVTOOL_CACHE")) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"))
        return std::string(xdg) + "/davtool/dcache.txt";
    if (const char* home = std::getenv("HOME"))
        return std::string(home) + "/.cache/davtool/dcache.txt";
    return "davtool-dcache.txt";
}

void setup_ctx(Ctx& ctx) {
    if (ctx.h_table_path.empty())
        if (const char* env = std::getenv("DAVTOOL_HTABLE")) ctx.h_table_path = env;
    if (!ctx.h_table_path.empty()) {
        std::ifstream in(ctx.h_table_path);
        if (!in) throw parse_error("cannot open h-table file " + ctx.h_table_path);
        ctx.table = HTable::from_stream(in);
    }
    if (!ctx.no_cache) {
        if (ctx.cache_path.empty()) ctx.cache_path = default_cache_path();
        ctx.cache = FileDCache::load(ctx.cache_path);
    }
}

void persist_cache(Ctx& ctx) {
    if (!ctx.cache) return;
    std::error_code ec;
    std::filesystem::path p(ctx.cache_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    ctx.cache->save();
}

json parse_json_arg(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad ") + what + ": " + e.what());
    }
}

int cmd_davenport(Ctx& ctx, const std::string& group_arg, const std::string& subset_arg,
                  bool small) {
    FabGroup g = group_from_json(parse_json_arg(group_arg, "group"));
    Subset s;
    if (subset_arg.empty()) {
        std::vector<ElemIndex> all(g.order());
        std::iota(all.begin(), all.end(), 0);
        s = Subset::of(g, all);
    } else {
        s = subset_from_json(g, parse_json_arg(subset_arg, "subset"));
    }
    SrdResult r = small_rel_davenport(g, s, ctx.zopt());
    const long long value = small ? r.value : r.value + 1;
    json rep{{"command", ctx.command_echo},
             {"inputs", {{"group", group_to_json(g)}, {"subset", subset_to_json(g, s)}}},
             {"outputs", {{small ? "d" : "D", value}}}};
    rep["witnesses"] = r.witness ? sequence_to_json(g, *r.witness) : json::array();
    ctx.finish_report(rep);
    if (ctx.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << "group: " << group_to_json(g).dump() << "\n";
        if (!subset_arg.empty()) std::cout << "subset: " << subset_to_json(g, s).dump() << "\n";
        std::cout << (small ? "d = " : "D = ") << value << "\n";
        if (r.witness)
            std::cout << "witness: " << sequence_to_json(g, *r.witness).dump() << "\n";
    }
    return 0;
}

struct FamilySpec {
    std::vector<FabGroup> groups;
    std::vector<std::string> labels;
};

FamilySpec resolve_groups(long long max_order, const std::string& family, int k_max) {
    FamilySpec out;
    auto label = [](const FabGroup& g) {
        if (g.trivial()) return std::string("Z1");
        std::string s;
        for (std::size_t i = 0; i < g.factors().size(); ++i) {
            if (i) s += "x";
            s += "Z" + std::to_string(g.factors()[i]);
        }
        return s;
    };
    if (!family.empty()) {
        // pattern Z<m>xZ<m>k: the groups Z_m + Z_{mk} for k = 1..k_max
        std::size_t x = family.find("xZ");
        if (family.size() < 5 || family[0] != 'Z' || x == std::string::npos ||
            family.back() != 'k')
            throw parse_error("family must look like Z2xZ2k");
        std::int64_t m1, m2;
        try {
            m1 = std::stoll(family.substr(1, x - 1));
            m2 = std::stoll(family.substr(x + 2, family.size() - x - 3));
        } catch (const std::exception&) {
            throw parse_error("family must look like Z2xZ2k");
        }
        if (m1 != m2 || m1 < 2) throw parse_error("family must look like Z2xZ2k");
        for (int k = 1; k <= k_max; ++k) {
            out.groups.push_back(make_group({m1, m1 * k}));
            out.labels.push_back(label(out.groups.back()));
        }
        return out;
    }
    for (std::int64_t n = 1; n <= max_order; ++n) {
        for (const auto& inv : abelian_groups_of_order(n)) {
            out.groups.push_back(make_group(inv));
            out.labels.push_back(label(out.groups.back()));
        }
    }
    return out;
}

int cmd_conjectures(Ctx& ctx, long long max_order, const std::string& family, int k_max) {
    if (max_order > ctx.max_group_order)
        throw size_guard_error("max-order exceeds the group-order guard " +
                               std::to_string(ctx.max_group_order));
    FamilySpec fam = resolve_groups(max_order, family, k_max);

    struct Row {
        std::string label;
        long long gen_cases = 0, gen_viol = 0;
        long long diff_cases = 0, diff_viol = 0;
        json details = json::array();
    };
    ZerosumOptions zo = ctx.zopt();
    auto run_group = [zo](const FabGroup& g, const std::string& lbl) {
        Row row;
        row.label = lbl;
        for (const Subgroup& h : all_subgroups(g)) {
            ConjectureReport rep = check_conjecture_generator(g, h, zo);
            row.gen_cases += rep.cases_checked;
            row.gen_viol += static_cast<long long>(rep.violations.size());
            for (const ConjectureViolation& v : rep.violations)
                row.details.push_back({{"group", group_to_json(g)},
                                       {"kind", "generator"},
                                       {"alpha", subset_to_json(g, v.lhs_set)},
                                       {"beta", subset_to_json(g, v.rhs_set)},
                                       {"d_alpha", v.d_lhs},
                                       {"d_beta", v.d_rhs}});
        }
        ConjectureReport rep = check_conjecture_subgroup_difference(g, zo);
        row.diff_cases = rep.cases_checked;
        row.diff_viol = static_cast<long long>(rep.violations.size());
        for (const ConjectureViolation& v : rep.violations)
            row.details.push_back({{"group", group_to_json(g)},
                                   {"kind", "subgroup-difference"},
                                   {"H2", subset_to_json(g, v.lhs_set)},
                                   {"difference", subset_to_json(g, v.rhs_set)},
                                   {"d_H2", v.d_lhs},
                                   {"d_difference", v.d_rhs}});
        return row;
    };

    std::vector<Row> rows(fam.groups.size());
    if (ctx.jobs <= 1) {
        for (std::size_t i = 0; i < fam.groups.size(); ++i)
            rows[i] = run_group(fam.groups[i], fam.labels[i]);
    } else {
        std::vector<std::future<Row>> futs;
        futs.reserve(fam.groups.size());
        for (std::size_t i = 0; i < fam.groups.size(); ++i)
            futs.push_back(
                std::async(std::launch::async, run_group, fam.groups[i], fam.labels[i]));
        for (std::size_t i = 0; i < futs.size(); ++i) rows[i] = futs[i].get();
    }

    long long total_viol = 0;
    json jrows = json::array();
    for (const Row& r : rows) {
        total_viol += r.gen_viol + r.diff_viol;
        jrows.push_back({{"group", r.label},
                         {"generator", {{"cases", r.gen_cases}, {"violations", r.gen_viol}}},
                         {"subgroup_difference",
                          {{"cases", r.diff_cases}, {"violations", r.diff_viol}}},
                         {"details", r.details}});
    }
    json rep{{"command", ctx.command_echo},
             {"outputs", {{"rows", jrows}, {"total_violations", total_viol}}}};
    ctx.finish_report(rep);
    if (ctx.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        for (const Row& r : rows) {
            std::cout << r.label << ": generator cases=" << r.gen_cases
                      << " violations=" << r.gen_viol << " | subgroup-diff cases=" << r.diff_cases
                      << " violations=" << r.diff_viol << "\n";
            for (const json& d : r.details) std::cout << "  violation: " << d.dump() << "\n";
        }
        std::cout << "total violations: " << total_viol << "\n";
    }
    return total_viol == 0 ? 0 : 1;
}

int cmd_elasticity_order(Ctx& ctx, const std::string& data_arg) {
    OrderClassInput in = order_class_from_json(parse_json_arg(data_arg, "order class data"));
    Elasticity rho = Elasticity::infinite();
    std::string route;
    if (auto inf = infinite_elasticity_guard(in.primes_over_conductor)) {
        rho = *inf;
        route = "multiple primes over the conductor";
    } else if (!in.data.conductor_principal && in.data.a == 1 && !in.data.p_principal) {
        rho = elasticity_prime_nonprincipal(in.data, ctx.zopt());
        route = "prime non-principal conductor";
    } else {
        rho = elasticity_prime_conductor(in.data, ctx.zopt()); // throws when unsupported
        route = "principal primary conductor";
    }
    json rep{{"command", ctx.command_echo},
             {"inputs", order_class_to_json(in)},
             {"outputs", {{"elasticity", rho.str()}, {"route", route}}}};
    ctx.finish_report(rep);
    if (ctx.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << "route: " << route << "\n";
        std::cout << "rho = " << rho.str() << "\n";
    }
    return 0;
}

int cmd_elasticity_quadratic(Ctx& ctx, const std::string& spec_arg) {
    QuadInput in = quad_input_from_json(parse_json_arg(spec_arg, "quadratic spec"));
    QuadPipelineOptions opt = ctx.qopt();
    opt.h = in.h;
    opt.p_principal = in.p_principal;
    opt.ladder = in.ladder;
    QuadPipelineResult r = elasticity_quadratic(in.d, in.p, in.a, opt);
    json outputs{{"elasticity", r.rho.str()},
                 {"route", r.route},
                 {"splitting", to_string(r.spec.splitting)}};
    if (r.route != "split-infinite") {
        outputs["h"] = r.h;
        outputs["h_source"] = r.h_source;
        outputs["h_prime"] = r.h_prime;
        outputs["cyclicity"] = to_string(r.cyclicity);
        if (r.spec.d > 0) {
            outputs["L"] = r.l_value;
            outputs["unit"] = r.unit;
            outputs["unit_index"] = r.unit_idx;
        }
        if (r.used_p_principal) outputs["p_principal"] = r.p_principal;
        if (!r.dj.empty()) outputs["d_j"] = std::vector<int>(r.dj.begin() + 1, r.dj.end());
    }
    json rep{{"command", ctx.command_echo},
             {"inputs", parse_json_arg(spec_arg, "quadratic spec")},
             {"outputs", outputs},
             {"notes", r.notes}};
    ctx.finish_report(rep);
    if (ctx.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << "splitting: " << to_string(r.spec.splitting) << "\n";
        if (r.route != "split-infinite") {
            std::cout << "h = " << r.h << " (" << r.h_source << ")\n";
            if (r.spec.d > 0)
                std::cout << "L = " << r.l_value << ", fundamental unit " << r.unit
                          << ", unit index " << r.unit_idx << "\n";
            std::cout << "|Cl(R_n)| = " << r.h_prime << " (" << to_string(r.cyclicity) << ")\n";
            if (r.used_p_principal)
                std::cout << "[P] principal: " << (r.p_principal ? "yes" : "no") << "\n";
            if (!r.dj.empty()) {
                std::cout << "d_j:";
                for (std::size_t j = 1; j < r.dj.size(); ++j) std::cout << " " << r.dj[j];
                std::cout << "\n";
            }
            std::cout << "route: " << r.route << "\n";
        }
        for (const std::string& n : r.notes) std::cout << "note: " << n << "\n";
        std::cout << "rho = " << r.rho.str() << "\n";
    }
    return 0;
}

int cmd_reproduce_paper(Ctx& ctx, const std::string& only) {
    QuadPipelineOptions opt = ctx.qopt();
    std::vector<GoldenRow> rows = reproduce_paper_rows(opt);
    if (!only.empty()) {
        std::vector<GoldenRow> filtered;
        for (GoldenRow& r : rows)
            if (r.name == only) filtered.push_back(std::move(r));
        if (filtered.empty()) throw invalid_argument_error("no golden row named " + only);
        rows = std::move(filtered);
    }
    int passed = 0;
    json jrows = json::array();
    for (const GoldenRow& r : rows) {
        if (r.pass) ++passed;
        jrows.push_back({{"name", r.name},
                         {"statement", r.statement},
                         {"expected", r.expected},
                         {"actual", r.actual},
                         {"pass", r.pass}});
    }
    json rep{{"command", ctx.command_echo},
             {"outputs",
              {{"rows", jrows}, {"passed", passed}, {"total", static_cast<int>(rows.size())}}}};
    ctx.finish_report(rep);
    if (ctx.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        for (const GoldenRow& r : rows) {
            std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.statement
                      << " -> " << r.actual;
            if (!r.pass) std::cout << " (expected " << r.expected << ")";
            std::cout << "\n";
        }
        std::cout << passed << "/" << rows.size() << " PASS\n";
    }
    return passed == static_cast<int>(rows.size()) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative Davenport constants and the elasticity of orders in quadratic fields"};
    app.require_subcommand(1);

    Ctx ctx;
    {
        std::ostringstream echo;
        for (int i = 0; i < argc; ++i) echo << (i ? " " : "") << argv[i];
        ctx.command_echo = echo.str();
    }
    app.add_option("--jobs", ctx.jobs, "parallel workers for sweeps")->capture_default_str();
    app.add_flag("--no-cache", ctx.no_cache, "disable the persistent d-value cache");
    app.add_flag("--json", ctx.json_out, "machine-readable report");
    app.add_flag("--timing", ctx.timing, "include timing in the report");
    app.add_option("--max-group-order", ctx.max_group_order, "guard for exhaustive searches")
        ->capture_default_str();
    app.add_option("--h-table", ctx.h_table_path,
                   "class-number table file (default: bundled; env DAVTOOL_HTABLE)");
    app.add_option("--cache", ctx.cache_path, "cache file path (env DAVTOOL_CACHE)");

    std::string group_arg, subset_arg, data_arg, spec_arg, family, only;
    long long max_order = 12;
    int k_max = 4;

    CLI::App* dav_cmd = app.add_subcommand("davenport", "D(G) or D_S(G) with a witness");
    dav_cmd->add_option("--group", group_arg, "group spec JSON")->required();
    dav_cmd->add_option("--subset", subset_arg, "subset S as an array of elements");

    CLI::App* srel_cmd = app.add_subcommand("srel", "small constant d_S(G) with a witness");
    srel_cmd->add_option("--group", group_arg, "group spec JSON")->required();
    srel_cmd->add_option("--subset", subset_arg, "subset S as an array of elements");

    CLI::App* conj_cmd = app.add_subcommand("conjectures", "sweep the two coset conjectures");
    conj_cmd->add_option("--max-order", max_order, "all abelian groups up to this order")
        ->capture_default_str();
    conj_cmd->add_option("--family", family, "named family, e.g. Z2xZ2k");
    conj_cmd->add_option("--k-max", k_max, "family size bound")->capture_default_str();

    CLI::App* eord_cmd = app.add_subcommand("elasticity-order", "elasticity from order class data");
    eord_cmd->add_option("--data", data_arg, "order class data JSON")->required();

    CLI::App* equad_cmd =
        app.add_subcommand("elasticity-quadratic", "elasticity of R_n in Q(sqrt d)");
    equad_cmd->add_option("--spec", spec_arg, "quadratic spec JSON")->required();

    CLI::App* rep_cmd = app.add_subcommand("reproduce-paper", "golden suite of worked examples");
    rep_cmd->add_option("--only", only, "run a single row by name");

    CLI11_PARSE(app, argc, argv);

    try {
        setup_ctx(ctx);
        int rc = 0;
        if (app.got_subcommand(dav_cmd))
            rc = cmd_davenport(ctx, group_arg, subset_arg, false);
        else if (app.got_subcommand(srel_cmd))
            rc = cmd_davenport(ctx, group_arg, subset_arg, true);
        else if (app.got_subcommand(conj_cmd))
            rc = cmd_conjectures(ctx, max_order, family, k_max);
        else if (app.got_subcommand(eord_cmd))
            rc = cmd_elasticity_order(ctx, data_arg);
        else if (app.got_subcommand(equad_cmd))
            rc = cmd_elasticity_quadratic(ctx, spec_arg);
        else if (app.got_subcommand(rep_cmd))
            rc = cmd_reproduce_paper(ctx, only);
        persist_cache(ctx);
        return rc;
    } catch (const size_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const invariant_violation_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
