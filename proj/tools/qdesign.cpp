// Command-line front end: parameter reports, design and large-set I/O, the
// derived/residual/dual/reduced constructions, the combination construction,
// Kramer-Mesner search, and verification.  Exit codes: 0 success, 1 failed
// verification / nothing found, 2 usage or input errors.

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qdesign/io.hpp"
#include "qdesign/km.hpp"

using namespace qdesign;

namespace {

unsigned g_threads = 0;
bool g_json = false;

Subspace subspace_arg(const std::string& text, unsigned v, const Field& f) {
    return decode_subspace(text, v, f);
}

Subspace default_point(unsigned v, unsigned q) { return unit_subspace(v, q, 0); }

Subspace default_hyperplane(unsigned v, const Field& f) {
    return orthogonal_complement(unit_subspace(v, f.q(), 0), f);
}

std::string maybe_map(const std::function<ParameterSet()>& fn) {
    try {
        return fn().str();
    } catch (const Error& e) {
        return std::string("n/a (") + e.what() + ")";
    }
}

ordered_json maybe_map_json(const std::function<ParameterSet()>& fn) {
    try {
        return fn().str();
    } catch (const Error&) {
        return nullptr;
    }
}

void print_param_report(const ParameterSet& p) {
    ParamReport rep = is_admissible(p);
    if (g_json) {
        ordered_json j;
        j["params"] = p.str();
        j["admissible"] = rep.admissible;
        ordered_json ls = ordered_json::array();
        for (const auto& l : rep.lambdas) ls.push_back(l.str());
        j["lambda_s"] = std::move(ls);
        j["failing_s"] = rep.failing_s ? ordered_json(*rep.failing_s) : ordered_json(nullptr);
        j["derived"] = maybe_map_json([&] { return derived_params(p); });
        j["residual"] = maybe_map_json([&] { return residual_params(p); });
        j["reduced"] = maybe_map_json([&] { return reduced_params(p); });
        j["dual"] = maybe_map_json([&] { return dual_params(p); });
        std::cout << dump_json(j);
        return;
    }
    std::cout << "parameter set:  " << p.str() << "\n";
    std::cout << "admissible:     " << (rep.admissible ? "yes" : "no") << "\n";
    if (!rep.admissible)
        std::cout << "verdict:        not admissible (lambda_" << *rep.failing_s
                  << " non-integral)\n";
    std::cout << "lambda_s:      ";
    for (unsigned s = 0; s <= p.t(); ++s) std::cout << " s=" << s << ": " << rep.lambdas[s].str();
    std::cout << "\n";
    std::cout << "derived:        " << maybe_map([&] { return derived_params(p); }) << "\n";
    std::cout << "residual:       " << maybe_map([&] { return residual_params(p); }) << "\n";
    std::cout << "reduced:        " << maybe_map([&] { return reduced_params(p); }) << "\n";
    std::cout << "dual:           " << maybe_map([&] { return dual_params(p); }) << "\n";
}

int sweep_q(unsigned t, unsigned v, unsigned k, const Int& lambda, unsigned bound) {
    std::vector<unsigned> admissible_q;
    ordered_json rows = ordered_json::array();
    for (unsigned q = 2; q <= bound; ++q) {
        if (!is_prime_power(q)) continue;
        ParameterSet p(t, v, k, lambda, q);
        ParamReport rep = is_admissible(p);
        if (rep.admissible) admissible_q.push_back(q);
        if (g_json) {
            ordered_json r;
            r["q"] = q;
            r["admissible"] = rep.admissible;
            r["failing_s"] = rep.failing_s ? ordered_json(*rep.failing_s) : ordered_json(nullptr);
            rows.push_back(std::move(r));
        } else {
            std::cout << "q=" << q << ": "
                      << (rep.admissible
                              ? "admissible"
                              : "not admissible (lambda_" + std::to_string(*rep.failing_s) +
                                    " non-integral)")
                      << "\n";
        }
    }
    if (g_json) {
        ordered_json j;
        j["sweep"] = std::move(rows);
        std::cout << dump_json(j);
    } else if (admissible_q.empty()) {
        std::cout << "not admissible for any prime power q in [2," << bound << "]\n";
    } else {
        std::cout << "admissible for " << admissible_q.size() << " prime power(s) in [2," << bound
                  << "]\n";
    }
    return 0;
}

void print_verify_report(const ParameterSet& p, std::size_t blocks, const VerifyReport& rep) {
    if (g_json) {
        ordered_json j;
        j["params"] = p.str();
        j["blocks"] = blocks;
        j["ok"] = rep.ok;
        j["checked_t_subspaces"] = rep.checked_t_subspaces.str();
        j["min_count"] = rep.min_count;
        j["max_count"] = rep.max_count;
        if (rep.first_violation) {
            j["first_violation"] = {{"t_subspace", rep.first_violation->first.key()},
                                    {"count", rep.first_violation->second}};
        } else {
            j["first_violation"] = nullptr;
        }
        std::cout << dump_json(j);
        return;
    }
    std::cout << "design:         " << p.str() << ", " << blocks << " blocks\n";
    std::cout << "verified:       " << (rep.ok ? "yes" : "NO") << "\n";
    std::cout << "t-subspaces:    " << rep.checked_t_subspaces.str() << " seen, counts in ["
              << rep.min_count << ", " << rep.max_count << "]\n";
    if (rep.first_violation)
        std::cout << "violation:      t-subspace '" << rep.first_violation->first.key()
                  << "' met " << rep.first_violation->second << " blocks\n";
}

/// Shared tail of the construction commands: optionally verify, save, report.
int finish_design(Design d, const std::string& out, bool do_verify) {
    bool ok = true;
    if (do_verify) {
        VerifyReport rep = verify(d, g_threads);
        print_verify_report(d.params(), d.blocks().size(), rep);
        ok = rep.ok;
    }
    if (!out.empty()) {
        save_design(d, out);
        if (!g_json)
            std::cout << "wrote " << out << " (" << d.params().str() << ", " << d.blocks().size()
                      << " blocks)\n";
    }
    return ok ? 0 : 1;
}

int finish_large_set(LargeSet ls, const std::string& out, bool do_verify) {
    bool ok = true;
    if (do_verify) {
        LsReport rep = verify_ls(ls, g_threads);
        ok = rep.ok;
        if (!g_json)
            std::cout << "large set:      LS_" << ls.member_params().q() << "["
                      << ls.N() << "](" << ls.member_params().t() << "," << ls.member_params().k()
                      << "," << ls.member_params().v() << ") "
                      << (rep.ok ? "verified" : "FAILED") << "\n";
    }
    if (!out.empty()) {
        save_large_set(ls, out);
        if (!g_json)
            std::cout << "wrote " << out << " (" << ls.N() << " members of "
                      << ls.member_params().str() << ")\n";
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computation with subspace designs over GF(q)"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    app.add_option("--threads", g_threads,
                   "worker threads for verification (0 = QDESIGN_THREADS or all cores)");
    app.add_flag("--json", g_json, "machine-readable reports on stdout");

    std::function<int()> action;

    // ---- params ----------------------------------------------------------
    {
        auto* sub = app.add_subcommand("params", "admissibility and the four parameter maps");
        auto t = std::make_shared<unsigned>();
        auto v = std::make_shared<unsigned>();
        auto k = std::make_shared<unsigned>();
        auto lambda = std::make_shared<std::string>();
        auto q = std::make_shared<unsigned>(0);
        auto allq = std::make_shared<unsigned>(0);
        auto allq_default = std::make_shared<bool>(false);
        auto set = std::make_shared<std::string>();
        auto* ot = sub->add_option("t", *t, "strength");
        sub->add_option("v", *v, "ambient dimension")->needs(ot);
        sub->add_option("k", *k, "block dimension")->needs(ot);
        sub->add_option("lambda", *lambda, "index")->needs(ot);
        sub->add_option("q", *q, "field order (omit when sweeping q)");
        sub->add_option("--set", *set, "parameter set as t-(v,k,lambda)_q")->excludes(ot);
        sub->add_option("--all-q-upto", *allq, "check every prime power q up to this bound");
        sub->add_flag("--all-q", *allq_default, "check every prime power q up to 101");
        sub->callback([=, &action] {
            action = [=]() -> int {
                unsigned bound = *allq > 0 ? *allq : (*allq_default ? 101 : 0);
                if (!set->empty()) {
                    ParameterSet p = parse_param_set(*set);
                    if (bound > 0) return sweep_q(p.t(), p.v(), p.k(), p.lambda(), bound);
                    print_param_report(p);
                    return 0;
                }
                if (lambda->empty()) throw FormatError("give t v k lambda [q] or --set");
                Int l(*lambda);
                if (bound > 0) return sweep_q(*t, *v, *k, l, bound);
                if (*q == 0) throw FormatError("either q, --all-q, or --all-q-upto is required");
                print_param_report(ParameterSet(*t, *v, *k, l, *q));
                return 0;
            };
        });
    }

    // ---- verify ----------------------------------------------------------
    {
        auto* sub = app.add_subcommand("verify", "exhaustively verify a design file");
        auto in = std::make_shared<std::string>();
        sub->add_option("--in", *in, "qdesign/1 file")->required();
        sub->callback([=, &action] {
            action = [=]() -> int {
                Design d = load_design(*in);
                VerifyReport rep = verify(d, g_threads);
                print_verify_report(d.params(), d.blocks().size(), rep);
                return rep.ok ? 0 : 1;
            };
        });
    }

    // ---- derive / residual / dual / reduce --------------------------------
    {
        auto* sub = app.add_subcommand("derive", "derived design at a point");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto u = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("--u,--point", *u, "1-subspace as row text (default e_1)");
        sub->add_flag("--verify", *ver, "verify the result");
        sub->callback([=, &action] {
            action = [=]() -> int {
                Design d = load_design(*in);
                Subspace point = u->empty()
                                     ? default_point(d.params().v(), d.params().q())
                                     : subspace_arg(*u, d.params().v(), d.field());
                return finish_design(derived(d, point), *out, *ver);
            };
        });
    }
    {
        auto* sub = app.add_subcommand("residual", "residual design on a hyperplane");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto h = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("-H,--hyperplane", *h, "hyperplane as row text (default e_1^perp)");
        sub->add_flag("--verify", *ver, "verify the result");
        sub->callback([=, &action] {
            action = [=]() -> int {
                Design d = load_design(*in);
                Subspace hyp = h->empty() ? default_hyperplane(d.params().v(), d.field())
                                          : subspace_arg(*h, d.params().v(), d.field());
                return finish_design(residual(d, hyp), *out, *ver);
            };
        });
    }
    {
        auto* sub = app.add_subcommand("dual", "blockwise orthogonal complement");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_flag("--verify", *ver, "verify the result");
        sub->callback([=, &action] {
            action = [=]() -> int { return finish_design(dual(load_design(*in)), *out, *ver); };
        });
    }
    {
        auto* sub = app.add_subcommand("reduce", "same blocks as a (t-1)-design");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_flag("--verify", *ver, "verify the result");
        sub->callback([=, &action] {
            action = [=]() -> int { return finish_design(reduce(load_design(*in)), *out, *ver); };
        });
    }

    // ---- combine -----------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "combine", "build the reduced-parameter design from derived and residual designs");
        auto derf = std::make_shared<std::string>();
        auto resf = std::make_shared<std::string>();
        auto target = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--derived", *derf, "design with the derived parameters")->required();
        sub->add_option("--residual", *resf, "design with the residual parameters")->required();
        sub->add_option("--target", *target, "parameter set t-(v,k,lambda)_q")->required();
        sub->add_option("--out", *out)->required();
        sub->add_flag("--verify", *ver, "verify the result");
        sub->callback([=, &action] {
            action = [=]() -> int {
                Design a = load_design(*derf);
                Design b = load_design(*resf);
                return finish_design(combine(a, b, parse_param_set(*target)), *out, *ver);
            };
        });
    }

    // ---- search ------------------------------------------------------------
    {
        auto* sub = app.add_subcommand("search", "Kramer-Mesner search with a prescribed group");
        auto t = std::make_shared<unsigned>();
        auto v = std::make_shared<unsigned>();
        auto k = std::make_shared<unsigned>();
        auto lambda = std::make_shared<std::string>();
        auto q = std::make_shared<unsigned>();
        auto group = std::make_shared<std::string>("singer-normalizer");
        auto limit = std::make_shared<std::uint64_t>(1);
        auto budget = std::make_shared<std::uint64_t>(10'000'000);
        auto all = std::make_shared<bool>(false);
        auto lsn = std::make_shared<unsigned>(0);
        auto out = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--t", *t)->required();
        sub->add_option("--v", *v)->required();
        sub->add_option("--k", *k)->required();
        sub->add_option("--lambda", *lambda, "index (ignored with --ls)");
        sub->add_option("--q", *q)->required();
        sub->add_option("--group", *group, "trivial | singer | singer-normalizer");
        sub->add_option("--limit", *limit, "stop after this many solutions");
        sub->add_option("--budget", *budget, "search node budget");
        sub->add_flag("--all", *all, "enumerate all solutions");
        sub->add_option("--ls", *lsn, "search a large set with this many members");
        sub->add_option("--out", *out)->required();
        sub->add_flag("--verify", *ver, "verify what was found");
        sub->callback([=, &action] {
            action = [=]() -> int {
                Field f(*q);
                MatrixGroup g = *group == "trivial"
                                    ? trivial_group(*v, f)
                                    : singer_group(*v, f, *group == "singer-normalizer");
                if (*group != "trivial" && *group != "singer" && *group != "singer-normalizer")
                    throw FormatError("unknown group '" + *group + "'");
                if (*lsn > 0) {
                    LsSearchOptions opt;
                    opt.node_budget = *budget;
                    auto ls = ls_search(g, *t, *k, *lsn, opt);
                    if (!ls) {
                        std::cerr << "no large set found within the budget\n";
                        return 1;
                    }
                    if (!g_json)
                        std::cout << "found LS_" << *q << "[" << *lsn << "](" << *t << "," << *k
                                  << "," << *v << ")\n";
                    return finish_large_set(std::move(*ls), *out, *ver);
                }
                if (lambda->empty())
                    throw FormatError("--lambda is required unless --ls is given");
                ParameterSet target(*t, *v, *k, Int(*lambda), *q);
                KMInstance inst = build_km_instance(g, target);
                SolveOptions opt;
                opt.limit = *all ? 0 : *limit;
                opt.node_budget = *budget;
                SolveResult res = solve(inst, opt);
                if (!g_json)
                    std::cout << "instance: " << inst.a.size() << " x "
                              << inst.k_orbits.reps.size() << ", group order " << g.order.str()
                              << "\n"
                              << "solutions: " << res.selections.size() << " (nodes " << res.nodes
                              << ", " << (res.exhausted ? "search exhausted" : "stopped early")
                              << ")\n";
                if (res.selections.empty()) {
                    std::cerr << (res.exhausted
                                      ? "no solution exists under this group\n"
                                      : "no solution found within the node budget\n");
                    return 1;
                }
                return finish_design(assemble(inst, res.selections.front()), *out, *ver);
            };
        });
    }

    // ---- enumerate ---------------------------------------------------------
    {
        auto* sub = app.add_subcommand("enumerate", "stream all k-subspaces of GF(q)^v");
        auto v = std::make_shared<unsigned>();
        auto k = std::make_shared<unsigned>();
        auto q = std::make_shared<unsigned>();
        auto count_only = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        sub->add_option("--v", *v)->required();
        sub->add_option("--k", *k)->required();
        sub->add_option("--q", *q)->required();
        sub->add_flag("--count", *count_only, "print only the count");
        sub->add_option("--out", *out, "write one subspace per line to this file");
        sub->callback([=, &action] {
            action = [=]() -> int {
                Field f(*q);
                if (*count_only) {
                    std::uint64_t n = 0;
                    for_each_subspace(*v, *k, f, [&](const Subspace&) { ++n; });
                    std::cout << n << "\n";
                    return 0;
                }
                std::ostringstream lines;
                for_each_subspace(*v, *k, f, [&](const Subspace& s) { lines << s.key() << "\n"; });
                if (out->empty())
                    std::cout << lines.str();
                else
                    write_text_file(*out, lines.str());
                return 0;
            };
        });
    }

    // ---- large-set commands -------------------------------------------------
    {
        auto* sub = app.add_subcommand("ls-verify", "verify a large-set file");
        auto in = std::make_shared<std::string>();
        sub->add_option("--in", *in)->required();
        sub->callback([=, &action] {
            action = [=]() -> int {
                LargeSet ls = load_large_set(*in);
                LsReport rep = verify_ls(ls, g_threads);
                if (g_json) {
                    ordered_json j;
                    j["member_params"] = ls.member_params().str();
                    j["N"] = ls.N();
                    j["ok"] = rep.ok;
                    j["disjoint"] = rep.disjoint;
                    j["complete_cover"] = rep.complete_cover;
                    j["total_blocks"] = rep.total_blocks.str();
                    std::cout << dump_json(j);
                } else {
                    std::cout << "large set:      " << ls.N() << " members of "
                              << ls.member_params().str() << "\n";
                    std::cout << "disjoint:       " << (rep.disjoint ? "yes" : "NO") << "\n";
                    std::cout << "covers [V k]_q: " << (rep.complete_cover ? "yes" : "NO") << "\n";
                    bool members_ok = true;
                    for (const auto& r : rep.member_reports) members_ok = members_ok && r.ok;
                    std::cout << "members verify: " << (members_ok ? "yes" : "NO") << "\n";
                }
                return rep.ok ? 0 : 1;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("ls-dual", "dualize every member");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_flag("--verify", *ver);
        sub->callback([=, &action] {
            action = [=]() -> int {
                return finish_large_set(dual_ls(load_large_set(*in)), *out, *ver);
            };
        });
    }
    {
        auto* sub = app.add_subcommand("ls-derive", "derived large set at a point");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto u = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("--u,--point", *u, "1-subspace as row text (default e_1)");
        sub->add_flag("--verify", *ver);
        sub->callback([=, &action] {
            action = [=]() -> int {
                LargeSet ls = load_large_set(*in);
                const ParameterSet& p = ls.member_params();
                Subspace point = u->empty() ? default_point(p.v(), p.q())
                                            : subspace_arg(*u, p.v(), ls.field());
                return finish_large_set(derived_ls(ls, point), *out, *ver);
            };
        });
    }
    {
        auto* sub = app.add_subcommand("ls-residual", "residual large set on a hyperplane");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto h = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--in", *in)->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("-H,--hyperplane", *h, "hyperplane as row text (default e_1^perp)");
        sub->add_flag("--verify", *ver);
        sub->callback([=, &action] {
            action = [=]() -> int {
                LargeSet ls = load_large_set(*in);
                const ParameterSet& p = ls.member_params();
                Subspace hyp = h->empty() ? default_hyperplane(p.v(), ls.field())
                                          : subspace_arg(*h, p.v(), ls.field());
                return finish_large_set(residual_ls(ls, hyp), *out, *ver);
            };
        });
    }
    {
        auto* sub = app.add_subcommand("ls-combine", "combine two large sets member by member");
        auto derf = std::make_shared<std::string>();
        auto resf = std::make_shared<std::string>();
        auto target = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto permute = std::make_shared<std::string>();
        auto ver = std::make_shared<bool>(false);
        sub->add_option("--derived", *derf)->required();
        sub->add_option("--residual", *resf)->required();
        sub->add_option("--target", *target, "parameter set t-(v,k,lambda)_q")->required();
        sub->add_option("--out", *out)->required();
        sub->add_option("--permute", *permute, "comma-separated pairing of residual members");
        sub->add_flag("--verify", *ver);
        sub->callback([=, &action] {
            action = [=]() -> int {
                LargeSet a = load_large_set(*derf);
                LargeSet b = load_large_set(*resf);
                std::optional<std::vector<unsigned>> perm;
                if (!permute->empty()) {
                    perm.emplace();
                    std::istringstream ss(*permute);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) perm->push_back(std::stoul(tok));
                }
                return finish_large_set(
                    combine_ls(a, b, parse_param_set(*target), perm ? &*perm : nullptr), *out,
                    *ver);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints help or the usage error
        return rc == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
