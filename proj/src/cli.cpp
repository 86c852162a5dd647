#include "cfpo/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "cfpo/decomposition.hpp"
#include "cfpo/dot_export.hpp"
#include "cfpo/json_io.hpp"
#include "cfpo/logic.hpp"
#include "cfpo/wreath.hpp"

namespace cfpo::cli {

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFails = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(out_path, j);
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Perm perm_from_json(const Poset& host, const json& j) {
    Perm p = Perm::identity(static_cast<int>(host.size()));
    for (auto& [from, to] : j.items()) {
        int fi = host.index_of(from);
        int ti = host.index_of(to.get<std::string>());
        if (fi < 0 || ti < 0) throw InputError("permutation mentions unknown element");
        p.img[fi] = ti;
    }
    std::vector<int> seen(host.size(), 0);
    for (int v : p.img)
        if (seen[v]++) throw InputError("permutation is not a bijection");
    return p;
}

json wreath_report_json(const WreathIsoReport& rep) {
    json j;
    j["homomorphism"] = rep.homomorphism;
    j["injective"] = rep.injective;
    if (rep.surjective.has_value())
        j["surjective"] = *rep.surjective;
    else
        j["surjective"] = nullptr;
    j["wreathOrder"] = rep.wreath_order;
    j["autDecOrder"] = rep.aut_dec_order;
    j["exhaustive"] = rep.exhaustive;
    return j;
}

struct DemoTable {
    std::vector<std::pair<std::string, bool>> rows;
    bool add(const std::string& name, bool ok) {
        rows.push_back({name, ok});
        return ok;
    }
    int finish() const {
        bool all = true;
        for (auto& [name, ok] : rows) {
            std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
            all = all && ok;
        }
        return all ? kOk : kPropertyFails;
    }
};

// The 14-point picture, encoded dot by dot with the drawing's coordinates.
Poset figure_adjacency() {
    std::vector<std::string> elems = {"d10_0",  "d30_0",  "d20_15", "d10_30", "d30_30",
                                      "d10_10", "d30_10", "d20_25", "d10_40", "d30_40",
                                      "d15_7",  "d25_7",  "d15_22", "d25_22"};
    std::vector<std::pair<std::string, std::string>> covers = {
        {"d10_0", "d15_7"},   {"d15_7", "d20_15"},  {"d30_0", "d25_7"},  {"d25_7", "d20_15"},
        {"d20_15", "d15_22"}, {"d15_22", "d10_30"}, {"d20_15", "d25_22"}, {"d25_22", "d30_30"},
        {"d10_0", "d10_10"},  {"d30_0", "d30_10"},  {"d20_15", "d20_25"}, {"d10_30", "d10_40"},
        {"d30_30", "d30_40"}};
    return Poset::build(elems, covers, RelationKind::Covers);
}

int cmd_demo(std::uint64_t seed, int random_rounds) {
    DemoTable table;

    Poset skeleton = Poset::build({"a0", "a1", "c", "b0", "b1"},
                                  {{"a0", "c"}, {"a1", "c"}, {"c", "b0"}, {"c", "b1"}},
                                  RelationKind::Covers);
    ChainedTree one_point = ChainedTree::make(Poset::build({"b"}, {}, RelationKind::Covers));

    DecoratedPoset dec = decorate(skeleton, one_point, one_point);
    int sk = 0, ab = 0, bt = 0;
    for (auto& [e, pv] : dec.provenance) {
        if (pv.kind == Provenance::Kind::Skeleton) ++sk;
        if (pv.kind == Provenance::Kind::Above) ++ab;
        if (pv.kind == Provenance::Kind::Between) ++bt;
    }
    table.add("decoration has 14 = 5+5+4 elements",
              dec.base.size() == 14 && sk == 5 && ab == 5 && bt == 4);
    table.add("decoration is cycle-free", dec.base.is_cycle_free());
    table.add("matches the hand-encoded figure",
              find_order_isomorphism(dec.base, figure_adjacency()).has_value());

    WreathProduct w(skeleton, one_point, one_point);
    auto rep = w.verify_action_isomorphism(10000, seed);
    table.add("wreath order 4 acts isomorphically onto Aut (4)",
              rep.homomorphism && rep.injective && rep.surjective.value_or(false) &&
                  rep.wreath_order == 4 && rep.aut_dec_order == 4);

    Decomposition back = decompose(dec.base, dec.skeleton_elements());
    table.add("decomposition recovers the skeleton and both trees",
              find_order_isomorphism(back.skeleton, skeleton).has_value() &&
                  back.above.base.size() == 1 && back.between.base.size() == 1);

    std::mt19937_64 rng(seed);
    bool all_cfpo = true;
    for (int i = 0; i < random_rounds; ++i) {
        // small random skeleton: random forest with random orientations
        int n = 1 + static_cast<int>(rng() % 5);
        std::vector<std::string> elems;
        std::vector<std::pair<std::string, std::string>> covers;
        for (int v = 0; v < n; ++v) elems.push_back("n" + std::to_string(v));
        for (int v = 1; v < n; ++v) {
            int parent = static_cast<int>(rng() % v);
            if (rng() % 2)
                covers.emplace_back(elems[parent], elems[v]);
            else
                covers.emplace_back(elems[v], elems[parent]);
        }
        Poset x = Poset::build(elems, covers, RelationKind::Covers);
        DecoratedPoset d = decorate(x, one_point, one_point);
        all_cfpo = all_cfpo && d.base.is_cycle_free();
    }
    table.add("random decorations stay cycle-free (" + std::to_string(random_rounds) + "x)",
              all_cfpo);

    return table.finish();
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"decorated cycle-free partial orders: construction, automorphism groups, "
                 "wreath products and reconstruction checks"};
    app.require_subcommand(1);
    app.fallthrough(); // global limit flags may follow the subcommand

    SearchLimits limits;
    LogicLimits logic_limits;
    app.add_option("--max-order", limits.max_order, "group materialization bound");
    app.add_option("--max-degree", limits.max_degree, "automorphism search size bound");
    int arity = 2;
    std::uint64_t budget = logic_limits.quantifier_budget;
    app.add_option("--arity", arity, "tuple arity for the logic layer");
    app.add_option("--quantifier-budget", budget, "assignments allowed per quantifier sweep");

    // check -----------------------------------------------------------------
    std::string check_file;
    auto* c_check = app.add_subcommand("check", "validate a poset/tree file and test "
                                                "cycle-freeness");
    c_check->add_option("file", check_file)->required();

    // adjacent-pairs ----------------------------------------------------------
    std::string ap_file, ap_out;
    auto* c_ap = app.add_subcommand("adjacent-pairs", "list the cover pairs");
    c_ap->add_option("file", ap_file)->required();
    c_ap->add_option("-o,--out", ap_out);

    // decorate ----------------------------------------------------------------
    std::string dx, ds, dt, d_out;
    auto* c_dec = app.add_subcommand("decorate", "glue trees onto a skeleton");
    c_dec->add_option("--skeleton", dx)->required();
    c_dec->add_option("--above", ds);
    c_dec->add_option("--between", dt);
    c_dec->add_option("-o,--out", d_out);

    // aut ---------------------------------------------------------------------
    std::string aut_file, aut_out;
    auto* c_aut = app.add_subcommand("aut", "automorphism group (chain predicate respected)");
    c_aut->add_option("file", aut_file)->required();
    c_aut->add_option("-o,--out", aut_out);

    // orbits --------------------------------------------------------------------
    std::string orb_file, orb_set, orb_out;
    auto* c_orb = app.add_subcommand("orbits", "orbit partition and transitivity flags");
    c_orb->add_option("file", orb_file)->required();
    c_orb->add_option("--set", orb_set, "comma-separated subset (default: all elements)");
    c_orb->add_option("-o,--out", orb_out);

    // wreath-verify --------------------------------------------------------------
    std::string wx, ws, wt, w_out;
    std::uint64_t w_samples = 10000, w_seed = 2026;
    auto* c_wr = app.add_subcommand("wreath-verify",
                                    "check the wreath action against the automorphism group");
    c_wr->add_option("--skeleton", wx)->required();
    c_wr->add_option("--above", ws);
    c_wr->add_option("--between", wt);
    c_wr->add_option("--samples", w_samples);
    c_wr->add_option("--seed", w_seed);
    c_wr->add_option("-o,--out", w_out);

    // decompose --------------------------------------------------------------
    std::string dc_file, dc_candidate, dc_prefix, dc_out;
    auto* c_dc = app.add_subcommand("decompose", "split a poset along a candidate skeleton");
    c_dc->add_option("file", dc_file)->required();
    c_dc->add_option("--candidate", dc_candidate,
                     "comma-separated skeleton set (default: provenance skeleton)");
    c_dc->add_option("--out-prefix", dc_prefix, "write <prefix>{skeleton,above,between}.json");
    c_dc->add_option("-o,--out", dc_out, "write the report here instead of stdout");

    // reconstruct-skeleton ------------------------------------------------------
    std::string rs_file, rs_out;
    auto* c_rs = app.add_subcommand("reconstruct-skeleton",
                                    "interpret the skeleton inside the automorphism group");
    c_rs->add_option("file", rs_file)->required();
    c_rs->add_option("-o,--out", rs_out);

    // reconstruct-components ------------------------------------------------------
    std::string rc_file, rc_mode, rc_point, rc_pair, rc_out;
    auto* c_rc = app.add_subcommand("reconstruct-components",
                                    "classify subgroups of the function part");
    c_rc->add_option("file", rc_file)->required();
    c_rc->add_option("--mode", rc_mode, "above | between")->required();
    c_rc->add_option("--point", rc_point, "skeleton point (above mode)");
    c_rc->add_option("--pair", rc_pair, "lo,hi skeleton pair (between mode)");
    c_rc->add_option("-o,--out", rc_out);

    // eval ---------------------------------------------------------------------
    std::string ev_file, ev_formula, ev_args;
    auto* c_ev = app.add_subcommand("eval", "evaluate a formula over a decorated poset");
    c_ev->add_option("--structure", ev_file)->required();
    c_ev->add_option("--formula", ev_formula, "built-in name or JSON file")->required();
    c_ev->add_option("--args", ev_args, "JSON file binding tuple/element variables");

    // dot ---------------------------------------------------------------------
    std::string dot_file, dot_out;
    auto* c_dot = app.add_subcommand("dot", "Hasse diagram as DOT");
    c_dot->add_option("file", dot_file)->required();
    c_dot->add_option("-o,--out", dot_out);

    // demo ---------------------------------------------------------------------
    std::uint64_t demo_seed = 2026;
    int demo_rounds = 50;
    auto* c_demo = app.add_subcommand("demo", "run the worked example end to end");
    c_demo->add_option("--seed", demo_seed, "seed for the random mini-suite");
    c_demo->add_option("--rounds", demo_rounds);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    logic_limits.tuple_arity = arity;
    logic_limits.quantifier_budget = budget;
    logic_limits.search = limits;

    try {
        if (*c_check) {
            json j = load_json_file(check_file);
            Poset p = poset_from_json(j);
            if (j.contains("root") || j.contains("chain")) {
                ChainedTree t = tree_from_json(j); // throws on violations
                (void)t;
            }
            if (!p.is_cycle_free()) {
                std::cout << "not cycle-free; witness cycle:";
                for (const auto& e : p.cycle_witness()) std::cout << " " << e;
                std::cout << "\n";
                return kPropertyFails;
            }
            std::cout << "ok: " << p.size() << " elements, " << p.cover_pairs().size()
                      << " cover pairs, cycle-free\n";
            return kOk;
        }

        if (*c_ap) {
            Poset p = poset_from_json(load_json_file(ap_file));
            json out = json::array();
            for (auto& [a, b] : adjacent_pairs(p)) out.push_back(json::array({a, b}));
            emit(out, ap_out);
            return kOk;
        }

        if (*c_dec) {
            Poset x = poset_from_json(load_json_file(dx));
            ChainedTree s = ds.empty() ? ChainedTree{} : tree_from_json(load_json_file(ds));
            ChainedTree t = dt.empty() ? ChainedTree{} : tree_from_json(load_json_file(dt));
            DecoratedPoset d = decorate(x, s, t);
            emit(decorated_to_json(d), d_out);
            return kOk;
        }

        if (*c_aut) {
            json j = load_json_file(aut_file);
            Poset p = poset_from_json(j);
            std::map<std::string, std::set<std::string>> preds;
            if (j.contains("chain")) {
                auto chain = j.at("chain").get<std::vector<std::string>>();
                preds["chain"] = std::set<std::string>(chain.begin(), chain.end());
            }
            emit(group_to_json(automorphism_group(p, {}, preds, limits)), aut_out);
            return kOk;
        }

        if (*c_orb) {
            Poset p = poset_from_json(load_json_file(orb_file));
            auto set = orb_set.empty() ? p.elements() : split_list(orb_set);
            auto g = automorphism_group(p, {}, {}, limits);
            auto rep = orbit_report(g, p, set);
            json out;
            out["orbits"] = rep.orbits;
            out["transitiveOnSet"] = rep.transitive_on_set;
            out["transitiveOnAdjacentPairs"] = rep.transitive_on_adjacent_pairs;
            emit(out, orb_out);
            return kOk;
        }

        if (*c_wr) {
            Poset x = poset_from_json(load_json_file(wx));
            ChainedTree s = ws.empty() ? ChainedTree{} : tree_from_json(load_json_file(ws));
            ChainedTree t = wt.empty() ? ChainedTree{} : tree_from_json(load_json_file(wt));
            WreathProduct w(x, s, t, limits);
            auto rep = w.verify_action_isomorphism(w_samples, w_seed, limits);
            emit(wreath_report_json(rep), w_out);
            bool ok = rep.homomorphism && rep.injective && rep.surjective.value_or(true);
            return ok ? kOk : kPropertyFails;
        }

        if (*c_dc) {
            json j = load_json_file(dc_file);
            DecoratedPoset d = decorated_from_json(j);
            std::vector<std::string> candidate =
                dc_candidate.empty() ? d.skeleton_elements() : split_list(dc_candidate);
            for (const auto& e : candidate)
                if (d.base.index_of(e) < 0)
                    throw InputError("candidate mentions unknown element '" + e + "'");
            if (candidate.empty()) throw InputError("no candidate skeleton given");

            json report;
            auto verdicts = classify_components(d.base, candidate);
            json vj = json::array();
            bool violated = false;
            for (const auto& v : verdicts) {
                json e;
                e["members"] = v.members;
                switch (v.kind) {
                case ComponentVerdict::Kind::Attached:
                    e["verdict"] = "attached";
                    e["anchor"] = v.anchor;
                    break;
                case ComponentVerdict::Kind::Between:
                    e["verdict"] = "between";
                    e["anchor"] = v.anchor;
                    e["anchor2"] = v.anchor2;
                    break;
                case ComponentVerdict::Kind::Violation:
                    e["verdict"] = "violation";
                    e["reason"] = v.reason;
                    violated = true;
                    break;
                }
                vj.push_back(e);
            }
            report["classes"] = vj;
            if (violated) {
                emit(report, dc_out);
                return kPropertyFails;
            }
            try {
                Decomposition dec = decompose(d.base, candidate, limits);
                report["skeleton"] = poset_to_json(dec.skeleton);
                report["above"] = tree_to_json(dec.above);
                report["between"] = tree_to_json(dec.between);
                report["witness"] = dec.witness;
                if (dec.transitive_on_set)
                    report["transitiveOnSet"] = *dec.transitive_on_set;
                if (dec.transitive_on_adjacent_pairs)
                    report["transitiveOnAdjacentPairs"] = *dec.transitive_on_adjacent_pairs;
                if (!dc_prefix.empty()) {
                    save_json_file(dc_prefix + "skeleton.json", poset_to_json(dec.skeleton));
                    save_json_file(dc_prefix + "above.json", tree_to_json(dec.above));
                    save_json_file(dc_prefix + "between.json", tree_to_json(dec.between));
                }
                emit(report, dc_out);
                return kOk;
            } catch (const InputError& e) {
                report["error"] = e.what();
                emit(report, dc_out);
                return kPropertyFails;
            }
        }

        if (*c_rs) {
            DecoratedPoset d = decorated_from_json(load_json_file(rs_file));
            ActionStructure as(d, std::nullopt, logic_limits);
            auto sk = as.extract_skeleton();
            json out;
            json pts = json::array();
            std::vector<std::string> ids;
            for (const auto& p : sk.points) {
                pts.push_back(json{{"id", p.id}, {"yield", p.yield}, {"gates", p.rep_points}});
                ids.push_back(p.id);
            }
            out["points"] = pts;
            json bj = json::array();
            for (auto& [y, x, z] : sk.betweenness)
                bj.push_back(json::array({sk.points[y].id, sk.points[x].id, sk.points[z].id}));
            out["betweenness"] = bj;

            Poset x = skeleton_of(d);
            bool iso = betweenness_isomorphic(ids, sk.betweenness, x.elements(),
                                              path_betweenness(x));
            out["isomorphicToSkeleton"] = iso;

            // skeleton points no realized class pins (the reason an
            // interpretation comes out too small)
            std::set<std::string> pinned;
            for (const auto& p : sk.points) {
                if (p.yield.rfind("pt:", 0) == 0) {
                    pinned.insert(p.yield.substr(3));
                } else {
                    auto comma = p.yield.find(',');
                    pinned.insert(p.yield.substr(5, comma - 5));
                    pinned.insert(p.yield.substr(comma + 1));
                }
            }
            json unpinned = json::array();
            for (const auto& e : x.elements())
                if (!pinned.count(e)) unpinned.push_back(e);
            out["unrepresentedPoints"] = unpinned;

            emit(out, rs_out);
            return iso ? kOk : kPropertyFails;
        }

        if (*c_rc) {
            DecoratedPoset d = decorated_from_json(load_json_file(rc_file));
            ActionStructure as(d, std::nullopt, logic_limits);
            ClassifyResult res;
            std::optional<PermGroup> component_aut;
            if (rc_mode == "above") {
                if (rc_point.empty()) throw InputError("above mode needs --point");
                res = as.classify_subgroups(ClassifyMode::Above, rc_point);
                auto copy = d.above_copy(rc_point);
                if (!copy.empty())
                    component_aut = automorphism_group(d.base.induced(copy), {}, {}, limits);
            } else if (rc_mode == "between") {
                auto pr = split_list(rc_pair);
                if (pr.size() != 2) throw InputError("between mode needs --pair lo,hi");
                res = as.classify_subgroups(ClassifyMode::Between, pr[0], pr[1]);
                auto copy = d.between_copy(pr[0], pr[1]);
                if (copy.empty()) copy = d.between_copy(pr[1], pr[0]);
                if (!copy.empty()) {
                    std::map<std::string, std::set<std::string>> preds;
                    auto& chain = preds["chain"];
                    for (const auto& e : copy)
                        if (d.provenance.at(e).on_chain) chain.insert(e);
                    component_aut =
                        automorphism_group(d.base.induced(copy), {}, preds, limits);
                }
            } else {
                throw InputError("mode must be 'above' or 'between'");
            }
            json out;
            json subs = json::array();
            bool all_isomorphic = true;
            for (const auto& s : res.subgroups) {
                json sj = group_to_json(s);
                if (component_aut) {
                    bool iso = find_group_isomorphism(s, *component_aut, limits).has_value();
                    sj["isomorphicToComponentGroup"] = iso;
                    all_isomorphic = all_isomorphic && iso;
                }
                subs.push_back(sj);
            }
            out["subgroups"] = subs;
            if (component_aut) out["componentGroupOrder"] = component_aut->order();
            if (!res.diagnostic.empty()) out["diagnostic"] = res.diagnostic;
            emit(out, rc_out);
            return all_isomorphic ? kOk : kPropertyFails;
        }

        if (*c_ev) {
            DecoratedPoset d = decorated_from_json(load_json_file(ev_file));
            ActionStructure as(d, std::nullopt, logic_limits);
            Formula f;
            if (ev_formula == "MeetsX" || ev_formula == "RepPointDec" ||
                ev_formula == "FunctionPart" || ev_formula == "AboveWitness" ||
                ev_formula == "BetweenWitness")
                f = Formula::builtin(ev_formula);
            else
                f = Formula::from_json(load_json_file(ev_formula));
            std::map<std::string, std::vector<Perm>> tuples;
            std::map<std::string, Perm> elems;
            if (!ev_args.empty()) {
                json env = load_json_file(ev_args);
                if (env.contains("tuples"))
                    for (auto& [name, members] : env.at("tuples").items()) {
                        std::vector<Perm> tuple;
                        for (const auto& m : members) tuple.push_back(perm_from_json(d.base, m));
                        tuples[name] = tuple;
                    }
                if (env.contains("elements"))
                    for (auto& [name, m] : env.at("elements").items())
                        elems[name] = perm_from_json(d.base, m);
            }
            bool value = as.eval(f, tuples, elems);
            std::cout << (value ? "true" : "false") << "\n";
            return value ? kOk : kPropertyFails;
        }

        if (*c_dot) {
            json j = load_json_file(dot_file);
            std::string text;
            if (json_is_decorated(j))
                text = export_dot(decorated_from_json(j));
            else if (j.contains("chain") || j.contains("root"))
                text = export_dot(tree_from_json(j));
            else
                text = export_dot(poset_from_json(j));
            if (dot_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(dot_out);
                if (!out) throw InputError("cannot write '" + dot_out + "'");
                out << text;
            }
            return kOk;
        }

        if (*c_demo) return cmd_demo(demo_seed, demo_rounds);
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

} // namespace cfpo::cli
