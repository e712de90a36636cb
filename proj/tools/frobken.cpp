// frobken: exact Frobenius pushforward decomposition, F-singularity tests,
// End-algebra construction, and Kunz-regularity certificates for affine
// semigroup rings.

#include "frobken/catalog.hpp"
#include "frobken/ncb.hpp"
#include "frobken/report.hpp"
#include "frobken/ring_spec.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

namespace {

using frobken::BoxBound;
using frobken::Decomposition;
using frobken::EnumLimits;
using frobken::Int;
using frobken::IVec;
using frobken::MonomialModule;
using frobken::NCBlowup;
using frobken::QVec;
using frobken::RingSpec;
using frobken::Verdict;
using frobken::VerifyReport;
using nlohmann::json;

struct Options {
    std::string input;
    long p = 0;  // 0 = spec default
    int e = 1;
    int e0 = 1;
    int emax = 0;  // 0 = spec default
    int box = 0;   // 0 = spec default
    int threads = 1;
    std::string format = "json";
    std::string catalog_dir;
    bool no_cache = false;
    bool force = false;
};

json decomposition_json(const Decomposition& d, const BoxBound& box) {
    json classes = json::array();
    for (const auto& [id, mult] : d.multiplicity) {
        json c;
        c["id"] = id.str();
        c["residue"] = frobken::json_ivec(id.residue);
        c["multiplicity"] = frobken::json_int(mult);
        c["generators"] = [&] {
            json g = json::array();
            for (const IVec& v : d.representatives.at(id).minimal_generators(box)) {
                g.push_back(frobken::json_ivec(v));
            }
            return g;
        }();
        classes.push_back(std::move(c));
    }
    json out;
    out["p"] = d.p;
    out["e"] = d.e;
    out["source"] = d.source;
    out["total_rank"] = frobken::json_int(d.total_rank);
    out["classes"] = std::move(classes);
    return out;
}

json report_json(const VerifyReport& r) {
    json out;
    out["verdict"] = frobken::verdict_name(r.verdict);
    out["degrees_checked"] = r.degrees_checked;
    out["failures"] = r.failures;
    out["inconclusive"] = r.inconclusive;
    out["issues"] = r.issues;
    return out;
}

int exit_for_verdict(const std::string& v) {
    if (v == "CERTIFIED") return 0;
    if (v == "INCONCLUSIVE") return 2;
    return 3;
}

MonomialModule ring_module(const RingSpec& spec) {
    return MonomialModule::from_shift(QVec::Zero(spec.cone->dim), spec.cone);
}

std::vector<MonomialModule> rep_list(const Decomposition& d) {
    std::vector<MonomialModule> reps;
    for (const auto& [id, rep] : d.representatives) reps.push_back(rep);
    return reps;
}

NCBlowup make_ncb(const RingSpec& spec, int e0, const EnumLimits& limits, const BoxBound& box) {
    if (e0 == 0) {
        if (!spec.cyclic) {
            throw frobken::EngineError("NotACover",
                                       "e0 = 0 requires a cyclic quotient spec (regular cover)");
        }
        return frobken::build_cover_ncb(spec.cyclic->first, spec.cyclic->second, spec.p, limits,
                                        box);
    }
    return frobken::build_dblowup(spec.cone, spec.p, e0, limits, box);
}

// Plain-text rendering of a (possibly nested) report document.
void render_table(const json& j, std::ostream& os, const std::string& prefix = "") {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || value.is_array()) {
                os << prefix << key << ":\n";
                render_table(value, os, prefix + "  ");
            } else {
                os << prefix << key << ": " << (value.is_string() ? value.get<std::string>()
                                                                  : value.dump())
                   << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& value : j) {
            if (value.is_object() || value.is_array()) {
                os << prefix << "-\n";
                render_table(value, os, prefix + "  ");
            } else {
                os << prefix << "- "
                   << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            }
        }
    } else {
        os << prefix << j.dump() << "\n";
    }
}

json run_command(const std::string& command, const RingSpec& spec, const Options& opt,
                 const EnumLimits& limits, const BoxBound& box) {
    const int emax = opt.emax > 0 ? opt.emax : spec.e_max;
    MonomialModule ring = ring_module(spec);

    if (command == "decompose") {
        return decomposition_json(frobken::frobenius_pushforward(ring, spec.p, opt.e, limits),
                                  box);
    }
    if (command == "classes") {
        json per_e = json::array();
        for (int e = 1; e <= emax; ++e) {
            Decomposition d = frobken::frobenius_pushforward(ring, spec.p, e, limits);
            json ids = json::array();
            for (const auto& id : d.class_ids()) ids.push_back(id.str());
            per_e.push_back(json{{"e", e}, {"classes", std::move(ids)},
                                 {"count", d.multiplicity.size()}});
        }
        return json{{"p", spec.p}, {"per_e", std::move(per_e)}};
    }
    if (command == "fpure") {
        auto res = frobken::f_pure_check(ring, spec.p, limits);
        json out;
        out["p"] = spec.p;
        out["f_pure"] = res.f_pure;
        if (res.witness_residue) out["witness_residue"] = frobken::json_ivec(*res.witness_residue);
        return out;
    }
    if (command == "ffrt") {
        auto scan = frobken::ffrt_scan(ring, spec.p, emax, limits);
        json per_e = json::array();
        for (size_t i = 0; i < scan.per_e.size(); ++i) {
            per_e.push_back(json{{"e", static_cast<int>(i) + 1},
                                 {"count", scan.per_e[i].multiplicity.size()}});
        }
        json out;
        out["p"] = spec.p;
        out["per_e"] = std::move(per_e);
        if (scan.stabilized_from) {
            out["stabilized_from"] = *scan.stabilized_from;
        } else {
            out["stabilized_from"] = "NoStabilizationWitnessed";
        }
        return out;
    }
    if (command == "steady") {
        Decomposition m = frobken::frobenius_pushforward(ring, spec.p, opt.e0, limits);
        auto res = frobken::f_steady_check(m, spec.p, emax, limits);
        json out;
        out["p"] = spec.p;
        out["e0"] = opt.e0;
        out["f_steady"] = res.steady;
        if (!res.steady) out["first_failing_e"] = res.first_failing_e;
        return out;
    }
    if (command == "fsignature") {
        json per_e = json::array();
        for (int e = 1; e <= emax; ++e) {
            per_e.push_back(json{{"e", e},
                                 {"estimate", frobken::json_rat(frobken::f_signature_estimate(
                                                  ring, spec.p, e, limits))}});
        }
        return json{{"p", spec.p}, {"per_e", std::move(per_e)}};
    }
    if (command == "kunz") {
        bool regular = frobken::kunz_commutative_test(ring, spec.p, limits);
        return json{{"p", spec.p}, {"kunz_regular", regular}};
    }
    if (command == "endalg") {
        NCBlowup ncb = make_ncb(spec, opt.e0, limits, box);
        json cells = json::array();
        for (int i = 0; i < ncb.end_algebra.size(); ++i) {
            for (int j2 = 0; j2 < ncb.end_algebra.size(); ++j2) {
                json gens = json::array();
                for (const IVec& g : ncb.end_algebra.cell_generators(i, j2)) {
                    gens.push_back(frobken::json_ivec(g));
                }
                cells.push_back(json{{"source", ncb.end_algebra.ids[static_cast<size_t>(i)].str()},
                                     {"target", ncb.end_algebra.ids[static_cast<size_t>(j2)].str()},
                                     {"generators", std::move(gens)}});
            }
        }
        json out;
        out["p"] = spec.p;
        out["e0"] = opt.e0;
        out["classes"] = ncb.end_algebra.size();
        out["cells"] = std::move(cells);
        return out;
    }
    if (command == "ncb-build") {
        NCBlowup ncb = make_ncb(spec, opt.e0, limits, box);
        json out = decomposition_json(ncb.decomposition, box);
        out["e0"] = opt.e0;
        out["end_classes"] = ncb.end_algebra.size();
        out["cover"] = ncb.cover.has_value();
        return out;
    }
    if (command == "ncb-certify") {
        NCBlowup ncb = make_ncb(spec, opt.e0, limits, box);
        frobken::FrobeniusCertificate cert =
            frobken::frobenius_certificate(ncb, opt.e, box, limits);
        return cert.to_json();
    }
    if (command == "diagrams") {
        NCBlowup ncb = make_ncb(spec, opt.e0, limits, box);
        VerifyReport total;
        json parts;
        VerifyReport proj = frobken::verify_projection_compat(ncb, opt.e, box, limits);
        parts["projection"] = report_json(proj);
        total.merge(proj);
        VerifyReport iter = frobken::verify_frobenius_iteration(ncb, opt.e, opt.e, limits);
        parts["iteration"] = report_json(iter);
        total.merge(iter);
        Decomposition pushed =
            frobken::pushforward_of_decomposition(ncb.decomposition, spec.p, opt.e, limits);
        auto m_reps = rep_list(ncb.decomposition);
        auto n_reps = rep_list(pushed);
        VerifyReport lemma1 = frobken::verify_hom_tensor_surjectivity(m_reps, m_reps, n_reps, box);
        parts["hom_tensor"] = report_json(lemma1);
        total.merge(lemma1);
        VerifyReport lemma2 = frobken::verify_module_action_iso(m_reps, n_reps, box);
        parts["module_action"] = report_json(lemma2);
        total.merge(lemma2);
        if (ncb.cover) {
            VerifyReport cof = frobken::verify_cover_coforgetful(ncb, opt.e, box, limits);
            parts["coforgetful"] = report_json(cof);
            total.merge(cof);
        }
        json out;
        out["p"] = spec.p;
        out["e"] = opt.e;
        out["e0"] = opt.e0;
        out["verdict"] = frobken::verdict_name(total.verdict);
        out["checks"] = std::move(parts);
        return out;
    }
    if (command == "selftest") {
        json checks = json::array();
        auto record = [&](const std::string& name, bool ok) {
            checks.push_back(json{{"check", name}, {"ok", ok}});
        };
        for (const std::string& name : frobken::builtin_names()) {
            RingSpec b = frobken::builtin_spec(name);
            json canon = b.canonical();
            RingSpec back = frobken::ring_spec_from_json(canon);
            record("roundtrip " + name,
                   frobken::dump_canonical(canon) == frobken::dump_canonical(back.canonical()));
        }
        RingSpec a1 = frobken::builtin_spec("A1");
        Decomposition d = frobken::frobenius_pushforward(ring_module(a1), 2, 1, limits);
        record("A1 rank", d.total_rank == 2 && d.multiplicity.size() == 1);
        RingSpec c211 = frobken::builtin_spec("cyclic-2-1-1", 3);
        Decomposition d2 = frobken::frobenius_pushforward(ring_module(c211), 3, 1, limits);
        record("cyclic-2-1-1 classes", d2.multiplicity.size() == 2 && d2.total_rank == 9);
        bool all_ok = true;
        for (const auto& c : checks) {
            if (!c.at("ok").get<bool>()) all_ok = false;
        }
        return json{{"ok", all_ok}, {"checks", std::move(checks)},
                    {"verdict", all_ok ? "CERTIFIED" : "FAIL"}};
    }
    throw frobken::EngineError("ValidationError", "unknown command: " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frobken: Frobenius pushforwards, End-algebras, and Kunz-regularity "
                 "certificates over affine semigroup rings"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"decompose", "decompose F^e_*R into isomorphism classes with multiplicities"},
        {"classes", "list class ids for each level e = 1..emax"},
        {"fpure", "test F-purity (free summand with a splitting witness)"},
        {"ffrt", "test finite F-representation type up to emax"},
        {"steady", "test F-steadiness of F^e_*R"},
        {"fsignature", "exact free-rank fractions per level"},
        {"kunz", "Frobenius-Kunz regularity test"},
        {"endalg", "End-algebra generator grid of the level-e class system"},
        {"ncb-build", "build the noncommutative blowup at level e0"},
        {"ncb-certify", "emit and replay a degreewise Kunz-regularity certificate"},
        {"diagrams", "verify projection, iteration, Hom-tensor, and action diagrams"},
        {"selftest", "structural self-checks on every builtin"},
    };
    std::string chosen;
    for (const auto& [c, desc] : commands) {
        CLI::App* sub = app.add_subcommand(c, desc);
        sub->callback([&chosen, c] { chosen = c; });
        sub->add_option("--input", opt.input, "ring spec file or builtin:NAME");
        sub->add_option("--p", opt.p, "characteristic (prime), overrides the spec");
        sub->add_option("--e", opt.e, "Frobenius level");
        sub->add_option("--e0", opt.e0, "blowup level (0 = regular cover)");
        sub->add_option("--emax", opt.emax, "scan limit");
        sub->add_option("--box", opt.box, "degree window size N");
        sub->add_option("--threads", opt.threads, "worker count");
        sub->add_option("--format", opt.format, "json|table")
            ->check(CLI::IsMember({"json", "table"}));
        sub->add_option("--catalog", opt.catalog_dir, "result catalog directory");
        sub->add_flag("--no-cache", opt.no_cache, "bypass the catalog");
        sub->add_flag("--force", opt.force, "override the enumeration cap");
    }
    CLI11_PARSE(app, argc, argv);

    try {
        RingSpec spec;
        if (chosen == "selftest" && opt.input.empty()) {
            spec = frobken::builtin_spec("A1", opt.p);
        } else {
            if (opt.input.empty()) {
                throw frobken::EngineError("ValidationError", "--input is required");
            }
            spec = frobken::resolve_spec(opt.input, opt.p);
        }
        EnumLimits limits;
        limits.cap = spec.cap;
        limits.threads = opt.threads;
        limits.force = opt.force;
        BoxBound box{opt.box > 0 ? opt.box : spec.box};

        json request;
        request["spec"] = spec.canonical();
        request["e"] = opt.e;
        request["e0"] = opt.e0;
        request["emax"] = opt.emax > 0 ? opt.emax : spec.e_max;
        request["box"] = box.size;
        const std::string key = frobken::catalog_key(chosen, request);

        std::string catalog_dir = opt.catalog_dir;
        if (catalog_dir.empty()) {
            if (const char* env = std::getenv("FROBKEN_CATALOG")) catalog_dir = env;
        }

        json result;
        bool cached = false;
        if (!catalog_dir.empty() && !opt.no_cache) {
            frobken::Catalog cat(catalog_dir);
            if (auto hit = cat.lookup(key)) {
                result = hit->result;
                cached = true;
            }
        }
        if (!cached) {
            result = run_command(chosen, spec, opt, limits, box);
            if (!catalog_dir.empty() && !opt.no_cache) {
                frobken::Catalog(catalog_dir).store(key, chosen, result);
            }
        }

        if (opt.format == "table") {
            render_table(result, std::cout);
        } else {
            std::cout << frobken::dump_canonical(result);
        }
        if (result.contains("verdict")) {
            return exit_for_verdict(result.at("verdict").get<std::string>());
        }
        return 0;
    } catch (const frobken::EngineError& e) {
        std::cerr << frobken::dump_canonical(nlohmann::json{
            {"error", e.code()}, {"message", e.what()}});
        return 1;
    } catch (const std::exception& e) {
        std::cerr << frobken::dump_canonical(nlohmann::json{
            {"error", "InternalError"}, {"message", e.what()}});
        return 1;
    }
}
