#include "frobken/ring_spec.hpp"

#include "frobken/report.hpp"

#include <fstream>
#include <sstream>

namespace frobken {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& pointer, const std::string& msg) {
    throw EngineError("ValidationError", pointer + ": " + msg);
}

bool is_prime(long p) {
    if (p < 2) return false;
    Int n(p);
    return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
}

std::vector<IVec> parse_vector_list(const json& j, const std::string& pointer, int* dim) {
    if (!j.is_array() || j.empty()) invalid(pointer, "expected a non-empty array of vectors");
    std::vector<IVec> out;
    for (size_t k = 0; k < j.size(); ++k) {
        const json& row = j[k];
        std::string p = pointer + "/" + std::to_string(k);
        if (!row.is_array() || row.empty()) invalid(p, "expected a non-empty integer vector");
        IVec v(static_cast<Eigen::Index>(row.size()));
        for (size_t i = 0; i < row.size(); ++i) {
            const json& x = row[i];
            if (!x.is_number_integer() && !x.is_string()) {
                invalid(p + "/" + std::to_string(i), "expected an integer");
            }
            v(static_cast<Eigen::Index>(i)) = int_from_json(x);
        }
        if (*dim == 0) *dim = static_cast<int>(v.size());
        if (static_cast<int>(v.size()) != *dim) invalid(p, "inconsistent vector length");
        out.push_back(std::move(v));
    }
    return out;
}

IMat matrix_from_rows(const std::vector<IVec>& rows) {
    IMat m(static_cast<Eigen::Index>(rows.size()), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return m;
}

std::pair<Int, IVec> parse_cyclic(const json& j, const std::string& pointer, int dim) {
    if (!j.is_object()) invalid(pointer, "expected {n, weights}");
    if (!j.contains("n")) invalid(pointer + "/n", "missing group order");
    Int n = int_from_json(j.at("n"));
    if (n <= 0) invalid(pointer + "/n", "group order must be positive");
    if (!j.contains("weights") || !j.at("weights").is_array()) {
        invalid(pointer + "/weights", "missing weight vector");
    }
    IVec w = ivec_from_json(j.at("weights"));
    if (dim != 0 && static_cast<int>(w.size()) != dim) {
        invalid(pointer + "/weights", "weight count does not match the cone dimension");
    }
    return {std::move(n), std::move(w)};
}

std::vector<IVec> orthant_rays(int d) {
    std::vector<IVec> rays;
    for (int i = 0; i < d; ++i) {
        IVec e = IVec::Zero(d);
        e(i) = 1;
        rays.push_back(e);
    }
    return rays;
}

long default_prime_coprime_to(const Int& n) {
    for (long p : {2L, 3L, 5L, 7L, 11L}) {
        Int g;
        mpz_gcd_ui(g.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
        if (g == 1) return p;
    }
    return 13;
}

void finalize(RingSpec& spec) {
    if (!is_prime(spec.p)) {
        invalid("/p", "p = " + std::to_string(spec.p) + " is not prime");
    }
    if (spec.e_max < 1) invalid("/e_max", "must be positive");
    if (spec.box < 1) invalid("/box", "must be positive");
    if (spec.cap < 1) invalid("/cap", "must be positive");

    std::vector<IVec> rays = spec.rays;
    if (spec.inequalities) {
        rays = rays_from_inequalities(*spec.inequalities);
    }
    if (rays.empty()) invalid("/cone", "no rays");

    LatticePresentation pres = LatticePresentation::standard(static_cast<int>(rays[0].size()));
    if (spec.lattice_basis) {
        pres = LatticePresentation::from_basis(*spec.lattice_basis);
    } else if (spec.cyclic) {
        pres = LatticePresentation::cyclic(spec.cyclic->first, spec.cyclic->second);
    }
    spec.cone = normalize_lattice(pres, rays, spec.name).cone;
}

}  // namespace

RingSpec ring_spec_from_json(const json& j) {
    if (!j.is_object()) throw EngineError("ParseError", "ring spec must be a JSON object");
    RingSpec spec;
    spec.name = j.value("name", std::string("ring"));
    if (!j.contains("p") || !j.at("p").is_number_integer()) {
        invalid("/p", "missing prime");
    }
    spec.p = j.at("p").get<long>();
    spec.e_max = j.value("e_max", 3);
    spec.box = j.value("box", 8);
    if (j.contains("cap")) spec.cap = int_from_json(j.at("cap"));
    if (j.contains("regular")) spec.regular_hint = j.at("regular").get<bool>();

    int dim = 0;
    const bool has_cone = j.contains("cone");
    const bool has_shorthand = j.contains("cyclic");
    if (has_cone) {
        const json& c = j.at("cone");
        if (!c.is_object()) invalid("/cone", "expected {rays} or {inequalities}");
        const bool r = c.contains("rays");
        const bool q = c.contains("inequalities");
        if (r == q) invalid("/cone", "exactly one of rays/inequalities required");
        if (r) {
            spec.rays = parse_vector_list(c.at("rays"), "/cone/rays", &dim);
        } else {
            auto rows = parse_vector_list(c.at("inequalities"), "/cone/inequalities", &dim);
            spec.inequalities = matrix_from_rows(rows);
        }
    }
    if (j.contains("lattice")) {
        const json& l = j.at("lattice");
        if (l.is_string() && l.get<std::string>() == "standard") {
            // explicit default
        } else if (l.is_object() && l.contains("basis")) {
            int bdim = dim;
            auto cols = parse_vector_list(l.at("basis"), "/lattice/basis", &bdim);
            if (static_cast<int>(cols.size()) != bdim) {
                invalid("/lattice/basis", "basis must be square");
            }
            IMat basis(bdim, bdim);
            for (int c = 0; c < bdim; ++c) basis.col(c) = cols[static_cast<size_t>(c)];
            spec.lattice_basis = std::move(basis);
        } else if (l.is_object() && l.contains("cyclic")) {
            spec.cyclic = parse_cyclic(l.at("cyclic"), "/lattice/cyclic", dim);
        } else {
            invalid("/lattice", "expected \"standard\", {basis} or {cyclic}");
        }
    }
    if (has_shorthand) {
        if (spec.cyclic) invalid("/cyclic", "lattice given twice");
        spec.cyclic = parse_cyclic(j.at("cyclic"), "/cyclic", dim);
        if (!has_cone) spec.rays = orthant_rays(static_cast<int>(spec.cyclic->second.size()));
    }
    if (!has_cone && !has_shorthand) invalid("/cone", "missing cone description");

    finalize(spec);
    return spec;
}

RingSpec load_ring_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EngineError("ParseError", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw EngineError("ParseError", std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return ring_spec_from_json(j);
}

nlohmann::json RingSpec::canonical() const {
    json j;
    j["schema"] = "frobken-ring/1";
    j["name"] = name;
    j["p"] = p;
    j["e_max"] = e_max;
    j["box"] = box;
    j["cap"] = json_int(cap);
    if (regular_hint) j["regular"] = true;
    json c;
    if (inequalities) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < inequalities->rows(); ++i) {
            rows.push_back(json_ivec(IVec(inequalities->row(i).transpose())));
        }
        c["inequalities"] = std::move(rows);
    } else {
        json rows = json::array();
        for (const IVec& r : rays) rows.push_back(json_ivec(r));
        c["rays"] = std::move(rows);
    }
    j["cone"] = std::move(c);
    if (lattice_basis) {
        json cols = json::array();
        for (Eigen::Index k = 0; k < lattice_basis->cols(); ++k) {
            cols.push_back(json_ivec(IVec(lattice_basis->col(k))));
        }
        j["lattice"] = json{{"basis", std::move(cols)}};
    } else if (cyclic) {
        j["lattice"] = json{{"cyclic", json{{"n", json_int(cyclic->first)},
                                            {"weights", json_ivec(cyclic->second)}}}};
    } else {
        j["lattice"] = "standard";
    }
    return j;
}

RingSpec builtin_spec(const std::string& name, long p_override) {
    auto make = [&](std::vector<IVec> rays, std::optional<std::pair<Int, IVec>> cyc, long p,
                    bool regular) {
        RingSpec spec;
        spec.name = name;
        spec.p = p_override > 0 ? p_override : p;
        spec.rays = std::move(rays);
        spec.cyclic = std::move(cyc);
        spec.regular_hint = regular;
        finalize(spec);
        return spec;
    };

    if (name.size() == 2 && name[0] == 'A' && name[1] >= '1' && name[1] <= '4') {
        int d = name[1] - '0';
        return make(orthant_rays(d), std::nullopt, 2, true);
    }
    if (name == "square-cone") {
        std::vector<IVec> rays = {ivec({0, 0, 1}), ivec({1, 0, 1}), ivec({0, 1, 1}),
                                  ivec({1, 1, 1})};
        return make(std::move(rays), std::nullopt, 2, false);
    }
    auto parse_dashes = [&](const std::string& body) {
        std::vector<Int> nums;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, '-')) {
            if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
                return std::vector<Int>{};
            }
            nums.emplace_back(tok);
        }
        return nums;
    };
    if (name.rfind("veronese-", 0) == 0) {
        auto nums = parse_dashes(name.substr(9));
        if (nums.size() == 1 && nums[0] > 0) {
            Int n = nums[0];
            return make(orthant_rays(2), std::make_pair(n, ivec({1, 1})),
                        default_prime_coprime_to(n), n == 1);
        }
    }
    if (name.rfind("cyclic-", 0) == 0) {
        auto nums = parse_dashes(name.substr(7));
        if (nums.size() >= 3 && nums[0] > 0) {
            Int n = nums[0];
            IVec w(static_cast<Eigen::Index>(nums.size() - 1));
            for (size_t i = 1; i < nums.size(); ++i) w(static_cast<Eigen::Index>(i - 1)) = nums[i];
            return make(orthant_rays(static_cast<int>(w.size())), std::make_pair(n, w),
                        default_prime_coprime_to(n), n == 1);
        }
    }
    throw EngineError("ValidationError", "unknown builtin: " + name);
}

std::vector<std::string> builtin_names() {
    return {"A1",           "A2",           "A3",           "A4",
            "cyclic-2-1-1", "cyclic-3-1-1", "cyclic-3-1-2", "cyclic-4-1-3",
            "veronese-2",   "veronese-3",   "square-cone"};
}

RingSpec resolve_spec(const std::string& token, long p_override) {
    std::string name = token;
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    for (const std::string& b : builtin_names()) {
        if (name == b) return builtin_spec(name, p_override);
    }
    if (token.rfind("builtin:", 0) == 0) return builtin_spec(name, p_override);
    RingSpec spec = load_ring_spec(token);
    if (p_override > 0) {
        spec.p = p_override;
        if (!is_prime(spec.p)) {
            throw EngineError("ValidationError", "/p: override is not prime");
        }
    }
    return spec;
}

}  // namespace frobken
