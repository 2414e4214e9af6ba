#include "ellip/battery.hpp"

#include "ellip/error.hpp"
#include "ellip/quadform.hpp"

#include <cmath>
#include <fmt/format.h>
#include "json.hpp"

namespace ellip {

std::string_view to_string(Overall o) {
    return o == Overall::ExcludedWithWitness ? "excluded-with-witness" : "no-obstruction-found";
}

std::vector<std::string> BatteryReport::failing_checks() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (c.verdict == Verdict::Fail) out.push_back(c.id);
    return out;
}

namespace {

CheckResult module_error(const std::string& id, const char* module, const std::exception& e) {
    CheckResult c;
    c.id = id;
    c.verdict = Verdict::Inconclusive;
    c.summary = fmt::format("{}: {}", module, e.what());
    return c;
}

CheckResult duality_check(const GradedBasis& b) {
    CheckResult c;
    c.id = "poincare_duality";
    c.citation = "closed orientable manifolds satisfy Poincare duality";
    auto pd = check_poincare_duality(b);
    c.verdict = pd.holds ? Verdict::Pass : Verdict::Inconclusive;
    c.summary = pd.holds ? "presentation is a Poincare duality algebra" : "presentation is not a Poincare duality algebra: " + pd.detail;
    if (pd.failing_degree) c.witness.emplace_back("degree", std::to_string(*pd.failing_degree));
    return c;
}

CheckResult pi1_check(const Pi1Descriptor& p, int n) {
    CheckResult c;
    c.id = "pi1";
    c.citation = "theorem: pi1 has polynomial growth of degree at most n";
    switch (p.kind) {
    case Pi1Descriptor::Kind::Trivial:
    case Pi1Descriptor::Kind::Finite:
        c.verdict = Verdict::Pass;
        c.summary = fmt::format("{} fundamental group", p.to_string());
        break;
    case Pi1Descriptor::Kind::Unknown:
        c.verdict = Verdict::Inconclusive;
        c.summary = "fundamental group not specified";
        break;
    case Pi1Descriptor::Kind::FreeAbelian:
        c.witness.emplace_back("growth_degree", std::to_string(p.rank));
        if (p.rank > n) {
            c.verdict = Verdict::Fail;
            c.summary = fmt::format("Z^{} grows with degree {} > n = {}", p.rank, p.rank, n);
        } else {
            c.verdict = Verdict::Pass;
            c.summary = fmt::format("Z^{} grows with degree {} <= n = {}", p.rank, p.rank, n);
        }
        break;
    case Pi1Descriptor::Kind::Nilpotent: {
        auto v = pi1_verdict(*p.lie, n);
        c.verdict = v.pass ? Verdict::Pass : Verdict::Fail;
        c.summary = v.reason;
        if (!v.abelian) c.citation = "corollary: pi1 of an elliptic closed manifold is virtually abelian";
        c.witness.emplace_back("growth_degree", std::to_string(v.growth_degree));
        c.witness.emplace_back("nilpotency_class", std::to_string(v.nilpotency_class));
        c.witness.emplace_back("abelian", v.abelian ? "true" : "false");
        c.witness.emplace_back("class_heuristic", fmt::format("class {} vs sqrt(n) = {:.2f}, not asserted", v.nilpotency_class, std::sqrt(double(n))));
        break;
    }
    }
    return c;
}

CheckResult torus_check(const GradedBasis& b, int n) {
    const int k = static_cast<int>(b.rank(1));
    if (k > n) {
        CheckResult c = rank_check(b, n);
        c.id = "torus_subalgebra";
        return c;
    }
    return exterior_subalgebra_check(b);
}

// Gram matrix of H^k x H^k -> H^2k (which must have rank 1).
std::optional<QuadraticForm> cup_form(const GradedBasis& b, int k) {
    if (2 * k > b.top_degree() || b.rank(2 * k) != 1) return std::nullopt;
    const std::size_t r = b.rank(k);
    Matrix g(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            auto c = b.coordinates(b.representative(k, i) * b.representative(k, j));
            g(i, j) = c.empty() ? Rational(0) : c[0];
        }
    return QuadraticForm(g);
}

CheckResult fourmanifold_check(const ManifoldDescriptor& d, const GradedBasis& b) {
    CheckResult c;
    c.id = "fourmanifold";
    int plus = 0, minus = 0;
    if (d.betti) {
        std::tie(plus, minus) = *d.betti;
        c.witness.emplace_back("betti_source", "descriptor");
    } else {
        auto f = cup_form(b, 2);
        if (!f) {
            c.verdict = Verdict::Inconclusive;
            c.summary = "intersection form unavailable";
            return c;
        }
        std::tie(plus, minus) = signature(*f);
        c.witness.emplace_back("betti_source", "intersection form");
    }
    c.witness.emplace_back("b2_plus", std::to_string(plus));
    c.witness.emplace_back("b2_minus", std::to_string(minus));

    std::optional<Pi1Class> cls;
    switch (d.pi1.kind) {
    case Pi1Descriptor::Kind::Trivial: cls = Pi1Class::Trivial; break;
    case Pi1Descriptor::Kind::Finite: cls = Pi1Class::Finite; break;
    case Pi1Descriptor::Kind::FreeAbelian: cls = pi1_class_from_rank(d.pi1.rank); break;
    case Pi1Descriptor::Kind::Nilpotent:
        if (d.pi1.lie->is_abelian()) cls = pi1_class_from_rank(d.pi1.lie->dimension());
        break;
    case Pi1Descriptor::Kind::Unknown: break;
    }
    if (!cls) {
        c.verdict = Verdict::Inconclusive;
        c.summary = "no supported fundamental group class for the 4-manifold battery";
        return c;
    }
    const bool infinite = *cls != Pi1Class::Trivial && *cls != Pi1Class::Finite;
    c.citation = infinite ? "corollary: infinite pi1 4-manifolds are finitely covered by T^4, T^2 x S^2 or S^1 x S^3"
                          : "simply connected list: forms inside the (3, 3) wedge form on Lambda^2 R^4";
    try {
        auto v = fourmanifold_battery(plus, minus, *cls);
        c.verdict = v.verdict;
        c.summary = v.reason;
        if (!v.label.empty()) c.witness.emplace_back("label", v.label);
    } catch (const InvalidArgument& e) {
        c.verdict = Verdict::Inconclusive;
        c.summary = fmt::format("embed: {}", e.what());
    }
    return c;
}

CheckResult cup_form_check(const GradedBasis& b, int k) {
    CheckResult c;
    c.id = "cup_form";
    c.verdict = Verdict::Info;
    c.citation = "cup form comparison: a cup form rationally inequivalent to the wedge form has no rational embedding";
    auto f = cup_form(b, k);
    if (!f) {
        c.verdict = Verdict::Inconclusive;
        c.summary = fmt::format("H^{} is not one-dimensional", 2 * k);
        return c;
    }
    auto [p, q] = signature(*f);
    c.witness.emplace_back("degree", std::to_string(k));
    c.witness.emplace_back("signature", fmt::format("({}, {})", p, q));
    if (f->is_degenerate()) {
        c.summary = "cup form is degenerate";
        return c;
    }
    c.witness.emplace_back("discriminant", discriminant(*f).get_str());
    QuadraticForm w = wedge_pairing_form(2 * k);
    if (w.dimension() != f->dimension()) {
        c.summary = fmt::format("cup form of rank {}, discriminant {}", f->dimension(), discriminant(*f).get_str());
        return c;
    }
    const bool eq = rationally_equivalent(*f, w);
    c.witness.emplace_back("wedge_discriminant", discriminant(w).get_str());
    c.witness.emplace_back("rationally_equivalent", eq ? "true" : "false");
    c.witness.emplace_back("equivalence_invariants", "rank, discriminant, signature, Hasse invariants");
    c.summary = eq ? "cup form is rationally equivalent to the wedge form"
                   : fmt::format("cup form (discriminant {}) is not rationally equivalent to the wedge form on Lambda^{} "
                                 "R^{} (discriminant {}); no cohomology map from T^{} realizes it rationally",
                                 discriminant(*f).get_str(), k, 2 * k, discriminant(w).get_str(), 2 * k);
    return c;
}

} // namespace

BatteryReport run_battery(const ManifoldDescriptor& d, const BatteryOptions& opt) {
    BatteryReport r;
    r.name = d.name;
    r.n = d.n;
    r.pi1 = d.pi1.to_string();

    GradedBasis basis = basis_and_dims(d.cohomology);
    r.betti = basis.ranks();
    r.euler = euler_characteristic(basis);
    r.warnings = basis.warnings();

    auto guarded = [&](const std::string& id, const char* module, auto&& f) {
        try {
            r.checks.push_back(f());
        } catch (const Error& e) {
            r.checks.push_back(module_error(id, module, e));
        }
    };
    guarded("poincare_duality", "algebra", [&] { return duality_check(basis); });
    const bool pd = r.checks.back().verdict == Verdict::Pass;
    guarded("pi1", "nilcoh", [&] { return pi1_check(d.pi1, d.n); });
    guarded("euler", "embed", [&] { return euler_obstruction(basis); });
    guarded("torus_subalgebra", "embed", [&] { return torus_check(basis, d.n); });
    guarded("rank", "embed", [&] {
        CheckResult c = rank_check(basis, d.n);
        c.id = "rank";
        return c;
    });
    if (d.n == 4) guarded("fourmanifold", "embed", [&] { return fourmanifold_check(d, basis); });
    if (d.cup_form_degree) guarded("cup_form", "quadform", [&] { return cup_form_check(basis, *d.cup_form_degree); });

    const bool failed = !r.failing_checks().empty();
    r.overall = failed ? Overall::ExcludedWithWitness : Overall::NoObstructionFound;

    if (!failed && pd && opt.run_search) {
        CheckResult c;
        c.id = "embedding_search";
        c.citation = "theorem: elliptic iff H*(M;R) embeds in Lambda R^n";
        try {
            SearchResult s = search_embedding(d.cohomology, d.n, opt.search);
            r.search_method = s.method;
            r.search_residual = s.residual;
            r.search_trial = s.trial;
            switch (s.status) {
            case SearchStatus::Certified:
                c.verdict = Verdict::Pass;
                r.search_status = "certified";
                r.search_witness = s.witness->to_string();
                c.summary = "certified injective embedding found";
                c.witness.emplace_back("assignment", r.search_witness);
                break;
            case SearchStatus::Numerical:
                c.verdict = Verdict::Info;
                r.search_status = "numerical";
                c.summary = fmt::format("numerical embedding (uncertified), residual {:.3e}", s.residual);
                c.witness.emplace_back("residual", fmt::format("{:.3e}", s.residual));
                break;
            case SearchStatus::NotFound:
                c.verdict = Verdict::Inconclusive;
                r.search_status = "not-found";
                c.summary = s.residual >= 0 ? fmt::format("no embedding found within budget; best residual {:.3e}", s.residual)
                                            : "no embedding found within budget";
                break;
            case SearchStatus::Obstructed:
                c.verdict = Verdict::Inconclusive;
                r.search_status = "not-found";
                c.summary = "search stopped by " + (s.obstruction ? s.obstruction->id : std::string("an obstruction"));
                break;
            }
            c.witness.emplace_back("method", s.method.empty() ? "none" : s.method);
            if (s.trial >= 0) c.witness.emplace_back("trial", std::to_string(s.trial));
            c.witness.emplace_back("exact_nodes", std::to_string(s.exact_nodes));
        } catch (const Error& e) {
            c = module_error("embedding_search", "embed", e);
        }
        r.checks.push_back(std::move(c));
    }
    return r;
}

std::string render_structured(const BatteryReport& r) {
    nlohmann::ordered_json j;
    j["schema"] = "ellip.battery/1";
    j["name"] = r.name;
    j["n"] = r.n;
    j["pi1"] = r.pi1;
    j["betti"] = r.betti;
    j["euler_characteristic"] = r.euler;
    j["overall"] = std::string(to_string(r.overall));
    j["necessary_condition_failures"] = r.failing_checks();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json cj;
        cj["id"] = c.id;
        cj["verdict"] = std::string(to_string(c.verdict));
        cj["citation"] = c.citation;
        cj["summary"] = c.summary;
        nlohmann::ordered_json w = nlohmann::ordered_json::object();
        for (const auto& [k, v] : c.witness) w[k] = v;
        cj["witness"] = w;
        checks.push_back(cj);
    }
    nlohmann::ordered_json s;
    s["status"] = r.search_status;
    s["method"] = r.search_method;
    s["witness"] = r.search_witness;
    if (r.search_residual >= 0) s["residual"] = fmt::format("{:.3e}", r.search_residual);
    s["trial"] = r.search_trial;
    j["search"] = s;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

std::string render_text(const BatteryReport& r) {
    std::string out = fmt::format("{} (n = {}, pi1 = {})\n", r.name, r.n, r.pi1);
    out += "betti:";
    for (auto b : r.betti) out += fmt::format(" {}", b);
    out += fmt::format("  chi = {}\n", r.euler);
    for (const auto& c : r.checks) {
        out += fmt::format("  [{:<12}] {:<18} {}\n", to_string(c.verdict), c.id, c.summary);
        if (c.verdict == Verdict::Fail && !c.citation.empty()) out += fmt::format("                 cites: {}\n", c.citation);
        for (const auto& [k, v] : c.witness) out += fmt::format("                 {} = {}\n", k, v);
    }
    for (const auto& w : r.warnings) out += fmt::format("  warning: {}\n", w);
    out += fmt::format("overall: {}", to_string(r.overall));
    if (r.overall == Overall::NoObstructionFound) out += fmt::format(" (search: {})", r.search_status);
    out += "\n";
    return out;
}

std::string verdict_header() { return "name\tn\toverall\tfailing\tsearch\n"; }

std::string verdict_row(const BatteryReport& r) {
    std::string failing;
    for (const auto& id : r.failing_checks()) failing += (failing.empty() ? "" : ",") + id;
    return fmt::format("{}\t{}\t{}\t{}\t{}\n", r.name, r.n, to_string(r.overall), failing.empty() ? "-" : failing,
                       r.search_status);
}

} // namespace ellip
