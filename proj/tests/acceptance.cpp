// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "generators.hpp"

#include "ellip/battery.hpp"
#include "ellip/embed.hpp"
#include "ellip/error.hpp"
#include "ellip/geom2d.hpp"
#include "ellip/nilcoh.hpp"
#include "ellip/quadform.hpp"
#include "ellip/wrapmaps.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace ellip;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string corpus(const std::string& f) { return std::string(ELLIP_CORPUS_DIR) + "/" + f; }

AlgebraPresentation torus(int k) {
    GeneratorTable t;
    std::string top;
    for (int i = 1; i <= k; ++i) {
        t.push_back({fmt::format("x{}", i), 1});
        top += fmt::format("{}x{}", i > 1 ? "*" : "", i);
    }
    return AlgebraPresentation::make(t, {}, k, top);
}

// T^(n-3) x Heisenberg nilmanifold: b1 = n - 1 in formal dimension n.
ManifoldDescriptor rank_deficient(int n) {
    std::string gens, top;
    for (int i = 1; i <= n - 3; ++i) {
        gens += fmt::format(" x{} = 1", i);
        top += fmt::format("x{}*", i);
    }
    std::string text = fmt::format(R"(name = "T^{} x Heisenberg"
n = {}
generators {{{} a = 1 b = 1 p = 2 q = 2 v = 3 }}
relations = ["a*b", "a*p", "a*q - v", "b*p + v", "b*q"]
fundamental = "{}v"
pi1 = "unknown"
)",
                                   n - 3, n, gens, top);
    return parse_descriptor(text);
}

Outcome cup_form_discriminants() {
    Outcome o;
    auto f = QuadraticForm::diagonal({2, 1, 1, -1, -1, -1});
    auto w = wedge_pairing_form(4);
    o.require(discriminant(f) == -2, "discriminant of <2,1,1,-1,-1,-1> is not -2");
    o.require(discriminant(w) == -1, "discriminant of the Lambda^2 R^4 form is not -1");
    o.require(!rationally_equivalent(f, w), "forms reported rationally equivalent");
    o.detail = fmt::format("disc {} vs {}, not equivalent", discriminant(f).get_str(), discriminant(w).get_str());
    return o;
}

Outcome torus_ground_truth() {
    Outcome o;
    int certified = 0;
    for (int k = 1; k <= 6; ++k)
        for (int n = 1; n <= 6; ++n) {
            auto r = search_embedding(torus(k), n);
            bool found = r.status == SearchStatus::Certified;
            o.require(found == (k <= n), fmt::format("T^{} into Lambda R^{}: {}", k, n, to_string(r.status)));
            if (found) {
                ++certified;
                o.require(verify_morphism(*r.witness) && certify_injective(*r.witness), "witness failed re-verification");
            }
        }
    for (int n = 3; n <= 6; ++n) {
        BatteryOptions opt;
        opt.run_search = false;
        auto rep = run_battery(rank_deficient(n), opt);
        auto failing = rep.failing_checks();
        bool rank_failed = std::find(failing.begin(), failing.end(), "rank") != failing.end();
        o.require(rep.overall == Overall::ExcludedWithWitness && rank_failed,
                  fmt::format("rank-(n-1) input not rejected at n = {}", n));
        for (const auto& c : rep.checks)
            if (c.id == "rank") o.require(!c.witness.empty() && !c.citation.empty(), "rank check lacks a witness");
    }
    if (o.pass) o.detail = fmt::format("{} certified of 36 pairs (exactly k <= n); rank n-1 rejected for n = 3..6", certified);
    return o;
}

Outcome four_manifolds() {
    Outcome o;
    for (int bp = 0; bp <= 4; ++bp)
        for (int bm = 0; bm <= 4; ++bm) {
            auto v = fourmanifold_battery(bp, bm, Pi1Class::Trivial);
            bool expect = bp <= 3 && bm <= 3;
            o.require((v.verdict == Verdict::Pass) == expect, fmt::format("(b+, b-) = ({}, {}) misclassified", bp, bm));
        }
    std::ifstream g(corpus("golden_verdicts.tsv"));
    std::map<std::string, std::string> golden;
    std::string line;
    while (std::getline(g, line)) {
        std::stringstream ss(line);
        std::string name, n, overall;
        std::getline(ss, name, '\t');
        std::getline(ss, n, '\t');
        std::getline(ss, overall, '\t');
        golden[name] = overall;
    }
    BatteryOptions opt;
    opt.run_search = false;
    int rows = 0;
    for (int s = 0; s <= 4; ++s)
        for (int t = 0; t <= 4; ++t) {
            if (s == 0 && t == 0) continue;
            auto rep = run_battery(load_descriptor(corpus(fmt::format("cp2_{}_{}.descriptor", s, t))), opt);
            bool excluded = rep.overall == Overall::ExcludedWithWitness;
            o.require(excluded == (s == 4 || t == 4), fmt::format("{}CP2 # {}CP2bar misclassified", s, t));
            o.require(golden.count(rep.name) && (golden[rep.name] == "excluded-with-witness") == excluded,
                      fmt::format("golden row for {} disagrees", rep.name));
            ++rows;
        }
    for (int r = 1; r <= 4; ++r) {
        auto rep = run_battery(load_descriptor(corpus(r == 1 ? "s2xs2.descriptor" : fmt::format("s2xs2_sum{}.descriptor", r))), opt);
        bool excluded = rep.overall == Overall::ExcludedWithWitness;
        o.require(excluded == (r == 4), fmt::format("#{}(S2xS2) misclassified", r));
        o.require(golden.count(rep.name) && (golden[rep.name] == "excluded-with-witness") == excluded,
                  fmt::format("golden row for {} disagrees", rep.name));
        ++rows;
    }
    if (o.pass) o.detail = fmt::format("25 Betti pairs and {} simply connected corpus rows", rows);
    return o;
}

Outcome nomizu_law() {
    Outcome o;
    gen::Rng rng(2024);
    int count = 0;
    for (; count < 60; ++count) {
        auto g = random_nilpotent_algebra(gen::uniform_int(rng, 3, 6), rng);
        o.require(!g.is_abelian(), "generator produced an abelian algebra");
        try {
            auto r = nomizu_kernel(g);
            o.require(r.kernel == r.dim_q2 - r.dim_q1, "kernel differs from dim q2 - dim q1");
        } catch (const ConsistencyError& e) {
            o.require(false, e.what());
        }
    }
    if (o.pass) o.detail = fmt::format("{} random algebras of dimension 3..6", count);
    return o;
}

Outcome growth() {
    Outcome o;
    for (int m = 1; m <= 6; ++m) o.require(bass_growth_degree(NilLieAlgebra::abelian(m)) == m, "abelian growth");
    o.require(bass_growth_degree(NilLieAlgebra::heisenberg()) == 4, "Heisenberg growth");
    o.require(bass_growth_degree(NilLieAlgebra::filiform(4)) == 7, "filiform growth");
    o.require(!pi1_verdict(NilLieAlgebra::heisenberg(), 3).pass, "Heisenberg not excluded at n = 3");
    o.require(!pi1_verdict(NilLieAlgebra::abelian(5), 4).pass, "R^5 not excluded at n = 4");
    o.require(pi1_verdict(NilLieAlgebra::abelian(4), 4).pass, "R^4 excluded at n = 4");
    if (o.pass) o.detail = "Z^n -> n, Heisenberg -> 4, filiform -> 7";
    return o;
}

Outcome quotients() {
    Outcome o;
    gen::Rng rng(7);
    int count = 0;
    for (; count < 150; ++count) {
        int n = gen::uniform_int(rng, 1, 5);
        auto a = ConcreteSubalgebra::generated_by(n, gen::pd_subalgebra_generators(rng, n));
        Multivector x(n);
        while (x.is_zero())
            for (const auto& b : a.basis(1)) x += b * gen::small_rational(rng, 2, 1);
        auto q = quotient_by_degree1(a, x);
        o.require(q.dim_quotient == q.dim_ideal, "dim A/(x) != dim (x)");
        o.require(q.quotient_duality.holds, "quotient pairing degenerate");
        o.require(a.euler_characteristic() == 0, "chi != 0 with A^1 != 0");
    }
    if (o.pass) o.detail = fmt::format("{} random PD subalgebras, n <= 5", count);
    return o;
}

// Closed, cyclically reduced lattice loops of a given length.
void enumerate_loops(int length, const std::function<void(const LatticeLoop&)>& visit) {
    LatticeLoop l;
    l.steps.resize(static_cast<std::size_t>(length));
    std::function<void(int, long, long)> rec = [&](int i, long x, long y) {
        if (std::labs(x) + std::labs(y) > length - i) return;
        if (i == length) {
            if (inverse(l.steps.back()) != l.steps.front()) visit(l);
            return;
        }
        for (int s = 0; s < 4; ++s) {
            Step st = static_cast<Step>(s);
            if (i > 0 && inverse(l.steps[static_cast<std::size_t>(i - 1)]) == st) continue;
            l.steps[static_cast<std::size_t>(i)] = st;
            rec(i + 1, x + (s == 0) - (s == 2), y + (s == 1) - (s == 3));
        }
    };
    rec(0, 0, 0);
}

Outcome lattice() {
    Outcome o;
    long exhaustive = 0;
    for (int len = 4; len <= 14; len += 2)
        enumerate_loops(len, [&](const LatticeLoop& l) {
            ++exhaustive;
            o.require(abs(turning_number(l)) * 4 <= len, "length bound violated: " + l.to_string());
        });
    gen::Rng rng(99);
    long random_loops = 0;
    while (random_loops < 20000) {
        auto l = reduce_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 10)));
        if (l.length() == 0 || l.length() > 20) continue;
        ++random_loops;
        o.require(abs(turning_number(l)) * 4 <= static_cast<long>(l.length()), "length bound violated: " + l.to_string());
    }
    long triples = 0;
    while (triples < 10000) {
        auto a = reduce_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 6)));
        auto b = reduce_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 6)));
        auto path = gen::walk(rng, gen::uniform_int(rng, 0, 4));
        if (a.length() == 0 || b.length() == 0 || a.x0 || a.y0 || b.x0 || b.y0) continue;
        LatticeLoop g = a;
        long x = 0, y = 0;
        for (auto s : path) {
            g.steps.push_back(s);
            x += (s == Step::R) - (s == Step::L);
            y += (s == Step::U) - (s == Step::D);
        }
        g.steps.insert(g.steps.end(), b.steps.begin(), b.steps.end());
        for (auto it = path.rbegin(); it != path.rend(); ++it) g.steps.push_back(inverse(*it));
        g = reduce_loop(g);
        if (g.length() == 0) continue;
        b.x0 = x;
        b.y0 = y;
        ++triples;
        o.require(abs(turning_number(g) - turning_number(a) - turning_number(b)) <= 1, "concatenation bound violated");
    }
    long cycles = 0;
    for (; cycles < 2000; ++cycles) {
        LatticeChain1 z;
        int loops = gen::uniform_int(rng, 1, 3);
        for (int i = 0; i < loops; ++i)
            z.add_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 14), gen::uniform_int(rng, -4, 4), gen::uniform_int(rng, -4, 4)),
                       gen::uniform_int(rng, 1, 3) * (gen::uniform_int(rng, 0, 1) ? 1 : -1));
        auto c = fill_cycle(z);
        o.require(static_cast<double>(z.mass()) + 1e-9 >= c.isoperimetric_bound(), "isoperimetric bound violated");
    }
    if (o.pass)
        o.detail = fmt::format("{} exhaustive loops (length <= 14), {} random loops, {} triples, {} cycles", exhaustive,
                               random_loops, triples, cycles);
    return o;
}

Outcome maps() {
    Outcome o;
    auto sw = EvaluableMap::sphere_wrap();
    double pole = min_excluded_locus_distance(sw, {{-2, -10}, {6, 10}}, 1000);
    o.require(pole > 0, "sphere wrap attains a pole");
    std::vector<double> radii;
    for (int r = 10; r <= 100; r += 10) radii.push_back(r);
    auto coarse = asymptotic_degree(sw, radii, 0.1);
    auto fine = asymptotic_degree(sw, radii, 0.05);
    double floor = *std::min_element(coarse.normalized.begin(), coarse.normalized.end());
    o.require(floor > 0, "normalized degree not positive");
    o.require(coarse.trend_slope() >= -1e-3, "normalized degree trends downward");
    double worst = 0;
    for (std::size_t i = 0; i < radii.size(); ++i)
        worst = std::max(worst, std::abs(coarse.normalized[i] - fine.normalized[i]) / fine.normalized[i]);
    o.require(worst < 0.05, "degree estimate unstable under grid halving");
    double jf = jacobian_floor(sw, strip_set(-2, 2, 1, 20), 100000);
    o.require(jf > 0, "Jacobian floor not positive");
    double jf_fine = jacobian_floor(sw, strip_set(-2, 2, 1, 20), 400000);
    o.require(std::abs(jf - jf_fine) < 0.05 * jf_fine, "Jacobian floor unstable under refinement");
    auto l1 = estimate_lipschitz(sw, {{-2, -10}, {6, 10}}, 1e-2).value;
    auto l2 = estimate_lipschitz(sw, {{-2, -10}, {6, 10}}, 5e-3).value;
    o.require(std::abs(l1 - l2) < 0.05 * l2, "Lipschitz estimate unstable under grid halving");
    if (o.pass)
        o.detail = fmt::format("pole distance {:.2e}, degree floor {:.3f}, slope {:.2e}, halving change {:.2f}%, "
                               "Jacobian floor {:.3f}, Lipschitz {:.4f}/{:.4f}",
                               pole, floor, coarse.trend_slope(), 100 * worst, jf, l1, l2);
    return o;
}

Outcome surfaces() {
    Outcome o;
    o.require(ahlfors_classify(RadialProfile::euclidean()).type == SurfaceType::Parabolic, "euclidean");
    o.require(ahlfors_classify(RadialProfile::hyperbolic()).type == SurfaceType::Hyperbolic, "hyperbolic");
    o.require(ahlfors_classify(RadialProfile::inverse_square()).type == SurfaceType::Hyperbolic, "inverse square");
    o.require(milnor_classify(family_curvature_samples(RadialProfile::inverse_square())).type == SurfaceType::Hyperbolic,
              "inverse square (curvature)");
    o.require(ahlfors_classify(RadialProfile::spiky_plane()).type == SurfaceType::Parabolic, "spiky plane");
    for (const auto& p : {RadialProfile::euclidean(), RadialProfile::hyperbolic(), RadialProfile::inverse_square(),
                          RadialProfile::power_log(0.5), RadialProfile::power_log(0), RadialProfile::power_log(-0.5)})
        o.require(ahlfors_classify(p).type == milnor_classify(family_curvature_samples(p)).type,
                  "classifiers disagree on " + p.name());
    if (o.pass) o.detail = "built-in families agree; spiky plane parabolic from samples";
    return o;
}

Outcome nodules() {
    Outcome o;
    double lo = 1, hi = 0;
    for (int n = 2; n <= 6; ++n) {
        NoduleProfile p(n);
        double prev = p.nodule_volume(0), total = prev;
        for (int k = 1; k <= 10; ++k) {
            double v = p.nodule_volume(k);
            double ratio = v / prev;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            o.require(std::abs(ratio - 0.5) <= 0.1, fmt::format("ratio {:.3f} at n = {}, p = {}", ratio, n, k));
            total += v;
            prev = v;
        }
        // geometric tail with ratio <= 0.6 bounds the remaining volume
        o.require(total + prev * 0.6 / 0.4 < 3 * p.nodule_volume(0), "partial sums not bounded");
    }
    if (o.pass) o.detail = fmt::format("ratios in [{:.3f}, {:.3f}] for n = 2..6, p = 1..10", lo, hi);
    return o;
}

Outcome golden() {
    Outcome o;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(ELLIP_CORPUS_DIR))
        if (e.path().extension() == ".descriptor") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string table = verdict_header();
    for (const auto& f : files) table += verdict_row(run_battery(load_descriptor(f.string())));
    std::ifstream g(corpus("golden_verdicts.tsv"));
    std::stringstream ss;
    ss << g.rdbuf();
    o.require(ss.str() == table, "verdict table differs from the golden file");
    if (o.pass) o.detail = fmt::format("{} descriptors, byte-identical", files.size());
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"quadratic forms: discriminants -2 and -1, not rationally equivalent", 1, cup_form_discriminants},
        {"torus ground truth and rank n-1 rejection", 30, torus_ground_truth},
        {"4-manifold list: b+, b- <= 3", 1, four_manifolds},
        {"Nomizu kernel law on random nilpotent algebras", 60, nomizu_law},
        {"growth degree and pi1 verdicts", 1, growth},
        {"quotients of PD subalgebras by degree-1 elements", 60, quotients},
        {"lattice loops: length, concatenation and isoperimetric bounds", 120, lattice},
        {"sphere wrap: poles missed, degree floor, Jacobian floor, grid stability", 600, maps},
        {"surface classification", 30, surfaces},
        {"revolution profile: nodule volumes halve, partial sums bounded", 10, nodules},
        {"bundled corpus reproduces the golden verdict table", 300, golden},
    };
    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.detail += fmt::format(" (over the {:.0f} s budget)", c.budget_s);
            o.pass = false;
        }
        if (!o.pass) ++failed;
        fmt::print("{} {:>2}  {}  [{:.2f} s]  {}\n", o.pass ? "PASS" : "FAIL", index, c.name, secs, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
