// Command-line front end: obstruction battery, embedding search, Lie
// algebra data, surface classification, map verification, corpus runs.
#include "ellip/battery.hpp"
#include "ellip/error.hpp"
#include "ellip/geom2d.hpp"
#include "ellip/nilcoh.hpp"
#include "ellip/wrapmaps.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ellip;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kExcluded = 1, kUsage = 2, kInternal = 3 };

struct Common {
    int budget = 16;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    std::string format = "text";
    std::string out;
    std::optional<int> n;
};

void add_common(CLI::App* app, Common& c, bool with_n) {
    app->add_option("--budget", c.budget, "floating-search restarts")->check(CLI::NonNegativeNumber);
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--tolerance", c.tolerance, "relation residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "structured"}));
    app->add_option("--out", c.out, "write the report to this file");
    if (with_n) app->add_option("--n", c.n, "target dimension");
}

SearchOptions search_options(const Common& c) {
    SearchOptions o;
    o.budget = c.budget;
    o.seed = c.seed;
    o.tolerance = c.tolerance;
    return o;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw InvalidArgument(fmt::format("cannot write '{}'", c.out));
    f << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw InvalidArgument(fmt::format("cannot write '{}'", path));
    f << text;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidArgument(fmt::format("bad number '{}' in list", item));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& path, const Common& c, bool no_search) {
    ManifoldDescriptor d = load_descriptor(path);
    if (c.n && *c.n != d.n) throw InvalidArgument("--n must match the descriptor's n for check");
    BatteryOptions opt;
    opt.search = search_options(c);
    opt.run_search = !no_search;
    BatteryReport r = run_battery(d, opt);
    emit(c, c.format == "structured" ? render_structured(r) : render_text(r));
    return r.overall == Overall::ExcludedWithWitness ? kExcluded : kOk;
}

int cmd_embed(const std::string& path, const Common& c) {
    ManifoldDescriptor d = load_descriptor(path);
    const int n = c.n.value_or(d.n);
    SearchResult s = search_embedding(d.cohomology, n, search_options(c));
    ojson j;
    j["name"] = d.name;
    j["n"] = n;
    j["status"] = std::string(to_string(s.status));
    j["method"] = s.method;
    if (s.witness) j["witness"] = s.witness->to_string();
    if (s.residual >= 0) j["residual"] = fmt::format("{:.3e}", s.residual);
    j["trial"] = s.trial;
    j["exact_nodes"] = s.exact_nodes;
    if (s.obstruction) {
        j["obstruction"] = {{"id", s.obstruction->id},
                            {"citation", s.obstruction->citation},
                            {"summary", s.obstruction->summary}};
    }
    if (c.format == "structured") {
        emit(c, j.dump(2) + "\n");
    } else {
        std::string t = fmt::format("{} into Lambda R^{}: {}\n", d.name, n, to_string(s.status));
        if (s.witness) t += "  witness: " + s.witness->to_string() + "\n";
        if (s.residual >= 0) t += fmt::format("  residual: {:.3e} (trial {})\n", s.residual, s.trial);
        if (s.obstruction) t += fmt::format("  obstruction: {} ({})\n    {}\n", s.obstruction->id, s.obstruction->citation, s.obstruction->summary);
        emit(c, t);
    }
    return s.status == SearchStatus::Obstructed ? kExcluded : kOk;
}

int cmd_lie(const std::string& path, const std::string& brackets, int dim, const Common& c, bool presentation) {
    NilLieAlgebra g = NilLieAlgebra::abelian(1);
    std::string name;
    if (!path.empty()) {
        ManifoldDescriptor d = load_descriptor(path);
        if (!d.pi1.lie) throw InvalidArgument("descriptor has no pi1 lie block");
        g = *d.pi1.lie;
        name = d.name;
    } else {
        if (dim < 1) throw InvalidArgument("--dim is required with --brackets");
        auto j = ojson::parse(brackets.empty() ? "[]" : brackets);
        std::vector<BracketTerm> terms;
        for (const auto& t : j) {
            if (!t.is_array() || t.size() != 4) throw InvalidArgument("bracket term must be [i, j, k, c]");
            Rational coeff = t[3].is_string() ? parse_rational(t[3].get<std::string>()) : Rational(t[3].get<long>());
            terms.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), coeff});
        }
        g = NilLieAlgebra::from_brackets(dim, terms);
        name = fmt::format("lie(dim {})", dim);
    }
    if (presentation) {
        emit(c, format_presentation(lie_cohomology_presentation(g)));
        return kOk;
    }
    auto series = lower_central_series(g);
    auto betti = lie_cohomology_dims(g);
    const int growth = bass_growth_degree(g);
    const int n = c.n.value_or(g.dimension());
    Pi1Verdict v = pi1_verdict(g, n);
    NomizuReport nz = nomizu_kernel(g);
    ojson j;
    j["name"] = name;
    j["dimension"] = g.dimension();
    j["central_series"] = series.dims;
    j["nilpotency_class"] = series.nilpotency_class();
    j["growth_degree"] = growth;
    j["betti"] = betti;
    j["nomizu"] = {{"kernel", nz.kernel}, {"dim_q1", nz.dim_q1}, {"dim_q2", nz.dim_q2}};
    j["n"] = n;
    j["verdict"] = v.pass ? "pass" : "fail";
    j["reason"] = v.reason;
    if (c.format == "structured") {
        emit(c, j.dump(2) + "\n");
    } else {
        std::string t = fmt::format("{}: dimension {}, nilpotency class {}, growth degree {}\n", name, g.dimension(),
                                    series.nilpotency_class(), growth);
        t += "  Lie algebra Betti numbers:";
        for (auto b : betti) t += fmt::format(" {}", b);
        t += fmt::format("\n  H^2 kernel of the class-2 quotient map: {} (dim q2 - dim q1 = {})\n", nz.kernel,
                         nz.dim_q2 - nz.dim_q1);
        t += fmt::format("  pi1 verdict at n = {}: {} ({})\n", n, v.pass ? "pass" : "fail", v.reason);
        emit(c, t);
    }
    return v.pass ? kOk : kExcluded;
}

RadialProfile profile_from_flags(const std::string& family, double eps, const std::string& samples) {
    if (!samples.empty()) {
        std::ifstream f(samples);
        if (!f) throw InvalidArgument(fmt::format("cannot open '{}'", samples));
        Samples s;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
            auto v = parse_list(line);
            if (v.size() != 2) throw InvalidArgument(fmt::format("expected 'r,L' in '{}'", line));
            s.r.push_back(v[0]);
            s.value.push_back(v[1]);
        }
        return RadialProfile::tabulated(std::move(s));
    }
    if (family == "euclidean") return RadialProfile::euclidean();
    if (family == "hyperbolic") return RadialProfile::hyperbolic();
    if (family == "power-log") return RadialProfile::power_log(eps);
    if (family == "inverse-square") return RadialProfile::inverse_square();
    if (family == "spiky") return RadialProfile::spiky_plane();
    throw InvalidArgument(fmt::format("unknown family '{}'", family));
}

int cmd_surface(const std::string& family, double eps, const std::string& samples, int nodule_dim,
                const std::string& plot, const Common& c) {
    ojson j;
    std::string t;
    if (nodule_dim > 0) {
        NoduleProfile P(nodule_dim);
        j["nodule_dimension"] = nodule_dim;
        j["kappa"] = P.kappa();
        auto& rows = j["nodules"] = ojson::array();
        double total = 0;
        t += fmt::format("nodule profile, n = {}, mean/max = {:.4f}\n  p  volume  ratio  partial_sum\n", nodule_dim, P.kappa());
        std::string csv = "p,volume,ratio,partial_sum\n";
        double prev = 0;
        for (int p = 0; p <= 12; ++p) {
            double v = P.nodule_volume(p);
            total += v;
            double ratio = p > 0 ? v / prev : 0;
            rows.push_back({{"p", p}, {"volume", v}, {"ratio", ratio}, {"partial_sum", total}});
            t += fmt::format("  {:<2} {:.6e} {:.4f} {:.6f}\n", p, v, ratio, total);
            csv += fmt::format("{},{:.12g},{:.12g},{:.12g}\n", p, v, ratio, total);
            prev = v;
        }
        if (!plot.empty()) write_file(plot, csv);
    } else {
        RadialProfile prof = profile_from_flags(family, eps, samples);
        AhlforsReport a = ahlfors_classify(prof);
        j["profile"] = prof.name();
        j["ahlfors"] = {{"type", std::string(to_string(a.type))}, {"analytic", a.analytic}, {"reason", a.reason}};
        t += fmt::format("{}\n  Ahlfors (circumference integral): {} ({}{})\n", prof.name(), to_string(a.type),
                         a.analytic ? "closed form; " : "", a.reason);
        if (prof.family != ProfileFamily::Tabulated) {
            MilnorReport m = milnor_classify(family_curvature_samples(prof));
            j["milnor"] = {{"type", std::string(to_string(m.type))}, {"q_min", m.q_min}, {"q_max", m.q_max}};
            t += fmt::format("  Milnor (curvature decay): {} (q = -K r^2 log r in [{:.4g}, {:.4g}])\n", to_string(m.type),
                             m.q_min, m.q_max);
        }
        j["classification"] = std::string(to_string(a.type));
        t += fmt::format("classification: {}\n", to_string(a.type));
        if (!plot.empty()) {
            std::string csv = "r_lo,r_hi,integral\n";
            for (const auto& w : a.trace) csv += fmt::format("{:.12g},{:.12g},{:.12g}\n", w.r_lo, w.r_hi, w.integral);
            write_file(plot, csv);
        }
    }
    emit(c, c.format == "structured" ? j.dump(2) + "\n" : t);
    return kOk;
}

EvaluableMap map_from_flags(const std::string& name, int n, double alpha) {
    if (name == "sphere-wrap") return EvaluableMap::sphere_wrap();
    if (name == "f0") return EvaluableMap::f0();
    if (name == "fn") return EvaluableMap::join_map(n);
    if (name == "torus-collapse") return EvaluableMap::torus_collapse(n);
    if (name == "identity") return EvaluableMap::identity(n);
    if (name == "constant") return EvaluableMap::constant(n);
    if (name == "radial-stretch") return EvaluableMap::radial_stretch(alpha);
    throw InvalidArgument(fmt::format("unknown map '{}'", name));
}

int cmd_map(const std::string& name, const std::string& radii_s, double step, double lip_step, double alpha,
            const std::string& plot, const Common& c) {
    const int n = c.n.value_or(name == "fn" ? 3 : (name == "torus-collapse" ? 1 : 2));
    EvaluableMap m = map_from_flags(name, n, alpha);
    const int dim = m.domain_dim();
    std::vector<double> radii = radii_s.empty() ? std::vector<double>{} : parse_list(radii_s);
    if (radii.empty()) {
        if (dim == 2) radii = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
        else radii = {5, 10, 20};
    }
    if (step <= 0) step = dim == 2 ? 0.1 : 0.5;
    DegreeReport rep = asymptotic_degree(m, radii, step);

    if (m.tag() != MapTag::F0) {
        Box region{std::vector<double>(dim, -2.0), std::vector<double>(dim, 2.0)};
        if (m.tag() == MapTag::SphereWrap) region = {{-2, -10}, {6, 10}};
        if (lip_step <= 0) lip_step = dim == 2 ? 1e-2 : 5e-2;
        rep.lipschitz = estimate_lipschitz(m, region, lip_step).value;
    }
    if (m.tag() == MapTag::SphereWrap) rep.jacobian_floor = jacobian_floor(m, strip_set(-2, 1, 1, 20), 100000);
    std::optional<QrReport> qr;
    if (dim == 2 && m.tag() != MapTag::Constant && m.tag() != MapTag::F0) {
        Box b = m.tag() == MapTag::SphereWrap ? Box{{-2, -5}, {6, 5}} : Box{{-2, -2}, {2, 2}};
        qr = quasiregularity_ratio(m, grid_samples(b, 100));
        rep.qr_ratio = qr->sup;
    }

    ojson j;
    j["map"] = rep.map;
    j["step"] = rep.step;
    j["samples"] = rep.samples;
    j["masked"] = rep.masked;
    auto& rows = j["degree"] = ojson::array();
    for (std::size_t i = 0; i < rep.radii.size(); ++i) rows.push_back({{"R", rep.radii[i]}, {"normalized", rep.normalized[i]}});
    j["trend_slope"] = rep.trend_slope();
    if (rep.lipschitz) j["lipschitz"] = *rep.lipschitz;
    if (rep.jacobian_floor) j["jacobian_floor"] = *rep.jacobian_floor;
    if (qr) j["quasiregularity"] = {{"sup", qr->sup}, {"diverged", qr->diverged}, {"nonpositive_fraction", qr->nonpositive_fraction}};
    j["warnings"] = rep.warnings;

    std::string t = fmt::format("{}: midpoint step {}, {} samples ({} on seams, a.e. sampled)\n", rep.map, rep.step,
                                rep.samples, rep.masked);
    t += "  R  R^-n * integral of Jf\n";
    for (std::size_t i = 0; i < rep.radii.size(); ++i) t += fmt::format("  {:<6g} {:.6f}\n", rep.radii[i], rep.normalized[i]);
    t += fmt::format("  trend slope: {:.3e}\n", rep.trend_slope());
    if (rep.lipschitz) t += fmt::format("  Lipschitz estimate: {:.6f}\n", *rep.lipschitz);
    if (rep.jacobian_floor) t += fmt::format("  Jacobian floor on the strip set: {:.6f}\n", *rep.jacobian_floor);
    if (qr) t += fmt::format("  quasiregularity ratio: {:.4g}{}\n", qr->sup, qr->diverged ? " (diverged)" : "");
    for (const auto& w : rep.warnings) t += "  warning: " + w + "\n";
    if (!plot.empty()) write_file(plot, rep.delimited());
    emit(c, c.format == "structured" ? j.dump(2) + "\n" : t);
    return kOk;
}

int cmd_corpus(const std::string& dir, const std::string& golden, const std::string& write_golden,
               const std::string& report_dir, const Common& c) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".descriptor") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InvalidArgument(fmt::format("no .descriptor files in '{}'", dir));
    BatteryOptions opt;
    opt.search = search_options(c);
    std::string table = verdict_header();
    for (const auto& f : files) {
        BatteryReport r = run_battery(load_descriptor(f.string()), opt);
        table += verdict_row(r);
        if (!report_dir.empty()) {
            fs::create_directories(report_dir);
            write_file((fs::path(report_dir) / (f.stem().string() + ".json")).string(), render_structured(r));
        }
    }
    if (!write_golden.empty()) write_file(write_golden, table);
    emit(c, table);
    if (!golden.empty()) {
        std::ifstream g(golden);
        if (!g) throw InvalidArgument(fmt::format("cannot open '{}'", golden));
        std::stringstream ss;
        ss << g.rdbuf();
        if (ss.str() != table) {
            std::cerr << "verdict table differs from " << golden << "\n";
            return kExcluded;
        }
        std::cerr << "verdict table matches " << golden << "\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Obstructions and constructions for elliptic manifolds"};
    app.require_subcommand(1);
    Common common;

    std::string path;
    bool no_search = false;
    auto* check = app.add_subcommand("check", "run the obstruction battery on a descriptor");
    check->add_option("descriptor", path)->required();
    check->add_flag("--no-search", no_search, "skip the embedding search");
    add_common(check, common, true);

    auto* embed = app.add_subcommand("embed", "search for an embedding of H*(M) into Lambda R^n");
    embed->add_option("descriptor", path)->required();
    add_common(embed, common, true);

    std::string brackets;
    int dim = 0;
    bool presentation = false;
    auto* lie = app.add_subcommand("lie", "nilpotent Lie algebra data and pi1 verdict");
    lie->add_option("descriptor", path, "descriptor with a pi1 lie block");
    lie->add_option("--brackets", brackets, "JSON list of [i, j, k, c]");
    lie->add_option("--dim", dim, "Lie algebra dimension");
    lie->add_flag("--presentation", presentation, "print a presentation of the Lie algebra cohomology ring");
    add_common(lie, common, true);

    std::string family = "euclidean", samples, plot;
    double epsilon = 0;
    int nodule_dim = 0;
    auto* surface = app.add_subcommand("surface", "classify rotationally symmetric surfaces");
    surface->add_option("--family", family)->check(
        CLI::IsMember({"euclidean", "hyperbolic", "power-log", "inverse-square", "spiky"}));
    surface->add_option("--epsilon", epsilon, "power-log exponent offset");
    surface->add_option("--samples", samples, "file of 'r,L' circumference samples");
    surface->add_option("--nodules", nodule_dim, "print the nodule profile table for this dimension");
    surface->add_option("--plot", plot, "write delimited plot data");
    add_common(surface, common, false);

    std::string map_name = "sphere-wrap", radii;
    double step = 0, lip_step = 0, alpha = 0.5;
    auto* map = app.add_subcommand("map", "verify a wrapping map numerically");
    map->add_option("--map", map_name)->check(
        CLI::IsMember({"sphere-wrap", "f0", "fn", "torus-collapse", "identity", "constant", "radial-stretch"}));
    map->add_option("--radii", radii, "comma-separated radii");
    map->add_option("--step", step, "quadrature step");
    map->add_option("--lipschitz-step", lip_step, "grid step for the Lipschitz estimate");
    map->add_option("--alpha", alpha, "exponent for radial-stretch");
    map->add_option("--plot", plot, "write R,normalized rows");
    add_common(map, common, true);

    std::string dir = "corpus", golden, write_golden, report_dir;
    auto* corpus = app.add_subcommand("corpus", "run the battery over a descriptor directory");
    corpus->add_option("dir", dir);
    corpus->add_option("--golden", golden, "compare the verdict table with this file");
    corpus->add_option("--write-golden", write_golden, "write the verdict table to this file");
    corpus->add_option("--reports", report_dir, "write one structured report per descriptor here");
    add_common(corpus, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*check) return cmd_check(path, common, no_search);
        if (*embed) return cmd_embed(path, common);
        if (*lie) return cmd_lie(path, brackets, dim, common, presentation);
        if (*surface) return cmd_surface(family, epsilon, samples, nodule_dim, plot, common);
        if (*map) return cmd_map(map_name, radii, step, lip_step, alpha, plot, common);
        if (*corpus) return cmd_corpus(dir, golden, write_golden, report_dir, common);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
