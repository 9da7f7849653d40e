#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rediv/fixtures.hpp"
#include "rediv/instance_io.hpp"
#include "rediv/metrics.hpp"
#include "rediv/svg.hpp"

using namespace rediv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitGuarantee = 3;

std::pair<long, long> parse_ratio(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw SchemaError("--r expects \"p/q\"");
    long p = std::stol(s.substr(0, slash));
    long q = std::stol(s.substr(slash + 1));
    return {p, q};
}

// completion of the instance's initial allocation, in input order
CompletionResult run_completion(const Instance& inst) {
    std::vector<const Agent*> olds;
    for (const Agent& a : inst.agents)
        if (a.is_old) olds.push_back(&a);
    switch (inst.mode) {
        case Mode::interval: {
            std::vector<Interval> ps;
            for (const Agent* a : olds) ps.push_back(std::get<Interval>(*a->old_piece));
            return complete_interval(std::get<Interval>(inst.cake), ps);
        }
        case Mode::rectangle: {
            std::vector<Rect> ps;
            for (const Agent* a : olds) ps.push_back(std::get<Rect>(*a->old_piece));
            return complete_rectangle(std::get<Rect>(inst.cake), ps);
        }
        case Mode::rectilinear: {
            std::vector<Rect> ps;
            for (const Agent* a : olds) ps.push_back(std::get<Rect>(*a->old_piece));
            return complete_rectilinear(std::get<RectilinearPolygon>(inst.cake), ps);
        }
        case Mode::convex: {
            std::vector<ConvexPolygon> ps;
            for (const Agent* a : olds) {
                if (const Rect* r = std::get_if<Rect>(&*a->old_piece))
                    ps.push_back(rect_to_polygon(*r));
                else
                    ps.push_back(std::get<ConvexPolygon>(*a->old_piece));
            }
            return complete_convex(std::get<ConvexPolygon>(inst.cake), ps);
        }
        default:
            throw Error("completion needs a geometric mode");
    }
}

std::string svg_of_allocation(const Instance& inst, const Allocation& alloc,
                              const std::vector<PieceRegion>& blanks) {
    std::vector<SvgLayer> layers;
    for (const Agent& a : inst.agents) {
        const PieceRegion* p = alloc.piece_of(a.id);
        if (p) layers.push_back({*p, "a" + std::to_string(a.id), false});
    }
    for (const PieceRegion& b : blanks) layers.push_back({b, "", true});
    return render_svg(inst.cake, layers);
}

// mode guarantees; convex cuts come from bisection so normalized values get
// a 1e-9 absolute slack there
bool verify_redivision(const Instance& inst, const RedivideResult& rr,
                       FairnessReport& rep_out) {
    Q slack = inst.mode == Mode::convex ? q(1, 1000000000) : Q(0);
    rep_out = fairness_report(inst, rr.allocation, rr.b, rr.log, slack);
    int n = inst.n(), m = inst.m();
    Q guarantee = q(1, n + 2 * m + rr.b - 1);
    for (const auto& [id, norm] : rep_out.normalized)
        if (norm + slack < guarantee) return false;
    for (const GradualRow& row : rep_out.gradual)
        if (!row.ok) return false;
    return true;
}

int cmd_redivide(const std::string& instance_path, const std::string& mode_override,
                 const std::string& out, const std::string& report, const std::string& svg) {
    Instance inst = read_instance(instance_path);
    if (!mode_override.empty()) {
        inst.mode = mode_from_name(mode_override);
        inst.validate();
    }
    RedivideResult rr = redivide(inst);
    validate_allocation(inst, rr.allocation);
    FairnessReport rep;
    bool ok = verify_redivision(inst, rr, rep);
    if (!out.empty()) write_json(allocation_to_json(inst, rr.allocation), out);
    if (!report.empty()) write_json(report_to_json(rep), report);
    if (!svg.empty()) {
        std::vector<PieceRegion> blanks(rr.islands.end() - rr.b, rr.islands.end());
        write_svg(svg_of_allocation(inst, rr.allocation, blanks), svg);
    }
    if (!ok) {
        std::cerr << "redivision guarantees failed verification\n";
        return kExitGuarantee;
    }
    return kExitOk;
}

int cmd_exchange(const std::string& instance_path, const std::string& ratio,
                 const std::string& out, const std::string& report) {
    Instance inst = read_instance(instance_path);
    auto [p, qq] = parse_ratio(ratio);
    ExchangeResult ex = exchange_redivide(inst, p, qq);
    validate_allocation(inst, ex.allocation);
    // exact verification of r-proportionality and (1-r)-retention
    Q r = q(p, qq);
    bool ok = true;
    for (const Agent& a : inst.agents) {
        const PieceRegion* piece = ex.allocation.piece_of(a.id);
        Q v = piece ? eval_raw(a.valuation, *piece) : Q(0);
        const PieceRegion* y = nullptr;
        if (auto it = ex.proportional.find(a.id); it != ex.proportional.end()) y = &it->second;
        Q vy = y ? eval_raw(a.valuation, *y) : Q(0);
        Q vz = a.old_piece ? eval_raw(a.valuation, *a.old_piece) : Q(0);
        if (v < r * vy + (1 - r) * vz) ok = false;
        if (v * inst.n() < r * a.valuation.total) ok = false;
    }
    if (!out.empty()) write_json(allocation_to_json(inst, ex.allocation), out);
    if (!report.empty()) {
        FairnessReport rep = fairness_report(inst, ex.allocation, 0, ex.log);
        write_json(report_to_json(rep), report);
    }
    if (!ok) {
        std::cerr << "exchange guarantees failed verification\n";
        return kExitGuarantee;
    }
    return kExitOk;
}

int cmd_complete(const std::string& instance_path, const std::string& out,
                 const std::string& svg) {
    Instance inst = read_instance(instance_path);
    CompletionResult res = run_completion(inst);
    if (!out.empty()) write_json(completion_to_json(res), out);
    if (!svg.empty()) {
        std::vector<SvgLayer> layers;
        for (size_t i = 0; i < res.expanded.size(); ++i)
            layers.push_back({res.expanded[i], "z" + std::to_string(i), false});
        for (const PieceRegion& b : res.blanks) layers.push_back({b, "", true});
        write_svg(render_svg(inst.cake, layers), svg);
    }
    std::cout << "b=" << res.b << "\n";
    return kExitOk;
}

int cmd_pof(const std::string& mode_s, const std::string& welfare, int n, int count, int grid,
            std::uint64_t seed, const std::string& ratio, const std::string& out) {
    Mode mode = mode_from_name(mode_s);
    Welfare kind = welfare == "nash" ? Welfare::nash : Welfare::utilitarian;
    std::ofstream csv;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        csv.open(out);
        if (!csv) throw Error("cannot write " + out);
        os = &csv;
    }
    *os << "n,mode,welfare,U,W,ratio,bound,within_bound\n";
    bool all_ok = true;
    for (int i = 0; i < count; ++i) {
        Instance base = random_instance(mode, n, 0, seed + i, grid);
        PofResult r;
        if (mode == Mode::unrestricted) {
            auto [p, qq] = parse_ratio(ratio);
            r = pof_unrestricted(base, p, qq);
        } else {
            r = pof_geometric(base, kind, grid);
        }
        all_ok &= r.within_bound;
        *os << r.n << "," << mode_name(r.mode) << ","
            << (r.kind == Welfare::nash ? "nash" : "utilitarian") << "," << to_double(r.optimal)
            << "," << to_double(r.fair) << "," << r.ratio << "," << r.bound << ","
            << (r.within_bound ? 1 : 0) << "\n";
    }
    if (!all_ok) {
        std::cerr << "a price-of-fairness bound failed\n";
        return kExitGuarantee;
    }
    return kExitOk;
}

Instance tiling_instance(const Tiling& t, Mode mode) {
    Instance inst;
    inst.mode = mode;
    inst.cake = t.cake;
    Rect bb = piece_bbox(t.cake);
    for (size_t i = 0; i < t.pieces.size(); ++i) {
        Agent a;
        a.id = static_cast<int>(i);
        a.is_old = true;
        a.old_piece = t.pieces[i];
        Density2D d;
        d.xs = {bb.xlo, bb.xhi};
        d.ys = {bb.ylo, bb.yhi};
        d.cells = {{Q(1)}};
        a.valuation = Valuation::over(std::move(d), inst.cake);
        inst.agents.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

int cmd_fixture(const std::string& kind, int n, int m, int k, int R, int rows, int size,
                std::uint64_t seed, int grid, const std::string& mode_s,
                const std::string& out) {
    Instance inst;
    if (kind == "gaps") {
        inst = gaps_instance(n, k);
    } else if (kind == "staircase") {
        inst = staircase_instance(n, R);
    } else if (kind == "archipelago_tight") {
        ArchipelagoFixture fx = archipelago_tight(n, m);
        inst.mode = Mode::unrestricted;
        inst.cake = Interval{0, Q(2 * m - 1)};
        inst.agents = std::move(fx.agents);
    } else if (kind == "pinwheel") {
        inst = tiling_instance(tiling_pinwheel(), Mode::rectangle);
    } else if (kind == "diagonal_squares") {
        inst = tiling_instance(tiling_diagonal_squares(size), Mode::rectangle);
    } else if (kind == "honeycomb") {
        inst = tiling_instance(tiling_honeycomb(rows), Mode::convex);
    } else if (kind == "pipe") {
        inst = tiling_instance(tiling_rectilinear_pipe(size, R), Mode::rectilinear);
    } else if (kind == "random") {
        inst = random_instance(mode_from_name(mode_s), n, m, seed, grid);
    } else {
        throw SchemaError("unknown fixture kind: " + kind);
    }
    write_instance(inst, out);
    return kExitOk;
}

int cmd_render(const std::string& instance_path, const std::string& alloc_path,
               const std::string& svg) {
    Instance inst = read_instance(instance_path);
    std::vector<SvgLayer> layers;
    if (!alloc_path.empty()) {
        Allocation alloc = allocation_from_json(read_json(alloc_path));
        validate_allocation(inst, alloc);
        for (const Agent& a : inst.agents) {
            const PieceRegion* p = alloc.piece_of(a.id);
            if (p) layers.push_back({*p, "a" + std::to_string(a.id), false});
        }
    } else {
        for (const Agent& a : inst.agents)
            if (a.old_piece)
                layers.push_back({*a.old_piece, "z" + std::to_string(a.id), false});
    }
    write_svg(render_svg(inst.cake, layers), svg);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cake redivision protocols with exact fairness guarantees"};
    app.require_subcommand(1);

    std::string instance_path, mode_override, out, report, svg, ratio = "1/2";
    std::string welfare = "utilitarian", kind, mode_s = "interval", alloc_path;
    int n = 2, m = 1, k = 1, R = 4, rows = 3, size = 4, grid = 8, count = 10;
    std::uint64_t seed = 1;

    CLI::App* c_red = app.add_subcommand("redivide", "redivision with virtual agents");
    c_red->add_option("--instance", instance_path)->required();
    c_red->add_option("--mode", mode_override);
    c_red->add_option("--out", out);
    c_red->add_option("--report", report);
    c_red->add_option("--svg", svg);

    CLI::App* c_ex = app.add_subcommand("exchange", "exchange protocol, unrestricted pieces");
    c_ex->add_option("--instance", instance_path)->required();
    c_ex->add_option("--r", ratio);
    c_ex->add_option("--out", out);
    c_ex->add_option("--report", report);

    CLI::App* c_comp = app.add_subcommand("complete", "allocation completion");
    c_comp->add_option("--instance", instance_path)->required();
    c_comp->add_option("--out", out);
    c_comp->add_option("--svg", svg);

    CLI::App* c_pof = app.add_subcommand("pof", "price-of-fairness experiments");
    c_pof->add_option("--mode", mode_s);
    c_pof->add_option("--welfare", welfare);
    c_pof->add_option("--n", n);
    c_pof->add_option("--count", count);
    c_pof->add_option("--grid", grid);
    c_pof->add_option("--seed", seed);
    c_pof->add_option("--r", ratio);
    c_pof->add_option("--out", out);

    CLI::App* c_fix = app.add_subcommand("fixture", "write fixture instances");
    c_fix->add_option("--kind", kind)->required();
    c_fix->add_option("--n", n);
    c_fix->add_option("--m", m);
    c_fix->add_option("--k", k);
    c_fix->add_option("--R", R);
    c_fix->add_option("--rows", rows);
    c_fix->add_option("--size", size);
    c_fix->add_option("--seed", seed);
    c_fix->add_option("--grid", grid);
    c_fix->add_option("--mode", mode_s);
    c_fix->add_option("--out", out)->required();

    CLI::App* c_ren = app.add_subcommand("render", "SVG of an instance or allocation");
    c_ren->add_option("--instance", instance_path)->required();
    c_ren->add_option("--alloc", alloc_path);
    c_ren->add_option("--svg", svg)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_red->parsed()) return cmd_redivide(instance_path, mode_override, out, report, svg);
        if (c_ex->parsed()) return cmd_exchange(instance_path, ratio, out, report);
        if (c_comp->parsed()) return cmd_complete(instance_path, out, svg);
        if (c_pof->parsed()) return cmd_pof(mode_s, welfare, n, count, grid, seed, ratio, out);
        if (c_fix->parsed())
            return cmd_fixture(kind, n, m, k, R, rows, size, seed, grid, mode_s, out);
        if (c_ren->parsed()) return cmd_render(instance_path, alloc_path, svg);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
